"""Entanglement criteria and witnesses.

Numeric detectors (PPT, realignment, reduction) return a uniform verdict
record; witness constructors produce Hermitian matrices that are
nonnegative on product vectors (exactly for the diagonal lattice witness
at a validated delta, heuristically for the edge witness).
"""

from dataclasses import dataclass

import numpy as np

from . import linalg, maps, states


class NonSquareParties(ValueError):
    pass


class PointNotInSubset(ValueError):
    pass


class NotPpt(ValueError):
    pass


class ZeroKernels(ValueError):
    pass


@dataclass
class CriterionVerdict:
    """Outcome of a single criterion: `evidence` is the scalar the
    detection threshold was applied to (min eigenvalue, trace norm, ...)."""

    name: str
    detected: bool
    evidence: float


@dataclass
class Witness:
    """Hermitian witness matrix with its bipartite dims and a provenance
    note ("exact" or "heuristic") describing how block positivity was
    established.  Stored unnormalized; `normalized` rescales to unit trace
    (the detection predicate sign(Tr(W rho)) is scale-invariant)."""

    mat: np.ndarray
    dims: tuple
    provenance: str = "exact"

    def normalized(self) -> "Witness":
        t = float(np.real(np.trace(self.mat)))
        return Witness(self.mat / t, self.dims, self.provenance)


def ppt_check(rho: states.DensityMatrix, tol: float = 1e-9) -> CriterionVerdict:
    """Partial-transposition test: detected iff PT over the second party
    has an eigenvalue below -tol."""
    pt = linalg.partial_transpose(rho.mat, rho.dims, which=2)
    low = linalg.min_eig(pt)
    return CriterionVerdict("ppt", low < -tol, low)


def realignment_check(rho: states.DensityMatrix) -> CriterionVerdict:
    """Realignment (CCNR) test: detected iff the trace norm of the
    reshuffled matrix exceeds 1.  Square party dimensions only."""
    if rho.dims[0] != rho.dims[1]:
        raise NonSquareParties(f"party dims differ: {rho.dims}")
    norm = linalg.trace_norm(linalg.reshuffle(rho.mat, rho.dims))
    return CriterionVerdict("realignment", norm > 1 + 1e-9, norm)


def reduction_check(rho: states.DensityMatrix) -> CriterionVerdict:
    """Reduction test: detected iff 1 x rho_B - rho or rho_A x 1 - rho
    has an eigenvalue below -1e-9; evidence is the smaller minimum."""
    d1, d2 = rho.dims
    rho_a = linalg.partial_trace(rho.mat, rho.dims, which=2)
    rho_b = linalg.partial_trace(rho.mat, rho.dims, which=1)
    low = min(
        linalg.min_eig(linalg.tensor(np.eye(d1), rho_b) - rho.mat),
        linalg.min_eig(linalg.tensor(rho_a, np.eye(d2)) - rho.mat),
    )
    return CriterionVerdict("reduction", low < -1e-9, low)


def witness_value(W: Witness, rho: states.DensityMatrix) -> float:
    """Tr(W rho); negative values certify entanglement."""
    if W.dims != rho.dims or W.mat.shape != rho.mat.shape:
        raise linalg.DimMismatch(f"witness dims {W.dims} vs state dims {rho.dims}")
    val = np.trace(W.mat @ rho.mat)
    if abs(val.imag) > 1e-12:
        raise linalg.NotHermitian("witness expectation is not real")
    return float(val.real)


def _point_coeff_index(p) -> int:
    # point (alpha, beta) <-> word (alpha, beta), flat index 4*alpha + beta
    return 4 * p[0] + p[1]


def diagonal_lattice_witness(I: int, p, delta: float) -> Witness:
    """Witness for the lattice state on subset `I` (16-bit mask): the Choi
    matrix of the diagonal map with coefficient 1/4 off I, -delta/4 at the
    point `p` in I, and 0 elsewhere.  Tr(W rho_I) = -delta/(4 N_I)."""
    pts = states.mask_points(I)
    if p not in pts:
        raise PointNotInSubset(f"{p} not in subset {I:#06x}")
    coeffs = np.full(16, 0.25)
    for q in pts:
        coeffs[_point_coeff_index(q)] = 0.0
    coeffs[_point_coeff_index(p)] = -delta / 4.0
    choi = maps.choi_of_diag(maps.SigmaDiagMap(2, coeffs))
    return Witness(choi.choi, (4, 4), "exact")


def _delta_choi(I: int, p, delta: float) -> maps.ChoiMap:
    # Choi whose product expectation equals the block-positivity margin:
    # coefficient 1 on I plus an extra delta at p.
    coeffs = np.zeros(16)
    for q in states.mask_points(I):
        coeffs[_point_coeff_index(q)] = 1.0
    coeffs[_point_coeff_index(p)] += delta
    return maps.choi_of_diag(maps.SigmaDiagMap(2, coeffs))


def delta_violation(I: int, p, delta: float, restarts: int = 64, seed: int = 0xC0FFEE):
    """Largest product expectation of the delta quantity found by see-saw.

    The witness from `diagonal_lattice_witness(I, p, delta)` is block
    positive iff this never exceeds 1; values above 1 are sound
    counterexamples, values at or below 1 are heuristic."""
    val, psi, phi = maps.seesaw_extremum(
        _delta_choi(I, p, delta), restarts=restarts, seed=seed, minimize=False
    )
    return val, psi, phi


def max_delta(I: int, p, seed: int = 0xC0FFEE, restarts: int = 64) -> float:
    """Largest delta in (0, 4], at resolution 1e-4, for which the see-saw
    finds no product vector pushing the delta quantity above 1 + 1e-9.

    An upper bound is heuristic (the see-saw may miss violations); any
    shrinkage is sound.  Returns 0 when even delta = 1e-4 is violated.
    Each see-saw maximum is affine in delta, so the search tightens by
    cutting planes before a final full-restart validation."""
    if not I >> (4 * p[1] + p[0]) & 1:
        raise PointNotInSubset(f"{p} not in subset {I:#06x}")
    base = _delta_choi(I, p, 0.0)
    point = _delta_choi(I, p, 1.0).choi - base.choi
    res = 1e-4

    def margin(delta, n):
        val, psi, phi = delta_violation(I, p, delta, restarts=n, seed=seed)
        v = np.kron(psi, phi)
        slope = float(np.real(np.vdot(v, point @ v)))
        return val, slope

    delta = 4.0
    for _ in range(32):
        val, slope = margin(delta, max(restarts // 4, 8))
        if val <= 1 + 1e-9:
            break
        cut = (1.0 - (val - slope * delta)) / slope if slope > 1e-12 else 0.0
        cut = np.floor(cut / res) * res
        if cut >= delta:
            cut = delta - res
        delta = max(cut, 0.0)
        if delta == 0.0:
            return 0.0
    while delta > 0.0:
        val, _ = margin(delta, restarts)
        if val <= 1 + 1e-9:
            return float(round(delta / res) * res)
        delta = max(np.floor((delta - res) / res) * res, 0.0)
    return 0.0


def edge_witness(delta_state: states.DensityMatrix, seed: int = 0xC0FFEE,
                 restarts: int = 64) -> Witness:
    """Non-decomposable witness a(P + Q^{T2}) - eps*1 built from a PPT
    state: P and Q project onto the kernels of the state and of its
    partial transpose, a = 1/Tr(P + Q), and eps is the heuristic see-saw
    minimum of the product expectation of a(P + Q^{T2})."""
    rho = delta_state.mat
    pt = linalg.partial_transpose(rho, delta_state.dims, which=2)
    if not linalg.is_psd(pt):
        raise NotPpt("input state has a negative partial transpose")

    def kernel_projector(M):
        vals, vecs = linalg.hermitian_eig(M)
        cols = vecs[:, vals < 1e-9]
        return cols @ cols.conj().T, cols.shape[1]

    P, kp = kernel_projector(rho)
    QT2, kq = kernel_projector(pt)
    if kp + kq == 0:
        raise ZeroKernels("state and partial transpose are both full rank")
    core = P + linalg.partial_transpose(QT2, delta_state.dims, which=2)
    a = 1.0 / float(np.real(np.trace(core)))
    cm = maps.ChoiMap(a * core, delta_state.dims[0], delta_state.dims[1])
    eps, _, _ = maps.seesaw_extremum(cm, restarts=restarts, seed=seed, minimize=True)
    return Witness(a * core - eps * np.eye(rho.shape[0]), delta_state.dims, "heuristic")
