# src/latticewitness/maps.py
"""Linear maps on matrix algebras via their Choi matrices.

Convention: the Choi matrix of a map L acting on M_n is
C = (id x L)[P+] with the *normalized* maximally entangled projector,
so entry C[(i,j),(p,q)] = (1/n) <j| L[|i><p|] |q> and the Choi matrix
of the identity map is P+ itself (trace 1).

Sigma-diagonal maps L = sum_w lambda_w S_w (S_w[X] = sigma_w X sigma_w)
are kept as plain coefficient vectors; their Choi matrix is
sum_w lambda_w P_w, so the coefficients are exactly its eigenvalues.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg, pauli, states


class NonPositiveMu(ValueError):
    pass


class BadParameter(ValueError):
    pass


@dataclass(eq=False)
class ChoiMap:
    choi: np.ndarray
    in_dim: int
    out_dim: int


@dataclass(eq=False)
class SigmaDiagMap:
    n: int  # qubits per party; acts on M_{2^n}
    coeffs: np.ndarray  # length 4^n, real, indexed by flat word index

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=float)
        if self.coeffs.shape != (4**self.n,):
            raise BadParameter(f"expected {4**self.n} coefficients")


@dataclass(eq=False)
class KrausSet:
    terms: list  # of (coefficient: float, operator: ndarray)


def choi_of_diag(m: SigmaDiagMap) -> ChoiMap:
    """Choi matrix sum_w lambda_w P_w of a sigma-diagonal map."""
    if m.n > 2:
        raise pauli.TooLarge("diagonal maps are materialized for n <= 2 only")
    projs = states._basis_projectors(m.n)
    C = np.tensordot(m.coeffs, projs, axes=1)
    d = 2**m.n
    return ChoiMap(C, d, d)


def choi_of_kraus(k: KrausSet, in_dim: int) -> ChoiMap:
    """Choi matrix of X -> sum_i c_i K_i X K_i^dag."""
    out_dim = k.terms[0][1].shape[0]
    plus = states.max_symmetric_vector(in_dim)
    P = np.outer(plus, plus.conj())
    C = np.zeros((in_dim * out_dim, in_dim * out_dim), dtype=complex)
    for c, K in k.terms:
        op = linalg.tensor(np.eye(in_dim), np.asarray(K, dtype=complex))
        C += c * (op @ P @ op.conj().T)
    return ChoiMap(C, in_dim, out_dim)


def apply(m: ChoiMap, X: np.ndarray) -> np.ndarray:
    """Apply the map to X by contracting against the Choi matrix."""
    X = np.asarray(X, dtype=complex)
    if X.shape != (m.in_dim, m.in_dim):
        raise linalg.DimMismatch(f"input shape {X.shape} does not match in_dim {m.in_dim}")
    T = m.choi.reshape(m.in_dim, m.out_dim, m.in_dim, m.out_dim)
    return m.in_dim * np.einsum("ip,ijpq->jq", X, T)


def extend_apply(m: ChoiMap, rho: states.DensityMatrix) -> np.ndarray:
    """(id x L)[rho] for a bipartite rho with the map acting on party 2."""
    d1, d2 = rho.dims
    if m.in_dim != d2:
        raise linalg.DimMismatch(f"map in_dim {m.in_dim} does not match party-2 dim {d2}")
    R = rho.mat.reshape(d1, d2, d1, d2)
    T = m.choi.reshape(d2, m.out_dim, d2, m.out_dim)
    out = d2 * np.einsum("aubv,ujvq->ajbq", R, T)
    return out.reshape(d1 * m.out_dim, d1 * m.out_dim)


def is_completely_positive(m: ChoiMap, tol: float = 1e-9):
    """(verdict, min Choi eigenvalue); CP iff the Choi matrix is PSD."""
    if not linalg.is_hermitian(m.choi, 1e-10):
        raise linalg.NotHermitian("Choi matrix is not Hermitian")
    low = linalg.min_eig(m.choi)
    return low >= -tol, low


@dataclass
class SeesawResult:
    """Outcome of the product-vector see-saw on a Choi matrix.

    `violated` carries a sound certificate (psi, phi, value with
    value < -1e-9); otherwise the result only says the heuristic found
    no violation ("presumed positive"), with the extremal value found.
    """

    violated: bool
    value: float
    psi: np.ndarray
    phi: np.ndarray


def _seesaw_once(T, d1, d2, rng, minimize, iters=500):
    # T = choi reshaped (d1, d2, d1, d2); extremize <psi x phi|C|psi x phi>
    psi = rng.normal(size=d1) + 1j * rng.normal(size=d1)
    psi /= np.linalg.norm(psi)
    pick = (lambda w, V: V[:, -1]) if minimize else (lambda w, V: V[:, 0])
    prev = None
    for _ in range(iters):
        Mphi = np.einsum("i,ijpq,p->jq", psi.conj(), T, psi)
        w, V = np.linalg.eigh(Mphi)
        phi = V[:, 0] if minimize else V[:, -1]
        Mpsi = np.einsum("j,ijpq,q->ip", phi.conj(), T, phi)
        w, V = np.linalg.eigh(Mpsi)
        psi = V[:, 0] if minimize else V[:, -1]
        val = float(w[0] if minimize else w[-1])
        if prev is not None and abs(val - prev) < 1e-10:
            break
        prev = val
    return val, psi, phi


def seesaw_extremum(m: ChoiMap, restarts: int = 64, seed: int = 0xC0FFEE, minimize: bool = True):
    """Best product-vector expectation value of the Choi matrix found by
    alternating eigenvector iteration with `restarts` seeded restarts.

    Restarts use independent sub-seeds; the merge is deterministic
    (extremal value, ties to the lowest sub-seed).
    """
    d1, d2 = m.in_dim, m.out_dim
    T = m.choi.reshape(d1, d2, d1, d2)
    best = None
    for i in range(restarts):
        rng = np.random.default_rng([seed, i])
        val, psi, phi = _seesaw_once(T, d1, d2, rng, minimize)
        if best is None or (val < best[0] - 1e-15 if minimize else val > best[0] + 1e-15):
            best = (val, psi, phi)
    return best


def block_positivity_seesaw(m: ChoiMap, restarts: int = 64, seed: int = 0xC0FFEE) -> SeesawResult:
    """Search for a product vector with <psi x phi|C|psi x phi> < 0.

    A violation is a sound entanglement/non-positivity certificate; the
    no-violation outcome is heuristic.
    """
    if not linalg.is_hermitian(m.choi, 1e-10):
        raise linalg.NotHermitian("Choi matrix is not Hermitian")
    val, psi, phi = seesaw_extremum(m, restarts, seed, minimize=True)
    return SeesawResult(val < -1e-9, val, psi, phi)


def product_expectation(m: ChoiMap, psi: np.ndarray, phi: np.ndarray) -> float:
    v = np.kron(psi, phi)
    return float(np.real(np.vdot(v, m.choi @ v)))


def trace_map(n: int) -> SigmaDiagMap:
    """X -> Tr(X) 1 on M_{2^n}: all coefficients 1/2^n."""
    return SigmaDiagMap(n, np.full(4**n, 1.0 / 2**n))


def transposition_map(n: int) -> SigmaDiagMap:
    """Transposition on M_{2^n}: coefficients prod_i eps_{mu_i} / 2^n,
    eps = (1,1,-1,1)."""
    eps = np.array([1.0, 1.0, -1.0, 1.0])
    coeffs = np.ones(1)
    for _ in range(n):
        coeffs = np.kron(coeffs, eps)
    return SigmaDiagMap(n, coeffs / 2**n)


def reduction_map(d: int) -> ChoiMap:
    """X -> Tr(X) 1 - X on M_d; Choi matrix (1 - d P+)/d."""
    if d < 2:
        raise BadParameter("d must be at least 2")
    plus = states.max_symmetric_vector(d)
    C = np.eye(d * d, dtype=complex) / d - np.outer(plus, plus.conj())
    return ChoiMap(C, d, d)


def gamma_map(t: float) -> SigmaDiagMap:
    """The one-parameter positive diagonal family on M_4 (t >= 0)."""
    if t < 0:
        raise BadParameter("t must be nonnegative")
    e = np.exp(-4.0 * t)
    a = (1 + 3 * e) / 4
    b = (1 - e) / 4
    cpl = (3 + e) / 4
    eps = np.array([1.0, 1.0, -1.0, 1.0])
    coeffs = np.zeros(16)
    coeffs[0] = a * cpl  # word (0,0)
    for i in range(1, 4):
        coeffs[i] = eps[i] * a * b  # words (0,i)
        coeffs[4 * i] = b * cpl  # words (i,0)
    return SigmaDiagMap(2, coeffs)


def phi_v_map(v_col, v_row) -> ChoiMap:
    """The map Tr - T - V^dag . V on M_4 built from an antisymmetric V.

    V = sum_{a != 2} v_col[a] sigma_(a,2) + sum_{b != 2} v_row[b] sigma_(2,b);
    the six coefficients (indexed 0,1,3; entry 2 ignored) must satisfy
    sum |v|^2 = 1.
    """
    v_col = np.asarray(v_col, dtype=complex)
    v_row = np.asarray(v_row, dtype=complex)
    total = sum(abs(v_col[a]) ** 2 for a in (0, 1, 3)) + sum(abs(v_row[b]) ** 2 for b in (0, 1, 3))
    if abs(total - 1.0) > 1e-10:
        raise BadParameter("coefficients must satisfy sum |v|^2 = 1")
    V = np.zeros((4, 4), dtype=complex)
    for a in (0, 1, 3):
        V += v_col[a] * pauli.word_matrix((a, 2))
        V += v_row[a] * pauli.word_matrix((2, a))
    tr = choi_of_diag(trace_map(2)).choi
    tp = choi_of_diag(transposition_map(2)).choi
    sand = choi_of_kraus(KrausSet([(1.0, V.conj().T)]), 4).choi
    return ChoiMap(tr - tp - sand, 4, 4)


def named_map(name: str, **params):
    """Dispatcher for the named maps used in examples and the CLI."""
    if name == "trace_d":
        d = params.get("d", 4)
        n = {2: 1, 4: 2}.get(d)
        if n is None:
            raise BadParameter("trace_d supports d in {2, 4}")
        return trace_map(n)
    if name == "transposition_2":
        return transposition_map(1)
    if name == "transposition_4":
        return transposition_map(2)
    if name == "reduction_d":
        return reduction_map(params.get("d", 3))
    if name == "gamma_t":
        return gamma_map(params["t"])
    if name == "phi_v":
        return phi_v_map(params["v_col"], params["v_row"])
    raise BadParameter(f"unknown map name {name!r}")


def coefficient_matrix(m: ChoiMap) -> np.ndarray:
    """Full coefficient matrix lambda_{w,w'} with L = sum lambda_{w,w'} S_{w,w'},
    where S_{w,w'}[X] = sigma_w X sigma_w'; equals <Psi_w|C|Psi_w'>."""
    d = m.in_dim
    n = d.bit_length() - 1
    if 2**n != d or m.out_dim != d:
        raise BadParameter("coefficient extraction needs a square qubit algebra")
    projs = states._basis_projectors(n)
    # rank-1 projectors share the basis vectors; recover them from column 0 is
    # fragile, so rebuild the basis vectors directly
    plus = states.max_symmetric_vector(d)
    vecs = []
    for w in states.words(n):
        op = linalg.tensor(np.eye(d), pauli.word_matrix(w))
        vecs.append(op @ plus)
    B = np.array(vecs)  # rows are <Psi_w|
    return B.conj() @ m.choi @ B.T


def diagonalize_map(coeff_matrix: np.ndarray, n: int) -> SigmaDiagMap:
    """Keep only the diagonal lambda_{w,w} of a full coefficient matrix."""
    coeff_matrix = np.asarray(coeff_matrix)
    if coeff_matrix.shape != (4**n, 4**n):
        raise BadParameter(f"expected a {4**n}x{4**n} coefficient matrix")
    diag = np.real(np.diag(coeff_matrix))
    return SigmaDiagMap(n, diag)


def stormer_cp_part(m: SigmaDiagMap, mu: float):
    """Write the input as mu * (trace map - cp part); returns
    (cp part coefficients as a SigmaDiagMap, all-nonnegative flag)."""
    if mu <= 0:
        raise NonPositiveMu("mu must be positive")
    cp = 1.0 / 2**m.n - m.coeffs / mu
    return SigmaDiagMap(m.n, cp), bool(np.all(cp >= -1e-12))
