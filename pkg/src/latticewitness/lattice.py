# src/latticewitness/lattice.py
"""Combinatorics of the 4x4 lattice: subset masks, the geometric
entanglement criteria, special quadruples, uniform coverings, and the
end-to-end classifier.

A subset I of the lattice is a 16-bit mask with bit 4*beta + alpha set
for point (alpha, beta).  All criteria below are exact integer
combinatorics; numeric evidence (partial-transpose spectra) is attached
where the classification calls for it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg, pauli, states


class EmptySubset(ValueError):
    pass


class NotPpt(ValueError):
    pass


class BadCovering(ValueError):
    pass


ALL_POINTS = [(a, b) for b in range(4) for a in range(4)]


def point_bit(p) -> int:
    return 4 * p[1] + p[0]


def popcount(mask: int) -> int:
    return bin(mask & 0xFFFF).count("1")


def translate_mask(t, mask: int) -> int:
    """Image of a subset mask under the lattice translation tau_t."""
    out = 0
    for p in states.mask_points(mask):
        out |= 1 << point_bit(pauli.tau(t, p))
    return out


# The 15 special quadruples through (0,0): each is {(0,0)} plus a
# commuting triple closed under the componentwise product index map.
_Q00_TRIPLES = [
    ((0, 1), (1, 0), (1, 1)),
    ((0, 2), (2, 0), (2, 2)),
    ((0, 3), (3, 0), (3, 3)),
    ((0, 1), (2, 1), (2, 0)),
    ((0, 2), (1, 2), (1, 0)),
    ((0, 3), (1, 3), (1, 0)),
    ((0, 1), (3, 1), (3, 0)),
    ((0, 2), (3, 2), (3, 0)),
    ((0, 3), (2, 3), (2, 0)),
    ((1, 1), (2, 2), (3, 3)),
    ((1, 2), (2, 3), (3, 1)),
    ((1, 1), (2, 3), (3, 2)),
    ((1, 3), (2, 2), (3, 1)),
    ((1, 2), (2, 1), (3, 3)),
    ((1, 3), (2, 1), (3, 2)),
]


def quadruples_q00() -> list:
    """The 15 special quadruples containing (0,0), as sorted point tuples."""
    return [tuple(sorted(((0, 0),) + t)) for t in _Q00_TRIPLES]


def _build_all_quadruples():
    seen = {}
    for q in quadruples_q00():
        for t in ALL_POINTS:
            img = tuple(sorted(pauli.tau(t, p) for p in q))
            seen.setdefault(img, 0)
    return sorted(seen)


ALL_QUADRUPLES = _build_all_quadruples()
QUAD_MASKS = [sum(1 << point_bit(p) for p in q) for q in ALL_QUADRUPLES]
_Q00_MASKS = frozenset(sum(1 << point_bit(p) for p in q) for q in quadruples_q00())


def all_quadruples() -> list:
    return list(ALL_QUADRUPLES)


def is_special(points) -> bool:
    """True iff the four distinct points translate onto a quadruple
    through (0,0)."""
    pts = tuple(sorted(points))
    if len(set(pts)) != 4:
        return False
    q0 = pts[0]
    img = sum(1 << point_bit(pauli.tau(q0, p)) for p in pts)
    return img in _Q00_MASKS


def _row_col_counts(mask: int):
    rows = [popcount(mask >> (4 * b) & 0xF) for b in range(4)]
    cols = [popcount(mask >> a & 0x1111) for a in range(4)]
    return rows, cols


def _cross_count(mask: int, p) -> int:
    """Points of I on the row and column through p, p itself excluded."""
    rows, cols = _row_col_counts(mask)
    chi = mask >> point_bit(p) & 1
    return rows[p[1]] + cols[p[0]] - 2 * chi


def ppt_combinatorial(I: int) -> bool:
    """Exact PPT test: every lattice point sees at most N_I/2 subset
    points on its row plus column (the point itself excluded)."""
    n = popcount(I)
    if n == 0:
        raise EmptySubset("empty lattice subset")
    rows, cols = _row_col_counts(I)
    for a, b in ALL_POINTS:
        chi = I >> (4 * b + a) & 1
        if 2 * (rows[b] + cols[a] - 2 * chi) > n:
            return False
    return True


def entangled_one_point(I: int):
    """A point outside I whose row+column meets I exactly once, if any.

    Presence certifies entanglement of a combinatorially-PPT subset.
    """
    if not ppt_combinatorial(I):
        raise NotPpt("one-point criterion applies to PPT subsets only")
    rows, cols = _row_col_counts(I)
    for a, b in ALL_POINTS:
        if not I >> (4 * b + a) & 1 and rows[b] + cols[a] == 1:
            return (a, b)
    return None


def k_criterion(I: int):
    """Pair (mu, nu) with k_I^{mu nu} = 1, if any.

    k counts the subset points on the row and column through the pivot
    (mu+2, nu+2) (indices mod 4), the pivot itself excluded from both
    sums, irrespective of whether the pivot belongs to I.  This refines
    the one-point criterion by dropping the membership requirement.
    """
    if not ppt_combinatorial(I):
        raise NotPpt("k-criterion applies to PPT subsets only")
    rows, cols = _row_col_counts(I)
    for mu in range(4):
        c = (mu + 2) % 4
        for nu in range(4):
            r = (nu + 2) % 4
            chi = I >> (4 * r + c) & 1
            if rows[r] + cols[c] - 2 * chi == 1:
                return (mu, nu)
    return None


def special_subset_point(I: int):
    """A point of I contained in no special quadruple inside I, if any.

    Presence makes I a special subset: its lattice state is entangled.
    """
    if popcount(I) == 0:
        raise EmptySubset("empty lattice subset")
    inside = [q for q in QUAD_MASKS if q & I == q]
    for a, b in states.mask_points(I):
        bit = 1 << (4 * b + a)
        if not any(q & bit for q in inside):
            return (a, b)
    return None


@dataclass
class Covering:
    """Weighted collection of special quadruples inside a subset with
    every subset point covered the same number of times."""

    items: list  # of (quadruple point tuple, weight)
    multiplicity: int

    @property
    def total_weight(self) -> int:
        return sum(w for _, w in self.items)


def _multicover(quads_bits, nbits, bit_to_pos, M):
    """Exact search: nonnegative integer weights on the quadruples such
    that every subset point is covered exactly M times.

    Depth-first with fail-first point selection; returns a weight list
    or None.  Complete: once a point's demand is met, any quadruple
    through it becomes unusable, so all its quadruples are decided at
    the node where the point is processed.
    """
    K = len(quads_bits)
    residual = [M] * nbits
    weights = [0] * K
    quad_positions = [tuple(bit_to_pos[b] for b in qb) for qb in quads_bits]
    covers = [[] for _ in range(nbits)]
    for qi, qpos in enumerate(quad_positions):
        for pos in qpos:
            covers[pos].append(qi)

    def usable(qi):
        return all(residual[pos] > 0 for pos in quad_positions[qi])

    def pick_point():
        best = None
        for pos in range(nbits):
            if residual[pos] == 0:
                continue
            cand = [qi for qi in covers[pos] if usable(qi)]
            if not cand:
                return pos, []
            if best is None or len(cand) < len(best[1]):
                best = (pos, cand)
                if len(cand) == 1:
                    break
        return best if best is not None else (None, None)

    def fill(pos, cand, start):
        # choose a multiset of candidate quadruples covering `pos` until
        # its demand is met; index-monotone to avoid duplicate orderings
        if residual[pos] == 0:
            return solve()
        for i in range(start, len(cand)):
            qi = cand[i]
            if not usable(qi):
                continue
            for p in quad_positions[qi]:
                residual[p] -= 1
            weights[qi] += 1
            if fill(pos, cand, i):
                return True
            weights[qi] -= 1
            for p in quad_positions[qi]:
                residual[p] += 1
        return False

    def solve():
        pos, cand = pick_point()
        if pos is None:
            return True
        if not cand:
            return False
        return fill(pos, cand, 0)

    return list(weights) if solve() else None


def uniform_covering(I: int, max_multiplicity: int = 12):
    """Minimal-multiplicity uniform covering of I by special quadruples
    inside I, searched for M = 1..max_multiplicity; None if none exists
    in that range."""
    n = popcount(I)
    if n == 0:
        raise EmptySubset("empty lattice subset")
    if n < 4:
        return None
    quads = [(qm, ALL_QUADRUPLES[i]) for i, qm in enumerate(QUAD_MASKS) if qm & I == qm]
    if not quads:
        return None
    bits = [b for b in range(16) if I >> b & 1]
    bit_to_pos = {b: i for i, b in enumerate(bits)}
    quads_bits = [tuple(b for b in bits if qm >> b & 1) for qm, _ in quads]
    for M in range(1, max_multiplicity + 1):
        if (M * n) % 4:
            continue
        weights = _multicover(quads_bits, len(bits), bit_to_pos, M)
        if weights is not None:
            items = [(quads[i][1], w) for i, w in enumerate(weights) if w > 0]
            return Covering(items, M)
    return None


@dataclass
class CertificateRecord:
    """Numeric verification of a covering-based separability certificate."""

    weights: list  # of (quadruple, convex weight)
    reconstruction_error: float
    all_quadruple_states_ppt: bool


def separability_certificate(I: int, covering: Covering) -> CertificateRecord:
    """Check that the covering's convex mixture of quadruple states
    reproduces the lattice state of I."""
    n = popcount(I)
    counts = [0] * 16
    for q, w in covering.items:
        if any(not I >> point_bit(p) & 1 for p in q):
            raise BadCovering("covering quadruple leaves the subset")
        for p in q:
            counts[point_bit(p)] += w
    M = covering.multiplicity
    if any((counts[b] != 0) != bool(I >> b & 1) or (I >> b & 1 and counts[b] != M) for b in range(16)):
        raise BadCovering("covering is not uniform on the subset")
    if 4 * covering.total_weight != M * n:
        raise BadCovering("weight total violates 4 N_Q = M N_I")
    total = covering.total_weight
    mix = np.zeros((16, 16), dtype=complex)
    all_ppt = True
    for q, w in covering.items:
        rho_q = states.lattice_state(states.points_mask(q))
        mix += (w / total) * rho_q.mat
        if linalg.min_eig(linalg.partial_transpose(rho_q.mat, (4, 4), 2)) < -1e-9:
            all_ppt = False
    err = float(np.max(np.abs(mix - states.lattice_state(I).mat)))
    return CertificateRecord([(q, w / total) for q, w in covering.items], err, all_ppt)


def pt_min_eig(I: int) -> float:
    """Numeric minimum eigenvalue of the partial transpose of the
    lattice state (independent oracle for the combinatorial test)."""
    rho = states.lattice_state(I)
    return float(np.linalg.eigvalsh(linalg.partial_transpose(rho.mat, (4, 4), 2))[0])


@dataclass
class Classification:
    tag: str  # Separable | NptEntangled | PptEntangled | Unknown
    criteria_fired: list = field(default_factory=list)  # names, precedence order
    special_point: tuple = None
    one_point: tuple = None
    k_pair: tuple = None
    min_pt_eig: float = None
    covering: Covering = None
    witness_delta: float = None


def classify(I: int, max_multiplicity: int = 12, witness: bool = False, seed: int = 0xC0FFEE) -> Classification:
    """Evaluation order: combinatorial PPT, then the entanglement
    criteria (special subset, one-point, k), then covering search.  All
    firing criteria are recorded; the tag follows that precedence."""
    n = popcount(I)
    if n == 0:
        raise EmptySubset("empty lattice subset")
    if not ppt_combinatorial(I):
        return Classification("NptEntangled", ["npt"], min_pt_eig=pt_min_eig(I))
    sp = special_subset_point(I)
    op = entangled_one_point(I)
    kc = k_criterion(I)
    fired = []
    if sp is not None:
        fired.append("special_subset")
    if op is not None:
        fired.append("one_point")
    if kc is not None:
        fired.append("k_criterion")
    if fired:
        result = Classification("PptEntangled", fired, special_point=sp, one_point=op, k_pair=kc)
        if witness and sp is not None:
            from . import criteria

            result.witness_delta = criteria.max_delta(I, sp, seed=seed)
        return result
    cov = uniform_covering(I, max_multiplicity)
    if cov is not None:
        return Classification("Separable", [], covering=cov)
    return Classification("Unknown", [])


def canonical_mask(I: int):
    """Lexicographically least translate of I, with the translation."""
    best = (I, (0, 0))
    for t in ALL_POINTS:
        img = translate_mask(t, I)
        if img < best[0]:
            best = (img, t)
    return best


def translate_covering(t, cov: Covering) -> Covering:
    items = [(tuple(sorted(pauli.tau(t, p) for p in q)), w) for q, w in cov.items]
    return Covering(items, cov.multiplicity)


@dataclass
class SurveyRecord:
    mask: int
    n_points: int
    classification: Classification
    cross_check_ok: bool = None  # combinatorial PPT vs numeric PT


def _survey_range(masks, cross_validate, max_multiplicity, cov_cache):
    out = []
    for I in masks:
        cls = _classify_cached(I, max_multiplicity, cov_cache)
        rec = SurveyRecord(I, popcount(I), cls)
        if cross_validate:
            rec.cross_check_ok = ppt_combinatorial(I) == (
                (cls.min_pt_eig if cls.min_pt_eig is not None else pt_min_eig(I)) >= -1e-9
            )
        out.append(rec)
    return out


def _classify_cached(I, max_multiplicity, cov_cache):
    """classify(), with the covering search memoized per translation
    orbit (coverings map exactly under tau; the cheap criteria are
    evaluated directly)."""
    n = popcount(I)
    if not ppt_combinatorial(I):
        return Classification("NptEntangled", ["npt"], min_pt_eig=pt_min_eig(I))
    sp = special_subset_point(I)
    op = entangled_one_point(I)
    kc = k_criterion(I)
    fired = [name for name, hit in (("special_subset", sp), ("one_point", op), ("k_criterion", kc)) if hit is not None]
    if fired:
        return Classification("PptEntangled", fired, special_point=sp, one_point=op, k_pair=kc)
    canon, t = canonical_mask(I)
    if canon not in cov_cache:
        cov_cache[canon] = uniform_covering(canon, max_multiplicity)
    cov = cov_cache[canon]
    if cov is not None:
        # tau_t maps I onto canon and is involutive, so it maps back
        return Classification("Separable", [], covering=translate_covering(t, cov))
    return Classification("Unknown", [])


def survey_all(workers: int = 1, cross_validate: bool = False, max_multiplicity: int = 12):
    """Classify every nonempty subset; returns records in mask order.

    Deterministic and independent of the worker count (records are a
    pure function of the mask).
    """
    masks = range(1, 1 << 16)
    if workers <= 1:
        return _survey_range(masks, cross_validate, max_multiplicity, {})
    import multiprocessing as mp

    chunks = [list(masks)[i::workers] for i in range(workers)]
    with mp.Pool(workers) as pool:
        parts = pool.starmap(
            _survey_range, [(chunk, cross_validate, max_multiplicity, {}) for chunk in chunks]
        )
    out = [r for part in parts for r in part]
    out.sort(key=lambda r: r.mask)
    return out
