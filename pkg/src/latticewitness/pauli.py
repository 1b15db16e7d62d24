# src/latticewitness/pauli.py
"""Exact algebra of Pauli indices and tensor words.

Indices 0..3 label (identity, x, y, z).  A word is a tuple of indices,
one per qubit; for two qubits a word doubles as a point (alpha, beta)
of the 4x4 lattice, alpha indexing the column and beta the row.

The product/phase/commutation tables are hard-coded and verified at
import time against explicit 2x2 matrix multiplication, so a
transcription error cannot survive an import.
"""

from __future__ import annotations

import numpy as np

PauliWord = tuple
LatticePoint = tuple  # (alpha, beta)


class LengthMismatch(ValueError):
    pass


SIGMA = (
    np.array([[1, 0], [0, 1]], dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)

# sigma_a sigma_m = PRODUCT_PHASE[a][m] * sigma_{PRODUCT_INDEX[a][m]}
PRODUCT_INDEX = (
    (0, 1, 2, 3),
    (1, 0, 3, 2),
    (2, 3, 0, 1),
    (3, 2, 1, 0),
)

PRODUCT_PHASE = (
    (1, 1, 1, 1),
    (1, 1, 1j, -1j),
    (1, -1j, 1, 1j),
    (1, 1j, -1j, 1),
)

# +1 when sigma_a and sigma_g commute, -1 when they anticommute
COMMUTE_SIGN = (
    (1, 1, 1, 1),
    (1, 1, -1, -1),
    (1, -1, 1, -1),
    (1, -1, -1, 1),
)


def check_index(a) -> int:
    a = int(a)
    if not 0 <= a <= 3:
        raise ValueError(f"Pauli index out of range: {a}")
    return a


def pauli_product(a: int, m: int) -> tuple[int, complex]:
    """Index and phase of sigma_a sigma_m."""
    return PRODUCT_INDEX[a][m], complex(PRODUCT_PHASE[a][m])


def commute_sign(a: int, g: int) -> int:
    return COMMUTE_SIGN[a][g]


def words_commute(p: PauliWord, q: PauliWord) -> bool:
    """True iff the tensor words commute (product of per-site signs is +1)."""
    if len(p) != len(q):
        raise LengthMismatch(f"word lengths differ: {len(p)} vs {len(q)}")
    sign = 1
    for a, g in zip(p, q):
        sign *= COMMUTE_SIGN[a][g]
    return sign == 1


class TooLarge(ValueError):
    pass


def word_matrix(p: PauliWord) -> np.ndarray:
    """Dense 2^n x 2^n matrix of the tensor word sigma_{p_1} x ... x sigma_{p_n}."""
    if len(p) > 3:
        raise TooLarge("word matrices are only materialized for n <= 3")
    out = SIGMA[check_index(p[0])]
    for a in p[1:]:
        out = np.kron(out, SIGMA[check_index(a)])
    return out


def tau(t: LatticePoint, p: LatticePoint) -> LatticePoint:
    """Lattice translation: componentwise Pauli-product index map.

    Involutive bijection of the lattice for every t.
    """
    return (PRODUCT_INDEX[t[0]][p[0]], PRODUCT_INDEX[t[1]][p[1]])


def _verify_tables() -> None:
    for a in range(4):
        for m in range(4):
            idx, phase = pauli_product(a, m)
            if not np.array_equal(SIGMA[a] @ SIGMA[m], phase * SIGMA[idx]):
                raise AssertionError(f"product table wrong at ({a},{m})")
            commutes = np.array_equal(SIGMA[a] @ SIGMA[m], SIGMA[m] @ SIGMA[a])
            if (COMMUTE_SIGN[a][m] == 1) != commutes:
                raise AssertionError(f"commutation table wrong at ({a},{m})")


_verify_tables()
