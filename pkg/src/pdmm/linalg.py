"""Dense exact linear algebra over a prime field.

Matrices are numpy int64 arrays reduced mod p; all elimination is exact.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from math import comb

import numpy as np

from .field import PrimeField


class SingularMatrixError(Exception):
    """Square system has no unique solution."""


@dataclass
class FieldMatrix:
    data: np.ndarray
    field: PrimeField

    def __post_init__(self):
        arr = np.asarray(self.data, dtype=np.int64)
        if arr.ndim != 2:
            raise ValueError(f"expected 2-D matrix, got shape {arr.shape}")
        self.data = arr % self.field.p

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FieldMatrix)
            and self.field.p == other.field.p
            and self.data.shape == other.data.shape
            and bool(np.array_equal(self.data, other.data))
        )


def vandermonde(points, exponents, field: PrimeField) -> FieldMatrix:
    """Generalized Vandermonde matrix M[i][j] = points[i] ** exponents[j] in F_p."""
    p = field.p
    rows = [[pow(int(pt) % p, int(e), p) for e in exponents] for pt in points]
    return FieldMatrix(np.array(rows, dtype=np.int64), field)


def _echelon(aug: np.ndarray, p: int) -> tuple[np.ndarray, int]:
    """In-place forward elimination with first-nonzero pivoting; returns rank."""
    n_rows, n_cols = aug.shape
    rank_ = 0
    for col in range(n_cols):
        if rank_ == n_rows:
            break
        nz = np.nonzero(aug[rank_:, col])[0]
        if nz.size == 0:
            continue
        pivot_row = rank_ + int(nz[0])
        if pivot_row != rank_:
            aug[[rank_, pivot_row]] = aug[[pivot_row, rank_]]
        inv = pow(int(aug[rank_, col]), p - 2, p)
        aug[rank_] = aug[rank_] * inv % p
        others = np.nonzero(aug[:, col])[0]
        others = others[others != rank_]
        if others.size:
            aug[others] = (aug[others] - np.outer(aug[others, col], aug[rank_])) % p
        rank_ += 1
    return aug, rank_


def rank(m: FieldMatrix) -> int:
    work = m.data.copy()
    _, r = _echelon(work, m.field.p)
    return r


def is_invertible(m: FieldMatrix) -> bool:
    return m.rows == m.cols and rank(m) == m.rows


def solve(m: FieldMatrix, rhs: FieldMatrix) -> FieldMatrix:
    """Solve M X = rhs by Gauss-Jordan elimination; M must be square and regular."""
    if m.rows != m.cols:
        raise SingularMatrixError(f"matrix is {m.rows}x{m.cols}, not square")
    if m.rows != rhs.rows:
        raise ValueError("rhs row count does not match matrix dimension")
    p = m.field.p
    n = m.rows
    aug = np.concatenate([m.data.copy(), rhs.data.copy()], axis=1)
    # Restrict pivot search to the coefficient columns.
    reduced, _ = _echelon_square(aug, n, p)
    return FieldMatrix(reduced[:, n:], m.field)


def _echelon_square(aug: np.ndarray, n: int, p: int) -> tuple[np.ndarray, int]:
    for col in range(n):
        nz = np.nonzero(aug[col:, col])[0]
        if nz.size == 0:
            raise SingularMatrixError(f"singular at column {col}")
        pivot_row = col + int(nz[0])
        if pivot_row != col:
            aug[[col, pivot_row]] = aug[[pivot_row, col]]
        inv = pow(int(aug[col, col]), p - 2, p)
        aug[col] = aug[col] * inv % p
        others = np.nonzero(aug[:, col])[0]
        others = others[others != col]
        if others.size:
            aug[others] = (aug[others] - np.outer(aug[others, col], aug[col])) % p
    return aug, n


@dataclass(frozen=True)
class SubmatrixCheck:
    """Outcome of the all-TxT-submatrices invertibility check.

    status is 'verified_all', 'verified_sample', or 'found_singular';
    witness holds the singular row subset when found.
    """

    status: str
    witness: tuple[int, ...] | None
    checked: int

    @property
    def ok(self) -> bool:
        return self.status in ("verified_all", "verified_sample")


def _batch_dets(subs: np.ndarray, t: int, p: int) -> np.ndarray:
    """Determinants mod p of a stack of t x t matrices (t <= 4), vectorized.

    Products are reduced pairwise so intermediates stay below p^2 < 2^63.
    """
    m = subs % p

    def mul(a, b):
        return a * b % p

    if t == 1:
        return m[:, 0, 0] % p
    if t == 2:
        return (mul(m[:, 0, 0], m[:, 1, 1]) - mul(m[:, 0, 1], m[:, 1, 0])) % p
    if t == 3:
        pos = mul(mul(m[:, 0, 0], m[:, 1, 1]), m[:, 2, 2]) \
            + mul(mul(m[:, 0, 1], m[:, 1, 2]), m[:, 2, 0]) \
            + mul(mul(m[:, 0, 2], m[:, 1, 0]), m[:, 2, 1])
        neg = mul(mul(m[:, 0, 2], m[:, 1, 1]), m[:, 2, 0]) \
            + mul(mul(m[:, 0, 0], m[:, 1, 2]), m[:, 2, 1]) \
            + mul(mul(m[:, 0, 1], m[:, 1, 0]), m[:, 2, 2])
        return (pos - neg) % p
    if t == 4:
        # Laplace expansion along the top two rows against the bottom two.
        total = np.zeros(m.shape[0], dtype=np.int64)
        cols = range(4)
        for (i, j) in itertools.combinations(cols, 2):
            k_, l_ = [c for c in cols if c not in (i, j)]
            top = (mul(m[:, 0, i], m[:, 1, j]) - mul(m[:, 0, j], m[:, 1, i])) % p
            bot = (mul(m[:, 2, k_], m[:, 3, l_]) - mul(m[:, 2, l_], m[:, 3, k_])) % p
            sign = (-1) ** (i + j + 1)  # complementary-minor sign for rows {0,1}
            total = (total + sign * mul(top, bot)) % p
        return total % p
    raise ValueError(f"t={t} not supported by the vectorized path")


def all_txt_submatrices_invertible(
    m: FieldMatrix, t: int, budget: int = 100_000, seed: int = 0
) -> SubmatrixCheck:
    """Check invertibility of every (or a seeded sample of) t-row submatrix.

    m must have exactly t columns. Exhaustive when C(rows, t) <= budget,
    otherwise a deterministic pseudorandom sample of `budget` subsets.
    """
    if m.cols != t:
        raise ValueError(f"matrix has {m.cols} columns, expected t={t}")
    n = m.rows
    p = m.field.p
    total = comb(n, t)
    exhaustive = total <= budget
    if exhaustive:
        combos = list(itertools.combinations(range(n), t))
    else:
        rng = random.Random(seed)
        combos = [tuple(sorted(rng.sample(range(n), t))) for _ in range(budget)]

    if t <= 4:
        idx = np.array(combos, dtype=np.intp)
        subs = m.data[idx]  # (n_combos, t, t)
        dets = _batch_dets(subs, t, p)
        bad = np.nonzero(dets == 0)[0]
        if bad.size:
            return SubmatrixCheck("found_singular", combos[int(bad[0])], int(bad[0]) + 1)
    else:
        for i, combo in enumerate(combos):
            sub = FieldMatrix(m.data[list(combo)], m.field)
            if rank(sub) < t:
                return SubmatrixCheck("found_singular", combo, i + 1)

    status = "verified_all" if exhaustive else "verified_sample"
    return SubmatrixCheck(status, None, len(combos))
