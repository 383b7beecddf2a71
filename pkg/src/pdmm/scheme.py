"""Executable matrix-multiplication schemes built from degree vectors.

Covers the full pipeline: choose a field and evaluation points, partition
the inputs, encode worker tasks, simulate the workers, decode the product,
and verify privacy both by rank checks and by exhaustive enumeration.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field as dc_field
from math import comb, gcd

import numpy as np

from .degrees import DegreeVectors, quadrants, validate_cat, validate_degree_table
from .field import PrimeField, element_of_order, find_field, is_prime
from .linalg import (
    FieldMatrix,
    SingularMatrixError,
    SubmatrixCheck,
    all_txt_submatrices_invertible,
    is_invertible,
    solve,
    vandermonde,
)


class SchemeError(Exception):
    """Scheme instantiation or simulation failure."""


class BudgetExceededError(SchemeError):
    """An exhaustive verification would exceed its enumeration budget."""


class SplitMix64:
    """Portable seeded generator (splitmix64); used for all scheme randomness.

    The algorithm identifier is recorded in scheme reports so fixtures can be
    reproduced independently of the host library.
    """

    MASK = (1 << 64) - 1

    def __init__(self, seed: int):
        self.state = seed & self.MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & self.MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & self.MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & self.MASK
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Uniform integer in [0, n) via rejection sampling."""
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            v = self.next_u64()
            if v < limit:
                return v % n

    def matrix(self, rows: int, cols: int, p: int) -> np.ndarray:
        return np.array(
            [[self.below(p) for _ in range(cols)] for _ in range(rows)], dtype=np.int64
        )

    def sample_distinct(self, low: int, high: int, count: int) -> list[int]:
        """count distinct integers from [low, high), order of discovery."""
        if high - low < count:
            raise ValueError("range too small for distinct sample")
        seen: set[int] = set()
        out: list[int] = []
        while len(out) < count:
            v = low + self.below(high - low)
            if v not in seen:
                seen.add(v)
                out.append(v)
        return out


@dataclass(frozen=True)
class PdmmScheme:
    """A fully instantiated scheme: degree vectors, field, evaluation points."""

    dv: DegreeVectors
    field: PrimeField
    rho: tuple[int, ...]
    gamma: tuple[int, ...]
    omega: int | None = None
    family: str | None = None
    params: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        if len(set(self.rho)) != len(self.rho) or 0 in self.rho:
            raise SchemeError("evaluation points must be distinct and nonzero")
        if len(self.rho) != len(self.gamma):
            raise SchemeError("need exactly one evaluation point per distinct degree")

    @property
    def n_workers(self) -> int:
        return len(self.rho)

    @property
    def t_privacy(self) -> int:
        return self.dv.t


@dataclass(frozen=True)
class PartitionedMatrix:
    blocks: tuple[np.ndarray, ...]
    original_rows: int
    original_cols: int
    padding: int
    axis: int  # 0: row-partitioned (A), 1: column-partitioned (B)


@dataclass(frozen=True)
class TaskPair:
    a_share: np.ndarray
    b_share: np.ndarray
    worker: int


@dataclass(frozen=True)
class Randomness:
    r_mats: tuple[np.ndarray, ...]
    s_mats: tuple[np.ndarray, ...]
    seed: int
    algorithm: str = "splitmix64"


def instantiate_cat(dv: DegreeVectors, min_p: int = 0, params: dict | None = None) -> PdmmScheme:
    """Scheme over the smallest admissible field, with consecutive powers of
    an order-q element as evaluation points."""
    report = validate_cat(dv)
    if not report.valid:
        raise SchemeError(f"degree table fails cyclic validation: {report.flags}")
    q = dv.modulus
    fld = find_field(q, min_p)
    omega = element_of_order(fld, q)
    qs = quadrants(dv)
    rho = tuple(pow(omega, w, fld.p) for w in range(qs.n_unique))
    return PdmmScheme(
        dv, fld, rho, qs.gamma, omega=omega, family="catx", params=dict(params or {})
    )


def _is_gasp_small_or_big(dv: DegreeVectors) -> bool:
    from .degrees import construct_gasp_r

    big_k, big_l, big_t = dv.k, dv.l, dv.t
    if big_k < big_l:
        return False
    for r in {1, min(big_k, big_t)}:
        if dv == construct_gasp_r(big_k, big_l, big_t, r):
            return True
    return False


def _next_prime(n: int) -> int:
    while not is_prime(n):
        n += 1
    return n


def instantiate_degree_table(
    dv: DegreeVectors,
    strategy: str = "random_search",
    seed: int = 0,
    min_p: int = 0,
    family: str | None = None,
    params: dict | None = None,
    submatrix_budget: int = 100_000,
) -> PdmmScheme:
    """Choose a field and evaluation points for an integer degree table.

    'roots_of_unity' applies only to the GASP small/big shapes: q is the
    smallest value above the largest table entry with gcd(q, K) = 1 (the
    coprimality is needed only for the small shape, where the mask degrees
    step by K) and the points are consecutive powers of an order-q element.
    'random_search' samples distinct nonzero points over growing primes and
    accepts only fully verified schemes.
    """
    report = validate_degree_table(dv)
    if not report.valid:
        raise SchemeError(f"degree table fails validation: {report.flags}")
    qs = quadrants(dv)
    n = qs.n_unique
    meta = dict(params or {})

    if strategy == "roots_of_unity":
        if not _is_gasp_small_or_big(dv):
            raise SchemeError(
                "roots_of_unity strategy only covers the GASP small/big shapes"
            )
        q = max(qs.gamma) + 1
        step_a = dv.alpha_s[1] - dv.alpha_s[0] if dv.t > 1 else 1
        step_b = dv.beta_s[1] - dv.beta_s[0] if dv.t > 1 else 1
        while gcd(q, step_a) != 1 or gcd(q, step_b) != 1:
            q += 1
        fld = find_field(q, min_p)
        omega = element_of_order(fld, q)
        rho = tuple(pow(omega, w, fld.p) for w in range(n))
        meta["strategy"] = "roots_of_unity"
        meta["q"] = q
        return PdmmScheme(dv, fld, rho, qs.gamma, omega=omega, family=family, params=meta)

    if strategy != "random_search":
        raise SchemeError(f"unknown instantiation strategy: {strategy}")

    rng = SplitMix64(seed)
    p = _next_prime(max(n + 1, min_p, 2))
    attempted: list[int] = []
    # A random point set passes whp once p is large relative to the number of
    # T x T submatrices, so keep doubling until well past that threshold.
    for _ in range(24):
        fld = PrimeField.of(p)
        attempted.append(p)
        for _ in range(32):
            rho = tuple(rng.sample_distinct(1, p, n))
            ok_a = all_txt_submatrices_invertible(
                vandermonde(rho, dv.alpha_s, fld), dv.t, submatrix_budget, seed
            )
            if not ok_a.ok:
                continue
            ok_b = all_txt_submatrices_invertible(
                vandermonde(rho, dv.beta_s, fld), dv.t, submatrix_budget, seed
            )
            if not ok_b.ok:
                continue
            if is_invertible(vandermonde(rho, qs.gamma, fld)):
                meta["strategy"] = "random_search"
                meta["seed"] = seed
                meta["rng"] = "splitmix64"
                return PdmmScheme(dv, fld, rho, qs.gamma, family=family, params=meta)
        p = _next_prime(2 * p)
    raise SchemeError(f"instantiation failed; attempted primes {attempted}")


# -- partitioning ----------------------------------------------------------


def partition_a(a: np.ndarray, big_k: int) -> PartitionedMatrix:
    a = np.asarray(a, dtype=np.int64)
    if a.ndim != 2 or a.size == 0:
        raise SchemeError("A must be a non-empty 2-D matrix")
    rows = a.shape[0]
    padding = (-rows) % big_k
    if padding:
        a = np.concatenate([a, np.zeros((padding, a.shape[1]), dtype=np.int64)])
    blocks = tuple(np.ascontiguousarray(b) for b in np.split(a, big_k, axis=0))
    return PartitionedMatrix(blocks, rows, a.shape[1], padding, axis=0)


def partition_b(b: np.ndarray, big_l: int) -> PartitionedMatrix:
    b = np.asarray(b, dtype=np.int64)
    if b.ndim != 2 or b.size == 0:
        raise SchemeError("B must be a non-empty 2-D matrix")
    cols = b.shape[1]
    padding = (-cols) % big_l
    if padding:
        b = np.concatenate([b, np.zeros((b.shape[0], padding), dtype=np.int64)], axis=1)
    blocks = tuple(np.ascontiguousarray(blk) for blk in np.split(b, big_l, axis=1))
    return PartitionedMatrix(blocks, b.shape[0], cols, padding, axis=1)


def draw_randomness(scheme: PdmmScheme, a_shape, b_shape, seed: int) -> Randomness:
    rng = SplitMix64(seed)
    p = scheme.field.p
    t = scheme.t_privacy
    r_mats = tuple(rng.matrix(a_shape[0], a_shape[1], p) for _ in range(t))
    s_mats = tuple(rng.matrix(b_shape[0], b_shape[1], p) for _ in range(t))
    return Randomness(r_mats, s_mats, seed)


def encode(
    scheme: PdmmScheme,
    a_parts: PartitionedMatrix,
    b_parts: PartitionedMatrix,
    rnd: Randomness,
) -> list[TaskPair]:
    """Evaluate the two encoding polynomials at every worker's point."""
    dv = scheme.dv
    p = scheme.field.p
    a_shape = a_parts.blocks[0].shape
    b_shape = b_parts.blocks[0].shape
    if len(a_parts.blocks) != dv.k or len(b_parts.blocks) != dv.l:
        raise SchemeError("partition block counts do not match (K, L)")
    if any(r.shape != a_shape for r in rnd.r_mats) or any(
        s.shape != b_shape for s in rnd.s_mats
    ):
        raise SchemeError("randomness shapes do not match block shapes")
    tasks = []
    for w, pt in enumerate(scheme.rho):
        a_share = np.zeros(a_shape, dtype=np.int64)
        for block, e in zip(a_parts.blocks, dv.alpha_p):
            a_share = (a_share + block * pow(pt, e, p)) % p
        for block, e in zip(rnd.r_mats, dv.alpha_s):
            a_share = (a_share + block * pow(pt, e, p)) % p
        b_share = np.zeros(b_shape, dtype=np.int64)
        for block, e in zip(b_parts.blocks, dv.beta_p):
            b_share = (b_share + block * pow(pt, e, p)) % p
        for block, e in zip(rnd.s_mats, dv.beta_s):
            b_share = (b_share + block * pow(pt, e, p)) % p
        tasks.append(TaskPair(a_share, b_share, w))
    return tasks


def worker_multiply(field: PrimeField, task: TaskPair) -> np.ndarray:
    if task.a_share.shape[1] != task.b_share.shape[0]:
        raise SchemeError(
            f"inner dimensions mismatch: {task.a_share.shape} x {task.b_share.shape}"
        )
    return (task.a_share @ task.b_share) % field.p


def decode(scheme: PdmmScheme, responses: list[np.ndarray]) -> list[list[np.ndarray]]:
    """Recover the K x L grid of block products from all worker responses."""
    n = scheme.n_workers
    if len(responses) != n:
        raise SchemeError(f"expected {n} responses, got {len(responses)}")
    shape = responses[0].shape
    if any(r.shape != shape for r in responses):
        raise SchemeError("responses have inconsistent shapes")
    v = vandermonde(scheme.rho, scheme.gamma, scheme.field)
    rhs = FieldMatrix(
        np.stack([np.asarray(r, dtype=np.int64).ravel() for r in responses]),
        scheme.field,
    )
    coeffs = solve(v, rhs).data  # one shared factorization for all entries
    index = {e: i for i, e in enumerate(scheme.gamma)}
    dv = scheme.dv
    grid = []
    for a_e in dv.alpha_p:
        row = []
        for b_e in dv.beta_p:
            e = (a_e + b_e) % dv.modulus if dv.modulus is not None else a_e + b_e
            row.append(coeffs[index[e]].reshape(shape))
        grid.append(row)
    return grid


def assemble(grid, a_parts: PartitionedMatrix, b_parts: PartitionedMatrix) -> np.ndarray:
    """Stitch the grid of block products back together and drop padding."""
    full = np.concatenate(
        [np.concatenate(row, axis=1) for row in grid], axis=0
    )
    return full[: a_parts.original_rows, : b_parts.original_cols]


def multiply_via_scheme(
    scheme: PdmmScheme, a: np.ndarray, b: np.ndarray, seed: int = 0
) -> np.ndarray:
    """Full pipeline: partition, encode, simulate workers, decode, reassemble."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if a.shape[1] != b.shape[0]:
        raise SchemeError(f"inner dimensions mismatch: {a.shape} x {b.shape}")
    a_parts = partition_a(a, scheme.dv.k)
    b_parts = partition_b(b, scheme.dv.l)
    rnd = draw_randomness(scheme, a_parts.blocks[0].shape, b_parts.blocks[0].shape, seed)
    tasks = encode(scheme, a_parts, b_parts, rnd)
    responses = [worker_multiply(scheme.field, t) for t in tasks]
    grid = decode(scheme, responses)
    return assemble(grid, a_parts, b_parts)


# -- privacy verification --------------------------------------------------


@dataclass(frozen=True)
class PrivacyRankReport:
    a_check: SubmatrixCheck
    b_check: SubmatrixCheck

    @property
    def ok(self) -> bool:
        return self.a_check.ok and self.b_check.ok


def verify_privacy_rank(
    scheme: PdmmScheme, budget: int = 100_000, seed: int = 0
) -> PrivacyRankReport:
    """T x T submatrix invertibility of the two mask Vandermonde matrices."""
    a_check = all_txt_submatrices_invertible(
        vandermonde(scheme.rho, scheme.dv.alpha_s, scheme.field),
        scheme.t_privacy,
        budget,
        seed,
    )
    b_check = all_txt_submatrices_invertible(
        vandermonde(scheme.rho, scheme.dv.beta_s, scheme.field),
        scheme.t_privacy,
        budget,
        seed,
    )
    return PrivacyRankReport(a_check, b_check)


@dataclass(frozen=True)
class PrivacyExhaustiveReport:
    ok: bool
    subsets_checked: int
    witness: tuple | None  # (side, worker subset, data values) on failure


def _enumerate_side(
    rho, prefix_exps, suffix_exps, p, subsets
) -> tuple[bool, int, tuple | None]:
    n = len(rho)
    big_k, t = len(prefix_exps), len(suffix_exps)
    pow_pref = np.array(
        [[pow(pt, e, p) for e in prefix_exps] for pt in rho], dtype=np.int64
    )
    pow_suf = np.array(
        [[pow(pt, e, p) for e in suffix_exps] for pt in rho], dtype=np.int64
    )
    data_vals = np.array(list(itertools.product(range(p), repeat=big_k)), dtype=np.int64)
    mask_vals = np.array(list(itertools.product(range(p), repeat=t)), dtype=np.int64)
    codebase = p ** np.arange(t - 1, -1, -1, dtype=np.int64)
    full = p**t
    checked = 0
    for subset in subsets:
        rows = list(subset)
        masks = mask_vals @ pow_suf[rows].T % p  # (p^T, T) task contributions
        bases = data_vals @ pow_pref[rows].T % p  # (p^K, T)
        for i in range(bases.shape[0]):
            codes = ((bases[i] + masks) % p) @ codebase
            # Uniform over (F_p)^T iff every task tuple occurs exactly once.
            if np.unique(codes).size != full:
                return False, checked, (tuple(subset), tuple(data_vals[i]))
        checked += 1
    return True, checked, None


def verify_privacy_exhaustive(
    scheme: PdmmScheme,
    trials: str | int = "full",
    seed: int = 0,
    max_enumeration: int = 20_000_000,
) -> PrivacyExhaustiveReport:
    """Brute-force check that any T workers' tasks are uniform and data-independent.

    Requires 1x1 blocks conceptually: the enumeration treats each block as a
    single field element. trials='full' enumerates every T-subset of workers;
    an integer draws that many seeded subsets.
    """
    dv = scheme.dv
    p = scheme.field.p
    t = scheme.t_privacy
    n = scheme.n_workers
    for side_k in (dv.k, dv.l):
        if p ** (side_k + t) > max_enumeration:
            raise BudgetExceededError(
                f"p^(K+T) = {p ** (side_k + t)} exceeds budget {max_enumeration}"
            )
    if trials == "full":
        subsets = list(itertools.combinations(range(n), t))
    else:
        rng = random.Random(seed)
        subsets = [tuple(sorted(rng.sample(range(n), t))) for _ in range(int(trials))]

    ok_a, checked_a, wit_a = _enumerate_side(scheme.rho, dv.alpha_p, dv.alpha_s, p, subsets)
    if not ok_a:
        return PrivacyExhaustiveReport(False, checked_a, ("A",) + wit_a)
    ok_b, checked_b, wit_b = _enumerate_side(scheme.rho, dv.beta_p, dv.beta_s, p, subsets)
    if not ok_b:
        return PrivacyExhaustiveReport(False, checked_a + checked_b, ("B",) + wit_b)
    return PrivacyExhaustiveReport(True, checked_a + checked_b, None)


# -- serialization ---------------------------------------------------------


def scheme_to_dict(scheme: PdmmScheme) -> dict:
    dv = scheme.dv
    doc = {"family": scheme.family, "K": dv.k, "L": dv.l, "T": dv.t}
    for key in ("r", "s", "x"):
        if key in scheme.params:
            doc[key] = scheme.params[key]
    if dv.modulus is not None:
        doc["q"] = dv.modulus
    elif "q" in scheme.params:
        doc["q"] = scheme.params["q"]
    doc["p"] = scheme.field.p
    if scheme.omega is not None:
        doc["omega"] = scheme.omega
    doc["rho"] = list(scheme.rho)
    doc["alpha_p"] = list(dv.alpha_p)
    doc["alpha_s"] = list(dv.alpha_s)
    doc["beta_p"] = list(dv.beta_p)
    doc["beta_s"] = list(dv.beta_s)
    doc["N"] = scheme.n_workers
    return doc


def scheme_from_dict(doc: dict) -> PdmmScheme:
    family = doc.get("family")
    cyclic = family == "catx" or ("omega" in doc and "q" in doc and family != "gasp-small"
                                  and family != "gasp-big")
    modulus = doc["q"] if (family == "catx" and "q" in doc) else None
    dv = DegreeVectors(
        tuple(doc["alpha_p"]),
        tuple(doc["alpha_s"]),
        tuple(doc["beta_p"]),
        tuple(doc["beta_s"]),
        modulus=modulus,
    )
    fld = PrimeField.of(doc["p"])
    qs = quadrants(dv)
    params = {k: doc[k] for k in ("r", "s", "x", "q") if k in doc}
    return PdmmScheme(
        dv,
        fld,
        tuple(doc["rho"]),
        qs.gamma,
        omega=doc.get("omega"),
        family=family,
        params=params,
    )
