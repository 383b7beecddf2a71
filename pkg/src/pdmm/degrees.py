"""Degree vectors for polynomial-code matrix multiplication schemes.

Constructs the four families of degree tables (GASP_r, GASP_rs, DOG_rs over
the integers; CAT_x with addition modulo q), counts their unique entries,
validates the decodability/privacy conditions, and provides the lattice
tools used to test the structural lemmas behind CAT_x.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import gcd

import numpy as np


class ParameterError(ValueError):
    """Construction parameters out of range or in the wrong order."""


@dataclass(frozen=True)
class DegreeVectors:
    """The tuple (alpha_p, alpha_s, beta_p, beta_s), optionally cyclic.

    When ``modulus`` is set, all additions in the degree table are taken
    modulo it and entries must already lie in [0, modulus).
    """

    alpha_p: tuple[int, ...]
    alpha_s: tuple[int, ...]
    beta_p: tuple[int, ...]
    beta_s: tuple[int, ...]
    modulus: int | None = None

    def __post_init__(self):
        for name in ("alpha_p", "alpha_s", "beta_p", "beta_s"):
            vec = tuple(int(v) for v in getattr(self, name))
            object.__setattr__(self, name, vec)
            if not vec:
                raise ParameterError(f"{name} must be non-empty")
            if any(v < 0 for v in vec):
                raise ParameterError(f"{name} contains a negative entry: {vec}")
            if self.modulus is not None and any(v >= self.modulus for v in vec):
                raise ParameterError(
                    f"{name} has entries >= modulus {self.modulus}: {vec}"
                )
        if self.modulus is not None and self.modulus < 1:
            raise ParameterError(f"modulus must be positive, got {self.modulus}")
        if len(self.alpha_s) != len(self.beta_s):
            raise ParameterError("alpha_s and beta_s must have equal length T")

    @property
    def k(self) -> int:
        return len(self.alpha_p)

    @property
    def l(self) -> int:
        return len(self.beta_p)

    @property
    def t(self) -> int:
        return len(self.alpha_s)


@dataclass(frozen=True)
class QuadrantSets:
    """The four sumsets of the degree table and their union."""

    tl: frozenset[int]
    tr: frozenset[int]
    bl: frozenset[int]
    br: frozenset[int]
    gamma: tuple[int, ...]
    n_unique: int


@dataclass(frozen=True)
class CatParameters:
    kappa: int
    lam: int
    k_star: int
    l_star: int
    t_bar: int
    q: int
    x: int
    y: int


@dataclass(frozen=True)
class ValidationReport:
    """Per-condition pass/fail flags with deterministic collision witnesses.

    ``witnesses`` holds (condition-or-quadrant label, colliding value) pairs
    in ascending value order.
    """

    flags: dict[str, bool]
    n_unique: int
    witnesses: tuple[tuple[str, int], ...]

    @property
    def valid(self) -> bool:
        return all(self.flags.values())


def gap(length: int, x: int, r: int) -> tuple[int, ...]:
    """Generalized arithmetic progression: r-length chains spaced x apart.

    Element i (0-based) is (i // r) * x + (i % r); a final partial chain is
    truncated.
    """
    if length < 1 or r < 1:
        raise ParameterError(f"gap requires length >= 1 and r >= 1, got {length}, {r}")
    return tuple((i // r) * x + (i % r) for i in range(length))


def kappa_lambda(big_k: int, big_l: int, big_t: int) -> tuple[int, int]:
    """Minimal non-negative shifts making K+1+kappa and L+1+lambda coprime to T-1."""
    if not big_k >= big_l >= big_t >= 2:
        raise ParameterError(f"need K >= L >= T >= 2, got ({big_k}, {big_l}, {big_t})")
    t_bar = big_t - 1
    if t_bar == 1:
        return (0, 0)
    kappa = 0
    while gcd(big_k + 1 + kappa, t_bar) != 1:
        kappa += 1
    lam = 0
    while gcd(big_l + 1 + lam, t_bar) != 1:
        lam += 1
    return (kappa, lam)


def construct_gasp_r(big_k: int, big_l: int, big_t: int, r: int) -> DegreeVectors:
    if not (big_k >= big_l >= 2 and big_t >= 2):
        raise ParameterError(f"need K >= L >= 2 and T >= 2, got ({big_k}, {big_l}, {big_t})")
    if not 1 <= r <= min(big_k, big_t):
        raise ParameterError(f"need 1 <= r <= min(K, T), got r={r}")
    kl = big_k * big_l
    return DegreeVectors(
        alpha_p=tuple(range(big_k)),
        alpha_s=tuple(kl + g for g in gap(big_t, big_k, r)),
        beta_p=tuple(big_k * i for i in range(big_l)),
        beta_s=tuple(kl + i for i in range(big_t)),
    )


def construct_gasp_rs(big_k: int, big_l: int, big_t: int, r: int, s: int) -> DegreeVectors:
    if not (big_k >= 2 and big_l >= 2 and big_t >= 2):
        raise ParameterError(f"need K, L, T >= 2, got ({big_k}, {big_l}, {big_t})")
    if not (1 <= r <= big_t and 1 <= s <= big_t):
        raise ParameterError(f"need 1 <= r, s <= T, got r={r}, s={s}")
    kl = big_k * big_l
    return DegreeVectors(
        alpha_p=tuple(range(big_k)),
        alpha_s=tuple(kl + g for g in gap(big_t, big_k, r)),
        beta_p=tuple(big_k * i for i in range(big_l)),
        beta_s=tuple(kl + g for g in gap(big_t, big_k, s)),
    )


def construct_dog_rs(big_k: int, big_l: int, big_t: int, r: int, s: int) -> DegreeVectors:
    if not (big_k >= 2 and big_l >= 2 and big_t >= 2):
        raise ParameterError(f"need K, L, T >= 2, got ({big_k}, {big_l}, {big_t})")
    if not 1 <= r <= big_t:
        raise ParameterError(f"need 1 <= r <= T, got r={r}")
    if not 1 <= s <= min(big_t, big_k + r):
        raise ParameterError(f"need 1 <= s <= min(T, K+r), got s={s}")
    stride = big_k + r
    return DegreeVectors(
        alpha_p=tuple(range(big_k)),
        alpha_s=tuple(big_k + g for g in gap(big_t, stride, r)),
        beta_p=tuple(stride * i for i in range(big_l)),
        beta_s=tuple(stride * (big_l - 1) + big_k + g for g in gap(big_t, stride, s)),
    )


def cat_parameters(big_k: int, big_l: int, big_t: int, x: int = 1) -> CatParameters:
    kappa, lam = kappa_lambda(big_k, big_l, big_t)
    k_star = big_k + 1 + kappa
    l_star = big_l + 1 + lam
    t_bar = big_t - 1
    q = k_star * l_star + t_bar * t_bar
    if gcd(x, q) != 1:
        raise ParameterError(f"x={x} is not coprime to q={q}")
    y = (-x * t_bar * pow(k_star, -1, q)) % q
    # gcd(y, q) = 1 is guaranteed structurally; assert as a sanity check.
    assert gcd(y, q) == 1
    return CatParameters(kappa, lam, k_star, l_star, t_bar, q, x, y)


def construct_cat_x(big_k: int, big_l: int, big_t: int, x: int = 1) -> DegreeVectors:
    par = cat_parameters(big_k, big_l, big_t, x)
    q, y = par.q, par.y
    return DegreeVectors(
        alpha_p=tuple((y * i) % q for i in range(big_k)),
        alpha_s=tuple((x * i + big_k * y) % q for i in range(big_t)),
        beta_p=tuple((x * i) % q for i in range(big_l)),
        beta_s=tuple((y * i - x) % q for i in range(big_t)),
        modulus=q,
    )


def _sumset(a: tuple[int, ...], b: tuple[int, ...], modulus: int | None) -> frozenset[int]:
    if modulus is None:
        return frozenset(u + v for u in a for v in b)
    return frozenset((u + v) % modulus for u in a for v in b)


def quadrants(dv: DegreeVectors) -> QuadrantSets:
    """The four sumsets TL/TR/BL/BR and the sorted union gamma."""
    tl = _sumset(dv.alpha_p, dv.beta_p, dv.modulus)
    tr = _sumset(dv.alpha_p, dv.beta_s, dv.modulus)
    bl = _sumset(dv.alpha_s, dv.beta_p, dv.modulus)
    br = _sumset(dv.alpha_s, dv.beta_s, dv.modulus)
    gamma = tuple(sorted(tl | tr | bl | br))
    return QuadrantSets(tl, tr, bl, br, gamma, len(gamma))


def count_unique(dv: DegreeVectors) -> int:
    """Number of distinct degree-table entries (= required worker count N).

    Vectorized so that parameter sweeps over large (K, L, T) stay cheap.
    """
    vecs = (
        (dv.alpha_p, dv.beta_p),
        (dv.alpha_p, dv.beta_s),
        (dv.alpha_s, dv.beta_p),
        (dv.alpha_s, dv.beta_s),
    )
    sums = np.concatenate(
        [np.add.outer(np.asarray(a), np.asarray(b)).ravel() for a, b in vecs]
    )
    if dv.modulus is not None:
        sums %= dv.modulus
    seen = np.zeros(int(sums.max()) + 1, dtype=bool)
    seen[sums] = True
    return int(seen.sum())


def n_catx_formula(big_k: int, big_l: int, big_t: int) -> int:
    """Closed-form worker count (K+1)(L+1) + (T-1)^2 + kappa + lambda."""
    kappa, lam = kappa_lambda(big_k, big_l, big_t)
    return (big_k + 1) * (big_l + 1) + (big_t - 1) ** 2 + kappa + lam


def _disjointness(qs: QuadrantSets) -> tuple[dict[str, bool], list[tuple[str, int]]]:
    flags = {}
    witnesses = []
    for label, other, name in (("IIIa", qs.tr, "TR"), ("IIIb", qs.bl, "BL"), ("IIIc", qs.br, "BR")):
        overlap = sorted(qs.tl & other)
        flags[label] = not overlap
        witnesses.extend((name, v) for v in overlap)
    return flags, witnesses


def _tl_multiset_ok(dv: DegreeVectors) -> tuple[bool, list[tuple[str, int]]]:
    counts: dict[int, int] = {}
    for a in dv.alpha_p:
        for b in dv.beta_p:
            v = (a + b) % dv.modulus if dv.modulus is not None else a + b
            counts[v] = counts.get(v, 0) + 1
    dups = sorted(v for v, c in counts.items() if c > 1)
    return not dups, [("TL", v) for v in dups]


def _no_duplicates(vec: tuple[int, ...], label: str) -> tuple[bool, list[tuple[str, int]]]:
    seen: set[int] = set()
    dups: set[int] = set()
    for v in vec:
        (dups if v in seen else seen).add(v)
    return not dups, [(label, v) for v in sorted(dups)]


def validate_degree_table(dv: DegreeVectors) -> ValidationReport:
    """Check the private-and-decodable conditions for an integer degree table."""
    if dv.modulus is not None:
        raise ParameterError("validate_degree_table expects an integer (non-cyclic) table")
    qs = quadrants(dv)
    flags = {"I": True}
    witnesses: list[tuple[str, int]] = []

    ok, wit = _tl_multiset_ok(dv)
    flags["II"] = ok
    witnesses.extend(wit)

    d_flags, d_wit = _disjointness(qs)
    flags.update(d_flags)
    witnesses.extend(d_wit)

    ok_a, wit_a = _no_duplicates(dv.alpha_p + dv.alpha_s, "alpha")
    ok_b, wit_b = _no_duplicates(dv.beta_p + dv.beta_s, "beta")
    flags["IV"] = ok_a and ok_b
    witnesses.extend(wit_a + wit_b)

    return ValidationReport(flags, qs.n_unique, tuple(witnesses))


def _is_coprime_progression(vec: tuple[int, ...], q: int) -> bool:
    """True iff vec is an arithmetic progression mod q with difference coprime to q."""
    if len(vec) == 1:
        return True
    diffs = {(b - a) % q for a, b in zip(vec, vec[1:])}
    if len(diffs) != 1:
        return False
    return gcd(diffs.pop(), q) == 1


def validate_cat(dv: DegreeVectors) -> ValidationReport:
    """Check the cyclic-addition conditions; IV via the sufficient condition
    that both suffix vectors are arithmetic progressions mod q with common
    differences coprime to q (so consecutive root-of-unity powers work) and
    q >= N."""
    if dv.modulus is None:
        raise ParameterError("validate_cat expects a cyclic table (modulus present)")
    q = dv.modulus
    qs = quadrants(dv)
    flags = {"I": True}
    witnesses: list[tuple[str, int]] = []

    ok, wit = _tl_multiset_ok(dv)
    flags["II"] = ok
    witnesses.extend(wit)

    d_flags, d_wit = _disjointness(qs)
    flags.update(d_flags)
    witnesses.extend(d_wit)

    flags["IV"] = (
        _is_coprime_progression(dv.alpha_s, q)
        and _is_coprime_progression(dv.beta_s, q)
        and q >= qs.n_unique
    )

    return ValidationReport(flags, qs.n_unique, tuple(witnesses))


def lattice_solutions(
    params: CatParameters,
    i_range: tuple[int, int],
    j_range: tuple[int, int],
) -> set[tuple[int, int]]:
    """All (i, j) in the inclusive rectangle with i*x = j*y (mod q), by enumeration."""
    q, x, y = params.q, params.x, params.y
    return {
        (i, j)
        for i in range(i_range[0], i_range[1] + 1)
        for j in range(j_range[0], j_range[1] + 1)
        if (i * x - j * y) % q == 0
    }


def lattice_span_mod_q(params: CatParameters) -> set[tuple[int, int]]:
    """The lattice generated by (-t_bar, k_star) and (l_star, t_bar), reduced mod q."""
    q = params.q
    return {
        ((-a * params.t_bar + b * params.l_star) % q, (a * params.k_star + b * params.t_bar) % q)
        for a, b in itertools.product(range(q), repeat=2)
    }


def quadrant_intersections(dv: DegreeVectors) -> tuple[int, int]:
    """(|TR ∩ BR|, |BL ∩ BR|) by direct set intersection."""
    qs = quadrants(dv)
    return (len(qs.tr & qs.br), len(qs.bl & qs.br))
