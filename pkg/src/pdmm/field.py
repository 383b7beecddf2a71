"""Exact arithmetic in prime fields F_p and discovery of roots of unity.

Elements are plain Python ints in [0, p); the field association is carried
by the :class:`PrimeField` performing the operation.
"""

from __future__ import annotations

from dataclasses import dataclass


class FieldError(Exception):
    """Invalid field construction or undefined field operation."""


# Witness set proving Miller-Rabin deterministic for all n < 3.3 * 10^24,
# comfortably covering the 64-bit range used here.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_SEARCH_BOUND = 2**63


def is_prime(n: int) -> bool:
    """Deterministic primality test (Miller-Rabin with fixed witness set)."""
    if n < 2:
        return False
    for sp in _MR_BASES:
        if n % sp == 0:
            return n == sp
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _prime_factors(n: int) -> list[int]:
    """Distinct prime factors by trial division (n fits the search bound)."""
    factors = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            factors.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        factors.append(n)
    return factors


def _primitive_root(p: int) -> int:
    """Smallest primitive element of F_p (order exactly p-1)."""
    if p == 2:
        return 1
    factors = _prime_factors(p - 1)
    for g in range(2, p):
        if all(pow(g, (p - 1) // f, p) != 1 for f in factors):
            return g
    raise FieldError(f"no primitive root found for p={p}")  # unreachable for prime p


@dataclass(frozen=True)
class PrimeField:
    """The field F_p together with a cached primitive element.

    Construct via :meth:`PrimeField.of` unless both invariants (p prime,
    generator of order p-1) are already known to hold.
    """

    p: int
    generator: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise FieldError(f"{self.p} is not prime")
        if not 1 <= self.generator < self.p:
            raise FieldError(f"generator {self.generator} out of range for p={self.p}")
        order_checks = (
            pow(self.generator, (self.p - 1) // f, self.p) != 1
            for f in _prime_factors(self.p - 1)
        )
        if self.p > 2 and not all(order_checks):
            raise FieldError(f"{self.generator} is not a generator of F_{self.p}")

    @classmethod
    def of(cls, p: int) -> "PrimeField":
        if not is_prime(p):
            raise FieldError(f"{p} is not prime")
        return cls(p, _primitive_root(p))

    # -- arithmetic bundle -------------------------------------------------

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.p

    def neg(self, a: int) -> int:
        return (-a) % self.p

    def inv(self, a: int) -> int:
        if a % self.p == 0:
            raise FieldError("division by zero in F_p")
        return pow(a, self.p - 2, self.p)

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return pow(self.inv(a), -e, self.p)
        return pow(a, e, self.p)

    def element(self, a: int) -> int:
        """Canonical representative of a in [0, p)."""
        return a % self.p


def find_field(q: int, min_p: int = 0) -> PrimeField:
    """Smallest prime field F_p with p >= max(min_p, q+1) and q | p-1."""
    if q < 1:
        raise FieldError(f"q must be positive, got {q}")
    start = max(min_p, q + 1, 2)
    if q == 1:
        p = start
        while p < _SEARCH_BOUND:
            if is_prime(p):
                return PrimeField.of(p)
            p += 1
    else:
        # Candidates are exactly p = k*q + 1.
        k = (start - 2) // q + 1
        p = k * q + 1
        while p < _SEARCH_BOUND:
            if is_prime(p):
                return PrimeField.of(p)
            p += q
    raise FieldError(f"no admissible prime below 2^63 for q={q}, min_p={min_p}")


def element_of_order(field: PrimeField, q: int) -> int:
    """An element of multiplicative order exactly q; requires q | p-1.

    Deterministic given the field's generator g: returns g^((p-1)/q).
    """
    if q < 1 or (field.p - 1) % q != 0:
        raise FieldError(f"order {q} does not divide p-1 = {field.p - 1}")
    return pow(field.generator, (field.p - 1) // q, field.p)
