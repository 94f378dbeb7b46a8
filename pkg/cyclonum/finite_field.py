"""Exact arithmetic in F_p and F_{p^n}: canonical moduli, primitive elements and discrete logs.

Field elements are packed integers: the coefficient sequence (c_0, ..., c_{n-1})
of the residue modulo the canonical irreducible polynomial is stored as
sum(c_i * p**i). This is also the canonical enumeration order of F_q, and
elements of the prime field keep their residue value.
"""

from functools import lru_cache
from itertools import product
from math import gcd
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from cyclonum.config import settings
from cyclonum.errors import InvalidArgumentError, ResourceLimitError
from cyclonum.utils import log_event

FieldElement = int


# ---------------------------------------------------------------------------
# Integer helpers
# ---------------------------------------------------------------------------


def factorize(n: int, cap: int = None) -> List[int]:
    """
    Prime factors of n with multiplicity, ascending.

    Args:
        n: Positive integer
        cap: Largest accepted input (defaults to settings.FACTOR_INPUT_CAP)

    Returns:
        Sorted list of primes whose product is n (empty for n = 1)

    Raises:
        InvalidArgumentError: n < 1
        ResourceLimitError: n above the cap
    """
    cap = cap or settings.FACTOR_INPUT_CAP
    if not isinstance(n, int) or n < 1:
        raise InvalidArgumentError(f"factorize needs a positive integer, got {n!r}")
    if n > cap:
        raise ResourceLimitError("FACTOR_INPUT_CAP", cap, n)

    factors = []
    while n % 2 == 0:
        factors.append(2)
        n //= 2
    d = 3
    while d * d <= n:
        while n % d == 0:
            factors.append(d)
            n //= d
        d += 2
    if n > 1:
        factors.append(n)
    return factors


def is_prime(n: int) -> bool:
    """Primality by trial division."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def euler_phi(n: int) -> int:
    """Euler's totient."""
    result = n
    for r in set(factorize(n)):
        result = result // r * (r - 1)
    return result


def radical(n: int) -> int:
    """Largest squarefree divisor of n."""
    result = 1
    for r in set(factorize(n)):
        result *= r
    return result


def divisors(n: int) -> List[int]:
    """All positive divisors of n, ascending."""
    fs = factorize(n)
    divs = [1]
    for r in sorted(set(fs)):
        divs = [d * r**i for d in divs for i in range(fs.count(r) + 1)]
    return sorted(divs)


def mult_order(a: int, k: int) -> int:
    """
    Multiplicative order of a modulo k.

    Starts from the group exponent phi(k) and strips prime factors while
    the power stays 1.

    Raises:
        InvalidArgumentError: k < 1 or gcd(a, k) != 1
    """
    if k < 1:
        raise InvalidArgumentError(f"modulus must be positive, got {k}")
    if gcd(a, k) != 1:
        raise InvalidArgumentError(f"gcd({a}, {k}) != 1, order undefined")
    if k == 1:
        return 1

    d = euler_phi(k)
    for r in sorted(set(factorize(d))):
        while d % r == 0 and pow(a, d // r, k) == 1:
            d //= r
    return d


def iter_prime_powers(q_max: int, p_max: int = None) -> Iterator[Tuple[int, int, int]]:
    """Yield (q, p, n) for every prime power q = p^n <= q_max, ascending in q."""
    for q in range(2, q_max + 1):
        fs = factorize(q)
        if fs[0] != fs[-1]:
            continue
        if p_max is not None and fs[0] > p_max:
            continue
        yield q, fs[0], len(fs)


# ---------------------------------------------------------------------------
# Polynomials over F_p (coefficient lists, lowest degree first)
# ---------------------------------------------------------------------------


def _ptrim(a: List[int]) -> List[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a: List[int], f: Sequence[int], p: int) -> List[int]:
    """Remainder of a modulo the monic polynomial f."""
    a = [c % p for c in a]
    n = len(f) - 1
    for d in range(len(a) - 1, n - 1, -1):
        c = a[d]
        if c:
            for i in range(n):
                a[d - n + i] = (a[d - n + i] - c * f[i]) % p
            a[d] = 0
    return _ptrim(a[:n])


def _pmulmod(a: List[int], b: List[int], f: Sequence[int], p: int) -> List[int]:
    if not a or not b:
        return []
    prod = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] += ai * bj
    return _pmod(prod, f, p)


def _ppowmod(a: List[int], e: int, f: Sequence[int], p: int) -> List[int]:
    result = [1]
    base = _pmod(list(a), f, p)
    while e:
        if e & 1:
            result = _pmulmod(result, base, f, p)
        e >>= 1
        if e:
            base = _pmulmod(base, base, f, p)
    return result


def _pgcd(a: List[int], b: List[int], p: int) -> List[int]:
    a, b = _ptrim([c % p for c in a]), _ptrim([c % p for c in b])
    while b:
        inv = pow(b[-1], p - 2, p)
        monic = [c * inv % p for c in b]
        a, b = b, _pmod(a, monic, p)
    return a


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """
    Irreducibility of a monic polynomial over F_p (coefficients lowest first).

    f of degree n is irreducible iff gcd(f, x^(p^d) - x) = 1 for every
    d <= n/2.
    """
    poly = list(poly)
    n = len(poly) - 1
    if n < 1 or poly[-1] != 1:
        raise InvalidArgumentError("is_irreducible expects a monic polynomial of degree >= 1")
    if n == 1:
        return True
    if poly[0] % p == 0:
        return False

    h = [0, 1]
    for _ in range(1, n // 2 + 1):
        h = _ppowmod(h, p, poly, p)
        diff = list(h) + [0] * max(0, 2 - len(h))
        diff[1] -= 1
        if len(_pgcd(poly, diff, p)) > 1:
            return False
    return True


def find_irreducible(p: int, n: int) -> Tuple[int, ...]:
    """
    Smallest monic irreducible of degree n over F_p.

    Candidates are ordered like packed field elements: (c_0, ..., c_{n-1})
    read as the base-p integer sum(c_i * p**i), so x^3 + x + 1 precedes
    x^3 + x^2 + 1 over F_2.

    Returns:
        Coefficient tuple (c_0, ..., c_{n-1}, 1)
    """
    if not is_prime(p):
        raise InvalidArgumentError(f"p = {p} is not prime")
    if n < 2:
        raise InvalidArgumentError(f"degree must be >= 2, got {n}")

    for digits in product(range(p), repeat=n):
        tail = digits[::-1]
        if tail[0] == 0:
            continue
        poly = tail + (1,)
        if is_irreducible(poly, p):
            return poly
    # an irreducible of every degree exists
    raise AssertionError(f"no irreducible of degree {n} over F_{p}")


# ---------------------------------------------------------------------------
# Field specification and arithmetic
# ---------------------------------------------------------------------------


class FieldSpec(BaseModel):
    """The field F_q, q = p^n, with its canonical modulus (None when n = 1)."""

    model_config = ConfigDict(frozen=True)

    p: int
    n: int = 1
    q: int
    modulus: Optional[Tuple[int, ...]] = None

    @model_validator(mode="after")
    def check_invariants(self) -> "FieldSpec":
        if not is_prime(self.p):
            raise ValueError(f"p = {self.p} is not prime")
        if self.n < 1:
            raise ValueError(f"extension degree must be >= 1, got {self.n}")
        if self.q != self.p**self.n:
            raise ValueError(f"q = {self.q} != {self.p}^{self.n}")
        if self.n == 1:
            if self.modulus is not None:
                raise ValueError("prime fields carry no modulus")
        else:
            if self.modulus is None or len(self.modulus) != self.n + 1:
                raise ValueError("modulus must be monic of degree n")
            if any(not 0 <= c < self.p for c in self.modulus) or self.modulus[-1] != 1:
                raise ValueError("modulus coefficients must lie in [0, p) with leading 1")
            if not is_irreducible(self.modulus, self.p):
                raise ValueError(f"modulus {self.modulus} is reducible over F_{self.p}")
        return self


@lru_cache(maxsize=None)
def make_field_spec(p: int, n: int = 1) -> FieldSpec:
    """Canonical FieldSpec for F_{p^n}."""
    if not is_prime(p):
        raise InvalidArgumentError(f"p = {p} is not prime")
    if n < 1:
        raise InvalidArgumentError(f"extension degree must be >= 1, got {n}")
    modulus = find_irreducible(p, n) if n >= 2 else None
    return FieldSpec(p=p, n=n, q=p**n, modulus=modulus)


class GaloisField:
    """Arithmetic on packed elements of one FieldSpec."""

    def __init__(self, spec: FieldSpec):
        self.spec = spec
        self.p = spec.p
        self.n = spec.n
        self.q = spec.q
        self._modulus = spec.modulus

    def __repr__(self):
        return f"GaloisField(q={self.q})"

    def coeffs(self, x: FieldElement) -> Tuple[int, ...]:
        """Coefficient sequence (c_0, ..., c_{n-1}) of a packed element."""
        out = []
        for _ in range(self.n):
            x, c = divmod(x, self.p)
            out.append(c)
        return tuple(out)

    def from_coeffs(self, coeffs: Sequence[int]) -> FieldElement:
        x = 0
        for c in reversed(list(coeffs)):
            x = x * self.p + c % self.p
        return x

    def from_int(self, a: int) -> FieldElement:
        """Image of the integer a in the prime subfield."""
        return a % self.p

    def add(self, x: FieldElement, y: FieldElement) -> FieldElement:
        if self.n == 1:
            return (x + y) % self.p
        return self.from_coeffs([a + b for a, b in zip(self.coeffs(x), self.coeffs(y))])

    def neg(self, x: FieldElement) -> FieldElement:
        if self.n == 1:
            return -x % self.p
        return self.from_coeffs([-c for c in self.coeffs(x)])

    def sub(self, x: FieldElement, y: FieldElement) -> FieldElement:
        return self.add(x, self.neg(y))

    def add_one(self, x: FieldElement) -> FieldElement:
        """x + 1, touching only the constant coefficient."""
        c0 = x % self.p
        return x - c0 + (c0 + 1) % self.p

    def mul(self, x: FieldElement, y: FieldElement) -> FieldElement:
        if self.n == 1:
            return x * y % self.p
        product_poly = _pmulmod(list(self.coeffs(x)), list(self.coeffs(y)), self._modulus, self.p)
        return self.from_coeffs(product_poly)

    def pow(self, x: FieldElement, e: int) -> FieldElement:
        if e < 0:
            x, e = self.inv(x), -e
        if self.n == 1:
            return pow(x, e, self.p)
        result, base = 1, x
        while e:
            if e & 1:
                result = self.mul(result, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return result

    def inv(self, x: FieldElement) -> FieldElement:
        if x == 0:
            raise ZeroDivisionError("0 has no inverse in F_q")
        return self.pow(x, self.q - 2)

    def order(self, x: FieldElement) -> int:
        """Multiplicative order of a nonzero element."""
        if x == 0:
            raise InvalidArgumentError("0 has no multiplicative order")
        d = self.q - 1
        for r in sorted(set(factorize(d))):
            while d % r == 0 and self.pow(x, d // r) == 1:
                d //= r
        return d

    def is_primitive(self, x: FieldElement) -> bool:
        if x == 0:
            return False
        m = self.q - 1
        if m == 1:
            return x == 1
        return all(self.pow(x, m // r) != 1 for r in set(factorize(m)))


@lru_cache(maxsize=None)
def field_for(spec: FieldSpec) -> GaloisField:
    """Get or create the GaloisField for a spec."""
    return GaloisField(spec)


def get_field(p: int, n: int = 1) -> GaloisField:
    """GaloisField for the canonical F_{p^n}."""
    return field_for(make_field_spec(p, n))


def find_primitive(spec: FieldSpec) -> FieldElement:
    """Smallest primitive element of F_q in the canonical enumeration order."""
    field = field_for(spec)
    for candidate in range(1, spec.q):
        if field.is_primitive(candidate):
            return candidate
    raise AssertionError(f"F_{spec.q} has no primitive element")


# ---------------------------------------------------------------------------
# Discrete logarithms
# ---------------------------------------------------------------------------


@lru_cache(maxsize=4)
def _build_tables(spec: FieldSpec, g: FieldElement) -> Tuple[np.ndarray, np.ndarray]:
    field = field_for(spec)
    q, p = spec.q, spec.p
    powers = [0] * (q - 1)
    logs = [-1] * q

    # one multiplicative sweep: x runs through g^0, g^1, ..., g^(q-2)
    x = 1
    for i in range(q - 1):
        if logs[x] != -1:
            raise InvalidArgumentError(f"g = {g} is not primitive in F_{q} (order {i})")
        powers[i] = x
        logs[x] = i
        x = x * g % p if spec.n == 1 else field.mul(x, g)
    if x != 1:
        raise InvalidArgumentError(f"g = {g} is not a unit of F_{q}")

    exp = np.array(powers, dtype=np.int64)
    log = np.array(logs, dtype=np.int64)
    exp.flags.writeable = False
    log.flags.writeable = False
    log_event("dlog_table_built", {"q": q, "g": g})
    return exp, log


def _check_memory(q: int, memory_cap: Optional[int]) -> None:
    cap = memory_cap if memory_cap is not None else settings.MEMORY_CAP
    if q > cap:
        log_event(
            "resource_limit_exceeded",
            {"bound": "MEMORY_CAP", "limit": cap, "q": q},
            level="ERROR",
        )
        raise ResourceLimitError("MEMORY_CAP", cap, q)


def dlog_table(spec: FieldSpec, g: FieldElement, memory_cap: int = None) -> np.ndarray:
    """
    Discrete logarithms to base g for every element of F_q.

    Args:
        spec: Field
        g: Primitive element
        memory_cap: Largest q allowed (defaults to settings.MEMORY_CAP)

    Returns:
        Read-only int64 array of length q with table[x] = i iff g^i = x;
        table[0] = -1.

    Raises:
        ResourceLimitError: q above the cap
        InvalidArgumentError: g not primitive
    """
    _check_memory(spec.q, memory_cap)
    return _build_tables(spec, g)[1]


def power_table(spec: FieldSpec, g: FieldElement, memory_cap: int = None) -> np.ndarray:
    """Read-only int64 array of length q - 1 with entry i equal to g^i."""
    _check_memory(spec.q, memory_cap)
    return _build_tables(spec, g)[0]
