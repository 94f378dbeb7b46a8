"""Exact arithmetic in Z[zeta_k]: cyclotomic polynomials, norms, circulants and norm bounds.

Polynomials are integer coefficient sequences, lowest degree first. A CycInt
is the raw vector (a_0, ..., a_{k-1}) of f with the element f(zeta_k); no
reduction modulo Phi_k is implied by the representation.
"""

import json
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Literal, Mapping, Optional, Sequence, Tuple, Union

import mpmath
from pydantic import BaseModel, ConfigDict, model_validator

from cyclonum.errors import InvalidArgumentError
from cyclonum.finite_field import divisors, euler_phi, is_prime

IntMatrix = List[List[int]]


class CycInt(BaseModel):
    """f(zeta_k) with f = sum a_i x^i, i < k."""

    model_config = ConfigDict(frozen=True)

    k: int
    coeffs: Tuple[int, ...]

    @model_validator(mode="after")
    def check_invariants(self) -> "CycInt":
        if self.k < 2:
            raise ValueError(f"order k must be >= 2, got {self.k}")
        if len(self.coeffs) != self.k:
            raise ValueError(f"expected {self.k} coefficients, got {len(self.coeffs)}")
        return self

    @classmethod
    def from_terms(cls, k: int, terms: Mapping[int, int]) -> "CycInt":
        """Build from {exponent: coefficient}; exponents are taken mod k and collected."""
        coeffs = [0] * k
        for exp, c in terms.items():
            coeffs[exp % k] += c
        return cls(k=k, coeffs=tuple(coeffs))

    @classmethod
    def zero(cls, k: int) -> "CycInt":
        return cls(k=k, coeffs=(0,) * k)

    @classmethod
    def one(cls, k: int) -> "CycInt":
        return cls(k=k, coeffs=(1,) + (0,) * (k - 1))

    @property
    def coeff_sum(self) -> int:
        return sum(self.coeffs)

    @property
    def square_sum(self) -> int:
        return sum(a * a for a in self.coeffs)

    @property
    def abs_sum(self) -> int:
        return sum(abs(a) for a in self.coeffs)

    @property
    def positive_part(self) -> int:
        return sum(a for a in self.coeffs if a > 0)

    @property
    def negative_part(self) -> int:
        return sum(-a for a in self.coeffs if a < 0)

    def to_json(self) -> str:
        return json.dumps({"k": self.k, "coeffs": list(self.coeffs)})

    @classmethod
    def from_json(cls, text: str) -> "CycInt":
        data = json.loads(text)
        return cls(k=data["k"], coeffs=tuple(data["coeffs"]))


def _coeffs_of(f: Union[CycInt, Sequence[int]]) -> List[int]:
    return list(f.coeffs) if isinstance(f, CycInt) else list(f)


# ---------------------------------------------------------------------------
# Cyclotomic polynomials
# ---------------------------------------------------------------------------


def _divmod_monic(a: Sequence[int], b: Sequence[int]) -> Tuple[List[int], List[int]]:
    """Quotient and remainder of a by the monic integer polynomial b."""
    rem = list(a)
    n = len(b) - 1
    if len(rem) <= n:
        return [], rem
    quot = [0] * (len(rem) - n)
    for d in range(len(rem) - 1, n - 1, -1):
        c = rem[d]
        if c:
            quot[d - n] = c
            for i in range(n + 1):
                rem[d - n + i] -= c * b[i]
    return quot, rem[:n]


@lru_cache(maxsize=None)
def cyclotomic_poly(k: int) -> Tuple[int, ...]:
    """
    Phi_k as a coefficient tuple, lowest degree first.

    Exact division of x^k - 1 by Phi_d for every proper divisor d of k.
    """
    if k < 1:
        raise InvalidArgumentError(f"cyclotomic_poly needs k >= 1, got {k}")
    poly = [-1] + [0] * (k - 1) + [1]
    for d in divisors(k)[:-1]:
        poly, rem = _divmod_monic(poly, cyclotomic_poly(d))
        if any(rem):
            raise AssertionError(f"Phi_{d} does not divide the partial quotient for k = {k}")
    return tuple(poly)


def reduce_mod_phi(f: Union[CycInt, Sequence[int]], k: int = None) -> Tuple[int, ...]:
    """
    Remainder of f modulo Phi_k, zero-padded to length phi(k).

    For a CycInt, k defaults to its order; plain sequences may have any length.
    """
    if k is None:
        if not isinstance(f, CycInt):
            raise InvalidArgumentError("reduce_mod_phi needs k for a plain coefficient sequence")
        k = f.k
    phi = cyclotomic_poly(k)
    _, rem = _divmod_monic(_coeffs_of(f), phi)
    d = len(phi) - 1
    return tuple(rem) + (0,) * (d - len(rem))


def divides_phi(f: Union[CycInt, Sequence[int]], k: int = None) -> bool:
    """True iff Phi_k divides f, i.e. f(zeta_k) = 0."""
    return not any(reduce_mod_phi(f, k))


def mul_mod_phi(f: CycInt, g: CycInt) -> CycInt:
    """f * g reduced modulo Phi_k, zero-padded back to length k."""
    if f.k != g.k:
        raise InvalidArgumentError(f"orders differ: {f.k} != {g.k}")
    prod = [0] * (2 * f.k - 1)
    for i, a in enumerate(f.coeffs):
        if a:
            for j, b in enumerate(g.coeffs):
                prod[i + j] += a * b
    rem = reduce_mod_phi(prod, f.k)
    return CycInt(k=f.k, coeffs=rem + (0,) * (f.k - len(rem)))


# ---------------------------------------------------------------------------
# Determinants and norms
# ---------------------------------------------------------------------------


def det_exact(m: IntMatrix) -> int:
    """
    Determinant by Bareiss fraction-free elimination.

    Every intermediate entry is a minor of m, so each division is exact.
    """
    n = len(m)
    if n == 0 or any(len(row) != n for row in m):
        raise InvalidArgumentError("det_exact needs a non-empty square matrix")
    a = [list(row) for row in m]
    sign = 1
    prev = 1
    for c in range(n - 1):
        if a[c][c] == 0:
            for r in range(c + 1, n):
                if a[r][c]:
                    a[c], a[r] = a[r], a[c]
                    sign = -sign
                    break
            else:
                return 0
        pivot = a[c][c]
        for i in range(c + 1, n):
            for j in range(c + 1, n):
                a[i][j] = (pivot * a[i][j] - a[i][c] * a[c][j]) // prev
            a[i][c] = 0
        prev = pivot
    return sign * a[n - 1][n - 1]


def _multiplication_matrix(rem: Sequence[int], k: int) -> IntMatrix:
    """Matrix of y -> r*y on Z[x]/Phi_k in the power basis; column j is x^j * r."""
    phi = cyclotomic_poly(k)
    d = len(phi) - 1
    col = list(rem)
    cols = []
    for _ in range(d):
        cols.append(col)
        top = col[-1]
        col = [0] + col[:-1]
        if top:
            col = [c - top * phi[i] for i, c in enumerate(col)]
    return [[cols[j][i] for j in range(d)] for i in range(d)]


def norm(f: CycInt) -> int:
    """
    Signed absolute norm N(f(zeta_k)) = Res(Phi_k, f).

    Computed as the determinant of multiplication by f on Z[zeta_k]; zero iff
    Phi_k divides f.
    """
    rem = reduce_mod_phi(f)
    if not any(rem):
        return 0
    return det_exact(_multiplication_matrix(rem, f.k))


def circulant(f: Union[CycInt, Sequence[int]]) -> IntMatrix:
    """k x k circulant with first row f; each row is the previous shifted right by one."""
    a = _coeffs_of(f)
    k = len(a)
    if k < 1:
        raise InvalidArgumentError("circulant needs at least one coefficient")
    return [[a[(j - i) % k] for j in range(k)] for i in range(k)]


def norm_via_circulant(f: CycInt) -> int:
    """
    Norm through the circulant of f, prime k only.

    det(M) / sum(a_i) when the coefficient sum is nonzero, otherwise k times
    the determinant of M with its first row and column removed.
    """
    if not is_prime(f.k):
        raise InvalidArgumentError(f"k = {f.k} is not prime")
    m = circulant(f)
    s = f.coeff_sum
    if s:
        d = det_exact(m)
        if d % s:
            raise AssertionError(f"det(M) = {d} not divisible by coefficient sum {s}")
        return d // s
    minor = [row[1:] for row in m[1:]]
    return f.k * det_exact(minor)


def schinzel_bound(m: IntMatrix) -> int:
    """Product over rows of max(positive part, negative part); bounds |det(m)|."""
    n = len(m)
    if n == 0 or any(len(row) != n for row in m):
        raise InvalidArgumentError("schinzel_bound needs a non-empty square matrix")
    bound = 1
    for row in m:
        pos = sum(x for x in row if x > 0)
        neg = sum(-x for x in row if x < 0)
        bound *= max(pos, neg)
    return bound


def circulant_eigenvalues(f: Union[CycInt, Sequence[int]], dps: int = 50) -> List[mpmath.mpc]:
    """Numerical eigenvalues lambda_i = sum_j a_j zeta_k^(i*j) of the circulant of f."""
    a = _coeffs_of(f)
    k = len(a)
    with mpmath.workdps(dps):
        zeta = mpmath.expjpi(mpmath.mpf(2) / k)
        return [mpmath.fsum(c * zeta ** (i * j % k) for j, c in enumerate(a)) for i in range(k)]


# ---------------------------------------------------------------------------
# Norm bounds
# ---------------------------------------------------------------------------


class ObviousNormBound(BaseModel):
    model_config = ConfigDict(frozen=True)

    norm: int
    abs_sum: int
    bound: int
    holds: bool


class GeneralNormBound(BaseModel):
    """
    |N|^2 * phi^phi <= k^phi * S^phi, plus the weaker N^2 <= S^k once S >= 3.

    lhs and rhs are the integer certificates of the first comparison.
    """

    model_config = ConfigDict(frozen=True)

    norm: int
    square_sum: int
    phi: int
    lhs: int
    rhs: int
    holds: bool
    resulting_holds: Optional[bool] = None


class PrimeNormBound(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    case: Literal["a", "b"]
    a_plus: int
    a_minus: int
    a: int
    coeff_sum: int
    bound: Fraction
    norm: int
    holds: bool

    def to_dict(self) -> Dict:
        data = self.model_dump()
        data["bound"] = str(self.bound)
        return data


def norm_bound_obvious(f: CycInt, n: int = None) -> ObviousNormBound:
    n = norm(f) if n is None else n
    bound = f.abs_sum ** euler_phi(f.k)
    return ObviousNormBound(norm=n, abs_sum=f.abs_sum, bound=bound, holds=abs(n) <= bound)


def norm_bound_general(f: CycInt, n: int = None) -> GeneralNormBound:
    """Check |N(f)| <= (k*S/phi(k))^(phi(k)/2) in cross-multiplied integer form."""
    n = norm(f) if n is None else n
    k = f.k
    phi = euler_phi(k)
    s = f.square_sum
    lhs = n * n * phi**phi
    rhs = k**phi * s**phi
    resulting = n * n <= s**k if s >= 3 else None
    return GeneralNormBound(
        norm=n,
        square_sum=s,
        phi=phi,
        lhs=lhs,
        rhs=rhs,
        holds=lhs <= rhs,
        resulting_holds=resulting,
    )


def norm_bound_prime(f: CycInt, n: int = None) -> PrimeNormBound:
    """
    Circulant-based bound for prime k.

    With A = max(A+, A-): k*A^(k-1) when the coefficient sum vanishes,
    A^k / |sum a_i| otherwise.
    """
    if not is_prime(f.k):
        raise InvalidArgumentError(f"k = {f.k} is not prime")
    n = norm(f) if n is None else n
    k = f.k
    a_plus, a_minus = f.positive_part, f.negative_part
    a = max(a_plus, a_minus)
    s = f.coeff_sum
    if s == 0:
        case, bound = "a", Fraction(k * a ** (k - 1))
    else:
        case, bound = "b", Fraction(a**k, abs(s))
    return PrimeNormBound(
        case=case,
        a_plus=a_plus,
        a_minus=a_minus,
        a=a,
        coeff_sum=s,
        bound=bound,
        norm=n,
        holds=abs(n) <= bound,
    )
