"""Vanishing sums of roots of unity: exact tests, subsums, similarity and classification.

A RootSum is the formal sum sum(c_i * zeta_m^(e_i)) with nonzero rational
coefficients and distinct exponents in [0, m). All decisions reduce an
integer polynomial modulo Phi_m; nothing here evaluates numerically.
"""

import json
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from math import gcd, lcm
from typing import Dict, Iterable, Iterator, List, Literal, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from cyclonum.config import settings
from cyclonum.cyclo_integers import cyclotomic_poly, divides_phi
from cyclonum.errors import InvalidArgumentError, ResourceLimitError
from cyclonum.finite_field import radical
from cyclonum.utils import log_event

ClassTag = Literal["has-pair-subsum", "has-R3-subsum", "similar-R5", "similar-R3R5", "violation"]


class RootTerm(BaseModel):
    """One term c * zeta_m^exp."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    coeff: Fraction
    exp: int

    @field_validator("coeff", mode="before")
    @classmethod
    def coerce_fraction(cls, v):
        if isinstance(v, str):
            return Fraction(v)
        if isinstance(v, (int, Fraction)):
            return Fraction(v)
        raise ValueError(f"coefficient must be an integer or rational, got {v!r}")

    @field_validator("coeff")
    @classmethod
    def check_nonzero(cls, v: Fraction) -> Fraction:
        if v == 0:
            raise ValueError("coefficients must be nonzero")
        return v


class RootSum(BaseModel):
    """A formal sum of m-th roots of unity with nonzero rational coefficients."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    m: int
    terms: Tuple[RootTerm, ...] = ()

    @model_validator(mode="after")
    def check_invariants(self) -> "RootSum":
        if self.m < 1:
            raise ValueError(f"modulus m must be >= 1, got {self.m}")
        exps = [t.exp for t in self.terms]
        if any(not 0 <= e < self.m for e in exps):
            raise ValueError(f"exponents must lie in [0, {self.m})")
        if len(set(exps)) != len(exps):
            raise ValueError("exponents must be distinct")
        return self

    @classmethod
    def of(cls, m: int, pairs: Iterable[Tuple[object, int]]) -> "RootSum":
        """Build from (coefficient, exponent) pairs; exponents are reduced mod m."""
        if m < 1:
            raise InvalidArgumentError(f"modulus m must be >= 1, got {m}")
        return cls(m=m, terms=tuple(RootTerm(coeff=c, exp=e % m) for c, e in pairs))

    @property
    def length(self) -> int:
        return len(self.terms)

    @property
    def exponent(self) -> int:
        """lcm of the orders of the roots occurring in the sum."""
        out = 1
        for t in self.terms:
            out = lcm(out, self.m // gcd(t.exp, self.m))
        return out

    @property
    def is_reduced(self) -> bool:
        """Contains the root 1."""
        return any(t.exp == 0 for t in self.terms)

    def as_dict(self) -> Dict[int, Fraction]:
        return {t.exp: t.coeff for t in self.terms}

    def rotate(self, t: int) -> "RootSum":
        """zeta_m^t * S."""
        return RootSum.of(self.m, ((x.coeff, x.exp + t) for x in self.terms))

    def galois(self, j: int) -> "RootSum":
        """Apply zeta_m -> zeta_m^j, gcd(j, m) = 1."""
        if gcd(j, self.m) != 1:
            raise InvalidArgumentError(f"gcd({j}, {self.m}) != 1: not a Galois automorphism")
        return RootSum.of(self.m, ((x.coeff, x.exp * j) for x in self.terms))

    def lift(self, big_m: int) -> "RootSum":
        """The same sum written over zeta_{big_m}; m must divide big_m."""
        if big_m % self.m:
            raise InvalidArgumentError(f"{self.m} does not divide {big_m}")
        step = big_m // self.m
        return RootSum.of(big_m, ((x.coeff, x.exp * step) for x in self.terms))

    def scale(self, c) -> "RootSum":
        return RootSum.of(self.m, ((x.coeff * Fraction(c), x.exp) for x in self.terms))

    def subsum(self, indices: Iterable[int]) -> "RootSum":
        return RootSum(m=self.m, terms=tuple(self.terms[i] for i in indices))

    def integer_poly(self) -> List[int]:
        """Coefficients of D * sum(c_i x^(e_i)), D the lcm of the denominators."""
        d = 1
        for t in self.terms:
            d = lcm(d, t.coeff.denominator)
        poly = [0] * self.m
        for t in self.terms:
            poly[t.exp] = int(t.coeff * d)
        return poly

    def to_json(self) -> str:
        return json.dumps(
            {
                "m": self.m,
                "terms": [
                    {"num": t.coeff.numerator, "den": t.coeff.denominator, "exp": t.exp}
                    for t in self.terms
                ],
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "RootSum":
        data = json.loads(text)
        return cls.of(
            data["m"], ((Fraction(t["num"], t.get("den", 1)), t["exp"]) for t in data["terms"])
        )

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"({t.coeff})*z{self.m}^{t.exp}" for t in self.terms)


# ---------------------------------------------------------------------------
# Reference sums
# ---------------------------------------------------------------------------


def pair_sum() -> RootSum:
    """1 + (-1)."""
    return RootSum.of(2, [(1, 0), (1, 1)])


def r3() -> RootSum:
    return RootSum.of(3, [(1, 0), (1, 1), (1, 2)])


def r5() -> RootSum:
    return RootSum.of(5, [(1, e) for e in range(5)])


def r3r5() -> RootSum:
    """-zeta_3 - zeta_3^2 + zeta_5 + zeta_5^2 + zeta_5^3 + zeta_5^4 over m = 15."""
    return RootSum.of(15, [(-1, 5), (-1, 10), (1, 3), (1, 6), (1, 9), (1, 12)])


# ---------------------------------------------------------------------------
# Exact vanishing
# ---------------------------------------------------------------------------


@lru_cache(maxsize=64)
def _power_vectors(m: int) -> Tuple[Tuple[int, ...], ...]:
    """x^e mod Phi_m for e in [0, m), each of length phi(m)."""
    phi = cyclotomic_poly(m)
    d = len(phi) - 1
    vec = [1] + [0] * (d - 1) if d > 0 else []
    out = []
    for _ in range(m):
        out.append(tuple(vec))
        top = vec[-1]
        vec = [0] + vec[:-1]
        if top:
            vec = [c - top * phi[i] for i, c in enumerate(vec)]
    return tuple(out)


def _term_vectors(s: RootSum) -> List[Tuple[int, ...]]:
    """Integer vector of each term in Z[x]/Phi_m, all scaled by one common denominator."""
    poly = s.integer_poly()
    powers = _power_vectors(s.m)
    return [tuple(poly[t.exp] * v for v in powers[t.exp]) for t in s.terms]


def _vanishes(vectors: Sequence[Tuple[int, ...]], indices: Iterable[int]) -> bool:
    acc = None
    for i in indices:
        acc = vectors[i] if acc is None else tuple(a + b for a, b in zip(acc, vectors[i]))
    return acc is None or not any(acc)


def is_vanishing(s: RootSum) -> bool:
    """True iff the sum is exactly zero: Phi_m divides its cleared-denominator polynomial."""
    if not s.terms:
        return True
    return divides_phi(s.integer_poly(), s.m)


def vanishing_subsums(s: RootSum, max_length: int = None) -> List[Tuple[int, ...]]:
    """
    Index tuples of every nonempty proper subsum that vanishes.

    Raises:
        ResourceLimitError: length above SUBSUM_MAX_LENGTH
    """
    cap = max_length or settings.SUBSUM_MAX_LENGTH
    if s.length > cap:
        raise ResourceLimitError("SUBSUM_MAX_LENGTH", cap, s.length)
    vectors = _term_vectors(s)
    found = []
    for size in range(1, s.length):
        for idx in combinations(range(s.length), size):
            if _vanishes(vectors, idx):
                found.append(idx)
    return found


def is_minimal(s: RootSum) -> bool:
    """A vanishing sum with no vanishing proper subsum."""
    if not is_vanishing(s):
        raise InvalidArgumentError(f"sum does not vanish: {s}")
    return not vanishing_subsums(s)


def cancels_in_pairs(s: RootSum) -> bool:
    """True iff the terms split into two-term vanishing subsums."""
    if s.length % 2:
        return False
    vectors = _term_vectors(s)

    def match(remaining: Tuple[int, ...]) -> bool:
        if not remaining:
            return True
        first, rest = remaining[0], remaining[1:]
        for pos, other in enumerate(rest):
            if _vanishes(vectors, (first, other)) and match(rest[:pos] + rest[pos + 1 :]):
                return True
        return False

    return match(tuple(range(s.length)))


# ---------------------------------------------------------------------------
# Similarity and classification
# ---------------------------------------------------------------------------


def is_similar(s: RootSum, other: RootSum, max_length: int = None, max_order: int = None) -> bool:
    """
    True iff s = c * beta * S'' with c rational, beta a root of unity and S''
    obtained from other by flipping the sign of chosen terms in both the
    coefficient and the root.

    Both sums are lifted to L = lcm(m, m', 2) so that -1 is available. Anchoring
    the first term of other to each term of s fixes beta and c for every sign
    pattern; the remaining terms must then match exactly.

    Raises:
        ResourceLimitError: a length above SIMILARITY_MAX_LENGTH or L above
            SIMILARITY_MAX_ORDER
    """
    len_cap = max_length or settings.SIMILARITY_MAX_LENGTH
    order_cap = max_order or settings.SIMILARITY_MAX_ORDER
    longest = max(s.length, other.length)
    if longest > len_cap:
        raise ResourceLimitError("SIMILARITY_MAX_LENGTH", len_cap, longest)
    big_l = lcm(s.m, other.m, 2)
    if big_l > order_cap:
        raise ResourceLimitError("SIMILARITY_MAX_ORDER", order_cap, big_l)

    if s.length != other.length:
        return False
    if not s.terms:
        return True

    target = s.lift(big_l).as_dict()
    source = other.lift(big_l).terms
    half = big_l // 2
    c0, y0 = source[0].coeff, source[0].exp

    for x, cx in target.items():
        for signs in product((1, -1), repeat=len(source)):
            shift = 0 if signs[0] > 0 else half
            beta = (x - y0 - shift) % big_l
            scale = cx / (signs[0] * c0)
            image = {}
            for eps, term in zip(signs, source):
                root = (beta + term.exp + (0 if eps > 0 else half)) % big_l
                image[root] = scale * eps * term.coeff
            if image == target:
                return True
    return False


def classify_up_to_6(s: RootSum) -> ClassTag:
    """
    Tag a nonempty vanishing sum of length <= 6.

    Checked in order: a vanishing two-term subsum, a three-term subsum similar
    to 1 + zeta_3 + zeta_3^2, then similarity of the whole sum to R5 and R3R5.
    """
    if not s.terms or s.length > 6:
        raise InvalidArgumentError(f"classification needs 1 <= length <= 6, got {s.length}")
    if not is_vanishing(s):
        raise InvalidArgumentError(f"sum does not vanish: {s}")

    vectors = _term_vectors(s)
    if any(_vanishes(vectors, pair) for pair in combinations(range(s.length), 2)):
        return "has-pair-subsum"
    reference3 = r3()
    for triple in combinations(range(s.length), 3):
        if _vanishes(vectors, triple) and is_similar(s.subsum(triple), reference3):
            return "has-R3-subsum"
    if is_similar(s, r5()):
        return "similar-R5"
    if is_similar(s, r3r5()):
        return "similar-R3R5"

    log_event("classification_violation", {"sum": str(s)}, level="ERROR")
    return "violation"


# ---------------------------------------------------------------------------
# Squarefree reduction
# ---------------------------------------------------------------------------


class SquarefreeReduction(BaseModel):
    model_config = ConfigDict(frozen=True)

    beta_exponent: int
    reduced: RootSum


def squarefree_reduce(s: RootSum, max_order: int = None) -> Optional[SquarefreeReduction]:
    """
    Smallest t with zeta_m^t * S supported on m0-th roots, m0 the radical of m.

    Returns None when no rotation works.

    Raises:
        InvalidArgumentError: s is not a minimal vanishing sum
        ResourceLimitError: m above SQUAREFREE_MAX_ORDER
    """
    cap = max_order or settings.SQUAREFREE_MAX_ORDER
    if s.m > cap:
        raise ResourceLimitError("SQUAREFREE_MAX_ORDER", cap, s.m)
    if not is_vanishing(s) or not is_minimal(s):
        raise InvalidArgumentError(f"squarefree reduction needs a minimal vanishing sum: {s}")

    m0 = radical(s.m)
    step = s.m // m0
    for t in range(s.m):
        if all((x.exp + t) % step == 0 for x in s.terms):
            reduced = RootSum.of(m0, ((x.coeff, (x.exp + t) % s.m // step) for x in s.terms))
            return SquarefreeReduction(beta_exponent=t, reduced=reduced)
    log_event("squarefree_not_found", {"sum": str(s)}, level="ERROR")
    return None


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------


def enumerate_vanishing_sums(
    m: int, max_length: int, coeffs: Sequence[int] = (1, -1)
) -> Iterator[RootSum]:
    """
    Every vanishing sum over zeta_m of length <= max_length whose first term is
    c * zeta_m^0 with c > 0 and whose exponents ascend.

    Each vanishing sum with coefficients in coeffs is a rotation of one of
    these, possibly negated. coeffs must be nonzero and closed under negation.
    """
    coeff_set = sorted(set(coeffs))
    if 0 in coeff_set or any(-c not in coeff_set for c in coeff_set):
        raise InvalidArgumentError(f"coefficients must be nonzero and symmetric, got {coeffs}")
    powers = _power_vectors(m)

    def extend(terms: List[Tuple[int, int]], acc: Tuple[int, ...]) -> Iterator[RootSum]:
        if len(terms) >= 2 and not any(acc):
            yield RootSum.of(m, terms)
        if len(terms) == max_length:
            return
        for e in range(terms[-1][1] + 1, m):
            vec = powers[e]
            for c in coeff_set:
                nxt = tuple(a + c * v for a, v in zip(acc, vec))
                yield from extend(terms + [(c, e)], nxt)

    for c in coeff_set:
        if c > 0:
            yield from extend([(c, 0)], tuple(c * v for v in powers[0]))
