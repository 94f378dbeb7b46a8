"""Moving polynomial identities between F_q and C.

For f with integer coefficients and q = e*k + 1, f(g^e) = 0 in F_q whenever
f(zeta_k) = 0, and the converse holds once p is large against a norm bound
of f. Every premise is an integer inequality after cross-multiplication.
"""

from itertools import product
from math import gcd
from typing import Iterator, Literal, Optional, Sequence

from pydantic import BaseModel, ConfigDict, model_validator

from cyclonum.cyclo_integers import CycInt, divides_phi, norm
from cyclonum.cyclotomy import CyclotomyConfig
from cyclonum.errors import InvalidArgumentError, ResourceLimitError
from cyclonum.finite_field import FieldElement, euler_phi, field_for, is_prime, mult_order
from cyclonum.utils import log_event


class TransferPremise(BaseModel):
    """
    One premise evaluated as lhs > rhs.

    general:            p^(2b) * phi^phi   >  k^phi * S^phi
    prime-zero-sum:     p^b                >  k * A^(k-1)
    prime-nonzero-sum:  p^b * |sum a_i|    >  A^k
    with b = ord_k(p).
    """

    model_config = ConfigDict(frozen=True)

    variant: Literal["general", "prime-zero-sum", "prime-nonzero-sum"]
    p: int
    k: int
    order: int
    square_sum: int
    a: int
    coeff_sum: int
    lhs: int
    rhs: int
    verdict: bool
    resulting_verdict: Optional[bool] = None

    @model_validator(mode="after")
    def check_verdict(self) -> "TransferPremise":
        if self.verdict != (self.lhs > self.rhs):
            raise ValueError("verdict does not follow from lhs > rhs")
        return self


class EquivalenceResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    fq_zero: bool
    c_zero: bool
    premise: TransferPremise
    prime_premise: Optional[TransferPremise] = None
    consistent: bool


def _as_cycint(k: int, f) -> CycInt:
    if isinstance(f, CycInt):
        if f.k != k:
            raise InvalidArgumentError(f"f has order {f.k}, expected {k}")
        return f
    return CycInt(k=k, coeffs=tuple(f))


def _check_coprime(p: int, k: int) -> None:
    if gcd(p, k) != 1:
        raise InvalidArgumentError(f"gcd(p, k) = gcd({p}, {k}) != 1")


def premise_general(p: int, k: int, f) -> TransferPremise:
    """p > (k*S/phi(k))^(phi(k)/(2*ord_k(p))), plus p^(2b) > S^k when S >= 3."""
    _check_coprime(p, k)
    f = _as_cycint(k, f)
    b = mult_order(p, k)
    phi = euler_phi(k)
    s = f.square_sum
    lhs = p ** (2 * b) * phi**phi
    rhs = k**phi * s**phi
    return TransferPremise(
        variant="general",
        p=p,
        k=k,
        order=b,
        square_sum=s,
        a=max(f.positive_part, f.negative_part),
        coeff_sum=f.coeff_sum,
        lhs=lhs,
        rhs=rhs,
        verdict=lhs > rhs,
        resulting_verdict=(p ** (2 * b) > s**k) if s >= 3 else None,
    )


def premise_prime_k(p: int, k: int, f) -> TransferPremise:
    """The circulant-based premise for prime k, split on whether sum a_i vanishes."""
    if not is_prime(k):
        raise InvalidArgumentError(f"k = {k} is not prime")
    _check_coprime(p, k)
    f = _as_cycint(k, f)
    b = mult_order(p, k)
    a = max(f.positive_part, f.negative_part)
    s = f.coeff_sum
    if s == 0:
        variant, lhs, rhs = "prime-zero-sum", p**b, k * a ** (k - 1)
    else:
        variant, lhs, rhs = "prime-nonzero-sum", p**b * abs(s), a**k
    return TransferPremise(
        variant=variant,
        p=p,
        k=k,
        order=b,
        square_sum=f.square_sum,
        a=a,
        coeff_sum=s,
        lhs=lhs,
        rhs=rhs,
        verdict=lhs > rhs,
    )


def eval_at_root(cfg: CyclotomyConfig, f: Sequence[int]) -> FieldElement:
    """f(g^e) in F_q by Horner's rule."""
    field = field_for(cfg.spec)
    root = field.pow(cfg.g, cfg.e)
    coeffs = f.coeffs if isinstance(f, CycInt) else tuple(f)
    acc = 0
    for c in reversed(coeffs):
        acc = field.add(field.mul(acc, root), field.from_int(c))
    return acc


def check_equivalence(cfg: CyclotomyConfig, f: CycInt) -> EquivalenceResult:
    """
    Compare f(g^e) = 0 over F_q with f(zeta_k) = 0 over C.

    consistent requires agreement under every premise that holds, and
    c_zero => fq_zero unconditionally.
    """
    if f.k != cfg.k:
        raise InvalidArgumentError(f"f has order {f.k}, config has k = {cfg.k}")

    fq_zero = eval_at_root(cfg, f) == 0
    c_zero = divides_phi(f)
    premise = premise_general(cfg.p, cfg.k, f)
    prime_premise = premise_prime_k(cfg.p, cfg.k, f) if is_prime(cfg.k) else None

    consistent = not c_zero or fq_zero
    for pr in (premise, prime_premise):
        if pr is not None and pr.verdict:
            consistent = consistent and fq_zero == c_zero

    if not consistent:
        log_event(
            "transfer_inconsistent",
            {"q": cfg.q, "e": cfg.e, "k": cfg.k, "coeffs": list(f.coeffs)},
            level="ERROR",
        )
    return EquivalenceResult(
        fq_zero=fq_zero,
        c_zero=c_zero,
        premise=premise,
        prime_premise=prime_premise,
        consistent=consistent,
    )


def norm_congruence_check(cfg: CyclotomyConfig, f: CycInt) -> bool:
    """True iff p^ord_k(p) divides N(f); needs f(g^e) = 0 in F_q."""
    if f.k != cfg.k:
        raise InvalidArgumentError(f"f has order {f.k}, config has k = {cfg.k}")
    if eval_at_root(cfg, f) != 0:
        raise InvalidArgumentError("norm_congruence_check needs f(g^e) = 0 in F_q")
    return norm(f) % cfg.p ** mult_order(cfg.p, cfg.k) == 0


def iter_fq_zeros(
    cfg: CyclotomyConfig, coeff_range: Sequence[int] = (-1, 0, 1), nontrivial: bool = True
) -> Iterator[CycInt]:
    """
    Coefficient vectors over coeff_range with f(g^e) = 0, in itertools.product order.

    nontrivial skips the zero vector and multiples of Phi_k.
    """
    for coeffs in product(coeff_range, repeat=cfg.k):
        if nontrivial and not any(coeffs):
            continue
        if eval_at_root(cfg, coeffs) != 0:
            continue
        f = CycInt(k=cfg.k, coeffs=coeffs)
        if nontrivial and divides_phi(f):
            continue
        yield f


def find_fq_zero(
    cfg: CyclotomyConfig, coeff_range: Sequence[int] = (-2, -1, 0, 1, 2), limit: int = 200_000
) -> Optional[CycInt]:
    """
    First nontrivial f with f(g^e) = 0 over coeff_range^k, or None.

    Raises:
        ResourceLimitError: the search space has more than `limit` vectors
    """
    size = len(coeff_range) ** cfg.k
    if size > limit:
        raise ResourceLimitError("FQ_ZERO_SEARCH_LIMIT", limit, size)
    return next(iter_fq_zeros(cfg, coeff_range), None)
