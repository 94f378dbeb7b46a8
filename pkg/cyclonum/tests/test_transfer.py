"""Tests for the F_q / C transfer criteria."""

import pytest
from pydantic import ValidationError

from cyclonum.cyclo_integers import CycInt, cyclotomic_poly, divides_phi, norm
from cyclonum.cyclotomy import admissible_configs
from cyclonum.errors import InvalidArgumentError, ResourceLimitError
from cyclonum.finite_field import mult_order
from cyclonum.transfer import (
    TransferPremise,
    check_equivalence,
    eval_at_root,
    find_fq_zero,
    iter_fq_zeros,
    norm_congruence_check,
    premise_general,
    premise_prime_k,
)


def padded_phi(k, multiplier=(1,)):
    phi = cyclotomic_poly(k)
    coeffs = [0] * k
    for i, m in enumerate(multiplier):
        for j, c in enumerate(phi):
            coeffs[i + j] += m * c
    return CycInt(k=k, coeffs=tuple(coeffs))


def test_premise_general_examples():
    """Test the general transfer premise."""
    f = CycInt.from_terms(13, {0: 1, 1: 1, 2: 1})
    premise = premise_general(1301, 13, f)
    assert (premise.order, premise.square_sum) == (1, 3)
    assert premise.lhs == 1301**2 * 12**12
    assert premise.rhs == 13**12 * 3**12
    assert premise.verdict
    assert premise.variant == "general"

    premise = premise_general(3, 4, (1, 1, 1, 0))
    assert premise.order == 2
    assert (premise.lhs, premise.rhs) == (324, 144)
    assert premise.verdict


def test_premise_general_characteristic_two():
    """Test the general premise with p = 2."""
    # 2^4 * 2^2 = 64 against 3^2 * 3^2 = 81
    premise = premise_general(2, 3, (1, 1, 1))
    assert (premise.lhs, premise.rhs) == (64, 81)
    assert not premise.verdict
    assert premise_general(2, 3, (1, 1, 0)).verdict
    assert not premise_general(2, 3, (3, 2, 1)).verdict


def test_premise_general_resulting_variant():
    """Test the premise verdict stated for the resulting sum."""
    premise = premise_general(1301, 13, CycInt.from_terms(13, {0: 1, 1: 1, 2: 1}))
    assert premise.resulting_verdict == (1301**2 > 3**13)
    assert premise_general(7, 3, (1, -1, 0)).resulting_verdict is None


def test_premise_general_rejects_non_coprime():
    """Test the general premise with p dividing k."""
    with pytest.raises(InvalidArgumentError):
        premise_general(3, 6, (1, 0, 0, 0, 0, 0))
    with pytest.raises(InvalidArgumentError):
        premise_general(5, 3, CycInt.one(4))


def test_premise_prime_k_examples():
    """Test the prime-k transfer premise."""
    f = (1, 1, -2)
    premise = premise_prime_k(7, 3, f)
    assert premise.variant == "prime-zero-sum"
    assert premise.a == 2
    assert (premise.lhs, premise.rhs) == (7, 12)
    assert not premise.verdict

    premise = premise_prime_k(13, 3, f)
    assert (premise.lhs, premise.rhs) == (13, 12)
    assert premise.verdict

    for p in (2, 5, 101):
        premise = premise_prime_k(p, 3, CycInt.one(3))
        assert premise.variant == "prime-nonzero-sum"
        assert premise.verdict

    with pytest.raises(InvalidArgumentError):
        premise_prime_k(7, 4, CycInt.one(4))


def test_transfer_premise_verdict_must_follow():
    """Test that the premise verdict matches its integers."""
    with pytest.raises(ValidationError):
        TransferPremise(
            variant="general", p=7, k=3, order=1, square_sum=2, a=1,
            coeff_sum=0, lhs=5, rhs=9, verdict=True,
        )


def test_eval_at_root(f5_config):
    """Test evaluation at a k-th root of unity in F_q."""
    # g^e = 4 = -1 in F_5
    assert eval_at_root(f5_config, (1, 1)) == 0
    assert eval_at_root(f5_config, (1, 0)) == 1
    assert eval_at_root(f5_config, CycInt(k=2, coeffs=(3, 1))) == 2


def test_check_equivalence_examples():
    """Test transfer equivalence checks."""
    for cfg in admissible_configs(200, k_max=12):
        ones = CycInt(k=cfg.k, coeffs=(1,) * cfg.k)
        result = check_equivalence(cfg, ones)
        assert result.fq_zero and result.c_zero and result.consistent

        result = check_equivalence(cfg, CycInt.one(cfg.k))
        assert not result.fq_zero and not result.c_zero and result.consistent


def test_check_equivalence_1301(config_1301):
    """Test transfer equivalence at p = 1301."""
    f = CycInt.from_terms(13, {0: 1, 3: 1, 7: -1})
    result = check_equivalence(config_1301, f)
    assert result.premise.verdict
    assert result.prime_premise is not None
    assert not result.fq_zero and not result.c_zero
    assert result.consistent


def test_check_equivalence_rejects_mismatched_k(f7_config):
    """Test equivalence with mismatched k."""
    with pytest.raises(InvalidArgumentError):
        check_equivalence(f7_config, CycInt.one(4))


def test_phi_multiples_vanish_everywhere(rng):
    """Test that multiples of the cyclotomic polynomial vanish at every root."""
    for cfg in admissible_configs(400, k_max=16):
        f = padded_phi(cfg.k, [rng.randint(-2, 2) for _ in range(cfg.k - len(cyclotomic_poly(cfg.k)) + 1)])
        result = check_equivalence(cfg, f)
        assert result.c_zero and result.fq_zero


def test_norm_congruence_examples(f7_config):
    """Test that F_q zeros have norm divisible by p."""
    assert norm_congruence_check(f7_config, padded_phi(3))

    f = find_fq_zero(f7_config)
    assert f is not None
    assert eval_at_root(f7_config, f) == 0
    assert not divides_phi(f)
    assert norm_congruence_check(f7_config, f)
    assert norm(f) % 7 == 0

    with pytest.raises(InvalidArgumentError):
        norm_congruence_check(f7_config, CycInt.one(3))


def test_iter_fq_zeros_are_nontrivial(f7_config):
    """Test zero search over small coefficient ranges."""
    # with coefficients in {-1, 0, 1} only multiples of Phi_3 vanish at 2 in F_7
    assert list(iter_fq_zeros(f7_config)) == []
    zeros = list(iter_fq_zeros(f7_config, coeff_range=range(-2, 3)))
    assert zeros
    for f in zeros:
        assert any(f.coeffs)
        assert eval_at_root(f7_config, f) == 0
        assert not divides_phi(f)


def test_find_fq_zero_limit(config_1301):
    """Test the zero search limit."""
    with pytest.raises(ResourceLimitError) as exc:
        find_fq_zero(config_1301)
    assert exc.value.bound_name == "FQ_ZERO_SEARCH_LIMIT"


def test_transfer_property_sweep(rng):
    """Test transfer consistency on random configs."""
    configs = list(admissible_configs(3000, k_max=12))
    premise_true = 0
    for _ in range(10_000):
        cfg = rng.choice(configs)
        f = CycInt(k=cfg.k, coeffs=tuple(rng.randint(-3, 3) for _ in range(cfg.k)))
        result = check_equivalence(cfg, f)
        assert result.consistent, (cfg.label(), f.coeffs)
        if result.c_zero:
            assert result.fq_zero
        if result.premise.verdict:
            premise_true += 1
            assert result.fq_zero == result.c_zero
        if result.fq_zero:
            assert norm(f) % cfg.p ** mult_order(cfg.p, cfg.k) == 0
    assert premise_true > 0


def test_harvested_zeros_satisfy_congruence():
    """Test that found zeros are consistent and premise-false."""
    for cfg in admissible_configs(60, k_max=6):
        for i, f in enumerate(iter_fq_zeros(cfg)):
            assert norm_congruence_check(cfg, f)
            result = check_equivalence(cfg, f)
            assert result.consistent
            assert not result.premise.verdict, (cfg.label(), f.coeffs)
            if i >= 20:
                break
