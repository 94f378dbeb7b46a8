"""Tests for cyclotomic integers: norms, circulants, determinants and norm bounds."""

from fractions import Fraction

import mpmath
import pytest
import sympy
from hypothesis import given, strategies as st
from pydantic import ValidationError

from cyclonum.cyclo_integers import (
    CycInt,
    circulant,
    circulant_eigenvalues,
    cyclotomic_poly,
    det_exact,
    divides_phi,
    mul_mod_phi,
    norm,
    norm_bound_general,
    norm_bound_obvious,
    norm_bound_prime,
    norm_via_circulant,
    reduce_mod_phi,
    schinzel_bound,
)
from cyclonum.errors import InvalidArgumentError

X = sympy.Symbol("x")
SMALL_PRIMES = [p for p in range(2, 32) if sympy.isprime(p)]


def random_cycint(rng, k, lo=-3, hi=3):
    return CycInt(k=k, coeffs=tuple(rng.randint(lo, hi) for _ in range(k)))


@st.composite
def cycint_pairs(draw, max_k=12):
    k = draw(st.integers(min_value=2, max_value=max_k))
    coeffs = st.lists(st.integers(min_value=-4, max_value=4), min_size=k, max_size=k)
    return CycInt(k=k, coeffs=tuple(draw(coeffs))), CycInt(k=k, coeffs=tuple(draw(coeffs)))


def test_cycint_validation():
    """Test cyclotomic integer validation."""
    with pytest.raises(ValidationError):
        CycInt(k=3, coeffs=(1, 2))
    with pytest.raises(ValidationError):
        CycInt(k=1, coeffs=(1,))


def test_cycint_helpers():
    """Test cyclotomic integer helper properties."""
    f = CycInt(k=5, coeffs=(2, -1, 0, 3, -4))
    assert f.coeff_sum == 0
    assert f.square_sum == 30
    assert f.abs_sum == 10
    assert (f.positive_part, f.negative_part) == (5, 5)
    assert CycInt.from_terms(4, {0: 1, 5: 2, 1: -1}).coeffs == (1, 1, 0, 0)
    assert CycInt.from_json(f.to_json()) == f


def test_cyclotomic_poly_examples():
    """Test known cyclotomic polynomials."""
    assert cyclotomic_poly(1) == (-1, 1)
    assert cyclotomic_poly(3) == (1, 1, 1)
    assert cyclotomic_poly(6) == (1, -1, 1)


def test_cyclotomic_poly_matches_sympy():
    """Test cyclotomic polynomials against sympy."""
    for k in range(1, 120):
        expected = sympy.Poly(sympy.cyclotomic_poly(k, X), X).all_coeffs()[::-1]
        assert list(cyclotomic_poly(k)) == expected
        assert len(cyclotomic_poly(k)) - 1 == sympy.totient(k)


def test_reduce_mod_phi_needs_k_for_sequences():
    """Test that reducing a bare sequence needs k."""
    assert reduce_mod_phi([1, 1, 1], 3) == (0, 0)
    with pytest.raises(InvalidArgumentError):
        reduce_mod_phi([1, 1, 1])


def test_norm_examples():
    """Test known norms."""
    for k in (2, 3, 7, 12):
        assert norm(CycInt.one(k)) == 1
        assert norm(CycInt.zero(k)) == 0
    assert norm(CycInt(k=3, coeffs=(1, -1, 0))) == 3
    assert norm(CycInt(k=3, coeffs=(1, 1, 0))) == 1


def test_norm_matches_sympy_resultant(rng):
    """Test norms against sympy resultants."""
    for _ in range(300):
        k = rng.randint(2, 16)
        f = random_cycint(rng, k)
        if not any(f.coeffs):
            continue
        phi = sympy.cyclotomic_poly(k, X)
        poly = sum(c * X**i for i, c in enumerate(f.coeffs))
        assert norm(f) == sympy.resultant(phi, poly, X)


def test_norm_zero_iff_phi_divides(rng):
    """Test that the norm vanishes exactly on multiples of the cyclotomic polynomial."""
    for k in range(2, 25):
        phi = cyclotomic_poly(k)
        for _ in range(5):
            mult = [rng.randint(-2, 2) for _ in range(k - len(phi) + 1)]
            coeffs = [0] * k
            for i, m in enumerate(mult):
                for j, c in enumerate(phi):
                    coeffs[i + j] += m * c
            f = CycInt(k=k, coeffs=tuple(coeffs))
            assert divides_phi(f)
            assert norm(f) == 0
        f = random_cycint(rng, k)
        assert (norm(f) == 0) == divides_phi(f)


def test_mul_mod_phi_examples():
    """Test multiplication modulo the cyclotomic polynomial."""
    f = CycInt(k=3, coeffs=(1, -1, 0))
    g = CycInt(k=3, coeffs=(1, 0, -1))
    assert mul_mod_phi(f, CycInt.one(3)).coeffs == reduce_mod_phi(f) + (0,)
    assert norm(mul_mod_phi(f, g)) == 9
    assert mul_mod_phi(f, CycInt.zero(3)) == CycInt.zero(3)
    with pytest.raises(InvalidArgumentError):
        mul_mod_phi(f, CycInt.one(4))


def test_norm_multiplicative(rng):
    """Test norm multiplicativity on examples."""
    for _ in range(1000):
        k = rng.randint(2, 14)
        f, g = random_cycint(rng, k), random_cycint(rng, k)
        assert norm(mul_mod_phi(f, g)) == norm(f) * norm(g)


@given(cycint_pairs())
def test_norm_multiplicative_property(pair):
    """Test norm multiplicativity on random inputs."""
    f, g = pair
    assert norm(mul_mod_phi(f, g)) == norm(f) * norm(g)


def test_det_exact_examples():
    """Test exact determinants."""
    assert det_exact([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == 1
    assert det_exact([[1, -1], [2, 1]]) == 3
    assert det_exact(circulant((1, 1, 0))) == 2
    assert det_exact([[0, 1], [1, 0]]) == -1
    assert det_exact([[0, 0], [1, 0]]) == 0
    with pytest.raises(InvalidArgumentError):
        det_exact([])
    with pytest.raises(InvalidArgumentError):
        det_exact([[1, 2]])


def test_det_exact_matches_sympy(rng):
    """Test exact determinants against sympy."""
    for _ in range(300):
        n = rng.randint(1, 7)
        m = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(n)]
        assert det_exact(m) == sympy.Matrix(m).det()


def test_circulant_examples():
    """Test circulant matrix construction."""
    assert circulant((1, 1, 0)) == [[1, 1, 0], [0, 1, 1], [1, 0, 1]]
    assert circulant((4, 7)) == [[4, 7], [7, 4]]
    assert det_exact(circulant((1, 1, 1))) == 0


def test_norm_via_circulant_examples():
    """Test norms computed from the circulant."""
    assert norm_via_circulant(CycInt(k=3, coeffs=(1, 1, 0))) == 1
    assert norm_via_circulant(CycInt(k=3, coeffs=(1, -1, 0))) == 3
    assert norm_via_circulant(CycInt.one(5)) == 1
    with pytest.raises(InvalidArgumentError):
        norm_via_circulant(CycInt.one(4))


def test_norm_via_circulant_sweep(rng):
    """Test circulant norms against direct norms."""
    for i in range(1000):
        k = SMALL_PRIMES[i % len(SMALL_PRIMES)]
        f = random_cycint(rng, k)
        n = norm(f)
        assert norm_via_circulant(f) == n
        if i % 10 == 0:
            assert det_exact(circulant(f)) == f.coeff_sum * n


def test_circulant_eigenvalues_product_matches_det(rng):
    """Test that circulant eigenvalues multiply to the determinant."""
    for k in (3, 5, 6, 8):
        f = random_cycint(rng, k)
        eigenvalues = circulant_eigenvalues(f, dps=60)
        with mpmath.workdps(60):
            product = mpmath.fprod(eigenvalues)
            assert abs(product - det_exact(circulant(f))) < mpmath.mpf(10) ** -40
            assert abs(eigenvalues[0] - f.coeff_sum) < mpmath.mpf(10) ** -40


def test_schinzel_bound_examples():
    """Test the determinant bound on examples."""
    assert schinzel_bound([[1, -1], [2, 1]]) == 3
    assert schinzel_bound([[1, 0], [0, 1]]) == 1
    assert schinzel_bound([[1, 1], [1, 1]]) == 4


def test_schinzel_bound_sweep(rng):
    """Test that the determinant bound holds on random circulants."""
    for _ in range(10_000):
        n = rng.randint(1, 8)
        m = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(n)]
        assert abs(det_exact(m)) <= schinzel_bound(m)


def test_norm_bound_general_examples():
    """Test the general norm bound on examples."""
    bound = norm_bound_general(CycInt(k=3, coeffs=(1, -1, 0)))
    assert (bound.norm, bound.square_sum, bound.phi) == (3, 2, 2)
    assert bound.lhs == bound.rhs == 36
    assert bound.holds
    assert bound.resulting_holds is None

    bound = norm_bound_general(CycInt.one(5))
    assert (bound.lhs, bound.rhs) == (256, 625)
    assert bound.holds


def test_norm_bound_general_sweep(rng):
    """Test that the general norm bound holds on random inputs."""
    for _ in range(10_000):
        k = rng.randint(2, 20)
        f = random_cycint(rng, k, -5, 5)
        n = norm(f)
        bound = norm_bound_general(f, n)
        assert bound.holds, f
        if bound.resulting_holds is not None:
            assert bound.resulting_holds, f
        assert norm_bound_obvious(f, n).holds, f


def test_norm_bound_obvious():
    """Test the absolute-sum norm bound."""
    bound = norm_bound_obvious(CycInt(k=5, coeffs=(1, 1, 0, 0, 0)))
    assert bound.abs_sum == 2
    assert bound.bound == 16
    assert bound.holds


def test_norm_bound_prime_examples():
    """Test the prime-k norm bound on examples."""
    bound = norm_bound_prime(CycInt(k=3, coeffs=(1, -1, 0)))
    assert bound.case == "a"
    assert bound.bound == 3 and bound.norm == 3 and bound.holds

    bound = norm_bound_prime(CycInt(k=3, coeffs=(1, 1, 0)))
    assert bound.case == "b"
    assert (bound.a_plus, bound.a_minus, bound.a) == (2, 0, 2)
    assert bound.bound == 4 and bound.holds

    for c in (1, 2, 5):
        bound = norm_bound_prime(CycInt(k=5, coeffs=(c, 0, 0, 0, 0)))
        assert bound.bound == Fraction(c**4) == bound.norm

    assert norm_bound_prime(CycInt(k=3, coeffs=(1, 1, 0))).to_dict()["bound"] == "4"
    with pytest.raises(InvalidArgumentError):
        norm_bound_prime(CycInt.one(9))


def test_norm_bound_prime_sweep(rng):
    """Test that the prime-k norm bound holds on random inputs."""
    for i in range(10_000):
        k = SMALL_PRIMES[i % 6]
        f = random_cycint(rng, k)
        assert norm_bound_prime(f).holds, f
