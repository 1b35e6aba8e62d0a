from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from instanton_arith.errors import ArithDataError
from instanton_arith.rho import (
    quotient_cylinder_dim,
    reconstruct,
    rho_irreducible,
    rho_reducible,
    rho_reducible_exact,
    rho_reducible_report,
    rho_table,
    solve_rho_alpha,
)
from instanton_arith.seifert import normalize, quotient

SIGMA = normalize((2, 3, 5))
Q7 = quotient(SIGMA, 7)
Q11 = quotient(SIGMA, 11)


def kl_sum_60(p, a, b, l):
    """The trigonometric sum at 60 digits, written out term by term."""
    A = a[0] * a[1] * a[2]
    with mpmath.workdps(60):
        pi = mpmath.pi
        total = mpmath.mpf(0)
        for k in range(1, p):
            s = mpmath.sin(pi * k * l / p) ** 2
            total += -2 * s / p + 2 * s / (A * p * mpmath.sin(pi * k / p) ** 2)
        for ai, bi in zip(a, b):
            for m1 in range(1, p):
                s = mpmath.sin(pi * m1 * l / p) ** 2
                for m2 in range(1, ai):
                    total += 2 * s * mpmath.cot(pi * m2 / ai) * mpmath.cot(pi * m1 / p - pi * m2 * bi / ai) / (p * ai)
        return total


def test_known_values_p7():
    assert [rho_reducible(Q7, l) for l in range(7)] == [Fraction(v, 7) for v in (0, -1, -11, -9, -9, -11, -1)]


@pytest.mark.parametrize("Q", [Q7, Q11, quotient(SIGMA, 13)], ids=lambda q: q.label())
def test_exact_matches_60_digit_sum(Q):
    for l in range(Q.p):
        exact = rho_reducible_exact(Q, l)
        with mpmath.workdps(60):
            assert abs(kl_sum_60(Q.p, SIGMA.a, SIGMA.b, l) - mpmath.mpf(exact.numerator) / exact.denominator) \
                < mpmath.mpf(10) ** -45


@pytest.mark.parametrize("Q", [Q7, Q11], ids=lambda q: q.label())
def test_dual_oracle_agreement(Q):
    reps = rho_table(Q, "both")
    assert all(r.agree for r in reps)
    vals = [r.exact for r in reps]
    assert vals[0] == 0
    assert all(vals[l] == vals[Q.p - l] for l in range(1, Q.p))


def test_table_is_independent_of_jobs():
    serial = [r.to_json() for r in rho_table(Q7, "exact")]
    parallel = [r.to_json() for r in rho_table(Q7, "exact", jobs=2)]
    assert serial == parallel


def test_other_manifold():
    Q = quotient(normalize((2, 3, 7)), 5)
    for l in range(5):
        assert rho_reducible(Q, l, "both") == rho_reducible_exact(Q, l)


def test_report_labels_numeric_as_approximate():
    j = rho_reducible_report(Q7, 1, "both").to_json()
    assert set(j["numeric"]) == {"approximate", "reconstructed"}
    assert j["agree"] is True and j["exact"] == "-1/7"


def test_precision_env(monkeypatch):
    monkeypatch.setenv("INSTANTON_ARITH_PRECISION_BITS", "128")
    assert rho_reducible_report(Q7, 2, "numeric").reconstructed == Fraction(-11, 7)
    monkeypatch.setenv("INSTANTON_ARITH_PRECISION_BITS", "12")
    with pytest.raises(ArithDataError):
        rho_reducible_report(Q7, 2, "numeric")


def test_quotient_b_option_changes_input_only():
    a = rho_reducible_exact(Q7, 1, seifert_b="quotient")
    b = rho_reducible_exact(Q7, 1, seifert_b="sphere")
    assert isinstance(a, Fraction) and isinstance(b, Fraction)


def test_bad_inputs():
    with pytest.raises(ArithDataError):
        rho_reducible(Q7, 7)
    with pytest.raises(ArithDataError):
        rho_reducible_report(Q7, 1, "fast")


def test_reconstruct():
    with mpmath.workprec(200):
        assert reconstruct(mpmath.mpf(-11) / 7, 1000) == Fraction(-11, 7)


def test_irreducible_table():
    assert rho_irreducible(SIGMA, (1, 2, 2)) == Fraction(-97, 15)
    with pytest.raises(ArithDataError) as exc:
        rho_irreducible(normalize((2, 3, 7)), (1, 2, 2))
    assert exc.value.code == "rho-table-incomplete"


def test_solve_example():
    assert solve_rho_alpha(Q7, Fraction(1, 120), 1, dim=1) == Fraction(-328, 105)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([7, 11]), st.integers(1, 10), st.integers(1, 120), st.integers(-6, 6))
def test_dimension_round_trip(p, l, num, dim):
    """Solving for rho_alpha and feeding it back returns the prescribed dimension."""
    Q = Q7 if p == 7 else Q11
    l %= p
    ell = Fraction(num, 120)
    r = solve_rho_alpha(Q, ell, l, dim=dim)
    assert quotient_cylinder_dim(Q, ell, l, r) == dim
    with pytest.raises(ArithDataError) as exc:
        quotient_cylinder_dim(Q, ell, l, r + 1)
    assert exc.value.code == "inconsistent-rho"
