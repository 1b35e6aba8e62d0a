from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from instanton_arith.errors import ArithDataError
from instanton_arith.flatconn import (
    auckly_cs,
    choose_representative,
    cs_irreducible,
    cs_reducible,
    energy_class,
    energy_numerator,
    enumerate_irreducible,
    irreducible,
    label_numerator,
    reducible,
    sigma_235_connections,
    trivial,
)
from instanton_arith.seifert import normalize, quotient


def su2_irreducible_count(a, grid: int = 20001) -> int:
    """Count conjugacy classes of irreducible SU(2) representations numerically.

    x_i has rotation angle pi*l_i/a_i, h maps to eps = +-1 with
    x_i^{a_i} = eps^{b_i}, and x1 x2 x3 = 1.  Fixing x1 and rotating x2 about
    an axis at angle phi from x1's, Re(x1 x2) sweeps an interval; an
    irreducible solution exists exactly when cos(theta_3) lies strictly inside.
    """
    b = normalize(a).b
    phi = np.linspace(0.0, np.pi, grid)
    count = 0
    for eps in (1, -1):
        choices = []
        for ai, bi in zip(a, b):
            want = eps ** (bi % 2)
            choices.append([np.pi * l / ai for l in range(1, ai) if (-1) ** l == want])
        for t1, t2, t3 in product(*choices):
            re = np.cos(t1) * np.cos(t2) - np.sin(t1) * np.sin(t2) * np.cos(phi)
            c3 = np.cos(t3)
            if re.min() + 1e-9 < c3 < re.max() - 1e-9:
                count += 1
    return count


@pytest.mark.parametrize("a", [(2, 3, 5), (2, 3, 7), (2, 3, 11), (2, 5, 7), (3, 4, 5), (2, 3, 13)])
def test_enumeration_matches_su2_grid(a):
    assert len(enumerate_irreducible(normalize(a))) == su2_irreducible_count(a)


def test_sigma_235_table():
    theta, a1, a2 = sigma_235_connections()
    assert (a1.ells, a2.ells) == ((1, 2, 2), (1, 2, 4))
    assert (a1.minus_cs, a2.minus_cs) == (Fraction(49, 120), Fraction(1, 120))
    assert (a1.cs, a2.cs) == (Fraction(71, 120), Fraction(119, 120))
    assert (a1.mu, a2.mu, theta.mu) == (5, 1, -3)
    assert (a1.rho, a2.rho) == (Fraction(-97, 15), Fraction(-73, 15))
    assert theta.h0 == 3 and theta.stab_dim == 3 and a1.stab_dim == 0


def test_sigma_237_values():
    s = normalize((2, 3, 7))
    vals = sorted(c.minus_cs for c in enumerate_irreducible(s))
    assert vals == [Fraction(25, 168), Fraction(121, 168)]


@pytest.mark.parametrize("a", [(2, 3, 5), (2, 3, 7), (2, 3, 11), (2, 5, 7), (2, 3, 13)])
def test_minus_cs_is_a_square_over_4a(a):
    s = normalize(a)
    for c in enumerate_irreducible(s):
        assert c.verified
        e = label_numerator(a, c.ells)
        assert c.minus_cs % 1 == Fraction(e * e, 4 * s.product) % 1


def test_unverified_labels_are_flagged_not_hidden():
    s = normalize((3, 4, 5))
    flags = {c.ells: c.verified for c in enumerate_irreducible(s)}
    assert flags[(2, 2, 2)] is False and flags[(2, 2, 4)] is False
    assert all(v for k, v in flags.items() if k not in {(2, 2, 2), (2, 2, 4)})
    with pytest.raises(ArithDataError) as exc:
        choose_representative(s, (2, 2, 2))
    assert exc.value.code == "no-consistent-representative"


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([(2, 3, 5), (2, 3, 7), (2, 3, 11), (2, 5, 7)]), st.integers(-3, 3), st.integers(-3, 3),
       st.data())
def test_value_is_independent_of_presentation(a, n1, n2, data):
    """Shifting b_i by multiples of a_i and picking other rho_i leaves CS unchanged."""
    s = normalize(a)
    t = s.shifted((n1, n2, -n1 - n2))
    for c in enumerate_irreducible(s):
        rep, _ = choose_representative(s, c.ells)
        base = auckly_cs(a, s.pairs, 0, rep)
        assert auckly_cs(a, t.pairs, 0, rep) == base
        rhos = [(-pow(bi, -1, ai)) % ai + ai * data.draw(st.integers(-2, 2)) for ai, bi in t.pairs]
        assert auckly_cs(a, t.pairs, 0, rep, rhos=rhos) == base
        # the formula only sees l_i mod a_i
        assert auckly_cs(a, s.pairs, 0, tuple(l + ai for l, ai in zip(rep, a))) == base


def test_auckly_rejects_bad_rho():
    s = normalize((2, 3, 5))
    with pytest.raises(ArithDataError):
        auckly_cs(s.a, s.pairs, 0, (1, 2, 2), rhos=(0, 0, 0))


@pytest.mark.parametrize("p", [7, 11, 13, 17, 19])
@pytest.mark.parametrize("a", [(2, 3, 5), (2, 3, 7)])
def test_quotient_values_lift_to_the_sphere(a, p):
    if any(ai % p == 0 for ai in a):
        pytest.skip("action not free")
    s = normalize(a)
    Q = quotient(s, p)
    for c in enumerate_irreducible(s):
        assert (p * cs_irreducible(Q, c.ells)) % 1 == c.cs


def test_quotient_example_value():
    Q = quotient(normalize((2, 3, 5)), 7)
    assert cs_irreducible(Q, (1, 2, 2)) == Fraction(113, 120)


def test_reducible_values():
    s = normalize((2, 3, 5))
    assert cs_reducible(quotient(s, 7), 1) == Fraction(4, 7)
    assert cs_reducible(quotient(s, 11), 7) == Fraction(2, 11)
    assert cs_reducible(quotient(s, 7), 0) == 0
    beta = reducible(quotient(s, 7), 1)
    assert beta.h0 == 1 and beta.stab_dim == 1 and beta.name == "beta1"


@given(st.sampled_from([7, 11, 13]), st.integers(0, 40))
def test_reducible_cs_scan(p, k):
    """n0 from a direct scan of n0 * a1a2a3 == k (mod p)."""
    Q = quotient(normalize((2, 3, 5)), p)
    n0 = next(n for n in range(p) if (n * 30 - k) % p == 0)
    assert cs_reducible(Q, k) == Fraction(n0 * k, p) % 1


def test_energy_classes():
    theta, a1, a2 = sigma_235_connections()
    assert energy_class(a1, theta) == Fraction(49, 120)
    assert energy_class(a1, a2) == Fraction(2, 5)
    assert energy_class(a2, theta) == Fraction(1, 120)
    assert energy_class(a1, a1) == 1


@pytest.mark.parametrize("ell,e", [(Fraction(49, 120), 7), (Fraction(1, 120), 1), (1, 60)])
def test_energy_numerator(ell, e):
    assert energy_numerator(ell, normalize((2, 3, 5))) == e


def test_energy_numerator_scan_oracle():
    s = normalize((2, 3, 5))
    for e in range(1, 61):
        ell = Fraction(e * e, 120) % 1 or Fraction(1)
        got = energy_numerator(ell, s)
        assert got <= e and Fraction(got * got, 120) % 1 == Fraction(e * e, 120) % 1


def test_not_instanton_type():
    with pytest.raises(ArithDataError) as exc:
        energy_numerator(Fraction(1, 7), normalize((2, 3, 5)))
    assert exc.value.code == "not-instanton-type"


def test_invalid_triple():
    with pytest.raises(ArithDataError):
        irreducible(normalize((2, 3, 5)), (0, 2, 2))


def test_json_shape():
    _, a1, _ = sigma_235_connections()
    j = a1.to_json()
    assert j["cs"] == "71/120" and j["minus_cs"] == "49/120"
    assert j["triple"] == [1, 2, 2] and j["route_agreement"] is True
    assert trivial().to_json()["name"] == "theta"
