import json
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from instanton_arith.errors import ArithDataError
from instanton_arith.exactnum import primes_between, residue_of_rational
from instanton_arith.gsig import (
    ExtensionData,
    FixedPointDatum,
    FixedSphereDatum,
    canonical_classes,
    canonical_pair,
    congruence_residues,
    e8_plumbing,
    eta_plumbing,
    example_p7,
    expected_constants,
    gsig_identity_check,
    lefschetz_point_term,
    lefschetz_route_agreement,
    lefschetz_sphere_term,
    load_points,
    prove_theorem_b,
    search_extensions,
    series_expand_term,
    theorem_a_filter,
    twisted_congruence_residue,
    twisted_rhs,
)
from instanton_arith.gsig.search import search_space_size
from instanton_arith.gsig.theorem_b import distinguished_point_difference

F = Fraction
EXAMPLE = ((1, 1),) * 3 + ((1, -3),) + ((1, -1),) * 2 + ((2, 2),) * 2 + ((3, 3),)


# data


def test_canonical_pair_orbit():
    assert canonical_pair(1, -3, 7) == (1, 4)
    assert canonical_pair(-4, 5, 7) == (2, 4)
    assert len(canonical_classes(7)) == 12
    assert len(canonical_classes(11)) == 30


def test_lift_weights_are_half_integers():
    FixedPointDatum(1, 2, F(3, 2))
    with pytest.raises(ArithDataError):
        FixedPointDatum(1, 2, F(1, 3))


def test_degenerate_pairs_rejected():
    with pytest.raises(ArithDataError) as exc:
        ExtensionData(7, (FixedPointDatum(7, 1),))
    assert exc.value.code == "degenerate-rotation-pair"
    with pytest.raises(ArithDataError):
        ExtensionData(5)


def test_points_file():
    pts = load_points(json.dumps([{"a": 1, "b": 2, "lambda": "1/2"}, {"a": 3, "b": 3}]))
    assert pts == [FixedPointDatum(1, 2, F(1, 2)), FixedPointDatum(3, 3)]
    with pytest.raises(ArithDataError):
        load_points("{")
    with pytest.raises(ArithDataError):
        load_points('[{"a": 1}]')


def test_e8_data():
    e8 = e8_plumbing(7)
    assert e8.euler_count_ok()
    assert example_p7().euler_count_ok()


# exact Lefschetz terms


@pytest.mark.parametrize("p", [7, 11, 13])
def test_orbit_invariance(p):
    for a, b in [(1, 2), (2, 5), (3, 3), (1, p - 1)]:
        t = lefschetz_point_term(FixedPointDatum(a, b), p)
        for c, d in [(b, a), (-a, -b), (-b, -a), (a + p, b - p)]:
            assert lefschetz_point_term(FixedPointDatum(c, d), p) == t


def test_point_term_numeric():
    import mpmath

    t = lefschetz_point_term(FixedPointDatum(2, 3), 7)
    with mpmath.workdps(50):
        z = mpmath.exp(2j * mpmath.pi / 7)
        ref = (z ** 2 + 1) / (z ** 2 - 1) * (z ** 3 + 1) / (z ** 3 - 1)
        assert abs(t.numeric(50) - ref) < mpmath.mpf(10) ** -40


def test_example_identity_holds():
    v = gsig_identity_check(example_p7())
    assert v.holds and v.residual.is_zero()
    assert gsig_identity_check(example_p7(), conjugates=True).holds


@pytest.mark.parametrize("i", range(9))
def test_every_single_perturbation_breaks_the_example(i):
    base = list(EXAMPLE)
    for a, b in canonical_classes(7):
        if canonical_pair(a, b, 7) == canonical_pair(*base[i], 7):
            continue
        pts = base[:i] + [(a, b)] + base[i + 1:]
        assert not gsig_identity_check(ExtensionData(7, tuple(FixedPointDatum(*x) for x in pts))).holds


@pytest.mark.parametrize("p", [7, 11, 13])
def test_e8_identity(p):
    assert gsig_identity_check(e8_plumbing(p)).holds


def test_eta_is_real():
    eta = eta_plumbing(11)
    assert eta.galois(10) == eta  # complex conjugation


def test_sphere_term_c_zero():
    with pytest.raises(ArithDataError):
        lefschetz_sphere_term(FixedSphereDatum(-2, 7), 7)


# series about t = 1


def _sympy_series(expr, K):
    u = sympy.Symbol("u")
    ser = sympy.series(expr, u, 0, K + 1).removeO()
    return [F(str(sympy.nsimplify(ser.coeff(u, k)))) for k in range(K + 1)]


@pytest.mark.parametrize("a,b", [(2, 3), (-4, 5), (1, -3), (3, 3)])
def test_point_series_against_sympy(a, b):
    u = sympy.Symbol("u")
    t = 1 + u
    expr = (t ** a + 1) / (t ** a - 1) * (t ** b + 1) / (t ** b - 1) * u ** 2
    assert series_expand_term(FixedPointDatum(a, b), 4).coefficients(4) == _sympy_series(expr, 4)


@pytest.mark.parametrize("alpha,c,lam", [(-2, 1, F(1, 2)), (3, 2, F(3, 2)), (-1, 3, F(-1, 2))])
def test_sphere_series_against_sympy(alpha, c, lam):
    u = sympy.Symbol("u")
    t = 1 + u
    half = sympy.Rational(lam.numerator, lam.denominator)
    expr = -4 * alpha * t ** c / (t ** c - 1) ** 2 * u ** 2
    d = FixedSphereDatum(alpha, c, lam)
    assert series_expand_term(d, 4).coefficients(4) == _sympy_series(expr, 4)
    expr_tw = expr * (t ** half + t ** -half)
    assert series_expand_term(d, 4, twisted=True).coefficients(4) == _sympy_series(expr_tw, 4)


def test_sphere_order_four_closed_form():
    """Order 4 of the sphere term is -alpha (c^4 - 1)/(60 c^2)."""
    for alpha in (-2, 1, 3):
        for c in (1, 2, 3, 5):
            got = series_expand_term(FixedSphereDatum(alpha, c), 4).coefficient(4)
            assert got == -F(alpha * (c ** 4 - 1), 60 * c * c)


def test_sphere_order_four_factor_two():
    """The 1/30 normalisation of the order-4 sphere coefficient is off by two unless c^2 = 1."""
    for c in (2, 3):
        got = series_expand_term(FixedSphereDatum(1, c), 4).coefficient(4)
        doubled = -F(c ** 4 - 1, 30 * c * c)
        assert doubled == 2 * got != got
    assert series_expand_term(FixedSphereDatum(-2, 1), 4).coefficient(4) == 0


def test_route_agreement():
    assert lefschetz_route_agreement(e8_plumbing(7))
    assert lefschetz_route_agreement(e8_plumbing(11), twisted=True)
    assert lefschetz_route_agreement(example_p7())


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([11, 13]), st.lists(st.tuples(st.integers(1, 12), st.integers(1, 12)), min_size=1,
                                           max_size=4))
def test_route_agreement_random(p, pairs):
    pts = tuple(FixedPointDatum(a, b, F(1, 2)) for a, b in pairs if a % p and b % p)
    ext = ExtensionData(p, pts, (FixedSphereDatum(-2, 1, F(1, 2)),))
    assert lefschetz_route_agreement(ext)
    assert lefschetz_route_agreement(ext, twisted=True)


# congruences


@pytest.mark.parametrize("p", primes_between(7, 97))
def test_constants_from_plumbing(p):
    consts = expected_constants(ExtensionData(p), e8_plumbing(p))
    assert consts == (F(1, 30), F(-269, 15), F(1712, 15))


def test_constant_by_hand():
    # sum 1/(ab) over the plumbing pairs minus alpha/c^2
    s = sum(F(1, a * b) for a, b in ((-4, 5), (-3, 4), (-2, 3), (-2, 3), (-1, 2), (-1, 2), (-1, 2)))
    assert s == F(-59, 30)
    assert s - F(-2, 1) == F(1, 30)


def test_example_residues():
    rep = congruence_residues(example_p7())
    assert [r.value for r in rep.residues] == [4, 4, 4]
    assert rep.all_hold


@pytest.mark.parametrize("p", [7, 11, 13, 97])
def test_plumbing_against_itself(p):
    assert congruence_residues(e8_plumbing(p), e8_plumbing(p)).all_hold


def test_empty_sets():
    rep = congruence_residues(ExtensionData(7), ExtensionData(7))
    assert [r.value for r in rep.residues] == [0, 0, 0]
    assert [r.value for r in rep.expected_residues] == [0, 0, 0]


@pytest.mark.parametrize("p", [7, 11, 13])
def test_twisted_rhs(p):
    assert twisted_rhs(ExtensionData(p)) == F(1, 30)


def test_twisted_self_consistent():
    e8 = e8_plumbing(11)
    assert twisted_congruence_residue(e8, e8).holds
    with pytest.raises(ArithDataError) as exc:
        twisted_congruence_residue(example_p7())
    assert exc.value.code == "missing-lift-weight"


def test_distinguished_lift_lhs():
    pts = (FixedPointDatum(2, 5, F(3, 2)), FixedPointDatum(1, 1, F(1, 2)), FixedPointDatum(3, 3, F(1, 2)))
    rep = twisted_congruence_residue(ExtensionData(11, pts))
    assert rep.lhs == F(9, 10) + 1 + F(1, 9)


# admissibility and the contradiction


@pytest.mark.parametrize("pair,cls", [((1, 2), "inadmissible"), ((3, 4), "V"), ((5, 7), "U")])
def test_theorem_a_examples(pair, cls):
    assert theorem_a_filter(pair, 11).cls == cls


def test_example_is_inadmissible():
    assert not all(theorem_a_filter(d, 7).admissible for d in example_p7().points)


def test_p7_zero_sum_is_v_class():
    v = theorem_a_filter((1, 6), 7)
    assert v.cls == "V" and v.note


@pytest.mark.parametrize("p", primes_between(7, 199))
def test_theorem_b(p):
    tr = prove_theorem_b(p)
    assert tr.complete and tr.contradiction
    assert tr.step("v-vanishes").holds
    assert tr.step("subtract").value == 4
    assert tr.step("subtract").holds is False


def test_theorem_b_flags_and_errors():
    assert prove_theorem_b(7).flags["homologically_trivial_required"]
    assert "homologically_trivial_required" not in prove_theorem_b(11).flags
    for bad in (2, 3, 4, 5, 9):
        with pytest.raises(ArithDataError) as exc:
            prove_theorem_b(bad)
        assert exc.value.code == "hypotheses-violated"


def test_distinguished_identity_symbolic():
    a, b = sympy.symbols("a b")
    assert sympy.simplify(((a + b) ** 2 - (b - a) ** 2) / (a * b)) == 4
    assert distinguished_point_difference() == 4


# search


def _multisets(hits):
    return [tuple((d.a, d.b) for d in h) for h in hits]


def test_search_finds_example():
    ex = example_p7().canonical_multiset()
    assert ex in _multisets(search_extensions(7, filters={"gsig-identity"}))
    assert ex not in _multisets(search_extensions(7, filters={"gsig-identity", "theorem-a"}))


def test_search_hits_are_solutions():
    for h in search_extensions(7, filters="identity"):
        ext = ExtensionData(7, h)
        assert gsig_identity_check(ext).holds
        assert congruence_residues(ext).all_hold


def test_search_p11_empty():
    assert search_space_size(11, 9, "theorem-a") == 48620
    assert search_extensions(11, filters="congruences,theorem-a,twisted") == []


def test_search_jobs_independent():
    assert search_extensions(7, filters="identity") == search_extensions(7, filters="identity", jobs=2)


def test_search_small_brute_force():
    """Three points at p = 7: compare the DFS with plain enumeration."""
    from itertools import combinations_with_replacement

    classes = canonical_classes(7)
    brute = []
    for combo in combinations_with_replacement(classes, 3):
        ext = ExtensionData(7, tuple(FixedPointDatum(*c) for c in combo))
        if congruence_residues(ext).all_hold:
            brute.append(combo)
    assert _multisets(search_extensions(7, 3, "congruences")) == sorted(brute)


def test_search_budget_and_filters():
    with pytest.raises(ArithDataError) as exc:
        search_extensions(13, 9, budget=10)
    assert exc.value.code == "search-over-budget"
    with pytest.raises(ArithDataError):
        search_extensions(7, filters="magic")


# closed forms on random data


def _closed_point(a, b, lam):
    ab = F(a * b)
    return {0: 4 / ab, 2: (a * a + b * b + 1) / (3 * ab),
            4: -F(a ** 4 + b ** 4 - 5 * a * a * b * b + 3) / (180 * ab),
            "tw0": 8 / ab, "tw2": F(2, 3) * (6 * lam * lam + a * a + b * b + 1) / ab}


def test_closed_forms_random():
    rng = random.Random(20261016)
    for _ in range(50):
        p = rng.choice([7, 11, 13])
        a, b = rng.choice([x for x in range(-20, 21) if x % p]), rng.choice([x for x in range(-20, 21) if x % p])
        lam = F(rng.randrange(-15, 16), 2)
        ser = series_expand_term(FixedPointDatum(a, b, lam), 4)
        tw = series_expand_term(FixedPointDatum(a, b, lam), 2, twisted=True)
        cf = _closed_point(a, b, lam)
        for k in (0, 2, 4):
            assert ser.coefficient(k) == cf[k]
            assert residue_of_rational(ser.coefficient(k), p) == residue_of_rational(cf[k], p)
        assert tw.coefficient(0) == cf["tw0"] and tw.coefficient(2) == cf["tw2"]
