from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fpsi.errors import AmbiguousCase, InputError, OrderTooLow
from fpsi.extremal import MemberFn, coeffs_from_schwarz, extremal_function
from fpsi.functionals import (
    a4_q,
    branch_holds,
    evaluate_functional,
    fekete_szego_bound,
    hankel2_bound,
    hankel2_branch,
    hankel2_cross_check,
    hankel_M,
    initial_bounds,
    parse_functional,
    prokhorov_H,
    psi_inputs,
    zalcman_bound,
    zalcman_q,
)
from fpsi.oracle import maximize_functional_bruteforce
from fpsi.psi import make_psi
from fpsi.series import Series
from fpsi.suites import run_functional_dominance

F = Fraction
CATALOG = [
    make_psi("identity"),
    make_psi("booth", beta=0.25),
    make_psi("booth", beta=0.9),
    make_psi("cissoid", beta=0.3),
    make_psi("cissoid", beta=0.9),
    make_psi("s_gamma", gamma=0.5, eta=0.3),
    make_psi("janowski", D=0.5, E=-0.5),
]


def body_value(q1, q2, t, x, y):
    c1 = t
    c2 = (1 - t * t) * x
    c3 = (1 - t * t) * (1 - abs(x) ** 2) * y - t * (1 - t * t) * x * x
    return abs(c3 + q1 * c1 * c2 + q2 * c1**3)


# prokhorov H ------------------------------------------------------------------------------


def test_H_origin():
    assert prokhorov_H(0, 0) == pytest.approx(1.0, abs=1e-9)


def test_H_frozen_values():
    # grid-plus-refinement values
    assert prokhorov_H(1.5, 1.5) == pytest.approx(1.5, abs=1e-6)
    assert prokhorov_H(0.5, -1) == pytest.approx(1.0, abs=1e-6)


def test_H_closed_form_mode_not_available():
    with pytest.raises(InputError):
        prokhorov_H(0, 0, mode="closed_form")


@pytest.mark.parametrize("q1", [-2.0, -0.5, 0.0, 0.7, 1.5, 3.0])
@pytest.mark.parametrize("q2", [-3.0, -1.0, 0.0, 0.4, 2.0])
def test_H_lower_bounds(q1, q2):
    assert prokhorov_H(q1, q2) >= max(1.0, abs(q2)) - 1e-9


@pytest.mark.parametrize("q1", [-1.5, -1.0, 0.0, 0.5, 1.5])
def test_H_monotone_in_abs_q2(q1):
    vals = [prokhorov_H(q1, q) for q in (0.0, 0.5, 1.0, 2.0, 4.0)]
    assert all(b >= a - 1e-9 for a, b in zip(vals, vals[1:]))
    neg = [prokhorov_H(q1, -q) for q in (0.0, 0.5, 1.0, 2.0, 4.0)]
    assert all(b >= a - 1e-9 for a, b in zip(neg, neg[1:]))


def dense_body_max(q1, q2):
    # independent brute force: c3 over the full (x, y) parametrization, no |y| = 1 shortcut
    t = np.linspace(0, 1, 81)[:, None, None, None]
    x = (np.linspace(0, 1, 41)[:, None] * np.exp(1j * np.linspace(0, 2 * np.pi, 72, endpoint=False))[None, :])
    x = x[None, :, :, None]
    y = np.exp(1j * np.linspace(0, 2 * np.pi, 24, endpoint=False))[None, None, None, :]
    return float(body_value(q1, q2, t, x, y).max())


def test_H_not_monotone_for_large_q1():
    # at q1 = 2.5 a positive q2 partly cancels the q1 c1 c2 term
    base = body_value(2.5, 0.0, 1 / np.sqrt(3), -1.0, 1.0)
    assert base == pytest.approx(3.5 * 2 / (3 * np.sqrt(3)), abs=1e-12)
    assert prokhorov_H(2.5, 0.0) >= base - 1e-12
    brute = dense_body_max(2.5, 1.0)
    assert brute == pytest.approx(prokhorov_H(2.5, 1.0), abs=1e-2)
    assert brute < base - 0.1


def test_H_symmetric_in_q1():
    for q1, q2 in ((0.7, 0.4), (2.5, 1.0), (1.2, -2.0)):
        assert prokhorov_H(q1, q2) == pytest.approx(prokhorov_H(-q1, q2), abs=1e-9)


@settings(max_examples=15, deadline=None)
@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(0, 1), st.floats(0, 1), st.floats(0, 6.3))
def test_H_dominates_random_body_points(q1, q2, t, rho, phi):
    x = rho * np.exp(1j * phi)
    for y in (1, -1, 1j, -1j):
        assert body_value(q1, q2, t, x, y) <= prokhorov_H(q1, q2) + 1e-8


# inputs and q-pairs --------------------------------------------------------------------


def test_psi_inputs_cissoid():
    A = psi_inputs(make_psi("cissoid", beta=F(1, 3)), exact=True)
    assert A == (1, F(2, 3), F(7, 9))


def test_psi_inputs_rotation(monkeypatch):
    # no catalog entry has A1 < 0, so feed coefficients of psi(-z) for cissoid directly
    import fpsi.functionals as fn

    monkeypatch.setattr(fn, "psi_taylor", lambda spec, order, exact=None: Series([0, -1, F(2, 3), F(-7, 9)]))
    assert fn.psi_inputs(make_psi("identity")) == (1, F(2, 3), F(7, 9))


def test_booth_a4_pair_exact():
    b = F(2, 7)
    A = psi_inputs(make_psi("booth", beta=b), exact=True)
    assert a4_q(*A) == (F(3, 2), (2 * b + 1) / 2)


def test_cissoid_a4_first_parameter_exact():
    b = F(1, 5)
    A = psi_inputs(make_psi("cissoid", beta=b), exact=True)
    assert a4_q(*A)[0] == (7 - 4 * b) / 2


def test_cissoid_a4_second_parameter_from_expansion():
    # direct expansion of a4, see the decisions ledger
    b = F(1, 5)
    A = psi_inputs(make_psi("cissoid", beta=b), exact=True)
    assert a4_q(*A)[1] == (6 - 5 * b + 2 * b * b) / 2


@pytest.mark.parametrize("b", [F(1, 4), F(3, 5)])
def test_printed_zalcman_pairs_exact(b):
    assert zalcman_q(*psi_inputs(make_psi("booth", beta=b), exact=True), form="printed") == (F(1, 2), b - 1)
    assert zalcman_q(*psi_inputs(make_psi("cissoid", beta=b), exact=True), form="printed") == ((5 - 4 * b) / 2, b * (b - 1))


def test_zalcman_derived_pair_matches_expansion():
    # a2 a3 - a4 on omega = c1 z + c2 z^2 + c3 z^3 reduces to -(A1/3)(c3 + q1 c1 c2 + q2 c1^3)
    spec = make_psi("cissoid", beta=F(1, 3))
    A1, A2, A3 = psi_inputs(spec, exact=True)
    q1, q2 = zalcman_q(A1, A2, A3)
    c1, c2, c3 = F(1, 2), F(1, 3), F(-1, 5)
    f = coeffs_from_schwarz(spec, Series([0, c1, c2, c3]))
    a = f.series.coeffs
    assert a[2] * a[3] - a[4] == -(A1 / 3) * (c3 + q1 * c1 * c2 + q2 * c1**3)


def test_zalcman_form_unknown():
    with pytest.raises(InputError):
        zalcman_q(1, 0, 0, form="other")


# initial bounds --------------------------------------------------------------------------


def test_initial_bounds_booth():
    b = 0.4
    b2, b3, b4 = initial_bounds(make_psi("booth", beta=b))
    assert b2.value == 1 and b3.value == pytest.approx(0.5)
    assert b4.value == pytest.approx(prokhorov_H(1.5, (2 * b + 1) / 2) / 3, abs=1e-12)


def test_initial_bounds_cissoid():
    b = 0.3
    b2, b3, b4 = initial_bounds(make_psi("cissoid", beta=b))
    assert b2.value == 1 and b3.value == pytest.approx((2 - b) / 2)
    assert b4.params["q1"] == pytest.approx((7 - 4 * b) / 2)


def test_initial_bounds_identity_branch():
    _, b3, _ = initial_bounds(make_psi("identity"))
    assert b3.value == pytest.approx(0.5) and b3.branch == "(i)"
    assert branch_holds(b3)


def test_booth_a4_attained_by_extremal():
    b = 0.6
    _, _, b4 = initial_bounds(make_psi("booth", beta=b))
    a4 = extremal_function(make_psi("booth", beta=b), 6).series.coeffs[4]
    assert abs(a4) == pytest.approx(b4.value, abs=1e-6)


# fekete-szego ------------------------------------------------------------------------------


@pytest.mark.parametrize("nu", [0.0, 0.3, 1.0])
def test_fekete_booth_middle(nu):
    assert fekete_szego_bound(make_psi("booth", beta=0.5), nu).value == pytest.approx(0.5)


def test_fekete_examples():
    assert fekete_szego_bound(make_psi("booth", beta=0.5), 2).value == pytest.approx(1.5)
    r = fekete_szego_bound(make_psi("cissoid", beta=0.5), 0)
    assert r.value == pytest.approx(0.75) and r.branch == "(i)"


@pytest.mark.parametrize("spec", [make_psi("booth", beta=0.3), make_psi("cissoid", beta=0.4), make_psi("cissoid", beta=0.9)], ids=lambda s: s.label)
def test_fekete_continuous_at_boundaries(spec):
    ref = fekete_szego_bound(spec, 0.0)
    for key in ("nu_lo", "nu_hi"):
        nu = ref.params[key]
        left = fekete_szego_bound(spec, nu - 1e-9).value
        right = fekete_szego_bound(spec, nu + 1e-9).value
        assert left == pytest.approx(right, abs=1e-8)


@pytest.mark.parametrize("nu", [-1.0, 0.2, 0.7, 3.0])
def test_fekete_branch_holds(nu):
    assert branch_holds(fekete_szego_bound(make_psi("cissoid", beta=0.2), nu))


def test_fekete_middle_witness_attains():
    spec = make_psi("cissoid", beta=0.4)
    f = coeffs_from_schwarz(spec, Series.monomial(2, 6))
    b = fekete_szego_bound(spec, 0.5)
    assert b.branch == "(ii)"
    assert evaluate_functional(f, "fekete", 0.5) == pytest.approx(b.value, abs=1e-10)


def test_fekete_outer_witness_attains():
    spec = make_psi("cissoid", beta=0.4)
    f = extremal_function(spec, 6)
    b = fekete_szego_bound(spec, -1.0)
    assert evaluate_functional(f, "fekete", -1.0) == pytest.approx(b.value, abs=1e-10)


# zalcman ------------------------------------------------------------------------------------


def test_zalcman_matches_bruteforce():
    for spec in (make_psi("booth", beta=0.25), make_psi("s_gamma", gamma=0.5, eta=0.3)):
        brute, _ = maximize_functional_bruteforce(spec, "zalcman")
        assert brute <= zalcman_bound(spec).value + 1e-8
        assert brute == pytest.approx(zalcman_bound(spec).value, rel=2e-3)


def test_zalcman_identity_printed_pair():
    assert zalcman_bound(make_psi("identity"), form="printed").value == pytest.approx(prokhorov_H(0.5, -1) / 3)


# hankel2 ----------------------------------------------------------------------------------


@pytest.mark.parametrize("b", [0.0, 0.25, 0.5, 0.9])
def test_hankel2_booth(b):
    r = hankel2_bound(make_psi("booth", beta=b))
    assert r.branch == "(i)" and r.value == pytest.approx(0.25)
    assert r.params["M"] == pytest.approx(abs(1 - 4 * b))


def test_hankel2_cissoid():
    r = hankel2_bound(make_psi("cissoid", beta=0.3))
    assert r.branch == "(ii)"
    assert r.params["M"] == pytest.approx(3.51)
    assert r.value == pytest.approx(0.2925, abs=1e-12)
    r9 = hankel2_bound(make_psi("cissoid", beta=0.9))
    assert r9.branch == "(i)" and r9.value == pytest.approx(0.25)
    assert r9.params["M"] == pytest.approx(2.01)


def test_hankel2_printed_m_for_cissoid():
    for b in (0.1, 0.3, 0.7):
        A = psi_inputs(make_psi("cissoid", beta=b))
        assert hankel_M(*A) == pytest.approx(abs(6 - 8 * b - b * b), abs=1e-12)


def test_hankel2_case_three():
    # |A2| > A1 and M = |25 - 4 A3| = 1 <= A1 |A2| + 2 A1^2
    assert hankel_M(1.0, 2.0, 6.0) == pytest.approx(1.0)
    assert hankel2_branch(1.0, 2.0, 6.0) == "(iii)"
    br = hankel2_branch(1.0, 2.0, 0.0)
    assert br == "(ii)"


def test_hankel2_ambiguous_on_nan():
    with pytest.raises(AmbiguousCase):
        hankel2_branch(1.0, float("nan"), 0.0)


@pytest.mark.parametrize("spec", CATALOG, ids=lambda s: s.label)
def test_hankel2_branch_holds(spec):
    assert branch_holds(hankel2_bound(spec))


def test_hankel2_booth_witness():
    f = coeffs_from_schwarz(make_psi("booth", beta=F(1, 3)), Series.monomial(2, 8))
    assert evaluate_functional(f, "hankel2") == F(1, 4)


def test_hankel2_cross_check_flags_loose_cissoid():
    rep = hankel2_cross_check(make_psi("cissoid", beta=0.3))
    assert not rep["exceeds"]
    assert rep["flagged"]
    assert rep["bruteforce"] == pytest.approx(0.25, abs=1e-6)


# evaluate_functional ----------------------------------------------------------------------


def test_evaluate_examples():
    f = extremal_function(make_psi("identity"), 6)
    assert evaluate_functional(f, "a2") == pytest.approx(1)
    g = extremal_function(make_psi("booth", beta=0.2), 6)
    assert evaluate_functional(g, "fekete", 0) == pytest.approx(0.5)
    assert evaluate_functional(g, "fekete(0)") == pytest.approx(0.5)


def test_evaluate_order_too_low():
    f = MemberFn(Series([0, 1, 1, 1]), "extremal")
    with pytest.raises(OrderTooLow):
        evaluate_functional(f, "a2")


def test_evaluate_unknown():
    f = extremal_function(make_psi("identity"), 6)
    with pytest.raises(InputError):
        evaluate_functional(f, "bieberbach")
    with pytest.raises(InputError):
        evaluate_functional(f, "fekete")


def test_parse_functional():
    assert parse_functional("fekete(-0.5)") == ("fekete", -0.5)
    assert parse_functional("hankel2") == ("hankel2", None)


@pytest.mark.parametrize("spec", CATALOG, ids=lambda s: s.label)
def test_dominance_on_random_members(spec):
    res = run_functional_dominance(spec, samples=200, seed=11)
    assert res.ok, res.records[:3]
