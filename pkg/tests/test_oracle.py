import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fpsi.errors import InputError
from fpsi.extremal import MemberFn, coeffs_from_schwarz, extremal_function, general_growth_upper, koebe_radius
from fpsi.functionals import FUNCTIONALS, bound_for
from fpsi.oracle import (
    EPS_BOUNDARY,
    SchwarzSample,
    check_subordination,
    covering_check,
    kappa_eval,
    maximize_functional_bruteforce,
    member_coeffs_batch,
    polar_grid,
    region_membership,
    sample_schwarz,
    schur_to_schwarz,
    schwarz_member,
    sign_grid,
    winding_about,
    witness_value,
    write_jsonl,
)
from fpsi.psi import make_psi, psi_eval, psi_taylor
from fpsi.series import Series
from fpsi.suites import run_subordination

CATALOG = [
    make_psi("identity"),
    make_psi("booth", beta=0.5),
    make_psi("cissoid", beta=0.3),
    make_psi("s_gamma", gamma=0.5, eta=0.3),
    make_psi("janowski", D=0.5, E=-0.5),
    make_psi("concave", beta=1.5),
]


def koebe(order=256):
    return MemberFn(Series(np.arange(order + 1.0) + 0j), "extremal")


# membership ---------------------------------------------------------------------------------


def test_membership_disk():
    ident = make_psi("identity")
    v = region_membership(ident, 0.3, 0.5)
    assert v.status == "inside" and v.winding == 1
    v = region_membership(ident, 0.7, 0.5)
    assert v.status == "outside" and v.winding == 0


def test_membership_booth_forward_witness():
    s = make_psi("booth", beta=0.5)
    assert region_membership(s, psi_eval(s, 0.3), 0.6).status == "inside"


def test_membership_near_boundary_indeterminate():
    v = region_membership(make_psi("identity"), 0.5 + 1e-9, 0.5)
    assert v.status == "indeterminate"
    assert v.min_boundary_distance < EPS_BOUNDARY


def test_membership_vectorized():
    out = region_membership(make_psi("identity"), np.array([0.1, 0.9, 0.2j]), 0.5)
    assert [v.status for v in out] == ["inside", "outside", "inside"]


def test_membership_bad_radius():
    with pytest.raises(InputError):
        region_membership(make_psi("identity"), 0.1, 1.0)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.05, 0.9), st.floats(0, 2 * math.pi), st.floats(0.1, 0.95))
def test_membership_matches_forward_image(s, th, frac):
    # psi(w) with |w| < rho lies inside psi(rho T) by univalence
    spec = make_psi("cissoid", beta=0.4)
    rho = 0.2 + 0.75 * s
    w = frac * rho * np.exp(1j * th)
    v = region_membership(spec, psi_eval(spec, w), rho)
    assert v.status in ("inside", "indeterminate")
    assert v.status == "inside" or v.min_boundary_distance < EPS_BOUNDARY


def test_winding_counts_are_integers():
    w, resid, _, ok = winding_about(lambda z: z * z, np.array([0.0, 0.1, 2.0]), 0.5)
    assert list(w) == [2, 2, 0]
    assert np.all(resid < 0.05) and ok.all()


# subordination -------------------------------------------------------------------------------


def test_extremal_booth_no_violations():
    s = make_psi("booth", beta=0.5)
    rep = check_subordination(s, extremal_function(s, 256), radii=(0.3, 0.6, 0.9), angles=256)
    assert rep.ok and rep.checked == 768


def test_koebe_exits_booth_region():
    rep = check_subordination(make_psi("booth", beta=0.5), koebe())
    assert len(rep.violations) > 0


def test_cubic_schwarz_member_no_violations():
    s = make_psi("booth", beta=0.5)
    f = coeffs_from_schwarz(s, Series.monomial(3, 256) * 0.9)
    assert check_subordination(s, f).ok


@pytest.mark.parametrize("spec", CATALOG, ids=lambda s: s.label)
def test_construction_verification_loop(spec):
    res = run_subordination(spec, samples=50, seed=3, order=256)
    assert res.ok, res.records[:3]


def test_truncated_series_cannot_prove_violation():
    # too few terms for |z| = 0.9: samples are reported indeterminate, never violations
    s = make_psi("concave", beta=2)
    rep = check_subordination(s, extremal_function(s, 256), radii=(0.9,), angles=128)
    assert rep.ok and rep.indeterminate


def test_report_jsonl(tmp_path):
    rep = check_subordination(make_psi("booth", beta=0.5), koebe(), radii=(0.9,), angles=32)
    lines = rep.to_jsonl().splitlines()
    rec = json.loads(lines[0])
    assert set(rec) == {"check", "verdict", "z", "value"}
    n = write_jsonl([rep], tmp_path / "out.jsonl")
    assert n == len(lines) == len(rep.violations) + len(rep.indeterminate)


# Schwarz samples ---------------------------------------------------------------------------


def test_sample_reproducible():
    a, b = sample_schwarz(17, 32), sample_schwarz(17, 32)
    assert np.array_equal(a.omega().coeffs, b.omega().coeffs)
    assert a.params == b.params


def test_corner_t_one():
    s = SchwarzSample(1.0, 0.3 + 0.2j, 0.5, 0j, 0.0, 16)
    c1, c2, c3 = s.coefficients
    assert c1 == 1 and c2 == 0 and c3 == 0
    assert np.allclose(s.omega().coeffs, Series.z(16).to_float().coeffs)


def test_ten_thousand_samples_in_body():
    slack = np.array([sample_schwarz(i, 4).body_slack() for i in range(10_000)])
    assert slack.min() >= -1e-12


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**31))
def test_omega_matches_body_coefficients(seed):
    s = sample_schwarz(seed, 64)
    c = s.omega().coeffs
    assert abs(c[0]) < 1e-15
    assert np.allclose(c[1:4], s.coefficients, atol=1e-13)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**31))
def test_omega_bounded_on_circle(seed):
    w = sample_schwarz(seed, 256).omega()
    z = 0.95 * np.exp(2j * np.pi * np.arange(256) / 256)
    assert np.abs(w(z)).max() < 1


def test_schur_parameters():
    # (g) then 0 gives omega = g z; (g, h) then 0 gives z (g + h z)/(1 + conj(g) h z)
    g, h = 0.4 - 0.2j, 0.5j
    z = 0.3 + 0.1j
    assert schur_to_schwarz([g], 8)(z) == pytest.approx(g * z, abs=1e-14)
    w = schur_to_schwarz([g, h], 64)
    assert w(z) == pytest.approx(z * (g + h * z) / (1 + np.conj(g) * h * z), abs=1e-12)


def test_batch_route_matches_series_route():
    spec = make_psi("s_gamma", gamma=0.6, eta=0.4)
    A = np.asarray(psi_taylor(spec, 3, exact=False).coeffs)
    for seed in range(5):
        s = sample_schwarz(seed, 8)
        c1, c2, c3 = s.coefficients
        a2, a3, a4 = member_coeffs_batch(A, c1, c2, c3)
        f = schwarz_member(spec, s, 8).series.coeffs
        assert np.allclose([a2, a3, a4], f[2:5], atol=1e-13)


# brute-force maximization --------------------------------------------------------------------


def test_bruteforce_booth_hankel():
    m, w = maximize_functional_bruteforce(make_psi("booth", beta=0.5), "hankel2")
    assert m == pytest.approx(0.25, abs=1e-6)
    assert witness_value(make_psi("booth", beta=0.5), "hankel2", w) == pytest.approx(m, abs=1e-10)


@pytest.mark.parametrize("spec", CATALOG, ids=lambda s: s.label)
def test_bruteforce_a2_is_a1(spec):
    m, w = maximize_functional_bruteforce(spec, "a2")
    assert m == pytest.approx(abs(complex(psi_taylor(spec, 1, exact=False)[1])), abs=1e-9)
    assert w.t == pytest.approx(1.0, abs=1e-6)


def test_bruteforce_cissoid_hankel_vs_branch():
    m, _ = maximize_functional_bruteforce(make_psi("cissoid", beta=0.3), "hankel2")
    assert m <= 0.2925 + 1e-8


@pytest.mark.parametrize("spec", CATALOG[:5], ids=lambda s: s.label)
@pytest.mark.parametrize("which", FUNCTIONALS)
def test_bruteforce_below_bound_and_witness_reproduces(spec, which):
    nu = 0.5 if which == "fekete" else None
    m, w = maximize_functional_bruteforce(spec, which, grid_density=8, nu=nu)
    assert m <= float(bound_for(spec, which, nu).value) + 1e-8
    assert witness_value(spec, which, w, nu) == pytest.approx(m, abs=1e-10)


def test_bruteforce_unknown():
    with pytest.raises(InputError):
        maximize_functional_bruteforce(make_psi("identity"), "a7")


# sign grids -----------------------------------------------------------------------------------


def test_sign_grid_dichotomy():
    assert sign_grid("booth_fhat", 512, beta=0.9) == (True, None)
    holds, z = sign_grid("kappa", 512, eta=0.9)
    assert not holds
    assert (kappa_eval(0.9, z) / z).real <= 0
    assert sign_grid("kappa", 512, eta=0.1) == (True, None)


def test_sign_grid_counterexample_is_first_in_index_order():
    holds, z = sign_grid("kappa", 64, eta=0.9)
    grid = polar_grid(64)
    bad = np.argwhere(~((kappa_eval(0.9, grid) / grid).real > 0))
    assert z == grid[tuple(bad[0])]


def test_sign_grid_member_and_extremal():
    s = make_psi("booth", beta=0.3)
    assert sign_grid("member", 64, member=extremal_function(s, 128))[0]
    assert sign_grid("extremal", 64, spec=s)[0]


def test_sign_grid_resolution_floor():
    with pytest.raises(InputError):
        sign_grid("kappa", 32, eta=0.1)


def test_polar_grid_shape():
    g = polar_grid(64)
    assert g.shape == (64, 64)
    assert np.abs(g).max() == pytest.approx(1 - 1e-3)


# covering --------------------------------------------------------------------------------------


def test_covering_identity_extremal():
    s = make_psi("identity")
    f = extremal_function(s, 256)
    rep = covering_check(s, f)
    assert rep.ok and rep.checked > 1
    w, _, _, _ = winding_about(f, 0.0, 0.9)
    assert w[0] == 1


def test_covering_booth_negative_axis():
    s = make_psi("booth", beta=0.25)
    f = extremal_function(s, 256)
    w = -0.9 * koebe_radius(s)
    wn, _, _, ok = winding_about(f, w, 0.999)
    assert wn[0] == 1 and ok[0]
    assert covering_check(s, f).ok


def test_far_point_not_covered():
    s = make_psi("identity")
    f = extremal_function(s, 256)
    rho = 0.9
    far = 1.01 * general_growth_upper(rho)[0]
    wn, _, _, _ = winding_about(f, far, rho)
    assert wn[0] == 0
