import json
import math

import numpy as np
import pytest
import sympy as sp

from strata import lemmalab as ll
from strata.geomkit import RootConfiguration as RC
from strata.stratlat import CoverLabel, validate_mv


def at(reals, pairs=(), allow_line=False):
    return ll.setup_at(RC(tuple(reals), tuple(pairs)), allow_line=allow_line)


def curve(curves, text):
    return next(c for c in curves if str(c.label) == text)


# --- setup -----------------------------------------------------------------

def test_section_setup_examples():
    s = ll.section_setup(validate_mv((2, 2), 4), 0)
    assert s.s == 2 and s.indices == (3, 4)
    s = ll.section_setup(validate_mv((4,), 4), 0)
    assert s.s == 1 and s.indices == (2, 3)
    with pytest.raises(ValueError):
        ll.section_setup(validate_mv((1, 1), 2), 0)
    with pytest.raises(ValueError):
        ll.section_setup(validate_mv((2,), 2), 0)
    assert ll.section_setup(validate_mv((2,), 2), 0, allow_line=True).indices == (2,)


def test_eligible_strata():
    assert {s.parts for s in ll.eligible_strata(4)} == {(4,), (3, 1), (1, 3), (2, 2)}


# --- traced curves ---------------------------------------------------------

def test_ao_curves_against_series_oracle():
    # Oracle: along U_{1,1} at A = (x+1)^2 (x-1)^2 the polynomial is
    # (x-c+e)(x-c-e)(x-d)^2 with a_1 = 0, a_2 = -2, i.e. d = -c, c^2 = 1 - e^2/2 (e = delta/2).
    e = sp.Symbol("e", positive=True)
    x = sp.Symbol("x")
    c = -sp.sqrt(1 - e ** 2 / 2)
    p = sp.expand((x - c + e) * (x - c - e) * (x + c) ** 2)
    a3 = sp.Poly(p, x).all_coeffs()[3]
    a4 = sp.Poly(p, x).all_coeffs()[4]
    d3 = sp.series(a3, e, 0, 5).removeO()
    d4 = sp.series(a4 - 1, e, 0, 5).removeO()
    slope = sp.limit(d4 / d3, e, 0)
    side = sp.sign(sp.limit(d3 / e ** 2, e, 0))
    assert slope == -1 and side == 1

    curves = ll.trace_all(at([(-1.0, 2), (1.0, 2)]))
    assert {str(cv.label) for cv in curves} == {"split(1,1)", "delete2(1)", "split(2,1)", "delete2(2)"}
    u11 = curve(curves, "split(1,1)")
    assert u11.upper == (1, 1, 2)
    assert math.isclose(u11.slope, float(slope), rel_tol=1e-9)
    assert u11.side == int(side)
    # the V curves of both components end on the same stratum [2]
    assert curve(curves, "delete2(1)").upper == curve(curves, "delete2(2)").upper == (2,)


@pytest.mark.parametrize("mv, n", [((2, 2, 1, 1), 6), ((3,), 5), ((2, 2), 6), ((1, 3), 6), ((2, 2, 1), 5)])
def test_curve_invariants(mv, n):
    setup = ll.section_setup(validate_mv(mv, n), 4)
    for cv in ll.trace_all(setup):
        assert cv.residual <= 1e-10
        assert cv.side in (-1, 1)
        assert np.all(np.sign(cv.offsets[:, 0]) == cv.side)
        assert cv.slope_ratio >= 1.5
        assert not cv.dropped


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_slopes_match_closed_form(n):
    # k_i = y_i - sum_l (m_l - 1) x_l, derived by expanding the pinned coefficients
    for s in ll.eligible_strata(n):
        setup = ll.section_setup(s, 2)
        for cv in ll.trace_all(setup):
            want = ll.predicted_slope(setup.point.config, cv.label.i)
            assert math.isclose(cv.slope, want, rel_tol=1e-8, abs_tol=1e-8)


def test_line_section_parabola():
    # n = 2, U = [2] at t: only a_2 is left; the split curve lies left, the pair right
    for t in (-0.5, 0.0, 0.7):
        curves = ll.trace_all(at([(t, 2)], allow_line=True))
        assert curve(curves, "split(1,1)").side == -1
        assert curve(curves, "delete2(1)").side == 1
        assert curve(curves, "split(1,1)").slope is None
        rep = ll.verify_lemma_uv(at([(t, 2)], allow_line=True), curves)
        assert rep.passed


def test_updown_closed_form_at_origin():
    # U = [4] at x^4 (a_1 = 0): [1,3] has a_3 = 8 (-D/6)^(3/2), [3,1] the negative, [2,2] zero
    setup = at([(0.0, 4)])
    curves = ll.trace_all(setup)
    rep = ll.verify_lemma_updown(setup, curves)
    assert rep.passed
    g = 8 / 6 ** 1.5
    assert math.isclose(rep.margins["gaps"]["i=1 j=1vs2"], g, rel_tol=1e-6)
    assert math.isclose(rep.margins["gaps"]["i=1 j=2vs3"], g, rel_tol=1e-6)
    assert math.isclose(rep.margins["gaps"]["i=1 j=1vs3"], 2 * g, rel_tol=1e-6)
    assert all(cv.side == -1 for cv in curves)


def test_offsets_at_hits_targets():
    setup = at([(-0.3, 3), (0.9, 1)])
    cv = curve(ll.trace_all(setup), "split(1,1)")
    ts = cv.side * np.array([1e-3, 1e-4])
    vals = ll.offsets_at(setup, cv, ts)
    # compare with the traced curve: the secant slope through each point tends to k
    assert np.allclose(vals / ts, cv.slope, atol=5e-2)


# --- lemma verdicts --------------------------------------------------------

def test_ao_lemmas_and_reading():
    setup = at([(-1.0, 2), (1.0, 2)])
    curves = ll.trace_all(setup)
    for name, fn in ll.VERIFIERS.items():
        assert fn(setup, curves).passed, name
    sl = ll.verify_lemma_slope(setup, curves)
    assert sl.margins["max_equal_dev"] < 1e-9 and sl.margins["min_distinct_gap"] > 1.9
    # left-to-right numbering contradicts the observed picture
    assert not ll.verify_lemma_slopebis(setup, curves, order="ascending").passed
    assert not ll.verify_lemma_leftright(setup, curves, order="ascending").passed


def test_ascending_reading_fails_updown_at_origin():
    setup = at([(0.0, 4)])
    curves = ll.trace_all(setup)
    assert not ll.verify_lemma_updown(setup, curves, order="ascending").passed


def test_vacuous_cases():
    setup = at([(0.2, 3)], [(0.0, 1.0)])
    curves = ll.trace_all(setup)
    assert ll.verify_lemma_uv(setup, curves).note.startswith("vacuous")
    assert ll.verify_lemma_slopebis(setup, curves).note.startswith("vacuous")
    setup = at([(-1.0, 2), (1.0, 2)])
    assert ll.verify_lemma_updown(setup).note.startswith("vacuous")


def test_hyperbolic_stratum():
    setup = at([(-1.5, 1), (-0.9, 2), (0.2, 2), (1.1, 1)])
    rep = ll.verify_lemma_slopebis(setup)
    assert rep.passed and len(rep.margins["slopes"]) == 2


@pytest.mark.parametrize("n", [3, 4, 5])
def test_all_lemmas_pass(n):
    for s in ll.eligible_strata(n):
        for seed in range(3):
            reps = ll.verify_all(ll.section_setup(s, seed))
            bad = {k: r.margins for k, r in reps.items() if not r.passed}
            assert not bad, (s, seed, bad)


def test_report_json():
    setup = ll.section_setup(validate_mv((3, 1), 6), 1)
    rep = ll.verify_all(setup)["updown"]
    doc = json.loads(json.dumps(rep.to_json()))
    assert doc["lemma"] == "updown" and doc["stratum"] == [3, 1] and doc["n"] == 6
    assert doc["verdict"] == "PASS" and doc["index_order"] == "descending"
    assert {c["label"] for c in doc["curves"]} == {"split(1,1)", "split(1,2)"}


def test_trace_rejects_bad_label():
    setup = at([(-1.0, 2), (1.0, 2)])
    with pytest.raises(ValueError):
        ll.trace_adjacent_curve(setup, CoverLabel("split", 1, 2))
