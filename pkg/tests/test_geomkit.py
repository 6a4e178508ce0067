from fractions import Fraction as F

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from strata import geomkit as gk
from strata import polycore as pc
from strata.geomkit import RootConfiguration as RC
from strata.stratlat import enumerate_mvs, validate_mv

X = sp.Symbol("x")


def test_vieta_examples():
    assert np.allclose(gk.vieta_coeffs(RC(((-1, 2), (1, 2)))), [0, -2, 0, 1])
    t, n = 0.7, 5
    want = [sp.binomial(n, j) * (-t) ** j for j in range(1, n + 1)]
    assert np.allclose(gk.vieta_coeffs(RC(((t, n),))), np.array(want, dtype=float))
    assert np.allclose(gk.vieta_coeffs(RC((), ((0, 1),))), [0, 1])


def test_power_sum_examples():
    assert np.allclose(gk.power_sums(RC(((-1, 2), (1, 2)))), [0, 4, 0, 4])
    assert np.allclose(gk.power_sums(RC(((0.5, 3),))), [3 * 0.5 ** i for i in range(1, 4)])
    assert np.allclose(gk.power_sums(RC((), ((0, 1),))), [0, -2])


def test_newton_examples():
    assert gk.newton_a_to_b((0, 0, 0)) == (0, 0, 0)
    assert gk.newton_a_to_b((F(0), F(-2), F(0), F(1))) == (0, 4, 0, 4)
    t = F(2, 3)
    b = tuple(4 * t ** i for i in range(1, 5))
    assert gk.newton_b_to_a(b) == pc.expand_from_roots(RC(((t, 4),))).coeffs


def _sym_coeffs(expr, n):
    return [sp.Poly(sp.expand(expr), X).all_coeffs()[k] for k in range(1, n + 1)]


@settings(max_examples=50, deadline=None)
@given(st.lists(st.fractions(-2, 2, max_denominator=5), min_size=1, max_size=6))
def test_newton_identities_against_sympy(roots):
    # oracle: sympy expansion and direct power sums of the listed roots
    expr = sp.prod([X - sp.Rational(r.numerator, r.denominator) for r in roots])
    n = len(roots)
    a = [F(int(c.p), int(c.q)) for c in (sp.Rational(v) for v in _sym_coeffs(expr, n))]
    b = [sum(F(r) ** j for r in roots) for j in range(1, n + 1)]
    assert list(gk.newton_a_to_b(tuple(a))) == b
    assert list(gk.newton_b_to_a(tuple(b))) == a


def test_sample_examples():
    for seed in range(5):
        p = gk.sample_stratum(validate_mv((), 2), seed)
        a1, a2 = map(float, p.a)
        assert a2 > a1 ** 2 / 4
        p = gk.sample_stratum(validate_mv((2,), 2), seed, exact=True)
        assert p.a[1] == p.a[0] ** 2 / 4
        p = gk.sample_stratum(validate_mv((1, 1, 1, 1), 4), seed, exact=True)
        assert pc.multiplicity_vector(pc.MonicPolynomial(p.a)).parts == (1, 1, 1, 1)
    assert gk.sample_stratum(validate_mv((2, 1), 5), 3).a == gk.sample_stratum(validate_mv((2, 1), 5), 3).a
    with pytest.raises(ValueError):
        gk.sample_stratum(validate_mv((1,) * 6, 6), 0, box=(0, 0.5), separation=0.2)


def test_sample_respects_box_and_separation():
    for s in enumerate_mvs(6):
        p = gk.sample_stratum(s, 11)
        assert p.stratum == s
        assert p.config.min_separation() >= 0.2 - 1e-12
        assert all(-2 <= y <= 2 for y, _ in p.config.real_roots)
        assert all(b >= 0.2 for _, b in p.config.complex_pairs)


def test_jacobian_examples():
    rep = gk.jacobian(RC(((0.4, 2),)))
    assert np.allclose(rep.matrix, [[2.0]])
    u, v = -0.3, 0.8
    rep = gk.jacobian(RC(((u, 2), (v, 1))))
    assert np.allclose(rep.matrix, [[2, 1], [4 * u, 2 * v]])
    assert np.isclose(rep.det.real, 4 * (v - u))
    rep = gk.jacobian(RC((), ((0.1, 0.5), (0.1, 0.5))))
    assert abs(rep.det) == 0


def test_graph_partials_parabola():
    for t in (-1.2, 0.0, 0.9):
        assert np.isclose(gk.graph_partials(RC(((t, 2),)), 2, 1), 2 * t)


def test_graph_partials_two_one_closed_form():
    # oracle: implicit differentiation of b_3 over (b_1, b_2) along (x-u)^2 (x-v)
    u, v = sp.symbols("u v")
    b = [2 * u ** j + v ** j for j in (1, 2, 3)]
    J = sp.Matrix([[sp.diff(b[0], u), sp.diff(b[0], v)], [sp.diff(b[1], u), sp.diff(b[1], v)]])
    grad = (sp.Matrix([[sp.diff(b[2], u), sp.diff(b[2], v)]]) * J.inv()).applyfunc(sp.simplify)
    assert sp.simplify(grad[0] + 3 * u * v) == 0
    assert sp.simplify(grad[1] - sp.Rational(3, 2) * (u + v)) == 0
    cfg = RC(((-0.7, 2), (0.4, 1)))
    got = gk.graph_partials_matrix(cfg)
    assert np.allclose(got, [[-3 * -0.7 * 0.4, 1.5 * (-0.7 + 0.4)]], rtol=1e-12)


def test_eq1_against_finite_differences_at_ao():
    cfg = RC(((-1.0, 2), (1.0, 2)))
    eq = gk.graph_partials_matrix(cfg)
    fd = gk.finite_difference_partials(cfg)
    assert np.allclose(eq, fd, rtol=1e-7, atol=1e-7)


@pytest.mark.parametrize("seed", range(6))
def test_eq1_against_finite_differences_random(seed):
    for s in enumerate_mvs(5):
        if s.surplus == 0:
            continue
        cfg = gk.sample_stratum(s, seed).config
        eq = gk.graph_partials_matrix(cfg)
        fd = gk.finite_difference_partials(cfg)
        assert np.max(np.abs(eq - fd) / np.maximum(1, np.abs(eq))) <= 1e-6


def test_graph_partials_beyond_degree_matches_newton():
    # d b_k / d b_u for k > n follows from the Newton recursion on the stratum
    cfg = RC(((-0.5, 2), (0.6, 1)))
    h = 1e-4
    base = gk.power_sums(cfg, 2)
    vals = []
    for step in (-1, 1):
        c2 = gk.solve_params_for_power_sums(cfg, base + np.array([step * h, 0]))
        vals.append(gk.power_sums(c2, 5)[4])
    fd = (vals[1] - vals[0]) / (2 * h)
    assert np.isclose(gk.graph_partials(cfg, 5, 1), fd, rtol=1e-6)


def test_coincident_pair_limit_is_finite_and_continuous():
    # two equal complex pairs inside the stratum [2] for n = 6
    cfg = RC(((0.3, 2),), ((-0.4, 0.7), (-0.4, 0.7)))
    assert cfg.coincident_pairs() == [(0, 1)]
    lim = gk.graph_partials_matrix(cfg)
    near = gk.graph_partials_matrix(RC(((0.3, 2),), ((-0.4, 0.7), (-0.4 + 3e-4, 0.7 + 4e-4))))
    assert np.all(np.isfinite(lim))
    assert np.allclose(lim, near, atol=1e-2)


@pytest.mark.parametrize("weights, mu, nu", [((1, 1, 1), 2, 3), ((2, 1, 1), 2, 3), ((2, 1, 1, 1), 1, 2), ((1, 1, 1, 1), 3, 4)])
def test_symbolic_cofactor_cancellation(weights, mu, nu):
    for u in range(1, len(weights) + 1):
        total, others = gk.symbolic_cofactor_sum(weights, mu, nu, u)
        assert total == 0
        assert all(o == 0 for o in others)


def test_tangent_frame_parabola():
    for t in (-1.0, 0.0, 0.5):
        fr = gk.tangent_frame(gk.StratumPoint.from_config(RC(((t, 2),))))
        d = fr.basis[0]
        assert np.isclose(d[0] * 2 * t - d[1] * -2, 0)  # parallel to (-2, 2t)
        assert fr.margin > 0


def test_tangent_frame_at_origin():
    fr = gk.tangent_frame(gk.StratumPoint.from_config(RC(((F(0), 4),))))
    assert np.allclose(fr.basis[0] / fr.basis[0][0], [1, 0, 0, 0])
    assert np.isclose(fr.margin, 1.0)


def test_two_sheet_limits_at_ao():
    ao = RC(((-1, 2), (1, 2)))
    lims = []
    for i in (2, 1):
        path = gk.complexify_path(ao, i)
        rep = gk.boundary_limit_probe(path, gk.graph_targets(path(0.1)))
        assert rep.converged
        lims.append(rep.limit)
    # oracle: Hermite interpolation through the double roots gives these in closed form
    assert np.allclose(lims[0], [-4, 2, 4 / 3], atol=1e-8)
    assert np.allclose(lims[1], [4, 2, -4 / 3], atol=1e-8)
    frames = [gk.tangent_frame(gk.StratumPoint.from_config(ao), gk.complexify_path(ao, i)) for i in (2, 1)]
    assert all(f.limit and f.margin > 1e-8 for f in frames)
    assert np.max(np.abs(frames[0].graph_gradient - frames[1].graph_gradient)) > 1e-3


def test_split_probe_matches_lower_stratum():
    t = 0.3
    for j in (1, 2):
        path = gk.split_path(RC(((t, 3),)), 1, j)
        rep = gk.boundary_limit_probe(path, gk.graph_targets(path(0.1)))
        assert rep.converged
        assert np.allclose(rep.limit, [-3 * t * t, 3 * t], atol=1e-9)


def test_split_real_complex_examples():
    r = gk.split_real_complex((1, 0, -2, 0, 1))
    assert r.Q == (1,) and r.R == pc.poly((1, 0, -2, 0, 1))
    r = gk.split_real_complex((1, 0, 2, 0, 1))
    assert r.Q == pc.poly((1, 0, 2, 0, 1)) and r.R == (1,)
    p = pc.mul((1, 0, 1), pc.power((1, -1), 2))
    r = gk.split_real_complex(p)
    assert r.Q == pc.poly((1, 0, 1)) and r.R == pc.poly((1, -2, 1)) and r.certificate == 4 and r.exact


def test_product_map_jacobian_is_sylvester():
    Q, R = pc.poly((1, 1, 1)), pc.poly((1, -3, 2))
    J = gk.product_map_jacobian(Q, R)
    det = pc.determinant(J)
    want = sp.resultant(X ** 2 + X + 1, X ** 2 - 3 * X + 2, X)
    assert abs(det) == abs(want) != 0


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_chart_equivalence_and_margins(n):
    for s in enumerate_mvs(n):
        p = gk.sample_stratum(s, 7)
        fr = gk.tangent_frame(p)
        assert fr.margin > 1e-8
        assert gk.scaled_sigma_min(gk.power_sum_jacobian(p.config, n)) > 1e-9
        gb = gk.graph_partials_matrix(p.config)
        if s.surplus:
            assert np.allclose(gk.graph_gradient_a_from_b(p.config, gb), fr.graph_gradient, rtol=1e-7, atol=1e-9)
        mb = gk.transversality_margin(gk.tangent_basis_b(p.config), s.dimension)
        assert mb > 0
        a_from_b = gk.newton_b_to_a(gk.power_sums(p.config))
        assert np.allclose(a_from_b, gk.vieta_coeffs(p.config), atol=1e-10)


def test_point_json_roundtrip():
    p = gk.sample_stratum(validate_mv((2, 1), 5), 2, exact=True)
    q = gk.StratumPoint.from_json(p.to_json())
    assert q.a == p.a and q.b == p.b and q.stratum == p.stratum
    doc = p.to_json()
    doc["mv"] = [1, 2]
    with pytest.raises(ValueError):
        gk.StratumPoint.from_json(doc)


def test_root_configuration_validation():
    with pytest.raises(ValueError):
        RC(((1, 1), (0, 1)))
    with pytest.raises(ValueError):
        RC((), ((0, -1),))
    assert RC(((0, 2),), ((1, 1),)).dimension == 3
