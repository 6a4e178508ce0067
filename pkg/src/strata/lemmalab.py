"""Numerical harness for the mutual disposition of adjacent strata.

Fix a point A on a stratum U of dimension s <= n - 2.  Each stratum of
dimension s + 1 adjacent to U (split a component, or turn a double root
into a complex pair) contributes a curve through A once a_1..a_s are pinned
to A's values; the curve is read in the (a_{s+1}, a_{s+2}) plane.  Curves
are traced in root space: a perturbation of size delta is applied to A's
roots and the pinned conditions are restored with damped Newton steps.

Index convention.  Labels number the MV components from the left (smallest
root first).  The disposition lemmas come out right when components are
numbered from the right (largest root first), with j in split(i, j) read
as the multiplicity of the right-hand piece.  ``order="descending"`` (the
default) applies that reading; ``order="ascending"`` applies the left-based
numbering literally, and then leftright/slopebis/updown fail in general.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .geomkit import (RootConfiguration, StratumPoint, cauchy_ratio, coeff_jacobian,
                      richardson, sample_stratum, vieta_coeffs)
from .polycore import expand_from_roots
from .stratlat import CoverLabel, Stratum, upward_labels

TOL_EQ = 1e-6
TOL_NEQ = 1e-6
LEMMAS = ("slope", "uv", "slopebis", "leftright", "updown")


class TraceError(RuntimeError):
    pass


@dataclass(frozen=True)
class SectionSetup:
    stratum: Stratum
    point: StratumPoint
    seed: int | None = None

    @property
    def s(self) -> int:
        return self.stratum.dimension

    @property
    def n(self) -> int:
        return self.stratum.n

    @property
    def indices(self) -> tuple:
        """1-based coordinates of the section plane (one index for a line)."""
        return tuple(k for k in (self.s + 1, self.s + 2) if k <= self.n)

    @property
    def anchor(self) -> np.ndarray:
        return np.array([float(v) for v in self.point.a])


def section_setup(stratum: Stratum, seed=None, allow_line: bool = False, **sample_kw) -> SectionSetup:
    """Sample A on `stratum`; the section runs along a_{s+1}, a_{s+2}.

    ``allow_line`` admits s = n - 1, where only a_{s+1} is left (the x^2 + lambda
    picture); slopes are then undefined.
    """
    limit = stratum.n - 1 if allow_line else stratum.n - 2
    if stratum.dimension > limit:
        raise ValueError(f"stratum {stratum} has dimension {stratum.dimension} > {limit}")
    return SectionSetup(stratum, sample_stratum(stratum, seed, **sample_kw), seed)


def setup_at(config: RootConfiguration, allow_line: bool = False) -> SectionSetup:
    """Section setup at a given root configuration."""
    point = StratumPoint.from_config(config)
    limit = point.n - 1 if allow_line else point.n - 2
    if point.stratum.dimension > limit:
        raise ValueError(f"stratum {point.stratum} has dimension {point.stratum.dimension} > {limit}")
    return SectionSetup(point.stratum, point, None)


# ---------------------------------------------------------------------------
# curve model

class _CurveModel:
    """Root configurations near A for one cover label, as a function of (theta, delta).

    theta holds A's real-chart parameters with the perturbed root y_i
    replaced by the centre c of its perturbation.
    """

    def __init__(self, setup: SectionSetup, label: CoverLabel):
        self.setup = setup
        self.label = label
        base = setup.point.config
        self.base = RootConfiguration(tuple((float(y), m) for y, m in base.real_roots),
                                      tuple((float(a), float(b)) for a, b in base.complex_pairs))
        self.q = len(base.real_roots)
        self.p = len(base.complex_pairs)
        self.s = setup.s
        self.theta0 = self.base.params()
        # the anchor is recomputed exactly from the (binary) float roots
        self.A_exact = expand_from_roots(self.base).coeffs
        self.A = np.array([float(v) for v in self.A_exact])
        self.T = self._param_map()

    def build(self, theta, delta) -> RootConfiguration:
        i = self.label.i - 1
        ys = list(theta[: self.q])
        mults = [m for _, m in self.base.real_roots]
        pairs = [(theta[self.q + 2 * k], theta[self.q + 2 * k + 1]) for k in range(self.p)]
        c = ys[i]
        if self.label.kind == "split":
            j = self.label.j
            reals = list(zip(ys[:i], mults[:i])) + [(c - delta / 2, j), (c + delta / 2, mults[i] - j)] \
                + list(zip(ys[i + 1:], mults[i + 1:]))
        else:
            reals = list(zip(ys[:i], mults[:i])) + list(zip(ys[i + 1:], mults[i + 1:]))
            pairs = pairs + [(c, delta)]
        return RootConfiguration(tuple(reals), tuple(pairs))

    def _param_map(self) -> np.ndarray:
        """d(config real-chart params) / d(theta, delta); constant."""
        i = self.label.i - 1
        s = self.s
        if self.label.kind == "split":
            rows = []
            for k in range(self.q):
                if k == i:
                    rows.append(_unit(s + 1, k, {s: -0.5}))
                    rows.append(_unit(s + 1, k, {s: 0.5}))
                else:
                    rows.append(_unit(s + 1, k))
            for k in range(2 * self.p):
                rows.append(_unit(s + 1, self.q + k))
        else:
            rows = [_unit(s + 1, k) for k in range(self.q) if k != i]
            rows += [_unit(s + 1, self.q + k) for k in range(2 * self.p)]
            rows.append(_unit(s + 1, i))
            rows.append(_unit(s + 1, s))
        return np.array(rows)

    def coeffs_and_jac(self, theta, delta):
        cfg = self.build(theta, delta)
        return vieta_coeffs(cfg), coeff_jacobian(cfg) @ self.T

    def solve(self, delta, theta=None, target_offset=None, maxiter=60, polish=2):
        """Newton solve of a_1..a_s = A_1..A_s at fixed delta.

        With `target_offset` the delta is also unknown and a_{s+1} - A_{s+1}
        is pinned to that value.  Returns (theta, delta, offsets) with
        offsets = a - A.  The float solution is polished by `polish` Newton
        steps whose residuals are evaluated in exact arithmetic, so the
        offsets keep full relative accuracy even when they are tiny.
        """
        s = self.s
        theta = self.theta0.copy() if theta is None else np.array(theta, dtype=float)
        x = np.append(theta, delta) if target_offset is not None else theta
        m = s + 1 if target_offset is not None else s
        target = self.A[:m].copy()
        if target_offset is not None:
            target[s] += target_offset
        scale = 1.0 + np.max(np.abs(self.A))

        def unpack(x):
            return (x[:s], x[s]) if target_offset is not None else (x, delta)

        def resid(x):
            th, de = unpack(x)
            a, J = self.coeffs_and_jac(th, de)
            cols = J[:m, : s + 1] if target_offset is not None else J[:m, :s]
            return a[:m] - target, cols, a

        try:
            F, J, a = resid(x)
        except ValueError as exc:
            raise TraceError(str(exc)) from None
        for _ in range(maxiter):
            if np.max(np.abs(F)) <= 1e-14 * scale:
                break
            try:
                step = np.linalg.solve(J, -F)
            except np.linalg.LinAlgError:
                raise TraceError("singular Newton system") from None
            t = 1.0
            norm = np.linalg.norm(F)
            while t > 1e-6:
                try:
                    F2, J2, a2 = resid(x + t * step)
                except ValueError:
                    t *= 0.5
                    continue
                if np.linalg.norm(F2) < norm or np.max(np.abs(F2)) <= 1e-14 * scale:
                    x, F, J, a = x + t * step, F2, J2, a2
                    break
                t *= 0.5
            else:
                break
        if np.max(np.abs(F)) > 1e-10:
            raise TraceError(f"Newton did not converge (residual {np.max(np.abs(F)):.2e})")
        xf = [Fraction(float(v)) for v in x]
        if target_offset is None:
            delta = Fraction(float(delta))
        tgt = list(self.A_exact[:m])
        if target_offset is not None:
            tgt[s] += Fraction(target_offset)
        off = None
        for it in range(polish + 1):
            th, de = unpack(xf)
            try:
                ae = expand_from_roots(self.build(th, de)).coeffs
            except ValueError:
                raise TraceError("polish left the stratum") from None
            off = [u - v for u, v in zip(ae, self.A_exact)]
            if it == polish:
                break
            Fe = np.array([float(u - v) for u, v in zip(ae[:m], tgt)])
            if not Fe.any():
                break
            step = np.linalg.solve(J, -Fe)
            xf = [u + Fraction(float(d)) for u, d in zip(xf, step)]
        th, de = unpack(xf)
        return (np.array([float(v) for v in th]), float(de),
                np.array([float(v) for v in off]))


def _unit(size, k, extra=None):
    row = np.zeros(size)
    row[k] = 1.0
    for c, v in (extra or {}).items():
        row[c] += v
    return row


# ---------------------------------------------------------------------------
# adjacent curves

@dataclass
class AdjacentCurve:
    label: CoverLabel
    upper: tuple
    deltas: np.ndarray
    offsets: np.ndarray          # rows (a_{s+1} - A_{s+1}, a_{s+2} - A_{s+2})
    thetas: list
    slope: float | None
    intercept: float | None
    side: int
    slope_ratio: float
    residual: float
    dropped: list = field(default_factory=list)

    @property
    def kind(self) -> str:
        return "U" if self.label.kind == "split" else "V"

    def to_json(self) -> dict:
        return {
            "label": str(self.label),
            "upper": list(self.upper),
            "points": [[float(d)] + [float(v) for v in row] for d, row in zip(self.deltas, self.offsets)],
            "slope": self.slope,
            "intercept": self.intercept,
            "side": "right" if self.side > 0 else "left" if self.side < 0 else "mixed",
            "slope_cauchy_ratio": self.slope_ratio,
            "residual": self.residual,
            "dropped_scales": [float(d) for d in self.dropped],
        }


def default_scales(setup: SectionSetup, levels: int = 7) -> np.ndarray:
    sep = setup.point.config.min_separation()
    d0 = min(0.1, 0.25 * sep) if math.isfinite(sep) else 0.1
    return d0 * 0.5 ** np.arange(levels)


def trace_adjacent_curve(setup: SectionSetup, label: CoverLabel, scales=None) -> AdjacentCurve:
    """Trace the curve of the adjacent stratum `label` through A."""
    upper = label.apply(setup.stratum.parts)
    scales = default_scales(setup) if scales is None else np.asarray(scales, dtype=float)
    model = _CurveModel(setup, label)
    s = setup.s
    kept, rows, thetas, dropped = [], [], [], []
    residual = 0.0
    theta = None
    for d in scales:
        try:
            theta, _, off = model.solve(float(d), theta)
        except TraceError:
            dropped.append(float(d))
            theta = None
            continue
        residual = max(residual, float(np.max(np.abs(off[:s]))))
        kept.append(float(d))
        rows.append(off[s:s + 2])
        thetas.append(theta.copy())
    if not kept:
        raise TraceError(f"no scale converged for {label}")
    offsets = np.array(rows)
    signs = np.sign(offsets[:, 0])
    side = int(signs[0]) if np.all(signs == signs[0]) else 0
    slope = intercept = None
    ratio = math.inf
    if offsets.shape[1] == 2 and len(kept) >= 2:
        secants = offsets[:, 1] / offsets[:, 0]
        est, _ = richardson(secants)
        slope = float(est)
        ratio = cauchy_ratio(secants, 1e-13 * (1 + abs(slope)))
        A = model.A
        intercept = float(A[s + 1] - slope * A[s])
    return AdjacentCurve(label, upper, np.array(kept), offsets, thetas, slope, intercept,
                         side, ratio, residual, dropped)


def trace_all(setup: SectionSetup, scales=None) -> list:
    return [trace_adjacent_curve(setup, lab, scales) for lab in upward_labels(setup.stratum.parts)]


def offsets_at(setup: SectionSetup, curve: AdjacentCurve, targets) -> np.ndarray:
    """a_{s+2} - A_{s+2} on `curve` where a_{s+1} - A_{s+1} equals each target."""
    model = _CurveModel(setup, curve.label)
    d1 = curve.offsets[:, 0]
    out = []
    for t in targets:
        k = int(np.argmin(np.abs(np.log(np.abs(d1) / abs(t)))))
        ratio = math.sqrt(abs(t / d1[k]))
        theta = model.theta0 + (curve.thetas[k] - model.theta0) * ratio
        _, _, off = model.solve(curve.deltas[k] * ratio, theta, target_offset=t)
        out.append(off[setup.s + 1])
    return np.array(out)


# ---------------------------------------------------------------------------
# lemma checks

@dataclass
class LemmaReport:
    lemma: str
    stratum: Stratum
    seed: int | None
    verdict: str
    margins: dict
    curves: list
    note: str = ""
    order: str = "descending"

    @property
    def passed(self) -> bool:
        return self.verdict == "PASS"

    def to_json(self) -> dict:
        return {
            "lemma": self.lemma,
            "stratum": list(self.stratum.parts),
            "n": self.stratum.n,
            "seed": self.seed,
            "verdict": self.verdict,
            "margins": self.margins,
            "note": self.note,
            "index_order": self.order,
            "curves": [c.to_json() for c in self.curves],
        }


def _lemma_i(i: int, q: int, order: str) -> int:
    if order == "descending":
        return q - i + 1
    if order == "ascending":
        return i
    raise ValueError(f"unknown index order {order!r}")


def _lemma_j(j: int, r: int, order: str) -> int:
    return r - j if order == "descending" else j


def _groups(curves) -> dict:
    out = {}
    for c in curves:
        out.setdefault(c.label.i, []).append(c)
    return out


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(1.0, abs(a), abs(b))


def _report(lemma, setup, ok, margins, curves, note, order):
    return LemmaReport(lemma, setup.stratum, setup.seed, "PASS" if ok else "FAIL",
                       margins, list(curves), note, order)


def _curves(setup, curves):
    return trace_all(setup) if curves is None else curves


def verify_lemma_slope(setup, curves=None, tol_eq=TOL_EQ, tol_neq=TOL_NEQ, order="descending"):
    """Tangent slopes agree for curves from the same component, differ otherwise."""
    curves = _curves(setup, curves)
    if len(setup.indices) < 2:
        return _report("slope", setup, True, {}, curves, "vacuous: no slopes on a line section", order)
    groups = _groups(curves)
    dev = 0.0
    for cs in groups.values():
        ks = [c.slope for c in cs]
        dev = max([dev] + [_rel(k, ks[0]) for k in ks])
    reps = {i: cs[0].slope for i, cs in groups.items()}
    gaps = [abs(reps[a] - reps[b]) for a in reps for b in reps if a < b]
    gap = min(gaps) if gaps else math.inf
    ok = dev <= tol_eq and gap > tol_neq
    note = "" if len(groups) > 1 else "single component: distinctness vacuous"
    return _report("slope", setup, ok, {"max_equal_dev": dev, "min_distinct_gap": gap}, curves, note, order)


def verify_lemma_uv(setup, curves=None, tol_eq=TOL_EQ, tol_neq=TOL_NEQ, order="descending"):
    """For r_i = 2 the curves U_{i,1} and V_i share a tangent and lie on opposite sides."""
    curves = _curves(setup, curves)
    idx = [k for k, r in enumerate(setup.stratum.parts, start=1) if r == 2]
    if not idx:
        return _report("uv", setup, True, {}, curves, "vacuous: no component equal to 2", order)
    dev = 0.0
    opposite = True
    for i in idx:
        u = next(c for c in curves if c.label == CoverLabel("split", i, 1))
        v = next(c for c in curves if c.label == CoverLabel("delete2", i))
        if u.slope is not None:
            dev = max(dev, _rel(u.slope, v.slope))
        opposite &= u.side * v.side == -1
    ok = dev <= tol_eq and opposite
    return _report("uv", setup, ok, {"max_slope_dev": dev, "opposite_sides": opposite}, curves, "", order)


def verify_lemma_slopebis(setup, curves=None, tol_eq=TOL_EQ, tol_neq=TOL_NEQ, order="descending"):
    """Slopes strictly decrease with the component index."""
    curves = _curves(setup, curves)
    if len(setup.indices) < 2:
        return _report("slopebis", setup, True, {}, curves, "vacuous: no slopes on a line section", order)
    q = len(setup.stratum.parts)
    groups = _groups(curves)
    ranked = sorted((_lemma_i(i, q, order), cs[0].slope) for i, cs in groups.items())
    if len(ranked) < 2:
        return _report("slopebis", setup, True, {}, curves, "vacuous: fewer than two components split", order)
    gaps = [k1 - k2 for (_, k1), (_, k2) in zip(ranked, ranked[1:])]
    margin = min(gaps)
    return _report("slopebis", setup, margin > tol_neq,
                   {"min_decrease": margin, "slopes": [k for _, k in ranked]}, curves, "", order)


def verify_lemma_leftright(setup, curves=None, tol_eq=TOL_EQ, tol_neq=TOL_NEQ, order="descending"):
    """U_{i,j} lies right of A for even i and left for odd i; V_i opposite U_{i,1}."""
    curves = _curves(setup, curves)
    q = len(setup.stratum.parts)
    margin = math.inf
    for c in curves:
        i = _lemma_i(c.label.i, q, order)
        want = 1 if i % 2 == 0 else -1
        if c.kind == "V":
            want = -want
        norm = want * c.offsets[:, 0] / c.deltas ** 2
        margin = min(margin, float(np.min(norm)))
    if not curves:
        return _report("leftright", setup, True, {}, curves, "vacuous: no adjacent curves", order)
    return _report("leftright", setup, margin > tol_neq, {"min_signed_offset": margin}, curves, "", order)


def verify_lemma_updown(setup, curves=None, tol_eq=TOL_EQ, tol_neq=TOL_NEQ, order="descending",
                        levels: int = 6):
    """For fixed i, U_{i,j1} is above U_{i,j2} iff (i odd, j1 > j2) or (i even, j1 < j2).

    Curves are compared at common offsets a_{s+1} - A_{s+1} = t; the gap in
    a_{s+2} scales like |t|^(3/2) and its normalized value is extrapolated
    to t -> 0.
    """
    curves = _curves(setup, curves)
    if len(setup.indices) < 2:
        return _report("updown", setup, True, {}, curves, "vacuous: no a_{s+2} on a line section", order)
    parts = setup.stratum.parts
    q = len(parts)
    idx = [k for k, r in enumerate(parts, start=1) if r >= 3]
    if not idx:
        return _report("updown", setup, True, {}, curves, "vacuous: no component >= 3", order)
    margin = math.inf
    gaps = {}
    ok = True
    for i in idx:
        cs = sorted((c for c in curves if c.kind == "U" and c.label.i == i), key=lambda c: c.label.j)
        sides = {c.side for c in cs}
        if len(sides) != 1 or 0 in sides:
            ok = False
            margin = -math.inf
            continue
        side = sides.pop()
        # stay inside the range every curve was traced over
        hi = 0.5 * min(float(np.max(np.abs(c.offsets[:, 0]))) for c in cs)
        lo = max(float(np.min(np.abs(c.offsets[:, 0]))) for c in cs)
        ts = side * np.geomspace(hi, max(lo, hi * 0.25 ** (levels - 1)), levels)
        vals = {c.label.j: offsets_at(setup, c, ts) for c in cs}
        li = _lemma_i(i, q, order)
        for a_ in range(len(cs)):
            for b_ in range(a_ + 1, len(cs)):
                j1, j2 = cs[a_].label.j, cs[b_].label.j
                l1, l2 = _lemma_j(j1, parts[i - 1], order), _lemma_j(j2, parts[i - 1], order)
                above = (li % 2 == 1 and l1 > l2) or (li % 2 == 0 and l1 < l2)
                want = 1 if above else -1
                g = (vals[j1] - vals[j2]) / np.abs(ts) ** 1.5
                lim, _ = richardson(g)
                signed = want * float(lim)
                consistent = bool(np.all(want * g > 0))
                gaps[f"i={i} j={j1}vs{j2}"] = float(lim)
                margin = min(margin, signed)
                ok &= consistent and signed > tol_neq
    return _report("updown", setup, ok, {"min_normalized_gap": margin, "gaps": gaps}, curves, "", order)


VERIFIERS = {
    "slope": verify_lemma_slope,
    "uv": verify_lemma_uv,
    "slopebis": verify_lemma_slopebis,
    "leftright": verify_lemma_leftright,
    "updown": verify_lemma_updown,
}


def verify_all(setup: SectionSetup, which=LEMMAS, tol_eq=TOL_EQ, tol_neq=TOL_NEQ,
               order="descending") -> dict:
    """Trace the adjacent curves once and run the requested lemma checks."""
    curves = trace_all(setup)
    return {name: VERIFIERS[name](setup, curves, tol_eq, tol_neq, order) for name in which}


def eligible_strata(n: int) -> list:
    from .stratlat import enumerate_mvs

    return [s for s in enumerate_mvs(n) if s.dimension <= n - 2]


def predicted_slope(config: RootConfiguration, i: int) -> float:
    """Closed-form tangent slope for curves leaving component i (1-based).

    With a_1..a_s pinned the slope in the (a_{s+1}, a_{s+2}) plane is
    y_i - sum over distinct roots x_l of (m_l - 1) x_l.
    """
    y = float(config.real_roots[i - 1][0])
    return y - sum((m - 1) * float(x) for x, m in config.real_roots)
