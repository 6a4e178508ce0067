"""Geometry of strata in root coordinates.

A point of a stratum is described by its distinct real roots (with
multiplicities) and its complex conjugate pairs.  Two parameter charts are
used throughout:

* the *complex* chart: one parameter per distinct root, a pair alpha +- i beta
  contributing the two columns z and conj(z).  Power-sum Jacobians in this
  chart are multiplicity-weighted Vandermonde matrices, and the cofactor
  formula for d b_k / d b_u lives here.
* the *real* chart: parameters (y_1, ..., y_q, alpha_1, beta_1, ...).  The
  change from the complex chart is d/d alpha = d/dz + d/dz-bar and
  d/d beta = i d/dz - i d/dz-bar.

Coefficients a follow P(x) = x^n + a_1 x^(n-1) + ... + a_n and b_j is the sum
of j-th powers of all roots counted with multiplicity.  All numerics are
float64.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from . import polycore
from .polycore import MonicPolynomial, MultiplicityVector
from .stratlat import Stratum, validate_mv


# ---------------------------------------------------------------------------
# configurations

@dataclass(frozen=True)
class RootConfiguration:
    real_roots: tuple = ()
    complex_pairs: tuple = ()

    def __post_init__(self):
        reals = tuple((y, int(m)) for y, m in self.real_roots)
        pairs = tuple((a, b) for a, b in self.complex_pairs)
        for (y0, _), (y1, _) in zip(reals, reals[1:]):
            if not y0 < y1:
                raise ValueError(f"real roots must be strictly increasing: {y0} !< {y1}")
        if any(m < 1 for _, m in reals):
            raise ValueError("multiplicities must be positive")
        if any(not b > 0 for _, b in pairs):
            raise ValueError("imaginary parts must be positive")
        object.__setattr__(self, "real_roots", reals)
        object.__setattr__(self, "complex_pairs", pairs)

    @property
    def degree(self) -> int:
        return sum(m for _, m in self.real_roots) + 2 * len(self.complex_pairs)

    @property
    def mv(self) -> MultiplicityVector:
        return MultiplicityVector(tuple(m for _, m in self.real_roots))

    @property
    def stratum(self) -> Stratum:
        return validate_mv(self.mv.parts, self.degree)

    @property
    def dimension(self) -> int:
        """Free parameter count q + 2p, equal to n - r."""
        return len(self.real_roots) + 2 * len(self.complex_pairs)

    @property
    def is_rational(self) -> bool:
        vals = [y for y, _ in self.real_roots] + [v for p in self.complex_pairs for v in p]
        return all(isinstance(v, (int, Fraction)) for v in vals)

    def nodes(self) -> tuple:
        """Distinct roots (complex chart order) and their weights m_i."""
        xs = [complex(y) for y, _ in self.real_roots]
        ws = [m for _, m in self.real_roots]
        for a, b in self.complex_pairs:
            z = complex(float(a), float(b))
            xs += [z, z.conjugate()]
            ws += [1, 1]
        return np.array(xs), np.array(ws, dtype=float)

    def params(self) -> np.ndarray:
        """Real-chart parameter vector (y_1..y_q, alpha_1, beta_1, ...)."""
        vals = [float(y) for y, _ in self.real_roots]
        for a, b in self.complex_pairs:
            vals += [float(a), float(b)]
        return np.array(vals)

    def with_params(self, theta) -> "RootConfiguration":
        theta = [float(t) for t in theta]
        q = len(self.real_roots)
        reals = tuple((theta[k], m) for k, (_, m) in enumerate(self.real_roots))
        pairs = tuple((theta[q + 2 * k], theta[q + 2 * k + 1]) for k in range(len(self.complex_pairs)))
        return RootConfiguration(reals, pairs)

    def min_separation(self) -> float:
        xs, _ = self.nodes()
        if len(xs) < 2:
            return math.inf
        d = np.abs(xs[:, None] - xs[None, :])
        return float(d[~np.eye(len(xs), dtype=bool)].min())

    def coincident_pairs(self) -> list:
        """Index pairs (k, l), k < l, of complex pairs that coincide exactly."""
        cp = self.complex_pairs
        return [(k, l) for k in range(len(cp)) for l in range(k + 1, len(cp)) if cp[k] == cp[l]]

    def to_json(self) -> dict:
        return {
            "real_roots": [{"y": _num(y), "mult": m} for y, m in self.real_roots],
            "complex_pairs": [{"alpha": _num(a), "beta": _num(b)} for a, b in self.complex_pairs],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "RootConfiguration":
        return cls(
            tuple((_parse_num(r["y"]), int(r["mult"])) for r in doc.get("real_roots", [])),
            tuple((_parse_num(c["alpha"]), _parse_num(c["beta"])) for c in doc.get("complex_pairs", [])),
        )


def _num(v):
    if isinstance(v, Fraction):
        return str(v) if v.denominator != 1 else int(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    return float(v)


def _parse_num(v):
    if isinstance(v, str):
        return Fraction(v)
    return v


# ---------------------------------------------------------------------------
# coefficient and power-sum maps

def _poly_from_factors(config: RootConfiguration, skip=None) -> np.ndarray:
    """Product of the linear/quadratic factors (degree-descending floats)."""
    out = np.array([1.0])
    for k, (y, m) in enumerate(config.real_roots):
        e = m - 1 if skip == ("real", k) else m
        for _ in range(e):
            out = np.convolve(out, [1.0, -float(y)])
    for k, (a, b) in enumerate(config.complex_pairs):
        if skip == ("pair", k):
            continue
        a, b = float(a), float(b)
        out = np.convolve(out, [1.0, -2 * a, a * a + b * b])
    return out


def vieta_coeffs(config: RootConfiguration) -> np.ndarray:
    """(a_1, ..., a_n) of the configuration's polynomial."""
    return _poly_from_factors(config)[1:]


def power_sums(config: RootConfiguration, upto: int | None = None) -> np.ndarray:
    """(b_1, ..., b_upto); defaults to upto = n."""
    upto = config.degree if upto is None else upto
    out = np.zeros(upto)
    for j in range(1, upto + 1):
        acc = 0.0
        for y, m in config.real_roots:
            acc += m * float(y) ** j
        for a, b in config.complex_pairs:
            acc += 2 * (complex(float(a), float(b)) ** j).real
        out[j - 1] = acc
    return out


def _like(src, vals):
    return np.asarray(vals) if isinstance(src, np.ndarray) else tuple(vals)


def newton_a_to_b(a, upto: int | None = None):
    """Power sums from coefficients: b_j + a_1 b_(j-1) + ... + j a_j = 0."""
    n = len(a)
    upto = n if upto is None else upto
    b = []
    for j in range(1, upto + 1):
        acc = j * a[j - 1] if j <= n else 0
        for i in range(1, min(j, n + 1)):
            acc += a[i - 1] * b[j - i - 1]
        b.append(-acc)
    return _like(a, b)


def newton_b_to_a(b):
    """Inverse of :func:`newton_a_to_b` on full-length vectors."""
    a = []
    for j in range(1, len(b) + 1):
        acc = b[j - 1]
        for i in range(1, j):
            acc += a[i - 1] * b[j - i - 1]
        a.append(Fraction(-acc, j) if isinstance(acc, int) else -acc / j)
    return _like(b, a)


def newton_b_to_a_jacobian(b) -> np.ndarray:
    """d a / d b for the Newton map (lower triangular, diagonal -1/j)."""
    b = np.asarray(b, dtype=float)
    n = len(b)
    a = np.asarray(newton_b_to_a(b), dtype=float)
    da = np.zeros((n, n))
    for j in range(1, n + 1):
        row = np.zeros(n)
        row[j - 1] += 1.0
        for i in range(1, j):
            row += da[i - 1] * b[j - i - 1]
            row[j - i - 1] += a[i - 1]
        da[j - 1] = -row / j
    return da


def coeff_jacobian(config: RootConfiguration) -> np.ndarray:
    """n x (q + 2p) matrix d a / d(real-chart parameters)."""
    n = config.degree
    cols = []
    for k, (y, m) in enumerate(config.real_roots):
        rest = _poly_from_factors(config, skip=("real", k))
        cols.append(-m * rest)
    for k, (a, b) in enumerate(config.complex_pairs):
        rest = _poly_from_factors(config, skip=("pair", k))
        cols.append(np.convolve(rest, [-2.0, 2 * float(a)]))
        cols.append(2 * float(b) * rest)
    out = np.zeros((n, len(cols)))
    for c, col in enumerate(cols):
        out[n - len(col):, c] = col
    return out


def power_sum_jacobian(config: RootConfiguration, rows: int | None = None) -> np.ndarray:
    """rows x (q + 2p) matrix d b_j / d(real-chart parameters), j = 1..rows."""
    rows = config.dimension if rows is None else rows
    j = np.arange(1, rows + 1)
    cols = []
    for y, m in config.real_roots:
        cols.append(j * m * float(y) ** (j - 1))
    for a, b in config.complex_pairs:
        z = complex(float(a), float(b))
        zp = j * z ** (j - 1)
        cols.append(2 * zp.real)
        cols.append(-2 * zp.imag)
    return np.column_stack(cols) if cols else np.zeros((rows, 0))


# ---------------------------------------------------------------------------
# stratum points

@dataclass(frozen=True)
class StratumPoint:
    stratum: Stratum
    config: RootConfiguration
    a: tuple
    b: tuple

    @classmethod
    def from_config(cls, config: RootConfiguration) -> "StratumPoint":
        if config.is_rational:
            a = polycore.expand_from_roots(config).coeffs
            b = newton_a_to_b(a)
        else:
            a = tuple(float(v) for v in vieta_coeffs(config))
            b = tuple(float(v) for v in power_sums(config))
        return cls(config.stratum, config, tuple(a), tuple(b))

    @property
    def n(self) -> int:
        return self.stratum.n

    def to_json(self) -> dict:
        doc = {"mv": list(self.stratum.parts), "n": self.n}
        doc.update(self.config.to_json())
        doc["a"] = [_num(v) for v in self.a]
        doc["b"] = [_num(v) for v in self.b]
        return doc

    @classmethod
    def from_json(cls, doc: dict) -> "StratumPoint":
        config = RootConfiguration.from_json(doc)
        if "n" in doc and int(doc["n"]) != config.degree:
            raise ValueError(f"n={doc['n']} does not match the roots (degree {config.degree})")
        if "mv" in doc and tuple(doc["mv"]) != config.mv.parts:
            raise ValueError(f"mv {doc['mv']} does not match the roots {list(config.mv.parts)}")
        return cls.from_config(config)


def sample_stratum(stratum: Stratum, seed=None, box=(-2.0, 2.0), separation=0.2,
                   beta_min=0.2, exact=False, grid=10) -> StratumPoint:
    """Random point of a stratum with well separated roots.

    Real roots are drawn in `box` at least `separation` apart; pairs get
    alpha in `box`, beta in [beta_min, half the box width], and complex roots
    also keep `separation` from each other.  With ``exact=True`` every entry
    is a rational on the 1/grid lattice.
    """
    rng = np.random.default_rng(seed)
    lo, hi = map(float, box)
    q, p = len(stratum.parts), stratum.pairs
    width = hi - lo
    if q > 1 and (q - 1) * separation > width:
        raise ValueError(f"box {box} cannot hold {q} roots {separation} apart")
    beta_hi = max(width / 2, beta_min)

    if exact:
        L = int(round(width * grid))
        g = int(math.ceil(separation * grid - 1e-9))
        room = L - (q - 1) * g
        if room < 0:
            raise ValueError(f"box {box} cannot hold {q} roots {separation} apart")
        u = np.sort(rng.integers(0, room + 1, size=q))
        ys = [Fraction(int(lo * grid) + int(v) + k * g, grid) for k, v in enumerate(u)]
    else:
        u = np.sort(rng.uniform(0.0, width - (q - 1) * separation, size=q))
        ys = [lo + float(v) + k * separation for k, v in enumerate(u)]

    pairs = []
    for _ in range(p):
        for _attempt in range(10000):
            if exact:
                a = Fraction(int(rng.integers(int(math.ceil(lo * grid)), int(math.floor(hi * grid)) + 1)), grid)
                b = Fraction(int(rng.integers(int(math.ceil(beta_min * grid)), int(math.floor(beta_hi * grid)) + 1)), grid)
            else:
                a = float(rng.uniform(lo, hi))
                b = float(rng.uniform(beta_min, beta_hi))
            z = complex(float(a), float(b))
            if all(abs(z - complex(float(a2), float(b2))) >= separation and
                   abs(z - complex(float(a2), -float(b2))) >= separation for a2, b2 in pairs):
                pairs.append((a, b))
                break
        else:
            raise ValueError(f"box {box} cannot hold {p} complex pairs {separation} apart")
    config = RootConfiguration(tuple(zip(ys, stratum.parts)), tuple(pairs))
    return StratumPoint.from_config(config)


# ---------------------------------------------------------------------------
# Jacobians and the cofactor formula

@dataclass
class JacobianReport:
    """Power-sum Jacobian d b_j / d x_i (rows j = 1..rows) in one chart."""

    matrix: np.ndarray
    chart: str
    nodes: np.ndarray | None = None
    weights: np.ndarray | None = None

    @property
    def det(self):
        if not self.matrix.size:
            return 1.0
        # coincident nodes give proportional columns: report an exact zero
        if self.nodes is not None and len(set(self.nodes.tolist())) < len(self.nodes):
            return 0.0
        return np.linalg.det(self.matrix)

    def cofactor(self, u: int, i: int):
        """A_{u,i}: signed minor of entry (row u, column i), both 1-based."""
        m = np.delete(np.delete(self.matrix, u - 1, axis=0), i - 1, axis=1)
        minor = np.linalg.det(m) if m.size else 1.0
        return (-1) ** (u + i) * minor

    def cofactors(self) -> np.ndarray:
        s = self.matrix.shape[0]
        out = np.zeros((s, s), dtype=self.matrix.dtype)
        for u in range(1, s + 1):
            for i in range(1, s + 1):
                out[u - 1, i - 1] = self.cofactor(u, i)
        return out


def jacobian(config: RootConfiguration, chart: str = "complex", rows: int | None = None) -> JacobianReport:
    if chart == "real":
        return JacobianReport(power_sum_jacobian(config, rows), "real")
    if chart != "complex":
        raise ValueError(f"unknown chart {chart!r}")
    xs, ws = config.nodes()
    rows = len(xs) if rows is None else rows
    j = np.arange(1, rows + 1)[:, None]
    mat = j * ws[None, :] * xs[None, :] ** (j - 1)
    return JacobianReport(mat, "complex", xs, ws)


def _eq1_matrix(config: RootConfiguration) -> np.ndarray:
    s = config.dimension
    n = config.degree
    rep = jacobian(config, "complex")
    w = rep.det
    cof = rep.cofactors()
    xs, ws = rep.nodes, rep.weights
    out = np.zeros((n - s, s))
    for k in range(s + 1, n + 1):
        for u in range(1, s + 1):
            val = k * np.sum(ws * xs ** (k - 1) * cof[u - 1]) / w
            out[k - s - 1, u - 1] = val.real
    return out


def _separating_path(config: RootConfiguration) -> Callable:
    """Path eps -> configuration that pulls coincident complex pairs apart."""
    dupes = config.coincident_pairs()
    movers = sorted({l for _, l in dupes})

    def path(eps):
        pairs = list(config.complex_pairs)
        for rank, l in enumerate(movers, start=1):
            a, b = pairs[l]
            pairs[l] = (float(a) + 0.6 * rank * eps, float(b) + 0.8 * rank * eps)
        return RootConfiguration(config.real_roots, tuple(pairs))

    return path


def graph_partials_matrix(config: RootConfiguration, eps0: float = 0.05, levels: int = 8) -> np.ndarray:
    """(n-s) x s matrix of d b_k / d b_u, k = s+1..n, u = 1..s, s = n - r."""
    if config.coincident_pairs():
        path = _separating_path(config)
        s, n = config.dimension, config.degree
        targets = [(k, u) for k in range(s + 1, n + 1) for u in range(1, s + 1)]
        rep = boundary_limit_probe(path, targets, eps0=eps0, levels=levels)
        return rep.limit.reshape(n - s, s)
    return _eq1_matrix(config)


def graph_partials(config: RootConfiguration, k: int, u: int) -> float:
    """d b_k / d b_u along the stratum through `config` (cofactor formula).

    At coincident complex roots the value is the limit along a separating
    path.
    """
    s = config.dimension
    if not (k >= s + 1 and 1 <= u <= s):
        raise ValueError(f"need k >= {s + 1} and 1 <= u <= {s}, got k={k}, u={u}")
    if k <= config.degree:
        return float(graph_partials_matrix(config)[k - s - 1, u - 1])
    if config.coincident_pairs():
        rep = boundary_limit_probe(_separating_path(config), [(k, u)])
        return float(rep.limit[0])
    rep = jacobian(config, "complex")
    xs, ws = rep.nodes, rep.weights
    cof = np.array([rep.cofactor(u, i) for i in range(1, s + 1)])
    return float((k * np.sum(ws * xs ** (k - 1) * cof) / rep.det).real)


def solve_params_for_power_sums(config: RootConfiguration, target, tol=1e-14, maxiter=50) -> RootConfiguration:
    """Newton solve for real-chart parameters with b_1..b_s equal to `target`."""
    theta = config.params()
    cur = config
    target = np.asarray(target, dtype=float)
    scale = 1.0 + np.max(np.abs(target))
    for _ in range(maxiter):
        res = power_sums(cur, len(target)) - target
        if np.max(np.abs(res)) <= tol * scale:
            return cur
        step = np.linalg.solve(power_sum_jacobian(cur, len(target)), res)
        theta = theta - step
        cur = config.with_params(theta)
    if np.max(np.abs(power_sums(cur, len(target)) - target)) > 1e-10 * scale:
        raise RuntimeError("power-sum inversion did not converge")
    return cur


def finite_difference_partials(config: RootConfiguration, h: float = 1e-3) -> np.ndarray:
    """Five-point central differences of b_k(b_1..b_s) along the stratum."""
    s, n = config.dimension, config.degree
    b0 = power_sums(config, s)
    out = np.zeros((n - s, s))
    for u in range(s):
        vals = []
        for step in (-2, -1, 1, 2):
            tgt = b0.copy()
            tgt[u] += step * h
            cfg = solve_params_for_power_sums(config, tgt)
            vals.append(power_sums(cfg, n)[s:])
        out[:, u] = (vals[0] - 8 * vals[1] + 8 * vals[2] - vals[3]) / (12 * h)
    return out


def scaled_sigma_min(mat: np.ndarray) -> float:
    """Smallest singular value after unit row max-norm and unit column 2-norm."""
    m = np.array(mat, dtype=float)
    m = m / np.max(np.abs(m), axis=1, keepdims=True)
    m = m / np.linalg.norm(m, axis=0, keepdims=True)
    return float(np.linalg.svd(m, compute_uv=False)[-1])


def symbolic_cofactor_sum(weights: Sequence[int], mu: int, nu: int, u: int):
    """Exact m_mu A_{u,mu} + m_nu A_{u,nu} after substituting x_nu = x_mu.

    Returns (sum, others) where `others` are the cofactors A_{u,i}, i not in
    {mu, nu}; indices are 1-based.  Uses sympy.
    """
    import sympy as sp

    s = len(weights)
    xs = sp.symbols(f"x1:{s + 1}")
    mat = sp.Matrix(s, s, lambda j, i: (j + 1) * weights[i] * xs[i] ** j)
    mat = mat.subs(xs[nu - 1], xs[mu - 1])
    cof = [mat.cofactor(u - 1, i) for i in range(s)]
    total = sp.expand(weights[mu - 1] * cof[mu - 1] + weights[nu - 1] * cof[nu - 1])
    others = [sp.expand(cof[i]) for i in range(s) if i not in (mu - 1, nu - 1)]
    return total, others


# ---------------------------------------------------------------------------
# limits along paths

def richardson(values: np.ndarray, ratio: float = 2.0):
    """Richardson table for samples at h_k = h_0 / ratio^k (error in powers of h).

    Returns (estimate, error_estimate).  The estimate is taken from the last
    row at the column where consecutive columns agree best.
    """
    v = np.asarray(values, dtype=float)
    L = v.shape[0]
    if v[0].size == 0:
        return v[0], v[0]
    table = [v[0]]
    prev_row = [v[0]]
    last = None
    for k in range(1, L):
        row = [v[k]]
        for j in range(1, k + 1):
            row.append(row[j - 1] + (row[j - 1] - prev_row[j - 1]) / (ratio ** j - 1))
        prev_row = row
        last = row
        table.append(row)
    if last is None:
        return v[0], np.full_like(v[0], np.inf)
    diffs = [np.max(np.abs(np.asarray(last[j]) - np.asarray(last[j - 1]))) for j in range(1, len(last))]
    j = int(np.argmin(diffs)) + 1
    err = np.abs(np.asarray(last[j]) - np.asarray(last[j - 1]))
    return np.asarray(last[j]), err


def cauchy_ratio(values: np.ndarray, floor: float = 0.0) -> float:
    """Average factor by which successive differences shrink (inf if flat)."""
    v = np.asarray(values, dtype=float).reshape(len(values), -1)
    if v.shape[1] == 0:
        return math.inf
    d = np.max(np.abs(np.diff(v, axis=0)), axis=1)
    d = np.maximum(d, floor)
    if len(d) < 2 or d[-1] <= floor:
        return math.inf
    if d[0] <= floor:
        return 1.0
    return float((d[0] / d[-1]) ** (1.0 / (len(d) - 1)))


@dataclass
class ProbeReport:
    eps: np.ndarray
    targets: list
    values: np.ndarray
    limit: np.ndarray
    error: np.ndarray
    ratio: float
    converged: bool

    def to_json(self) -> dict:
        return {
            "eps": self.eps.tolist(),
            "targets": [list(t) for t in self.targets],
            "values": self.values.tolist(),
            "limit": self.limit.tolist(),
            "error": self.error.tolist(),
            "cauchy_ratio": self.ratio,
            "converged": self.converged,
        }


def boundary_limit_probe(path: Callable, targets, eps0: float = 0.1, levels: int = 8,
                         min_ratio: float = 1.5) -> ProbeReport:
    """Evaluate d b_k / d b_u along path(eps), eps = eps0 / 2^k, and extrapolate.

    `path` maps eps > 0 to a RootConfiguration with all parameter roots
    distinct; `targets` lists (k, u).  Convergence means successive
    differences shrink on average by at least `min_ratio`.
    """
    targets = [tuple(t) for t in targets]
    eps = eps0 * 0.5 ** np.arange(levels)
    vals = np.zeros((levels, len(targets)))
    for r, e in enumerate(eps):
        cfg = path(float(e))
        g = _eq1_matrix(cfg)
        s = cfg.dimension
        for c, (k, u) in enumerate(targets):
            if k <= cfg.degree:
                vals[r, c] = g[k - s - 1, u - 1]
            else:
                vals[r, c] = graph_partials(cfg, k, u)
    limit, err = richardson(vals)
    floor = 1e-11 * (1.0 + (np.max(np.abs(vals)) if vals.size else 0.0))
    ratio = cauchy_ratio(vals, floor)
    ok = bool(np.all(np.isfinite(vals)) and ratio >= min_ratio)
    return ProbeReport(eps, targets, vals, np.atleast_1d(limit), np.atleast_1d(err), ratio, ok)


# ---------------------------------------------------------------------------
# tangent frames

def transversality_margin(basis_cols: np.ndarray, s: int) -> float:
    """sigma_min of the first-s-rows block of an orthonormalized basis."""
    q, _ = np.linalg.qr(np.asarray(basis_cols, dtype=float))
    return float(np.linalg.svd(q[:s, :], compute_uv=False)[-1])


@dataclass
class TangentFrame:
    point: StratumPoint
    basis: np.ndarray            # s x n, one tangent vector per row
    graph_gradient: np.ndarray   # (n - s) x s, d a_(s+k) / d a_u
    margin: float
    limit: bool = False
    source: MultiplicityVector | None = None
    diagnostics: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        doc = {
            "point": self.point.to_json(),
            "basis": self.basis.tolist(),
            "graph_gradient": self.graph_gradient.tolist(),
            "margin": self.margin,
        }
        if self.limit:
            doc["limit"] = True
            doc["stratum"] = list(self.source.parts)
        return doc


def _graph_gradient(ja: np.ndarray) -> np.ndarray:
    s = ja.shape[1]
    top = ja[:s]
    return np.linalg.solve(top.T, ja[s:].T).T


def _normalized_coeff_jacobian(config: RootConfiguration) -> np.ndarray:
    ja = coeff_jacobian(config)
    return ja / np.linalg.norm(ja, axis=0, keepdims=True)


def tangent_frame(point: StratumPoint, approach: Callable | None = None,
                  eps0: float = 0.05, levels: int = 8) -> TangentFrame:
    """Tangent space of the stratum at `point` in a-coordinates.

    With `approach` (eps -> RootConfiguration on a higher-dimensional stratum
    tending to `point` as eps -> 0) the frame is the extrapolated limit of
    that stratum's tangent spaces.  Points with coincident complex pairs are
    handled the same way along a separating path.
    """
    config = point.config
    if approach is None and config.coincident_pairs():
        approach = _separating_path(config)
    if approach is None:
        ja = coeff_jacobian(config)
        s = ja.shape[1]
        sv = np.linalg.svd(ja / np.linalg.norm(ja, axis=0), compute_uv=False)
        diag = {"rank_sigma_min": float(sv[-1])}
        if sv[-1] < 1e-12:
            diag["warning"] = "tangent basis is rank deficient"
        return TangentFrame(point, ja.T.copy(), _graph_gradient(ja),
                            transversality_margin(ja, s), diagnostics=diag)

    eps = eps0 * 0.5 ** np.arange(levels)
    grads = []
    source = None
    for e in eps:
        cfg = approach(float(e))
        source = cfg.mv
        grads.append(_graph_gradient(_normalized_coeff_jacobian(cfg)))
    grads = np.array(grads)
    limit, err = richardson(grads)
    s = grads.shape[2]
    n = point.n
    basis_cols = np.vstack([np.eye(s), limit])
    floor = 1e-11 * (1.0 + (np.max(np.abs(grads)) if grads.size else 0.0))
    diag = {"cauchy_ratio": cauchy_ratio(grads.reshape(levels, -1), floor),
            "extrapolation_error": float(np.max(err)) if err.size else 0.0}
    return TangentFrame(point, basis_cols.T.copy(), limit, transversality_margin(basis_cols, s),
                        limit=True, source=source, diagnostics=diag)


def tangent_basis_b(config: RootConfiguration) -> np.ndarray:
    """Tangent vectors in b-coordinates (n x s columns)."""
    return power_sum_jacobian(config, config.degree)


def graph_gradient_a_from_b(config: RootConfiguration, gb: np.ndarray) -> np.ndarray:
    """Convert the b-chart graph gradient into the a-chart one."""
    s, n = config.dimension, config.degree
    b = power_sums(config, n)
    tb = np.vstack([np.eye(s), gb])
    ta = newton_b_to_a_jacobian(b) @ tb
    return _graph_gradient(ta)


# ---------------------------------------------------------------------------
# P = Q R splitting

@dataclass
class SplitResult:
    Q: tuple
    R: tuple
    certificate: object
    exact: bool = True


def _real_root_part(factor: tuple) -> tuple | None:
    """Exact (real-rooted, complex-rooted) split of a square-free factor, if rational."""
    ivs = polycore.isolate_real_roots(factor)
    deg = len(factor) - 1
    if len(ivs) == 0:
        return (Fraction(1),), factor
    if len(ivs) == deg:
        return polycore.monic(factor), (Fraction(1),)
    if all(iv.is_exact for iv in ivs):
        real = (Fraction(1),)
        for iv in ivs:
            real = polycore.mul(real, (Fraction(1), -iv.lo))
        return real, polycore.exact_div(polycore.monic(factor), real)
    return None


def split_real_complex(p) -> SplitResult:
    """P = Q R with Q carrying the complex roots and R the real ones.

    Exact whenever each square-free factor splits over the rationals into
    its real-rooted and complex-rooted parts; otherwise the split and the
    resultant are computed in floating point (``exact=False``).
    """
    f = polycore.poly(p)
    Q, R = (Fraction(1),), (Fraction(1),)
    for part in polycore.squarefree_decomposition(f):
        sp = _real_root_part(part.factor)
        if sp is None:
            return _split_numeric(f)
        real, cplx = sp
        R = polycore.mul(R, polycore.power(real, part.multiplicity))
        Q = polycore.mul(Q, polycore.power(cplx, part.multiplicity))
    return SplitResult(Q, R, polycore.resultant(Q, R), True)


def _split_numeric(f: tuple) -> SplitResult:
    roots = np.roots([float(c) for c in f])
    real = roots[np.abs(roots.imag) < 1e-9].real
    cplx = roots[np.abs(roots.imag) >= 1e-9]
    Q = np.real(np.poly(cplx)) if len(cplx) else np.array([1.0])
    R = np.real(np.poly(real)) if len(real) else np.array([1.0])
    res = np.prod([np.prod(z - real) for z in cplx]).real if len(cplx) and len(real) else 1.0
    return SplitResult(tuple(Q), tuple(R), float(res), False)


def product_map_jacobian(Q, R) -> list:
    """Exact Jacobian of (c, d) -> a for P = Q R, Q and R monic."""
    Q, R = polycore.poly(Q), polycore.poly(R)
    dq, dr = len(Q) - 1, len(R) - 1
    n = dq + dr
    cols = []
    for i in range(1, dq + 1):
        e = (Fraction(1),) + (Fraction(0),) * (dq - i)
        cols.append(polycore.mul(e, R))
    for i in range(1, dr + 1):
        e = (Fraction(1),) + (Fraction(0),) * (dr - i)
        cols.append(polycore.mul(e, Q))
    mat = [[Fraction(0)] * n for _ in range(n)]
    for c, col in enumerate(cols):
        for k, v in enumerate(col):
            mat[n - len(col) + k][c] = v
    return mat


def dumps(obj) -> str:
    return json.dumps(obj.to_json() if hasattr(obj, "to_json") else obj)


def theorem_check(point: StratumPoint, fd_step: float = 1e-3) -> dict:
    """Rank, transversality margin and cofactor-vs-difference agreement at a point.

    ``fd_rel_error`` is max |eq - fd| / max(1, |eq|) over all (k, u); it is 0
    when the stratum is open (r = 0).
    """
    config = point.config
    rank_sigma = scaled_sigma_min(power_sum_jacobian(config, point.n))
    frame = tangent_frame(point)
    out = {"mv": list(point.stratum.parts), "n": point.n,
           "rank_sigma_min": rank_sigma, "margin": frame.margin, "fd_rel_error": 0.0}
    if point.stratum.surplus and not config.coincident_pairs():
        eq = _eq1_matrix(config)
        fd = finite_difference_partials(config, fd_step)
        out["fd_rel_error"] = float(np.max(np.abs(eq - fd) / np.maximum(1.0, np.abs(eq))))
    return out


def complexify_path(config: RootConfiguration, i: int) -> Callable:
    """eps -> configuration with the double root i (1-based) opened into y_i +- i eps."""
    y, m = config.real_roots[i - 1]
    if m != 2:
        raise ValueError(f"root {i} has multiplicity {m}, expected 2")
    rest = config.real_roots[:i - 1] + config.real_roots[i:]

    def path(eps):
        return RootConfiguration(tuple((float(a), k) for a, k in rest),
                                 tuple((float(a), float(b)) for a, b in config.complex_pairs) + ((float(y), eps),))

    return path


def split_path(config: RootConfiguration, i: int, j: int) -> Callable:
    """eps -> configuration with root i split into multiplicities (j, m - j) at y_i -+ eps/2."""
    y, m = config.real_roots[i - 1]
    if not 1 <= j < m:
        raise ValueError(f"cannot split multiplicity {m} as ({j}, {m - j})")

    def path(eps):
        reals = [(float(a), k) for a, k in config.real_roots]
        reals[i - 1:i] = [(float(y) - eps / 2, j), (float(y) + eps / 2, m - j)]
        return RootConfiguration(tuple(reals), tuple((float(a), float(b)) for a, b in config.complex_pairs))

    return path


def graph_targets(config: RootConfiguration) -> list:
    """All (k, u) pairs of the graph gradient of the stratum through `config`."""
    s, n = config.dimension, config.degree
    return [(k, u) for k in range(s + 1, n + 1) for u in range(1, s + 1)]
