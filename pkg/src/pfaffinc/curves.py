"""Catalog-backed plane curves driven by polynomial vector fields.

Every curve carries a closed-form parameterization (the exact tracer) plus
the polynomial vector field that its directional vectors satisfy.  The field
is used for verification and for vertical-tangent detection, never as an ODE
integrator, so traces carry no drift.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field, replace

import numpy as np

from .errors import EmptyTrace, NotComposable, SingularMatrix
from .poly import BivariatePolynomial, poly1_der, poly1_eval

TWO_PI = 2.0 * math.pi
_INSET = 1e-9  # open-endpoint inset in parameter space
_TINY_X = 1e-9

GRAPH_KINDS = {
    "line", "parabola", "exp", "log", "tan", "arctan",
    "reciprocal", "exp-of-poly", "reciprocal-root", "composed",
}
# kinds whose derivative is a polynomial in the function value itself
COMPOSABLE_KINDS = {"exp", "tan", "reciprocal"}


@dataclass(frozen=True)
class PolyVectorField:
    vx: BivariatePolynomial
    vy: BivariatePolynomial

    @property
    def degree(self):
        return max(self.vx.degree, self.vy.degree)

    def __call__(self, x, y):
        return self.vx(x, y), self.vy(x, y)


def eval_vector_field(field, p):
    """Evaluate the field at a point (or arrays of points)."""
    x, y = p
    return field.vx(x, y), field.vy(x, y)


@dataclass(frozen=True)
class PfaffianCurve:
    kind: str
    params: tuple
    field: PolyVectorField
    domain: tuple  # open parameter interval, may be +-inf
    pf_degree: int
    transform: tuple | None = None  # row-major (a1, a2, a3, a4), None = identity
    label: str = ""

    # -- parameterization ------------------------------------------------

    def base_point(self, t):
        t = np.asarray(t, dtype=float)
        k, p = self.kind, self.params
        if k == "line":
            a, b = p
            return t, a * t + b
        if k == "circle":
            cx, cy, r = p
            return cx + r * np.cos(t), cy + r * np.sin(t)
        if k == "parabola":
            a, b, c = p
            return t, (a * t + b) * t + c
        if k == "exp":
            a, b = p
            return t, a * np.exp(b * t)
        if k == "log":
            s, c = p
            return np.exp(t), s * t + c
        if k == "tan":
            return t, np.tan(t)
        if k == "arctan":
            return np.tan(t), t
        if k == "reciprocal":
            a, _branch = p
            return t, a / t
        if k == "exp-of-poly":
            coeffs, scale = p
            return t, scale * np.exp(poly1_eval(coeffs, t))
        if k == "reciprocal-root":
            (kk,) = p
            return np.exp(t), np.exp(-t / kk)
        if k == "composed":
            base_kind, base_params, coeffs = p
            u = poly1_eval(coeffs, t)
            return t, _graph_value(base_kind, base_params, u)
        raise ValueError(f"unknown curve kind {k!r}")

    def point_at(self, t):
        x, y = self.base_point(t)
        if self.transform is None:
            return x, y
        a1, a2, a3, a4 = self.transform
        return a1 * x + a2 * y, a3 * x + a4 * y

    def field_at(self, x, y):
        return self.field.vx(x, y), self.field.vy(x, y)

    @property
    def period(self):
        """Parameter period for closed parameterizations, else None."""
        return TWO_PI if self.kind == "circle" else None

    def param_from_x(self, x):
        """Inverse of the x-coordinate map for untransformed graph kinds."""
        if self.transform is not None or self.kind not in GRAPH_KINDS:
            return None
        k = self.kind
        if k in ("log", "reciprocal-root"):
            return math.log(x)
        if k == "arctan":
            return math.atan(x)
        return float(x)

    # -- windows and tracing ----------------------------------------------

    def t_window(self, viewport):
        """A finite parameter interval covering the viewport portion."""
        x0, x1, y0, y1 = viewport
        if self.transform is not None:
            x0, x1, y0, y1 = _preimage_bbox(self.transform, viewport)
        k = self.kind
        if k == "circle":
            lo, hi = 0.0, TWO_PI
        elif k == "arctan":
            lo, hi = math.atan(x0), math.atan(x1)
        elif k == "log":
            if x1 <= _TINY_X:
                raise EmptyTrace("log curve lies in x > 0")
            lo, hi = math.log(max(x0, _TINY_X)), math.log(x1)
            s, c = self.params
            if s:
                ta, tb = (y0 - c) / s, (y1 - c) / s
                lo, hi = max(lo, min(ta, tb)), min(hi, max(ta, tb))
        elif k == "reciprocal-root":
            if x1 <= _TINY_X:
                raise EmptyTrace("reciprocal-root curve lies in x > 0")
            lo, hi = math.log(max(x0, _TINY_X)), math.log(x1)
            (kk,) = self.params
            if y1 > 0:
                lo = max(lo, -kk * math.log(y1))
            if y0 > 0:
                hi = min(hi, -kk * math.log(y0))
        elif k == "reciprocal":
            _a, branch = self.params
            if branch > 0:
                if x1 <= _TINY_X:
                    raise EmptyTrace("positive branch lies in x > 0")
                lo, hi = max(x0, _TINY_X), x1
            else:
                if x0 >= -_TINY_X:
                    raise EmptyTrace("negative branch lies in x < 0")
                lo, hi = x0, min(x1, -_TINY_X)
        else:
            lo, hi = x0, x1
        lo = max(lo, self.domain[0])
        hi = min(hi, self.domain[1])
        if not (hi - lo > 2 * _INSET):
            raise EmptyTrace(f"{k} curve has empty parameter window in viewport")
        return lo + _INSET, hi - _INSET


@dataclass
class TraceComponent:
    ts: np.ndarray
    xs: np.ndarray
    ys: np.ndarray

    def __len__(self):
        return len(self.ts)


@dataclass
class CurveTrace:
    components: list
    step: float
    bbox: tuple

    def samples(self):
        """All (t, x, y) samples concatenated across components."""
        ts = np.concatenate([c.ts for c in self.components])
        xs = np.concatenate([c.xs for c in self.components])
        ys = np.concatenate([c.ys for c in self.components])
        return ts, xs, ys

    @property
    def n_samples(self):
        return sum(len(c) for c in self.components)


def trace_curve(curve, viewport, step=None, samples=1024):
    """Sample the closed-form parameterization, clipped to the viewport.

    Components split wherever the curve leaves the viewport or the domain
    ends.  Raises EmptyTrace when nothing is visible.
    """
    lo, hi = curve.t_window(viewport)
    if step is None:
        step = (hi - lo) / samples
    if step <= 0:
        raise ValueError("step must be positive")
    n = int(math.ceil((hi - lo) / step)) + 1
    if n > 4_000_000:
        raise ValueError("step too small for the parameter window")
    ts = lo + step * np.arange(n)
    ts = ts[ts <= hi]
    if len(ts) == 0 or ts[-1] < hi - 1e-15:
        ts = np.append(ts, hi)
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        xs, ys = curve.point_at(ts)
        xs = np.asarray(xs, dtype=float) + np.zeros_like(ts)
        ys = np.asarray(ys, dtype=float) + np.zeros_like(ts)
    x0, x1, y0, y1 = viewport
    inside = (
        np.isfinite(xs) & np.isfinite(ys)
        & (xs >= x0) & (xs <= x1) & (ys >= y0) & (ys <= y1)
    )
    components = []
    start = None
    for i, ok in enumerate(inside):
        if ok and start is None:
            start = i
        elif not ok and start is not None:
            if i - start >= 2:
                components.append(TraceComponent(ts[start:i], xs[start:i], ys[start:i]))
            start = None
    if start is not None and len(ts) - start >= 2:
        components.append(TraceComponent(ts[start:], xs[start:], ys[start:]))
    if not components:
        raise EmptyTrace(f"{curve.kind} curve misses viewport {viewport}")
    return CurveTrace(components, step, tuple(viewport))


# -- catalog factories ----------------------------------------------------


def _fld(vx_terms, vy_terms):
    return PolyVectorField(BivariatePolynomial(vx_terms), BivariatePolynomial(vy_terms))


def _finish(kind, params, field, domain, transform=None, label=""):
    if transform is not None:
        field = transform_field(field, transform)
    if field.vx.is_zero() and field.vy.is_zero():
        raise ValueError("vector field must be nonzero")
    return PfaffianCurve(kind, params, field, domain, field.degree, transform, label)


def line(a, b, label=""):
    """The line y = a*x + b."""
    return _finish("line", (float(a), float(b)),
                   _fld({(0, 0): 1.0}, {(0, 0): float(a)} if a else None),
                   (-math.inf, math.inf), label=label)


def circle(cx, cy, r, label=""):
    """Circle of radius r about (cx, cy); the parameter endpoint is excluded."""
    if r <= 0:
        raise ValueError("radius must be positive")
    vx = BivariatePolynomial({(0, 0): cy, (0, 1): -1.0})
    vy = BivariatePolynomial({(1, 0): 1.0, (0, 0): -cx})
    return _finish("circle", (float(cx), float(cy), float(r)),
                   PolyVectorField(vx, vy), (0.0, TWO_PI), label=label)


def parabola(a, b, c, label=""):
    """The graph y = a*x^2 + b*x + c."""
    if a == 0:
        raise ValueError("use line() for a degenerate parabola")
    return _finish("parabola", (float(a), float(b), float(c)),
                   _fld({(0, 0): 1.0}, {(1, 0): 2.0 * a, (0, 0): b}),
                   (-math.inf, math.inf), label=label)


def exp_curve(a=1.0, b=1.0, label=""):
    """The graph y = a*exp(b*x)."""
    if a == 0 or b == 0:
        raise ValueError("degenerate exponential")
    return _finish("exp", (float(a), float(b)),
                   _fld({(0, 0): 1.0}, {(0, 1): float(b)}),
                   (-math.inf, math.inf), label=label)


def log_curve(s=1.0, c=0.0, label=""):
    """The graph y = s*ln(x) + c for x > 0."""
    return _finish("log", (float(s), float(c)),
                   _fld({(1, 0): 1.0}, {(0, 0): float(s)} if s else None),
                   (-math.inf, math.inf), label=label)


def tan_curve(branch=0, label=""):
    """One period of y = tan(x), centered at branch*pi."""
    mid = branch * math.pi
    return _finish("tan", (int(branch),),
                   _fld({(0, 0): 1.0}, {(0, 0): 1.0, (0, 2): 1.0}),
                   (mid - math.pi / 2, mid + math.pi / 2), label=label)


def arctan_curve(label=""):
    """The graph y = arctan(x)."""
    return _finish("arctan", (),
                   _fld({(0, 0): 1.0, (2, 0): 1.0}, {(0, 0): 1.0}),
                   (-math.pi / 2, math.pi / 2), label=label)


def reciprocal_curve(a=1.0, branch=1, label=""):
    """One branch of y = a/x; branch > 0 means x > 0."""
    if a == 0:
        raise ValueError("degenerate hyperbola")
    dom = (0.0, math.inf) if branch > 0 else (-math.inf, 0.0)
    return _finish("reciprocal", (float(a), 1 if branch > 0 else -1),
                   _fld({(0, 0): 1.0}, {(0, 2): -1.0 / a}), dom, label=label)


def exp_of_poly(coeffs, scale=1.0, label=""):
    """The graph y = scale*exp(p(x)) for ascending coefficients of p."""
    coeffs = tuple(float(c) for c in coeffs)
    if scale == 0:
        raise ValueError("degenerate exponential")
    dp = poly1_der(coeffs)
    vy = BivariatePolynomial({(k, 1): c for k, c in enumerate(dp)})
    return _finish("exp-of-poly", (coeffs, float(scale)),
                   PolyVectorField(BivariatePolynomial.const(1.0), vy),
                   (-math.inf, math.inf), label=label)


def reciprocal_root(k, label=""):
    """The graph y = x^(-1/k) for x > 0, parameterized as (e^t, e^(-t/k))."""
    k = int(k)
    if k < 1:
        raise ValueError("root order must be a positive integer")
    return _finish("reciprocal-root", (k,),
                   _fld({(1, 0): 1.0}, {(0, 1): -1.0 / k}),
                   (-math.inf, math.inf), label=label)


_FACTORIES = {
    "line": line,
    "circle": circle,
    "parabola": parabola,
    "exp": exp_curve,
    "log": log_curve,
    "tan": tan_curve,
    "arctan": arctan_curve,
    "reciprocal": reciprocal_curve,
    "exp-of-poly": exp_of_poly,
    "reciprocal-root": reciprocal_root,
}


def _graph_value(base_kind, base_params, u):
    """Value of the base graph function at argument u."""
    if base_kind == "exp":
        a, b = base_params
        return a * np.exp(b * u)
    if base_kind == "tan":
        return np.tan(u)
    if base_kind == "reciprocal":
        a, _branch = base_params
        return a / u
    raise ValueError(f"no graph evaluator for {base_kind!r}")


def _derivative_in_value(base_kind, base_params):
    """q with d(f)/dt = q(f), as a polynomial in y."""
    if base_kind == "exp":
        _a, b = base_params
        return BivariatePolynomial({(0, 1): b})
    if base_kind == "tan":
        return BivariatePolynomial({(0, 0): 1.0, (0, 2): 1.0})
    if base_kind == "reciprocal":
        a, _branch = base_params
        return BivariatePolynomial({(0, 2): -1.0 / a})
    raise ValueError(base_kind)


def compose_with_polynomial(curve, coeffs, label=""):
    """Replace the graph y = f(x) by y = f(p(x)).

    Requires an untransformed catalog graph whose derivative closes over its
    own values; the chain rule then keeps the vector field polynomial.
    """
    coeffs = tuple(float(c) for c in coeffs)
    if curve.transform is not None:
        raise NotComposable("transformed curves are not graphs y = f(x)")
    if curve.kind == "exp":
        a, b = curve.params
        scaled = tuple(b * c for c in coeffs)
        return exp_of_poly(scaled, scale=a, label=label or curve.label)
    if curve.kind not in COMPOSABLE_KINDS:
        raise NotComposable(f"{curve.kind} has no polynomial derivative in its value")
    q = _derivative_in_value(curve.kind, curve.params)
    dp = poly1_der(coeffs)
    vy = q * BivariatePolynomial({(k, 0): c for k, c in enumerate(dp)})
    field = PolyVectorField(BivariatePolynomial.const(1.0), vy)
    domain = _composed_domain(curve, coeffs)
    params = (curve.kind, curve.params, coeffs)
    return PfaffianCurve("composed", params, field, domain, field.degree,
                         None, label or curve.label)


def _composed_domain(curve, coeffs):
    """Widest open t-interval with p(t) inside the base domain."""
    lo, hi = curve.domain
    breaks = []
    cpoly = np.polynomial.polynomial.Polynomial(coeffs)
    for bound in (lo, hi):
        if math.isfinite(bound):
            shifted = cpoly - bound
            if shifted.degree() >= 1:
                roots = shifted.roots()
                breaks.extend(r.real for r in roots if abs(r.imag) < 1e-9)
    cuts = sorted(set([-1e6, 1e6] + breaks))
    best = None
    best_width = 0.0
    for a, b in zip(cuts[:-1], cuts[1:]):
        if b - a < 1e-9:
            continue
        mid = 0.5 * (a + b)
        val = poly1_eval(coeffs, mid)
        if lo < val < hi:
            left = a if a > -1e6 else -math.inf
            right = b if b < 1e6 else math.inf
            if best is None or (b - a) > best_width:
                best = (left, right)
                best_width = b - a
    if best is None:
        raise NotComposable("composition image misses the base domain")
    return best


# -- linear transforms ----------------------------------------------------


def _mat_mul(m, n):
    a1, a2, a3, a4 = m
    b1, b2, b3, b4 = n
    return (a1 * b1 + a2 * b3, a1 * b2 + a2 * b4,
            a3 * b1 + a4 * b3, a3 * b2 + a4 * b4)


def _mat_inv(m):
    a1, a2, a3, a4 = m
    det = a1 * a4 - a2 * a3
    return (a4 / det, -a2 / det, -a3 / det, a1 / det)


def transform_field(base_field, matrix):
    """Field of the image curve: V'(q) = A * V(A^-1 * q)."""
    i1, i2, i3, i4 = _mat_inv(matrix)
    vx = base_field.vx.substitute_linear(i1, i2, i3, i4)
    vy = base_field.vy.substitute_linear(i1, i2, i3, i4)
    a1, a2, a3, a4 = matrix
    return PolyVectorField(vx * a1 + vy * a2, vx * a3 + vy * a4)


def apply_linear_transform(curve, a1, a2, a3, a4):
    """Image of the curve under an invertible linear map."""
    det = a1 * a4 - a2 * a3
    if abs(det) <= 1e-12:
        raise SingularMatrix(f"determinant {det} is below tolerance")
    m = (float(a1), float(a2), float(a3), float(a4))
    total = m if curve.transform is None else _mat_mul(m, curve.transform)
    base = _base_field(curve)
    new_field = transform_field(base, total)
    return replace(curve, transform=total, field=new_field,
                   pf_degree=new_field.degree)


def rotation_matrix(theta):
    c, s = math.cos(theta), math.sin(theta)
    return (c, -s, s, c)


def _base_field(curve):
    if curve.transform is None:
        return curve.field
    # undo the stored transform to recover the catalog field
    inv = _mat_inv(curve.transform)
    return transform_field(curve.field, inv)


def _preimage_bbox(matrix, viewport):
    i1, i2, i3, i4 = _mat_inv(matrix)
    x0, x1, y0, y1 = viewport
    xs, ys = [], []
    for cx, cy in ((x0, y0), (x0, y1), (x1, y0), (x1, y1)):
        xs.append(i1 * cx + i2 * cy)
        ys.append(i3 * cx + i4 * cy)
    return min(xs), max(xs), min(ys), max(ys)


# -- verification ---------------------------------------------------------


def max_tangent_error(curve, ts, h=1e-6):
    """Worst relative gap between numeric tangents and the vector field."""
    ts = np.asarray(ts, dtype=float)
    xp, yp = curve.point_at(ts + h)
    xm, ym = curve.point_at(ts - h)
    tx, ty = (xp - xm) / (2 * h), (yp - ym) / (2 * h)
    x, y = curve.point_at(ts)
    vx, vy = curve.field_at(x, y)
    vx = vx + np.zeros_like(ts)
    vy = vy + np.zeros_like(ts)
    norm = np.maximum(np.hypot(vx, vy), 1.0)
    err = np.hypot(tx - vx, ty - vy) / norm
    return float(np.max(err))


@dataclass
class SeparatingReport:
    directional_match: bool
    max_direction_error: float
    nonvanishing: bool
    min_field_norm: float
    side_consistent: bool
    notes: list = dc_field(default_factory=list)


def check_separating_conditions(curve, trace, tol=1e-5, h=1e-6, offset_frac=0.02):
    """Sampled report on the separating-solution conditions.

    The first two conditions are checked pointwise.  The side-consistency
    condition is global and topological; it is probed with offset samples
    and reported, never asserted.
    """
    notes = []
    max_err = 0.0
    min_norm = math.inf
    all_t, all_x, all_y = trace.samples()
    for comp in trace.components:
        interior = comp.ts[1:-1]
        if len(interior) == 0:
            continue
        max_err = max(max_err, max_tangent_error(curve, interior, h))
        vx, vy = curve.field_at(comp.xs, comp.ys)
        norms = np.hypot(vx + np.zeros_like(comp.xs), vy + np.zeros_like(comp.xs))
        min_norm = min(min_norm, float(np.min(norms)))
    directional = max_err <= tol
    nonvanishing = min_norm > 1e-12

    x0, x1, y0, y1 = trace.bbox
    delta = offset_frac * min(x1 - x0, y1 - y0)
    sides = []
    clearance_ok = True
    for comp in trace.components:
        idx = np.linspace(1, len(comp) - 2, num=min(32, max(len(comp) - 2, 1)), dtype=int)
        for i in np.unique(idx):
            px, py = comp.xs[i], comp.ys[i]
            vx, vy = curve.field_at(px, py)
            norm = math.hypot(vx, vy)
            if norm < 1e-12:
                continue
            ox, oy = px - delta * vy / norm, py + delta * vx / norm  # left offset
            d2 = (all_x - ox) ** 2 + (all_y - oy) ** 2
            j = int(np.argmin(d2))
            if math.sqrt(d2[j]) < delta / 2:
                clearance_ok = False
                continue
            qx, qy = all_x[j], all_y[j]
            wx, wy = curve.field_at(qx, qy)
            cross = wx * (oy - qy) - wy * (ox - qx)
            if abs(cross) > 1e-12:
                sides.append(1 if cross > 0 else -1)
    side_ok = clearance_ok and len(set(sides)) <= 1
    if not clearance_ok:
        notes.append("offset probes fell back onto the trace; side check inconclusive")
    notes.append("side consistency is a sampled heuristic, not a certificate")
    return SeparatingReport(directional, max_err, nonvanishing, min_norm, side_ok, notes)
