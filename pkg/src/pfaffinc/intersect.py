"""Pairwise curve intersection, vertical tangents, and intersection ceilings.

Curves are handled as collections of x-monotone graph branches.  Candidate
crossings come from trace-resolution grids; every candidate is refined
against the exact parameterizations, so reported points carry closed-form
accuracy rather than polyline accuracy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .errors import SharedComponent

_TOUCH_SCAN = 1e-3  # coarse |gap| threshold that triggers tangency refinement


def pfaffian_bezout_bound(k1, k2):
    """Intersection ceiling for curves of field degrees k1 and k2."""
    if k1 < 0 or k2 < 0:
        raise ValueError("degrees must be nonnegative")
    return (k1 + k2) * (2 * k1 + k2) + k1 + 1


def check_bezout(c1, c2, found):
    """True iff the found intersections respect the degree ceiling."""
    return len(found) <= pfaffian_bezout_bound(c1.pf_degree, c2.pf_degree)


# -- vertical tangents -------------------------------------------------------


def _vx_along(curve, t):
    x, y = curve.point_at(t)
    return float(curve.field.vx(x, y))


def vertical_tangent_ts(curve, trace):
    """Parameters where the x-component of the field changes sign."""
    out = []
    for comp in trace.components:
        vx = curve.field.vx(comp.xs, comp.ys) + np.zeros_like(comp.xs)
        sign = np.sign(vx)
        for i in np.nonzero(sign[:-1] * sign[1:] < 0)[0]:
            out.append(brentq(lambda t: _vx_along(curve, t),
                              comp.ts[i], comp.ts[i + 1], xtol=1e-14))
        for i in np.nonzero(sign == 0)[0]:
            out.append(float(comp.ts[i]))
    # closed parameterizations: check the wrap-around gap too
    if curve.period is not None and trace.components:
        first, last = trace.components[0], trace.components[-1]
        px, py = last.xs[-1], last.ys[-1]
        qx, qy = first.xs[0], first.ys[0]
        gap = math.hypot(px - qx, py - qy)
        if gap < 64 * trace.step * (1 + curve.period):
            a = float(last.ts[-1])
            b = float(first.ts[0]) + curve.period
            va, vb = _vx_along(curve, a), _vx_along(curve, b)
            if va * vb < 0:
                t = brentq(lambda u: _vx_along(curve, u), a, b, xtol=1e-14)
                out.append(t % curve.period)
    return sorted(out)


def vertical_tangent_points(curve, trace):
    """Points of the trace where the directional vector is vertical."""
    pts = []
    for t in vertical_tangent_ts(curve, trace):
        x, y = curve.point_at(t)
        pts.append((float(x), float(y)))
    return _dedup(pts, 1e-8)


# -- monotone branches -------------------------------------------------------


@dataclass
class GraphBranch:
    """One x-monotone piece of a trace, with exact evaluation."""

    curve: object
    ts: np.ndarray  # aligned with xs, ys; xs strictly ascending
    xs: np.ndarray
    ys: np.ndarray

    @property
    def x_lo(self):
        return float(self.xs[0])

    @property
    def x_hi(self):
        return float(self.xs[-1])

    def covers(self, x, margin=0.0):
        return self.x_lo + margin <= x <= self.x_hi - margin

    def y_interp(self, x):
        return np.interp(x, self.xs, self.ys)

    def t_interp(self, x):
        return np.interp(x, self.xs, self.ts)

    def y_at(self, x):
        """Exact y by inverting the parameterization at this x."""
        curve = self.curve
        t = curve.param_from_x(x)
        if t is not None:
            return float(curve.point_at(t)[1])
        if curve.kind == "circle" and curve.transform is None:
            cx, cy, r = curve.params
            u = min(1.0, max(-1.0, (x - cx) / r))
            t0 = math.acos(u)
            mid = float(self.ts[len(self.ts) // 2]) % (2 * math.pi)
            t = t0 if mid <= math.pi else 2 * math.pi - t0
            return float(curve.point_at(t)[1])
        # generic: bisection on the monotone x(t)
        a, b = float(self.ts[0]), float(self.ts[-1])
        xa = float(curve.point_at(a)[0])
        xb = float(curve.point_at(b)[0])
        inc = xa < xb
        for _ in range(80):
            m = 0.5 * (a + b)
            xm = float(curve.point_at(m)[0])
            if (xm < x) == inc:
                a = m
            else:
                b = m
        return float(curve.point_at(0.5 * (a + b))[1])


def monotone_branches(curve, trace):
    """Split trace components into x-monotone branches at vertical tangents."""
    vts = vertical_tangent_ts(curve, trace)
    branches = []
    for comp in trace.components:
        cuts = [t for t in vts if comp.ts[0] < t < comp.ts[-1]]
        bounds = [float(comp.ts[0])] + cuts + [float(comp.ts[-1])]
        for a, b in zip(bounds[:-1], bounds[1:]):
            if b - a <= 0:
                continue
            sel = (comp.ts > a) & (comp.ts < b)
            ts = np.concatenate([[a], comp.ts[sel], [b]])
            xs, ys = curve.point_at(ts)
            xs = np.asarray(xs, float) + np.zeros_like(ts)
            ys = np.asarray(ys, float) + np.zeros_like(ts)
            if xs[0] > xs[-1]:
                ts, xs, ys = ts[::-1], xs[::-1], ys[::-1]
            # enforce strictly ascending x (drops jitter at the turning point)
            run_max = np.maximum.accumulate(xs)
            keep = np.concatenate([[True], np.diff(run_max) > 0])
            ts, xs, ys = ts[keep], xs[keep], ys[keep]
            if len(xs) >= 2:
                branches.append(GraphBranch(curve, ts, xs, ys))
    return branches


# -- intersections ------------------------------------------------------------


def _dedup(points, radius):
    merged = []
    for p in sorted(points):
        if any((p[0] - q[0]) ** 2 + (p[1] - q[1]) ** 2 <= radius * radius for q in merged):
            continue
        merged.append(p)
    return merged


def intersect_curves(c1, c2, trace1, trace2, tol=1e-9):
    """Deduplicated intersection points of two distinct curves.

    Crossing candidates come from sign changes of the branch gap on a
    trace-resolution grid; tangential contacts from local minima of the gap.
    Each candidate is refined on the exact parameterizations to |gap| <= tol.
    """
    if c1 is c2:
        raise ValueError("curves must be distinct objects")
    b1s = monotone_branches(c1, trace1)
    b2s = monotone_branches(c2, trace2)
    return branch_intersections(c1, b1s, c2, b2s, tol)


def branch_intersections(c1, b1s, c2, b2s, tol=1e-9):
    """intersect_curves on precomputed monotone branches."""
    points = []
    overlap_votes = 0
    for b1 in b1s:
        for b2 in b2s:
            lo = max(b1.x_lo, b2.x_lo)
            hi = min(b1.x_hi, b2.x_hi)
            if hi - lo <= 1e-12:
                continue
            grid = np.unique(np.concatenate([
                b1.xs[(b1.xs >= lo) & (b1.xs <= hi)],
                b2.xs[(b2.xs >= lo) & (b2.xs <= hi)],
                [lo, hi],
            ]))
            if len(grid) > 4096:
                grid = grid[:: len(grid) // 2048]
            h = b1.y_interp(grid) - b2.y_interp(grid)
            if np.mean(np.abs(h) <= 10 * tol) > 0.5 and len(grid) > 8:
                overlap_votes += 1

            def gap(x):
                return b1.y_at(x) - b2.y_at(x)

            sign = np.sign(h)
            for i in np.nonzero(sign[:-1] * sign[1:] < 0)[0]:
                a, b = float(grid[i]), float(grid[i + 1])
                ga, gb = gap(a), gap(b)
                if ga == 0.0:
                    points.append((a, b1.y_at(a)))
                    continue
                if ga * gb > 0:
                    continue  # interpolation artifact
                x = brentq(gap, a, b, xtol=1e-14)
                points.append((float(x), float(b1.y_at(x))))
            for i in np.nonzero(sign == 0)[0]:
                x = float(grid[i])
                points.append((x, float(b1.y_at(x))))
            absh = np.abs(h)
            for i in range(1, len(grid) - 1):
                if absh[i] <= _TOUCH_SCAN and absh[i] <= absh[i - 1] and absh[i] <= absh[i + 1]:
                    if sign[i - 1] * sign[i] < 0 or sign[i] * sign[i + 1] < 0:
                        continue  # already found as a crossing
                    res = minimize_scalar(lambda x: abs(gap(x)),
                                          bounds=(float(grid[i - 1]), float(grid[i + 1])),
                                          method="bounded",
                                          options={"xatol": 1e-13})
                    if res.fun <= tol:
                        x = float(res.x)
                        points.append((x, float(b1.y_at(x))))
    points = _dedup(points, 10 * tol)
    bound = pfaffian_bezout_bound(c1.pf_degree, c2.pf_degree)
    if overlap_votes and len(points) > bound:
        raise SharedComponent(
            f"{len(points)} surviving crossings with interval overlap "
            f"(ceiling {bound}); curves appear to share a component")
    return points
