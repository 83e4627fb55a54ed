"""Incidence counting, forbidden-subgraph checks, and bound evaluators.

Brute-force counting is the ground truth: every point-curve pair is tested
against the trace, and near hits are re-refined on the exact
parameterization.  The cutting-decomposed count classifies the same pairs
through the cell structure and must reproduce the total exactly.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .cutting import locate_point
from .errors import ComplexityGuard, InconsistentScene

FEW_POINTS = "few-points"
MANY_POINTS = "n<sqrt(m)"

_GUARD = 10**8


@dataclass
class IncidenceGraph:
    edges: set  # {(point id, curve id)}
    m: int
    n: int

    def point_adj(self):
        adj = {i: set() for i in range(self.m)}
        for p, c in self.edges:
            adj[p].add(c)
        return adj

    def curve_adj(self):
        adj = {i: set() for i in range(self.n)}
        for p, c in self.edges:
            adj[c].add(p)
        return adj

    def transpose(self):
        return IncidenceGraph({(c, p) for p, c in self.edges}, self.n, self.m)

    def count(self):
        return len(self.edges)


def _refine_distance(curve, comp, iv, px, py):
    lo = float(comp.ts[max(0, iv - 2)])
    hi = float(comp.ts[min(len(comp.ts) - 1, iv + 2)])
    if hi <= lo:
        x, y = curve.point_at(lo)
        return math.hypot(x - px, y - py)

    def d2(t):
        x, y = curve.point_at(t)
        return (x - px) ** 2 + (y - py) ** 2

    res = minimize_scalar(d2, bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-13})
    best = math.sqrt(max(res.fun, 0.0))
    # Brent on a squared distance stalls at sqrt(eps) in t; polish with
    # Newton on the tangency condition, using the field as the derivative
    t = float(res.x)
    for _ in range(30):
        x, y = curve.point_at(t)
        vx, vy = curve.field_at(x, y)
        denom = vx * vx + vy * vy
        if denom == 0.0:
            break
        step = ((x - px) * vx + (y - py) * vy) / denom
        t_new = min(max(t - step, lo), hi)
        if abs(t_new - t) <= 1e-15 * (1.0 + abs(t)):
            t = t_new
            break
        t = t_new
    x, y = curve.point_at(t)
    return min(best, math.hypot(x - px, y - py))


def point_curve_distance(curve, trace, p, tol=1e-7):
    """Distance from p to the curve, refined on the parameterization."""
    px, py = float(p[0]), float(p[1])
    best = math.inf
    for comp in trace.components:
        d2 = (comp.xs - px) ** 2 + (comp.ys - py) ** 2
        iv = int(np.argmin(d2))
        coarse = math.sqrt(d2[iv])
        seg = float(np.hypot(np.diff(comp.xs), np.diff(comp.ys)).max()) if len(comp) > 1 else 0.0
        if coarse <= seg / 2 + max(100 * tol, 1e-6):
            best = min(best, _refine_distance(curve, comp, iv, px, py))
        else:
            best = min(best, coarse)
    return best


def count_incidences(points, curves, traces, tol=1e-7):
    """Bipartite incidence graph at the given tolerance."""
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    edges = set()
    for ci, (curve, trace) in enumerate(zip(curves, traces)):
        if len(pts) == 0:
            break
        for comp in trace.components:
            if len(comp) > 1:
                seg = float(np.hypot(np.diff(comp.xs), np.diff(comp.ys)).max())
            else:
                seg = 0.0
            radius = seg / 2 + max(100 * tol, 1e-6)
            bx0, bx1 = comp.xs.min() - radius, comp.xs.max() + radius
            by0, by1 = comp.ys.min() - radius, comp.ys.max() + radius
            box = np.nonzero((pts[:, 0] >= bx0) & (pts[:, 0] <= bx1)
                             & (pts[:, 1] >= by0) & (pts[:, 1] <= by1))[0]
            if len(box) == 0:
                continue
            d2 = ((pts[box, 0, None] - comp.xs) ** 2
                  + (pts[box, 1, None] - comp.ys) ** 2)
            iv = np.argmin(d2, axis=1)
            dv = np.sqrt(d2[np.arange(len(box)), iv])
            for k in np.nonzero(dv <= radius)[0]:
                pi = int(box[k])
                if (pi, ci) in edges:
                    continue
                dist = _refine_distance(curve, comp, int(iv[k]),
                                        pts[pi, 0], pts[pi, 1])
                if dist <= tol:
                    edges.add((pi, ci))
    return IncidenceGraph(edges, len(pts), len(curves))


def kst_free(graph, s, t):
    """True iff no s points and t curves are pairwise fully incident.

    Enumerates the cheaper side: s-subsets of points with common curve
    neighborhood >= t, or equivalently t-subsets of curves with common
    point neighborhood >= s.
    """
    if s < 1 or t < 1:
        raise ValueError("s and t must be positive")
    point_side = _combinations_bound(graph.m, s)
    curve_side = _combinations_bound(graph.n, t)
    if min(point_side, curve_side) > _GUARD:
        raise ComplexityGuard(f"C(m,s)={point_side}, C(n,t)={curve_side} both exceed {_GUARD}")
    if point_side <= curve_side:
        adj = graph.point_adj()
        return _no_complete_bipartite(adj, s, t)
    adj = graph.curve_adj()
    return _no_complete_bipartite(adj, t, s)


def _combinations_bound(n, k):
    if k > n:
        return 0
    return math.comb(n, k)


def _no_complete_bipartite(adj, pick, need):
    eligible = [v for v, nb in adj.items() if len(nb) >= need]
    if _combinations_bound(len(eligible), pick) > _GUARD:
        raise ComplexityGuard("subset enumeration over eligible vertices too large")
    for combo in itertools.combinations(eligible, pick):
        common = set(adj[combo[0]])
        for v in combo[1:]:
            common &= adj[v]
            if len(common) < need:
                break
        if len(common) >= need:
            return False
    return True


# -- decomposed counting -----------------------------------------------------


@dataclass
class IncidenceBreakdown:
    per_cell: list
    on_boundary_vs_nonsample: int
    on_boundary_vs_sample: int
    boundary_points: int
    crossing_repairs: int = 0

    @property
    def total(self):
        return sum(self.per_cell) + self.on_boundary_vs_nonsample + self.on_boundary_vs_sample


def count_via_cutting(points, curves, traces, cutting, tol=1e-7, graph=None):
    """Split the incidence count through a certified cutting.

    Points incident to sampled curves or lying on rays form the boundary
    class; every other point is located in a cell interior.  Each incidence
    is classified once, so the total matches the brute-force count exactly.
    """
    if cutting.n != len(curves):
        raise InconsistentScene(
            f"cutting built for {cutting.n} curves, scene has {len(curves)}")
    if graph is None:
        graph = count_incidences(points, curves, traces, tol)
    sample = set(cutting.sample)
    adj = graph.point_adj()
    pts = np.asarray(points, dtype=float).reshape(-1, 2)

    cell_of = {}
    boundary = set()
    for pi in range(len(pts)):
        if adj[pi] & sample:
            boundary.add(pi)
            continue
        loc = locate_point(cutting, pts[pi], tol)
        if loc.kind == "boundary":
            boundary.add(pi)
        else:
            cell_of[pi] = loc.cell

    per_cell = [0] * len(cutting.cells)
    b_sample = 0
    b_nonsample = 0
    repairs = 0
    for pi, ci in graph.edges:
        if pi in boundary:
            if ci in sample:
                b_sample += 1
            else:
                b_nonsample += 1
        else:
            cell = cell_of[pi]
            per_cell[cell] += 1
            if cutting._crossings is not None and ci not in cutting._crossings[cell]:
                cutting._crossings[cell].add(ci)
                repairs += 1
    return IncidenceBreakdown(per_cell, b_nonsample, b_sample,
                              len(boundary), repairs)


# -- bound evaluators ---------------------------------------------------------


def bound_kst(m, n, s, C=1.0):
    """C * (m * n^(1 - 1/s) + n)."""
    if m < 0 or n < 0 or s < 2:
        raise ValueError("require m, n >= 0 and s >= 2")
    return C * (m * n ** (1.0 - 1.0 / s) + n)


def bound_kst_dual(m, n, t, C=1.0):
    """C * (m^(1 - 1/t) * n + m)."""
    if m < 0 or n < 0 or t < 2:
        raise ValueError("require m, n >= 0 and t >= 2")
    return C * (m ** (1.0 - 1.0 / t) * n + m)


def bound_pach_sharir(m, n, s, C=1.0):
    """C * (m^(s/(2s-1)) * n^((2s-2)/(2s-1)) + n + m)."""
    if s < 2:
        raise ValueError("require s >= 2")
    e1 = s / (2.0 * s - 1.0)
    e2 = (2.0 * s - 2.0) / (2.0 * s - 1.0)
    return C * (m ** e1 * n ** e2 + n + m)


def bound_pfaffian_curves(m, n, s, C=1.0):
    """Three-term ceiling with natural-log factors; needs n >= 2."""
    if n < 2:
        raise ValueError("require n >= 2 so that log n is positive")
    if s < 2:
        raise ValueError("require s >= 2")
    e1 = s / (2.0 * s - 1.0)
    e2 = (2.0 * s - 2.0) / (2.0 * s - 1.0)
    ln = math.log(n)
    return C * (m ** e1 * n ** e2 * ln ** e2 + n * ln ** 2 + m)


def bound_pfaffian_family(m, n, d, eps=0.0, C=1.0):
    """C * (n^((2d-4)/(2d-3) + eps) * m^((d-1)/(2d-3)) + m + n)."""
    if d < 2:
        raise ValueError("require dimension d >= 2")
    e1 = (2.0 * d - 4.0) / (2.0 * d - 3.0) + eps
    e2 = (d - 1.0) / (2.0 * d - 3.0)
    return C * (n ** e1 * m ** e2 + m + n)


def bound_hyperplanes(m, n, d, s, eps=0.0, C=1.0):
    """C * (m^((sd-s)/(sd-1) + eps) * n^((sd-d)/(sd-1)) + m + n)."""
    if d < 2 or s < 2:
        raise ValueError("require d >= 2 and s >= 2")
    e1 = (s * d - s) / (s * d - 1.0) + eps
    e2 = (s * d - d) / (s * d - 1.0)
    return C * (m ** e1 * n ** e2 + m + n)


def optimal_r(m, n, s):
    """Cell-count parameter equalizing the two main terms, with clamp flags.

    Returns (r, regime) where regime is None inside [1, n-1], FEW_POINTS
    when the ideal value falls below 1, MANY_POINTS when it reaches n.
    """
    if n < 2:
        raise ValueError("require n >= 2")
    if s < 2:
        raise ValueError("require s >= 2")
    ln = math.log(n)
    r_star = m ** (s / (2.0 * s - 1.0)) / (n ** (1.0 / (2.0 * s - 1.0)) * ln ** (2.0 * s / (2.0 * s - 1.0)))
    if r_star < 1.0:
        return 1, FEW_POINTS
    if r_star >= n:
        return n - 1, MANY_POINTS
    return int(min(max(round(r_star), 1), n - 1)), None


def fit_constant(observations):
    """Smallest C with I <= C * base for every (I, base) pair."""
    best = 0.0
    for count, base in observations:
        if base <= 0:
            if count > 0:
                raise ValueError("positive count against a zero bound")
            continue
        best = max(best, count / base)
    return best
