"""Coefficient-space duality for curves drawn from a fixed term family.

A family is a list of term functions m_1..m_d on an open rectangle; a curve
is a unit coefficient vector a with zero set a.m(x,y) = 0.  The curve maps
to the point a in R^d, a plane point p maps to the hyperplane through the
origin with normal (m_1(p)..m_d(p)), and incidence survives both the map
and the central projection onto the slice z_1 = 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import ChainMismatch, DegenerateDual, DuplicateCurve, RotationFailed
from .incidence import IncidenceGraph
from .poly import poly1_eval


@dataclass(frozen=True)
class Term:
    kind: str  # monomial | exp-poly | log-x
    params: tuple

    def eval(self, x, y):
        if self.kind == "monomial":
            i, j = self.params
            out = np.ones_like(np.asarray(x, dtype=float))
            if i:
                out = out * np.power(x, i)
            if j:
                out = out * np.power(y, j)
            return out
        if self.kind == "exp-poly":
            (coeffs,) = self.params
            return np.exp(poly1_eval(coeffs, x))
        if self.kind == "log-x":
            return np.log(x)
        raise ValueError(f"unknown term kind {self.kind!r}")

    def to_dict(self):
        if self.kind == "monomial":
            return {"kind": "monomial", "i": self.params[0], "j": self.params[1]}
        if self.kind == "exp-poly":
            return {"kind": "exp-poly", "coeffs": list(self.params[0])}
        return {"kind": "log-x"}


def monomial(i, j):
    return Term("monomial", (int(i), int(j)))


def exp_term(coeffs):
    return Term("exp-poly", (tuple(float(c) for c in coeffs),))


def log_term():
    return Term("log-x", ())


def term_from_dict(d):
    if d["kind"] == "monomial":
        return monomial(d["i"], d["j"])
    if d["kind"] == "exp-poly":
        return exp_term(d["coeffs"])
    if d["kind"] == "log-x":
        return log_term()
    raise ValueError(f"unknown term kind {d['kind']!r}")


@dataclass
class PfaffianFamily:
    terms: list
    region: tuple  # (x0, x1, y0, y1)

    def __post_init__(self):
        if len(self.terms) < 2:
            raise ValueError("a family needs dimension d >= 2")
        if any(t.kind == "log-x" for t in self.terms) and self.region[0] <= 0:
            raise ValueError("log terms need a region with x > 0")

    @property
    def d(self):
        return len(self.terms)

    def eval_terms(self, x, y):
        """Stacked term values; shape (d,) for scalars, (d, ...) for arrays."""
        x = np.asarray(x, dtype=float)
        vals = [t.eval(x, y) + np.zeros_like(x) for t in self.terms]
        return np.stack(vals)

    def to_dict(self):
        return {"terms": [t.to_dict() for t in self.terms], "region": list(self.region)}

    @classmethod
    def from_dict(cls, data):
        return cls([term_from_dict(t) for t in data["terms"]], tuple(data["region"]))


def normalize_coeffs(coeffs):
    """Unit Euclidean norm with the first nonzero coordinate positive."""
    a = np.asarray(coeffs, dtype=float)
    norm = float(np.linalg.norm(a))
    if norm == 0.0:
        raise ValueError("coefficient vector must be nonzero")
    a = a / norm
    for v in a:
        if abs(v) > 1e-14:
            if v < 0:
                a = -a
            break
    return a


@dataclass
class FamilyCurve:
    coeffs: np.ndarray
    label: str = ""

    def __post_init__(self):
        self.coeffs = normalize_coeffs(self.coeffs)


def family_curve_set(coeff_list, tol=1e-12):
    """Build curves, rejecting proportional coefficient vectors."""
    out = []
    for k, coeffs in enumerate(coeff_list):
        c = FamilyCurve(np.asarray(coeffs, dtype=float), label=f"curve{k}")
        for prev in out:
            if np.linalg.norm(prev.coeffs - c.coeffs) <= tol:
                raise DuplicateCurve(
                    f"coefficients of {c.label} are proportional to {prev.label}")
        out.append(c)
    return out


@dataclass
class OriginHyperplane:
    normal: np.ndarray

    def unit(self):
        return self.normal / np.linalg.norm(self.normal)


def dual_point(curve):
    """The coefficient vector as a point; never the origin."""
    return np.array(curve.coeffs, dtype=float)


def dual_hyperplane(family, p):
    """Origin hyperplane with normal (m_1(p)..m_d(p))."""
    x, y = float(p[0]), float(p[1])
    x0, x1, y0, y1 = family.region
    if not (x0 < x < x1 and y0 < y < y1):
        raise ValueError(f"point {p} outside family region {family.region}")
    normal = family.eval_terms(x, y)
    if float(np.linalg.norm(normal)) < 1e-300:
        raise DegenerateDual(f"all terms vanish at {p}")
    return OriginHyperplane(normal)


# -- rotation and projection ---------------------------------------------------


def random_orthogonal(d, rng):
    g = rng.normal(size=(d, d))
    q, r = np.linalg.qr(g)
    return q * np.sign(np.diag(r))


def generic_rotation(points, normals, seed=0, threshold=1e-9, max_draws=100):
    """Seeded orthogonal rotation making all first coordinates nonzero.

    Preserves every inner product, hence every incidence, exactly up to
    floating-point roundoff.
    """
    points = np.asarray(points, dtype=float)
    normals = np.asarray(normals, dtype=float)
    d = points.shape[1]
    rng = np.random.default_rng(seed)
    for _ in range(max_draws):
        q = random_orthogonal(d, rng)
        rp = points @ q.T
        rn = normals @ q.T
        p_ok = np.all(np.abs(rp[:, 0]) > threshold * np.linalg.norm(rp, axis=1))
        n_ok = np.all(np.abs(rn[:, 0]) > threshold * np.linalg.norm(rn, axis=1))
        if p_ok and n_ok:
            return rp, rn, q
    raise RotationFailed(f"no generic rotation in {max_draws} draws")


def project_to_pi(points, normals):
    """Central projection onto the slice where the first coordinate is 1.

    Points (a_1..a_d) map to (a_2/a_1..a_d/a_1); an origin hyperplane with
    normal n becomes the affine hyperplane n_2 w_1 + .. + n_d w_(d-1) = -n_1.
    """
    points = np.asarray(points, dtype=float)
    normals = np.asarray(normals, dtype=float)
    proj_points = points[:, 1:] / points[:, :1]
    plane_normals = normals[:, 1:]
    plane_offsets = -normals[:, 0]
    return proj_points, (plane_normals, plane_offsets)


def _relative_residuals(points, normals, offsets=None):
    points = np.asarray(points, dtype=float)
    normals = np.asarray(normals, dtype=float)
    if offsets is None:
        raw = normals @ points.T
        scale = (np.linalg.norm(normals, axis=1)[:, None]
                 * np.linalg.norm(points, axis=1)[None, :])
    else:
        raw = normals @ points.T - np.asarray(offsets, dtype=float)[:, None]
        hom_n = np.sqrt(np.linalg.norm(normals, axis=1) ** 2 + np.asarray(offsets) ** 2)
        hom_p = np.sqrt(np.linalg.norm(points, axis=1) ** 2 + 1.0)
        scale = hom_n[:, None] * hom_p[None, :]
    return np.abs(raw) / np.maximum(scale, 1e-300)


def count_hyperplane_incidences(points, hyperplanes, tol=1e-7):
    """Brute-force point-on-hyperplane count with the incidence graph.

    hyperplanes is either an (m, k) array of origin normals or a tuple
    (normals, offsets) of affine hyperplanes normal.w = offset.
    """
    if isinstance(hyperplanes, tuple):
        normals, offsets = hyperplanes
    else:
        normals, offsets = hyperplanes, None
    res = _relative_residuals(points, normals, offsets)
    pairs = np.nonzero(res.T <= tol)  # (point index, hyperplane index)
    edges = {(int(a), int(b)) for a, b in zip(*pairs)}
    graph = IncidenceGraph(edges, len(np.asarray(points)), len(np.asarray(normals)))
    return len(edges), graph


# -- primal side ---------------------------------------------------------------


def term_grid(family, resolution=256):
    """Term values on a regular grid over the family region."""
    x0, x1, y0, y1 = family.region
    xs = np.linspace(x0, x1, resolution + 1)
    ys = np.linspace(y0, y1, resolution + 1)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    grids = family.eval_terms(X, Y)
    return xs, ys, grids


def trace_family_curve(family, curve, resolution=1024, grids=None):
    """Implicit zero-set polyline segments by marching squares."""
    if grids is None:
        xs, ys, grids = term_grid(family, resolution)
    else:
        xs, ys, grids = grids
    F = np.tensordot(curve.coeffs, grids, axes=1)
    sgn = np.where(F >= 0, 1, -1)
    mixed = np.abs(sgn[:-1, :-1] + sgn[1:, :-1] + sgn[:-1, 1:] + sgn[1:, 1:]) < 4
    segs = []
    for i, j in zip(*np.nonzero(mixed)):
        f00, f10 = F[i, j], F[i + 1, j]
        f01, f11 = F[i, j + 1], F[i + 1, j + 1]
        pts = []
        if (f00 >= 0) != (f10 >= 0):
            t = f00 / (f00 - f10)
            pts.append((xs[i] + t * (xs[i + 1] - xs[i]), ys[j]))
        if (f01 >= 0) != (f11 >= 0):
            t = f01 / (f01 - f11)
            pts.append((xs[i] + t * (xs[i + 1] - xs[i]), ys[j + 1]))
        if (f00 >= 0) != (f01 >= 0):
            t = f00 / (f00 - f01)
            pts.append((xs[i], ys[j] + t * (ys[j + 1] - ys[j])))
        if (f10 >= 0) != (f11 >= 0):
            t = f10 / (f10 - f11)
            pts.append((xs[i + 1], ys[j] + t * (ys[j + 1] - ys[j])))
        if len(pts) == 2:
            segs.append((pts[0], pts[1]))
        elif len(pts) == 4:
            segs.append((pts[0], pts[2]))
            segs.append((pts[1], pts[3]))
    return np.array(segs, dtype=float).reshape(-1, 2, 2)


def primal_residual(family, curve, p):
    """|a.m(p)| normalized by the coefficient and term magnitudes."""
    vals = family.eval_terms(float(p[0]), float(p[1]))
    denom = max(float(np.linalg.norm(vals)), 1e-300)
    return abs(float(np.dot(curve.coeffs, vals))) / denom


def count_family_incidences(points, family, curves, tol=1e-7):
    """Primal count: normalized residual test against every curve."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(pts) == 0 or len(curves) == 0:
        return 0, IncidenceGraph(set(), len(pts), len(curves))
    vals = family.eval_terms(pts[:, 0], pts[:, 1])  # (d, m)
    denom = np.maximum(np.linalg.norm(vals, axis=0), 1e-300)
    coeffs = np.stack([c.coeffs for c in curves])  # (n, d)
    res = np.abs(coeffs @ vals) / denom[None, :]  # (n, m)
    pairs = np.nonzero(res.T <= tol)
    edges = {(int(a), int(b)) for a, b in zip(*pairs)}
    return len(edges), IncidenceGraph(edges, len(pts), len(curves))


def point_on_family_curve(family, curve, rng, resolution=256):
    """A point of the zero set, found by sign change plus root refinement."""
    xs, ys, grids = term_grid(family, resolution)
    F = np.tensordot(curve.coeffs, grids, axes=1)
    sgn = np.where(F >= 0, 1, -1)
    hor = np.nonzero(sgn[:-1, :] * sgn[1:, :] < 0)
    ver = np.nonzero(sgn[:, :-1] * sgn[:, 1:] < 0)
    n_h, n_v = len(hor[0]), len(ver[0])
    if n_h + n_v == 0:
        return None
    pick = int(rng.integers(0, n_h + n_v))
    if pick < n_h:
        i, j = hor[0][pick], hor[1][pick]
        y = float(ys[j])

        def f(x):
            return float(np.dot(curve.coeffs, family.eval_terms(x, y)))

        x = brentq(f, float(xs[i]), float(xs[i + 1]), xtol=1e-15)
        return float(x), y
    pick -= n_h
    i, j = ver[0][pick], ver[1][pick]
    x = float(xs[i])

    def g(y):
        return float(np.dot(curve.coeffs, family.eval_terms(x, y)))

    y = brentq(g, float(ys[j]), float(ys[j + 1]), xtol=1e-15)
    return x, float(y)


# -- the full chain -------------------------------------------------------------


@dataclass
class DualityReport:
    primal_count: int
    dual_count: int
    projected_count: int
    transpose_ok: bool
    rotation: np.ndarray
    primal_graph: IncidenceGraph
    dual_graph: IncidenceGraph
    projected_graph: IncidenceGraph
    kst_ceiling: int | None = None
    kst_ceiling_free: bool | None = None

    @property
    def counts(self):
        return (self.primal_count, self.dual_count, self.projected_count)


def verify_duality_chain(points, family, curves, tol=1e-7, seed=0,
                         kst_ceiling=None):
    """Count incidences in the plane, in coefficient space, and on the slice.

    All three counts use the same normalized-residual tolerance; they must
    agree pairwise, and the dual graph must be the primal graph transposed.
    There is no closed-form ceiling t for which the dual graph avoids
    K_{2,t}; pass kst_ceiling to check a candidate value empirically.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    primal_count, primal_graph = count_family_incidences(pts, family, curves, tol)

    dual_pts = np.stack([dual_point(c) for c in curves])
    normals = np.stack([dual_hyperplane(family, p).normal for p in pts]) \
        if len(pts) else np.zeros((0, family.d))
    dual_count, dual_graph = count_hyperplane_incidences(dual_pts, normals, tol)

    rp, rn, q = generic_rotation(dual_pts, normals, seed=seed)
    proj_pts, proj_planes = project_to_pi(rp, rn)
    projected_count, projected_graph = count_hyperplane_incidences(
        proj_pts, proj_planes, tol)

    counts = {"primal": primal_count, "dual": dual_count, "projected": projected_count}
    names = list(counts)
    for a, b in zip(names, names[1:]):
        if counts[a] != counts[b]:
            raise ChainMismatch(f"{a} count {counts[a]} != {b} count {counts[b]}")
    transpose_ok = (dual_graph.edges == primal_graph.transpose().edges
                    and projected_graph.edges == dual_graph.edges)
    ceiling_free = None
    if kst_ceiling is not None:
        from .incidence import kst_free

        ceiling_free = kst_free(dual_graph, 2, kst_ceiling)
    return DualityReport(primal_count, dual_count, projected_count, transpose_ok,
                         q, primal_graph, dual_graph, projected_graph,
                         kst_ceiling, ceiling_free)
