"""Scene container: a point set, a curve set, and a shared viewport.

Scenes serialize to JSON with all reals as IEEE-754 doubles in decimal; a
fixed input always produces byte-identical output.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import curves as cv
from .errors import PfaffincError

FORMAT_VERSION = 1


@dataclass
class Scene:
    points: np.ndarray  # (m, 2)
    curves: list
    viewport: tuple  # (x0, x1, y0, y1)
    seed: int = 0
    meta: dict = field(default_factory=dict)
    _trace_cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def m(self):
        return len(self.points)

    @property
    def n(self):
        return len(self.curves)

    def traces(self, samples=1024):
        """Traces for all curves, cached per sampling density."""
        if samples not in self._trace_cache:
            self._trace_cache[samples] = [
                cv.trace_curve(c, self.viewport, samples=samples) for c in self.curves
            ]
        return self._trace_cache[samples]


def _num(v):
    return None if v is None or math.isinf(v) else float(v)


def _curve_to_dict(curve):
    k, p = curve.kind, curve.params
    if k == "line":
        params = {"a": p[0], "b": p[1]}
    elif k == "circle":
        params = {"cx": p[0], "cy": p[1], "r": p[2]}
    elif k == "parabola":
        params = {"a": p[0], "b": p[1], "c": p[2]}
    elif k == "exp":
        params = {"a": p[0], "b": p[1]}
    elif k == "log":
        params = {"s": p[0], "c": p[1]}
    elif k == "tan":
        params = {"branch": p[0]}
    elif k == "arctan":
        params = {}
    elif k == "reciprocal":
        params = {"a": p[0], "branch": p[1]}
    elif k == "exp-of-poly":
        params = {"coeffs": list(p[0]), "scale": p[1]}
    elif k == "reciprocal-root":
        params = {"k": p[0]}
    elif k == "composed":
        params = {"base_kind": p[0], "base_params": list(p[1]), "coeffs": list(p[2])}
    else:
        raise PfaffincError(f"cannot serialize curve kind {k!r}")
    out = {"kind": k, "params": params,
           "domain": [_num(curve.domain[0]), _num(curve.domain[1])]}
    if curve.transform is not None:
        out["transform"] = list(curve.transform)
    if curve.label:
        out["label"] = curve.label
    return out


def _curve_from_dict(data):
    k = data["kind"]
    p = data.get("params", {})
    label = data.get("label", "")
    if k == "line":
        c = cv.line(p["a"], p["b"], label)
    elif k == "circle":
        c = cv.circle(p["cx"], p["cy"], p["r"], label)
    elif k == "parabola":
        c = cv.parabola(p["a"], p["b"], p["c"], label)
    elif k == "exp":
        c = cv.exp_curve(p.get("a", 1.0), p.get("b", 1.0), label)
    elif k == "log":
        c = cv.log_curve(p.get("s", 1.0), p.get("c", 0.0), label)
    elif k == "tan":
        c = cv.tan_curve(p.get("branch", 0), label)
    elif k == "arctan":
        c = cv.arctan_curve(label)
    elif k == "reciprocal":
        c = cv.reciprocal_curve(p.get("a", 1.0), p.get("branch", 1), label)
    elif k == "exp-of-poly":
        c = cv.exp_of_poly(p["coeffs"], p.get("scale", 1.0), label)
    elif k == "reciprocal-root":
        c = cv.reciprocal_root(p["k"], label)
    elif k == "composed":
        base = _curve_from_dict({"kind": p["base_kind"],
                                 "params": _base_params_dict(p["base_kind"], p["base_params"])})
        c = cv.compose_with_polynomial(base, p["coeffs"], label)
    else:
        raise PfaffincError(f"unknown curve kind {k!r}")
    if "transform" in data:
        c = cv.apply_linear_transform(c, *data["transform"])
    return c


def _base_params_dict(kind, params_tuple):
    keys = {"exp": ("a", "b"), "tan": ("branch",), "reciprocal": ("a", "branch")}[kind]
    return dict(zip(keys, params_tuple))


def scene_to_dict(scene):
    return {
        "format_version": FORMAT_VERSION,
        "seed": scene.seed,
        "viewport": list(scene.viewport),
        "points": [[float(x), float(y)] for x, y in scene.points],
        "curves": [_curve_to_dict(c) for c in scene.curves],
        "meta": scene.meta,
    }


def scene_from_dict(data):
    pts = np.array(data.get("points", []), dtype=float).reshape(-1, 2)
    return Scene(
        points=pts,
        curves=[_curve_from_dict(c) for c in data.get("curves", [])],
        viewport=tuple(data["viewport"]),
        seed=data.get("seed", 0),
        meta=data.get("meta", {}),
    )


def scene_to_json(scene):
    return json.dumps(scene_to_dict(scene), sort_keys=True, indent=2) + "\n"


def save_scene(scene, path):
    with open(path, "w") as fh:
        fh.write(scene_to_json(scene))


def load_scene(path):
    with open(path) as fh:
        return scene_from_dict(json.load(fh))


# -- rotation ---------------------------------------------------------------


def rotate_scene(scene, theta):
    """Rigidly rotate points and curves; the viewport becomes the rotated bbox."""
    m = cv.rotation_matrix(theta)
    r = np.array([[m[0], m[1]], [m[2], m[3]]])
    pts = scene.points @ r.T if len(scene.points) else scene.points
    new_curves = [cv.apply_linear_transform(c, *m) for c in scene.curves]
    x0, x1, y0, y1 = scene.viewport
    corners = np.array([[x0, y0], [x0, y1], [x1, y0], [x1, y1]]) @ r.T
    vp = (corners[:, 0].min(), corners[:, 0].max(),
          corners[:, 1].min(), corners[:, 1].max())
    meta = dict(scene.meta)
    meta["rotation"] = meta.get("rotation", 0.0) + theta
    return Scene(pts, new_curves, vp, scene.seed, meta)


def _has_vertical_trace(scene, samples=128):
    for c in scene.curves:
        try:
            tr = cv.trace_curve(c, scene.viewport, samples=samples)
        except PfaffincError:
            continue
        for comp in tr.components:
            if comp.xs.max() - comp.xs.min() < 1e-9:
                return True
    return False


def prerotate_scene(scene, seed=None, max_tries=100):
    """Rotate the scene so no curve traces as a vertical segment.

    The identity angle is tried first; rejected angles advance a seeded
    uniform draw.  Deterministic for a fixed (scene, seed).
    """
    rng = np.random.default_rng(scene.seed if seed is None else seed)
    for attempt in range(max_tries):
        theta = 0.0 if attempt == 0 else float(rng.uniform(0.05, math.pi - 0.05))
        candidate = scene if attempt == 0 else rotate_scene(scene, theta)
        if not _has_vertical_trace(candidate):
            return candidate, theta
    raise PfaffincError("no rotation avoided vertical traces within the retry budget")
