"""Phase-plane geometry: points, the unit lattice, symplectic form, domains.

The phase plane carries the Euclidean metric |lambda|^2 = p^2 + theta^2 and
the symplectic form sigma[(x,xi),(y,eta)] = eta*x - xi*y.  The unit lattice
has cell area one; "sharp" points are the lattice translated by the cell
midpoint (1/2, 1/2).
"""

from __future__ import annotations

from dataclasses import dataclass
import json

import numpy as np
from scipy.spatial import cKDTree


@dataclass(frozen=True)
class PhasePoint:
    p: float
    theta: float

    @property
    def label(self) -> complex:
        """Complex coordinate p + i*theta."""
        return complex(self.p, self.theta)

    @property
    def norm(self) -> float:
        return float(np.hypot(self.p, self.theta))

    def __iter__(self):
        return iter((self.p, self.theta))

    def __add__(self, other):
        other = as_point(other)
        return PhasePoint(self.p + other.p, self.theta + other.theta)

    def __sub__(self, other):
        other = as_point(other)
        return PhasePoint(self.p - other.p, self.theta - other.theta)


def as_point(x) -> PhasePoint:
    if isinstance(x, PhasePoint):
        return x
    p, theta = x
    return PhasePoint(float(p), float(theta))


def lattice_point(k: int, j: int) -> PhasePoint:
    return PhasePoint(float(k), float(j))


def sharp_point(k: int = 0, j: int = 0) -> PhasePoint:
    """Cell-midpoint translate (k + 1/2, j + 1/2) of the lattice."""
    return PhasePoint(k + 0.5, j + 0.5)


SHARP = sharp_point(0, 0)


def symplectic_form(u, v) -> float:
    """sigma[(x,xi),(y,eta)] = eta*x - xi*y; antisymmetric, rotation invariant."""
    u, v = as_point(u), as_point(v)
    return v.theta * u.p - u.theta * v.p


def j_transform(u) -> PhasePoint:
    """The symplectic rotation (p, theta) -> (theta, -p)."""
    u = as_point(u)
    return PhasePoint(u.theta, -u.p)


def _pts(x) -> tuple[np.ndarray, bool]:
    if isinstance(x, PhasePoint):
        return np.array([[x.p, x.theta]]), True
    arr = np.asarray(x, dtype=float)
    if arr.ndim == 1:
        return arr.reshape(1, 2), True
    return arr.reshape(-1, 2), False


class PhaseDomain:
    """Region of the phase plane: membership predicate plus bounding box.

    Subclasses with analytic boundaries override `distance`; the base class
    falls back to sampling the membership function on a fine grid (default
    resolution 1/32) and measuring distance to the sampled boundary.
    Instances are immutable after construction and safe to share.
    """

    def __init__(self, bbox, resolution: float = 1.0 / 32.0):
        self.bbox = tuple(float(b) for b in bbox)
        if len(self.bbox) != 4 or self.bbox[0] > self.bbox[1] or self.bbox[2] > self.bbox[3]:
            raise ValueError(f"bad bounding box {bbox}")
        self.resolution = float(resolution)
        self._boundary_tree = None

    def is_bounded(self) -> bool:
        return all(np.isfinite(self.bbox))

    def _contains_xy(self, pts: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def contains(self, x):
        pts, scalar = _pts(x)
        res = self._contains_xy(pts)
        return bool(res[0]) if scalar else res

    def _boundary_samples(self) -> np.ndarray:
        if not self.is_bounded():
            raise ValueError("cannot sample the boundary of an unbounded domain")
        pmin, pmax, tmin, tmax = self.bbox
        pad = 2 * self.resolution
        ps = np.arange(pmin - pad, pmax + pad + self.resolution, self.resolution)
        ts = np.arange(tmin - pad, tmax + pad + self.resolution, self.resolution)
        P, T = np.meshgrid(ps, ts, indexing="ij")
        grid = np.column_stack([P.ravel(), T.ravel()])
        inside = self._contains_xy(grid).reshape(P.shape)
        edge = np.zeros_like(inside)
        edge[:-1, :] |= inside[:-1, :] != inside[1:, :]
        edge[1:, :] |= inside[:-1, :] != inside[1:, :]
        edge[:, :-1] |= inside[:, :-1] != inside[:, 1:]
        edge[:, 1:] |= inside[:, :-1] != inside[:, 1:]
        samples = grid[(edge & inside).ravel()]
        if samples.size == 0:
            samples = grid[inside.ravel()]
        if samples.size == 0:
            raise ValueError("domain has no occupied cells at this resolution")
        return samples

    def distance(self, x):
        """Euclidean distance to the domain (0 inside); sampled-boundary fallback."""
        pts, scalar = _pts(x)
        if self._boundary_tree is None:
            self._boundary_tree = cKDTree(self._boundary_samples())
        d, _ = self._boundary_tree.query(pts)
        d = np.where(self._contains_xy(pts), 0.0, d)
        return float(d[0]) if scalar else d


class Rect(PhaseDomain):
    def __init__(self, pmin, pmax, tmin, tmax, resolution=1.0 / 32.0):
        super().__init__((pmin, pmax, tmin, tmax), resolution)

    def _contains_xy(self, pts):
        pmin, pmax, tmin, tmax = self.bbox
        return (
            (pts[:, 0] >= pmin) & (pts[:, 0] <= pmax)
            & (pts[:, 1] >= tmin) & (pts[:, 1] <= tmax)
        )

    def distance(self, x):
        pts, scalar = _pts(x)
        pmin, pmax, tmin, tmax = self.bbox
        dp = np.maximum(np.maximum(pmin - pts[:, 0], pts[:, 0] - pmax), 0.0)
        dt = np.maximum(np.maximum(tmin - pts[:, 1], pts[:, 1] - tmax), 0.0)
        d = np.hypot(dp, dt)
        return float(d[0]) if scalar else d


class Disk(PhaseDomain):
    def __init__(self, center=(0.0, 0.0), radius=1.0, resolution=1.0 / 32.0):
        cx, cy = as_point(center)
        if radius < 0:
            raise ValueError("disk radius must be >= 0")
        self.center = (float(cx), float(cy))
        self.radius = float(radius)
        super().__init__((cx - radius, cx + radius, cy - radius, cy + radius), resolution)

    def _contains_xy(self, pts):
        r = np.hypot(pts[:, 0] - self.center[0], pts[:, 1] - self.center[1])
        return r <= self.radius + 1e-12

    def distance(self, x):
        pts, scalar = _pts(x)
        r = np.hypot(pts[:, 0] - self.center[0], pts[:, 1] - self.center[1])
        d = np.maximum(r - self.radius, 0.0)
        return float(d[0]) if scalar else d


class Polygon(PhaseDomain):
    """Closed polygon; membership by ray casting, boundary points included."""

    def __init__(self, vertices, resolution=1.0 / 32.0):
        verts = np.asarray(vertices, dtype=float)
        if verts.ndim != 2 or verts.shape[0] < 3 or verts.shape[1] != 2:
            raise ValueError("polygon needs at least 3 (p, theta) vertices")
        self.vertices = verts
        bbox = (verts[:, 0].min(), verts[:, 0].max(), verts[:, 1].min(), verts[:, 1].max())
        super().__init__(bbox, resolution)

    def _edges(self):
        v = self.vertices
        return v, np.roll(v, -1, axis=0)

    def _edge_distance(self, pts):
        a, b = self._edges()
        ab = b - a  # (E,2)
        ap = pts[:, None, :] - a[None, :, :]  # (N,E,2)
        denom = np.maximum(np.sum(ab * ab, axis=1), 1e-300)
        t = np.clip(np.sum(ap * ab[None, :, :], axis=2) / denom, 0.0, 1.0)
        proj = a[None, :, :] + t[:, :, None] * ab[None, :, :]
        return np.min(np.hypot(*(pts[:, None, :] - proj).transpose(2, 0, 1)), axis=1)

    def _contains_xy(self, pts):
        x, y = pts[:, 0], pts[:, 1]
        a, b = self._edges()
        inside = np.zeros(len(pts), dtype=bool)
        for (x1, y1), (x2, y2) in zip(a, b):
            cond = (y1 > y) != (y2 > y)
            xin = x1 + (y - y1) * (x2 - x1) / np.where(y2 != y1, y2 - y1, 1e-300)
            inside ^= cond & (x < xin)
        return inside | (self._edge_distance(pts) <= 1e-9)

    def distance(self, x):
        pts, scalar = _pts(x)
        d = np.where(self._contains_xy(pts), 0.0, self._edge_distance(pts))
        return float(d[0]) if scalar else d


class UnionDomain(PhaseDomain):
    def __init__(self, parts, resolution=1.0 / 32.0):
        parts = list(parts)
        if not parts:
            raise ValueError("union of no domains")
        self.parts = parts
        boxes = np.array([p.bbox for p in parts])
        bbox = (boxes[:, 0].min(), boxes[:, 1].max(), boxes[:, 2].min(), boxes[:, 3].max())
        super().__init__(bbox, resolution)

    def _contains_xy(self, pts):
        out = np.zeros(len(pts), dtype=bool)
        for part in self.parts:
            out |= part._contains_xy(pts)
        return out

    def distance(self, x):
        pts, scalar = _pts(x)
        d = np.min(np.stack([p.distance(pts) for p in self.parts]), axis=0)
        return float(d[0]) if scalar else d


class PointSet(PhaseDomain):
    """Finite set of phase points (measure zero; useful as a neighborhood seed)."""

    def __init__(self, points):
        pts = np.asarray([[q.p, q.theta] if isinstance(q, PhasePoint) else q for q in points], dtype=float)
        if pts.size == 0:
            raise ValueError("empty point set")
        self.points = pts
        self._tree = cKDTree(pts)
        bbox = (pts[:, 0].min(), pts[:, 0].max(), pts[:, 1].min(), pts[:, 1].max())
        super().__init__(bbox)

    def _contains_xy(self, pts):
        d, _ = self._tree.query(pts)
        return d <= 1e-12

    def distance(self, x):
        pts, scalar = _pts(x)
        d, _ = self._tree.query(pts)
        return float(d[0]) if scalar else d


class FunctionDomain(PhaseDomain):
    """Arbitrary membership predicate over (p, theta) arrays, with explicit bbox."""

    def __init__(self, predicate, bbox, resolution=1.0 / 32.0):
        self.predicate = predicate
        super().__init__(bbox, resolution)

    def _contains_xy(self, pts):
        return np.asarray(self.predicate(pts[:, 0], pts[:, 1]), dtype=bool)


class Neighborhood(PhaseDomain):
    """Closed r-neighborhood of a base domain: membership is dist(., base) <= r."""

    def __init__(self, base: PhaseDomain, r: float):
        if r < 0:
            raise ValueError("neighborhood radius must be >= 0")
        self.base = base
        self.r = float(r)
        pmin, pmax, tmin, tmax = base.bbox
        super().__init__((pmin - r, pmax + r, tmin - r, tmax + r), base.resolution)

    def _contains_xy(self, pts):
        return self.base.distance(pts) <= self.r + 1e-12

    def distance(self, x):
        pts, scalar = _pts(x)
        d = np.maximum(self.base.distance(pts) - self.r, 0.0)
        return float(d[0]) if scalar else d


def neighborhood(domain: PhaseDomain, r: float) -> PhaseDomain:
    return Neighborhood(domain, r)


def lattice_points_in(domain: PhaseDomain, sharp: bool = False) -> list[PhasePoint]:
    """All lattice (or sharp) points inside the domain, sorted by index (k, j)."""
    if not domain.is_bounded():
        raise ValueError("lattice enumeration needs a bounded domain")
    off = 0.5 if sharp else 0.0
    pmin, pmax, tmin, tmax = domain.bbox
    ks = np.arange(int(np.ceil(pmin - off - 1e-9)), int(np.floor(pmax - off + 1e-9)) + 1)
    js = np.arange(int(np.ceil(tmin - off - 1e-9)), int(np.floor(tmax - off + 1e-9)) + 1)
    if ks.size == 0 or js.size == 0:
        return []
    K, J = np.meshgrid(ks, js, indexing="ij")
    pts = np.column_stack([K.ravel() + off, J.ravel() + off])
    keep = domain.contains(pts)
    return [PhasePoint(p, t) for (p, t), ok in zip(pts, keep) if ok]


def domain_from_json(spec) -> PhaseDomain:
    """Build a domain from {"type": "disk"|"rect"|"polygon"|"union", ...}."""
    if isinstance(spec, (str, bytes)):
        spec = json.loads(spec)
    kind = spec.get("type")
    res = float(spec.get("resolution", 1.0 / 32.0))
    if kind == "disk":
        return Disk(tuple(spec["center"]), float(spec["radius"]), res)
    if kind == "rect":
        return Rect(spec["pmin"], spec["pmax"], spec["tmin"], spec["tmax"], res)
    if kind == "polygon":
        return Polygon(spec["vertices"], res)
    if kind == "union":
        return UnionDomain([domain_from_json(s) for s in spec["parts"]], res)
    raise ValueError(f"unknown domain type {kind!r}")
