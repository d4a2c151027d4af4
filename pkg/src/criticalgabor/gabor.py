"""Gabor atoms, the Gabor transform, series synthesis, and localization bounds.

The atom at lambda = (p, theta) is e_lambda(x) = 2^{1/4} exp(-pi (x-p)^2
+ 2 pi i theta x); atoms have unit norm and closed-form pairwise inner
products, which makes every transform here a dense but small linear-algebra
problem at desk scale.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import json

import numpy as np

from .numerics import DEFAULT_H, DEFAULT_T, SampledSignal, loc_integral, _sample_count
from .phaseplane import PhasePoint, PointSet, as_point, neighborhood

DEFAULT_BOX = 8.0
DEFAULT_DLAM = 1.0 / 16.0
DEFAULT_MARGIN = 4.0

SIGMA0 = float(sum(np.exp(-np.pi * k ** 2 / 2.0) for k in range(-40, 41)))


def atom(lam, T: float = DEFAULT_T, h: float = DEFAULT_H,
         margin: float = DEFAULT_MARGIN) -> SampledSignal:
    """Coherent state e_lambda sampled on the grid.

    The center must keep `margin` units away from the truncation boundary
    (margin 4 puts the dropped tail below 1e-21), otherwise the sampled atom
    is visibly non-normalized and an error is raised.
    """
    lam = as_point(lam)
    if abs(lam.p) + margin > T:
        raise ValueError(f"atom center p={lam.p} too close to the boundary T={T} (margin {margin})")
    x = -T + h * np.arange(_sample_count(T, h))
    vals = 2 ** 0.25 * np.exp(-np.pi * (x - lam.p) ** 2 + 2j * np.pi * lam.theta * x)
    return SampledSignal(T, h, vals)


def atom_inner(lam, mu) -> complex:
    """Closed-form <e_lam | e_mu> = exp(pi i (p+q)(theta-eta) - pi |lam-mu|^2 / 2)."""
    lam, mu = as_point(lam), as_point(mu)
    d2 = (lam.p - mu.p) ** 2 + (lam.theta - mu.theta) ** 2
    return complex(np.exp(1j * np.pi * (lam.p + mu.p) * (lam.theta - mu.theta) - np.pi * d2 / 2.0))


@dataclass(frozen=True)
class GaborField:
    """Values V(lambda) = <f | e_lambda> on a rectangular phase grid."""

    p_grid: np.ndarray
    theta_grid: np.ndarray
    values: np.ndarray  # shape (len(p_grid), len(theta_grid))
    dlam: float

    def __post_init__(self):
        for name in ("p_grid", "theta_grid", "values"):
            arr = np.asarray(getattr(self, name))
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if self.values.shape != (self.p_grid.size, self.theta_grid.size):
            raise ValueError("field shape does not match its grids")

    def mass(self) -> float:
        """Riemann approximation of int |V|^2 dlambda."""
        return float(np.sum(np.abs(self.values) ** 2) * self.dlam ** 2)

    def to_csv(self, path):
        with open(path, "w") as fh:
            fh.write("p,theta,re,im\n")
            for i, p in enumerate(self.p_grid):
                for j, t in enumerate(self.theta_grid):
                    v = self.values[i, j]
                    fh.write(f"{float(p)!r},{float(t)!r},{float(v.real)!r},{float(v.imag)!r}\n")


def _box_grids(box, dlam):
    if np.isscalar(box):
        box = (-box, box, -box, box)
    pmin, pmax, tmin, tmax = box
    ps = pmin + dlam * np.arange(int(round((pmax - pmin) / dlam)) + 1)
    ts = tmin + dlam * np.arange(int(round((tmax - tmin) / dlam)) + 1)
    return ps, ts


def gabor_transform(f: SampledSignal, box=DEFAULT_BOX, dlam: float = DEFAULT_DLAM) -> GaborField:
    """Sample <f | e_lambda> on a rectangular grid of the phase plane.

    The box may not exceed the grid truncation |p| <= T; near the boundary the
    atoms are themselves truncated, which is harmless for signals whose mass
    stays well inside the grid.
    """
    ps, ts = _box_grids(box, dlam)
    if np.max(np.abs(ps)) > f.T + 1e-9:
        raise ValueError(f"phase box reaches p={np.max(np.abs(ps))}, beyond the grid T={f.T}")
    x = f.x
    # <f|e_lam> = 2^{1/4} h * sum_x f(x) e^{-pi(x-p)^2} e^{-2 pi i theta x}
    phase = np.exp(-2j * np.pi * np.outer(x, ts))  # (X, Th)
    out = np.empty((ps.size, ts.size), dtype=complex)
    for i, p in enumerate(ps):
        weighted = f.values * np.exp(-np.pi * (x - p) ** 2)
        out[i] = weighted @ phase
    out *= 2 ** 0.25 * f.h
    return GaborField(ps, ts, out, dlam)


class CoefficientSet:
    """Finitely supported coefficients over the relaxed lattice.

    Keys are (k, j, sharp); a sharp entry sits at (k + 1/2, j + 1/2).  An
    optional order-m block (values with its node list) rides along for
    higher-order expansions.
    """

    def __init__(self, entries=None, sharp_block=None, nodes=None):
        self.entries: dict[tuple[int, int, bool], complex] = {}
        if entries:
            for key, val in dict(entries).items():
                k, j, sharp = key
                self.entries[(int(k), int(j), bool(sharp))] = complex(val)
        self.sharp_block = [complex(b) for b in (sharp_block or [])]
        self.nodes = [as_point(n) for n in (nodes or [])]
        if self.sharp_block and len(self.nodes) != len(self.sharp_block):
            raise ValueError("order-m block needs one node per coefficient")

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(sorted(self.entries.items()))

    def get(self, k, j, sharp=False) -> complex:
        return self.entries.get((k, j, sharp), 0j)

    def set(self, k, j, value, sharp=False):
        self.entries[(int(k), int(j), bool(sharp))] = complex(value)

    def add(self, k, j, value, sharp=False):
        key = (int(k), int(j), bool(sharp))
        self.entries[key] = self.entries.get(key, 0j) + complex(value)

    def points(self) -> list[PhasePoint]:
        off = {False: 0.0, True: 0.5}
        return [PhasePoint(k + off[s], j + off[s]) for (k, j, s) in sorted(self.entries)]

    def amplitudes(self) -> np.ndarray:
        return np.array([self.entries[key] for key in sorted(self.entries)])

    def l2(self) -> float:
        total = sum(abs(v) ** 2 for v in self.entries.values())
        total += sum(abs(b) ** 2 for b in self.sharp_block)
        return float(np.sqrt(total))

    def to_json(self) -> str:
        payload = {
            "coefficients": [
                {"k": k, "j": j, "sharp": s, "re": v.real, "im": v.imag}
                for (k, j, s), v in sorted(self.entries.items())
            ]
        }
        if self.sharp_block:
            payload["sharp_block"] = [[b.real, b.imag] for b in self.sharp_block]
            payload["nodes"] = [[n.p, n.theta] for n in self.nodes]
        return json.dumps(payload)

    @staticmethod
    def from_json(text: str) -> "CoefficientSet":
        payload = json.loads(text)
        entries = {
            (c["k"], c["j"], bool(c.get("sharp", False))): complex(c["re"], c["im"])
            for c in payload["coefficients"]
        }
        block = [complex(re, im) for re, im in payload.get("sharp_block", [])]
        nodes = [tuple(n) for n in payload.get("nodes", [])]
        return CoefficientSet(entries, sharp_block=block, nodes=nodes)


def synthesize(coeffs: CoefficientSet, T: float = DEFAULT_T, h: float = DEFAULT_H,
               margin: float = DEFAULT_MARGIN) -> SampledSignal:
    """Superpose sum c_lambda e_lambda (plus any order-m block) on the grid.

    Satisfies ||f|| <= sigma0 * (sum |c|^2)^{1/2} with sigma0 = sum_k
    exp(-pi k^2 / 2) ~ 1.41950.
    """
    x = -T + h * np.arange(_sample_count(T, h))
    vals = np.zeros(x.size, dtype=complex)
    for (k, j, sharp), c in coeffs.entries.items():
        if c == 0:
            continue
        pt = PhasePoint(k + (0.5 if sharp else 0.0), j + (0.5 if sharp else 0.0))
        vals += c * atom(pt, T, h, margin).values
    if coeffs.sharp_block:
        from .higher import dual_atoms  # local import: higher builds on this module

        duals = dual_atoms(coeffs.nodes, T, h, margin=margin)
        for b, d in zip(coeffs.sharp_block, duals.atoms):
            vals += b * d.values
    return SampledSignal(T, h, vals)


def tail_mass(coeffs: CoefficientSet, r: float, box=DEFAULT_BOX,
              dlam: float = 1.0 / 8.0, T: float = DEFAULT_T, h: float = DEFAULT_H):
    """Gabor mass of a lattice series outside the r-neighborhood of its support.

    Returns (measured, bound): the grid integral of |<g|e_mu>|^2 over the box
    minus the neighborhood, and the guarantee exp(-pi r^2) * sum |c|^2.
    """
    if r <= 0:
        raise ValueError("tail radius must be positive")
    bound = float(np.exp(-np.pi * r ** 2) * coeffs.l2() ** 2)
    if not coeffs.entries:
        return 0.0, bound
    g = synthesize(coeffs, T, h)
    if np.isscalar(box):
        box = (-box, box, -box, box)
    # midpoint grid: boundary cells classify by center, so the measured tail
    # approaches the continuum value from below
    box = (box[0] + dlam / 2, box[1] - dlam / 2, box[2] + dlam / 2, box[3] - dlam / 2)
    field = gabor_transform(g, box, dlam)
    support = PointSet(coeffs.points())
    P, Th = np.meshgrid(field.p_grid, field.theta_grid, indexing="ij")
    pts = np.column_stack([P.ravel(), Th.ravel()])
    outside = ~neighborhood(support, r).contains(pts)
    measured = float(np.sum(np.abs(field.values.ravel()[outside]) ** 2) * dlam ** 2)
    return measured, bound


def half_plane_mass(f: SampledSignal, q: float) -> float:
    """Gabor mass over the half-plane p >= q, via int I(x - q) |f(x)|^2 dx."""
    return float(np.sum(loc_integral(f.x - q) * np.abs(f.values) ** 2) * f.h)


def field_synthesis(field: GaborField, T: float, h: float) -> SampledSignal:
    """Riemann sum of V(lambda) e_lambda d lambda over the field's grid."""
    x = -T + h * np.arange(_sample_count(T, h))
    phase = np.exp(2j * np.pi * np.outer(field.theta_grid, x))  # (Th, X)
    inner_sum = field.values @ phase  # (P, X)
    envelope = 2 ** 0.25 * np.exp(-np.pi * (x[None, :] - field.p_grid[:, None]) ** 2)
    vals = np.sum(inner_sum * envelope, axis=0) * field.dlam ** 2
    return SampledSignal(T, h, vals)
