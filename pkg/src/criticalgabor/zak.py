"""Zak transform on the midpoint grid of the unit square, and the ladder
operator transported to the Zak side.

Zf(y, xi) = sum_q exp(2 pi i q xi) f(y + q) is 1-periodic in xi and picks up
exp(-2 pi i xi) under y -> y + 1.  The grid (y_i, xi_j) = ((i+1/2)/N,
(j+1/2)/N) is chosen so the theta zero at (1/2, 1/2) is never a node; it
requires 1/(N h) to be an even integer so that every y_i + q is a sample
point of the signal.
"""

from __future__ import annotations

from dataclasses import dataclass
import json

import numpy as np

from .numerics import SampledSignal, ThetaConfig, theta, upsample_periodic, _sample_count
from .phaseplane import as_point


def _substep(h: float, N: int) -> int:
    s = 1.0 / (N * h)
    si = int(round(s))
    if abs(s - si) > 1e-9 or si < 2 or si % 2 != 0:
        raise ValueError(
            f"grid step h={h} incompatible with N={N}: 1/(N h) must be an even integer "
            "so the midpoint grid lands on sample points"
        )
    return si


def default_zak_size(h: float) -> int:
    """Largest midpoint-compatible N for the step h (substep exactly 2)."""
    N = int(round(1.0 / (2.0 * h)))
    _substep(h, N)
    return N


@dataclass(frozen=True)
class ZakField:
    """Values on the N x N midpoint grid of the unit square."""

    N: int
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        if self.N % 2 != 0:
            raise ValueError("midpoint grid needs even N so (1/2, 1/2) is never a node")
        if vals.shape != (self.N, self.N):
            raise ValueError(f"expected {self.N}x{self.N} values, got {vals.shape}")
        vals = vals.copy()
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def y(self) -> np.ndarray:
        return (np.arange(self.N) + 0.5) / self.N

    @property
    def xi(self) -> np.ndarray:
        return (np.arange(self.N) + 0.5) / self.N

    def norm(self) -> float:
        """Discrete L2(Q) norm, (1/N^2) sum |Z|^2 over the unit square."""
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2) / self.N ** 2))

    def to_csv(self, path):
        with open(path, "w") as fh:
            fh.write(f"# N={self.N}\n")
            fh.write("y,xi,re,im\n")
            for i, yv in enumerate(self.y):
                for j, xv in enumerate(self.xi):
                    v = self.values[i, j]
                    fh.write(f"{float(yv)!r},{float(xv)!r},{float(v.real)!r},{float(v.imag)!r}\n")

    def to_json(self) -> str:
        return json.dumps({
            "N": self.N,
            "values": [[[v.real, v.imag] for v in row] for row in self.values],
        })

    @staticmethod
    def from_json(text: str) -> "ZakField":
        payload = json.loads(text)
        vals = np.array([[complex(re, im) for re, im in row] for row in payload["values"]])
        return ZakField(payload["N"], vals)


def _integer_T(f: SampledSignal) -> int:
    Ti = int(round(f.T))
    if abs(f.T - Ti) > 1e-9:
        raise ValueError("Zak summation needs an integer grid half-width T")
    return Ti


def zak(f: SampledSignal, N: int | None = None) -> ZakField:
    """Zak transform sampled on the midpoint grid, truncated to the signal support."""
    N = default_zak_size(f.h) if N is None else int(N)
    s = _substep(f.h, N)
    Ti = _integer_T(f)
    qs = np.arange(-Ti, Ti)
    # sample index of y_i + q:  (i + 1/2) s + (q + T)/h
    i_idx = np.arange(N)
    n_idx = (i_idx[:, None] * s + s // 2) + ((qs[None, :] + Ti) * N * s)
    samples = f.values[n_idx]  # (N, 2T)
    xi = (np.arange(N) + 0.5) / N
    phases = np.exp(2j * np.pi * np.outer(qs, xi))  # (2T, N)
    return ZakField(N, samples @ phases)


def zak_inverse(Z: ZakField, T: float, h: float) -> SampledSignal:
    """Invert the midpoint-grid Zak transform back to the signal grid.

    Recovery is exact on the sub-grid y_i + q (which requires 2T <= N); the
    remaining sample points are filled by trigonometric interpolation, which
    is exact to roundoff for signals that are negligible at the boundary.
    """
    N = Z.N
    s = _substep(h, N)
    Ti = int(round(T))
    if abs(T - Ti) > 1e-9:
        raise ValueError("Zak inversion needs an integer grid half-width T")
    if 2 * Ti > N:
        raise ValueError(f"support width 2T={2 * Ti} exceeds N={N}; inversion would alias")
    qs = np.arange(-Ti, Ti)
    xi = Z.xi
    phases = np.exp(-2j * np.pi * np.outer(qs, xi))  # (2T, N)
    u = (Z.values @ phases.T) / N  # (N_y, 2T) values at y_i + q
    # chronological order along the line: q major, i minor
    seq = u.T.reshape(-1)  # x = -T + 1/(2N), ..., T - 1/(2N), spacing 1/N
    fine = upsample_periodic(seq, s)  # spacing h, starting at -T + h*s/2
    vals = np.zeros(_sample_count(T, h), dtype=complex)
    n0 = s // 2
    m = min(fine.size, vals.size - n0)
    vals[n0: n0 + m] = fine[:m]  # the clipped tail sits at x ~ T where f ~ 0
    return SampledSignal(T, h, vals)


def zak_atom_field(lam, N: int, cfg: ThetaConfig | None = None) -> ZakField:
    """Closed-form Zak transform of the atom e_lambda on the midpoint grid.

    Ze_(r,eta)(y, xi) = exp(2 pi i eta y) exp(-pi (y-r)^2) Theta(xi + eta + i(y-r)).
    """
    lam = as_point(lam)
    y = (np.arange(N) + 0.5) / N
    xi = (np.arange(N) + 0.5) / N
    Y, XI = y[:, None], xi[None, :]
    vals = (
        np.exp(2j * np.pi * lam.theta * Y - np.pi * (Y - lam.p) ** 2)
        * theta(XI + lam.theta + 1j * (Y - lam.p), cfg)
    )
    return ZakField(N, vals)


def wh_shift(lam, f: SampledSignal) -> SampledSignal:
    """Weyl-Heisenberg action T_lam f(x) = exp(2 pi i theta x) f(x - p).

    The shift p must be a whole number of grid steps, and the part of the
    signal pushed past the truncation boundary must be negligible.
    """
    lam = as_point(lam)
    steps = lam.p / f.h
    k = int(round(steps))
    if abs(steps - k) > 1e-9:
        raise ValueError(f"shift p={lam.p} is not a whole number of grid steps h={f.h}")
    vals = np.zeros_like(f.values)
    scale = max(float(np.max(np.abs(f.values))), 1e-300)
    if k >= 0:
        dropped = f.values[f.values.size - k:] if k else f.values[:0]
        vals[k:] = f.values[: f.values.size - k]
    else:
        dropped = f.values[:-k]
        vals[:k] = f.values[-k:]
    if dropped.size and np.max(np.abs(dropped)) > 1e-9 * scale:
        raise ValueError("shifted support leaves the grid")
    vals = vals * np.exp(2j * np.pi * lam.theta * f.x)
    return SampledSignal(f.T, f.h, vals)


def zak_translate_check(lam, f: SampledSignal, N: int | None = None) -> float:
    """Max deviation of Z(T_lam f) from exp(2 pi i (p xi + theta y)) Zf, lam in the lattice."""
    lam = as_point(lam)
    if abs(lam.p - round(lam.p)) > 1e-9 or abs(lam.theta - round(lam.theta)) > 1e-9:
        raise ValueError("translation covariance holds for lattice points only")
    left = zak(wh_shift(lam, f), N)
    right = zak(f, N)
    Y, XI = right.y[:, None], right.xi[None, :]
    factor = np.exp(2j * np.pi * (lam.p * XI + lam.theta * Y))
    return float(np.max(np.abs(left.values - factor * right.values)))


def _spectral_axis_derivative(values: np.ndarray, axis: int) -> np.ndarray:
    n = values.shape[axis]
    freq = np.fft.fftfreq(n, d=1.0 / n)  # integer frequencies for period 1
    shape = [1, 1]
    shape[axis] = n
    return np.fft.ifft(2j * np.pi * freq.reshape(shape) * np.fft.fft(values, axis=axis), axis=axis)


def a_operator_zak(Z: ZakField) -> ZakField:
    """Ladder operator on the Zak side: (1/2 pi i)(d_xi + i d_y) + y.

    xi-differentiation is plain spectral (the field is 1-periodic in xi);
    y-differentiation is performed on the doubly periodic trivialization
    exp(2 pi i y xi) Z, which absorbs the quasi-periodic boundary factor.
    """
    y = Z.y[:, None]
    xi = Z.xi[None, :]
    d_xi = _spectral_axis_derivative(Z.values, axis=1)
    twist = np.exp(2j * np.pi * y * xi)
    d_y = np.conj(twist) * _spectral_axis_derivative(twist * Z.values, axis=0) \
        - 2j * np.pi * xi * Z.values
    vals = (d_xi + 1j * d_y) / (2j * np.pi) + y * Z.values
    return ZakField(Z.N, vals)


def _smooth_step(t: np.ndarray) -> np.ndarray:
    """C-infinity transition 0 -> 1 on [0, 1]."""
    t = np.clip(t, 0.0, 1.0)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        a = np.where(t > 0, np.exp(-1.0 / np.maximum(t, 1e-300)), 0.0)
        b = np.where(t < 1, np.exp(-1.0 / np.maximum(1.0 - t, 1e-300)), 0.0)
    return a / (a + b)


def sobolev_norm(Z: ZakField, delta: float) -> float:
    """Discrete smoothness norm of a Zak field.

    The field is extended by its boundary rules to a 2-periodic patch,
    multiplied by a smooth cutoff equal to one on the fundamental square, and
    measured through the Fourier multiplier (1 + |s| + |t|)^{delta/2}.
    """
    N = Z.N
    # patch y, xi in [-1/2, 3/2), midpoints at resolution 1/N
    idx = np.arange(2 * N) - N // 2
    base = idx % N
    wrap = (idx - base) // N  # integer offset: -1, 0 or 1
    y_patch = (idx + 0.5) / N
    xi_patch = y_patch.copy()
    # y-extension: Z(y + a, xi) = exp(-2 pi i a xi) Z(y, xi); xi-extension is periodic
    V = Z.values[np.ix_(base, base)]
    y_factor = np.exp(-2j * np.pi * np.outer(wrap, Z.xi[base]))
    V = V * y_factor
    cut = _smooth_step((y_patch + 3.0 / 8.0) / (3.0 / 8.0)) * _smooth_step((11.0 / 8.0 - y_patch) / (3.0 / 8.0))
    V = V * np.outer(cut, cut)
    spec = np.fft.fft2(V) / (2 * N) ** 2
    s = np.fft.fftfreq(2 * N, d=1.0 / (2 * N)) / 2.0  # physical frequencies, patch period 2
    weight = (1.0 + np.abs(s)[:, None] + np.abs(s)[None, :]) ** delta
    return float(np.sqrt(np.sum(weight * np.abs(spec) ** 2) * 4.0))
