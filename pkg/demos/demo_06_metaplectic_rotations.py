"""Metaplectic operators of phase-plane rotations.

The quarter turn is the (scaled) Fourier transform; a general rotation is a
chirp-quadrature kernel.  Atoms move covariantly with the rotation up to a
unimodular constant, the ladder operators intertwine with exp(-i phi), and
the composition law holds up to the representation's sign ambiguity.
"""

import numpy as np

from criticalgabor import (Rotation, atom, commutation_check, covariance_check,
                           hermite_signal, inner, metaplectic_apply)

print("== unitarity across angles ==")
f = hermite_signal(2)
for k in range(0, 12, 2):
    phi = 2 * np.pi * k / 12
    out = metaplectic_apply(Rotation(phi), f)
    print(f"phi = {phi:5.3f}: ||M f|| = {out.norm():.10f}")

print("\n== covariance on atoms ==")
for phi, lam in [(np.pi / 2, (1, 0)), (np.pi / 4, (1, 1)), (np.pi / 3, (0, 1))]:
    res = covariance_check(Rotation(phi), lam)
    S = Rotation(phi)(lam)
    print(f"phi={phi:.3f}, lambda={lam} -> S lambda = ({S.p:+.3f}, {S.theta:+.3f}): "
          f"deviation {res.deviation:.2e}, phase error {res.phase_error:.2e}")

print("\n== ladder intertwining and the two-valued group law ==")
h1 = hermite_signal(1)
print(f"||M a f - exp(-i phi) a M f|| at phi=pi/2: {commutation_check(Rotation(np.pi / 2), h1):.2e}")
twice = metaplectic_apply(Rotation(np.pi / 4), metaplectic_apply(Rotation(np.pi / 4), f))
direct = metaplectic_apply(Rotation(np.pi / 2), f)
c = inner(twice, direct)
print(f"M(pi/4)^2 vs M(pi/2): fitted constant {c:.6f} (a sign, as the representation is two-valued)")

print("\n== decay of a rotated atom matches the moved center ==")
out = metaplectic_apply(Rotation(np.pi / 2), atom((1, 0)))
target = atom((0, 1))
print(f"max | |M e_(1,0)| - |e_(0,1)| | = {np.max(np.abs(np.abs(out.values) - np.abs(target.values))):.2e}")
