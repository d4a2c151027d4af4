"""Theta function and the Zak transform.

Shows the quasi-periodic structure on the unit square: the Zak transform of
the Gaussian atom is exp(-pi y^2) Theta(xi + i y), the theta factor has its
single zero at the cell midpoint, and the transform is unitary and exactly
invertible on the midpoint grid.
"""

import numpy as np

from criticalgabor import (atom, hermite_signal, theta, zak, zak_atom_field,
                           zak_inverse, wh_shift, zak_translate_check)

print("== theta on the unit square ==")
print(f"Theta(0)        = {theta(0.0):.12f}")
print(f"|Theta(1/2+i/2)| = {abs(theta(0.5 + 0.5j)):.3e}   (the only zero in the square)")
z = 0.3 + 0.4j
lhs, rhs = theta(z + 1j), np.exp(np.pi - 2j * np.pi * z) * theta(z)
print(f"vertical quasi-periodicity residual at z=0.3+0.4i: {abs(lhs - rhs):.3e}")

print("\n== Zak transform of the Gaussian ==")
e0 = atom((0, 0))
Z = zak(e0)
ref = zak_atom_field((0, 0), Z.N)
print(f"grid N = {Z.N} (midpoints, so the theta zero is never a node)")
print(f"max |Z(e0) - exp(-pi y^2) Theta(xi+iy)| = {np.max(np.abs(Z.values - ref.values)):.3e}")
print(f"unitarity: ||Z e0||_Q / ||e0|| = {Z.norm() / e0.norm():.12f}")

print("\n== inversion and lattice covariance ==")
h3 = hermite_signal(3)
back = zak_inverse(zak(h3), h3.T, h3.h)
print(f"round trip on h3: relative error {(back - h3).norm() / h3.norm():.3e}")
for lam in [(1, 0), (0, 1)]:
    dev = zak_translate_check(lam, h3)
    print(f"Z(T_{lam} f) vs exp(2 pi i (p xi + theta y)) Zf: max dev {dev:.3e}")

shifted = wh_shift((2, 1), e0)
print(f"Weyl-Heisenberg shift preserves the norm: {shifted.norm():.12f}")
