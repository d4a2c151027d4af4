"""Gaussian atoms and the Gabor transform.

Builds a few coherent states, checks their closed-form overlaps against grid
quadrature, runs the Gabor transform of a Hermite function, and verifies the
Parseval identity on the phase-plane grid.
"""

import numpy as np

from criticalgabor import (atom, atom_inner, field_synthesis, gabor_transform,
                           hermite_signal, inner)

print("== atoms ==")
e0 = atom((0, 0))
e1 = atom((1, 0))
print(f"||e_(0,0)|| = {e0.norm():.12f}   (unit by construction)")
print(f"<e_(1,0)|e_(0,0)>  quadrature = {inner(e1, e0):.12f}")
print(f"                  closed form = {atom_inner((1, 0), (0, 0)):.12f}")
print(f"                  exp(-pi/2)  = {np.exp(-np.pi / 2):.12f}")

print("\n== Gabor transform of the second Hermite function ==")
f = hermite_signal(2)
field = gabor_transform(f, box=8.0, dlam=1 / 16)
print(f"phase grid: {field.values.shape[0]} x {field.values.shape[1]} points, spacing 1/16")
print(f"Parseval ratio sum|V|^2 dlam^2 / ||f||^2 = {field.mass() / f.norm() ** 2:.9f}")

peak = np.unravel_index(np.argmax(np.abs(field.values)), field.values.shape)
print(f"|V| peaks at lambda = ({field.p_grid[peak[0]]:+.3f}, {field.theta_grid[peak[1]]:+.3f})"
      f" with value {np.abs(field.values[peak]):.4f}")

print("\n== weak reconstruction from the transform ==")
rec = field_synthesis(field, f.T, f.h)
print(f"|| f - int V(lambda) e_lambda dlambda || / ||f|| = {(rec - f).norm() / f.norm():.2e}")

field.to_csv("gabor_field_h2.csv")
print("\nwrote gabor_field_h2.csv (p, theta, re, im)")
