"""
Tour of the spectral toolbox
============================

Builds a grid, moves a field between physical samples and Fourier
coefficients, and checks the operator identities the solver leans on.
"""

import numpy as np

from nsdamp import (
    divergence_error,
    friedrichs_truncate,
    l2_norm,
    leray_project,
    make_grid,
    sobolev_norm,
    to_physical,
    to_spectral,
)

# A 32^3 grid on the 2 pi box. Modes outside |xi| <= (2/3) * (2 pi / L) * N/2
# are dead by construction; that single cutoff is also what keeps the
# quadratic term alias-free.
grid = make_grid(32, 2.0 * np.pi)
print(f"grid: {grid.n_modes}^3 modes, box {grid.box_length:.4f}, "
      f"cutoff radius {grid.cutoff_radius:.4f}")
print(f"active modes per component: {int(grid.ball_mask.sum())} of {grid.n_modes ** 3}")

# Round-trip a smooth velocity field through the transforms. Collocation
# points are the uniform lattice j * L / N along each axis.
pts = np.arange(grid.n_modes) * grid.box_length / grid.n_modes
x, y, z = np.meshgrid(pts, pts, pts, indexing="ij")
samples = np.stack([
    np.sin(x) * np.cos(y),
    -np.cos(x) * np.sin(y),
    0.3 * np.sin(2 * z),
])
u = to_spectral(samples, grid)
back = to_physical(u)
print(f"transform round-trip error: {np.abs(back - samples).max():.3e}")

# Parseval: the L2 norm computed from coefficients matches the quadrature
# of the samples.
quad = np.sqrt(np.sum(samples**2) * grid.cell_volume)
print(f"Parseval check: {l2_norm(u):.12f} vs quadrature {quad:.12f}")

# Leray projection removes the gradient part and is idempotent.
p = leray_project(u)
pp = leray_project(p)
print(f"divergence before projection: {divergence_error(u):.3e}")
print(f"divergence after projection:  {divergence_error(p):.3e}")
print(f"idempotence defect: {np.abs(pp.coeffs - p.coeffs).max():.3e}")

# Projection and the frequency cutoff commute, so the order never matters.
a = friedrichs_truncate(leray_project(u))
b = leray_project(friedrichs_truncate(u))
print(f"commutation defect: {np.abs(a.coeffs - b.coeffs).max():.3e}")

# Sobolev norms are diagonal in this basis; s = 0 recovers L2 and negative
# s weights the large scales that drive the long-time diagnostics.
print(f"H^1  norm: {sobolev_norm(p, 1):.6f}")
print(f"L^2  norm: {sobolev_norm(p, 0):.6f}")
print(f"H^-2 norm: {sobolev_norm(p, -2):.6f}")
