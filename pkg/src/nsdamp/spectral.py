"""Fourier representation of periodic velocity fields and the operators acting on them.

Conventions, fixed once for the whole package:

* Fields live on the cube [0, L)^3 sampled at N points per axis. A velocity
  field is stored as three complex coefficient arrays c[k, m1, m2, m3] in
  standard FFT mode order (0, 1, ..., N/2-1, -N/2, ..., -1 per axis), with
  u(x) = sum_m c_m exp(i xi_m . x) and wavenumber xi_m = (2 pi / L) m.
* Real fields keep Hermitian symmetry c(-m) = conj(c(m)).
* Physical-space norms carry the Lebesgue measure of the box, so the discrete
  Parseval identity reads ||u||_L2^2 = L^3 sum_m |c_m|^2. Homogeneous Sobolev
  norms skip m = 0 (the mean carries no |xi|^s weight on the lattice).
* A sharp cutoff radius R <= (2/3) xi_max accompanies every grid; it doubles
  as the dealiasing filter for the quadratic nonlinearity. For grid sizes not
  divisible by 3 (in particular all powers of two) no aliased image of a
  product of two ball-supported modes lands back inside the closed ball, so
  products of truncated fields are alias-free on the retained modes.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.fft as _fft

__all__ = [
    "GridSpec",
    "SpectralField",
    "PhysParams",
    "make_grid",
    "to_physical",
    "to_spectral",
    "leray_project",
    "friedrichs_truncate",
    "remove_mean",
    "sobolev_norm",
    "lp_norm_physical",
    "linf_norm",
    "frequency_split",
    "l2_norm",
    "l2_inner",
    "grad_norm_sq",
    "divergence_error",
    "hermitian_error",
    "zeros_like",
]

#: relative slack on the |xi| <= R comparison so boundary shells are kept
#: regardless of how R was rounded ("closed ball" semantics in floats).
_BALL_TOL = 1e-12


@dataclass(frozen=True)
class GridSpec:
    """Periodic cube discretization with a sharp spectral cutoff.

    Attributes:
        n_modes: samples per axis N (even, >= 4); modes satisfy |m_i| < N/2.
        box_length: side length L of the periodic box.
        cutoff_radius: radius R of the retained closed ball |xi| <= R; must
            not exceed the dealiasing bound (2/3) * (2 pi / L) * (N / 2).
    """

    n_modes: int
    box_length: float
    cutoff_radius: float

    def __post_init__(self) -> None:
        n, length, radius = self.n_modes, self.box_length, self.cutoff_radius
        if not isinstance(n, (int, np.integer)) or n < 4 or n % 2:
            raise ValueError(f"n_modes must be an even integer >= 4, got {n!r}")
        if not length > 0.0:
            raise ValueError(f"box_length must be positive, got {length!r}")
        if not radius > 0.0:
            raise ValueError(f"cutoff_radius must be positive, got {radius!r}")
        bound = (2.0 / 3.0) * (2.0 * np.pi / length) * (n / 2.0)
        if radius > bound * (1.0 + _BALL_TOL):
            raise ValueError(
                f"cutoff_radius {radius:g} exceeds the dealiasing bound "
                f"(2/3)*(2*pi/L)*(N/2) = {bound:g}"
            )

    # Derived arrays are cached on first use; they depend only on the three
    # frozen scalars above, so caching is safe.

    @cached_property
    def mode_numbers(self) -> np.ndarray:
        """Integer mode index along one axis, in FFT order 0..N/2-1, -N/2..-1."""
        return np.rint(np.fft.fftfreq(self.n_modes, d=1.0 / self.n_modes)).astype(np.int64)

    @cached_property
    def wavenumbers(self) -> np.ndarray:
        """xi as an array of shape (3, N, N, N)."""
        k1 = 2.0 * np.pi / self.box_length * self.mode_numbers
        kx, ky, kz = np.meshgrid(k1, k1, k1, indexing="ij")
        return np.stack([kx, ky, kz])

    @cached_property
    def k_sq(self) -> np.ndarray:
        """|xi|^2, shape (N, N, N)."""
        k = self.wavenumbers
        return k[0] ** 2 + k[1] ** 2 + k[2] ** 2

    @cached_property
    def ball_mask(self) -> np.ndarray:
        """Boolean mask of the retained closed ball |xi| <= cutoff_radius."""
        return self.k_sq <= self.cutoff_radius**2 * (1.0 + _BALL_TOL)

    @cached_property
    def low_shell_mask(self) -> np.ndarray:
        """Boolean mask of |xi| < 1 (strict), the low-frequency block."""
        return self.k_sq < 1.0

    @cached_property
    def _k_sq_safe(self) -> np.ndarray:
        """|xi|^2 with the zero mode replaced by 1 (safe divisor)."""
        out = self.k_sq.copy()
        out[0, 0, 0] = 1.0
        return out

    @property
    def shape(self) -> tuple[int, int, int, int]:
        n = self.n_modes
        return (3, n, n, n)

    @property
    def volume(self) -> float:
        return self.box_length**3

    @property
    def cell_volume(self) -> float:
        return (self.box_length / self.n_modes) ** 3

    @property
    def xi_max(self) -> float:
        """Largest wavenumber magnitude of any retained mode (= R)."""
        return self.cutoff_radius


def make_grid(n_modes: int, box_length: float, cutoff_fraction: float = 2.0 / 3.0) -> GridSpec:
    """Build a GridSpec from a cutoff fraction of the axis Nyquist wavenumber.

    cutoff_radius = cutoff_fraction * (2 pi / box_length) * (n_modes / 2).
    The fraction must lie in (0, 2/3]; 2/3 is the dealiasing limit for the
    quadratic term.
    """
    if not 0.0 < cutoff_fraction <= 2.0 / 3.0 + _BALL_TOL:
        raise ValueError(
            f"cutoff_fraction must lie in (0, 2/3], got {cutoff_fraction!r}"
        )
    radius = cutoff_fraction * (2.0 * np.pi / box_length) * (n_modes / 2.0)
    return GridSpec(n_modes=int(n_modes), box_length=float(box_length), cutoff_radius=radius)


@dataclass
class PhysParams:
    """Physical parameters: viscosity nu, damping strength alpha, damping exponent beta.

    The damping force is alpha |u|^(beta-1) u. alpha = 0 degenerates to plain
    Navier-Stokes (used by the heat-limit checks). Uniqueness-type experiments
    additionally need beta > 3 and the decay diagnostics beta >= 10/3; those
    floors are enforced by the experiments themselves.
    """

    nu: float
    alpha: float
    beta: float

    def __post_init__(self) -> None:
        if not self.nu > 0.0:
            raise ValueError(f"nu must be positive, got {self.nu!r}")
        if self.alpha < 0.0:
            raise ValueError(f"alpha must be nonnegative, got {self.alpha!r}")
        if not self.beta > 1.0:
            raise ValueError(f"beta must exceed 1, got {self.beta!r}")


@dataclass
class SpectralField:
    """A three-component velocity field in coefficient space.

    coeffs has shape (3, N, N, N), dtype complex128. The `solenoidal` flag
    records that the field has passed (or was produced by) the Leray
    projection; validate() re-checks it numerically.
    """

    grid: GridSpec
    coeffs: np.ndarray
    solenoidal: bool = False

    def __post_init__(self) -> None:
        if self.coeffs.shape != self.grid.shape:
            raise ValueError(
                f"coefficient array has shape {self.coeffs.shape}, expected {self.grid.shape}"
            )
        if self.coeffs.dtype != np.complex128:
            self.coeffs = self.coeffs.astype(np.complex128)

    def copy(self) -> "SpectralField":
        return SpectralField(self.grid, self.coeffs.copy(), self.solenoidal)

    # -- small arithmetic surface used by the experiments ------------------

    def _check_same_grid(self, other: "SpectralField") -> None:
        if self.grid != other.grid:
            raise ValueError("fields live on different grids")

    def __add__(self, other: "SpectralField") -> "SpectralField":
        self._check_same_grid(other)
        return SpectralField(
            self.grid, self.coeffs + other.coeffs, self.solenoidal and other.solenoidal
        )

    def __sub__(self, other: "SpectralField") -> "SpectralField":
        self._check_same_grid(other)
        return SpectralField(
            self.grid, self.coeffs - other.coeffs, self.solenoidal and other.solenoidal
        )

    def __mul__(self, scalar: float) -> "SpectralField":
        return SpectralField(self.grid, self.coeffs * scalar, self.solenoidal)

    __rmul__ = __mul__

    def __neg__(self) -> "SpectralField":
        return SpectralField(self.grid, -self.coeffs, self.solenoidal)

    def validate(self, tol: float = 1e-12) -> None:
        """Raise ValueError if any structural invariant is violated.

        Checks, all relative to the coefficient scale: Hermitian symmetry,
        support inside the closed cutoff ball, zero mean, and (when flagged)
        solenoidality.
        """
        scale = float(np.max(np.abs(self.coeffs)))
        if scale == 0.0:
            return
        if not np.all(np.isfinite(self.coeffs)):
            raise ValueError("field contains non-finite coefficients")
        herm = hermitian_error(self)
        if herm > tol:
            raise ValueError(f"Hermitian symmetry violated: relative error {herm:.3e}")
        outside = self.coeffs[:, ~self.grid.ball_mask]
        if outside.size and float(np.max(np.abs(outside))) > tol * scale:
            raise ValueError("coefficients outside the cutoff ball are not zero")
        mean = float(np.max(np.abs(self.coeffs[:, 0, 0, 0])))
        if mean > tol * scale:
            raise ValueError(f"mean mode is not zero (|c(0)| = {mean:.3e})")
        if self.solenoidal:
            div = divergence_error(self)
            if div > tol:
                raise ValueError(f"field flagged solenoidal but xi.u error is {div:.3e}")


def zeros_like(grid: GridSpec) -> SpectralField:
    return SpectralField(grid, np.zeros(grid.shape, dtype=np.complex128), solenoidal=True)


# ---------------------------------------------------------------------------
# transforms


def to_physical(f: SpectralField) -> np.ndarray:
    """Collocation samples of the field, shape (3, N, N, N), real.

    Inverse of to_spectral under the unit-amplitude convention: the inverse
    transform is the plain exponential sum. The imaginary residue of a
    Hermitian-symmetric field is roundoff and is dropped.
    """
    u = _fft.ifftn(f.coeffs, axes=(1, 2, 3), norm="forward")
    return np.ascontiguousarray(u.real)


def to_spectral(samples: np.ndarray, grid: GridSpec, solenoidal: bool = False) -> SpectralField:
    """Coefficients of sampled data (forward transform, 1/N^3 normalized).

    No truncation or projection is applied; compose with friedrichs_truncate
    and leray_project to land in the solver's state space.
    """
    samples = np.asarray(samples)
    if samples.shape != grid.shape:
        raise ValueError(f"samples have shape {samples.shape}, expected {grid.shape}")
    coeffs = _fft.fftn(samples, axes=(1, 2, 3), norm="forward")
    return SpectralField(grid, coeffs, solenoidal=solenoidal)


# ---------------------------------------------------------------------------
# Fourier-multiplier operators


def leray_project(f: SpectralField) -> SpectralField:
    """Project onto divergence-free fields: multiply by I - xi xi^T / |xi|^2.

    Acts mode by mode; the zero mode passes through unchanged (the projector
    is the identity there). Idempotent, self-adjoint, and it commutes with
    any other Fourier multiplier, truncation included.
    """
    k = f.grid.wavenumbers
    dot = k[0] * f.coeffs[0] + k[1] * f.coeffs[1] + k[2] * f.coeffs[2]
    dot /= f.grid._k_sq_safe
    out = f.coeffs - k * dot[np.newaxis]
    return SpectralField(f.grid, out, solenoidal=True)


def friedrichs_truncate(f: SpectralField, radius: float | None = None) -> SpectralField:
    """Zero every coefficient with |xi| > radius (closed ball kept).

    radius defaults to the grid's own cutoff_radius. Norm-nonincreasing and
    idempotent; with radius <= (2/3) xi_max it is the dealiasing filter.
    """
    if radius is None:
        radius = f.grid.cutoff_radius
    if radius < 0.0:
        raise ValueError(f"truncation radius must be nonnegative, got {radius!r}")
    mask = f.grid.k_sq <= radius**2 * (1.0 + _BALL_TOL)
    return SpectralField(f.grid, f.coeffs * mask, solenoidal=f.solenoidal)


def remove_mean(f: SpectralField) -> SpectralField:
    """Zero the m = 0 coefficient (velocity frame choice)."""
    out = f.coeffs.copy()
    out[:, 0, 0, 0] = 0.0
    return SpectralField(f.grid, out, solenoidal=f.solenoidal)


# ---------------------------------------------------------------------------
# norms and inner products


def sobolev_norm(f: SpectralField, s: float, homogeneous: bool = True) -> float:
    """Sobolev norm of order s under the package Parseval convention.

    homogeneous: sqrt(L^3 sum_{m != 0} |xi|^(2s) |c|^2). The m = 0 term is
    skipped; for the zero-mean fields the solver works with, s = 0 is the
    L2 norm.
    inhomogeneous: sqrt(L^3 sum_m (1 + |xi|^2)^s |c|^2) (H^s, all modes).
    """
    power = np.abs(f.coeffs) ** 2
    comp_sum = power.sum(axis=0)
    if homogeneous:
        if s == 0.0:
            total = float(comp_sum.sum()) - float(comp_sum[0, 0, 0])
        else:
            nz = f.grid.k_sq > 0.0
            total = float((f.grid.k_sq[nz] ** s * comp_sum[nz]).sum())
    else:
        total = float(((1.0 + f.grid.k_sq) ** s * comp_sum).sum())
    return float(np.sqrt(f.grid.volume * max(total, 0.0)))


def l2_norm(f: SpectralField) -> float:
    """Physical L2 norm, sqrt(L^3 sum |c|^2) (mean mode included)."""
    return float(np.sqrt(f.grid.volume * float((np.abs(f.coeffs) ** 2).sum())))


def l2_inner(f: SpectralField, g: SpectralField) -> float:
    """Real L2 inner product <f, g> = L^3 Re sum conj(c_f) c_g."""
    f._check_same_grid(g)
    return float(f.grid.volume * np.real(np.vdot(f.coeffs, g.coeffs)))


def grad_norm_sq(f: SpectralField) -> float:
    """||grad f||_L2^2 = L^3 sum |xi|^2 |c|^2."""
    power = (np.abs(f.coeffs) ** 2).sum(axis=0)
    return float(f.grid.volume * float((f.grid.k_sq * power).sum()))


def lp_norm_physical(f: SpectralField, p: float) -> float:
    """L^p norm of the pointwise magnitude by collocation quadrature.

    (sum_j |u(x_j)|^p dV)^(1/p) with dV the grid cell volume and |u| the
    Euclidean magnitude of the velocity vector. For p = 2 this matches the
    coefficient norm to roundoff (discrete Parseval).
    """
    if not p >= 1.0:
        raise ValueError(f"p must be >= 1, got {p!r}")
    u = to_physical(f)
    mag_sq = u[0] ** 2 + u[1] ** 2 + u[2] ** 2
    total = float((mag_sq ** (p / 2.0)).sum()) * f.grid.cell_volume
    return float(total ** (1.0 / p))


def linf_norm(f: SpectralField) -> float:
    """Max pointwise Euclidean magnitude on the collocation grid."""
    u = to_physical(f)
    mag_sq = u[0] ** 2 + u[1] ** 2 + u[2] ** 2
    return float(np.sqrt(float(mag_sq.max())))


def frequency_split(f: SpectralField) -> tuple[SpectralField, SpectralField]:
    """Split into (w1, w2): modes with |xi| < 1 and modes with |xi| >= 1.

    The split is exact: w1 + w2 reproduces the field bitwise. On a box with
    L <= 2 pi every nonzero mode has |xi| >= 1 and w1 carries nothing.
    """
    low = f.grid.low_shell_mask
    w1 = SpectralField(f.grid, f.coeffs * low, solenoidal=f.solenoidal)
    w2 = SpectralField(f.grid, f.coeffs * ~low, solenoidal=f.solenoidal)
    return w1, w2


# ---------------------------------------------------------------------------
# diagnostics


def divergence_error(f: SpectralField) -> float:
    """Relative size of xi . u: ||xi.u||_l2 / (xi_max ||u||_l2), 0 for the zero field."""
    k = f.grid.wavenumbers
    div = k[0] * f.coeffs[0] + k[1] * f.coeffs[1] + k[2] * f.coeffs[2]
    denom = f.grid.xi_max * float(np.sqrt((np.abs(f.coeffs) ** 2).sum()))
    if denom == 0.0:
        return 0.0
    return float(np.sqrt((np.abs(div) ** 2).sum()) / denom)


def hermitian_error(f: SpectralField) -> float:
    """Relative deviation from c(-m) = conj(c(m))."""
    c = f.coeffs
    rev = np.roll(c[:, ::-1, ::-1, ::-1], shift=(1, 1, 1), axis=(1, 2, 3))
    scale = float(np.max(np.abs(c)))
    if scale == 0.0:
        return 0.0
    return float(np.max(np.abs(c - np.conj(rev))) / scale)
