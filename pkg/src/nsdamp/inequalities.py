"""Standalone oracles for the pointwise and algebraic inequalities.

Each oracle evaluates an inequality gap (the side that should win minus the
other side) directly, independent of the solver, so a nonnegative gap over a
large adversarial sample certifies the estimate the solver's analysis leans
on.  The random suites use heavy-tailed magnitudes on purpose: the worst
roundoff in these estimates lives at the near-degenerate corners x ~ y and
|x| >> |y|, not at typical Gaussian samples.

``verify_suite`` bundles the suites into one pass/fail table for the CLI.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.fft as _fft

from .initial_conditions import random_solenoidal
from .spectral import (
    GridSpec,
    SpectralField,
    friedrichs_truncate,
    make_grid,
    remove_mean,
    sobolev_norm,
    to_physical,
    to_spectral,
)

__all__ = [
    "monotonicity_gap",
    "young_gap",
    "gronwall_constant",
    "interpolation_gap",
    "product_law_ratio",
    "OracleRow",
    "monotonicity_suite",
    "young_suite",
    "gronwall_suite",
    "interpolation_suite",
    "product_law_suite",
    "verify_suite",
]

_MAG_CAP = 100.0  # vector-component cap: keeps |x|^(beta+2) in double range
_TS_CAP = 1e3  # cap for the a^p / b^q values in the Young sampler


def monotonicity_gap(x, y, beta):
    """Gap of the vector monotonicity estimate behind the damping term.

    For the damping nonlinearity, <|x|^b x - |y|^b y, x - y> is bounded below
    by (|x|^b + |y|^b) |x - y|^2 / 2.  Expanding both sides, every cross term
    <x, y> cancels identically and the difference factorizes as

        gap = (|x|^b - |y|^b)(|x|^2 - |y|^2) / 2,

    which is how it is evaluated here: the two factors share a sign, so the
    subtraction never suffers the catastrophic cancellation the raw
    inner-product form hits when x ~ y.  (The tests cross-check this
    rearrangement against the raw form at moderate magnitudes.)

    Accepts single vectors or (n, d) batches; beta may be a scalar or an
    n-vector. Returns float for single vectors, an array for batches.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    beta_arr = np.asarray(beta, dtype=float)
    if np.any(beta_arr <= 0.0):
        raise ValueError(f"beta must be positive, got {beta!r}")
    a_sq = (x * x).sum(axis=-1)
    b_sq = (y * y).sum(axis=-1)
    a = np.sqrt(a_sq)
    b = np.sqrt(b_sq)
    gap = 0.5 * (a**beta_arr - b**beta_arr) * (a_sq - b_sq)
    if gap.ndim == 0:
        return float(gap)
    return gap


def young_gap(a, b, p, q):
    """Gap of the two-term convexity bound: a^p / p + b^q / q - a b.

    p and q must be conjugate (1/p + 1/q = 1 within 1e-12) and larger than 1;
    a and b nonnegative.  Scalar or elementwise on arrays.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if np.any(a < 0.0) or np.any(b < 0.0):
        raise ValueError("a and b must be nonnegative")
    if np.any(p <= 1.0) or np.any(q <= 1.0):
        raise ValueError(f"exponents must exceed 1, got p = {p!r}, q = {q!r}")
    defect = np.abs(1.0 / p + 1.0 / q - 1.0)
    if np.any(defect > 1e-12):
        raise ValueError(
            f"exponents are not conjugate: |1/p + 1/q - 1| = {float(np.max(defect)):.3e}"
        )
    gap = a**p / p + b**q / q - a * b
    if gap.ndim == 0:
        return float(gap)
    return gap


def gronwall_constant(alpha, beta):
    """Growth constant (2/alpha)^(2/(beta-3)) / 2 in the twin-solution bound.

    Defined only for beta > 3: at beta = 3 the exponent blows up, which is
    exactly where the uniqueness argument loses its absorption step.
    Broadcasts over array inputs.
    """
    alpha_arr = np.asarray(alpha, dtype=float)
    beta_arr = np.asarray(beta, dtype=float)
    if np.any(beta_arr <= 3.0):
        raise ValueError(f"growth constant requires beta > 3, got beta = {beta!r}")
    if np.any(alpha_arr <= 0.0):
        raise ValueError(f"growth constant requires alpha > 0, got alpha = {alpha!r}")
    value = 0.5 * (2.0 / alpha_arr) ** (2.0 / (beta_arr - 3.0))
    if value.ndim == 0:
        return float(value)
    return value


def _require_zero_mean(f: SpectralField, what: str) -> None:
    mean_mag = float(np.abs(f.coeffs[:, 0, 0, 0]).max())
    scale = float(np.abs(f.coeffs).max())
    if mean_mag > 1e-12 * max(scale, 1.0):
        raise ValueError(f"{what} requires a zero-mean field")


def interpolation_gap(f: SpectralField) -> float:
    """Slack in the fractional interpolation bound used for the decay rate.

    Returns rhs - lhs for

        ||f||_(s = 3/5, homogeneous)  <=  ||f||_L2^(2/5) ||grad f||_L2^(3/5),

    nonnegative up to roundoff (it is a two-weight Holder bound on the
    spectral sums, with equality exactly on a single shell).  Zero field
    returns 0 by convention.
    """
    _require_zero_mean(f, "interpolation gap")
    l2 = sobolev_norm(f, 0.0)
    if l2 == 0.0:
        return 0.0
    lhs = sobolev_norm(f, 0.6)
    rhs = l2 ** 0.4 * sobolev_norm(f, 1.0) ** 0.6
    return rhs - lhs


def product_law_ratio(f: SpectralField, g: SpectralField) -> float:
    """Empirical constant in the product bound ||fg|| <= C ||f|| ||g||.

    Measures ||f (x) g||_(s = -1/2, homogeneous) / (||f||_L2 ||grad g||_L2)
    with f (x) g the full 3 x 3 tensor of pointwise component products,
    computed on the collocation grid and transformed back (so the ratio is a
    fixed-resolution diagnostic, aliasing included).  The constant is not
    asserted anywhere -- the suites only report that the ratio stays bounded
    across a random family.
    """
    f._check_same_grid(g)
    _require_zero_mean(f, "product-law ratio")
    _require_zero_mean(g, "product-law ratio")
    den = sobolev_norm(f, 0.0) * sobolev_norm(g, 1.0)
    if den < 1e-300:
        raise ValueError("zero denominator: both fields must be nonzero")

    fp = to_physical(f)
    gp = to_physical(g)
    prods = fp[:, None, :, :, :] * gp[None, :, :, :, :]
    c = _fft.fftn(prods.reshape(9, *f.grid.shape[1:]), axes=(-3, -2, -1), norm="forward")
    k_sq = f.grid.k_sq
    nz = k_sq > 0.0
    weight = np.zeros_like(k_sq)
    weight[nz] = k_sq[nz] ** -0.5
    num_sq = f.grid.volume * float((weight * (np.abs(c) ** 2).sum(axis=0)).sum())
    return float(np.sqrt(max(num_sq, 0.0)) / den)


# ---------------------------------------------------------------------------
# sampling suites


@dataclass(frozen=True)
class OracleRow:
    """One row of the verification table: worst observed gap vs its floor."""

    name: str
    samples: int
    worst: float
    threshold: float
    passed: bool
    note: str = ""


def _heavy_magnitudes(rng: np.random.Generator, shape, cap: float) -> np.ndarray:
    """Mixture of |normal| and capped inverse-uniform magnitudes."""
    normal = np.abs(rng.standard_normal(shape))
    inverse = 1.0 / rng.uniform(1e-8, 1.0, shape)
    pick = rng.random(shape) < 0.5
    return np.minimum(np.where(pick, normal, inverse), cap)


def _heavy_vectors(rng: np.random.Generator, n: int, width: int) -> np.ndarray:
    signs = rng.integers(0, 2, size=(n, width)) * 2 - 1
    return signs * _heavy_magnitudes(rng, (n, width), _MAG_CAP)


def monotonicity_suite(n_samples: int = 100_000, seed: int = 0) -> OracleRow:
    """Worst monotonicity gap over heavy-tailed vectors in d = 1, 2, 3, 8.

    Random dimensions are realized by zeroing trailing components of
    width-8 vectors; the degenerate corners x = y, y = 0, y = -x, and
    y = permuted x (equal norms, distinct vectors) are forced explicitly
    rather than left to chance.
    """
    rng = np.random.default_rng(seed)
    x = _heavy_vectors(rng, n_samples, 8)
    y = _heavy_vectors(rng, n_samples, 8)
    dims = rng.choice([1, 2, 3, 8], size=n_samples)
    mask = np.arange(8)[None, :] < dims[:, None]
    x *= mask
    y *= mask
    beta = rng.uniform(0.5, 6.0, n_samples)

    edge = max(1, n_samples // 100)
    y[:edge] = x[:edge]  # x = y
    y[edge : 2 * edge] = 0.0  # y = 0
    y[2 * edge : 3 * edge] = -x[2 * edge : 3 * edge]  # antipodal, |x| = |y|
    y[3 * edge : 4 * edge] = x[3 * edge : 4 * edge][:, ::-1]  # permuted, |x| = |y|

    gaps = monotonicity_gap(x, y, beta)
    worst = float(gaps.min())
    return OracleRow(
        name="monotonicity",
        samples=n_samples,
        worst=worst,
        threshold=-1e-12,
        passed=worst >= -1e-12,
    )


def young_suite(n_samples: int = 100_000, seed: int = 0) -> OracleRow:
    """Worst Young gap over conjugate exponents, sampled in (a^p, b^q) space.

    Sampling t = a^p and s = b^q (capped) instead of a and b keeps both
    power evaluations in range even as q -> infinity, which the damping
    family q = (beta - 1)/(beta - 3) reaches as beta -> 3.  Half the samples
    use that family with beta in (3, 8]; the rest are generic conjugate
    pairs.  Equality rows (t = s) and zero rows are forced explicitly.
    """
    rng = np.random.default_rng(seed)
    half = n_samples // 2

    p_gen = 1.0 + np.minimum(np.maximum(_heavy_magnitudes(rng, half, 64.0), 1e-6), 63.0)
    # log-uniform approach to beta = 3 (where q blows up), floored so p > 1 in float
    beta = 3.0 + 5.0 * 10.0 ** (-6.0 * rng.uniform(0.0, 1.0, n_samples - half))
    p_damp = (beta - 1.0) / 2.0
    p = np.concatenate([p_gen, p_damp])
    q = np.empty_like(p)
    q[:half] = p_gen / (p_gen - 1.0)
    q[half:] = (beta - 1.0) / (beta - 3.0)

    t = _heavy_magnitudes(rng, n_samples, _TS_CAP)
    s = _heavy_magnitudes(rng, n_samples, _TS_CAP)
    edge = max(1, n_samples // 100)
    s[:edge] = t[:edge]  # a^p = b^q: the equality case of the bound
    t[edge : 2 * edge] = 0.0
    s[2 * edge : 3 * edge] = 0.0
    a = t ** (1.0 / p)
    b = s ** (1.0 / q)

    gaps = young_gap(a, b, p, q)
    worst = float(gaps.min())
    return OracleRow(
        name="young",
        samples=n_samples,
        worst=worst,
        threshold=-1e-12,
        passed=worst >= -1e-12,
    )


def gronwall_suite(n_alpha: int = 32, n_beta: int = 32) -> OracleRow:
    """Monotonicity of the growth constant on a parameter grid.

    Strictly decreasing in alpha everywhere, and strictly decreasing in beta
    wherever alpha < 2 (the base 2/alpha exceeds 1 there).  The worst margin
    is the smallest decrease between neighbours; it must stay positive.
    """
    alphas = np.linspace(0.1, 4.0, n_alpha)
    betas = np.linspace(3.05, 8.0, n_beta)
    grid = gronwall_constant(alphas[:, None], betas[None, :])
    margin_alpha = float((grid[:-1, :] - grid[1:, :]).min())
    below_two = alphas < 2.0
    margin_beta = float((grid[below_two, :-1] - grid[below_two, 1:]).min())
    worst = min(margin_alpha, margin_beta)
    return OracleRow(
        name="gronwall-monotone",
        samples=n_alpha * n_beta,
        worst=worst,
        threshold=0.0,
        passed=worst > 0.0,
        note=f"min decrease along alpha {margin_alpha:.3e}, along beta {margin_beta:.3e}",
    )


def _random_band_limited(grid: GridSpec, rng: np.random.Generator, solenoidal: bool) -> SpectralField:
    if solenoidal:
        return random_solenoidal(grid, seed=int(rng.integers(2**31)), amplitude=float(rng.uniform(0.1, 10.0)))
    samples = rng.standard_normal((3,) + grid.shape[1:])
    f = friedrichs_truncate(to_spectral(samples, grid))
    return remove_mean(f) * float(rng.uniform(0.1, 10.0))


def interpolation_suite(n_fields: int = 1000, seed: int = 0) -> OracleRow:
    """Relative interpolation gap over random band-limited fields.

    Mixes solenoidal and unprojected fields on 8^3 and 16^3 grids, plus a
    single-shell field where the bound is an equality.  The gap is measured
    relative to the right-hand side; the floor is -1e-10.
    """
    rng = np.random.default_rng(seed)
    grids = [make_grid(8, 2.0 * np.pi), make_grid(16, 4.0 * np.pi)]
    worst = np.inf
    for i in range(n_fields):
        grid = grids[i % 2]
        f = _random_band_limited(grid, rng, solenoidal=(i % 4 < 2))
        rhs = sobolev_norm(f, 0.0) ** 0.4 * sobolev_norm(f, 1.0) ** 0.6
        if rhs == 0.0:
            continue
        worst = min(worst, interpolation_gap(f) / rhs)

    # single-shell equality case: cos(x) in the y component
    grid = grids[0]
    c = np.zeros(grid.shape, dtype=np.complex128)
    c[1, 1, 0, 0] = 0.5
    c[1, -1, 0, 0] = 0.5
    shell = SpectralField(grid, c)
    rhs = sobolev_norm(shell, 0.0) ** 0.4 * sobolev_norm(shell, 1.0) ** 0.6
    worst = min(worst, interpolation_gap(shell) / rhs)

    return OracleRow(
        name="interpolation",
        samples=n_fields + 1,
        worst=float(worst),
        threshold=-1e-10,
        passed=worst >= -1e-10,
        note="gap relative to the product side",
    )


def product_law_suite(n_pairs: int = 200, seed: int = 0) -> OracleRow:
    """Spread of the product-law ratio across random pairs at fixed resolution.

    No universal constant is asserted -- the pass condition is only that the
    ratio stays finite and positive; the observed maximum is reported so
    regressions in the product computation are visible.
    """
    rng = np.random.default_rng(seed)
    grid = make_grid(16, 2.0 * np.pi)
    ratios = []
    for i in range(n_pairs):
        f = _random_band_limited(grid, rng, solenoidal=(i % 2 == 0))
        g = _random_band_limited(grid, rng, solenoidal=(i % 2 == 1))
        ratios.append(product_law_ratio(f, g))
    arr = np.asarray(ratios)
    finite = bool(np.isfinite(arr).all()) and bool((arr > 0.0).all())
    return OracleRow(
        name="product-law",
        samples=n_pairs,
        worst=float(arr.max()),
        threshold=np.inf,
        passed=finite,
        note=f"ratio range [{arr.min():.4f}, {arr.max():.4f}] (diagnostic, no asserted constant)",
    )


def verify_suite(seed: int = 0, fast: bool = False) -> list[OracleRow]:
    """All oracle suites in table order; fast mode trims the sample counts."""
    scale = 10 if fast else 1
    return [
        monotonicity_suite(100_000 // scale, seed=seed),
        young_suite(100_000 // scale, seed=seed),
        gronwall_suite(),
        interpolation_suite(1000 // scale, seed=seed),
        product_law_suite(200 // scale, seed=seed),
    ]
