"""Dyadic filter bank, Besov norms with variable indices, eta-kernel and
Hardy-type inequality checks.

The resolution of unity lives on the integer FFT mode lattice: the base
profile equals 1 up to |k| = 1 and vanishes beyond |k| = 2, and level j
rescales it by 2^{-j}.  Summing levels 0..J telescopes to 1 on |k| <= 2^J
exactly, so band-limited inputs are decomposed with zero truncation error.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .exponents import local_log_holder
from .grid import Field, eta_kernel, convolve, integrate, require_same_grid
from .lebesgue import luxemburg_norm
from .mixed import FieldSequence, mixed_norm
from .reports import CheckReport, graded_report


def smooth_step(t):
    """C-infinity cutoff: 1 for t <= 1, 0 for t >= 2, exp(-1/t)-blended
    between (the plateau values are exact floats)."""
    t = np.asarray(t, dtype=np.float64)
    out = np.zeros(t.shape)
    out[t <= 1.0] = 1.0
    mid = (t > 1.0) & (t < 2.0)
    bm = np.exp(-1.0 / (2.0 - t[mid]))
    bp = np.exp(-1.0 / (t[mid] - 1.0))
    out[mid] = bm / (bm + bp)
    return out


@dataclass(frozen=True)
class ResolutionOfUnity:
    """Fourier-side multipliers of the dyadic decomposition, levels 0..J."""

    grid: object
    multipliers: tuple = field(repr=False)

    @property
    def levels(self):
        return len(self.multipliers)

    @property
    def top_level(self):
        return len(self.multipliers) - 1


def build_resolution(grid, top_level):
    """Build the smooth dyadic resolution of unity up to level J = top_level.

    Requires 2^(J+1) at or below the grid Nyquist index so every multiplier
    support is representable.
    """
    if top_level < 0:
        raise ValueError("top_level must be nonnegative")
    if 2 ** (top_level + 1) > grid.nyquist_index:
        raise ValueError(
            f"level {top_level} needs modes up to {2 ** (top_level + 1)}, "
            f"grid Nyquist index is {grid.nyquist_index}"
        )
    kmag = grid.mode_magnitude()
    mults = [smooth_step(kmag)]
    for j in range(1, top_level + 1):
        mults.append(smooth_step(kmag / 2.0 ** j) - smooth_step(kmag / 2.0 ** (j - 1)))
    return ResolutionOfUnity(grid, tuple(mults))


def lp_block(f, rou, j):
    """Frequency-localized piece of f at scale 2^j (inverse transform of
    multiplier j times the spectrum)."""
    if not 0 <= j < rou.levels:
        raise ValueError(f"block index {j} out of range 0..{rou.top_level}")
    require_same_grid(f, rou)
    spec = np.fft.fftn(f.values)
    return Field(f.grid, np.fft.ifftn(rou.multipliers[j] * spec).real)


def block_sequence(f, rou):
    return FieldSequence(tuple(lp_block(f, rou, j) for j in range(rou.levels)))


def besov_norm(f, s, p, q, rou):
    """Mixed norm of the weighted block sequence (2^{j s(x)} block_j(x))_j.

    Inputs should be band-limited below 2^J; beyond that the dyadic tail is
    truncated without a quantified error.
    """
    require_same_grid(f, s, p, q, rou)
    if not s.is_finite_valued():
        raise ValueError("smoothness exponent must be finite-valued")
    weighted = []
    for j in range(rou.levels):
        block = lp_block(f, rou, j)
        weighted.append(Field(f.grid, np.exp2(j * s.values) * block.values))
    return mixed_norm(FieldSequence(tuple(weighted)), p, q)


def _anchors_for_pairs(grid):
    n = grid.node_count
    if grid.dim == 1 and grid.points_per_axis <= 1024:
        return np.arange(n, dtype=np.int64)
    stride = max(1, n // 256)
    return np.arange(0, n, stride, dtype=np.int64)


def check_lemma_eta_shift(alpha, big_r, m, top_level):
    """Smallest constant c with 2^{j a(x)} eta_{j,m+R}(x-y) <= c 2^{j a(y)}
    eta_{j,m}(x-y) over sampled (x, y, j) triples.

    The kernel order m cancels in the two-sided ratio, so the measured c
    depends only on alpha, R and the levels.  Requires R at or above the
    measured local log-Holder constant of alpha; reports the per-level
    constants and their spread.
    """
    if m <= 0:
        raise ValueError("kernel order m must be positive")
    if not alpha.is_finite_valued():
        raise ValueError("alpha must be finite-valued")
    grid = alpha.grid
    c_loc = local_log_holder(alpha.values, grid)
    if big_r < c_loc - 1e-12:
        raise ValueError(
            f"R={big_r} below the measured local log-Holder constant {c_loc:.6g}"
        )
    anchors = _anchors_for_pairs(grid)
    curve = _kernels.eta_shift_curve(
        alpha.values.ravel(), grid.flat_coordinates(), anchors,
        2.0 * grid.half_width, float(big_r), top_level + 1,
    )
    c_min = float(np.min(curve))
    c_max = float(np.max(curve))
    spread = c_max / c_min if c_min > 0 else math.inf
    ok = math.isfinite(c_max) and spread <= 2.0
    return CheckReport(
        check_id="lp.eta_shift",
        status="pass" if ok else "fail",
        measured=c_max,
        bound=math.inf,
        tolerance=0.0,
        details={"per_level": curve.tolist(), "spread": spread, "c_loc": c_loc},
    )


def verify_eta_convolution(f, p, m, top_level, c_report=None, trend_bound=4.0):
    """Per-level ratios |eta_{j,m} * f|_p / |f|_p.

    The discrete kernel masses h^n sum(eta_{j,m}) bound the constant-exponent
    case by Young's inequality; the default budget c_report doubles the
    largest mass to leave headroom for log-Holder variable exponents.  Also
    asserts the ratios show no growth trend in j.
    """
    grid = f.grid
    if m <= grid.dim:
        raise ValueError(f"kernel order m must exceed the dimension {grid.dim}")
    base = luxemburg_norm(f, p)
    kernels = [eta_kernel(j, m, grid) for j in range(top_level + 1)]
    masses = [integrate(k) for k in kernels]
    if c_report is None:
        c_report = 2.0 * max(masses)
    if base == 0.0:
        return CheckReport(
            "lp.eta_convolution", "trivial", 0.0, c_report, 1e-6,
            {"ratios": [0.0] * (top_level + 1), "masses": masses},
        )
    ratios = []
    for k in kernels:
        ratios.append(luxemburg_norm(convolve(k, f), p) / base)
    r_max, r_min = max(ratios), min(ratios)
    trend = r_max / r_min if r_min > 0 else math.inf
    ok = r_max <= c_report + 1e-6 and trend <= trend_bound
    return CheckReport(
        "lp.eta_convolution",
        "pass" if ok else "fail",
        measured=r_max,
        bound=c_report,
        tolerance=1e-6,
        details={"ratios": ratios, "masses": masses, "trend": trend,
                 "trend_bound": trend_bound},
    )


def verify_mixed_eta(fs, p, q, m, c_report=None):
    """Mixed-norm ratio |(eta_{j,m} * f_j)_j| / |(f_j)_j|.

    Requires m > n + c_loc(1/q), the variable-q admissibility margin.
    """
    grid = fs.grid
    rq = q.reciprocals()
    c_loc_rq = local_log_holder(rq, grid)
    if m <= grid.dim + c_loc_rq:
        raise ValueError(
            f"kernel order m={m} must exceed n + c_loc(1/q) = "
            f"{grid.dim + c_loc_rq:.6g}"
        )
    kernels = [eta_kernel(j, m, grid) for j in range(fs.levels)]
    masses = [integrate(k) for k in kernels]
    if c_report is None:
        c_report = 2.0 * max(masses)
    base = mixed_norm(fs, p, q)
    if base == 0.0:
        return CheckReport("lp.mixed_eta", "trivial", 0.0, c_report, 1e-6,
                           {"ratio": 0.0, "c_loc_rq": c_loc_rq})
    smoothed = FieldSequence(
        tuple(convolve(k, f) for k, f in zip(kernels, fs))
    )
    ratio = mixed_norm(smoothed, p, q) / base
    return graded_report(
        "lp.mixed_eta", ratio, c_report, 1e-6,
        details={"ratio": ratio, "c_loc_rq": c_loc_rq, "masses": masses},
    )


def hardy_transform(gs, a):
    """Geometric-weight transforms over the truncated level range:
    G_j = sum_{m >= j} a^{m-j} g_m and H_j = sum_{m <= j} a^{j-m} g_m."""
    if not 0.0 < a < 1.0:
        raise ValueError("a must lie in (0, 1)")
    grid = gs.grid
    big_g = []
    big_h = []
    for j in range(gs.levels):
        acc_g = np.zeros(grid.shape)
        acc_h = np.zeros(grid.shape)
        for m_idx in range(gs.levels):
            if m_idx >= j:
                acc_g += a ** (m_idx - j) * gs[m_idx].values
            if m_idx <= j:
                acc_h += a ** (j - m_idx) * gs[m_idx].values
        big_g.append(Field(grid, acc_g))
        big_h.append(Field(grid, acc_h))
    return FieldSequence(tuple(big_g)), FieldSequence(tuple(big_h))


def hardy_bound(a, q_minus, gamma_grid=None):
    """min over the gamma grid of 1/c(gamma) with
    c = (1-a^gamma)^{1/q^-} (1-a^{1-gamma/q^-}), gamma in (0, q^-)."""
    if gamma_grid is None:
        gamma_grid = q_minus * np.linspace(0.05, 0.95, 19)
    gamma_grid = np.asarray(gamma_grid, dtype=np.float64)
    if np.any(gamma_grid <= 0.0) or np.any(gamma_grid >= q_minus):
        raise ValueError("gamma grid must lie strictly inside (0, q^-)")
    c = (1.0 - a ** gamma_grid) ** (1.0 / q_minus) \
        * (1.0 - a ** (1.0 - gamma_grid / q_minus))
    return float(np.min(1.0 / c))


def verify_hardy(gs, a, p, q, gamma_grid=None, tolerance=1e-6):
    """Both transform ratios against the explicit admissible constant.

    Checks |(G_j)| / |(g_m)| and |(H_j)| / |(g_m)| against
    min_gamma (1-a^gamma)^{-1/q^-} (1-a^{1-gamma/q^-})^{-1}.
    """
    if not 0.0 < a < 1.0:
        raise ValueError("a must lie in (0, 1)")
    bound = hardy_bound(a, q.p_minus, gamma_grid)
    base = mixed_norm(gs, p, q)
    if base == 0.0:
        return CheckReport("lp.hardy", "trivial", 0.0, bound, tolerance,
                           {"ratio_G": 0.0, "ratio_H": 0.0, "a": a})
    big_g, big_h = hardy_transform(gs, a)
    r_g = mixed_norm(big_g, p, q) / base
    r_h = mixed_norm(big_h, p, q) / base
    return graded_report(
        "lp.hardy", max(r_g, r_h), bound, tolerance,
        details={"ratio_G": r_g, "ratio_H": r_h, "a": a, "q_minus": q.p_minus},
    )
