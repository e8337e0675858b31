"""Duality of the mixed space: pairing, extremal witnesses, randomized search.

The norm of (f_j) in the mixed space is attained (up to equivalence
constants) by pairing against the unit ball of the conjugate-exponent mixed
space.  For finite p this package constructs the near-extremal dual sequence
in closed form: with K the norm of (f_j), the level weights beta_j solve
rho_p(f_j / (K beta_j^{1/q(x)})) = 1 and sum to one, and the witness

    h_j = beta_j^{1/q'(x)} (|f_j| / (K beta_j^{1/q(x)}))^{p(x)-1}

pairs with (f_j) to K while sitting in the conjugate unit ball.  For p = inf
the witness is a normalized indicator of the near-argmax set per level.
"""

import logging
import math

import numpy as np

from . import _kernels
from ._solve import solve_threshold
from .grid import Field, integrate, require_same_grid
from .exponents import conjugate
from .lebesgue import luxemburg_norm, _log_abs
from .mixed import FieldSequence, mixed_norm
from .reports import CheckReport

logger = logging.getLogger(__name__)

BETA_FLOOR = 1e-10
BETA_BRACKET_LOW = 1e-12


def pairing(fs, gs):
    """Quadrature of sum_j |f_j| |g_j|; symmetric and nonnegative."""
    if fs.levels != gs.levels:
        raise ValueError("level mismatch")
    require_same_grid(fs.entries[0], gs.entries[0])
    total = 0.0
    for f, g in zip(fs, gs):
        total += integrate(Field(f.grid, np.abs(f.values) * np.abs(g.values)))
    return total


def _solve_beta(log_af, p_flat, rq_flat, log_k, cell, hint):
    def fn(beta):
        return _kernels.scaled_modular(
            log_af, p_flat, rq_flat, log_k, math.log(beta), cell, 4.0
        )

    return solve_threshold(fn, hint, rel_tol=1e-10)


def extremal_witness(fs, p, q):
    """Construct the closed-form dual witness for finite p.

    Returns (hs, K, betas) with K the mixed norm of fs; levels with f_j = 0
    (or beta below the drop floor) get zero witnesses.
    """
    require_same_grid(*fs.entries, p, q)
    if not np.all(np.isfinite(p.values)):
        raise ValueError("extremal witness needs p finite everywhere; "
                         "use infinity_witness for p = inf")
    if not q.is_finite_valued():
        raise ValueError("extremal witness needs q finite-valued")
    if fs.max_abs() == 0.0:
        raise ValueError("witness of the zero sequence is undefined")

    grid = fs.grid
    k_norm = mixed_norm(fs, p, q)
    log_k = math.log(k_norm)
    p_flat = p.values.ravel()
    rq = 1.0 / q.values
    rq_flat = rq.ravel()
    cell = grid.cell

    betas = []
    hs = []
    hint = 1.0 / fs.levels
    for j, f in enumerate(fs):
        if f.max_abs() == 0.0:
            betas.append(0.0)
            hs.append(Field(grid, np.zeros(grid.shape)))
            continue
        log_af = _log_abs(f.values).ravel()
        beta = _solve_beta(log_af, p_flat, rq_flat, log_k, cell, hint)
        if not beta > BETA_FLOOR:
            logger.warning("dropping level %d: beta=%.3e below floor", j, beta)
            betas.append(0.0)
            hs.append(Field(grid, np.zeros(grid.shape)))
            continue
        hint = beta
        betas.append(beta)
        af = np.abs(f.values)
        base = af / (k_norm * beta ** rq)
        h = beta ** (1.0 - rq) * base ** (p.values - 1.0)
        hs.append(Field(grid, h))
    return FieldSequence(tuple(hs)), k_norm, betas


def infinity_witness(fs, q, eps):
    """Near-extremal dual sequence for p = inf.

    Level j keeps the nodes where the rescaled |f_j| comes within the
    level-weighted margin eps / (K 2^{j-1}) of its supremum 1, normalized to
    unit mass; the pairing then reaches at least K - eps * sum_j 2^{-(j-1)}.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    if not q.is_finite_valued():
        raise ValueError("infinity witness needs q finite-valued")
    require_same_grid(*fs.entries, q)
    grid = fs.grid
    zeros = Field(grid, np.zeros(grid.shape))
    if fs.max_abs() == 0.0:
        return FieldSequence(tuple(zeros for _ in fs))

    from .exponents import constant_exponent

    p_inf = constant_exponent(grid, math.inf)
    k_norm = mixed_norm(fs, p_inf, q)
    q_flat = q.values.ravel()
    rq = 1.0 / q.values
    hs = []
    for j, f in enumerate(fs):
        if f.max_abs() == 0.0:
            hs.append(zeros)
            continue
        log_af = _log_abs(f.values).ravel()
        beta = _kernels.esssup_modular(log_af, q_flat, math.log(k_norm))
        if beta <= 0.0:
            hs.append(zeros)
            continue
        scaled = np.abs(f.values) / (k_norm * beta ** rq)
        margin = eps / (k_norm * 2.0 ** (j - 1))
        support = scaled > float(np.max(scaled)) - margin
        measure = float(np.sum(support)) * grid.cell
        h = np.where(support, beta ** (1.0 - rq) / measure, 0.0)
        hs.append(Field(grid, h))
    return FieldSequence(tuple(hs))


def _shaped_candidate(fs, p, rng):
    """Band-limited positive noise shaped by |f_j|^{p-1}; pure white noise
    pairs poorly and makes the randomized lower bound vacuous."""
    grid = fs.grid
    n = grid.points_per_axis
    p_vals = np.where(np.isfinite(p.values), p.values, 4.0)
    out = []
    kmax = max(4, n // 64)
    for f in fs:
        spec = np.zeros(grid.shape, dtype=complex)
        flat = spec.ravel()
        coeff = rng.normal(size=2 * (kmax + 1)).view(np.complex128)
        flat[: kmax + 1] = coeff
        smooth = np.fft.ifftn(spec).real
        smooth -= smooth.min()
        smooth += 0.05 * (smooth.max() - smooth.min() + 1e-30)
        scale = f.max_abs()
        shape = (np.abs(f.values) + 1e-3 * (scale + 1e-30)) ** (p_vals - 1.0)
        out.append(Field(grid, smooth * shape))
    return FieldSequence(tuple(out))


def random_dual_search(fs, p, q, trials, seed):
    """Monte-Carlo lower bound for the duality supremum.

    Samples shaped candidates, rescales each to the conjugate unit ball and
    records the best pairing; the closed-form witness joins the pool whenever
    its preconditions hold.  Deterministic given the seed.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    require_same_grid(*fs.entries, p, q)
    if fs.max_abs() == 0.0:
        return 0.0
    pc = conjugate(p)
    qc = conjugate(q)
    best = 0.0
    if np.all(np.isfinite(p.values)) and q.is_finite_valued():
        hs, _, _ = extremal_witness(fs, p, q)
        best = pairing(fs, hs)
    for trial in range(trials):
        rng = np.random.default_rng([int(seed), trial])
        gs = _shaped_candidate(fs, p, rng)
        norm = mixed_norm(gs, pc, qc)
        if norm == 0.0 or math.isinf(norm):
            continue
        gs_unit = gs.scaled(1.0 / norm)
        best = max(best, pairing(fs, gs_unit))
    return best


def verify_norm_conjugate(f, p, trials, seed):
    """Scalar norm conjugate formula: the best pairing against conjugate
    unit-ball candidates should bracket the Luxemburg norm within a factor 2.
    """
    require_same_grid(f, p)
    norm = luxemburg_norm(f, p)
    if norm == 0.0:
        return CheckReport("duality.norm_conjugate", "trivial", 0.0, 2.0, 1e-6,
                           {"norm": 0.0, "best_pairing": 0.0})
    grid = f.grid
    from .exponents import constant_exponent

    q1 = constant_exponent(grid, 1.0)
    fin = np.isfinite(p.values)
    candidates = []
    if np.all(fin):
        hs, _, _ = extremal_witness(FieldSequence((f,)), p, q1)
        candidates.append(hs[0])
    elif not np.any(fin):
        hs = infinity_witness(FieldSequence((f,)), q1, eps=1e-9 * norm)
        candidates.append(hs[0])
    else:
        # split into the finite-p and infinite-p regions and witness each
        f_fin = Field(grid, np.where(fin, f.values, 0.0))
        f_inf = Field(grid, np.where(fin, 0.0, f.values))
        if f_fin.max_abs() > 0.0:
            hs, _, _ = extremal_witness(FieldSequence((f_fin,)), _masked_finite(p), q1)
            candidates.append(Field(grid, np.where(fin, hs[0].values, 0.0)))
        if f_inf.max_abs() > 0.0:
            hs = infinity_witness(FieldSequence((f_inf,)), q1, eps=1e-9 * norm)
            candidates.append(Field(grid, np.where(fin, 0.0, hs[0].values)))
    pc = conjugate(p)
    best = 0.0
    for g in candidates:
        gn = luxemburg_norm(g, pc)
        if gn > 0.0:
            best = max(best, integrate(Field(grid, np.abs(f.values) * np.abs(g.values) / gn)))
    for trial in range(trials):
        rng = np.random.default_rng([int(seed), trial])
        gs = _shaped_candidate(FieldSequence((f,)), p, rng)
        gn = luxemburg_norm(gs[0], pc)
        if gn > 0.0:
            best = max(best, integrate(Field(grid, np.abs(f.values) * np.abs(gs[0].values) / gn)))
    ratio = best / norm
    ok = 0.5 - 1e-6 <= ratio <= 2.0 + 1e-6
    return CheckReport(
        "duality.norm_conjugate",
        "pass" if ok else "fail",
        measured=ratio,
        bound=2.0,
        tolerance=1e-6,
        details={"norm": norm, "best_pairing": best},
    )


def _masked_finite(p):
    """Copy of p with infinite nodes replaced by a large finite exponent so
    the finite-region witness machinery applies off the masked support."""
    from .exponents import ExponentField

    vals = np.where(np.isfinite(p.values), p.values, np.max(
        p.values[np.isfinite(p.values)], initial=2.0))
    return ExponentField(p.grid, vals)
