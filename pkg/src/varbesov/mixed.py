"""Mixed Lebesgue-sequence space: modular, norm, Holder, monotone limits.

The modular of a sequence (f_j) is the sum over levels of the per-level
infimum inf{lam_j > 0 : rho_p(f_j / lam_j^{1/q(x)}) <= 1}, with the
convention lam^{1/inf} = 1 (q = inf nodes are lambda-independent).  The norm
is the gauge of that modular in the scale parameter mu.  Both inversions are
monotone threshold solves; the norm solve keeps warm per-level hints so the
nested iteration stays cheap.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from ._solve import solve_threshold
from .grid import Field, require_same_grid
from .lebesgue import luxemburg_norm, _log_abs
from .reports import CheckReport, graded_report

NORM_REL_TOL = 1e-9
INNER_REL_TOL = 1e-10

#: Asserted constant for the generalized Holder inequalities.  The scalar
#: variable-exponent Holder constant is 2; two nested applications plus the
#: max(lambda_j, beta_j) splitting give at most 8.  Observed maxima are
#: reported so the assertion can be tightened later.
C_HOLDER = 8.0


@dataclass(frozen=True)
class FieldSequence:
    """Finite dyadic-indexed list of fields (f_j), j = 0..J, on one grid."""

    entries: tuple

    def __post_init__(self):
        entries = tuple(self.entries)
        if not entries:
            raise ValueError("sequence needs at least one level")
        require_same_grid(*entries)
        object.__setattr__(self, "entries", entries)

    @property
    def levels(self):
        return len(self.entries)

    @property
    def grid(self):
        return self.entries[0].grid

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, j):
        return self.entries[j]

    def max_abs(self):
        return max(f.max_abs() for f in self.entries)

    def scaled(self, c):
        return FieldSequence(tuple(Field(self.grid, c * f.values) for f in self.entries))

    def masked(self, mask):
        return FieldSequence(
            tuple(Field(self.grid, np.where(mask, f.values, 0.0)) for f in self.entries)
        )


def sequence_from_values(grid, arrays):
    return FieldSequence(tuple(Field(grid, a) for a in arrays))


class _LevelSolver:
    """Per-level lambda solves with cached logs and warm hints."""

    def __init__(self, fs, p, q):
        require_same_grid(*fs.entries, p, q)
        g = fs.grid
        self.cell = g.cell
        self.p_flat = p.values.ravel()
        self.q_flat = q.values.ravel()
        self.rq_flat = np.where(
            np.isinf(self.q_flat), 0.0, 1.0 / self.q_flat
        )
        self.log_af = [_log_abs(f.values).ravel() for f in fs]
        self.zero = [f.max_abs() == 0.0 for f in fs]
        self.lam_dependent = [
            bool(np.any(np.isfinite(la) & np.isfinite(self.q_flat)))
            for la in self.log_af
        ]
        self.hints = [1.0] * fs.levels
        self.levels = fs.levels

    def inner(self, j, log_mu=0.0, rel_tol=INNER_REL_TOL):
        if self.zero[j]:
            return 0.0
        la = self.log_af[j]

        def fn(lam):
            return _kernels.scaled_modular(
                la, self.p_flat, self.rq_flat, log_mu, math.log(lam),
                self.cell, 4.0,
            )

        if not self.lam_dependent[j]:
            return 0.0 if fn(1.0) <= 1.0 else math.inf
        if fn(1e280) > 1.0:
            return math.inf
        lam = solve_threshold(fn, self.hints[j], rel_tol=rel_tol)
        if 0.0 < lam < math.inf:
            self.hints[j] = lam
        return lam

    def modular(self, log_mu=0.0, early=False):
        total = 0.0
        for j in range(self.levels):
            v = self.inner(j, log_mu=log_mu)
            total += v
            if math.isinf(total):
                return math.inf
            if early and total > 1.0:
                return total
        return total


def inner_lambda(f, p, q, hint=1.0, rel_tol=INNER_REL_TOL):
    """Per-term infimum inf{lam > 0 : rho_p(f / lam^{1/q(x)}) <= 1}.

    Returns 0 for f = 0 and inf when no lambda satisfies the constraint
    (possible only through lambda-independent q = inf mass).
    """
    solver = _LevelSolver(FieldSequence((f,)), p, q)
    solver.hints[0] = hint
    return solver.inner(0, rel_tol=rel_tol)


def _esssup_levels(fs, q):
    log_afs = [_log_abs(f.values).ravel() for f in fs]
    q_flat = q.values.ravel()

    def fn(log_mu, early=False):
        total = 0.0
        for la in log_afs:
            total += _kernels.esssup_modular(la, q_flat, log_mu)
            if math.isinf(total):
                return math.inf
            if early and total > 1.0:
                return total
        return total

    return fn


def mixed_modular(fs, p, q):
    """Modular of the sequence; when p = inf everywhere it is evaluated by
    the equivalent essential-supremum formula sum_j sup_x |f_j(x)|^{q(x)}."""
    require_same_grid(*fs.entries, p, q)
    if np.all(np.isinf(p.values)):
        return _esssup_levels(fs, q)(0.0)
    return _LevelSolver(fs, p, q).modular()


def mixed_norm(fs, p, q, rel_tol=NORM_REL_TOL):
    """Norm of the mixed space: inf{mu > 0 : modular((f_j)/mu) <= 1}.

    For q = inf everywhere this is exactly sup_j of the per-level Luxemburg
    norms and is returned through that formula.
    """
    require_same_grid(*fs.entries, p, q)
    if np.all(np.isinf(q.values)):
        return max(luxemburg_norm(f, p) for f in fs)
    m = fs.max_abs()
    if m == 0.0:
        return 0.0
    hint = m * max(1.0, fs.grid.box_measure) * fs.levels
    if np.all(np.isinf(p.values)):
        level_fn = _esssup_levels(fs, q)

        def fn(mu):
            return level_fn(math.log(mu), early=True)

        return solve_threshold(fn, hint, rel_tol=rel_tol)

    solver = _LevelSolver(fs, p, q)

    def fn(mu):
        return solver.modular(log_mu=math.log(mu), early=True)

    return solve_threshold(fn, hint, rel_tol=rel_tol)


def check_monotone_limit(fs, truncation_sets, p, q, rel_tol=1e-6):
    """Verify that norms of mask-truncated sequences increase to the norm of
    the full sequence.

    truncation_sets is an increasing list of boolean node masks whose union
    covers the grid.
    """
    masks = [np.asarray(mk, dtype=bool) for mk in truncation_sets]
    if not masks:
        raise ValueError("need at least one truncation set")
    for mk in masks:
        if mk.shape != fs.grid.shape:
            raise ValueError("mask shape does not match the grid")
    for a, b in zip(masks, masks[1:]):
        if np.any(a & ~b):
            raise ValueError("masks not nested")
    if not np.all(np.logical_or.reduce(masks)):
        raise ValueError("union of masks must cover the grid")

    full = mixed_norm(fs, p, q)
    norms = [mixed_norm(fs.masked(mk), p, q) for mk in masks]
    scale = max(full, 1e-300)
    # slack covers the threshold-solver resolution on two nearly equal norms
    increasing = all(
        norms[i + 1] >= norms[i] - 1e-8 * scale for i in range(len(norms) - 1)
    )
    gap = abs(max(norms) - full) / scale if full > 0 else max(norms)
    status_ok = increasing and gap <= rel_tol
    return CheckReport(
        check_id="mixed.monotone_limit",
        status="pass" if status_ok else "fail",
        measured=gap,
        bound=0.0,
        tolerance=rel_tol,
        details={"norms": norms, "full_norm": full, "increasing": increasing},
    )


def _ratio(lhs, rhs):
    if lhs == 0.0:
        return 0.0
    if rhs == 0.0:
        return math.inf
    return lhs / rhs


def check_holder(fs, gs, p1, p2, q1, q2, bound=C_HOLDER, tolerance=1e-6):
    """Empirical constants for the three Holder inequality forms.

    Measures LHS/RHS for the scalar product inequality, the fully split
    sequence inequality, and the sup-form with only the integrability index
    split; asserts every ratio stays below `bound`.
    """
    from .exponents import harmonic_sum

    if fs.levels != gs.levels:
        raise ValueError("sequences must share the level count")
    p = harmonic_sum(p1, p2)
    q = harmonic_sum(q1, q2)
    grid = fs.grid
    prod = FieldSequence(
        tuple(Field(grid, a.values * b.values) for a, b in zip(fs, gs))
    )

    lhs_scalar = luxemburg_norm(prod[0], p)
    rhs_scalar = luxemburg_norm(fs[0], p1) * luxemburg_norm(gs[0], p2)

    lhs_seq = mixed_norm(prod, p, q)
    rhs_split = mixed_norm(fs, p1, q1) * mixed_norm(gs, p2, q2)
    rhs_sup = max(luxemburg_norm(f, p1) for f in fs) * mixed_norm(gs, p2, q)

    ratios = {
        "scalar": _ratio(lhs_scalar, rhs_scalar),
        "split": _ratio(lhs_seq, rhs_split),
        "sup_form": _ratio(lhs_seq, rhs_sup),
    }
    trivial = fs.max_abs() == 0.0 or gs.max_abs() == 0.0
    measured = max(ratios.values()) if not trivial else 0.0
    return graded_report(
        "mixed.holder", measured, bound, tolerance,
        details={"ratios": ratios, "lhs_sequence": lhs_seq},
        trivial=trivial,
    )
