"""Variable exponent modular and Luxemburg norm.

The modular is rho_p(f) = integral of omega_{p(x)}(|f(x)|), where omega_p is
t^p for finite p and the step 0/inf split at t = 1 for p = inf (with
omega_inf(1) = 0, keeping omega left-continuous).  The Luxemburg norm is the
gauge inf{lambda > 0 : rho_p(f/lambda) <= 1}, inverted here by monotone
threshold solving on lambda, using the unit ball property
"norm <= 1 iff modular <= 1" as the bracket test.
"""

import math

import numpy as np

from . import _kernels
from ._solve import solve_threshold
from .grid import require_same_grid

NORM_REL_TOL = 1e-9


def omega(t, p):
    """The integrand omega_p(t): t^p for finite p; for p = inf, 0 on [0, 1]
    and inf beyond (the convention 1^inf = 0)."""
    if t < 0:
        raise ValueError("omega expects t >= 0")
    if math.isinf(p):
        return 0.0 if t <= 1.0 else math.inf
    if t == 0.0:
        return 0.0
    return t ** p


def _log_abs(values):
    with np.errstate(divide="ignore"):
        return np.log(np.abs(values, dtype=np.float64))


def modular(f, p):
    """rho_p(f); returns inf as soon as any p=inf node has |f| > 1 or the
    finite-exponent sum overflows."""
    require_same_grid(f, p)
    return _kernels.plain_modular(
        np.abs(f.values).ravel(), p.values.ravel(), f.grid.cell
    )


def _scaled_modular_fn(log_af, p_flat, rq_flat, cell, log_mu=0.0, budget=4.0):
    def fn(lam):
        return _kernels.scaled_modular(
            log_af, p_flat, rq_flat, log_mu, math.log(lam), cell, budget
        )

    return fn


def luxemburg_norm(f, p, rel_tol=NORM_REL_TOL):
    """Luxemburg norm of a sampled field.

    Any finite sample on a finite box has a finite norm; f = 0 gives 0.  The
    returned value lies on the feasible side (modular(f/result) <= 1) within
    rel_tol of the infimum.
    """
    require_same_grid(f, p)
    m = f.max_abs()
    if m == 0.0:
        return 0.0
    log_af = _log_abs(f.values).ravel()
    ones = np.ones(log_af.shape[0])
    fn = _scaled_modular_fn(log_af, p.values.ravel(), ones, f.grid.cell)
    hint = m * max(1.0, f.grid.box_measure)
    return solve_threshold(fn, hint, rel_tol=rel_tol)
