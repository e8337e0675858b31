"""Threshold inversion for monotone modular maps.

All norms in this package are infima of the form inf{x > 0 : F(x) <= 1}
where F is non-increasing with values in [0, inf].  ``solve_threshold``
brackets the crossing geometrically, then shrinks the bracket with the
Illinois variant of false position on the (log x, log F) plane, falling back
to geometric bisection whenever an endpoint value is unusable (0 or inf
across a jump of an endpoint exponent).
"""

import math

_EXPAND = 8.0
_MAX_EXPANSION = 140  # 8**140 spans every positive float


def _logv(v):
    if v == 0.0:
        return -math.inf
    if math.isinf(v):
        return math.inf
    return math.log(v)


def solve_threshold(fn, hint, rel_tol=1e-9, max_evals=300):
    """Return inf{x > 0 : fn(x) <= 1} for non-increasing fn >= 0.

    Returns 0.0 when fn stays <= 1 arbitrarily close to zero and inf when no
    feasible x exists.  The result sits on the feasible side of the crossing,
    within relative distance rel_tol of the infimum.
    """
    hint = float(hint)
    if not (hint > 0.0 and math.isfinite(hint)):
        hint = 1.0
    evals = 0

    v = fn(hint)
    evals += 1
    if v <= 1.0:
        hi, vhi = hint, v
        lo = hint
        for _ in range(_MAX_EXPANSION):
            lo /= _EXPAND
            vlo = fn(lo)
            evals += 1
            if vlo > 1.0:
                break
            hi, vhi = lo, vlo
        else:
            return 0.0
    else:
        lo, vlo = hint, v
        hi = hint
        for _ in range(_MAX_EXPANSION):
            hi *= _EXPAND
            vhi = fn(hi)
            evals += 1
            if vhi <= 1.0:
                break
            lo, vlo = hi, vhi
        else:
            return math.inf

    # invariant: fn(lo) > 1 >= fn(hi), lo < hi
    ulo, uhi = math.log(lo), math.log(hi)
    wlo, whi = _logv(vlo), _logv(vhi)
    gap_goal = math.log1p(rel_tol)
    last_side = 0
    since_bisect = 0

    while uhi - ulo > gap_goal and evals < max_evals:
        um = math.nan
        if since_bisect < 6 and math.isfinite(wlo) and math.isfinite(whi) and wlo > 0.0 > whi:
            um = ulo - wlo * (uhi - ulo) / (whi - wlo)
            if math.isnan(um):
                um = math.nan
            else:
                # clamp into the padded interior so every step shrinks the
                # bracket; rejecting near-endpoint steps would stall at the
                # crossing
                pad = 0.01 * (uhi - ulo)
                um = min(max(um, ulo + pad), uhi - pad)
        if math.isnan(um):
            um = 0.5 * (ulo + uhi)
            last_side = 0
            since_bisect = 0
        else:
            since_bisect += 1
        vm = fn(math.exp(um))
        evals += 1
        wm = _logv(vm)
        if vm <= 1.0:
            uhi, whi = um, wm
            if last_side == +1 and math.isfinite(wlo):
                wlo *= 0.5  # Illinois: pull the stagnant endpoint value in
            last_side = +1
        else:
            ulo, wlo = um, wm
            if last_side == -1 and math.isfinite(whi):
                whi *= 0.5
            last_side = -1

    return math.exp(uhi)
