"""Transport/frequency-localization commutator and its estimate harness.

The commutator of the transport operator V.grad with the dyadic block at
level j measures how far frequency localization is from commuting with
advection:

    sum_k [ V_k d_k(block_j f) - block_j(V_k d_k f) ].

Constant V and constant f both annihilate it.  The harness evaluates the
weighted mixed norm of the commutator sequence against several right-hand
side aggregates of Besov and Luxemburg norms, records the empirical ratios,
and repeats each instance on a refined grid to confirm the ratios are
discretization-stable.  No divergence-free structure is assumed anywhere;
the test families have div V != 0.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .exponents import ExponentField, exponent_from_family, harmonic_sum
from .grid import (Field, Grid, boundary_deviation, require_same_grid,
                   spectral_derivative)
from .lebesgue import luxemburg_norm
from .littlewood_paley import besov_norm, build_resolution, lp_block
from .mixed import FieldSequence, mixed_norm
from .reports import make_estimate_report

DECAY_GUARD = 1e-10


@dataclass(frozen=True)
class VectorField:
    """n sampled components sharing a grid; every component must sit below
    the periodization guard at the box boundary (constants count as exactly
    periodic and pass)."""

    components: tuple

    def __post_init__(self):
        comps = tuple(self.components)
        if not comps:
            raise ValueError("vector field needs at least one component")
        g = require_same_grid(*comps)
        if len(comps) != g.dim:
            raise ValueError(f"expected {g.dim} components, got {len(comps)}")
        for i, c in enumerate(comps):
            dev = boundary_deviation(c)
            if dev > DECAY_GUARD:
                raise ValueError(
                    f"component {i} violates the boundary decay guard: "
                    f"deviation {dev:.3e} > {DECAY_GUARD:.0e}"
                )
        object.__setattr__(self, "components", comps)

    @property
    def grid(self):
        return self.components[0].grid

    def __iter__(self):
        return iter(self.components)

    def __getitem__(self, k):
        return self.components[k]


def _check_field_decay(f, name):
    dev = boundary_deviation(f)
    if dev > DECAY_GUARD:
        raise ValueError(
            f"{name} violates the boundary decay guard: {dev:.3e} > {DECAY_GUARD:.0e}"
        )


def divergence(v):
    acc = np.zeros(v.grid.shape)
    for k, comp in enumerate(v):
        acc += spectral_derivative(comp, k).values
    return Field(v.grid, acc)


def commutator(v, f, rou, j):
    """[V.grad, block_j] f = sum_k (V_k d_k block_j f - block_j(V_k d_k f)).

    Products are formed in physical space; callers keep inputs band-limited
    below 2^J / 4 so the doubled product bandwidth stays alias-free.
    """
    g = require_same_grid(*v.components, f, rou)
    acc = np.zeros(g.shape)
    for k, comp in enumerate(v):
        acc += comp.values * spectral_derivative(lp_block(f, rou, j), k).values
        inner = Field(g, comp.values * spectral_derivative(f, k).values)
        acc -= lp_block(inner, rou, j).values
    return Field(g, acc)


def commutator_sequence(v, f, rou):
    return FieldSequence(
        tuple(commutator(v, f, rou, j) for j in range(rou.levels))
    )


def commutator_lhs_norm(v, f, s, p, q, rou):
    """Mixed norm of the smoothness-weighted commutator sequence."""
    comm = commutator_sequence(v, f, rou)
    weighted = FieldSequence(
        tuple(
            Field(f.grid, np.exp2(j * s.values) * c.values)
            for j, c in enumerate(comm)
        )
    )
    return mixed_norm(weighted, p, q)


def _vector_luxemburg(fields, p):
    return sum(luxemburg_norm(f, p) for f in fields)


def _vector_besov(fields, s, p, q, rou):
    return sum(besov_norm(f, s, p, q, rou) for f in fields)


def _gradient(f):
    return [spectral_derivative(f, k) for k in range(f.grid.dim)]


def _shift_smoothness(s, delta):
    return ExponentField(s.grid, s.values + delta,
                         value_at_infinity=None if s.value_at_infinity is None
                         else s.value_at_infinity + delta)


def theorem1_report(v, f, s, p1, p2, q, rou, config=None):
    """First estimate family: positive smoothness, three right-hand sides.

    Returns one report per variant: gradient-of-V, gradient-of-f, and the
    divergence three-term form with the smoothness index raised by one.
    """
    if not s.p_minus > 0:
        raise ValueError(f"needs positive smoothness, got min {s.p_minus}")
    for comp in v:
        _check_field_decay(comp, "V component")
    _check_field_decay(f, "f")
    p = harmonic_sum(p1, p2)
    config = dict(config or {})

    lhs = commutator_lhs_norm(v, f, s, p, q, rou)
    grad_f = _gradient(f)
    grad_f_p1 = _vector_luxemburg(grad_f, p1)
    v_besov = _vector_besov(v.components, s, p2, q, rou)
    grad_v_p1 = sum(
        luxemburg_norm(spectral_derivative(comp, i), p1)
        for comp in v for i in range(v.grid.dim)
    )
    f_besov = besov_norm(f, s, p2, q, rou)
    v_p1 = _vector_luxemburg(v.components, p1)
    grad_f_besov = _vector_besov(grad_f, s, p2, q, rou)
    f_div = Field(f.grid, f.values * divergence(v).values)
    f_div_besov = besov_norm(f_div, s, p, q, rou)
    f_p1 = luxemburg_norm(f, p1)
    v_besov_up = _vector_besov(v.components, _shift_smoothness(s, 1.0), p2, q, rou)

    reports = {
        "grad_v": make_estimate_report(
            lhs,
            {"grad_f_p1 * V_besov": grad_f_p1 * v_besov,
             "grad_V_p1 * f_besov": grad_v_p1 * f_besov},
            config | {"variant": "grad_v"},
        ),
        "grad_f": make_estimate_report(
            lhs,
            {"grad_f_p1 * V_besov": grad_f_p1 * v_besov,
             "V_p1 * grad_f_besov": v_p1 * grad_f_besov},
            config | {"variant": "grad_f"},
        ),
        "divergence": make_estimate_report(
            lhs,
            {"f_div_besov": f_div_besov,
             "grad_V_p1 * f_besov": grad_v_p1 * f_besov,
             "f_p1 * V_besov_up": f_p1 * v_besov_up},
            config | {"variant": "divergence"},
        ),
    }
    return reports


def theorem2_report(v, f, s, p1, p2, q, rou, config=None):
    """Reduced estimate: single term for 0 < s < 1, two-term divergence form
    for -1 < s < 0."""
    for comp in v:
        _check_field_decay(comp, "V component")
    _check_field_decay(f, "f")
    p = harmonic_sum(p1, p2)
    config = dict(config or {})
    lhs = commutator_lhs_norm(v, f, s, p, q, rou)

    if 0.0 < s.p_minus and s.p_plus < 1.0:
        grad_f_p1 = _vector_luxemburg(_gradient(f), p1)
        v_besov = _vector_besov(v.components, s, p2, q, rou)
        return {
            "positive": make_estimate_report(
                lhs, {"grad_f_p1 * V_besov": grad_f_p1 * v_besov},
                config | {"variant": "positive"},
            )
        }
    if -1.0 < s.p_minus and s.p_plus < 0.0:
        f_div = Field(f.grid, f.values * divergence(v).values)
        f_div_besov = besov_norm(f_div, s, p, q, rou)
        f_p1 = luxemburg_norm(f, p1)
        v_besov_up = _vector_besov(v.components, _shift_smoothness(s, 1.0), p2, q, rou)
        return {
            "negative": make_estimate_report(
                lhs,
                {"f_div_besov": f_div_besov, "f_p1 * V_besov_up": f_p1 * v_besov_up},
                config | {"variant": "negative"},
            )
        }
    raise ValueError(
        f"smoothness range [{s.p_minus}, {s.p_plus}] matches neither variant "
        "(needs 0 < s < 1 or -1 < s < 0)"
    )


def theorem3_report(v, f, s1, s2, p1, p2, q1, q2, rou, config=None):
    """Split-index estimate: s = s1 + s2 with s > 0 and s2 < 1; both the
    integrability and the sequence indices split harmonically."""
    for comp in v:
        _check_field_decay(comp, "V component")
    _check_field_decay(f, "f")
    s = ExponentField(s1.grid, s1.values + s2.values)
    if not s.p_minus > 0:
        raise ValueError(f"needs (s1+s2) > 0, got min {s.p_minus}")
    if not s2.p_plus < 1.0:
        raise ValueError(f"needs s2 < 1, got max {s2.p_plus}")
    p = harmonic_sum(p1, p2)
    q = harmonic_sum(q1, q2)
    config = dict(config or {})

    lhs = commutator_lhs_norm(v, f, s, p, q, rou)
    grad_f = _gradient(f)
    grad_f_p1 = _vector_luxemburg(grad_f, p1)
    v_besov = _vector_besov(v.components, s, p2, q, rou)
    grad_f_besov_s1 = _vector_besov(grad_f, s1, p1, q1, rou)
    v_besov_s2 = _vector_besov(v.components, s2, p2, q2, rou)
    return {
        "split": make_estimate_report(
            lhs,
            {"grad_f_p1 * V_besov": grad_f_p1 * v_besov,
             "grad_f_besov_s1 * V_besov_s2": grad_f_besov_s1 * v_besov_s2},
            config | {"variant": "split"},
        )
    }


@dataclass(frozen=True)
class SweepConfig:
    """Generator family for randomized estimate sweeps.

    Exponent roles map to (family_name, params) descriptors so the same
    family can be re-sampled on the refined grid.  kmax defaults to 2^J / 4,
    the dealiasing margin for physical-space products.  constant_v swaps the
    random vector fields for constants, the degenerate family whose ratios
    must vanish.
    """

    dim: int = 1
    points_per_axis: int = 4096
    half_width: float = 16.0
    levels: int = 8
    exponents: dict = field(default_factory=dict)
    kmax: int | None = None
    constant_v: bool = False

    def grid(self, refine=False):
        n = self.points_per_axis * (2 if refine else 1)
        return Grid(self.dim, n, self.half_width)

    def top_level(self, refine=False):
        return self.levels + (1 if refine else 0)

    def band(self):
        return self.kmax if self.kmax is not None else 2 ** self.levels // 4

    def exponent(self, grid, role):
        family, params = self.exponents[role]
        return exponent_from_family(grid, family, params)


_THEOREMS = ("theorem1", "theorem2", "theorem3")


def _sweep_key(seed, *extra):
    parts = list(seed) if isinstance(seed, (list, tuple)) else [seed]
    return [int(x) for x in parts] + [int(e) for e in extra]


def _instance_reports(theorem, config, grid, top_level, seed):
    from .random_fields import band_limited_field, band_limited_vector_field

    rou = build_resolution(grid, top_level)
    if config.constant_v:
        v = VectorField(tuple(
            Field(grid, np.full(grid.shape, 1.0 + axis))
            for axis in range(grid.dim)
        ))
    else:
        v = VectorField(tuple(band_limited_vector_field(grid, config.band(), seed)))
    f = band_limited_field(grid, config.band(), _sweep_key(seed, 7919))
    meta = {"seed": _sweep_key(seed), "points": grid.points_per_axis,
            "levels": top_level,
            "exponents": {k: list(v) for k, v in config.exponents.items()}}
    if theorem == "theorem1":
        return theorem1_report(
            v, f, config.exponent(grid, "s"), config.exponent(grid, "p1"),
            config.exponent(grid, "p2"), config.exponent(grid, "q"), rou, meta,
        )
    if theorem == "theorem2":
        return theorem2_report(
            v, f, config.exponent(grid, "s"), config.exponent(grid, "p1"),
            config.exponent(grid, "p2"), config.exponent(grid, "q"), rou, meta,
        )
    if theorem == "theorem3":
        return theorem3_report(
            v, f, config.exponent(grid, "s1"), config.exponent(grid, "s2"),
            config.exponent(grid, "p1"), config.exponent(grid, "p2"),
            config.exponent(grid, "q1"), config.exponent(grid, "q2"), rou, meta,
        )
    raise ValueError(f"theorem must be one of {_THEOREMS}, got {theorem!r}")


def constant_sweep(config, theorem, trials, seed, refine=True):
    """Randomized (V, f) sweep for one estimate family.

    Returns a summary dict with per-instance ratios per variant, their max
    and median, and (when refine is set) the per-instance factor by which
    each ratio moves when the grid and level count are refined to
    (2N, J+1); stability demands that factor stay within [1/2, 2].
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    base_grid = config.grid()
    ratios = {}
    refine_factors = {}
    for t in range(trials):
        inst_seed = [int(seed), t]
        base = _instance_reports(theorem, config, base_grid, config.levels,
                                 inst_seed)
        for variant, rep in base.items():
            ratios.setdefault(variant, []).append(rep.ratio)
        if refine:
            fine = _instance_reports(theorem, config, config.grid(refine=True),
                                     config.top_level(refine=True), inst_seed)
            for variant, rep in fine.items():
                coarse = base[variant].ratio
                factor = rep.ratio / coarse if coarse > 0 else (
                    1.0 if rep.ratio == 0.0 else math.inf)
                refine_factors.setdefault(variant, []).append(factor)
    summary = {
        "theorem": theorem,
        "trials": trials,
        "seed": int(seed),
        "ratios": ratios,
        "max_ratio": {k: max(v) for k, v in ratios.items()},
        "median_ratio": {k: float(np.median(v)) for k, v in ratios.items()},
    }
    if refine:
        summary["refine_factors"] = refine_factors
        summary["refine_stable"] = all(
            0.5 <= fac <= 2.0 for v in refine_factors.values() for fac in v
        )
    return summary
