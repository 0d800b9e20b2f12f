"""Registry of inequality targets driven by the campaign runner.

Each target measures both sides of one inequality over seeded trials and
applies its acceptance policy: a ratio cap (config-overridable; defaults
documented here) and, where the statement is uniformity over a structural
parameter, a no-growth check across that parameter.  Caps encode measured
headroom, not proven constants.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .. import analysis, dyadic, norms, operators
from ..errors import MajorSubsetError
from ..grid import GridFunction, SampleGrid
from ..norms import INF, MeasurableSet, MixedNormSpec, lp_norm, mixed_norm, weak_lp_norm
from .generate import generate_trial

__all__ = ["TrialRow", "TargetResult", "InequalityTarget", "REGISTRY", "target_names"]


@dataclass
class TrialRow:
    target: str
    trial: int
    seed: int
    lhs: float
    rhs: float
    ratio: float
    params: dict = field(default_factory=dict)


@dataclass
class TargetResult:
    name: str
    statement: str
    rows: list[TrialRow]
    aggregates: dict
    passed: bool
    error: str | None = None
    seconds: float = 0.0


@dataclass(frozen=True)
class InequalityTarget:
    name: str
    statement: str
    runner: Callable
    default_cap: float


class RunContext:
    """Per-campaign knobs shared by the target runners."""

    def __init__(self, seed: int = 7, trials: int | None = None,
                 grid_size: int = 1024, caps: dict | None = None,
                 eps_values: tuple[float, ...] = (0.01, 0.05, 0.1)):
        self.seed = seed
        self.trials_override = trials
        self.grid_size = grid_size
        self.caps = caps or {}
        self.eps_values = tuple(eps_values)

    def trials(self, default: int) -> int:
        if self.trials_override is None:
            return default
        return max(1, min(default, self.trials_override))

    def cap(self, target: str, default: float) -> float:
        return float(self.caps.get(target, default))

    def seeds(self, target_index: int, count: int) -> list[int]:
        base = self.seed * 100003 + target_index * 1009
        return [base + t for t in range(count)]


def _slope(xs: np.ndarray, ys: np.ndarray) -> float:
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    xm, ym = xs.mean(), ys.mean()
    denom = np.sum((xs - xm) ** 2)
    if denom == 0:
        return 0.0
    return float(np.sum((xs - xm) * (ys - ym)) / denom)


def _subfamily(rng, grid, root: dyadic.DyadicInterval, depth: int, keep: float = 0.7):
    """Random subset of the dyadic tree below root, root always kept."""
    fam = [root]
    level = [root]
    for _ in range(depth):
        nxt = []
        for iv in level:
            nxt.extend(iv.children())
        level = nxt
        fam.extend(iv for iv in level if rng.random() < keep)
    return fam


# ---------------------------------------------------------------------------
# Individual targets
# ---------------------------------------------------------------------------

def _run_telescope_1d(ctx: RunContext, name: str, statement: str) -> TargetResult:
    n = 4096
    grid = SampleGrid(n, 1.0)
    rows = []
    for t, seed in enumerate(ctx.seeds(1, ctx.trials(3))):
        f = generate_trial("band_limited", seed, {"grid": grid, "band": n // 8})
        g = generate_trial("band_limited", seed + 501, {"grid": grid, "band": n // 8})
        parts = operators.telescoping_decomposition(f, g, dims=1)
        total = parts[0]
        for p in parts[1:]:
            total = total + p
        product = GridFunction(grid, f.samples * g.samples)
        resid = (total - product).norm2() / product.norm2()
        rows.append(TrialRow(name, t, seed, resid, 1e-10, resid / 1e-10,
                             {"n": n}))
    passed = all(r.ratio <= 1.0 for r in rows)
    agg = {"max_residual": max(r.lhs for r in rows), "tolerance": 1e-10}
    return TargetResult(name, statement, rows, agg, passed)


def _run_telescope_2d(ctx: RunContext, name: str, statement: str) -> TargetResult:
    n = 256
    grid = SampleGrid(n, 1.0, dimension=2)
    rows = []
    for t, seed in enumerate(ctx.seeds(2, ctx.trials(2))):
        f = generate_trial("band_limited", seed, {"grid": grid, "band": n // 8})
        g = generate_trial("band_limited", seed + 501, {"grid": grid, "band": n // 8})
        parts = operators.telescoping_decomposition(f, g, dims=2)
        total = parts[0]
        for p in parts[1:]:
            total = total + p
        product = GridFunction(grid, f.samples * g.samples)
        resid = (total - product).norm2() / product.norm2()
        rows.append(TrialRow(name, t, seed, resid, 1e-9, resid / 1e-9,
                             {"n": n}))
    passed = all(r.ratio <= 1.0 for r in rows)
    agg = {"max_residual": max(r.lhs for r in rows), "tolerance": 1e-9}
    return TargetResult(name, statement, rows, agg, passed)


_C_LADDER = (0.25, 0.5, 1.0, 2.0, 4.0)


def _run_weak_dualization(ctx, name, statement) -> TargetResult:
    grid = SampleGrid(512, 1.0)
    r, p, C = 0.5, 1.0, 4.0
    rows = []
    fails = 0
    smallest_uniform_C = 0.0
    for t, seed in enumerate(ctx.seeds(3, ctx.trials(50))):
        f = generate_trial("step", seed, {"grid": grid, "depth": 5})
        weak = weak_lp_norm(f, p)
        if weak == 0:
            continue
        vals = np.unique(np.abs(f.samples))
        best = 0.0
        trial_c = _C_LADDER[0]
        for v in vals:
            if v <= 0:
                continue
            mask = np.abs(f.samples) > v * (1 - 1e-12)
            if not mask.any():
                continue
            E = MeasurableSet.from_mask(grid, mask)
            try:
                _, ratio = norms.dualize_weak_via_Lr(f, E, r, p, C)
            except MajorSubsetError:
                fails += 1
                continue
            best = max(best, ratio)
            for c_try in _C_LADDER:
                try:
                    norms.dualize_weak_via_Lr(f, E, r, p, c_try)
                    trial_c = max(trial_c, c_try)
                    break
                except MajorSubsetError:
                    continue
        smallest_uniform_C = max(smallest_uniform_C, trial_c)
        rows.append(TrialRow(name, t, seed, best, weak, best / weak,
                             {"r": r, "p": p, "smallest_major_C": trial_c}))
    ratios = [r_.ratio for r_ in rows]
    passed = (
        fails == 0
        and all(0.25 * (1 - 1e-9) <= x <= 4.0 * (1 + 1e-9) for x in ratios)
    )
    agg = {"min_ratio": min(ratios), "max_ratio": max(ratios),
           "bracket": [0.25, 4.0], "majorness_failures": fails,
           "smallest_uniform_major_C": smallest_uniform_C}
    return TargetResult(name, statement, rows, agg, passed)


def _random_stopping_config(seed: int, grid: SampleGrid, depth: int):
    root = dyadic.DyadicInterval(0, 0)
    rng = np.random.Generator(np.random.Philox(key=np.array([seed, 77], dtype=np.uint64)))
    family = _subfamily(rng, grid, root, depth)
    cell = grid.spacing
    quarter = grid.sample_count // int(grid.period_length) // 4

    def random_set(salt):
        count = int(rng.integers(max(1, quarter // 8), quarter))
        return generate_trial(
            "dyadic_union", seed + salt,
            {"grid": grid, "measure": count * cell, "within": root},
        )

    E1 = random_set(11)
    E2 = random_set(22)
    E3 = random_set(33)
    return family, E1, E2, E3, root


def _run_stopping(ctx, name, statement) -> TargetResult:
    grid = SampleGrid(512, 4.0)
    cap = ctx.cap(name, 8.0)
    rows = []
    ok = True
    trials = ctx.trials(100)
    for t, seed in enumerate(ctx.seeds(4, trials)):
        depth = 3 + (t % 3)  # depths 3..5
        family, E1, E2, E3, root = _random_stopping_config(seed, grid, depth)
        try:
            forest = analysis.stopping_decompose(family, E1, E2, E3, root, C=4.0, M=10)
        except MajorSubsetError as exc:
            rows.append(TrialRow(name, t, seed, 1.0, 0.0, math.inf,
                                 {"error": f"majorness {exc.achieved_ratio:.3f}"}))
            ok = False
            continue
        checks = _stopping_checks(forest, family, E1, E2)
        cmax = max(forest.measure_constants.values(), default=0.0)
        trial_ok = all(checks.values()) and cmax <= cap
        ok = ok and trial_ok
        rows.append(TrialRow(name, t, seed, cmax, cap, cmax / cap,
                             {"depth": depth, "cells": len(forest.cells),
                              **checks}))
    agg = {"max_measure_constant": max((r.lhs for r in rows), default=0.0),
           "cap": cap}
    return TargetResult(name, statement, rows, agg, ok)


def _stopping_checks(forest, family, E1, E2) -> dict:
    """Partition, disjointness, bracket, size-bound, and d-decay checks."""
    M = forest.M
    partition_ok = sorted(forest.all_members()) == sorted(family)
    disjoint_ok = True
    by_level: dict[tuple, list] = {}
    for sel in forest.selections:
        by_level.setdefault((sel.d, sel.axis, sel.level), []).append(sel.interval)
    for ivs in by_level.values():
        for i in range(len(ivs)):
            for j in range(i + 1, len(ivs)):
                if not ivs[i].disjoint(ivs[j]):
                    disjoint_ok = False
    indicators = {1: (E1.indicator, M), 2: (E2.indicator, M),
                  3: (forest.exceptional.protected.indicator, 2 * M)}
    tail = 1.0 + 2.0 / (M - 1.0)
    bracket_ok = True
    size_bound_ok = True
    decay_ok = True
    for sel in forest.selections:
        if sel.level > 80:
            continue
        ind, expo = indicators[sel.axis]
        avg = analysis.average_single(ind, sel.interval, expo)
        lo = 2.0 ** (-sel.level - 1) * (1 - 1e-9)
        hi = 2.0 ** (-sel.level) * (1 + 1e-9) if sel.level >= 1 else tail * 1.05
        if not (lo <= avg <= hi):
            bracket_ok = False
        if sel.axis == 1:
            st = analysis.size_tilde(E1.indicator, list(sel.members),
                                     I0=sel.interval, M=M).value
            if st > 2.0 ** (-sel.level + 1) * (1 + 1e-9):
                size_bound_ok = False
        if sel.axis == 3 and sel.d >= 1:
            if 2.0 ** (-sel.level) > 4.0 * 2.0 ** (-M * sel.d):
                decay_ok = False
    return {"partition": partition_ok, "disjoint": disjoint_ok,
            "bracket": bracket_ok, "size_bound": size_bound_ok,
            "d_decay": decay_ok}


def _run_size_energy(ctx, name, statement) -> TargetResult:
    grid = SampleGrid(512, 4.0)
    cap = ctx.cap(name, 4.0)
    root = dyadic.DyadicInterval(0, 0)
    rows = []
    trials = ctx.trials(100)
    for t, seed in enumerate(ctx.seeds(5, trials)):
        rng = np.random.Generator(np.random.Philox(key=np.array([seed, 5], dtype=np.uint64)))
        family = _subfamily(rng, grid, root, 4)
        kind = ("step", "bump_train", "band_limited")[t % 3]
        params = {"grid": grid}
        if kind == "step":
            params["depth"] = 4
        elif kind == "bump_train":
            params["count"] = 3
        else:
            params["band"] = 24
        f = generate_trial(kind, seed, params)
        sup_avg = analysis.size(f, family, "modified", M=4).value
        l1 = lp_norm(f, 1)
        if sup_avg == 0 or l1 == 0:
            continue
        for flavor in ("non-lacunary", "lacunary"):
            sz = analysis.size(f, family, flavor).value
            rows.append(TrialRow(name, t, seed, sz, sup_avg, sz / sup_avg,
                                 {"check": f"size-{flavor}"}))
            en = analysis.energy(f, family, flavor).value
            rows.append(TrialRow(name, t, seed, en, l1, en / l1,
                                 {"check": f"energy-{flavor}"}))
    # far-support decay sweep (period large enough that no torus wrap helps)
    decay_grid = SampleGrid(4096, 64.0)
    ks = [1, 2, 3, 4, 5]
    decay_vals = []
    family = [dyadic.DyadicInterval(j, m) for j in range(0, 4) for m in range(2 ** j)]
    for k in ks:
        x = decay_grid.points()
        center = 0.5 + (2.0 ** k - 1)
        supp = np.abs(x - center) < 0.5
        f = GridFunction(decay_grid, supp.astype(complex))
        decay_vals.append(analysis.energy(f, family, "non-lacunary").value)
    monotone = all(
        decay_vals[i + 1] <= decay_vals[i] * (1 + 1e-9) or decay_vals[i + 1] < 1e-12
        for i in range(len(ks) - 1)
    )
    ratios = [r.ratio for r in rows]
    passed = max(ratios) <= cap and monotone
    agg = {"max_ratio": max(ratios), "cap": cap,
           "far_support_energy": decay_vals, "monotone_decay": monotone}
    return TargetResult(name, statement, rows, agg, passed)


def _vv_ratio(grid, seed, K, r1, r2, r, p, q, s, band):
    fs = generate_trial("band_limited", seed,
                        {"grid": grid, "band": band, "vector_shape": (K,)})
    gs = generate_trial("band_limited", seed + 911,
                        {"grid": grid, "band": band, "vector_shape": (K,)})
    from ..grid import max_scale as _max_scale

    fam = dyadic.grid_dyadic_family(grid, range(1, min(8, _max_scale(grid) + 1)))
    rng = np.random.Generator(np.random.Philox(key=np.array([seed, 13], dtype=np.uint64)))
    keep = rng.random(len(fam)) < 0.8
    family = [iv for iv, k in zip(fam, keep) if k]
    coeffs = rng.uniform(0.3, 1.0, len(family))
    spec = operators.ParaproductSpec(grid, family, coeffs)

    def op(fc, gc):
        return operators.discretized_paraproduct(spec, fc, gc)

    out, (n_out, n_f, n_g) = operators.vector_valued_apply(
        op, fs, gs,
        MixedNormSpec((p, r1)), MixedNormSpec((q, r2)), MixedNormSpec((s, r)),
    )
    if n_f == 0 or n_g == 0:
        return None
    return n_out / (n_f * n_g)


def _run_vv_paraproduct(ctx, name, statement) -> TargetResult:
    grid = SampleGrid(ctx.grid_size, 1.0)
    cap = ctx.cap(name, 1.0)
    r1, r2, r = Fraction(3, 2), Fraction(3, 2), Fraction(3, 4)
    p, q, s = 4, 4, 2
    Ks = [1, 2, 4, 8, 16]
    per_k = ctx.trials(40)
    rows = []
    maxima = []
    for K in Ks:
        vals = []
        for t, seed in enumerate(ctx.seeds(6 + K, per_k)):
            ratio = _vv_ratio(grid, seed, K, r1, r2, r, p, q, s, band=grid.sample_count // 8)
            if ratio is None:
                continue
            vals.append(ratio)
            rows.append(TrialRow(name, t, seed, ratio, 1.0, ratio, {"K": K}))
        maxima.append(float(np.max(vals)))
    slope = _slope(np.log([float(k) for k in Ks]), np.log(maxima))
    max_ratio = max(r_.ratio for r_ in rows)
    # the growth fit needs a stable empirical sup; below 10 seeds per K the
    # slope is reported but not gated on
    slope_gated = per_k >= 10
    passed = max_ratio <= cap and (abs(slope) <= 0.1 or not slope_gated)
    agg = {"max_ratio": max_ratio, "cap": cap, "maxima_by_K": maxima,
           "log_slope": slope, "slope_window": 0.1, "slope_gated": slope_gated}
    return TargetResult(name, statement, rows, agg, passed)


def _run_alpha_coefficients(ctx, name, statement) -> TargetResult:
    cap = ctx.cap(name, 4.0)
    rows = []
    passed = True
    bounds = {}
    for t, alpha in enumerate((0.25, 0.5, 1.0)):
        table = operators.alpha_symbol_coefficients(alpha, 256)
        ns = np.arange(-256, 257)
        weighted = np.abs(table) * (1.0 + np.abs(ns)) ** (1.0 + alpha)
        bound = float(weighted.max())
        bounds[alpha] = bound
        rows.append(TrialRow(name, 2 * t, 0, bound, cap, bound / cap,
                             {"alpha": alpha, "check": "decay-bound"}))
        t0 = operators.alpha_symbol_coefficients(alpha, 256, scale=0)
        t5 = operators.alpha_symbol_coefficients(alpha, 256, scale=5)
        drift = float(np.max(np.abs(t0 - t5)))
        rows.append(TrialRow(name, 2 * t + 1, 0, drift, 1e-10, drift / 1e-10,
                             {"alpha": alpha, "check": "scale-independence"}))
        passed = passed and np.isfinite(bound) and bound <= cap and drift <= 1e-10
    agg = {"decay_bounds": {str(a): b for a, b in bounds.items()},
           "cap": cap, "scale_tolerance": 1e-10}
    return TargetResult(name, statement, rows, agg, passed)


def _estimate_norm(op, grid, seeds, band, p_in=2.0, p_out=2.0):
    vals = []
    for seed in seeds:
        f = generate_trial("band_limited", seed, {"grid": grid, "band": band})
        denom = lp_norm(f, p_in)
        if denom == 0:
            continue
        vals.append(lp_norm(op(f), p_out) / denom)
    return max(vals), float(np.median(vals))


def _run_shifted_growth(ctx, name, statement) -> TargetResult:
    grid = SampleGrid(512, 1.0)
    kappa_cap = ctx.cap(name, 2.5)
    ns = [1, 2, 4, 8, 16, 32, 64]
    per_n = ctx.trials(10)
    rows = []
    fits = {}
    passed = True
    for op_name in ("maximal", "square", "paraproduct"):
        maxima = []
        for i, n in enumerate(ns):
            seeds = ctx.seeds(20 + i, per_n)
            if op_name == "maximal":
                mx, med = _estimate_norm(lambda h: analysis.maximal(h, n), grid, seeds, 64)
            elif op_name == "square":
                mx, med = _estimate_norm(lambda h: analysis.shifted_square(h, n), grid, seeds, 64)
            else:
                vals = []
                for seed in seeds:
                    f = generate_trial("band_limited", seed, {"grid": grid, "band": 64})
                    g = generate_trial("band_limited", seed + 7, {"grid": grid, "band": 64})
                    denom = lp_norm(f, 4) * lp_norm(g, 4)
                    if denom == 0:
                        continue
                    out = operators.shifted_paraproduct(n, f, g)
                    vals.append(lp_norm(out, 2) / denom)
                mx, med = max(vals), float(np.median(vals))
            maxima.append(mx)
            rows.append(TrialRow(name, i, seeds[0], mx, med, mx / max(med, 1e-300),
                                 {"op": op_name, "n": n}))
        xs = np.log(np.log(1.0 + np.array(ns, dtype=float)))
        kappa = _slope(xs, np.log(maxima))
        fits[op_name] = kappa
        passed = passed and kappa <= kappa_cap
    agg = {"kappa_fits": fits, "kappa_cap": kappa_cap, "ns": ns}
    return TargetResult(name, statement, rows, agg, passed)


def _run_bht_multiplier(ctx, name, statement) -> TargetResult:
    n = 2048
    grid = SampleGrid(n, 1.0)
    x = grid.points()
    from ..grid import low_pass_profile

    window = low_pass_profile((x - 0.5) / 0.12)
    rows = []
    a, b = 5, 25
    fa = GridFunction(grid, window * np.exp(2j * np.pi * a * x))
    gb = GridFunction(grid, window * np.exp(2j * np.pi * b * x))
    res = operators.bht_kernel(fa, gb)
    center = n // 2
    idx = slice(center - n // 128, center + n // 128)
    predicted = 1j * np.pi * np.sign(b - a) * np.exp(
        2j * np.pi * (a + b) * x[idx]) * window[idx] ** 2
    got = res.output.samples[idx]
    rel = float(np.max(np.abs(got - predicted)) / np.max(np.abs(predicted)))
    rows.append(TrialRow(name, 0, 0, rel, 0.03, rel / 0.03, {"check": "modulus-pi"}))

    res_swap = operators.bht_kernel(gb, fa)
    sign_flip = float(
        np.max(np.abs(res_swap.output.samples[idx] + got))
        / np.max(np.abs(predicted))
    )
    rows.append(TrialRow(name, 1, 0, sign_flip, 0.06, sign_flip / 0.06,
                         {"check": "sign-flip"}))

    res_equal = operators.bht_kernel(fa, fa)
    scale = lp_norm(fa, INF) ** 2
    equal_mag = float(np.max(np.abs(res_equal.output.samples[idx]))) / scale
    rows.append(TrialRow(name, 2, 0, equal_mag, 0.05, equal_mag / 0.05,
                         {"check": "sgn-zero-on-diagonal"}))

    even = GridFunction(grid, window.astype(complex))
    res_even = operators.bht_kernel(even, even)
    center_val = abs(res_even.output.samples[center]) / lp_norm(even, INF) ** 2
    rows.append(TrialRow(name, 3, 0, center_val, 1e-8, center_val / 1e-8,
                         {"check": "even-symmetry-zero"}))
    passed = all(r.ratio <= 1.0 for r in rows)
    agg = {"spectral_discrepancy": res.discrepancy}
    return TargetResult(name, statement, rows, agg, passed)


def _run_bht_local_l2(ctx, name, statement) -> TargetResult:
    grid = SampleGrid(1024, 1.0)
    cap = ctx.cap(name, 2.0)
    tiers = [1, 4, 16]  # tile count quadruples tier to tier
    per_tier = ctx.trials(34)
    rows = []
    medians = []
    for tier_idx, freqs in enumerate(tiers):
        tiles = dyadic.build_rank_one_tiles(grid, range(2, 5), range(0, freqs))
        spec = operators.BHTModelSpec(grid, tiles)
        vals = []
        for t, seed in enumerate(ctx.seeds(40 + tier_idx, per_tier)):
            f = generate_trial("band_limited", seed, {"grid": grid, "band": 12})
            g = generate_trial("band_limited", seed + 3, {"grid": grid, "band": 12})
            denom = lp_norm(f, 2) * lp_norm(g, 2)
            if denom == 0:
                continue
            out = operators.bht_model(spec, f, g)
            ratio = lp_norm(out, 1) / denom
            vals.append(ratio)
            rows.append(TrialRow(name, t, seed, ratio, 1.0, ratio,
                                 {"tiles": len(tiles)}))
        medians.append(float(np.median(vals)))
    growth_ok = all(
        medians[i + 1] <= medians[i] * 1.25 + 1e-12 for i in range(len(medians) - 1)
    )
    growth_gated = per_tier >= 10
    max_ratio = max(r.ratio for r in rows)
    passed = max_ratio <= cap and (growth_ok or not growth_gated)
    agg = {"max_ratio": max_ratio, "cap": cap, "medians_by_tier": medians,
           "tile_tiers": tiers, "no_growth": growth_ok,
           "growth_gated": growth_gated}
    return TargetResult(name, statement, rows, agg, passed)


def _run_range_consistency(ctx, name, statement) -> TargetResult:
    step = 24
    checked = 0
    mismatches = 0
    from ..operators.ranges import _case_member, _theta_feasible

    fr = [Fraction(i, step) for i in range(step)]
    for a in range(step):
        for b in range(step):
            rho1, rho2 = fr[a], fr[b]
            rr = rho1 + rho2
            if not (0 < rr < Fraction(3, 2)):
                continue
            rho = (rho1, rho2, 1 - rr)
            for c in range(step):
                for d in range(step):
                    if c + d == 0:
                        continue
                    o1, o2 = fr[c], fr[d]
                    outer = (o1, o2, 1 - o1 - o2)
                    feas, _ = _theta_feasible(rho, outer)
                    table, _ = _case_member(rho, outer, repaired=True)
                    checked += 1
                    if feas != table:
                        mismatches += 1

    # third example: 1/q = 4/5 >= 3/4 fails case (ii); p = 10 is the
    # Hoelder-consistent outer exponent for (q, s) = (5/4, 10/9)
    worked = [
        ("p=2 q=2 s=1 r1=2 r2=2 r=1", True, "i"),
        ("p=4 q=2 s=4/3 r1=4/3 r2=4 r=1", True, "ii"),
        ("p=10 q=5/4 s=10/9 r1=4/3 r2=4 r=1", False, "ii"),
    ]
    examples_ok = True
    rows = [TrialRow(name, 0, 0, float(mismatches), 0.0,
                     0.0 if mismatches == 0 else math.inf,
                     {"grid_points": checked})]
    for t, (text, want_member, want_case) in enumerate(worked):
        q = operators.parse_range_query(text)
        res = operators.bht_range_membership(q)
        ok = res.member == want_member and res.case_labels[0] == want_case
        examples_ok = examples_ok and ok
        rows.append(TrialRow(name, t + 1, 0, float(res.member), float(want_member),
                             1.0 if ok else math.inf,
                             {"query": text, "case": res.case_labels[0]}))
    passed = mismatches == 0 and examples_ok
    agg = {"grid_points": checked, "mismatches": mismatches}
    return TargetResult(name, statement, rows, agg, passed)


def _dilate_x(f: GridFunction, factor: int) -> GridFunction:
    n = f.grid.sample_count
    idx = (np.arange(n) * factor) % n
    return GridFunction(f.grid, f.samples[idx, :])


def _run_leibniz(ctx, name, statement) -> TargetResult:
    n = 256
    grid = SampleGrid(n, 1.0, dimension=2)
    cap = ctx.cap(name, 1.0)
    alpha = beta = 1.0
    exps = operators.LeibnizExponents.symmetric(2, 2)
    rows = []
    ratios = []
    for t, seed in enumerate(ctx.seeds(60, ctx.trials(20))):
        f = generate_trial("band_limited", seed, {"grid": grid, "band": n // 32})
        g = generate_trial("band_limited", seed + 77, {"grid": grid, "band": n // 32})
        lhs, terms = operators.leibniz_sides(alpha, beta, exps, f, g)
        rhs = sum(terms)
        ratio = lhs / rhs
        ratios.append(ratio)
        rows.append(TrialRow(name, t, seed, lhs, rhs, ratio, {}))
    # dilation stability on a few pairs
    drifts = []
    for t, seed in enumerate(ctx.seeds(61, min(3, ctx.trials(3)))):
        f = generate_trial("band_limited", seed, {"grid": grid, "band": n // 64})
        g = generate_trial("band_limited", seed + 77, {"grid": grid, "band": n // 64})
        lhs, terms = operators.leibniz_sides(alpha, beta, exps, f, g)
        base = lhs / sum(terms)
        for dil in (2, 4, 8):
            fd, gd = _dilate_x(f, dil), _dilate_x(g, dil)
            lhs_d, terms_d = operators.leibniz_sides(alpha, beta, exps, fd, gd)
            drift = abs(lhs_d / sum(terms_d) / base - 1.0)
            drifts.append(drift)
            rows.append(TrialRow(name, 100 + t * 10 + dil, seed, drift, 0.25,
                                 drift / 0.25, {"dilation": dil}))
    passed = max(ratios) <= cap and all(d <= 0.25 for d in drifts)
    agg = {"max_ratio": max(ratios), "cap": cap,
           "max_dilation_drift": max(drifts), "drift_cap": 0.25}
    return TargetResult(name, statement, rows, agg, passed)


def _size_energy_family(seed, grid, root, depth=4):
    rng = np.random.Generator(np.random.Philox(key=np.array([seed, 3], dtype=np.uint64)))
    return _subfamily(rng, grid, root, depth)


def _run_trilinear_size_energy(ctx, name, statement) -> TargetResult:
    grid = SampleGrid(512, 4.0)
    cap = ctx.cap(name, 8.0)
    root = dyadic.DyadicInterval(0, 0)
    rows = []
    for t, seed in enumerate(ctx.seeds(70, ctx.trials(100))):
        family = _size_energy_family(seed, grid, root)
        spec = operators.ParaproductSpec.constant(grid, family)
        f = generate_trial("band_limited", seed, {"grid": grid, "band": 40})
        g = generate_trial("band_limited", seed + 1, {"grid": grid, "band": 40})
        h = generate_trial("band_limited", seed + 2, {"grid": grid, "band": 40})
        lam = abs(operators.trilinear_form(spec, f, g, h))
        rhs = 1.0
        for func, flavor in ((f, "non-lacunary"), (g, "lacunary"), (h, "lacunary")):
            s = analysis.size(func, family, flavor).value
            e = analysis.energy(func, family, flavor).value
            rhs *= s ** (2.0 / 3.0) * e ** (1.0 / 3.0)
        if rhs == 0:
            continue
        rows.append(TrialRow(name, t, seed, lam, rhs, lam / rhs, {}))
    max_ratio = max(r.ratio for r in rows)
    passed = max_ratio <= cap
    agg = {"max_ratio": max_ratio, "cap": cap, "theta": [1 / 3, 1 / 3, 1 / 3]}
    return TargetResult(name, statement, rows, agg, passed)


def _run_localized_trilinear(ctx, name, statement) -> TargetResult:
    grid = SampleGrid(512, 4.0)
    cap = ctx.cap(name, 8.0)
    root = dyadic.DyadicInterval(1, 1)  # [1/2, 1)
    bump = GridFunction(grid, dyadic.torus_bump_samples(grid, root, 4).astype(complex))
    rows = []
    for t, seed in enumerate(ctx.seeds(71, ctx.trials(100))):
        family = _size_energy_family(seed, grid, root, depth=3)
        spec = operators.ParaproductSpec.constant(grid, family)
        f = generate_trial("bump_train", seed, {"grid": grid, "count": 3})
        g = generate_trial("bump_train", seed + 1, {"grid": grid, "count": 3})
        h = generate_trial("bump_train", seed + 2, {"grid": grid, "count": 3})
        lam = abs(operators.trilinear_form(spec, f, g, h))
        rhs = 1.0
        for func in (f, g, h):
            st = analysis.size_tilde(func, family, I0=root, M=4).value
            l1 = lp_norm(func, 1, weight=bump)
            rhs *= st ** (2.0 / 3.0) * l1 ** (1.0 / 3.0)
        if rhs == 0:
            continue
        rows.append(TrialRow(name, t, seed, lam, rhs, lam / rhs, {}))
    max_ratio = max(r.ratio for r in rows)
    passed = max_ratio <= cap
    agg = {"max_ratio": max_ratio, "cap": cap}
    return TargetResult(name, statement, rows, agg, passed)


def _run_local_l1(ctx, name, statement) -> TargetResult:
    grid = SampleGrid(512, 4.0)
    cap = ctx.cap(name, 4.0)
    root = dyadic.DyadicInterval(1, 1)
    rows = []
    for t, seed in enumerate(ctx.seeds(72, ctx.trials(100))):
        family = _size_energy_family(seed, grid, root, depth=3)
        spec = operators.ParaproductSpec.constant(grid, family)
        f = generate_trial("bump_train", seed, {"grid": grid, "count": 2})
        g = generate_trial("bump_train", seed + 1, {"grid": grid, "count": 2})
        Et = generate_trial("dyadic_union", seed + 2, {"grid": grid, "measure": 0.5})
        out = operators.discretized_paraproduct(spec, f, g)
        lhs = lp_norm(GridFunction(grid, out.samples * Et.mask), 1)
        rhs = (
            analysis.size_tilde(f, family, I0=root, M=4).value
            * analysis.size_tilde(g, family, I0=root, M=4).value
            * analysis.size_tilde(Et.indicator, family, I0=root, M=4).value
            * root.length
        )
        if rhs == 0:
            continue
        rows.append(TrialRow(name, t, seed, lhs, rhs, lhs / rhs, {}))
    max_ratio = max(r.ratio for r in rows)
    passed = max_ratio <= cap
    agg = {"max_ratio": max_ratio, "cap": cap}
    return TargetResult(name, statement, rows, agg, passed)


def _localized_operator_rows(ctx, name, r1, r2, r, eps, seed_base, trials,
                             vector_K=None):
    grid = SampleGrid(512, 4.0)
    root = dyadic.DyadicInterval(1, 1)
    bump = GridFunction(grid, dyadic.torus_bump_samples(grid, root, 4).astype(complex))
    rows = []
    dual = lambda e: 1.0 - 1.0 / e  # noqa: E731
    for t, seed in enumerate(ctx.seeds(seed_base, trials)):
        family = _size_energy_family(seed, grid, root, depth=3)
        spec = operators.ParaproductSpec.constant(grid, family)
        F = generate_trial("dyadic_union", seed + 5, {"grid": grid, "measure": 1.0})
        G = generate_trial("dyadic_union", seed + 6, {"grid": grid, "measure": 1.0})
        Et = generate_trial("dyadic_union", seed + 7, {"grid": grid, "measure": 0.5})
        loc = operators.LocalizationSpec(root, F, G, Et)
        sF = analysis.size_tilde(F.indicator, family, I0=root, M=4).value
        sG = analysis.size_tilde(G.indicator, family, I0=root, M=4).value
        sE = analysis.size_tilde(Et.indicator, family, I0=root, M=4).value
        if vector_K is None:
            f = generate_trial("bump_train", seed, {"grid": grid, "count": 2})
            g = generate_trial("bump_train", seed + 1, {"grid": grid, "count": 2})
            out = operators.localized_paraproduct(spec, loc, f, g)
            lhs = lp_norm(out, r)
            nf = lp_norm(f, r1, weight=bump)
            ng = lp_norm(g, r2, weight=bump)
        else:
            comps_f, comps_g, outs = [], [], []
            for k in range(vector_K):
                fk = generate_trial("bump_train", seed + 10 * k, {"grid": grid, "count": 2})
                gk = generate_trial("bump_train", seed + 10 * k + 1, {"grid": grid, "count": 2})
                comps_f.append(fk.samples)
                comps_g.append(gk.samples)
                outs.append(operators.localized_paraproduct(spec, loc, fk, gk).samples)
            rf = float(r1)
            stack_f = np.power(np.sum(np.abs(comps_f) ** rf, axis=0), 1 / rf)
            rg = float(r2)
            stack_g = np.power(np.sum(np.abs(comps_g) ** rg, axis=0), 1 / rg)
            rr = float(r)
            stack_o = np.power(np.sum(np.abs(outs) ** rr, axis=0), 1 / rr)
            lhs = lp_norm(GridFunction(grid, stack_o.astype(complex)), r)
            nf = lp_norm(GridFunction(grid, stack_f.astype(complex)), r1, weight=bump)
            ng = lp_norm(GridFunction(grid, stack_g.astype(complex)), r2, weight=bump)
        rhs = (
            sF ** max(dual(float(r1)) - eps, 0.0)
            * sG ** max(dual(float(r2)) - eps, 0.0)
            * sE ** max(1.0 / float(r) - eps, 0.0)
            * nf * ng
        )
        if rhs == 0:
            continue
        rows.append(TrialRow(name, t, seed, lhs, rhs, lhs / rhs, {"eps": eps}))
    return rows


def _run_localized_operator(ctx, name, statement) -> TargetResult:
    cap = ctx.cap(name, 4.0)
    r1, r2, r = 1.5, 1.5, 0.75
    rows = []
    per_eps = ctx.trials(34)
    for i, eps in enumerate(ctx.eps_values):
        rows.extend(
            _localized_operator_rows(ctx, name, r1, r2, r, eps, 73 + i, per_eps)
        )
    max_ratio = max(r_.ratio for r_ in rows)
    passed = max_ratio <= cap
    agg = {"max_ratio": max_ratio, "cap": cap, "eps_values": list(ctx.eps_values)}
    return TargetResult(name, statement, rows, agg, passed)


def _run_vv_localized(ctx, name, statement) -> TargetResult:
    cap = ctx.cap(name, 4.0)
    rows = _localized_operator_rows(
        ctx, name, 1.5, 1.5, 0.75, 0.05, 80, ctx.trials(30), vector_K=4
    )
    max_ratio = max(r.ratio for r in rows)
    passed = max_ratio <= cap
    agg = {"max_ratio": max_ratio, "cap": cap, "K": 4}
    return TargetResult(name, statement, rows, agg, passed)


def _run_bht_localized(ctx, name, statement) -> TargetResult:
    grid = SampleGrid(512, 1.0)
    cap = ctx.cap(name, 4.0)
    root = dyadic.DyadicInterval(1, 1)
    bump = GridFunction(grid, dyadic.torus_bump_samples(grid, root, 4).astype(complex))
    theta = 1.0 / 3.0
    r1 = r2 = 2.0
    r = 1.0
    expo1 = (1 + theta) / 2 - 1 / r1  # exponents of the local sizes
    expo3 = (1 + theta) / 2 - 0.0  # 1/r' = 0 at r = 1
    rows = []
    for t, seed in enumerate(ctx.seeds(85, ctx.trials(50))):
        tiles = dyadic.build_rank_one_tiles(grid, range(3, 6), range(0, 4))
        tiles = [tt for tt in tiles if root.contains(tt.spatial)]
        spec = operators.BHTModelSpec(grid, tiles)
        F = generate_trial("dyadic_union", seed + 5, {"grid": grid, "measure": 0.25})
        G = generate_trial("dyadic_union", seed + 6, {"grid": grid, "measure": 0.25})
        Et = generate_trial("dyadic_union", seed + 7, {"grid": grid, "measure": 0.25})
        f = generate_trial("bump_train", seed, {"grid": grid, "count": 2})
        g = generate_trial("bump_train", seed + 1, {"grid": grid, "count": 2})
        fF = GridFunction(grid, f.samples * F.mask)
        gG = GridFunction(grid, g.samples * G.mask)
        out = operators.bht_model(spec, fF, gG)
        lhs = lp_norm(GridFunction(grid, out.samples * Et.mask), r)
        spatial = [tt.spatial for tt in tiles]
        sF = analysis.size_tilde(F.indicator, spatial, I0=root, M=4).value
        sG = analysis.size_tilde(G.indicator, spatial, I0=root, M=4).value
        sE = analysis.size_tilde(Et.indicator, spatial, I0=root, M=4).value
        rhs = (
            sF ** expo1 * sG ** expo1 * sE ** expo3
            * lp_norm(f, r1, weight=bump) * lp_norm(g, r2, weight=bump)
        )
        if rhs == 0:
            continue
        rows.append(TrialRow(name, t, seed, lhs, rhs, lhs / rhs, {}))
    max_ratio = max(r_.ratio for r_ in rows)
    passed = max_ratio <= cap
    agg = {"max_ratio": max_ratio, "cap": cap, "theta": theta}
    return TargetResult(name, statement, rows, agg, passed)


def _run_tensor_mixed_norm(ctx, name, statement) -> TargetResult:
    n = 128
    grid = SampleGrid(n, 1.0, dimension=2)
    cap = ctx.cap(name, 1.0)
    rows = []
    for t, seed in enumerate(ctx.seeds(90, ctx.trials(50))):
        f = generate_trial("band_limited", seed, {"grid": grid, "band": n // 16})
        g = generate_trial("band_limited", seed + 13, {"grid": grid, "band": n // 16})
        out = operators.tensor_paraproduct(f, g)
        lhs = mixed_norm(out, MixedNormSpec((2, 2)))
        rhs = mixed_norm(f, MixedNormSpec((4, 4))) * mixed_norm(g, MixedNormSpec((4, 4)))
        if rhs == 0:
            continue
        rows.append(TrialRow(name, t, seed, lhs, rhs, lhs / rhs, {}))
    max_ratio = max(r.ratio for r in rows)
    passed = max_ratio <= cap
    agg = {"max_ratio": max_ratio, "cap": cap,
           "exponents": {"p": [4, 4], "q": [4, 4], "s": [2, 2]}}
    return TargetResult(name, statement, rows, agg, passed)


def _run_depth2_vv(ctx, name, statement) -> TargetResult:
    grid = SampleGrid(512, 1.0)
    cap = ctx.cap(name, 1.0)
    K1 = K2 = 3
    rows = []
    fam = dyadic.grid_dyadic_family(grid, range(1, 6))
    spec = operators.ParaproductSpec.constant(grid, fam)

    def op(fc, gc):
        return operators.discretized_paraproduct(spec, fc, gc)

    for t, seed in enumerate(ctx.seeds(95, ctx.trials(10))):
        fs = generate_trial("band_limited", seed,
                            {"grid": grid, "band": 48, "vector_shape": (K1, K2)})
        gs = generate_trial("band_limited", seed + 3,
                            {"grid": grid, "band": 48, "vector_shape": (K1, K2)})
        out, (n_out, n_f, n_g) = operators.vector_valued_apply(
            op, fs, gs,
            MixedNormSpec((4, INF, 2)),
            MixedNormSpec((4, 2, INF)),
            MixedNormSpec((2, 2, 2)),
        )
        if n_f == 0 or n_g == 0:
            continue
        ratio = n_out / (n_f * n_g)
        rows.append(TrialRow(name, t, seed, n_out, n_f * n_g, ratio,
                             {"K": [K1, K2]}))
    max_ratio = max(r.ratio for r in rows)
    passed = max_ratio <= cap
    agg = {"max_ratio": max_ratio, "cap": cap,
           "inner_tuples": {"R1": ["inf", 2], "R2": [2, "inf"], "R": [2, 2]}}
    return TargetResult(name, statement, rows, agg, passed)


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------

def _entry(name, statement, runner, cap):
    return InequalityTarget(name, statement,
                            lambda ctx, n=name, s=statement, r=runner: r(ctx, n, s),
                            cap)


REGISTRY: dict[str, InequalityTarget] = {}

for _t in (
    _entry("telescope-1d",
           "f*g = sum_k [Q_k f P_k g + P_k f Q_k g + Q_k f Q_k g] + coarse block",
           _run_telescope_1d, 1.0),
    _entry("telescope-2d",
           "f*g equals the nine bi-parameter terms plus the coarse remainder",
           _run_telescope_2d, 1.0),
    _entry("weak-dualization",
           "||f||_{p,inf} ~ sup_E inf_{major E~} ||f 1_E~||_r / |E|^(1/r-1/p)",
           _run_weak_dualization, 4.0),
    _entry("stopping-invariants",
           "triple stopping time: exact partition, per-level disjointness, "
           "sum |I| <= C 2^n ||1_E chi||_1",
           _run_stopping, 8.0),
    _entry("size-energy",
           "size <= C sup-average and energy <= C ||f||_1",
           _run_size_energy, 4.0),
    _entry("vv-paraproduct",
           "||(sum |Pi(f_k,g_k)|^r)^(1/r)||_s <= C ||(sum |f_k|^r1)^(1/r1)||_p "
           "||(sum |g_k|^r2)^(1/r2)||_q, uniformly in K",
           _run_vv_paraproduct, 1.0),
    _entry("alpha-coefficients",
           "|c_n| (1+|n|)^(1+alpha) bounded, coefficients scale-invariant",
           _run_alpha_coefficients, 4.0),
    _entry("shifted-growth",
           "L2 norms of shifted maximal/square/paraproduct grow at most like "
           "C log^kappa(1+|n|), kappa <= 2.5",
           _run_shifted_growth, 2.5),
    _entry("bht-multiplier",
           "p.v. integral f(x-t)g(x+t) dt/t acts as -i pi sgn(xi-eta)",
           _run_bht_multiplier, 1.0),
    _entry("bht-local-l2",
           "||BHT_P(f,g)||_1 <= C ||f||_2 ||g||_2, uniform as tiles quadruple",
           _run_bht_local_l2, 2.0),
    _entry("range-consistency",
           "case table for the admissible exponent region agrees with exact "
           "theta-feasibility on the step-1/24 rational grid",
           _run_range_consistency, 1.0),
    _entry("leibniz-mixed",
           "||D1^a D2^b (fg)||_{s1,s2} <= C sum of four derivative-norm "
           "products; ratio stable under dyadic dilation",
           _run_leibniz, 1.0),
    _entry("trilinear-size-energy",
           "|Lambda(f,g,h)| <= C prod size^(2/3) energy^(1/3)",
           _run_trilinear_size_energy, 8.0),
    _entry("localized-trilinear",
           "|Lambda_I0(f,g,h)| <= C prod size~^(2/3) ||. chi_I0||_1^(1/3)",
           _run_localized_trilinear, 8.0),
    _entry("local-l1",
           "||Pi_I0(f,g) 1_E~||_1 <= C size~ f size~ g size~ 1_E~ |I0|",
           _run_local_l1, 4.0),
    _entry("localized-operator",
           "||Pi_I0^{F,G,E~}(f,g)||_r <= C prod size~^(exponent-eps) "
           "||f chi||_r1 ||g chi||_r2 at (3/2,3/2,3/4)",
           _run_localized_operator, 4.0),
    _entry("vv-localized",
           "l^r-valued localized paraproduct bound at (3/2,3/2,3/4), K=4",
           _run_vv_localized, 4.0),
    _entry("bht-localized",
           "||BHT_I0^{F,G,E~}(f,g)||_1 <= C prod size~^((1+theta)/2 - 1/r_i) "
           "||f chi||_2 ||g chi||_2",
           _run_bht_localized, 4.0),
    _entry("tensor-mixed-norm",
           "||Pi x Pi(f,g)||_{L2 L2} <= C ||f||_{L4 L4} ||g||_{L4 L4}",
           _run_tensor_mixed_norm, 1.0),
    _entry("depth2-vv",
           "depth-2 vector-valued paraproduct bound with the (inf,2) pattern",
           _run_depth2_vv, 1.0),
):
    REGISTRY[_t.name] = _t


def target_names() -> list[str]:
    return list(REGISTRY)
