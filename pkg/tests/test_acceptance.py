"""Acceptance criteria 1-10.  Each test prints one ``criterion N: PASS|FAIL`` line."""
import math

import mpmath as mp
import numpy as np
import pytest

import oracles
from conftest import ACCEPTANCE_LINES
from relwave.analysis import find_peaks, pair_and_measure, relative_difference_series, windowed_max_abs
from relwave.cli import Context
from relwave.config import load_config
from relwave.numerics import TWO_PI, ExtendedReal, reduce_phase
from relwave.rotor import analytic_moments, density, quadrature_moments, spinor_weights
from relwave.spectra import (
    HydrogenModel,
    RotorModel,
    Theory,
    critical_time,
    hydrogen_levels_j,
    timescales,
)
from relwave.units import convert_units
from relwave.wavepacket import (
    autocorrelation,
    autocorrelation_trace,
    evolve,
    gaussian_coefficients,
    make_times,
    overlap,
    shift_fraction,
)

RNG = np.random.default_rng(20261014)


def verdict(n, checks):
    """checks: list of (label, ok, detail)."""
    ok = all(c[1] for c in checks)
    detail = "; ".join(f"{lab} {'ok' if good else 'FAILED'} ({d})" for lab, good, d in checks)
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


def within(value, target, rel):
    return abs(value / target - 1) <= rel


def test_criterion_1_rotor_delta():
    lev = RotorModel(R=1000).levels(np.array(1))
    d1 = lev.delta_value
    ref = float(oracles.rotor_energy(1) - oracles.rotor_energy_nr(1))
    tc = critical_time(d1)
    verdict(1, [
        ("delta_1 vs -6.66e-18 (3%)", within(d1, -6.66e-18, 0.03), f"{d1:.6e}"),
        ("delta_1 vs 60-digit (1e-12)", within(d1, ref, 1e-12), f"ref {ref:.15e}"),
        ("T_critical vs 1.5e17 (3%)", within(tc, 1.5e17, 0.03), f"{tc:.5e} au"),
    ])


def test_criterion_2_hydrogen_breakdown():
    h = HydrogenModel()
    t40 = convert_units(timescales(h, 40, Theory.REL).T_critical, "au", "ns")
    t300 = convert_units(timescales(h, 300, Theory.REL).T_critical, "au", "ms")
    verdict(2, [
        ("nbar=40 vs 59 ns (10%)", within(t40, 59.0, 0.10), f"{t40:.4g} ns"),
        ("nbar=300 vs 0.02 ms (10%)", within(t300, 0.02, 0.10), f"{t300:.4g} ms"),
    ])


def test_criterion_3_fig3a():
    ns = np.arange(1, 301)
    lev = hydrogen_levels_j(ns, 0.5)
    rd = np.asarray(lev.delta_value) / np.asarray(lev.E_rel)
    peak = int(ns[np.argmax(rd)])
    verdict(3, [
        ("peak at n=2", peak == 2, f"n={peak}"),
        ("peak value 1.7e-5 (5%)", within(rd[1], 1.7e-5, 0.05), f"{rd[1]:.5e}"),
        ("rises from n=1", rd[0] < rd[1], f"{rd[0]:.4e} -> {rd[1]:.4e}"),
        ("monotone decrease n>=2", bool(np.all(np.diff(rd[1:]) < 0)), "n=2..300"),
    ])


def test_criterion_4_rotor_timescales():
    m = RotorModel(R=1000)
    nr = timescales(m, 1, Theory.NR)
    rel = timescales(m, 1, Theory.REL)
    verdict(4, [
        ("NR T_rev vs 4pi e6 (1e-6)", within(nr.T_rev, 4 * math.pi * 1e6, 1e-6), f"{nr.T_rev:.12e}"),
        ("REL T_sup vs 2.4e17 (5%)", within(rel.T_sup, 2.4e17, 0.05), f"{rel.T_sup:.5e}"),
    ])


@pytest.mark.slow
def test_criterion_5_fig1_windowed_maxima():
    m = RotorModel(R=1000)
    c = gaussian_coefficients(1, 0.271, math.pi)
    w = spinor_weights(m, c.ns)
    hw, step = 2 * math.pi * 1e6, 2 * math.pi * 1e3
    targets = {2.2e14: (0.17, 0.51), 2.1e15: (0.36, 1.93), 3.1e16: (0.38, 2.34)}
    checks = []
    for centre, (tm, tv) in targets.items():
        times = make_times(centre, hw, step)
        a_nr = analytic_moments(evolve(c, m, times, Theory.NR), w, Theory.NR)
        a_rel = analytic_moments(evolve(c, m, times, Theory.REL), w, Theory.REL)
        t = times.to_float()
        mm = windowed_max_abs(relative_difference_series(a_nr.mean, a_rel.mean, t), centre, hw)
        mv = windowed_max_abs(relative_difference_series(a_nr.variance, a_rel.variance, t), centre, hw)
        checks.append((f"t={centre:.1e} mean {tm:.0%} (3pp)", abs(mm - tm) <= 0.03, f"{mm:.2%}"))
        checks.append((f"t={centre:.1e} var {tv:.0%} (3pp)", abs(mv - tv) <= 0.03, f"{mv:.2%}"))
    verdict(5, checks)


def test_criterion_6_revival():
    m = RotorModel(R=1000)
    c = gaussian_coefficients(1, 0.271, math.pi)
    w = spinor_weights(m, c.ns)
    T = TWO_PI * 2e6
    worst = 0.0
    for t in RNG.uniform(0, 3e16, 20):
        a = density(evolve(c, m, t, Theory.NR), None, 512).values
        b = density(evolve(c, m, ExtendedReal.of(t) + T, Theory.NR), None, 512).values
        worst = max(worst, float(np.max(np.abs(a - b))))
    # REL: the density at t3 against the density at the same point of the revival cycle near t = 0
    t3 = ExtendedReal.of(3.1e16)
    k = math.floor(3.1e16 / T)
    folded = t3 - ExtendedReal.of(T) * float(k)
    drift = float(np.max(np.abs(density(evolve(c, m, t3, Theory.REL), w, 512).values
                                - density(evolve(c, m, folded, Theory.REL), w, 512).values)))
    t0 = 1e9
    one_rel = float(np.max(np.abs(density(evolve(c, m, ExtendedReal.of(t0) + T, Theory.REL), w, 512).values
                                  - density(evolve(c, m, t0, Theory.REL), w, 512).values)))
    one_nr = float(np.max(np.abs(density(evolve(c, m, ExtendedReal.of(t0) + T, Theory.NR), None, 512).values
                                 - density(evolve(c, m, t0, Theory.NR), None, 512).values)))
    verdict(6, [
        ("NR 20 random t (1e-8)", worst <= 1e-8, f"max {worst:.2e}"),
        ("REL drift at 3.1e16 (>1e-3)", drift > 1e-3, f"{drift:.3f}"),
        ("REL one-period diff > NR", one_rel > one_nr, f"{one_rel:.2e} vs {one_nr:.2e}"),
    ])


@pytest.mark.slow
def test_criterion_7_moment_oracle():
    m = RotorModel(R=1000)
    worst = 0.0
    for _ in range(200):
        c = gaussian_coefficients(RNG.uniform(0, 5), RNG.uniform(0.2, 0.6), RNG.uniform(0, 2 * math.pi))
        w = spinor_weights(m, c.ns)
        t = RNG.uniform(0, 1e16)
        for th in Theory:
            ev = evolve(c, m, t, th)
            a = analytic_moments(ev, w, th)
            q = quadrature_moments(density(ev, w))
            worst = max(worst, abs(a.mean / q.mean - 1), abs(a.variance / q.variance - 1))
    verdict(7, [("200 states analytic vs quadrature (1e-6)", worst <= 1e-6, f"max rel {worst:.2e}, both theories")])


def test_criterion_8_autocorrelation_dual_path():
    worst = 0.0
    for _ in range(100):
        if RNG.random() < 0.5:
            model = RotorModel(R=RNG.uniform(100, 5000))
            c = gaussian_coefficients(RNG.uniform(-5, 5), RNG.uniform(0.2, 0.6), RNG.uniform(0, 2 * math.pi))
            t = RNG.uniform(0, 1e17)
        else:
            model = HydrogenModel()
            c = gaussian_coefficients(RNG.uniform(20, 300), RNG.uniform(0.3, 2.0), n_min=2)
            t = RNG.uniform(0, 1e14)
        for th in Theory:
            worst = max(worst, abs(autocorrelation(c, model, t, th) - overlap(evolve(c, model, t, th), c)))
    verdict(8, [("200 randomized evaluations (1e-12)", worst <= 1e-12, f"max {worst:.2e}")])


QUOTED_SHIFTS_S = {("fig3_n40.cfg", "b"): 0.15e-12, ("fig3_n40.cfg", "c"): 1.5e-12,
                  ("fig3_n300.cfg", "d"): 0.5e-9, ("fig3_n300.cfg", "e"): 2e-9, ("fig3_n300.cfg", "f"): 3e-9}


def _measure(ctx, w, step_factor=1.0):
    times, centre, hw, step = ctx.window_times(w)
    if step_factor != 1.0:
        step *= step_factor
        times = make_times(centre, hw, step)
    tr = autocorrelation_trace(ctx.coeffs, ctx.model, times, Theory.REL)
    tn = autocorrelation_trace(ctx.coeffs, ctx.model, times, Theory.NR)
    sep = ctx.to_au(ctx.cfg.min_separation)
    pr = find_peaks(tr, ctx.cfg.min_height, sep)
    pn = find_peaks(tn, ctx.cfg.min_height, sep)
    res = pair_and_measure(pr, pn, shift_fraction(ctx.model, ctx.nbar_int), step)
    # representative pair: the tallest REL peak
    best = max(res.pairs, key=lambda p: p.height_rel)
    return res.pairs, best


@pytest.mark.slow
def test_criterion_9_hydrogen_peak_shifts():
    checks = []
    shifts, preds = [], []
    for name in ("fig3_n40.cfg", "fig3_n300.cfg"):
        ctx = Context(load_config(name))
        for w in ctx.cfg.windows:
            pairs, best = _measure(ctx, w)
            s = convert_units(best.shift, "au", "s")
            p = convert_units(best.predicted_shift, "au", "s")
            quoted = QUOTED_SHIFTS_S[(name, w.name)]
            shifts += [q.shift for q in pairs]
            preds += [q.predicted_shift for q in pairs]
            checks.append((f"{name}:{w.name} vs prediction (20%)", within(s, p, 0.20),
                           f"{s:.3e} s / {p:.3e} s = {s / p:.3f}"))
            checks.append((f"{name}:{w.name} vs {quoted:.2g} s (x2)", 0.5 <= s / quoted <= 2.0, f"ratio {s / quoted:.3f}"))
            if name == "fig3_n40.cfg" and w.name == "b":
                _, fine = _measure(ctx, w, 0.5)
                conv = abs(fine.shift / best.shift - 1)
                checks.append(("step-halving change (1%)", conv <= 0.01, f"{conv:.2e}"))
    r = float(np.corrcoef(shifts, preds)[0, 1])
    checks.append(("shift vs prediction correlation (>=0.99)", r >= 0.99, f"r={r:.5f}, {len(shifts)} pairs"))
    verdict(9, checks)


def test_criterion_10_phase_precision():
    worst = 0.0
    for _ in range(1000):
        p = 10 ** RNG.uniform(-3, 14)
        e = 10 ** RNG.uniform(-12, 0)
        t = p / e
        got = reduce_phase(e, t)
        worst = max(worst, oracles.circular_gap(got, oracles.reduce(e, 0.0, t)))
    verdict(10, [("1000 random (E, t), E t <= 1e14 (1e-8 rad)", worst <= 1e-8, f"max {worst:.2e} rad")])
