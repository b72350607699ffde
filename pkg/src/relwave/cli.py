"""Command-line front end: ``relwave <command> --config FILE --out DIR``.

Exit codes: 0 success, 2 configuration error, 3 numerical-consistency failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import find_peaks, pair_and_measure, relative_difference_series, windowed_max_abs
from .config import OUTPUTS, Quantity, RunConfig, load_config
from .errors import ConfigError, ConsistencyError, DomainError
from .numerics import ExtendedReal
from .rotor import analytic_moments, density, quadrature_moments, spinor_weights
from .spectra import (
    HydrogenModel,
    RotorModel,
    Theory,
    critical_time,
    hydrogen_delta_series,
    hydrogen_levels_j,
    timescales,
)
from .units import convert_units
from .wavepacket import (
    autocorrelation,
    autocorrelation_trace,
    envelope_shift_fraction,
    evolve,
    gaussian_coefficients,
    make_times,
    overlap,
    shift_fraction,
)

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3


# ---------------------------------------------------------------------------
# output tables
# ---------------------------------------------------------------------------


class OutputTable:
    """Rectangular table written as CSV under a ``# key: value`` header."""

    def __init__(self, name: str, columns: list[str], rows: list, meta: dict | None = None):
        self.name = name
        self.columns = columns
        self.rows = rows
        self.meta = meta or {}

    def render(self, cfg: RunConfig, timestamp: str) -> str:
        buf = io.StringIO()
        buf.write(f"# table: {self.name}\n")
        buf.write(f"# config_sha256: {cfg.sha256}\n")
        buf.write(f"# code_version: {__version__}\n")
        for k, v in self.meta.items():
            buf.write(f"# {k}: {v}\n")
        buf.write(f"# generated: {timestamp}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for row in self.rows:
            w.writerow([_fmt(v) for v in row])
        return buf.getvalue()


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (int, np.integer)):
        return int(v)
    return v


def _write_atomic(path: Path, text: str):
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# ---------------------------------------------------------------------------
# run context
# ---------------------------------------------------------------------------


class Context:
    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        try:
            if cfg.system == "rotor":
                self.model = RotorModel(R=cfg.R, c=cfg.c, m0=cfg.m0)
            else:
                self.model = HydrogenModel(j=cfg.j, l=cfg.l, c=cfg.c, m0=cfg.m0)
        except DomainError as exc:
            raise ConfigError(str(exc)) from None
        self._ts = None
        self._coeffs = None

    @property
    def nbar_int(self) -> int:
        return int(round(self.cfg.nbar))

    @property
    def rel_timescales(self):
        if self._ts is None:
            self._ts = timescales(self.model, self.nbar_int, Theory.REL)
        return self._ts

    @property
    def coeffs(self):
        if self._coeffs is None:
            self._coeffs = gaussian_coefficients(self.cfg.nbar, self.cfg.sigma0, self.cfg.theta0,
                                                 self.cfg.window, self.model.min_n())
        return self._coeffs

    def to_au(self, q: Quantity) -> float:
        if q.unit in ("t_cl", "t_rev", "t_sup"):
            scale = getattr(self.rel_timescales, {"t_cl": "T_cl", "t_rev": "T_rev", "t_sup": "T_sup"}[q.unit])
            if not math.isfinite(scale):
                raise ConfigError(f"{q.unit} is infinite for this model")
            return q.value * scale
        return convert_units(q.value, q.unit, "au")

    def window_times(self, w):
        step = self.to_au(w.step)
        hw = self.to_au(w.half_width)
        if hw / step > 5e6:
            raise ConfigError(f"window {w.name!r} needs more than 1e7 samples")
        return make_times(self.to_au(w.center), hw, step), self.to_au(w.center), hw, step


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_energies(ctx: Context) -> list[OutputTable]:
    cfg = ctx.cfg
    if cfg.system == "hydrogen":
        lo = cfg.n_min if cfg.n_min is not None else 1
        hi = cfg.n_max if cfg.n_max is not None else 300
        ns = np.arange(lo, hi + 1)
        # energies depend only on (n, j); n below l + 1 is reported using the j formula
        lev = hydrogen_levels_j(ns, cfg.j, cfg.c, cfg.m0)
        series = hydrogen_delta_series(ns, cfg.j, cfg.c, cfg.m0)
    else:
        lo = cfg.n_min if cfg.n_min is not None else -10
        hi = cfg.n_max if cfg.n_max is not None else 10
        ns = np.arange(lo, hi + 1)
        lev = ctx.model.levels(ns)
        series = None
    e_rel, e_nr, dl = np.atleast_1d(lev.E_rel), np.atleast_1d(lev.E_nr), np.atleast_1d(lev.delta_value)
    rows = []
    for i, n in enumerate(ns):
        degenerate = e_rel[i] == 0
        rd = math.nan if degenerate else dl[i] / e_rel[i]
        row = [int(n), e_rel[i], e_nr[i], dl[i]]
        if series is not None:
            row.append(series[i])
        rows.append(row + [rd, degenerate])
    cols = ["n", "E_rel_hartree", "E_nr_hartree", "delta_hartree"]
    if series is not None:
        cols.append("delta_series_hartree")
    cols += ["rel_diff", "degenerate"]
    return [OutputTable("energies", cols, rows, {"system": cfg.system})]


def cmd_timescales(ctx: Context) -> list[OutputTable]:
    rows = []
    for th in (Theory.NR, Theory.REL):
        ts = timescales(ctx.model, ctx.nbar_int, th)
        vals = [ts.T_cl, ts.T_rev, ts.T_sup, ts.T_critical]
        degenerate = not all(math.isfinite(v) for v in vals)
        vals = [v if math.isfinite(v) else math.nan for v in vals]
        secs = [convert_units(v, "au", "s") for v in vals]
        rows.append([th.value, ctx.nbar_int] + vals + secs + [degenerate])
    cols = ["theory", "nbar", "T_cl_au", "T_rev_au", "T_sup_au", "T_critical_au",
            "T_cl_s", "T_rev_s", "T_sup_s", "T_critical_s", "degenerate"]
    return [OutputTable("timescales", cols, rows)]


def cmd_breakdown(ctx: Context) -> list[OutputTable]:
    lev = ctx.model.levels(np.array(ctx.nbar_int))
    d = float(lev.delta_value)
    tc = critical_time(d)
    degenerate = not math.isfinite(tc)
    e = float(lev.E_rel)
    frac = d / e if e else math.nan
    row = [ctx.nbar_int, d, tc if not degenerate else math.nan,
           convert_units(tc, "au", "s") if not degenerate else math.nan, frac, degenerate]
    cols = ["nbar", "delta_hartree", "T_critical_au", "T_critical_s", "shift_fraction", "degenerate"]
    return [OutputTable("breakdown", cols, [row])]


def _rotor_moment_series(ctx: Context, w):
    times, center, hw, step = ctx.window_times(w)
    c = ctx.coeffs
    weights = spinor_weights(ctx.model, c.ns)
    m_nr = analytic_moments(evolve(c, ctx.model, times, Theory.NR), weights, Theory.NR)
    m_rel = analytic_moments(evolve(c, ctx.model, times, Theory.REL), weights, Theory.REL)
    t = times.to_float()
    rd_mean = relative_difference_series(m_nr.mean, m_rel.mean, t)
    rd_var = relative_difference_series(m_nr.variance, m_rel.variance, t)
    return t, center, hw, m_nr, m_rel, rd_mean, rd_var


def cmd_rotor_moments(ctx: Context, pool) -> list[OutputTable]:
    _need_rotor(ctx)
    results = list(pool.map(lambda w: (w, _rotor_moment_series(ctx, w)), ctx.cfg.windows))
    tables = []
    for w, (t, center, hw, m_nr, m_rel, rdm, rdv) in results:
        rows = [
            [t[i], m_nr.mean[i], m_rel.mean[i], m_nr.variance[i], m_rel.variance[i],
             rdm.rel_diff[i], rdv.rel_diff[i], bool(rdm.degenerate[i] or rdv.degenerate[i])]
            for i in range(t.size)
        ]
        cols = ["t_au", "mean_nr_rad", "mean_rel_rad", "var_nr_rad2", "var_rel_rad2",
                "rel_diff_mean", "rel_diff_var", "degenerate"]
        tables.append(OutputTable(f"rotor_moments_{w.name}", cols, rows,
                                  {"window_center_au": repr(center), "window_half_width_au": repr(hw)}))
    return tables


def cmd_rotor_density(ctx: Context, pool) -> list[OutputTable]:
    _need_rotor(ctx)
    c = ctx.coeffs
    weights = spinor_weights(ctx.model, c.ns)
    M = ctx.cfg.grid_size

    def one(w):
        times = ctx.window_times(w)[0]
        d_nr = density(evolve(c, ctx.model, times, Theory.NR), weights, M)
        d_rel = density(evolve(c, ctx.model, times, Theory.REL), weights, M)
        return w, times.to_float(), d_nr, d_rel

    tables = []
    for w, t, d_nr, d_rel in pool.map(one, ctx.cfg.windows):
        rows = [[t[i], d_nr.theta[m], d_nr.values[i, m], d_rel.values[i, m]]
                for i in range(t.size) for m in range(M)]
        tables.append(OutputTable(f"rotor_density_{w.name}", ["t_au", "theta_rad", "rho_nr_per_rad", "rho_rel_per_rad"],
                                  rows, {"grid_size": M}))
    return tables


def _traces(ctx: Context, w):
    times, center, hw, step = ctx.window_times(w)
    tr = autocorrelation_trace(ctx.coeffs, ctx.model, times, Theory.REL)
    tn = autocorrelation_trace(ctx.coeffs, ctx.model, times, Theory.NR)
    return tr, tn, step


def cmd_autocorr(ctx: Context, pool) -> list[OutputTable]:
    tables = []
    for w, (tr, tn, _) in pool.map(lambda w: (w, _traces(ctx, w)), ctx.cfg.windows):
        rows = [[tr.times[i], convert_units(tr.times[i], "au", "s"), tr.values[i].real, tr.values[i].imag,
                 tr.abs2[i], tn.values[i].real, tn.values[i].imag, tn.abs2[i]] for i in range(tr.times.size)]
        cols = ["t_au", "t_s", "re_C_rel", "im_C_rel", "abs2_C_rel", "re_C_nr", "im_C_nr", "abs2_C_nr"]
        tables.append(OutputTable(f"autocorr_{w.name}", cols, rows))
    return tables


def cmd_compare(ctx: Context, pool) -> list[OutputTable]:
    cfg = ctx.cfg
    if cfg.system == "rotor":
        rows = []
        for w, (t, center, hw, _, _, rdm, rdv) in pool.map(lambda w: (w, _rotor_moment_series(ctx, w)), cfg.windows):
            rows.append([w.name, center, hw, windowed_max_abs(rdm, center, hw), windowed_max_abs(rdv, center, hw)])
        cols = ["window", "center_au", "half_width_au", "max_abs_rel_diff_mean", "max_abs_rel_diff_var"]
        return [OutputTable("compare_moments", cols, rows)]
    f = shift_fraction(ctx.model, ctx.nbar_int)
    fe = envelope_shift_fraction(ctx.model, ctx.nbar_int)
    sep = ctx.to_au(cfg.min_separation)
    rows = []
    for w, (tr, tn, step) in pool.map(lambda w: (w, _traces(ctx, w)), cfg.windows):
        pr = find_peaks(tr, cfg.min_height, sep)
        pn = find_peaks(tn, cfg.min_height, sep)
        if not pr or not pn:
            continue
        for p in pair_and_measure(pr, pn, f, step).pairs:
            rows.append([w.name, p.t_rel, p.t_nr, p.shift, convert_units(p.shift, "au", "s"), p.predicted_shift,
                         fe * p.t_rel, p.shift / p.predicted_shift, p.height_rel, p.height_nr, p.ambiguous])
    cols = ["window", "t_rel_au", "t_nr_au", "shift_au", "shift_s", "predicted_shift_au",
            "envelope_predicted_shift_au", "shift_over_predicted", "height_rel", "height_nr", "ambiguous"]
    return [OutputTable("compare_peaks", cols, rows, {"shift_fraction": repr(f), "envelope_shift_fraction": repr(fe)})]


def _need_rotor(ctx):
    if ctx.cfg.system != "rotor":
        raise ConfigError("this output needs a rotor system")


COMMANDS = {
    "energies": lambda ctx, pool: cmd_energies(ctx),
    "timescales": lambda ctx, pool: cmd_timescales(ctx),
    "breakdown": lambda ctx, pool: cmd_breakdown(ctx),
    "rotor-moments": cmd_rotor_moments,
    "rotor-density": cmd_rotor_density,
    "autocorr": cmd_autocorr,
    "compare": cmd_compare,
}
assert set(COMMANDS) == set(OUTPUTS)


# ---------------------------------------------------------------------------
# consistency checks
# ---------------------------------------------------------------------------


def consistency_checks(ctx: Context) -> dict:
    """Internal cross-checks for the configured system; raises ConsistencyError on failure."""
    report = {}
    model = ctx.model
    nbar = ctx.nbar_int if ctx.cfg.nbar is not None else model.min_n() or 1
    lev = model.levels(np.array(nbar))
    if isinstance(model, HydrogenModel):
        from .spectra import dirac_hydrogen_energy

        direct = dirac_hydrogen_energy(nbar, model.j, model.c, model.m0)
        series = hydrogen_delta_series(nbar, model.j, model.c, model.m0)
        report["delta_vs_series"] = abs(lev.delta_value / series - 1)
        if nbar >= 2 and report["delta_vs_series"] > 1e-3:
            raise ConsistencyError("delta disagrees with the alpha^4 series term")
    else:
        from .spectra import rotor_rel_energy_direct

        direct = rotor_rel_energy_direct(model, nbar)
    report["e_rel_reconstruction"] = abs(float(lev.E_rel) - float(direct))
    if report["e_rel_reconstruction"] > 8 * np.spacing(abs(float(direct))) + 1e-300:
        raise ConsistencyError("E_nr + delta does not reproduce E_rel")
    if ctx.cfg.sigma0 is not None:
        c = ctx.coeffs
        t = 0.37 * (ctx.rel_timescales.T_rev if math.isfinite(ctx.rel_timescales.T_rev) else 1.0)
        for th in (Theory.NR, Theory.REL):
            ev = evolve(c, model, t, th)
            a = autocorrelation(c, model, t, th)
            b = overlap(ev, c)
            report[f"autocorr_dual_path_{th.value}"] = abs(a - b)
            if abs(a - b) > 1e-12:
                raise ConsistencyError("autocorrelation closed form and inner product disagree")
        if isinstance(model, RotorModel):
            w = spinor_weights(model, c.ns)
            for th in (Theory.NR, Theory.REL):
                ev = evolve(c, model, t, th)
                am = analytic_moments(ev, w, th)
                qm = quadrature_moments(density(ev, w, max(ctx.cfg.grid_size, 4 * len(c))))
                err = max(abs(am.mean / qm.mean - 1), abs(am.variance / qm.variance - 1))
                report[f"moments_oracle_{th.value}"] = err
                if err > 1e-6:
                    raise ConsistencyError("analytic and quadrature moments disagree")
    return report


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def run(cfg: RunConfig, out_dir, commands=None, threads: int = 1, timestamp: str | None = None) -> list[Path]:
    """Execute ``commands`` (default: the config's outputs) and write CSV tables."""
    ctx = Context(cfg)
    commands = list(commands or cfg.outputs)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    stamp = timestamp or datetime.now(timezone.utc).isoformat(timespec="seconds")
    written = []
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        for name in commands:
            for table in COMMANDS[name](ctx, pool):
                path = out / f"{table.name}.csv"
                _write_atomic(path, table.render(cfg, stamp))
                written.append(path)
    return written


def _error(kind: str, message: str, code: int) -> int:
    print(json.dumps({"error": kind, "message": message, "exit_code": code}), file=sys.stderr)
    return code


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="relwave", description=__doc__.splitlines()[0])
    parser.add_argument("command", nargs="?", default="run", choices=("run",) + OUTPUTS,
                        help="output to produce; 'run' produces every output listed in the config")
    parser.add_argument("--config", required=True, help="config file path or bundled config name")
    parser.add_argument("--out", default="relwave-out", help="output directory")
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument("--check", action="store_true", help="run internal consistency checks and exit")
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.check:
            report = consistency_checks(Context(cfg))
            print(json.dumps({"status": "ok", "checks": report}, sort_keys=True))
            return EXIT_OK
        commands = None if args.command == "run" else [args.command]
        if commands is None and not cfg.outputs:
            raise ConfigError("no outputs requested")
        for path in run(cfg, args.out, commands, args.threads):
            print(path)
    except (ConfigError, DomainError) as exc:
        return _error("config", str(exc), EXIT_CONFIG)
    except ConsistencyError as exc:
        return _error("numerical-consistency", str(exc), EXIT_NUMERIC)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
