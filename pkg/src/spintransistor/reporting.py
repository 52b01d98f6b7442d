"""CSV and figure emission for scenario, sweep and gate-switch results."""

import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from . import units
from .dynamics import BandTrace, FidelityTrace
from .scenarios import ScenarioResult, StatePrepResult, SweepResult

FORMATS = ("csv", "plot", "both")


def emit(result, fmt="csv", outdir=".", stem=None):
    """Write a result to disk; returns the list of created paths.

    `fmt` is 'csv', 'plot' or 'both'.  CSV layouts follow the trace
    containers; figures show fidelity (or population) against time in
    microseconds.
    """
    if fmt not in FORMATS:
        raise ValueError(f"format must be one of {FORMATS}, got {fmt!r}")
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    if isinstance(result, ScenarioResult):
        return _emit_scenario(result, fmt, outdir, stem or _scenario_stem(result))
    if isinstance(result, SweepResult):
        return _emit_sweep(result, fmt, outdir, stem or "sweep")
    if isinstance(result, StatePrepResult):
        return _emit_prep(result, fmt, outdir, stem or f"state_prep_{result.start}")
    if isinstance(result, (FidelityTrace, BandTrace)):
        path = outdir / f"{stem or 'trace'}.csv"
        result.to_csv(path)
        return [path]
    raise TypeError(f"cannot emit object of type {type(result).__name__}")


def _scenario_stem(result):
    s = result.scenario
    return f"{s.model}_{s.gate}"


def _emit_scenario(result, fmt, outdir, stem):
    paths = []
    band = result.band_trace()
    if fmt in ("csv", "both"):
        path = outdir / f"{stem}.csv"
        band.to_csv(path)
        paths.append(path)
    if fmt in ("plot", "both"):
        fig, ax = plt.subplots(figsize=(6, 4))
        t_us = units.to_us(band.times)
        ax.fill_between(t_us, band.f_min, band.f_max, alpha=0.3,
                        label="band over input states")
        ax.plot(t_us, band.f_mean, lw=1.5, label="mean")
        ax.set_xlabel("t (us)")
        ax.set_ylabel("fidelity")
        ax.set_title(f"{result.scenario.model}, {result.scenario.gate} gate")
        ax.set_ylim(-0.02, 1.02)
        ax.legend(loc="best")
        fig.tight_layout()
        path = outdir / f"{stem}.png"
        fig.savefig(path, dpi=150)
        plt.close(fig)
        paths.append(path)
    return paths


def _emit_sweep(result, fmt, outdir, stem):
    paths = []
    if fmt in ("csv", "both"):
        path = outdir / f"{stem}_summary.csv"
        with open(path, "w") as f:
            name = result.spec.parameter
            f.write(f"{name}_2pi_GHz,t_peak_us,f_peak,t_predicted_us\n")
            for row in result.rows:
                f.write(f"{units.to_ghz(row.value):.12g},"
                        f"{units.to_us(row.t_peak):.12g},"
                        f"{row.f_peak:.12g},"
                        f"{units.to_us(row.t_predicted):.12g}\n")
        paths.append(path)
        for i, row in enumerate(result.rows):
            if row.trace is not None:
                tpath = outdir / f"{stem}_value{i}.csv"
                row.trace.to_csv(tpath)
                paths.append(tpath)
    if fmt in ("plot", "both"):
        fig, ax = plt.subplots(figsize=(6, 4))
        any_trace = False
        for row in result.rows:
            if row.trace is not None:
                any_trace = True
                label = f"{result.spec.parameter}/2pi = {units.to_ghz(row.value):.3g} GHz"
                ax.plot(units.to_us(row.trace.times), row.trace.fidelities,
                        lw=1.0, label=label)
        if any_trace:
            ax.set_xlabel("t (us)")
            ax.set_ylabel("transfer fidelity")
            ax.legend(loc="best", fontsize=8)
        else:
            ax.loglog(abs(result.values()), units.to_us(result.peak_times()),
                      "o-", label="measured")
            ax.loglog(abs(result.values()),
                      [units.to_us(r.t_predicted) for r in result.rows],
                      "--", label="leading-order prediction")
            ax.set_xlabel(f"|{result.spec.parameter}| (rad/s)")
            ax.set_ylabel("t_peak (us)")
            ax.legend(loc="best")
        fig.tight_layout()
        path = outdir / f"{stem}.png"
        fig.savefig(path, dpi=150)
        plt.close(fig)
        paths.append(path)
    return paths


def _emit_prep(result, fmt, outdir, stem):
    paths = []
    if fmt in ("csv", "both"):
        path = outdir / f"{stem}.csv"
        with open(path, "w") as f:
            f.write("t_us,p_open,p_closed,p_upup,p_singlet\n")
            for row in zip(result.times, result.p_open, result.p_closed,
                           result.p_upup, result.p_singlet):
                f.write(f"{units.to_us(row[0]):.12g},"
                        + ",".join(f"{v:.12g}" for v in row[1:]) + "\n")
        paths.append(path)
    if fmt in ("plot", "both"):
        fig, ax = plt.subplots(figsize=(6, 4))
        t_us = units.to_us(result.times)
        ax.plot(t_us, result.p_open, label="open")
        ax.plot(t_us, result.p_closed, label="closed")
        ax.plot(t_us, result.p_upup, label="|uu>")
        ax.axvline(units.to_us(result.t_pi), ls=":", color="k",
                   label=f"t_pi = {units.to_us(result.t_pi):.4g} us")
        ax.set_xlabel("t (us)")
        ax.set_ylabel("population")
        ax.set_title(f"gate switch from {result.start}")
        ax.legend(loc="center right", fontsize=8)
        fig.tight_layout()
        path = outdir / f"{stem}.png"
        fig.savefig(path, dpi=150)
        plt.close(fig)
        paths.append(path)
    return paths


def write_json_report(payload, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as f:
        json.dump(payload, f, indent=2)
        f.write("\n")
    return path
