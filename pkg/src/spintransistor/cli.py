"""Command line front end.

Subcommands mirror the library entry points:

    spintransistor scenario    --config cfg.json --out dir --format csv|plot|both [--check]
    spintransistor sweep       --config cfg.json --out dir [--check]
    spintransistor state-prep  --config cfg.json --out dir [--check]
    spintransistor circuit-map --config cfg.json --out dir [--check]

Configs are JSON with unit-suffixed keys; any omitted block falls back to
the reference design.  With --check the process exits nonzero if any
recorded threshold check fails.
"""

import argparse
import json
import sys

from . import units
from .circuitmap import (circuit_from_config, couplings_from_circuit,
                         crosstalk_scaling_scan, reached_crosstalk_target,
                         reference_circuit, reference_kmatrix,
                         TRANSMON_RATIO_FLOOR)
from .dynamics import NoiseConfig, TimeGrid
from .hamiltonians import DiamondCouplings, DriveParams, reference_couplings
from .reporting import emit, write_json_report
from .scenarios import (Check, Scenario, SweepSpec, default_scenario,
                        reference_noise, run_delta_sweep, run_scenario,
                        run_state_prep, state_prep_couplings)


def couplings_from_config(d):
    """DiamondCouplings from a config block with table-style units."""
    if d is None:
        return reference_couplings()
    if "Jz_2pi_MHz" in d:
        return DiamondCouplings.from_table_units(
            Omega_ghz=d.get("Omega_2pi_GHz", -13.67),
            Delta_ghz=d.get("Delta_2pi_GHz", 1.067),
            Jz_mhz=d["Jz_2pi_MHz"],
            Jx_over_Jz=d.get("Jx_over_Jz", 0.0),
            J2_over_Jz=d.get("J2_over_Jz", 0.0),
            J4_over_Jz=d.get("J4_over_Jz", 0.0))
    return reference_couplings()


def _grid_from_config(d, default_t1_us=1.5, default_n=3000):
    d = d or {}
    return TimeGrid(units.us(d.get("t0_us", 0.0)),
                    units.us(d.get("t1_us", default_t1_us)),
                    int(d.get("n_points", default_n)))


def _load(path):
    if path is None:
        return {}
    with open(path) as f:
        return json.load(f)


def _finish(checks, check_mode):
    for c in checks:
        print(c)
    if check_mode and not all(c.ok for c in checks):
        return 1
    return 0


def _cmd_scenario(args):
    cfg = _load(args.config)
    model = cfg.get("model", "circuit")
    gate = cfg.get("gate", "open")
    params = couplings_from_config(cfg.get("couplings"))
    noise = None
    if model == "circuit_noisy":
        noise_cfg = cfg.get("noise", {})
        noise = NoiseConfig.from_cyclic_mhz(
            noise_cfg.get("gamma_2pi_MHz", 0.0016))
    if model == "ideal_resonant":
        scenario = default_scenario(model=model, gate=gate, params=params,
                                    band=cfg.get("band", True))
    else:
        grid = _grid_from_config(cfg.get("grid"))
        scenario = Scenario(model=model, gate=gate, params=params, grid=grid,
                            noise=noise, band=cfg.get("band", True),
                            initial_left=tuple(cfg.get("initial_left", (0.0, 0.0))))
    result = run_scenario(scenario)
    for path in emit(result, fmt=args.format, outdir=args.out):
        print(f"wrote {path}")
    return _finish(result.checks, args.check)


def _cmd_sweep(args):
    cfg = _load(args.config)
    base = couplings_from_config(cfg.get("couplings"))
    parameter = cfg.get("parameter", "Delta")
    if parameter == "C_R":
        return _crosstalk_sweep(cfg, args)
    if "values_2pi_GHz" in cfg:
        values = tuple(units.ghz(v) for v in cfg["values_2pi_GHz"])
    elif "values_2pi_MHz" in cfg:
        values = tuple(units.mhz(v) for v in cfg["values_2pi_MHz"])
    elif "factors" in cfg:
        base_value = getattr(base, parameter)
        values = tuple(f * base_value for f in cfg["factors"])
    else:
        base_value = getattr(base, parameter)
        values = tuple(f * base_value for f in (1.0, 2.0, 4.0))
    spec = SweepSpec(parameter=parameter, values=values, base=base,
                     model=cfg.get("model", "rotating_frame"),
                     reduction=cfg.get("reduction", "full_trace"))
    result = run_delta_sweep(spec, workers=args.workers)
    for path in emit(result, fmt=args.format, outdir=args.out):
        print(f"wrote {path}")
    checks = []
    f_peaks = result.peak_fidelities()
    checks.append(Check("sweep_peak_fidelity_min>=0.99",
                        bool(f_peaks.min() >= 0.99), float(f_peaks.min())))
    if len(result.rows) >= 3:
        expected = 1.0 if parameter == "Delta" else -2.0
        tol = 0.05 if parameter == "Delta" else 0.10
        exponent = result.fitted_exponent()
        checks.append(Check(f"t_peak_exponent={expected}+-{tol}",
                            bool(abs(exponent - expected) <= tol), exponent))
    return _finish(checks, args.check)


def _crosstalk_sweep(cfg, args):
    circuit = reference_circuit()
    if "circuit" in cfg:
        from .circuitmap import CircuitParams
        circuit = CircuitParams(**cfg["circuit"])
    factors = cfg.get("factors", (0.5, 1.0, 2.0, 4.0, 8.0))
    rows = crosstalk_scaling_scan(circuit, factors)
    payload = {"rows": rows,
               "reached_below_1pct_of_Jz": reached_crosstalk_target(rows)}
    path = write_json_report(payload, f"{args.out}/crosstalk_scan.json")
    print(f"wrote {path}")
    ratios = [r["j4_over_j2_abs"] for r in rows]
    ok = all(a > b for a, b in zip(ratios, ratios[1:]))
    checks = [Check("crosstalk_ratio_strictly_decreasing", ok,
                    ratios[-1] / ratios[0] if ratios[0] else 0.0)]
    return _finish(checks, args.check)


def _cmd_state_prep(args):
    cfg = _load(args.config)
    params = (couplings_from_config(cfg["couplings"]) if "couplings" in cfg
              else state_prep_couplings())
    drive_cfg = cfg.get("drive", {})
    amplitude = units.mhz(drive_cfg.get("A_2pi_MHz", 7.0))
    if "omega_d_2pi_GHz" in drive_cfg:
        drive = DriveParams(amplitude=amplitude,
                            omega_d=units.ghz(drive_cfg["omega_d_2pi_GHz"]))
    else:
        drive = DriveParams.resonant(amplitude, params)
    result = run_state_prep(drive, params, start=cfg.get("start", "open"))
    print(f"t_pi = {units.to_us(result.t_pi):.5g} us, "
          f"max |uu> leakage = {result.max_leakage:.3e}")
    for path in emit(result, fmt=args.format, outdir=args.out):
        print(f"wrote {path}")
    return _finish(result.checks, args.check)


def _cmd_circuit_map(args):
    cfg = _load(args.config)
    if cfg:
        circuit, kspec = circuit_from_config(cfg)
    else:
        circuit, kspec = reference_circuit(), reference_kmatrix()
    energies, couplings = couplings_from_circuit(circuit, kspec)
    payload = {
        "effective_energies_GHz": {
            "E_C1": energies.E_C1, "E_C2": energies.E_C2,
            "E_CCM": energies.E_CCM, "E_J1": energies.E_J1,
            "E_J2": energies.E_J2, "E_JCM": energies.E_JCM,
            "E_L2": energies.E_L2, "E_LCM": energies.E_LCM,
        },
        "ratios": {
            "EJ1_over_EC1": energies.E_J1 / energies.E_C1,
            "EJ2_over_EC2": energies.E_J2 / energies.E_C2,
            "EL2_over_EJ2": energies.E_L2 / energies.E_J2,
        },
        "spin_model": {
            "Omega_2pi_GHz": units.to_ghz(couplings.Omega),
            "Delta_2pi_GHz": units.to_ghz(couplings.Delta),
            "Jz_2pi_MHz": units.to_mhz(couplings.J_z),
            "Jx_over_Jz": couplings.J_x / couplings.J_z,
            "J2_over_Jz": couplings.J_2 / couplings.J_z,
            "J4_over_Jz": couplings.J_4 / couplings.J_z,
        },
    }
    path = write_json_report(payload, f"{args.out}/circuit_map.json")
    print(f"wrote {path}")
    checks = [
        Check(f"outer_EJ_over_EC>={TRANSMON_RATIO_FLOOR}",
              payload["ratios"]["EJ1_over_EC1"] >= TRANSMON_RATIO_FLOOR,
              payload["ratios"]["EJ1_over_EC1"]),
        Check(f"gate_EJ_over_EC>={TRANSMON_RATIO_FLOOR}",
              payload["ratios"]["EJ2_over_EC2"] >= TRANSMON_RATIO_FLOOR,
              payload["ratios"]["EJ2_over_EC2"]),
    ]
    return _finish(checks, args.check)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="spintransistor",
        description="Four-qubit quantum spin transistor simulations")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in (("scenario", _cmd_scenario), ("sweep", _cmd_sweep),
                     ("state-prep", _cmd_state_prep),
                     ("circuit-map", _cmd_circuit_map)):
        p = sub.add_parser(name)
        p.add_argument("--config", default=None, help="JSON config path")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--format", default="csv", choices=("csv", "plot", "both"))
        p.add_argument("--check", action="store_true",
                       help="exit nonzero if any threshold check fails")
        p.add_argument("--workers", type=int, default=1,
                       help="process pool size for sweeps")
        p.set_defaults(fn=fn)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
