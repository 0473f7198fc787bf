"""Command-line front end.

Inputs are read in SI or natural units (``--units``), converted to natural
units, evaluated by the library and converted back for output.  Reports are
JSON (single results) or CSV (sweep tables) with 15 significant digits and
no run-dependent content, so repeated runs are byte-identical.

Exit status: 0 success, 1 validation failure, 2 input error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import warnings

import numpy as np

from .errors import RadPressError
from .interferometer import (
    DelayLine,
    FabryPerot,
    delay_line_delta_p2,
    fabry_perot_delta_p2,
    noise_budget,
    optimize_power,
)
from .mc_oracle import MODEL_NOTE, McConfig, simulate_coherent, simulate_number_state, simulate_split_arms
from .mirror_fluctuations import (
    MIN_OMEGA_R,
    MIN_OMEGA_TAU,
    BeamSpec,
    LightState,
    MirrorSpec,
    delta_v2_coherent,
    delta_v2_stress_tensor,
    delta_x2,
)
from .units import UnitContext

EXIT_OK, EXIT_VALIDATION, EXIT_INPUT = 0, 1, 2
COMMANDS = ("single-mirror", "delay-line", "fabry-perot", "budget", "mc-validate", "sweep")

COMMON_DEFAULTS = {
    "units": "natural", "format": "json", "out": None, "seed": 42, "sweep_points": 41,
    "samples": 1_000_000, "mean_photons": 100.0, "bounces": 1, "cavity_r2": 0.5,
    "convention": "order-of-magnitude", "sweep": False,
}
# ω = 1, A = 1, rho = 1, m = 1, tau = 1 demo
NATURAL_DEFAULTS = {"power": 1.0, "omega": 1.0, "wavelength": None, "mass": 1.0, "tau": 1.0,
                    "spot_radius": None, "area": 1.0}
# 1 W of 1064 nm light on a 1 g mirror, 1 ms window, 1 mm spot
SI_DEFAULTS = {"power": 1.0, "omega": None, "wavelength": 1.064e-6, "mass": 1e-3, "tau": 1e-3,
               "spot_radius": 1e-3, "area": None}
KEYS = set(COMMON_DEFAULTS) | set(NATURAL_DEFAULTS)


class InputError(Exception):
    pass


def _parent_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("inputs (flags override --config)")
    g.add_argument("--config", help="flat JSON file of flag values")
    g.add_argument("--units", choices=["si", "natural"])
    g.add_argument("--power", type=float, help="mean beam power (W in SI)")
    g.add_argument("--wavelength", type=float, help="vacuum wavelength (m in SI)")
    g.add_argument("--omega", type=float, help="angular frequency (rad/s in SI)")
    g.add_argument("--mass", type=float, help="mirror mass (kg in SI)")
    g.add_argument("--tau", type=float, help="integration time (s in SI)")
    g.add_argument("--bounces", type=int)
    g.add_argument("--cavity-r2", type=float, dest="cavity_r2", help="input mirror |R|^2")
    g.add_argument("--spot-radius", type=float, dest="spot_radius")
    g.add_argument("--area", type=float, help="illuminated area, if no spot radius")
    g.add_argument("--convention", choices=["order-of-magnitude", "exact"],
                   help="radiation-pressure coefficient for budgets")
    g.add_argument("--format", choices=["csv", "json"])
    g.add_argument("--out", help="output path (default stdout)")
    g.add_argument("--seed", type=int)
    g.add_argument("--samples", type=int)
    g.add_argument("--mean-photons", type=float, dest="mean_photons")
    g.add_argument("--sweep-points", type=int, dest="sweep_points")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="radpress", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    parent = _parent_parser()
    helps = {
        "single-mirror": "dispersions of one mirror by both routes",
        "delay-line": "b-bounce delay-line momentum dispersion",
        "fabry-perot": "cavity buildup of the momentum dispersion",
        "budget": "radiation-pressure vs shot-noise position budget",
        "mc-validate": "Monte Carlo photon-counting checks",
        "sweep": "power sweep table for the budget",
    }
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[parent], help=helps[name])
        if name == "budget":
            sp.add_argument("--sweep", action="store_true", default=None,
                            help="append a power sweep table")
    return parser


def resolve_config(args: argparse.Namespace) -> dict:
    """Defaults, then the config file, then explicit flags."""
    file_cfg = {}
    if args.config:
        try:
            with open(args.config) as fh:
                raw = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(raw, dict):
            raise InputError("config must be a flat JSON object")
        file_cfg = {k.replace("-", "_"): v for k, v in raw.items()}
        unknown = set(file_cfg) - KEYS
        if unknown:
            raise InputError(f"unknown config keys: {sorted(unknown)}")
    flags = {k: v for k, v in vars(args).items() if v is not None and k in KEYS}
    units = flags.get("units", file_cfg.get("units", "natural"))
    if units not in ("si", "natural"):
        raise InputError(f"units must be 'si' or 'natural', got {units!r}")
    cfg = dict(COMMON_DEFAULTS)
    cfg.update(SI_DEFAULTS if units == "si" else NATURAL_DEFAULTS)
    cfg.update(file_cfg)
    cfg.update(flags)
    cfg["units"] = units
    cfg["command"] = args.command
    if "omega" in file_cfg or "omega" in flags:
        if "wavelength" not in file_cfg and "wavelength" not in flags:
            cfg["wavelength"] = None
    if "spot_radius" in file_cfg or "spot_radius" in flags:
        if "area" not in file_cfg and "area" not in flags:
            cfg["area"] = None
    return cfg


def _positive(cfg: dict, *names: str, allow_zero: tuple = ()) -> None:
    for n in names:
        v = cfg.get(n)
        if v is None:
            continue
        ok = v >= 0 if n in allow_zero else v > 0
        if not isinstance(v, (int, float)) or not ok or not math.isfinite(v):
            raise InputError(f"{n} must be {'non-negative' if n in allow_zero else 'positive'}, got {v!r}")


class Problem:
    """Validated inputs in natural units."""

    def __init__(self, cfg: dict):
        _positive(cfg, "power", "wavelength", "omega", "mass", "tau", "spot_radius", "area",
                  "mean_photons", allow_zero=("power", "mean_photons"))
        if int(cfg["bounces"]) != cfg["bounces"] or cfg["bounces"] < 1:
            raise InputError("bounces must be a positive integer")
        if not 0 <= cfg["cavity_r2"] < 1:
            raise InputError("cavity-r2 must lie in [0, 1)")
        if cfg["sweep_points"] < 2 or cfg["samples"] < 2:
            raise InputError("sweep-points and samples must be at least 2")
        if cfg["seed"] < 0:
            raise InputError("seed must be non-negative")
        self.cfg = cfg
        self.units = cfg["units"]
        self.ctx = UnitContext()
        si = self.units == "si"
        nat = (lambda v, kind: self.ctx.to_natural(v, kind)) if si else (lambda v, kind: v)
        if cfg["omega"] is not None:
            self.omega = nat(cfg["omega"], "angular_frequency")
        elif cfg["wavelength"] is not None:
            self.omega = (self.ctx.omega_from_wavelength(cfg["wavelength"]) if si
                          else 2 * math.pi / cfg["wavelength"])
        else:
            raise InputError("give --omega or --wavelength")
        if cfg["spot_radius"] is not None:
            self.spot_radius = nat(cfg["spot_radius"], "length")
        elif cfg["area"] is not None:
            self.spot_radius = math.sqrt(nat(cfg["area"], "area") / math.pi)
        else:
            raise InputError("give --spot-radius or --area")
        self.power = nat(cfg["power"], "power")
        self.mass = nat(cfg["mass"], "mass")
        self.tau = nat(cfg["tau"], "time")
        self.bounces = int(cfg["bounces"])
        self.mirror = MirrorSpec(self.mass, self.spot_radius)
        self.beam = BeamSpec(self.omega, self.power / self.mirror.area, self.mirror.area)

    def out(self, value, kind: str):
        if value is None or self.units == "natural":
            return value
        return self.ctx.to_si(value, kind)

    def echo(self) -> dict:
        return {
            "power": self.out(self.power, "power"),
            "omega": self.out(self.omega, "angular_frequency"),
            "mass": self.out(self.mass, "mass"),
            "tau": self.out(self.tau, "time"),
            "spot_radius": self.out(self.spot_radius, "length"),
            "area": self.out(self.mirror.area, "area"),
            "bounces": self.bounces,
        }

    def photons(self) -> float:
        """Mean photon count in the window, ``P tau / w``."""
        return self.power * self.tau / self.omega


def _ratio(a: float, b: float):
    return a / b if b != 0 else None


def run_single_mirror(pb: Problem) -> dict:
    beam, mirror, tau = pb.beam, pb.mirror, pb.tau
    dv2_pc = delta_v2_coherent(beam, mirror, tau)
    in_regime = beam.omega * mirror.spot_radius >= MIN_OMEGA_R and beam.omega * tau >= MIN_OMEGA_TAU
    method = "quadrature" if in_regime else "asymptotic"
    dv2_st = delta_v2_stress_tensor(beam, mirror, tau, method=method)
    dx = delta_x2(beam, mirror, tau)
    k_st = dv2_st / tau
    m2 = mirror.mass ** 2
    return {
        "command": "single-mirror",
        "units": pb.units,
        "inputs": pb.echo(),
        "photon_counting": {
            "delta_p2": pb.out(dv2_pc * m2, "momentum^2"),
            "delta_v2": pb.out(dv2_pc, "velocity^2"),
            "delta_x2": pb.out(dx.delta_x2, "length^2"),
        },
        "stress_tensor": {
            "delta_p2": pb.out(dv2_st * m2, "momentum^2"),
            "delta_v2": pb.out(dv2_st, "velocity^2"),
            "delta_x2": pb.out(k_st * tau ** 3 / 3, "length^2"),
            "area_integral": method,
        },
        "route_ratio": _ratio(dv2_st, dv2_pc),
        "delta_x_rp": pb.out(dx.delta_x_rp, "length"),
        "convention": {"delta_x2": "exact", "delta_x_rp": "order-of-magnitude"},
    }


def run_delay_line(pb: Problem) -> dict:
    state = LightState.coherent(pb.omega, math.sqrt(pb.photons()))
    # the analytic b^2 law does not depend on arm geometry; any T < 2L will do
    line = DelayLine(pb.bounces, arm_length=pb.tau, window=pb.tau)
    dp2 = delay_line_delta_p2(state, line)
    return {
        "command": "delay-line",
        "units": pb.units,
        "inputs": pb.echo(),
        "mean_photons": pb.photons(),
        "delta_p2": pb.out(dp2, "momentum^2"),
        "delta_v2": pb.out(dp2 / pb.mass ** 2, "velocity^2"),
        "single_bounce_delta_p2": pb.out(dp2 / pb.bounces ** 2, "momentum^2"),
    }


def run_fabry_perot(pb: Problem) -> dict:
    state = LightState.coherent(pb.omega, math.sqrt(pb.photons()))
    res = fabry_perot_delta_p2(state, FabryPerot(math.sqrt(pb.cfg["cavity_r2"])))
    return {
        "command": "fabry-perot",
        "units": pb.units,
        "inputs": dict(pb.echo(), cavity_r2=pb.cfg["cavity_r2"]),
        "effective_bounces": res.effective_bounces,
        "exact_factor": res.exact_factor,
        "asymptotic_factor": res.asymptotic_factor,
        "delta_p2_exact": pb.out(res.exact, "momentum^2"),
        "delta_p2_asymptotic": pb.out(res.asymptotic, "momentum^2"),
        "delta_v2_exact": pb.out(res.exact / pb.mass ** 2, "velocity^2"),
    }


def _budget_dict(pb: Problem, nb) -> dict:
    return {
        "delta_x_rp": pb.out(nb.delta_x_rp, "length"),
        "delta_x_pc": pb.out(nb.delta_x_pc, "length"),
        "delta_x_total": pb.out(nb.delta_x_total, "length"),
        "delta_x_sql": pb.out(nb.delta_x_sql, "length"),
        "power_opt": pb.out(nb.power_opt, "power"),
    }


SWEEP_HEADER = ["power", "delta_x_rp", "delta_x_pc", "delta_x_total", "delta_x_sql", "convention"]


def sweep_rows(pb: Problem) -> list[list]:
    """Log-spaced powers over four decades centred exactly on ``P_opt``."""
    conv = pb.cfg["convention"]
    p_opt = noise_budget(1.0, pb.omega, pb.mass, pb.tau, pb.bounces, conv).power_opt
    n = pb.cfg["sweep_points"]
    exps = np.linspace(-2.0, 2.0, n)
    if n % 2:
        exps[n // 2] = 0.0
    rows = []
    for e in exps:
        power = p_opt * 10.0 ** e
        nb = noise_budget(power, pb.omega, pb.mass, pb.tau, pb.bounces, conv)
        d = _budget_dict(pb, nb)
        rows.append([pb.out(power, "power"), d["delta_x_rp"], d["delta_x_pc"],
                     d["delta_x_total"], d["delta_x_sql"], conv])
    return rows


def run_budget(pb: Problem, with_sweep: bool = False) -> dict:
    conv = pb.cfg["convention"]
    nb = noise_budget(pb.power, pb.omega, pb.mass, pb.tau, pb.bounces, conv)
    opt = optimize_power(pb.omega, pb.mass, pb.tau, pb.bounces, conv)
    at_opt = noise_budget(nb.power_opt, pb.omega, pb.mass, pb.tau, pb.bounces, conv)
    report = {
        "command": "budget",
        "units": pb.units,
        "inputs": pb.echo(),
        "convention": conv,
        "budget": _budget_dict(pb, nb),
        "at_power_opt": _budget_dict(pb, at_opt),
        "power_opt_numeric": pb.out(opt["P_opt_numeric"], "power"),
        "power_opt_analytic": pb.out(opt["P_opt_analytic"], "power"),
    }
    if with_sweep:
        report["sweep"] = [dict(zip(SWEEP_HEADER, r)) for r in sweep_rows(pb)]
    return report


def run_mc_validate(pb: Problem) -> tuple[dict, bool]:
    cfg = pb.cfg
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        mc = McConfig(samples=int(cfg["samples"]), seed=int(cfg["seed"]),
                      mean_photons=float(cfg["mean_photons"]), omega=pb.omega, bounces=pb.bounces)
    notes = [str(w.message) for w in caught]
    lam, b, w = mc.mean_photons, mc.bounces, mc.omega
    coh = simulate_coherent(mc)
    n_fixed = int(round(lam))
    num = simulate_number_state(n_fixed, w, b, mc.samples)
    arms = simulate_split_arms(mc)
    target = 4 * b * b * w * w * lam
    arm_target = target / 2
    v1, v2 = arms.variance1, arms.variance2
    checks = {
        "coherent_variance": {
            "value": coh.variance.value, "stderr": coh.variance.stderr, "target": target,
            "pass": coh.variance.within(target),
        },
        "number_state_variance": {
            "value": num.variance, "mean": num.mean, "target_mean": 2.0 * b * w * n_fixed,
            "pass": num.variance == 0.0 and num.mean == 2.0 * b * w * n_fixed,
        },
        "split_arms": {
            "variance1": v1.value, "variance2": v2.value, "arm_target": arm_target,
            "covariance": arms.covariance.value, "covariance_stderr": arms.covariance.stderr,
            "correlation": arms.correlation, "correlation_gate": 3.0 / math.sqrt(mc.samples),
            "pass": (abs(arms.correlation) < 3.0 / math.sqrt(mc.samples)
                     and arms.covariance.within(0.0)
                     and abs(v1.value - v2.value) <= 3.0 * math.hypot(v1.stderr, v2.stderr)
                     and v1.within(arm_target) and v2.within(arm_target)),
        },
    }
    ok = all(c["pass"] for c in checks.values())
    report = {
        "command": "mc-validate",
        "units": "natural",
        "model": MODEL_NOTE,
        "config": {"samples": mc.samples, "seed": mc.seed, "mean_photons": lam,
                   "omega": w, "bounces": b},
        "warnings": notes,
        "checks": checks,
        "pass": ok,
    }
    return report, ok


def _round(obj):
    if isinstance(obj, float):
        return float(f"{obj:.15g}") if math.isfinite(obj) else None
    if isinstance(obj, (np.floating,)):
        return _round(float(obj))
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, dict):
        return {k: _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    return obj


def format_json(report: dict) -> str:
    return json.dumps(_round(report), indent=2, sort_keys=True) + "\n"


def format_csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([f"{v:.15g}" if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _flatten(d: dict, prefix: str = "") -> dict:
    out = {}
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(_flatten(v, key + "."))
        elif not isinstance(v, list):
            out[key] = v
    return out


def render(cfg: dict, report: dict | None, table: list[list] | None) -> str:
    if cfg["format"] == "csv":
        if table is not None:
            return format_csv(SWEEP_HEADER, table)
        flat = _flatten(report)
        return format_csv(["key", "value"], [[k, v] for k, v in flat.items()])
    if table is not None:
        report = {"command": cfg["command"], "units": cfg["units"],
                  "rows": [dict(zip(SWEEP_HEADER, r)) for r in table]}
    return format_json(report)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    status = EXIT_OK
    try:
        cfg = resolve_config(args)
        pb = Problem(cfg)
        table = None
        report = None
        cmd = cfg["command"]
        if cmd == "single-mirror":
            report = run_single_mirror(pb)
        elif cmd == "delay-line":
            report = run_delay_line(pb)
        elif cmd == "fabry-perot":
            report = run_fabry_perot(pb)
        elif cmd == "budget":
            report = run_budget(pb, with_sweep=bool(cfg["sweep"]) and cfg["format"] == "json")
            if cfg["sweep"] and cfg["format"] == "csv":
                table = sweep_rows(pb)
        elif cmd == "sweep":
            table = sweep_rows(pb)
        elif cmd == "mc-validate":
            report, ok = run_mc_validate(pb)
            for note in report["warnings"]:
                print(f"warning: {note}", file=sys.stderr)
            if not ok:
                failing = [k for k, c in report["checks"].items() if not c["pass"]]
                print(f"validation failed: {', '.join(failing)}", file=sys.stderr)
                status = EXIT_VALIDATION
        text = render(cfg, report, table)
    except (InputError, RadPressError, ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if cfg["out"]:
        try:
            with open(cfg["out"], "w", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"error: cannot write {cfg['out']}: {exc}", file=sys.stderr)
            return EXIT_INPUT
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
