"""Command-line runner: ``bersec <command> [options]``.

Every run writes a table (CSV or JSON) followed by the fully resolved
configuration and the toolkit version, so any output file can be regenerated.
Exit status is 0 on success, 2 for invalid input and 3 when the requested
quantity does not exist for the given parameters.

Config files are JSON objects with optional keys ``command``, ``params``,
``seed``, ``out`` and ``format``; command-line flags override them.
"""
from __future__ import annotations

import argparse
import datetime
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .bounds import Thresholds, optimize_rho_bob, optimize_rho_eve
from .channels import ChannelModel, Family, capacity, circular_gaussian, default_input, explicit, gallager_e0
from .fading import FadingScenario, PowerPolicy, ScenarioError, db_grid, outage_mc
from .gap import (
    GapUndefinedError,
    existence_condition,
    security_gap_biawgn,
    security_gap_discrete,
    security_gap_gaussian,
)
from .margins import InfeasibleError, margins
from .spn import MAX_K, SpnGeometry, ideal_ber, simulate_spn_ber

EXIT_OK, EXIT_INVALID, EXIT_INFEASIBLE = 0, 2, 3

N_DECADES = [100, 1000, 10_000, 100_000, 1_000_000]
N_HALF_DECADES = [int(round(10 ** e)) for e in np.arange(2.0, 6.01, 0.5)]
THRESHOLD_PAIRS = [[1.0, 0.0], [0.01, 0.99], [1e-4, 0.9999], [1e-6, 0.999999]]

DEFAULTS = {
    "e0": {"family": "bsc", "param": 0.11, "rho": [-0.9, -0.5, 0.0, 0.5, 1.0], "q0": None, "power": 1.0},
    "bounds": {"family": "bsc", "param": 0.11, "rate": 0.3, "n": N_DECADES, "spn_ber_low": 0.5},
    "spn-ideal": {"K": [32, 64, 128, 256], "B": 8, "r": 8},
    "spn-sim": {"K": [32, 64, 128, 256], "B": 8, "r": 10, "trials": 10_000, "workers": 1},
    "rate-margins": {"family": "bsc", "param_bob": 0.01, "param_eve": 0.3, "param_db": False,
                     "n": N_HALF_DECADES, "thresholds": THRESHOLD_PAIRS},
    "security-gap": {"family": "gaussian", "rate": 1.0, "n": N_DECADES, "param_bob": None, "param_eve": None,
                     "thresholds": [[1e-4, 0.9999]]},
    "fading-outage": {"mean_gain_bob": 2.0, "mean_gain_eve": 1.0, "noise_var": 1.0, "n": 100_000,
                      "R": [0.5, 3.0, 5.5], "policy": "constant", "grid_db": [0.0, 40.0, 2.0],
                      "samples": 100_000, "p_err_bob_th": 1e-4, "p_err_eve_th": 0.9999,
                      "spn_ber_low": 0.5, "condition_on_bob_stronger": True},
    "existence": {"n": [2, 5, 11, 30, 100, 1000, 10_000, 100_000, 1_000_000],
                  "R": [round(0.1 * k, 10) for k in range(1, 61)], "p_err_eve_th": 0.9999},
}

FIGURES = {
    1: ("spn-ideal", {"K": [32, 64, 128, 256], "B": 8, "r": 8}),
    2: ("spn-sim", {"K": [32, 64, 128, 256], "B": 8, "r": 10, "trials": 10_000}),
    4: ("rate-margins", {"family": "bsc", "param_bob": 0.01, "param_eve": 0.3, "param_db": False}),
    5: ("rate-margins", {"family": "biawgn", "param_bob": 6.0, "param_eve": -2.0, "param_db": True}),
    6: ("existence", {}),
    7: ("fig7", {"n": N_DECADES, "thresholds": [[1e-2, 0.99], [1e-4, 0.9999], [1e-6, 0.999999]],
                 "rate_bi": 0.5, "rate_gi": 1.0}),
    8: ("fading-outage", {"policy": "constant"}),
    9: ("fading-outage", {"policy": "optimal"}),
    10: ("fading-outage", {"mean_gain_bob": 10.0, "policy": "both"}),
}
DEFAULTS["fig7"] = dict(FIGURES[7][1])


class ConfigError(ValueError):
    pass


def db_to_linear(db):
    return 10.0 ** (db / 10.0)


# --- config handling ----------------------------------------------------------

def _parse_value(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def load_config_file(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read config ({exc.strerror})") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be a JSON object")
    unknown = set(data) - {"command", "params", "seed", "out", "format"}
    if unknown:
        raise ConfigError(f"{path}: unknown field(s) {sorted(unknown)}")
    if not isinstance(data.get("params", {}), dict):
        raise ConfigError(f"{path}: field 'params' must be an object")
    return data


def resolve(command, figure=None, file_cfg=None, params=(), seed=None, out=None, fmt=None):
    """Merge defaults, figure preset, config file and flags into one config dict."""
    file_cfg = file_cfg or {}
    command = command or file_cfg.get("command")
    if command is None:
        raise ConfigError("no command given")
    if command == "figure":
        fig = figure if figure is not None else file_cfg.get("params", {}).get("id")
        if fig not in FIGURES:
            raise ConfigError(f"unknown figure {fig!r}; choose from {sorted(FIGURES)}")
        kind, preset = FIGURES[fig]
    else:
        fig, kind, preset = None, command, {}
    if kind not in DEFAULTS:
        raise ConfigError(f"unknown command {command!r}")
    merged = dict(DEFAULTS[kind])
    merged.update(preset)
    for key, val in file_cfg.get("params", {}).items():
        if key == "id" and fig is not None:
            continue
        merged[key] = val
    for item in params:
        if "=" not in item:
            raise ConfigError(f"--param expects key=value, got {item!r}")
        key, val = item.split("=", 1)
        merged[key.strip()] = _parse_value(val)
    cfg = {
        "command": command,
        "kind": kind,
        "figure": fig,
        "params": merged,
        "seed": int(seed if seed is not None else file_cfg.get("seed", 0)),
        "out": out if out is not None else file_cfg.get("out"),
        "format": fmt or file_cfg.get("format", "csv"),
    }
    return cfg


def _as_list(x):
    return list(x) if isinstance(x, (list, tuple)) else [x]


def _check_thresholds(pb, pe, where, diags):
    if not (isinstance(pb, (int, float)) and 0.0 < pb <= 1.0):
        diags.append(f"{where}: p_err_bob_th={pb!r} must satisfy 0 < P <= 1")
    if not (isinstance(pe, (int, float)) and 0.0 <= pe < 1.0):
        diags.append(f"{where}: p_err_eve_th={pe!r} must satisfy 0 <= P < 1")


def _check_family(name, diags, allowed=None):
    try:
        fam = Family(name)
    except ValueError:
        diags.append(f"family: unknown channel family {name!r}")
        return None
    if allowed and fam not in allowed:
        diags.append(f"family: {fam.value!r} is not supported here")
        return None
    return fam


def _check_param(fam, value, field, diags):
    try:
        ChannelModel(fam, float(value))
    except (TypeError, ValueError) as exc:
        diags.append(f"{field}: {exc}")


def validate(cfg):
    """Return a list of human-readable problems; empty means the config is runnable."""
    diags = []
    kind, p = cfg["kind"], cfg["params"]
    unknown = set(p) - set(DEFAULTS[kind])
    if unknown:
        diags.append(f"params: unknown key(s) {sorted(unknown)} for {kind}")
    if cfg["format"] not in ("csv", "json"):
        diags.append(f"format: must be csv or json, got {cfg['format']!r}")
    if not 0 <= cfg["seed"] < 2 ** 64:
        diags.append("seed: must be a 64-bit unsigned integer")
    for key in ("n",):
        if key in p:
            for n in _as_list(p[key]):
                if not isinstance(n, int) or n < 1:
                    diags.append(f"n: blocklength {n!r} must be a positive integer")

    if kind in ("spn-ideal", "spn-sim"):
        for K in _as_list(p["K"]):
            try:
                SpnGeometry(int(K), int(p["B"]), int(p["r"]))
            except ValueError as exc:
                diags.append(f"K/B/r: {exc}")
            if kind == "spn-ideal" and int(K) > MAX_K:
                diags.append(f"K: {K} exceeds the exact-recursion cap {MAX_K}")
        if kind == "spn-ideal" and int(p["r"]) < 1:
            diags.append("r: need at least one round")
        if kind == "spn-sim":
            if int(p["B"]) != 8:
                diags.append("B: the bundled S-box is 8-bit, B must be 8")
            if int(p["trials"]) < 1:
                diags.append("trials: must be positive")
            if int(p["workers"]) < 1:
                diags.append("workers: must be positive")
    elif kind == "e0":
        fam = _check_family(p["family"], diags)
        if fam is not None:
            _check_param(fam, p["param"], "param", diags)
        for r in _as_list(p["rho"]):
            if not (isinstance(r, (int, float)) and -1.0 < r <= 1.0):
                diags.append(f"rho: {r!r} outside (-1, 1]")
    elif kind == "bounds":
        fam = _check_family(p["family"], diags)
        if fam is not None:
            _check_param(fam, p["param"], "param", diags)
        if not p["rate"] > 0:
            diags.append("rate: must be positive")
        if not 0.0 < p["spn_ber_low"] <= 0.5:
            diags.append("spn_ber_low: must lie in (0, 0.5]")
    elif kind == "rate-margins":
        fam = _check_family(p["family"], diags)
        if fam is not None:
            conv = db_to_linear if p["param_db"] else float
            try:
                pb, pe = conv(p["param_bob"]), conv(p["param_eve"])
            except (TypeError, ValueError):
                diags.append("param_bob/param_eve: must be numbers")
            else:
                _check_param(fam, pb, "param_bob", diags)
                _check_param(fam, pe, "param_eve", diags)
        for i, pair in enumerate(p["thresholds"]):
            _check_thresholds(*pair, f"thresholds[{i}]", diags)
    elif kind in ("security-gap", "fig7"):
        if kind == "security-gap":
            fam = _check_family(p["family"], diags)
            if not p["rate"] > 0:
                diags.append("rate: must be positive")
            if fam in (Family.BSC, Family.BEC) and not p["rate"] < math.log(2.0):
                diags.append("rate: must be below ln 2 for a binary-input channel")
            xb, xe = p["param_bob"], p["param_eve"]
            if fam is not None and xb is not None and xe is not None:
                _check_param(fam, xb, "param_bob", diags)
                _check_param(fam, xe, "param_eve", diags)
                if fam in (Family.BSC, Family.BEC) and not xb < xe:
                    diags.append(f"param_bob/param_eve: need eps_bob < eps_eve, got {xb} >= {xe}")
                elif fam not in (Family.BSC, Family.BEC) and not xb > xe:
                    diags.append(f"param_bob/param_eve: need snr_bob > snr_eve, got {xb} <= {xe}")
        for i, pair in enumerate(p["thresholds"]):
            _check_thresholds(*pair, f"thresholds[{i}]", diags)
    elif kind == "fading-outage":
        _check_thresholds(p["p_err_bob_th"], p["p_err_eve_th"], "thresholds", diags)
        if p["p_err_bob_th"] == 1.0:
            diags.append("p_err_bob_th: the fading runner needs an interior reliability threshold")
        for key in ("mean_gain_bob", "mean_gain_eve", "noise_var"):
            if not p[key] > 0:
                diags.append(f"{key}: must be positive")
        if p["policy"] not in ("constant", "optimal", "both"):
            diags.append("policy: must be constant, optimal or both")
        if int(p["samples"]) < 1:
            diags.append("samples: must be positive")
        for R in _as_list(p["R"]):
            if not R > 0:
                diags.append(f"R: rate {R!r} must be positive")
    elif kind == "existence":
        if not 0.0 <= p["p_err_eve_th"] < 1.0:
            diags.append("p_err_eve_th: must satisfy 0 <= P < 1")
    return diags


# --- computations -------------------------------------------------------------

def _run_e0(p, seed):
    ch = ChannelModel(Family(p["family"]), float(p["param"]))
    if p["q0"] is not None:
        dist = explicit(p["q0"])
    elif ch.family is Family.GAUSSIAN_AWGN:
        dist = circular_gaussian(p["power"])
    else:
        dist = default_input(ch)
    rows = [[r, float(gallager_e0(ch, dist, r))] for r in _as_list(p["rho"])]
    return ["rho", "e0"], rows


def _run_bounds(p, seed):
    ch = ChannelModel(Family(p["family"]), float(p["param"]))
    bob = optimize_rho_bob(ch, None, p["rate"])
    eve = optimize_rho_eve(ch, None, p["rate"])
    rows = []
    for n in _as_list(p["n"]):
        b = optimize_rho_bob(ch, None, p["rate"], n).bound
        e = optimize_rho_eve(ch, None, p["rate"], n).bound
        rows.append([n, capacity(ch), bob.rho_opt, b, 0.5 * b, eve.rho_opt, e, p["spn_ber_low"] * e])
    cols = ["n", "capacity", "rho_bob", "bob_block_upper", "bob_ber_upper",
            "rho_eve", "eve_block_lower", "eve_ber_lower"]
    return cols, rows


SPN_COLS = ["round", "ber", "stderr", "method", "K", "B", "trials", "seed"]


def _run_spn_ideal(p, seed):
    rows = []
    for K in _as_list(p["K"]):
        ber = ideal_ber(SpnGeometry(int(K), int(p["B"]), int(p["r"])))
        rows += [[k + 1, b, 0.0, "ideal", K, p["B"], 0, seed] for k, b in enumerate(ber)]
    return SPN_COLS, rows


def _run_spn_sim(p, seed):
    rows = []
    for K in _as_list(p["K"]):
        ber, se = simulate_spn_ber(SpnGeometry(int(K), int(p["B"]), int(p["r"])), int(p["trials"]), seed,
                                   int(p["workers"]))
        rows += [[k, b, s, "sim", K, p["B"], p["trials"], seed] for k, (b, s) in enumerate(zip(ber, se))]
    return SPN_COLS, rows


def _run_margins(p, seed):
    fam = Family(p["family"])
    conv = db_to_linear if p["param_db"] else float
    bob, eve = ChannelModel(fam, conv(p["param_bob"])), ChannelModel(fam, conv(p["param_eve"]))
    rows = []
    for pb, pe in p["thresholds"]:
        th = Thresholds(pb, pe)
        for n in _as_list(p["n"]):
            m = margins(bob, eve, None, n, th)
            rows.append([n, pb, pe, m.r_sup, m.r_inf, m.c_bob, m.c_eve,
                         m.delta_r_bob, m.delta_r_eve, m.rate_interval])
    cols = ["n", "p_err_bob_th", "p_err_eve_th", "r_sup", "r_inf", "c_bob", "c_eve",
            "delta_r_bob", "delta_r_eve", "rate_interval"]
    return cols, rows


_GAP_COLS = ["family", "dims", "rate", "n", "p_err_bob_th", "p_err_eve_th", "gap", "gap_unit",
             "bob_limit", "eve_limit", "reference_param", "rho", "rho_prime"]


def _gap_row(res, dims, rate, n, pb, pe):
    unit = "param" if res.family in (Family.BSC, Family.BEC) else "dB"
    return [res.family.value, dims, rate, n, pb, pe, res.gap, unit, res.bob_limit, res.eve_limit,
            res.reference_param, res.rho_opt, res.rho_prime_opt]


def _one_gap(fam, rate, n, th):
    if fam is Family.GAUSSIAN_AWGN:
        return security_gap_gaussian(n, rate, th), 2
    if fam is Family.BI_AWGN:
        return security_gap_biawgn(n, rate, th), 1
    return security_gap_discrete(fam, n, rate, th), 1


def _run_gap(p, seed):
    """Gap rows; with an operating point, also whether each side meets its target."""
    fam = Family(p["family"])
    xb, xe = p["param_bob"], p["param_eve"]
    check = xb is not None and xe is not None
    discrete = fam in (Family.BSC, Family.BEC)
    rows = []
    for pb, pe in p["thresholds"]:
        th = Thresholds(pb, pe)
        for n in _as_list(p["n"]):
            res, dims = _one_gap(fam, p["rate"], n, th)
            row = _gap_row(res, dims, p["rate"], n, pb, pe)
            if check:
                if discrete:
                    row += [int(xb <= res.bob_limit), int(xe >= res.eve_limit)]
                else:
                    row += [int(xb >= res.bob_limit), int(xe <= res.eve_limit)]
            rows.append(row)
    return _GAP_COLS + (["bob_meets", "eve_meets"] if check else []), rows


def _run_fig7(p, seed):
    rows = []
    for pb, pe in p["thresholds"]:
        th = Thresholds(pb, pe)
        for n in _as_list(p["n"]):
            for fam, rate in ((Family.GAUSSIAN_AWGN, p["rate_gi"]), (Family.BI_AWGN, p["rate_bi"])):
                res, dims = _one_gap(fam, rate, n, th)
                rows.append(_gap_row(res, dims, rate, n, pb, pe))
    return _GAP_COLS, rows


def _run_existence(p, seed):
    rows = []
    for n in _as_list(p["n"]):
        for R in _as_list(p["R"]):
            rows.append([n, R, int(existence_condition(n, R, p["p_err_eve_th"]))])
    return ["n", "R", "satisfied"], rows


def _run_fading(p, seed):
    db, lin = db_grid(*p["grid_db"])
    policies = ["constant", "optimal"] if p["policy"] == "both" else [p["policy"]]
    rows = []
    for R in _as_list(p["R"]):
        sc = FadingScenario(
            mean_gain_bob=p["mean_gain_bob"], mean_gain_eve=p["mean_gain_eve"],
            noise_var=p["noise_var"], n=int(p["n"]), R=R,
            thresholds=Thresholds(p["p_err_bob_th"], p["p_err_eve_th"], p["spn_ber_low"]),
            p_av_grid=tuple(lin * p["noise_var"]), samples=int(p["samples"]), seed=seed,
            condition_on_bob_stronger=bool(p["condition_on_bob_stronger"]),
        )
        for name in policies:
            pol = PowerPolicy.optimal() if name == "optimal" else PowerPolicy.constant()
            for d, rep in zip(db, outage_mc(sc, pol)):
                rows.append([d, R, name, rep.rel, rep.sec, rep.overall, rep.suspension,
                             rep.z_opt, int(rep.z_open), rep.achieved_avg_power])
    cols = ["p_av_over_sigma2_dB", "R", "policy", "rel", "sec", "overall", "suspension",
            "z_opt", "z_open", "achieved_avg_power"]
    return cols, rows


RUNNERS = {
    "e0": _run_e0, "bounds": _run_bounds, "spn-ideal": _run_spn_ideal, "spn-sim": _run_spn_sim,
    "rate-margins": _run_margins, "security-gap": _run_gap, "fig7": _run_fig7,
    "existence": _run_existence, "fading-outage": _run_fading,
}


# --- output -------------------------------------------------------------------

def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return "%.17g" % v
    return str(v)


def _meta(cfg, timestamp):
    meta = {"version": __version__, "config": {k: cfg[k] for k in
                                               ("command", "figure", "params", "seed", "format")}}
    if timestamp:
        meta["timestamp"] = datetime.datetime.now(datetime.timezone.utc).isoformat()
    return meta


def render(cols, rows, cfg, timestamp=True):
    meta = _meta(cfg, timestamp)
    if cfg["format"] == "json":
        def clean(v):
            if isinstance(v, (np.floating, float)):
                return float(v)
            if isinstance(v, (np.integer,)):
                return int(v)
            return v
        body = {"columns": cols, "rows": [[clean(v) for v in r] for r in rows], "meta": meta}
        return json.dumps(body, indent=1) + "\n"
    lines = [",".join(cols)]
    lines += [",".join(_fmt(v) for v in r) for r in rows]
    lines.append(f"# version: {meta['version']}")
    lines.append(f"# config: {json.dumps(meta['config'], sort_keys=True)}")
    if timestamp:
        lines.append(f"# timestamp: {meta['timestamp']}")
    return "\n".join(lines) + "\n"


def run(cfg, timestamp=True):
    """Validate and execute ``cfg``; returns ``(exit_code, text, diagnostics)``."""
    try:
        diags = validate(cfg)
    except (TypeError, ValueError, KeyError) as exc:
        diags = [f"invalid parameter value: {exc}"]
    if diags:
        return EXIT_INVALID, "", diags
    try:
        cols, rows = RUNNERS[cfg["kind"]](cfg["params"], cfg["seed"])
    except (InfeasibleError, GapUndefinedError, ScenarioError) as exc:
        return EXIT_INFEASIBLE, "", [f"infeasible: {exc}"]
    except (ValueError, TypeError, KeyError) as exc:
        return EXIT_INVALID, "", [f"invalid input: {exc}"]
    return EXIT_OK, render(cols, rows, cfg, timestamp), []


def build_parser():
    ap = argparse.ArgumentParser(prog="bersec", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=[k for k in DEFAULTS if k not in ("existence", "fig7")] + ["figure"])
    ap.add_argument("figure_id", nargs="?", type=int, help="figure number for the 'figure' command")
    ap.add_argument("--config", help="JSON config file")
    ap.add_argument("--seed", type=int)
    ap.add_argument("--out", help="output path (default: stdout)")
    ap.add_argument("--format", choices=["csv", "json"])
    ap.add_argument("--param", action="append", default=[], metavar="KEY=VALUE",
                    help="override one parameter; VALUE is parsed as JSON when possible")
    ap.add_argument("--no-timestamp", action="store_true", help="omit the timestamp metadata line")
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        file_cfg = load_config_file(args.config) if args.config else None
        cfg = resolve(args.command, args.figure_id, file_cfg, args.param, args.seed, args.out, args.format)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    code, text, diags = run(cfg, timestamp=not args.no_timestamp)
    for d in diags:
        print(f"error: {d}", file=sys.stderr)
    if code == EXIT_OK:
        if cfg["out"]:
            Path(cfg["out"]).write_text(text)
        else:
            sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
