"""Command-line entry point: ``bsgame <subcommand> CONFIG [--seed N] [--trials N] [--out csv|json]``.

Output goes to stdout (or ``--output PATH``). On refusal or failure a JSON
record ``{"error": ..., "message": ...}`` is written to stderr and the exit
code is 2.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from .channel import draw_channels, load_config, params_from_config
from .limits import empirical_fractions, nonatomic_equilibrium_fractions
from .metrics import braess_compare, sweep_poa_pos
from .selection import (
    ConvergenceError,
    EnumerationCapError,
    all_potentials,
    enumerate_ne,
    is_selection_ne,
    profile_from_index,
    profile_index,
    random_profile,
    run_selection_dynamics,
)
from .sharing import kkt_residual, random_power_profile, run_sharing_dynamics


def _k_range(cfg: dict) -> list:
    raw = cfg.get("K_range", "1:9")
    if isinstance(raw, str) and ":" in raw:
        lo, hi = (int(v) for v in raw.split(":"))
        return list(range(lo, hi + 1))
    return [int(v) for v in (raw if isinstance(raw, list) else [raw])]


def _csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def cmd_select_run(cfg, args) -> str:
    params = params_from_config(cfg)
    g = draw_channels(params, (args.seed, 0))
    if "start" in cfg:
        start = np.atleast_1d(np.array(cfg["start"], dtype=np.int64))
    else:
        start = random_profile(params.K, params.S, (args.seed, 1))
    schedule = cfg.get("schedule", "random")
    a, traj = run_selection_dynamics(g, params, start, schedule, seed=(args.seed, 2),
                                     max_steps=int(cfg.get("max_steps", 10**6)))
    if args.out == "csv":
        return traj.to_csv()
    return _json({
        "final_profile": a.tolist(),
        "final_index": profile_index(a, params.S),
        "is_ne": is_selection_ne(g, params, a),
        "changes": traj.num_changes,
        "trajectory": traj.to_records(),
    })


def cmd_share_run(cfg, args) -> str:
    params = params_from_config(cfg)
    g = draw_channels(params, (args.seed, 0))
    start = random_power_profile(params, (args.seed, 1)) if cfg.get("start") == "random" else None
    p, traj = run_sharing_dynamics(g, params, start, cfg.get("schedule", "round_robin"),
                                   seed=(args.seed, 2), eps=float(cfg.get("eps", 1e-9)),
                                   max_sweeps=int(cfg.get("max_sweeps", 10**4)))
    if args.out == "csv":
        return traj.to_csv()
    return _json({
        "final_powers": p.tolist(),
        "kkt_residual": kkt_residual(p, g, params),
        "sweeps": traj.num_sweeps,
        "trajectory": traj.to_records(),
    })


def cmd_enumerate(cfg, args) -> str:
    params = params_from_config(cfg)
    g = draw_channels(params, (args.seed, 0))
    report = enumerate_ne(g, params)
    if args.out == "csv":
        phi = all_potentials(g, params)
        ne = set(report.ne_indices)
        rows = [
            (i, "-".join(map(str, profile_from_index(i, params.K, params.S))), float(phi[i]), int(i in ne))
            for i in range(phi.size)
        ]
        return _csv(["profile_index", "assignment", "potential", "is_ne"], rows)
    return _json({
        "ne_indices": report.ne_indices,
        "ne_assignments": [a.tolist() for a in report.assignments()],
        "potentials": report.potentials.tolist(),
        "utilities": report.utilities.tolist(),
        "is_unique_potential": report.is_unique_potential,
    })


def cmd_poa_pos(cfg, args) -> str:
    res = sweep_poa_pos(int(cfg["S"]), _k_range(cfg), args.trials, float(cfg.get("snr_db", 10.0)),
                        args.seed, cfg.get("w"))
    return res.to_csv() if args.out == "csv" else res.to_json() + "\n"


def cmd_nonatomic(cfg, args) -> str:
    params = params_from_config(cfg)
    theory = nonatomic_equilibrium_fractions(params)
    est = empirical_fractions(params, args.seed, args.trials)
    rows = [(s, float(theory.fractions[s]), float(est.mean[s]), float(est.stderr[s]))
            for s in range(params.S)]
    if args.out == "csv":
        return _csv(["bs", "theoretical", "empirical_mean", "empirical_se"], rows)
    return _json({"optimum_value": theory.value, "trials": args.trials,
                  "rows": [dict(zip(["bs", "theoretical", "empirical_mean", "empirical_se"], r))
                           for r in rows]})


def cmd_braess(cfg, args) -> str:
    res = braess_compare(int(cfg["S"]), _k_range(cfg), args.trials, float(cfg.get("snr_db", 10.0)),
                         args.seed, cfg.get("w"))
    return res.to_csv() if args.out == "csv" else res.to_json() + "\n"


COMMANDS = {
    "select-run": cmd_select_run,
    "share-run": cmd_share_run,
    "enumerate": cmd_enumerate,
    "poa-pos": cmd_poa_pos,
    "nonatomic": cmd_nonatomic,
    "braess": cmd_braess,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bsgame", description="BS selection and sharing games")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("config", help="key = value config file")
        p.add_argument("--seed", type=int, default=None, help="overrides 'seed' in the config")
        p.add_argument("--trials", type=int, default=None, help="overrides 'trials' in the config")
        p.add_argument("--out", choices=("csv", "json"), default="csv")
        p.add_argument("--output", default=None, help="write here instead of stdout")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.seed is None:
            args.seed = int(cfg.get("seed", 0))
        if args.trials is None:
            args.trials = int(cfg.get("trials", 100))
        text = COMMANDS[args.command](cfg, args)
    except (EnumerationCapError, ConvergenceError, ValueError, KeyError, OSError) as exc:
        record = {"error": type(exc).__name__, "message": str(exc), "command": args.command}
        if isinstance(exc, EnumerationCapError):
            record["cap"] = exc.cap
        sys.stderr.write(json.dumps(record) + "\n")
        return 2
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
