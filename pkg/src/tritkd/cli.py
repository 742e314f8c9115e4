"""Command-line interface: bell report, parameter sweep, crossover, simulation.

Exit codes: 0 on success, 1 on runtime/IO failure, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .attack import AttackParams
from .correlations import (
    CRITICAL_VISIBILITY,
    LOCAL_REALISM_BOUND,
    bell_s,
    correlation_q_closed,
)
from .quantum import standard_settings
from .simulate import SimConfig, run, summary_dict, write_summary, write_transcript
from .sweep import find_crossover, format_csv, sweep_rows

F_DOMAIN = (0.0, 1.0)
LAM_DOMAIN = (-0.5, 1.0)


def _parse_triple(text: str) -> np.ndarray:
    parts = text.split(",")
    if len(parts) != 3:
        raise ValueError(f"expected three comma-separated phases, got {text!r}")
    return np.array([float(p) for p in parts])


def _parse_settings(text: str):
    triples = text.split(";")
    if len(triples) != 6:
        raise ValueError("expected six semicolon-separated phase triples (A1;A2;A3;B1;B2;B3)")
    vecs = [_parse_triple(t) for t in triples]
    return tuple(vecs[:3]), tuple(vecs[3:])


def cmd_bell(args) -> int:
    if args.settings is None:
        alice, bob = standard_settings()
    else:
        alice, bob = args.settings
    v = args.visibility

    q = {
        (k, l): v * correlation_q_closed(alice[k - 1], bob[l - 1])
        for k, l in ((1, 1), (1, 2), (2, 1), (2, 2), (3, 3))
    }
    s = bell_s(q[(1, 1)], q[(1, 2)], q[(2, 1)], q[(2, 2)])
    for (k, l), value in q.items():
        print(f"Q{k}{l} = {value.real:.6f} {value.imag:+.6f}i")
    print(f"S = {s:.6f}")
    print(f"local-realism bound = {LOCAL_REALISM_BOUND:.6f}")
    print(f"critical visibility V0 = {CRITICAL_VISIBILITY:.6f}")
    return 0


def _clip_range(lo: float, hi: float, domain: tuple[float, float], name: str, parser, notes):
    if lo > hi:
        parser.error(f"{name} range is empty: [{lo}, {hi}]")
    if hi < domain[0] or lo > domain[1]:
        parser.error(f"{name} range [{lo}, {hi}] lies outside the feasible domain {list(domain)}")
    clo, chi = max(lo, domain[0]), min(hi, domain[1])
    if (clo, chi) != (lo, hi):
        notes.append(f"clipped {name} range from [{lo:.9g}, {hi:.9g}] to [{clo:.9g}, {chi:.9g}]")
    return clo, chi


def cmd_sweep(args, parser) -> int:
    notes = []
    f_lo, f_hi = _clip_range(args.f_min, args.f_max, F_DOMAIN, "f", parser, notes)
    l_lo, l_hi = _clip_range(args.lam_min, args.lam_max, LAM_DOMAIN, "lam", parser, notes)
    if args.steps < 1:
        parser.error("steps must be >= 1")

    rows = sweep_rows(
        np.linspace(f_lo, f_hi, args.steps),
        np.linspace(l_lo, l_hi, args.steps),
        log_base=args.log_base,
    )
    comments = [
        f"attack sweep: {args.steps}x{args.steps} grid, f in [{f_lo:.9g}, {f_hi:.9g}], "
        f"lam in [{l_lo:.9g}, {l_hi:.9g}], log base {args.log_base:.9g}",
        *notes,
    ]
    Path(args.out).write_text(format_csv(rows, comments), encoding="ascii")
    print(f"wrote {len(rows)} rows to {args.out}")
    return 0


def cmd_crossover(args) -> int:
    result = find_crossover(tolerance=args.tolerance, log_base=args.log_base)
    print(
        json.dumps(
            {
                "v_max": result.v_max,
                "argmax_f": result.argmax_f,
                "argmax_lam": result.argmax_lam,
                "tolerance": result.tolerance,
            },
            indent=2,
            sort_keys=True,
        )
    )
    return 0


def cmd_simulate(args, parser) -> int:
    if args.honest == (args.f is not None or args.lam is not None):
        parser.error("choose either --honest or both --f and --lam")
    attack = None
    if not args.honest:
        if args.f is None or args.lam is None:
            parser.error("attack source needs both --f and --lam")
        try:
            attack = AttackParams(f=args.f, lam=args.lam)
        except ValueError as exc:
            parser.error(str(exc))

    if args.workers < 1:
        parser.error("--workers must be >= 1")
    weights = None
    if args.weights is not None:
        parts = args.weights.split(",")
        if len(parts) != 9:
            parser.error("--weights needs nine comma-separated probabilities")
        weights = tuple(float(p) for p in parts)

    try:
        config = SimConfig(trials=args.trials, seed=args.seed, attack=attack, setting_weights=weights)
    except ValueError as exc:
        parser.error(str(exc))

    transcript = run(config, workers=args.workers)
    if args.out is not None:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        write_transcript(transcript, out_dir / "transcript.tsv")
        write_summary(config, transcript, out_dir / "summary.json")
    print(json.dumps(summary_dict(config, transcript), indent=2, sort_keys=True))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tritkd",
        description="Qutrit entanglement key distribution: Bell analysis, attack sweeps, simulation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_bell = sub.add_parser("bell", help="print correlations, Bell quantity, and thresholds")
    p_bell.add_argument(
        "--settings",
        type=str,
        default=None,
        help="six semicolon-separated phase triples A1;A2;A3;B1;B2;B3 (radians)",
    )
    p_bell.add_argument("--visibility", type=float, default=1.0, help="scale all correlations")

    p_sweep = sub.add_parser("sweep", help="write a CSV grid over the attack plane")
    p_sweep.add_argument("--f-min", type=float, default=0.0)
    p_sweep.add_argument("--f-max", type=float, default=1.0)
    p_sweep.add_argument("--lam-min", type=float, default=-0.5)
    p_sweep.add_argument("--lam-max", type=float, default=1.0)
    p_sweep.add_argument("--steps", type=int, default=50, help="points per axis")
    p_sweep.add_argument("--log-base", type=float, default=3.0)
    p_sweep.add_argument("--out", type=str, required=True, help="output CSV path")

    p_cross = sub.add_parser("crossover", help="largest visibility with I_AE >= I_AB")
    p_cross.add_argument("--tolerance", type=float, default=1e-6)
    p_cross.add_argument("--log-base", type=float, default=3.0)

    p_sim = sub.add_parser("simulate", help="run the Monte Carlo protocol")
    p_sim.add_argument("--trials", type=int, required=True)
    p_sim.add_argument("--seed", type=int, required=True)
    p_sim.add_argument("--honest", action="store_true", help="undisturbed source")
    p_sim.add_argument("--f", type=float, default=None, help="attack matched-block weight")
    p_sim.add_argument("--lam", type=float, default=None, help="attack ancilla overlap")
    p_sim.add_argument("--weights", type=str, default=None, help="nine setting-pair probabilities")
    p_sim.add_argument("--workers", type=int, default=1)
    p_sim.add_argument("--out", type=str, default=None, help="directory for transcript and summary")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "bell" and args.settings is not None:
        try:
            args.settings = _parse_settings(args.settings)
        except ValueError as exc:
            parser.error(str(exc))
    try:
        if args.command == "bell":
            return cmd_bell(args)
        if args.command == "sweep":
            return cmd_sweep(args, parser)
        if args.command == "crossover":
            return cmd_crossover(args)
        return cmd_simulate(args, parser)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
