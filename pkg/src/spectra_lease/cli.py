"""``spectra-lease`` command line: run scenarios, write CSV/SVG/manifest."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import __version__, selftest
from .channel import ChannelSet
from .config import ConfigError, load_config, parse_pairs, write_manifest
from .game import stackelberg_solve
from .output import SCENARIO1_COLUMNS, SCENARIO2_COLUMNS, emit_chart, emit_csv
from .sim import run_scenario1, run_scenario2

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 2, 3
log = logging.getLogger("spectra_lease")


def _overrides(args) -> list[str]:
    sets = list(args.set or [])
    for flag, key in (("seed", "seed"), ("policy", "policy"), ("slots", "n_slots"), ("runs", "n_runs")):
        value = getattr(args, flag, None)
        if value is not None:
            sets.append(f"{key} = {value}")
    return sets


def _scenario(args, name: str) -> int:
    cfg, meta = load_config(args.config, _overrides(args))
    if meta.get("scenario", name) != name:
        raise ConfigError(f"scenario: manifest is for {meta['scenario']}, not {name}")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_manifest(cfg, name, out)
    if name == "scenario1":
        rows = run_scenario1(cfg)
        emit_csv(rows, out / "scenario1.csv", SCENARIO1_COLUMNS)
        for kind in ("rate_vs_distance", "jamming_vs_distance", "alphabeta_vs_distance"):
            emit_chart(rows, kind, out / f"{kind}.svg")
    else:
        rows = run_scenario2(cfg)
        emit_csv(rows, out / "scenario2.csv", SCENARIO2_COLUMNS)
        emit_chart(rows, "unreliable_vs_time", out / "unreliable_vs_time.svg")
    log.info("wrote %d rows to %s", len(rows), out)
    return EXIT_OK


def _solve(args) -> int:
    try:
        text = Path(args.channels).read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read channel file {args.channels}: {e}") from None
    pairs = parse_pairs(text.splitlines(), str(args.channels))
    gains = {}
    for key in ("g_ps", "g_sp", "g_ss", "g_se"):
        if key not in pairs:
            raise ConfigError(f"{key}: missing from channel file")
        try:
            gains[key] = float(pairs.pop(key))
        except ValueError:
            raise ConfigError(f"{key}: not a number") from None
    try:
        ch = ChannelSet(**gains)
    except ValueError as e:
        raise ConfigError(str(e)) from None
    cfg, _ = load_config(args.config, {**pairs, **parse_pairs(_overrides(args), "--set")})
    sol = stackelberg_solve(cfg.su, ch, cfg.game, cfg.grid)
    print(f"leased = {sol.leased}")
    if sol.leased:
        for key, value in (
            ("alpha", sol.alpha_star), ("beta", sol.beta_star), ("p_s", sol.powers.p_s),
            ("p_c", sol.powers.p_c), ("p_j", sol.powers.p_j), ("su_utility", sol.su_utility),
        ):
            print(f"{key} = {value!r}")
    print(f"secrecy_rate = {sol.secrecy_rate!r}")
    return EXIT_OK


def _selftest(args) -> int:
    results = selftest.run()
    for name, ok in results:
        print(f"{'PASS' if ok else 'FAIL'}  {name}")
    return EXIT_OK if all(ok for _, ok in results) else EXIT_RUNTIME


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spectra-lease", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, runs=True):
        p.add_argument("--config", help="key = value config or manifest file")
        p.add_argument("--set", action="append", metavar="KEY=VALUE", help="override one config key")
        p.add_argument("--seed", type=int)
        if runs:
            p.add_argument("--out", default="results", help="output directory")
            p.add_argument("--policy", choices=["all", "reputation", "random", "best_csi"])
            p.add_argument("--slots", type=int)
            p.add_argument("--runs", type=int)

    common(sub.add_parser("scenario1", help="single-SU eavesdropper-distance sweep"))
    common(sub.add_parser("scenario2", help="multi-SU relay-selection comparison"))
    p = sub.add_parser("solve", help="one-shot Stackelberg solve for a channel file")
    p.add_argument("channels", help="file with g_ps, g_sp, g_ss, g_se (and optional overrides)")
    common(p, runs=False)
    sub.add_parser("selftest", help="run built-in oracle checks")
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    args = build_parser().parse_args(argv)
    try:
        if args.command in ("scenario1", "scenario2"):
            return _scenario(args, args.command)
        if args.command == "solve":
            return _solve(args)
        return _selftest(args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as e:  # noqa: BLE001
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
