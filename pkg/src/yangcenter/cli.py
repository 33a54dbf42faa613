"""Command line front end.

    yangcenter rmatrix --algebra o --N 3
    yangcenter center --N 3 --level crit --hord 2 --deg 3 --udeg 2
    yangcenter suite --config run.json --out report.json

Exit codes: 0 all checks pass, 1 some check failed, 2 bad config or crash.
"""

from __future__ import annotations

import argparse
import json
import sys

from .context import ConfigError
from .report import (SUITES, TARGETS, RunConfig, emit_series, run_suite,
                     write_json)

COMMAND_SUITES = {
    "rmatrix": ["rmatrix"],
    "fseries": ["fseries"],
    "brauer": ["brauer"],
    "engine": ["engine"],
    "center": ["center"],
    "classical": ["classical", "phi"],
}

FLAG_FIELDS = {"algebra": "kind", "N": "N", "level": "level", "hord": "K", "deg": "D",
               "udeg": "U", "forder": "M", "seed": "seed", "m": "m"}


def _parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with RunConfig fields")
    common.add_argument("--algebra", choices=["o", "sp"])
    common.add_argument("--N", type=int)
    common.add_argument("--level", help="'crit' or a rational p/q")
    common.add_argument("--hord", type=int, help="h-order K (exclusive)")
    common.add_argument("--deg", type=int, help="module degree bound D")
    common.add_argument("--udeg", type=int, help="u-power bound U")
    common.add_argument("--forder", type=int, help="order M of the normalizing series")
    common.add_argument("--m", type=int, action="append", help="series index (repeatable)")
    common.add_argument("--seed", type=int)
    common.add_argument("--out", help="write JSON here instead of stdout")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for checks")
    common.add_argument("--emit", choices=TARGETS, help="emit a series instead of running checks")

    p = argparse.ArgumentParser(prog="yangcenter", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMAND_SUITES:
        sub.add_parser(name, parents=[common], help=f"run the {name} checks")
    s = sub.add_parser("suite", parents=[common], help="run selected suites")
    s.add_argument("--suite", action="append", choices=list(SUITES) + ["all"],
                   help="suite name (repeatable); default: the standard set")
    return p


def build_config(args) -> RunConfig:
    data = {}
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(f"cannot read config: {e}") from None
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
    for flag, fld in FLAG_FIELDS.items():
        v = getattr(args, flag)
        if v is not None:
            data[fld] = v
    if args.command in COMMAND_SUITES:
        data["suites"] = COMMAND_SUITES[args.command]
    elif getattr(args, "suite", None):
        data["suites"] = args.suite
    if args.out:
        data["out"] = args.out
    try:
        return RunConfig.from_dict(data)
    except TypeError as e:
        raise ConfigError(str(e)) from None


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        cfg = build_config(args)
        if args.emit:
            obj = emit_series(cfg, args.emit)
            code = 0
        else:
            obj, code = run_suite(cfg, jobs=args.jobs)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    except Exception as e:  # noqa: BLE001
        print(f"internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return 2
    text = write_json(obj, cfg.out)
    if not cfg.out:
        sys.stdout.write(text)
    else:
        s = obj.get("summary")
        if s:
            print(f"{obj['status']}: {s['passed']} passed, {s['failed']} failed, "
                  f"{s['errors']} errors -> {cfg.out}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
