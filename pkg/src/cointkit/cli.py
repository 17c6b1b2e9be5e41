"""Command-line driver: ``cointkit <command> [options]``.

Exit codes: 0 success, 1 input error, 2 numerical failure.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import report as R
from .data import derive, france_path, load
from .errors import DataError, NumericalError
from .simulate import CALIBRATION_TESTS

log = logging.getLogger("cointkit")

COMMANDS = ("descstats", "unitroot", "engle-granger", "johansen", "vecm", "cumfit",
            "calibrate", "report-all")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--data", type=Path, default=None,
                        help="CSV dataset (default: bundled France data)")
    common.add_argument("--config", type=Path, default=None,
                        help="JSON file of named relations merged over the bundled presets")
    common.add_argument("--preset", action="append", default=None,
                        help="relation preset to run (repeatable; default: all)")
    common.add_argument("--seed", type=int, default=0, help="master seed for simulations")
    common.add_argument("--format", choices=("tsv", "structured"), default="tsv")
    common.add_argument("--out", type=Path, default=None,
                        help="write tables/, figures/ and metadata.json here instead of stdout")
    common.add_argument("--percent-input", action="store_true",
                        help="rate columns are in percent; divide them by 100 on load")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="cointkit", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common])
        if name == "vecm":
            sp.add_argument("--rank", type=int, action="append", default=None,
                            help="cointegrating rank (repeatable; default: from the preset)")
        if name in ("johansen", "vecm"):
            sp.add_argument("--lags", type=int, nargs="+", default=list(R.VAR_LAGS),
                            help="levels-VAR lag orders")
        if name == "calibrate":
            sp.add_argument("test", choices=CALIBRATION_TESTS)
            sp.add_argument("--reps", type=int, default=2000)
            sp.add_argument("--level", type=float, default=0.05)
    return p


def _run(args) -> tuple:
    if args.command == "calibrate":
        return R.cmd_calibrate(args.test, args.reps, args.seed, args.level), None, b"", {}
    path = args.data or france_path()
    raw = Path(path).read_bytes() if Path(path).is_file() else b""
    ds = derive(load(path, percent_input=args.percent_input))
    cfg = R.load_config(args.config)
    if args.command == "descstats":
        return R.cmd_descstats(ds), ds, raw, cfg
    if args.command == "unitroot":
        return R.cmd_unitroot(ds), ds, raw, cfg
    if args.command == "report-all":
        return R.report_all(ds, cfg, args.preset), ds, raw, cfg
    b = R.ReportBundle()
    for rel in R.relations(cfg, args.preset):
        if args.command == "engle-granger":
            b.merge(R.cmd_engle_granger(ds, rel))
        elif args.command == "johansen":
            b.merge(R.cmd_johansen(ds, rel, lags=tuple(args.lags)))
        elif args.command == "vecm":
            b.merge(R.cmd_vecm(ds, rel, args.rank, tuple(args.lags)))
        elif args.command == "cumfit":
            b.merge(R.cmd_cumfit(ds, rel))
    return b, ds, raw, cfg


def _options(args) -> dict:
    skip = {"data", "config", "out", "verbose", "command"}
    return {k: (str(v) if isinstance(v, Path) else v)
            for k, v in sorted(vars(args).items()) if k not in skip}


def _metadata(b, args, ds, raw, cfg) -> dict:
    if ds is None:
        return {"command": args.command, "options": _options(args), "seed": args.seed,
                "tables": {n: {"title": t.title, "operations": t.operations, "notes": t.notes}
                           for n, t in b.tables.items()}}
    return R.metadata(b, args.command, ds, raw, cfg, args.seed, _options(args))


def _write(b: R.ReportBundle, meta: dict, args) -> None:
    structured = args.format == "structured"
    render = R.table_json if structured else R.table_tsv
    ext = "json" if structured else "tsv"
    if args.out is None:
        if structured:
            doc = {"tables": {n: json.loads(R.table_json(t)) for n, t in b.tables.items()},
                   "metadata": meta}
            sys.stdout.write(json.dumps(doc, indent=2) + "\n")
            return
        for name, t in b.tables.items():
            sys.stdout.write(f"# {name}: {t.title}\n")
            sys.stdout.write(render(t))
            for note in t.notes:
                sys.stdout.write(f"# note: {note}\n")
            sys.stdout.write("\n")
        return
    out = args.out
    (out / "tables").mkdir(parents=True, exist_ok=True)
    for name, t in b.tables.items():
        (out / "tables" / f"{name}.{ext}").write_text(render(t), encoding="utf-8")
    for name, s in b.figures.items():
        f = out / "figures" / f"{name}.tsv"
        f.parent.mkdir(parents=True, exist_ok=True)
        f.write_text(R.figure_tsv(s), encoding="utf-8")
    (out / "metadata.json").write_text(json.dumps(meta, indent=2) + "\n", encoding="utf-8")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        b, ds, raw, cfg = _run(args)
        for w in b.warnings:
            if not w.startswith("data-provenance"):
                log.warning(w)
        _write(b, _metadata(b, args, ds, raw, cfg), args)
    except DataError as exc:
        print(f"cointkit: input error: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"cointkit: numerical failure: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"cointkit: input error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
