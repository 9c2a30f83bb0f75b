"""Command-line entry point.

    flapwing list-scenarios
    flapwing simulate fig2-stroke --output-dir out/
    flapwing sweep my_sweep.ini
    flapwing run pivot-table1 --dump-config

The <config> argument is a file path or the name of a built-in scenario.
Exit status: 0 success, 1 configuration error (JSON report on stderr),
2 numerical blow-up.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import MODES, dump_config, parse_config
from .design import NoSolutionError
from .integrator import BlowUpError
from .model import ValidationError
from .runner import run_config
from .scenarios import is_builtin, list_scenarios, scenario_text

EXIT_OK, EXIT_CONFIG, EXIT_BLOWUP = 0, 1, 2


def _error(kind: str, violations=None, **extra) -> dict:
    out = {"status": "error", "kind": kind}
    if violations is not None:
        out["violations"] = [{"field": f, "message": m} for f, m in violations]
    out.update(extra)
    return out


def _report(obj: dict) -> None:
    print(json.dumps(obj, sort_keys=True), file=sys.stderr)


def _read_config(ref: str) -> str:
    path = Path(ref)
    if path.exists():
        return path.read_text()
    if is_builtin(ref):
        return scenario_text(ref)
    raise ValidationError([("config", f"no such file or built-in scenario: {ref!r}")])


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="flapwing", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("list-scenarios", help="list built-in scenarios")
    for mode in (*MODES, "run"):
        sp = sub.add_parser(mode, help=f"run a {mode} scenario" if mode != "run"
                            else "run a scenario in whatever mode it declares")
        sp.add_argument("config", help="scenario file or built-in scenario name")
        sp.add_argument("--output-dir", default=".", help="directory for output files")
        sp.add_argument("--dump-config", action="store_true",
                        help="print the parsed scenario in canonical form and exit")
        sp.add_argument("--seedless", action="store_true",
                        help="reserved; the simulations use no RNG so this is rejected")
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "list-scenarios":
        for name, desc in list_scenarios():
            print(f"{name:24s} {desc}")
        return EXIT_OK

    if args.seedless:
        _report(_error("config", [("--seedless", "no random number generator exists; flag is reserved")]))
        return EXIT_CONFIG
    try:
        cfg = parse_config(_read_config(args.config))
        if args.command != "run" and cfg.mode != args.command:
            raise ValidationError([("scenario.mode", f"scenario mode is {cfg.mode!r}, "
                                    f"but the {args.command!r} command was used")])
    except ValidationError as exc:
        _report(_error("config", exc.violations))
        return EXIT_CONFIG
    if args.dump_config:
        sys.stdout.write(dump_config(cfg))
        return EXIT_OK

    try:
        result = run_config(cfg, args.output_dir)
    except ValidationError as exc:
        _report(_error("config", exc.violations))
        return EXIT_CONFIG
    except NoSolutionError as exc:
        _report(_error("no-solution", message=str(exc), best_residual=exc.best.residual))
        return EXIT_CONFIG
    except BlowUpError as exc:
        _report(_error("blow-up", message=str(exc), time_s=exc.t))
        return EXIT_BLOWUP
    except ValueError as exc:
        _report(_error("config", [("params", str(exc))]))
        return EXIT_CONFIG
    for f in result.files:
        print(f)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
