"""Command-line front end.

    isophote run SCENE.yaml [--out DIR] [--seed N]
    isophote validate SCENE.yaml
    isophote VERB [TARGET] key=value ... [--out DIR] [--seed N]
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional

from . import __version__
from .errors import SceneError
from .jobs import EXIT_CODES, OUT_ENV, run_scene
from .scene import PRIMARY_ARG, VERBS, SceneConfig, job_from_tokens, parse_scene, serialize


def _epilog() -> str:
    codes = "\n".join(f"  {k}  {v}" for k, v in EXIT_CODES.items())
    verbs = "\n".join(f"  {v:<16} target: {PRIMARY_ARG[v] or '-'};  keys: {', '.join(VERBS[v])}"
                      for v in VERBS)
    return (f"verbs:\n{verbs}\n\n"
            "angles take a unit suffix (60deg, 1.047rad); bare numbers are radians.\n"
            "directions are comma lists (d=0,0,1); grids are NxM (grid=256x256).\n"
            "tol.NAME=VALUE overrides a named tolerance for the job.\n\n"
            f"output goes to a timestamped run-* directory under --out, ${OUT_ENV},\n"
            "or ./isophote_out, holding report.json, report.txt and manifest.json.\n\n"
            f"exit codes:\n{codes}\n")


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="isophote", formatter_class=argparse.RawDescriptionHelpFormatter,
        description="Trace and certify isophote curves; build and verify canal surfaces.",
        epilog=_epilog())
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("--out", help=f"output root (default ${OUT_ENV} or ./isophote_out)")
    p.add_argument("--seed", type=int, help="seed for randomized sampling")
    p.add_argument("--quiet", action="store_true", help="print only the output directory")
    p.add_argument("command", help="run, validate, or a verb")
    p.add_argument("rest", nargs="*", help="scene file, or [TARGET] key=value ...")
    return p


def _load(path: str) -> SceneConfig:
    return parse_scene(Path(path).read_text())


def main(argv: Optional[list[str]] = None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.command in ("run", "validate"):
            if len(args.rest) != 1:
                raise SceneError(f"{args.command} takes exactly one scene file")
            config = _load(args.rest[0])
            if args.command == "validate":
                print(serialize(config), end="")
                return 0
        elif args.command in VERBS:
            rest = list(args.rest)
            target = rest.pop(0) if rest and "=" not in rest[0] else None
            job, _ = job_from_tokens(args.command, target, rest)
            config = SceneConfig(jobs=[job])
        else:
            raise SceneError(f"unknown command {args.command!r} "
                             f"(run, validate, {', '.join(VERBS)})")
    except (SceneError, OSError) as exc:
        print(f"isophote: error: {exc}", file=sys.stderr)
        return 2

    report = run_scene(config, args.out, args.seed)
    if args.quiet:
        print(report.out_dir)
    else:
        sys.stdout.write(report.text())
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
