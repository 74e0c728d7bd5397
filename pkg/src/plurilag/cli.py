"""Command-line driver.

Exit codes: 0 when every executed check passes, 1 when a check fails,
2 on input errors (unreadable file, bad grammar, unresolved names).
"""

from __future__ import annotations

import argparse
import sys
from importlib import resources
from pathlib import Path

from . import __version__
from .problem import TASK_KINDS, ProblemError, load_problem
from .runner import render_json, render_text, run_task

SUBCOMMANDS = TASK_KINDS + ("selftest",)


def bundled_problem(name: str = "sine_gordon.problem") -> Path:
    return Path(str(resources.files("plurilag") / "data" / name))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="plurilag", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"plurilag {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in SUBCOMMANDS:
        p = sub.add_parser(name, help=f"run {name} tasks" if name != "selftest" else "run the bundled sine-Gordon suite")
        p.add_argument("--problem", required=name != "selftest", help="problem file to read")
        p.add_argument("--json", dest="json_path", help="also write a JSON report here")
        p.add_argument("--task", action="append", default=[], help="run only the named task (repeatable)")
    return parser


def run_cli(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    path = Path(args.problem) if args.problem else bundled_problem()
    try:
        prob = load_problem(path)
        tasks = prob.tasks if args.command == "selftest" else [t for t in prob.tasks if t.kind == args.command]
        if args.task:
            unknown = set(args.task) - {t.name for t in tasks}
            if unknown:
                raise ProblemError(path, 0, f"no {args.command} task(s) named {sorted(unknown)}")
            tasks = [t for t in tasks if t.name in args.task]
        if not tasks:
            raise ProblemError(path, 0, f"no tasks of kind {args.command!r}")
        results = [run_task(prob, t) for t in tasks]
    except ProblemError as exc:
        print(f"error: {exc}", file=stderr)
        return 2
    header = f"# plurilag {__version__} | command: {args.command} | problem: {path}"
    stdout.write(render_text(results, header))
    if args.json_path:
        meta = {"command": args.command, "problem": str(path)}
        try:
            Path(args.json_path).write_text(render_json(results, meta), encoding="utf-8")
        except OSError as exc:
            print(f"error: cannot write {args.json_path}: {exc}", file=stderr)
            return 2
    return 0 if all(r.passed for r in results) else 1


def main():
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
