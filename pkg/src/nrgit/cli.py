"""Command-line driver.

Exit codes: 0 success, 1 a mathematical condition fails (certificate in the
report), 2 validation or resource errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .errors import ConditionFailure, NrgitError, ResourceLimitExceeded, ValidationError
from .homdim import homdim_report
from .instance import load
from .kernel import step_budget
from .pipeline import blowup_report, check_report, pipeline_report, quotient_report, stratify_report

COMMANDS = {
    "check": lambda inst, args: check_report(inst),
    "stratify": lambda inst, args: stratify_report(inst),
    "quotient": lambda inst, args: quotient_report(inst, args.seed),
    "blowup": lambda inst, args: blowup_report(inst, args.seed),
    "pipeline": lambda inst, args: pipeline_report(inst, args.seed),
}


def build_parser():
    p = argparse.ArgumentParser(prog="nrgit", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"nrgit {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("instance", help="instance JSON file")
        sp.add_argument("--step-budget", type=int, default=None)
        sp.add_argument("--pool-degree", type=int, default=None)
        sp.add_argument("--m", type=int, default=None)
        sp.add_argument("--report", default=None, help="also write the report to this file")
        sp.add_argument("--seed", type=int, default=0)
    hp = sub.add_parser("homdim")
    hp.add_argument("--a", type=int, nargs="+", required=True)
    hp.add_argument("--b", type=int, nargs="+", required=True)
    hp.add_argument("--report", default=None)
    return p


def _emit(report, path):
    text = json.dumps(report, sort_keys=True, indent=2)
    print(text)
    if path:
        Path(path).write_text(text + "\n")


def run(argv=None):
    args = build_parser().parse_args(argv)
    if args.command == "homdim":
        try:
            report = homdim_report(args.a, args.b)
        except ValidationError as exc:
            _emit({"kind": "error", "error": str(exc)}, args.report)
            return 2
        report["tool_version"] = __version__
        _emit(report, args.report)
        return 0
    try:
        inst = load(args.instance)
        for key in ("step_budget", "pool_degree", "m"):
            val = getattr(args, key)
            if val is not None:
                if val < 1:
                    raise ValidationError(f"--{key.replace('_', '-')} must be positive")
                inst.limits[key] = val
        with step_budget(inst.limits["step_budget"]):
            report, code = COMMANDS[args.command](inst, args)
    except ResourceLimitExceeded as exc:
        _emit({"kind": "error", "error": str(exc), "steps": exc.steps, "progress": exc.progress}, args.report)
        return 2
    except ConditionFailure as exc:
        _emit({"kind": "failure", "reason": str(exc), "certificate": exc.certificate}, args.report)
        return 1
    except (ValidationError, NrgitError) as exc:
        _emit({"kind": "error", "error": str(exc)}, args.report)
        return 2
    report = dict(report)
    report["instance"] = inst.name
    report["instance_sha256"] = inst.sha256()
    report["tool_version"] = __version__
    _emit(report, args.report)
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
