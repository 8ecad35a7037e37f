# -*- coding: utf-8 -*-
"""
Command-line front end

    opminimal model --operad ass_plus --max-arity 4 --out model.json
    opminimal verify --file model.json
    opminimal cohomology --operad com_plus
    opminimal builtins --format json

Exit codes: 0 success, 1 unreadable or invalid input, 2 failed hypothesis,
3 failed postcondition or verification, 64 usage error.
"""
import argparse
from dataclasses import dataclass
import json
import logging
import os
import sys

from . import __version__, reports
from .dgoperad import BUILTINS, load_operad, make_builtin
from .sullivan import minimal_model, resolve_mode, verify_minimal_model
from .__serialization import (model_from_dict, model_to_dict, read_json,
                              write_json)
from .__validation import (HypothesisError, InconsistencyError,
                           ValidationError)


logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_HYPOTHESIS = 2
EXIT_INCONSISTENT = 3
EXIT_USAGE = 64

COMMANDS = ("model", "verify", "cohomology", "builtins")
DEFAULT_MAX_ARITY = 4


@dataclass(frozen=True)
class RunConfig:
    """ Validated options of one CLI run

    Raises:
        ValueError: invalid combination of options
    """
    command: str
    operad: str = None
    file: str = None
    max_arity: int = None
    mode: str = "auto"
    out: str = None
    format: str = "text"
    verbose: bool = False

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"Unknown command {self.command!r}")
        if self.max_arity is not None and self.max_arity < 2:
            raise ValueError("--max-arity must be at least 2")
        if self.mode not in ("unitary", "non-unitary", "auto"):
            raise ValueError(f"Unknown mode {self.mode!r}")
        if self.format not in ("text", "json"):
            raise ValueError(f"Unknown format {self.format!r}")
        if self.command in ("model", "cohomology") and \
                (self.operad is None) == (self.file is None):
            raise ValueError("Give exactly one of --operad and --file")
        if self.command == "verify" and self.file is None:
            raise ValueError("verify needs --file")
        if self.operad is not None and self.operad not in BUILTINS:
            raise ValueError(f"Unknown builtin {self.operad!r}. Choose from "
                             f"{sorted(BUILTINS)}")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text",
                        help="report format")
    common.add_argument("--verbose", action="store_true",
                        help="log progress at INFO level")
    source = argparse.ArgumentParser(add_help=False)
    source.add_argument("--operad", choices=sorted(BUILTINS),
                        help="builtin target operad")
    source.add_argument("--file", help="operad JSON file (model JSON file "
                                       "for verify)")
    source.add_argument("--max-arity", type=int, dest="max_arity",
                        help="largest arity to compute")
    source.add_argument("--mode", choices=("unitary", "non-unitary", "auto"),
                        default="auto",
                        help="auto is unitary exactly when the target has "
                             "an arity-zero unit")
    parser = _Parser(prog="opminimal",
                     description="Sullivan minimal models of dg operads")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True
    model = sub.add_parser("model", parents=[common, source],
                           help="compute a minimal model")
    model.add_argument("--out", help="write the model JSON here")
    sub.add_parser("verify", parents=[common, source],
                   help="re-check every invariant of a model file")
    sub.add_parser("cohomology", parents=[common, source],
                   help="cohomology dimensions and hypothesis checks")
    sub.add_parser("builtins", parents=[common],
                   help="list the builtin operads")
    return parser


def _config_from_args(args):
    return RunConfig(command=args.command,
                     operad=getattr(args, "operad", None),
                     file=getattr(args, "file", None),
                     max_arity=getattr(args, "max_arity", None),
                     mode=getattr(args, "mode", "auto"),
                     out=getattr(args, "out", None),
                     format=args.format, verbose=args.verbose)


def _load_target(config:RunConfig):
    if config.operad is not None:
        return make_builtin(config.operad,
                            config.max_arity or DEFAULT_MAX_ARITY)
    return load_operad(config.file)


def _emit(text):
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


''' Commands '''


def cmd_model(config:RunConfig):
    """ Computes, verifies and writes a minimal model """
    target = _load_target(config)
    max_arity = config.max_arity or min(DEFAULT_MAX_ARITY, target.max_arity)
    mode = None if config.mode == "auto" else config.mode
    model = minimal_model(target, max_arity, mode)
    report = verify_minimal_model(model)
    data = model_to_dict(model, report)
    if config.out:
        write_json(data, config.out)
        logger.info(f"Model written to {config.out}")
    if config.format == "json":
        _emit(write_json(data) if not config.out else
              json.dumps({"out": config.out,
                          "generator_dims": data["provenance"]
                          ["generator_dims"]}, sort_keys=True))
    else:
        _emit(reports.model_summary(model))
        _emit("\nVerification:\n" + report.to_string(index=False))
    if not report["Passed"].all():
        failed = report.loc[~report["Passed"].astype(bool), "Check"]
        sys.stderr.write(f"Failed checks: {', '.join(failed)}\n")
        return EXIT_INCONSISTENT
    return EXIT_OK


def cmd_verify(config:RunConfig):
    """ Re-runs every check on a model file; exit 0 iff all pass """
    model = model_from_dict(read_json(config.file))
    report = verify_minimal_model(model)
    if config.format == "json":
        _emit(json.dumps([{"check": r["Check"], "passed": bool(r["Passed"]),
                           "violations": int(r["Violations"]),
                           "detail": r["Detail"]}
                          for _, r in report.iterrows()], sort_keys=True,
                         indent=2))
    else:
        _emit(report.to_string(index=False))
    failed = report.loc[~report["Passed"].astype(bool), "Check"].tolist()
    if failed:
        sys.stderr.write(f"Failed checks: {', '.join(failed)}\n")
        return EXIT_INCONSISTENT
    return EXIT_OK


def cmd_cohomology(config:RunConfig):
    """ Prints the cohomology of the target and its hypothesis checks; exit 2
        when a hypothesis required by the selected mode fails
    """
    target = _load_target(config)
    max_arity = min(config.max_arity or target.max_arity, target.max_arity)
    table = reports.cohomology_report(target, max_arity)
    hypotheses = reports.hypothesis_report(target)
    unitary = resolve_mode(target, None if config.mode == "auto"
                           else config.mode) == "unitary"
    required = hypotheses if unitary else hypotheses.iloc[:1]
    if config.format == "json":
        _emit(json.dumps({
            "cohomology": [{"arity": int(r["Arity"]),
                            "degree": int(r["Degree"]),
                            "dimension": int(r["Dimension"])}
                           for _, r in table.iterrows()],
            "hypotheses": [{"hypothesis": r["Hypothesis"],
                            "holds": bool(r["Holds"]),
                            "detail": r["Detail"]}
                           for _, r in hypotheses.iterrows()]},
            sort_keys=True, indent=2))
    else:
        _emit(f"Cohomology of {target.name}:\n" +
              table.to_string(index=False))
        _emit("\nHypotheses:\n" + hypotheses.to_string(index=False))
    if not required["Holds"].astype(bool).all():
        return EXIT_HYPOTHESIS
    return EXIT_OK


def cmd_builtins(config:RunConfig):
    """ Lists the builtin operads """
    if config.format == "json":
        _emit(json.dumps([{"name": k, "description": v}
                          for k, v in sorted(BUILTINS.items())], indent=2))
    else:
        for name, description in sorted(BUILTINS.items()):
            _emit(f"{name:<10} {description}")
    return EXIT_OK


_HANDLERS = {"model": cmd_model, "verify": cmd_verify,
             "cohomology": cmd_cohomology, "builtins": cmd_builtins}


def run(config:RunConfig):
    """ Runs one command, translating errors into exit codes """
    try:
        return _HANDLERS[config.command](config)
    except HypothesisError as e:
        sys.stderr.write(f"Hypothesis violated: {e}\n")
        return EXIT_HYPOTHESIS
    except ValidationError as e:
        sys.stderr.write(f"Invalid input: {e}\n")
        return EXIT_INPUT
    except InconsistencyError as e:
        location = getattr(e, "location", None)
        logger.error(f"Internal inconsistency at {location}: {e}")
        sys.stderr.write(f"Internal inconsistency: {e}\n")
        return EXIT_INCONSISTENT
    except ValueError as e:
        sys.stderr.write(f"Invalid input: {e}\n")
        return EXIT_INPUT


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code
    logging.basicConfig(level=logging.INFO if args.verbose
                        else logging.WARNING)
    logger.debug(f"OPMINIMAL_SEED={os.environ.get('OPMINIMAL_SEED')} is "
                 "ignored; all computations are deterministic")
    try:
        config = _config_from_args(args)
    except ValueError as e:
        sys.stderr.write(f"opminimal: error: {e}\n")
        return EXIT_USAGE
    return run(config)
