"""
Framecast CLI
Batch front-end: JSON documents in, deterministic report documents out
"""

import argparse
import json
import logging
import os
import sys
from typing import List, Optional, TextIO

from pydantic import ValidationError

from framecast import __version__
from framecast.commands import (
    analyze,
    classify,
    conjecture,
    diagonalize,
    generate,
    golden,
    iterate,
    perturb,
    recover,
    represent,
)
from framecast.commands.router import CommandContext, CommandResult, CommandRouter
from framecast.config import load_tolerances
from framecast.errors import FramecastError, MalformedInputError
from framecast.log import configure_logging, get_logger
from framecast.schemas.common import ErrorCodes, ErrorDetail, ErrorResponse, ExitCodes
from framecast.schemas.documents import canonical_bytes

logger = get_logger(__name__)


class ArgumentParser(argparse.ArgumentParser):
    """Usage errors become MalformedInputError instead of exiting with status 2"""

    def error(self, message):
        raise MalformedInputError(f"{self.prog}: {message}")


class Application:
    def __init__(self, prog: str, description: str, version: str):
        self.prog = prog
        self.description = description
        self.version = version
        self.routers: List[CommandRouter] = []

    def include_router(self, router: CommandRouter) -> None:
        self.routers.append(router)

    def build_parser(self) -> ArgumentParser:
        parser = ArgumentParser(prog=self.prog, description=self.description)
        parser.add_argument("--version", action="version", version=f"%(prog)s {self.version}")
        _add_global_flags(parser, defaults=True)

        # same flags after the subcommand; SUPPRESS keeps values given before it
        shared = ArgumentParser(add_help=False)
        _add_global_flags(shared, defaults=False)

        subparsers = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
        for router in self.routers:
            for route in router.routes:
                sub = subparsers.add_parser(route.name, help=route.summary, description=route.description,
                                            parents=[shared])
                for argument in route.arguments:
                    sub.add_argument(*argument.flags, **argument.options)
                sub.set_defaults(handler=route.handler)
        return parser


def _add_global_flags(parser: argparse.ArgumentParser, defaults: bool) -> None:
    def default(value):
        return value if defaults else argparse.SUPPRESS

    parser.add_argument("-v", "--verbose", action="store_true", default=default(False),
                        help="Debug logging on stderr")
    parser.add_argument("--tol-identity", type=float, default=default(None), help="Identity tolerance")
    parser.add_argument("--rank-tol", type=float, default=default(None), help="Relative rank cutoff")
    parser.add_argument("--seed", type=int, default=default(None), help="Random seed (default 0)")
    parser.add_argument("--out", default=default("-"), help="Output path, - for stdout")


app = Application(
    prog="framecast",
    description="Frames of iterated systems {T^k phi}: bounds, operator recovery, Stein representation, "
                "spectral diagonalization and perturbation stability.",
    version=__version__,
)

# Include routers - Frames
app.include_router(analyze.router)

# Include routers - Iterated systems
app.include_router(iterate.router)
app.include_router(recover.router)
app.include_router(represent.router)
app.include_router(classify.router)
app.include_router(conjecture.router)

# Include routers - Spectral and perturbation
app.include_router(diagonalize.router)
app.include_router(perturb.router)

# Include routers - Examples and regression
app.include_router(generate.router)
app.include_router(golden.router)


# ==========================================
# OUTPUT
# ==========================================

def emit(result: CommandResult, out: str, stdout: TextIO) -> None:
    """One document goes to --out; several go to --out as a directory, or to stdout one per line"""
    documents = result.documents
    if out == "-":
        for document in documents.values():
            stdout.write(canonical_bytes(document).decode("utf-8") + "\n")
        stdout.flush()
        return
    if len(documents) == 1:
        targets = {out: next(iter(documents.values()))}
    else:
        os.makedirs(out, exist_ok=True)
        targets = {os.path.join(out, f"{name}.json"): document for name, document in documents.items()}
    for path, document in targets.items():
        with open(path, "wb") as handle:
            handle.write(canonical_bytes(document) + b"\n")


# ==========================================
# ERROR HANDLERS
# ==========================================

def _write_error(stderr: TextIO, exit_code: int, code: str, message: str, details=None) -> int:
    response = ErrorResponse(exit_code=exit_code, error=ErrorDetail(code=code, message=message, details=details))
    stderr.write(json.dumps(response.model_dump(), sort_keys=True, default=str) + "\n")
    stderr.flush()
    return exit_code


def framecast_error_handler(exc: FramecastError, stderr: TextIO) -> int:
    """Handle framecast errors"""
    logger.debug("command failed with %s: %s", exc.code, exc.message)
    return _write_error(stderr, int(exc.exit_code), exc.code, exc.message, exc.details)


def validation_error_handler(exc: ValidationError, stderr: TextIO) -> int:
    """Handle validation errors"""
    error_details = [
        {"field": " -> ".join(str(loc) for loc in error["loc"]), "message": error["msg"], "type": error["type"]}
        for error in exc.errors()
    ]
    return _write_error(stderr, ExitCodes.MALFORMED_INPUT, ErrorCodes.MALFORMED_INPUT,
                        "Input validation failed", {"errors": error_details})


def internal_error_handler(exc: Exception, stderr: TextIO) -> int:
    """Handle unexpected errors"""
    logger.debug("internal error", exc_info=exc)
    return _write_error(stderr, ExitCodes.MALFORMED_INPUT, ErrorCodes.INTERNAL_ERROR,
                        f"Internal error: {type(exc).__name__}: {exc}")


def run(argv: Optional[List[str]] = None, stdout: Optional[TextIO] = None, stderr: Optional[TextIO] = None,
        stdin: Optional[TextIO] = None) -> int:
    """Parse argv, dispatch to a command and return the process exit code"""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = app.build_parser().parse_args(argv)
        configure_logging(logging.DEBUG if args.verbose else logging.WARNING, stderr)
        tolerances = load_tolerances().override(tol_identity=args.tol_identity, rank_tol=args.rank_tol)
        seed = tolerances.default_seed if args.seed is None else args.seed
        context = CommandContext(args.command, tolerances, seed, stdin)
        result = args.handler(args, context)
        emit(result, args.out, stdout)
        return int(result.exit_code)
    except FramecastError as exc:
        return framecast_error_handler(exc, stderr)
    except ValidationError as exc:
        return validation_error_handler(exc, stderr)
    except json.JSONDecodeError as exc:
        return _write_error(stderr, ExitCodes.MALFORMED_INPUT, ErrorCodes.MALFORMED_INPUT, str(exc))
    except SystemExit as exc:
        # --help and --version
        return exc.code if isinstance(exc.code, int) else ExitCodes.OK
    except Exception as exc:
        return internal_error_handler(exc, stderr)


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
