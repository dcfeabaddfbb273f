"""
Golden Command
Fixed suite of command runs whose output digests are recorded once and
checked on every later run
"""

import hashlib
import io
import json
import os
import tempfile
from typing import Callable, Dict, List, Tuple

import numpy as np

from framecast import __version__
from framecast.commands.router import CommandRouter, arg, read_text
from framecast.errors import GoldenMismatchError, MalformedInputError
from framecast.log import get_logger
from framecast.schemas.documents import (
    Document,
    canonical_bytes,
    operator_document,
    system_document,
    vector_document,
)
from framecast.schemas.reports import GoldenManifest, GoldenReport
from framecast.services.frames import FrameSystem

router = CommandRouter(tags=["Golden"])
logger = get_logger(__name__)

MANIFEST = "manifest.json"
PINNED = ["--tol-identity", "1e-9", "--rank-tol", "1e-10"]


def _inputs() -> Dict[str, Document]:
    e1, e2 = np.array([1.0, 0.0]), np.array([0.0, 1.0])
    contraction = np.diag([0.5, 1.0 / 3.0])
    orbit = FrameSystem.from_vectors([np.linalg.matrix_power(contraction, k) @ np.ones(2) for k in range(6)])
    return {
        "onb": system_document(FrameSystem.from_vectors([e1, e2])),
        "redundant": system_document(FrameSystem.from_vectors([e1, e1, e2])),
        "onb_scaled": system_document(FrameSystem.from_vectors([1.1 * e1, e2])),
        "swap_orbit": system_document(FrameSystem.from_vectors([e1, e2, e1])),
        "orbit": system_document(orbit),
        "orbit_scaled": system_document(FrameSystem(dim=2, vectors=1.01 * orbit.vectors)),
        "contraction": operator_document(contraction),
        "ones": vector_document(np.ones(2)),
        "hermitian": operator_document(np.diag([2.0, 3.0])),
        "jordan": operator_document(np.array([[0.5, 1.0], [0.0, 0.5]])),
    }


def _suite(path: Callable[[str], str]) -> List[Tuple[str, List[str]]]:
    return [
        ("analyze_onb", ["analyze", path("onb")]),
        ("analyze_redundant", ["analyze", path("redundant")]),
        ("iterate_steps", ["iterate", "--op", path("contraction"), "--vec", path("ones"), "--steps", "3"]),
        ("iterate_infinite", ["iterate", "--op", path("contraction"), "--vec", path("ones"), "--infinite"]),
        ("recover_swap", ["recover", path("swap_orbit")]),
        ("represent_contraction", ["represent", "--op", path("contraction"), "--vec", path("ones")]),
        ("diagonalize_hermitian", ["diagonalize", "--op", path("hermitian"), "--vec", path("ones"),
                                   "--poly", "1,1"]),
        ("perturb_onb", ["perturb", path("onb"), path("onb_scaled")]),
        ("perturb_orbit", ["--seed", "3", "perturb", path("orbit"), path("orbit_scaled"),
                           "--l1", "0.5", "--l2", "0.5", "--trials", "200"]),
        ("conjecture_contraction", ["conjecture", "--op", path("contraction"), "--trials", "10"]),
        ("conjecture_jordan", ["conjecture", "--op", path("jordan"), "--trials", "10"]),
        ("classify_contraction", ["classify", "--op", path("contraction"), "--vec", path("ones")]),
        ("generate_harmonic", ["generate", "harmonic", "--dim", "2", "--size", "4"]),
        ("generate_contraction", ["--seed", "7", "generate", "contraction", "--dim", "3", "--rho", "0.5"]),
        ("generate_jordan", ["generate", "jordan", "--lam", "0.5", "--size", "2"]),
    ]


def run_suite() -> Dict[str, str]:
    """Run every golden case in-process; name -> captured stdout"""
    from framecast.main import run

    outputs = {}
    with tempfile.TemporaryDirectory(prefix="framecast-golden-") as workdir:
        def path(name: str) -> str:
            return os.path.join(workdir, f"{name}.json")

        for name, document in _inputs().items():
            with open(path(name), "wb") as handle:
                handle.write(canonical(document))

        for name, argv in _suite(path):
            stdout, stderr = io.StringIO(), io.StringIO()
            code = run(PINNED + argv, stdout=stdout, stderr=stderr)
            if code != 0:
                raise GoldenMismatchError(f"golden case {name} exited with {code}",
                                          details={"stderr": stderr.getvalue()})
            outputs[name] = stdout.getvalue()
    return outputs


def canonical(document: Document) -> bytes:
    return canonical_bytes(document) + b"\n"


def _sha256(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


@router.command("golden",
                summary="Record or check the golden report suite",
                description="--record DIR writes every output and manifest.json; --check DIR recomputes the "
                            "suite and exits 8 on any digest mismatch.",
                arguments=[
                    arg("--record", metavar="DIR", help="Directory to write the suite into"),
                    arg("--check", metavar="DIR", help="Directory holding a recorded manifest"),
                ])
def golden(args, context):
    if (args.record is None) == (args.check is None):
        raise MalformedInputError("give exactly one of --record DIR and --check DIR")
    outputs = run_suite()
    digests = {name: _sha256(text) for name, text in outputs.items()}

    if args.record is not None:
        os.makedirs(args.record, exist_ok=True)
        for name, text in outputs.items():
            with open(os.path.join(args.record, f"{name}.json"), "w", encoding="utf-8") as handle:
                handle.write(text)
        manifest = GoldenManifest(tool_version=__version__, documents=digests)
        with open(os.path.join(args.record, MANIFEST), "w", encoding="utf-8") as handle:
            json.dump(manifest.model_dump(), handle, sort_keys=True, indent=2)
        logger.debug("recorded %d golden documents in %s", len(digests), args.record)
        report = GoldenReport(mode="record", directory=args.record, documents=digests)
        return context.report(report)

    try:
        stored = GoldenManifest(**json.loads(read_text(os.path.join(args.check, MANIFEST), context.stdin)))
    except (ValueError, TypeError) as e:
        raise MalformedInputError(f"{args.check}: unreadable golden manifest ({e})")
    matched = sorted(name for name in digests if stored.documents.get(name) == digests[name])
    mismatched = sorted(name for name in digests if name in stored.documents and name not in matched)
    missing = sorted(set(stored.documents) - set(digests))
    unrecorded = sorted(set(digests) - set(stored.documents))
    if unrecorded:
        logger.warning("%d golden cases have no stored digest: %s", len(unrecorded), ", ".join(unrecorded))
    report = GoldenReport(mode="check", directory=args.check, matched=matched, mismatched=mismatched,
                          missing=missing, unrecorded=unrecorded, documents=digests)
    if mismatched or missing:
        raise GoldenMismatchError(
            f"{len(mismatched)} mismatched and {len(missing)} missing golden documents",
            details={"mismatched": mismatched, "missing": missing},
        )
    return context.report(report)
