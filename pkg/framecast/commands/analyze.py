"""
Analyze Command
Frame bounds and the spectral frame-sequence test for a system document
"""

from framecast.commands.router import CommandRouter, arg
from framecast.schemas.common import ExitCodes
from framecast.schemas.documents import encode_vector
from framecast.schemas.reports import (
    FrameAnalysisReport,
    FrameBoundsModel,
    FrameSequenceModel,
    FrameStatus,
)
from framecast.services.frames import frame_bounds, frame_sequence_test, lemma_witness

router = CommandRouter(tags=["Frames"])


@router.command("analyze",
                summary="Frame bounds of a finite system",
                description="Optimal frame bounds, tightness and the frame-sequence spectrum of U*U. "
                            "Exits 3 when the system is only a frame sequence.",
                arguments=[arg("system", help="System document path, or - for stdin")])
def analyze(args, context):
    """Analyze a frame system"""
    tol = context.tolerances
    system = context.load_system(args.system)
    bounds = frame_bounds(system, tol)
    witness = None if bounds.spans_space else lemma_witness(system, tol)

    report = FrameAnalysisReport(
        status=FrameStatus.FRAME if bounds.spans_space else FrameStatus.FRAME_SEQUENCE_ONLY,
        length=len(system),
        index_origin=system.index_origin,
        bounds=FrameBoundsModel.from_result(bounds),
        frame_sequence=FrameSequenceModel.from_result(frame_sequence_test(system, tol)),
        orthogonal_witness=None if witness is None else encode_vector(witness),
    )
    exit_code = ExitCodes.OK if bounds.spans_space else ExitCodes.FRAME_SEQUENCE_ONLY
    return context.report(report, exit_code)
