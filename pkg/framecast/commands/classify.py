"""
Classify Command
Membership of a generator and of an operator in the frame-generating classes
"""

from framecast.commands.router import CommandRouter, arg
from framecast.errors import DegenerateSystemError, SingularOperatorError
from framecast.log import get_logger
from framecast.schemas.reports import ClassifyReport, MembershipModel, ZTightModel
from framecast.services.dynamics import (
    frame_generator_test,
    frame_operator_class_test,
    z_tight_unitary_check,
)

router = CommandRouter(tags=["Iterated systems"])
logger = get_logger(__name__)


@router.command("classify",
                summary="Is phi a frame generator for T, and does T admit one",
                arguments=[
                    arg("--op", required=True, help="Operator document T"),
                    arg("--vec", required=True, help="Vector document phi"),
                    arg("--z-trunc", type=int, default=8,
                        help="Truncation K of the Z-indexed orbit when T is invertible"),
                ])
def classify(args, context):
    tol = context.tolerances
    T = context.load_operator(args.op)
    phi = context.load_vector(args.vec)
    generator = frame_generator_test(T, phi, tol)
    operator = frame_operator_class_test(T, tol)
    try:
        z_report = ZTightModel.from_result(z_tight_unitary_check(T, phi, args.z_trunc, tol))
    except (SingularOperatorError, DegenerateSystemError):
        logger.debug("no Z-indexed orbit: T is singular or phi is zero")
        z_report = None
    report = ClassifyReport(
        generator=MembershipModel.from_result(generator),
        operator=MembershipModel.from_result(operator),
        z_orbit=z_report,
    )
    return context.report(report)
