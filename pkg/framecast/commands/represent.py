"""
Represent Command
Stein characterization of {T^k f1} together with the Stein identity steps and
range diagnostics of T
"""

from framecast.commands.router import CommandRouter, arg
from framecast.schemas.reports import RepresentationCheckReport
from framecast.services.dynamics import range_diagnostics, representation_check, stein_identity_check

router = CommandRouter(tags=["Iterated systems"])


@router.command("represent",
                summary="Is {T^k f1} a frame, by the Stein equation",
                arguments=[
                    arg("--op", required=True, help="Operator document T"),
                    arg("--vec", required=True, help="Vector document f1"),
                    arg("--n-max", type=int, default=10, help="Last step of the Stein identity check"),
                ])
def represent(args, context):
    tol = context.tolerances
    T = context.load_operator(args.op)
    f1 = context.load_vector(args.vec)
    result = representation_check(T, f1, tol)
    steps = stein_identity_check(T, f1, args.n_max, tol) if result.condition_i else []
    report = RepresentationCheckReport.from_result(result, steps, range_diagnostics(T, tol=tol))
    return context.report(report)
