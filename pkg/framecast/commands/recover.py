"""
Recover Command
Least-norm operator with T f_k = f_(k+1) for a system document
"""

from framecast.commands.router import CommandRouter, arg
from framecast.schemas.reports import RecoveryReport
from framecast.services.dynamics import linear_independence_test, recover_operator

router = CommandRouter(tags=["Iterated systems"])


@router.command("recover",
                summary="Recover the operator behind an orbit",
                description="Reports T_hat, the relative residual, consistency and kernel shift invariance. "
                            "Inconsistency is a report field, not a failure.",
                arguments=[arg("system", help="System document path, or - for stdin")])
def recover(args, context):
    tol = context.tolerances
    system = context.load_system(args.system)
    result = recover_operator(system, tol)
    return context.report(RecoveryReport.from_result(result, linear_independence_test(system, tol)))
