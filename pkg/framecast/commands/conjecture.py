"""
Conjecture Command
Invariant block decomposition of T with a certified frame generator per block
"""

from framecast.commands.router import CommandRouter, arg
from framecast.schemas.reports import ConjectureReport
from framecast.services.dynamics import conjecture_explore

router = CommandRouter(tags=["Iterated systems"])


@router.command("conjecture",
                summary="Search a block decomposition into frame-generating pieces",
                arguments=[
                    arg("--op", required=True, help="Operator document T"),
                    arg("--trials", type=int, default=100, help="Random candidates per block"),
                ])
def conjecture(args, context):
    certificate = conjecture_explore(context.load_operator(args.op), args.trials, context.seed,
                                     context.tolerances)
    return context.report(ConjectureReport.from_result(certificate, args.trials, context.seed), seeded=True)
