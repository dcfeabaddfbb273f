"""
Perturb Command
Perturbed frame bounds for a pair of systems and, with --l1/--l2, the sampled
operator-representation check
"""

from framecast.commands.router import CommandRouter, arg
from framecast.errors import AdmissibilityError, MalformedInputError
from framecast.schemas.reports import PerturbationModel, PerturbReport
from framecast.services.perturbation import prop28_check, sandwich_verify

router = CommandRouter(tags=["Perturbation"])


@router.command("perturb",
                summary="Bounds of G predicted from the frame F",
                description="Exits 7 when the fitted mu is not admissible and no --l1/--l2 check was asked for.",
                arguments=[
                    arg("reference", help="System document F"),
                    arg("perturbed", help="System document G"),
                    arg("--l1", type=float, help="lambda1 in (0, 1)"),
                    arg("--l2", type=float, help="lambda2 in (0, 1)"),
                    arg("--trials", type=int, help="Sampled (f, c) pairs"),
                ])
def perturb(args, context):
    if (args.l1 is None) != (args.l2 is None):
        raise MalformedInputError("--l1 and --l2 must be given together")
    tol = context.tolerances
    F = context.load_system(args.reference, "reference")
    G = context.load_system(args.perturbed, "perturbed")

    seeded = args.l1 is not None
    report = PerturbReport()
    try:
        report.sandwich = PerturbationModel.from_result(sandwich_verify(F, G, tol))
    except AdmissibilityError as e:
        # the lambda check fixes mu = 0 and still applies
        if not seeded:
            raise
        report.sandwich_rejected = e.message
    if seeded:
        result = prop28_check(F, G, args.l1, args.l2, trials=args.trials, seed=context.seed, tol=tol)
        report.operator_representation = PerturbationModel.from_result(result)
    return context.report(report, seeded=seeded)
