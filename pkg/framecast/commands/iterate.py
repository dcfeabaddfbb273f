"""
Iterate Command
Finite orbits as system documents, infinite orbits through the Stein equation
"""

import numpy as np

from framecast.commands.router import CommandResult, CommandRouter, arg
from framecast.errors import DegenerateSystemError, MalformedInputError, SpectralRadiusError
from framecast.schemas.common import ExitCodes
from framecast.schemas.documents import system_document
from framecast.schemas.reports import InfiniteOrbitReport
from framecast.services import numerics
from framecast.services.dynamics import (
    bessel_test,
    iterate as iterate_orbit,
    orbit_frame_operator,
    truncation_tail_bound,
)

router = CommandRouter(tags=["Iterated systems"])

TAIL_HORIZONS = (10, 100, 400)


@router.command("iterate",
                summary="Generate {T^k phi}",
                description="--steps K emits the system (phi, T phi, ..., T^(K-1) phi); --infinite emits the "
                            "frame operator of the whole orbit, its bounds and truncation tail bounds.",
                arguments=[
                    arg("--op", required=True, help="Operator document T"),
                    arg("--vec", required=True, help="Vector document phi"),
                    arg("--steps", type=int, help="Number of orbit vectors"),
                    arg("--infinite", action="store_true", help="Analyze the infinite orbit"),
                ])
def iterate(args, context):
    """Iterate an operator on a generator"""
    if (args.steps is None) == (not args.infinite):
        raise MalformedInputError("give exactly one of --steps K and --infinite")
    tol = context.tolerances
    T = context.load_operator(args.op)
    phi = context.load_vector(args.vec)

    if args.steps is not None:
        system = iterate_orbit(T, phi, args.steps)
        return CommandResult(documents={"system": system_document(system, context.meta())})

    if not np.any(phi):
        raise DegenerateSystemError("the zero generator has an all-zero orbit")
    bessel = bessel_test(T, phi, tol)
    if not bessel.bessel:
        raise SpectralRadiusError(
            f"restricted spectral radius {bessel.restricted_radius:.6g} >= 1: the orbit is not a Bessel sequence",
            details={"restricted_radius": bessel.restricted_radius},
        )
    orbit = orbit_frame_operator(T, phi, tol)
    S_norm = numerics.operator_norm(orbit.S)
    tails = {K: truncation_tail_bound(orbit.restricted_radius, S_norm, K) for K in TAIL_HORIZONS}
    report = InfiniteOrbitReport.from_result(orbit, bessel.trace_bound, tails)
    exit_code = ExitCodes.OK if orbit.report.spans_space else ExitCodes.FRAME_SEQUENCE_ONLY
    return context.report(report, exit_code)
