"""
Diagonalize Command
Multiplication-operator representation of a Hermitian operator with respect
to the spectral measure of a cyclic vector
"""

from typing import List

from framecast.commands.router import CommandRouter, arg
from framecast.errors import MalformedInputError
from framecast.schemas.reports import SpectralRepReport
from framecast.services.dynamics import multiplication_rep, spectral_transform

router = CommandRouter(tags=["Spectral"])


def parse_coefficients(raw: str) -> List[float]:
    try:
        return [float(item) for item in raw.split(",") if item.strip()]
    except ValueError:
        raise MalformedInputError(f"--poly expects comma-separated numbers, got {raw!r}")


@router.command("diagonalize",
                summary="Unitary V with V T V* = multiplication by x",
                description="Exits 6 when phi is not cyclic for T.",
                arguments=[
                    arg("--op", required=True, help="Hermitian operator document T"),
                    arg("--vec", required=True, help="Vector document phi"),
                    arg("--poly", help="Coefficients c0,c1,... of p; reports V p(T) phi"),
                ])
def diagonalize(args, context):
    tol = context.tolerances
    T = context.load_operator(args.op)
    phi = context.load_vector(args.vec)
    rep = multiplication_rep(T, phi, tol)
    transformed = None
    if args.poly:
        transformed = spectral_transform(rep, T, phi, parse_coefficients(args.poly))
    return context.report(SpectralRepReport.from_result(rep, transformed))
