"""
Generate Command
Operator and generator documents for the built-in examples
"""

from framecast.commands.router import CommandResult, CommandRouter, arg
from framecast.errors import MalformedInputError
from framecast.schemas.documents import operator_document, vector_document
from framecast.services import generators
from framecast.services.generators import GeneratorKind

router = CommandRouter(tags=["Examples"])


def _required(args, *names):
    missing = [f"--{name}" for name in names if getattr(args, name) is None]
    if missing:
        raise MalformedInputError(f"{args.kind} needs {', '.join(missing)}")


@router.command("generate",
                summary="Emit an example operator and generator",
                description="harmonic: --dim d --size N (N >= d); contraction: --dim --rho (0 <= rho < 1); "
                            "jordan: --lam [--lam-im] --size.",
                arguments=[
                    arg("kind", choices=[kind.value for kind in GeneratorKind]),
                    arg("--dim", type=int),
                    arg("--size", type=int),
                    arg("--rho", type=float),
                    arg("--lam", type=float, help="Real part of the eigenvalue"),
                    arg("--lam-im", type=float, default=0.0, help="Imaginary part of the eigenvalue"),
                ])
def generate(args, context):
    kind = GeneratorKind(args.kind)
    if kind is GeneratorKind.HARMONIC:
        _required(args, "dim", "size")
        example = generators.harmonic(args.dim, args.size)
    elif kind is GeneratorKind.CONTRACTION:
        _required(args, "dim", "rho")
        example = generators.contraction(args.dim, args.rho, context.seed)
    else:
        _required(args, "lam", "size")
        example = generators.jordan(complex(args.lam, args.lam_im), args.size)

    seeded = kind is GeneratorKind.CONTRACTION
    return CommandResult(documents={
        "operator": operator_document(example.T, context.meta(seeded)),
        "vector": vector_document(example.phi, context.meta(seeded)),
    })
