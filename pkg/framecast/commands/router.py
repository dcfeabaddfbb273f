"""
Command Router
Declarative registration of CLI commands plus the shared request context
(document loading with digests, report metadata, tolerances, seed)
"""

import json
import sys
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, TextIO

import numpy as np
from pydantic import BaseModel, ValidationError

from framecast.config import Tolerances
from framecast.errors import MalformedInputError
from framecast.schemas.documents import (
    Document,
    DocumentKind,
    Meta,
    digest,
    payload_to_operator,
    payload_to_system,
    payload_to_vector,
    report_document,
)


@dataclass(frozen=True)
class Argument:
    flags: Sequence[str]
    options: Dict = field(default_factory=dict)


def arg(*flags: str, **options) -> Argument:
    return Argument(flags=flags, options=options)


@dataclass
class CommandResult:
    """Named output documents and the process exit code"""
    documents: Dict[str, Document]
    exit_code: int = 0

    @classmethod
    def single(cls, document: Document, exit_code: int = 0) -> "CommandResult":
        return cls(documents={"report": document}, exit_code=exit_code)


@dataclass(frozen=True)
class Route:
    name: str
    handler: Callable
    summary: str
    description: Optional[str]
    arguments: Sequence[Argument]
    tags: Sequence[str]


class CommandRouter:
    """Collects commands; the application includes routers into its argument parser"""

    def __init__(self, tags: Optional[List[str]] = None):
        self.tags = tags or []
        self.routes: List[Route] = []

    def command(self, name: str, summary: str, description: Optional[str] = None,
                arguments: Sequence[Argument] = ()):
        def decorator(handler: Callable) -> Callable:
            self.routes.append(Route(
                name=name,
                handler=handler,
                summary=summary,
                description=description,
                arguments=arguments,
                tags=self.tags,
            ))
            return handler
        return decorator


# ==========================================
# REQUEST CONTEXT
# ==========================================

def read_text(path: str, stdin: TextIO) -> str:
    if path == "-":
        return stdin.read()
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return handle.read()
    except OSError as e:
        raise MalformedInputError(f"cannot read {path}: {e.strerror or e}")


def parse_document(text: str, source: str) -> Document:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise MalformedInputError(f"{source}: invalid JSON ({e.msg} at line {e.lineno})")
    try:
        return Document.model_validate(data)
    except ValidationError as e:
        raise MalformedInputError(f"{source}: not a framecast document", details={"errors": _errors(e)})


def _errors(e: ValidationError) -> List[Dict]:
    return [
        {"field": " -> ".join(str(loc) for loc in error["loc"]), "message": error["msg"]}
        for error in e.errors()
    ]


class CommandContext:
    """Per-invocation state handed to every command handler"""

    def __init__(self, command: str, tolerances: Tolerances, seed: int, stdin: Optional[TextIO] = None):
        self.command = command
        self.tolerances = tolerances
        self.seed = seed
        self.stdin = stdin or sys.stdin
        self.inputs: Dict[str, str] = {}

    def load(self, path: str, kind: DocumentKind, name: str) -> Document:
        document = parse_document(read_text(path, self.stdin), path)
        if document.kind != kind:
            raise MalformedInputError(f"{path}: expected a {kind.value} document, got {document.kind.value}")
        self.inputs[name] = digest(document)
        return document

    def _decode(self, document: Document, decoder, path: str):
        try:
            return decoder(document)
        except ValidationError as e:
            raise MalformedInputError(f"{path}: malformed {document.kind.value} payload",
                                      details={"errors": _errors(e)})

    def load_operator(self, path: str, name: str = "operator") -> np.ndarray:
        return self._decode(self.load(path, DocumentKind.OPERATOR, name), payload_to_operator, path)

    def load_vector(self, path: str, name: str = "vector") -> np.ndarray:
        return self._decode(self.load(path, DocumentKind.VECTOR, name), payload_to_vector, path)

    def load_system(self, path: str, name: str = "system"):
        return self._decode(self.load(path, DocumentKind.SYSTEM, name), payload_to_system, path)

    def meta(self, seeded: bool = False) -> Meta:
        return Meta(
            seed=self.seed if seeded else None,
            tolerances=self.tolerances.as_meta(),
            command=self.command,
            inputs=dict(self.inputs),
        )

    def report(self, model: BaseModel, exit_code: int = 0, seeded: bool = False) -> CommandResult:
        return CommandResult.single(report_document(model, self.meta(seeded)), exit_code)
