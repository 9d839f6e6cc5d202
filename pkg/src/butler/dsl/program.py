"""AST for action programs.

A program is a flat sequence of statements in a closed Python-shaped surface
language: handle bindings (`h = InteractionObject("Mug")`), method calls on
handles (`h.pickup()`), and bare corrective primitives (`move_back()`). There
is no control flow.
"""
from __future__ import annotations

from dataclasses import dataclass, field

# The full manipulation vocabulary. `place`, `pour` and `pickup_and_place`
# take a single handle argument; everything else is nullary.
INTERACTION_METHODS = frozenset({
    "pickup", "place", "slice", "toggle_on", "toggle_off", "go_to", "open",
    "close", "clean", "put_down", "pour", "fill_up", "pickup_and_place",
    "empty", "cook", "toast",
})

HANDLE_ARG_METHODS = frozenset({"place", "pour", "pickup_and_place"})

# Low-level recovery primitives; they act on the agent, not on a handle.
CORRECTIVE_METHODS = frozenset({
    "move_back", "move_closer", "move_alternate_viewpoint", "do_nothing",
})


@dataclass
class Instantiate:
    handle: str
    category: str
    landmark: str | None = None
    attributes: tuple[str, ...] = ()
    source_line: int = field(default=0, compare=False)


@dataclass
class Call:
    handle: str
    method: str
    arg: str | None = None
    source_line: int = field(default=0, compare=False)


@dataclass
class CorrectiveCall:
    method: str
    source_line: int = field(default=0, compare=False)


Statement = Instantiate | Call | CorrectiveCall


@dataclass
class ActionProgram:
    statements: list[Statement] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.statements)

    def __iter__(self):
        return iter(self.statements)

    def is_corrective_only(self) -> bool:
        return bool(self.statements) and all(
            isinstance(s, CorrectiveCall) for s in self.statements
        )


def render_statement(stmt: Statement) -> str:
    if isinstance(stmt, Instantiate):
        parts = [f'"{stmt.category}"']
        if stmt.landmark is not None:
            parts.append(f'landmark = "{stmt.landmark}"')
        if stmt.attributes:
            attrs = ", ".join(f'"{a}"' for a in stmt.attributes)
            parts.append(f"attributes = [{attrs}]")
        return f"{stmt.handle} = InteractionObject({', '.join(parts)})"
    if isinstance(stmt, Call):
        arg = stmt.arg if stmt.arg is not None else ""
        return f"{stmt.handle}.{stmt.method}({arg})"
    if isinstance(stmt, CorrectiveCall):
        return f"{stmt.method}()"
    raise TypeError(f"not a statement: {stmt!r}")


def render_program(program) -> str:
    """Canonical text form; one statement per line, no comments.

    Accepts an ActionProgram or any iterable of statements.
    """
    return "\n".join(render_statement(s) for s in program)
