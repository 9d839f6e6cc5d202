"""Line-oriented parser for action-program text.

Accepts raw completion output: prose before the first statement is skipped,
`#` comments are stripped, and prose after the statement block terminates
parsing at the last valid line. A line that clearly attempts a statement but
is malformed (unbalanced parentheses, unknown method, bad arguments) raises
ParseError with its 1-based line number.
"""
from __future__ import annotations

import re

from .program import (
    ActionProgram,
    Call,
    CorrectiveCall,
    CORRECTIVE_METHODS,
    HANDLE_ARG_METHODS,
    Instantiate,
    INTERACTION_METHODS,
    Statement,
)


class ParseError(Exception):
    def __init__(self, line: int, reason: str):
        self.line = line
        self.reason = reason
        super().__init__(f"line {line}: {reason}")


_IDENT = r"[A-Za-z_]\w*"
_INSTANTIATE_RE = re.compile(
    rf"^\s*({_IDENT})\s*=\s*InteractionObject\s*\((.*)\)\s*$"
)
_AGENT_RE = re.compile(rf"^\s*({_IDENT})\s*=\s*AgentCorrective\s*\(\s*\)\s*$")
_CALL_RE = re.compile(rf"^\s*({_IDENT})\s*\.\s*({_IDENT})\s*\((.*)\)\s*$")
_BARE_RE = re.compile(rf"^\s*({_IDENT})\s*\(\s*\)\s*$")
_CALL_PREFIX_RE = re.compile(rf"^\s*{_IDENT}\s*\.\s*{_IDENT}\s*\(")
_STRING_RE = re.compile(r'^"([^"]*)"$|^\'([^\']*)\'$')


def _strip_comment(line: str) -> str:
    """Drop a trailing # comment, ignoring # inside string literals."""
    quote = None
    for i, ch in enumerate(line):
        if quote:
            if ch == quote:
                quote = None
        elif ch in "\"'":
            quote = ch
        elif ch == "#":
            return line[:i]
    return line


def _split_args(text: str) -> list[str]:
    """Split on top-level commas, respecting quotes and brackets."""
    parts: list[str] = []
    depth = 0
    quote = None
    cur: list[str] = []
    for ch in text:
        if quote:
            cur.append(ch)
            if ch == quote:
                quote = None
        elif ch in "\"'":
            quote = ch
            cur.append(ch)
        elif ch in "([":
            depth += 1
            cur.append(ch)
        elif ch in ")]":
            depth -= 1
            cur.append(ch)
        elif ch == "," and depth == 0:
            parts.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    tail = "".join(cur).strip()
    if tail:
        parts.append(tail)
    return parts


def _as_string(token: str) -> str | None:
    m = _STRING_RE.match(token.strip())
    if not m:
        return None
    return m.group(1) if m.group(1) is not None else m.group(2)


def looks_like_statement(line: str) -> bool:
    """Heuristic for 'this line is attempting to be a program statement'."""
    if "InteractionObject" in line or "AgentCorrective" in line:
        return True
    if _CALL_PREFIX_RE.match(line):
        return True
    m = _BARE_RE.match(line)
    return bool(m and m.group(1) in CORRECTIVE_METHODS)


def _parse_instantiate(lineno: int, line: str) -> Instantiate:
    if line.count("(") != line.count(")") or line.count("[") != line.count("]"):
        raise ParseError(lineno, "unbalanced parentheses")
    m = _INSTANTIATE_RE.match(line)
    if not m:
        raise ParseError(lineno, "malformed InteractionObject statement")
    handle, argtext = m.group(1), m.group(2)
    args = _split_args(argtext)
    if not args:
        raise ParseError(lineno, "InteractionObject requires a category name")
    category = _as_string(args[0])
    if category is None:
        raise ParseError(lineno, "category must be a string literal")
    landmark: str | None = None
    attributes: tuple[str, ...] = ()
    for extra in args[1:]:
        if "=" in extra:
            key, _, value = extra.partition("=")
            key = key.strip()
            value = value.strip()
            if key == "landmark":
                landmark = _as_string(value)
                if landmark is None:
                    raise ParseError(lineno, "landmark must be a string literal")
            elif key == "attributes":
                if not (value.startswith("[") and value.endswith("]")):
                    raise ParseError(lineno, "attributes must be a list")
                items = _split_args(value[1:-1])
                attrs = []
                for item in items:
                    s = _as_string(item)
                    if s is None:
                        raise ParseError(
                            lineno, "attributes must be string literals"
                        )
                    attrs.append(s)
                attributes = tuple(attrs)
            else:
                raise ParseError(lineno, f"unknown keyword argument '{key}'")
        else:
            s = _as_string(extra)
            if s is None or landmark is not None:
                raise ParseError(
                    lineno, f"unexpected InteractionObject argument {extra!r}"
                )
            landmark = s
    return Instantiate(
        handle=handle, category=category, landmark=landmark,
        attributes=attributes, source_line=lineno,
    )


def _parse_call(lineno: int, line: str, bound: set[str], strict: bool) -> Statement:
    if line.count("(") != line.count(")"):
        raise ParseError(lineno, "unbalanced parentheses")
    m = _CALL_RE.match(line)
    if not m:
        raise ParseError(lineno, "malformed call statement")
    handle, method, argtext = m.group(1), m.group(2), m.group(3).strip()
    if method in CORRECTIVE_METHODS:
        if argtext:
            raise ParseError(lineno, f"{method}() takes no arguments")
        return CorrectiveCall(method=method, source_line=lineno)
    if method not in INTERACTION_METHODS:
        raise ParseError(lineno, f"unknown method '{method}'")
    if strict and handle not in bound:
        raise ParseError(lineno, f"call on unbound handle '{handle}'")
    arg: str | None = None
    if argtext:
        if method not in HANDLE_ARG_METHODS:
            raise ParseError(lineno, f"{method}() takes no arguments")
        if not re.fullmatch(_IDENT, argtext):
            raise ParseError(lineno, f"argument must be a handle: {argtext!r}")
        if strict and argtext not in bound:
            raise ParseError(lineno, f"argument handle '{argtext}' is unbound")
        arg = argtext
    elif method in HANDLE_ARG_METHODS:
        raise ParseError(lineno, f"{method}() requires a handle argument")
    return Call(handle=handle, method=method, arg=arg, source_line=lineno)


def parse_program(text: str, strict: bool = True) -> ActionProgram:
    """Parse completion text into an ActionProgram.

    strict=True rejects calls on handles with no prior InteractionObject
    binding; strict=False defers that to the validator.
    """
    statements: list[Statement] = []
    bound: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).rstrip()
        if not line.strip():
            continue
        if _AGENT_RE.match(line):
            # Binding an AgentCorrective() handle is a recognized no-op; the
            # corrective calls themselves parse with or without it.
            continue
        if "InteractionObject" in line:
            stmt = _parse_instantiate(lineno, line)
            statements.append(stmt)
            bound.add(stmt.handle)
            continue
        bare = _BARE_RE.match(line)
        if bare and bare.group(1) in CORRECTIVE_METHODS:
            statements.append(
                CorrectiveCall(method=bare.group(1), source_line=lineno)
            )
            continue
        if _CALL_PREFIX_RE.match(line) or "AgentCorrective" in line:
            statements.append(_parse_call(lineno, line, bound, strict))
            continue
        # Not a statement: prose. Skip it before the first statement,
        # terminate the block after.
        if statements:
            break
        continue
    return ActionProgram(statements=statements)
