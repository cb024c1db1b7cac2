"""Minimal SMT-LIB v2 text utilities: literals, s-expressions, evaluation."""
from __future__ import annotations

import re
from decimal import Decimal
from fractions import Fraction
from typing import Union

SExpr = Union[str, list]


def real_literal(x) -> str:
    """Exact decimal literal for a finite float (negatives as ``(- d)``)."""
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return real_literal(int(x.numerator))
        num = real_literal(abs(x.numerator))
        body = f"(/ {num} {real_literal(x.denominator)})"
        return f"(- {body})" if x < 0 else body
    d = Decimal(repr(float(x))) if not isinstance(x, int) else Decimal(x)
    if not d.is_finite():
        raise ValueError(f"non-finite literal {x!r}")
    text = format(abs(d), "f")
    if "." not in text:
        text += ".0"
    return f"(- {text})" if d < 0 else text


def int_literal(k: int) -> str:
    return f"(- {-k})" if k < 0 else str(k)


_TOKEN = re.compile(r'\s+|;[^\n]*|(\()|(\))|("(?:[^"]|"")*")|(\|[^|]*\|)|([^\s()";|]+)')


def parse_sexprs(text: str) -> list[SExpr]:
    """Parse a sequence of s-expressions; atoms stay strings."""
    stack: list[list] = [[]]
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"cannot tokenize s-expression at {pos}: {text[pos:pos + 20]!r}")
        pos = m.end()
        if m.group(1):
            stack.append([])
        elif m.group(2):
            if len(stack) == 1:
                raise ValueError("unbalanced ')'")
            done = stack.pop()
            stack[-1].append(done)
        else:
            atom = m.group(3) or m.group(4) or m.group(5)
            if atom is not None:
                stack[-1].append(atom)
    if len(stack) != 1:
        raise ValueError("unbalanced '('")
    return stack[0]


def to_text(e: SExpr) -> str:
    if isinstance(e, str):
        return e
    return "(" + " ".join(to_text(x) for x in e) + ")"


def parse_value(e: SExpr):
    """Ground value term from a solver model: bool, int or Fraction."""
    if isinstance(e, str):
        if e == "true":
            return True
        if e == "false":
            return False
        if re.fullmatch(r"\d+", e):
            return int(e)
        if re.fullmatch(r"\d+\.\d*|\.\d+", e):
            return Fraction(e)
        raise ValueError(f"not a value: {e!r}")
    head, *args = e
    vals = [parse_value(a) for a in args]
    if head == "-" and len(vals) == 1:
        return -vals[0]
    if head == "-":
        return vals[0] - sum(vals[1:])
    if head == "/" and len(vals) == 2:
        return Fraction(vals[0]) / Fraction(vals[1])
    if head == "+":
        return sum(vals)
    if head == "*":
        out = 1
        for v in vals:
            out *= v
        return out
    if head == "to_real":
        return Fraction(vals[0])
    raise ValueError(f"cannot interpret value {to_text(e)!r}")


def parse_model_values(text: str) -> dict[str, object]:
    """Read the reply of ``(get-value (...))`` into ``{name: value}``."""
    out: dict[str, object] = {}
    for e in parse_sexprs(text):
        if not isinstance(e, list):
            continue
        for pair in e:
            if isinstance(pair, list) and len(pair) == 2 and isinstance(pair[0], str):
                out[pair[0]] = parse_value(pair[1])
    return out


def evaluate(e: SExpr, env: dict):
    """Evaluate a quantifier-free LIA/LRA/Bool term; numbers become Fractions."""
    if isinstance(e, str):
        if e in env:
            v = env[e]
            return Fraction(v) if isinstance(v, float) else v
        return parse_value(e)
    head, *args = e
    if head == "ite":
        return evaluate(args[1], env) if evaluate(args[0], env) else evaluate(args[2], env)
    if head == "and":
        return all(evaluate(a, env) for a in args)
    if head == "or":
        return any(evaluate(a, env) for a in args)
    if head == "=>":
        return (not evaluate(args[0], env)) or evaluate(args[1], env)
    vals = [evaluate(a, env) for a in args]
    if head == "not":
        return not vals[0]
    if head == "=":
        return all(v == vals[0] for v in vals[1:])
    if head == "distinct":
        return len(set(vals)) == len(vals)
    if head in ("<", "<=", ">", ">="):
        op = {"<": lambda a, b: a < b, "<=": lambda a, b: a <= b, ">": lambda a, b: a > b, ">=": lambda a, b: a >= b}[head]
        return all(op(a, b) for a, b in zip(vals, vals[1:]))
    if head == "+":
        return sum(vals)
    if head == "-":
        return -vals[0] if len(vals) == 1 else vals[0] - sum(vals[1:])
    if head == "*":
        out = 1
        for v in vals:
            out *= v
        return out
    if head == "/":
        return Fraction(vals[0]) / Fraction(vals[1])
    if head in ("max", "min"):
        return (max if head == "max" else min)(vals)
    raise ValueError(f"unsupported operator {head!r}")
