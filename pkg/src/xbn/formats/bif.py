"""Reader and writer for a BIF subset (discrete variables only).

Grammar, informally: a ``network NAME { }`` header followed by
``variable`` blocks (``type discrete [ N ] { state, ... };``) and
``probability`` blocks holding either a ``table`` line (entries in
parent-combination order, last parent fastest, child state fastest within
a row) or one parenthesized row per parent-state combination. ``//``
starts a comment. ``property`` lines are tolerated anywhere inside a
block: ``property alias X;`` inside a variable block sets a display
alias, anything else is ignored with a warning.

Every syntactic problem is reported as a :class:`ParseDiagnostic` with a
1-based line and column. Bad row sums are also caught here so they carry
a position and the variable name; remaining semantic problems surface
from network validation.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field

from ..errors import BifParseError, XbnError
from ..model import ROW_SUM_TOLERANCE, BayesianNetwork, Cpt, Variable, build_network

_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_NUM_RE = re.compile(r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")
_PUNCT = set("{}()[]|,;")


@dataclass(frozen=True)
class ParseDiagnostic:
    line: int
    column: int
    message: str
    severity: str = "error"  # error | warning


@dataclass(frozen=True)
class _Token:
    kind: str  # ident | number | punct | eof
    text: str
    line: int
    column: int


@dataclass
class _RawCpt:
    """Probability block before resolution against variable declarations."""

    child: str
    parents: tuple[str, ...]
    flat: list[float] | None = None           # from a `table` line
    flat_token: _Token | None = None
    cond: dict[tuple[str, ...], list[float]] = field(default_factory=dict)
    cond_tokens: dict[tuple[str, ...], _Token] = field(default_factory=dict)


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if text.startswith("//", i):
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch in _PUNCT:
            tokens.append(_Token("punct", ch, line, col))
            i += 1
            col += 1
            continue
        m = _IDENT_RE.match(text, i)
        if m:
            tokens.append(_Token("ident", m.group(), line, col))
            col += len(m.group())
            i = m.end()
            continue
        m = _NUM_RE.match(text, i)
        if m:
            tokens.append(_Token("number", m.group(), line, col))
            col += len(m.group())
            i = m.end()
            continue
        raise BifParseError(
            [ParseDiagnostic(line, col, f"unexpected character {ch!r}")]
        )
    tokens.append(_Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token], warnings: list[ParseDiagnostic]):
        self.tokens = tokens
        self.pos = 0
        self.warnings = warnings

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, tok: _Token, message: str):
        raise BifParseError([ParseDiagnostic(tok.line, tok.column, message)])

    def at_punct(self, ch: str) -> bool:
        tok = self.peek()
        return tok.kind == "punct" and tok.text == ch

    def at_keyword(self, word: str) -> bool:
        tok = self.peek()
        return tok.kind == "ident" and tok.text == word

    def expect_punct(self, ch: str) -> _Token:
        tok = self.next()
        if tok.kind != "punct" or tok.text != ch:
            self.fail(tok, f"expected '{ch}', found {tok.text!r}")
        return tok

    def expect_ident(self, keyword: str | None = None) -> _Token:
        tok = self.next()
        if tok.kind != "ident":
            self.fail(tok, f"expected identifier, found {tok.text!r}")
        if keyword is not None and tok.text != keyword:
            self.fail(tok, f"expected '{keyword}', found {tok.text!r}")
        return tok

    def expect_number(self) -> tuple[float, _Token]:
        tok = self.next()
        if tok.kind != "number":
            self.fail(tok, f"expected a number, found {tok.text!r}")
        return float(tok.text), tok

    def number_list(self) -> list[float]:
        nums = [self.expect_number()[0]]
        while self.at_punct(","):
            self.next()
            nums.append(self.expect_number()[0])
        return nums

    def ident_list(self) -> list[str]:
        names = [self.expect_ident().text]
        while self.at_punct(","):
            self.next()
            names.append(self.expect_ident().text)
        return names

    def property_line(self) -> list[_Token]:
        """Consume tokens through ';' after a 'property' keyword."""
        start = self.peek()
        payload: list[_Token] = []
        while True:
            tok = self.next()
            if tok.kind == "eof":
                self.fail(start, "unterminated property line")
            if tok.kind == "punct" and tok.text == ";":
                return payload
            payload.append(tok)

    def warn(self, tok: _Token, message: str):
        self.warnings.append(
            ParseDiagnostic(tok.line, tok.column, message, "warning")
        )


def parse_bif(
    text: str, warnings: list[ParseDiagnostic] | None = None
) -> BayesianNetwork:
    """Parse BIF text into a validated network.

    ``warnings`` collects non-fatal diagnostics when a list is supplied.
    """
    p = _Parser(_tokenize(text), warnings if warnings is not None else [])

    p.expect_ident("network")
    name = p.expect_ident().text
    p.expect_punct("{")
    while p.at_keyword("property"):
        tok = p.next()
        p.property_line()
        p.warn(tok, "property ignored")
    p.expect_punct("}")

    variables: list[Variable] = []
    raws: list[_RawCpt] = []
    while p.peek().kind != "eof":
        if p.at_keyword("variable"):
            variables.append(_parse_variable(p))
        elif p.at_keyword("probability"):
            raws.append(_parse_probability(p))
        else:
            tok = p.peek()
            p.fail(tok, f"expected 'variable' or 'probability', "
                        f"found {tok.text!r}")

    cpts = [_resolve_cpt(raw, variables) for raw in raws]
    return build_network(variables, cpts, name=name)


def _parse_variable(p: _Parser) -> Variable:
    p.expect_ident("variable")
    name = p.expect_ident().text
    p.expect_punct("{")
    states: list[str] | None = None
    alias: str | None = None
    while not p.at_punct("}"):
        tok = p.peek()
        if p.at_keyword("property"):
            p.next()
            payload = p.property_line()
            if (
                len(payload) == 2
                and payload[0].text == "alias"
                and payload[1].kind == "ident"
            ):
                alias = payload[1].text
            else:
                p.warn(tok, "property ignored")
        elif p.at_keyword("type"):
            if states is not None:
                p.fail(tok, f"duplicate type clause in variable '{name}'")
            p.next()
            p.expect_ident("discrete")
            p.expect_punct("[")
            count, count_tok = p.expect_number()
            p.expect_punct("]")
            p.expect_punct("{")
            states = p.ident_list()
            p.expect_punct("}")
            p.expect_punct(";")
            if int(count) != len(states):
                p.fail(count_tok,
                       f"variable '{name}' declares {int(count)} states "
                       f"but lists {len(states)}")
        else:
            p.fail(tok, f"unexpected token {tok.text!r} in variable '{name}'")
    p.expect_punct("}")
    if states is None:
        p.fail(p.peek(), f"variable '{name}' has no type clause")
    return Variable(name, tuple(states), alias)


def _parse_probability(p: _Parser) -> _RawCpt:
    p.expect_ident("probability")
    p.expect_punct("(")
    child = p.expect_ident().text
    parents: list[str] = []
    if p.at_punct("|"):
        p.next()
        parents = p.ident_list()
    p.expect_punct(")")
    p.expect_punct("{")

    raw = _RawCpt(child, tuple(parents))
    while not p.at_punct("}"):
        tok = p.peek()
        if p.at_keyword("property"):
            p.next()
            p.property_line()
            p.warn(tok, "property ignored")
        elif p.at_keyword("table"):
            if raw.flat is not None or raw.cond:
                p.fail(tok, f"duplicate table for '{child}'")
            p.next()
            raw.flat = p.number_list()
            raw.flat_token = tok
            p.expect_punct(";")
        elif p.at_punct("("):
            if raw.flat is not None:
                p.fail(tok, f"mixed table and conditional rows for '{child}'")
            p.next()
            combo = tuple(p.ident_list())
            p.expect_punct(")")
            nums = p.number_list()
            p.expect_punct(";")
            if combo in raw.cond:
                p.fail(tok, f"duplicate row for '{child}' combination {combo}")
            raw.cond[combo] = nums
            raw.cond_tokens[combo] = tok
        else:
            p.fail(tok, f"unexpected token {tok.text!r} in probability "
                        f"block for '{child}'")
    p.expect_punct("}")
    if raw.flat is None and not raw.cond:
        raise BifParseError([ParseDiagnostic(
            p.peek().line, p.peek().column,
            f"probability block for '{child}' has no rows",
        )])
    return raw


def _resolve_cpt(raw: _RawCpt, variables: list[Variable]) -> Cpt:
    """Turn a probability block into a Cpt, checking row sums with positions."""
    by_name = {v.name: v for v in variables}
    child_var = by_name.get(raw.child)
    parent_vars = [by_name.get(q) for q in raw.parents]
    if child_var is None or any(v is None for v in parent_vars):
        # Hand the unknown-name problem to network validation.
        rows = [raw.flat] if raw.flat is not None else list(raw.cond.values())
        return Cpt(raw.child, raw.parents, rows)

    child_card = len(child_var.states)
    n_rows = math.prod(len(v.states) for v in parent_vars)
    if raw.flat is not None:
        tok = raw.flat_token
        if len(raw.flat) != n_rows * child_card:
            raise BifParseError([ParseDiagnostic(
                tok.line, tok.column,
                f"table for '{raw.child}' has {len(raw.flat)} entries, "
                f"expected {n_rows * child_card}",
            )])
        rows = [
            raw.flat[r * child_card:(r + 1) * child_card]
            for r in range(n_rows)
        ]
        tokens = {r: tok for r in range(n_rows)}
    else:
        rows = [None] * n_rows
        tokens = {}
        for combo, nums in raw.cond.items():
            tok = raw.cond_tokens[combo]
            if len(combo) != len(parent_vars):
                raise BifParseError([ParseDiagnostic(
                    tok.line, tok.column,
                    f"row for '{raw.child}' lists {len(combo)} parent "
                    f"states, expected {len(parent_vars)}",
                )])
            idx = 0
            for state, pv in zip(combo, parent_vars):
                if state not in pv.states:
                    raise BifParseError([ParseDiagnostic(
                        tok.line, tok.column,
                        f"unknown state '{state}' of parent '{pv.name}' "
                        f"in row for '{raw.child}'",
                    )])
                idx = idx * len(pv.states) + pv.states.index(state)
            if rows[idx] is not None:
                raise BifParseError([ParseDiagnostic(
                    tok.line, tok.column,
                    f"duplicate row for '{raw.child}' combination {combo}",
                )])
            rows[idx] = nums
            tokens[idx] = tok
        missing = sum(1 for row in rows if row is None)
        if missing:
            tok = next(iter(raw.cond_tokens.values()))
            raise BifParseError([ParseDiagnostic(
                tok.line, tok.column,
                f"probability block for '{raw.child}' is missing "
                f"{missing} parent combination(s)",
            )])

    for r, row in enumerate(rows):
        total = math.fsum(row)
        if abs(total - 1.0) > ROW_SUM_TOLERANCE:
            tok = tokens[r]
            raise BifParseError([ParseDiagnostic(
                tok.line, tok.column,
                f"probability row for '{raw.child}' sums to {total!r}, "
                "expected 1",
            )])
    return Cpt(raw.child, raw.parents, rows)


def write_bif(net: BayesianNetwork) -> str:
    """Serialize a network; ``parse_bif(write_bif(net))`` reproduces it."""
    for label in [net.name] + [
        lab for v in net.variables for lab in (v.name, *v.states)
    ]:
        if not _IDENT_RE.fullmatch(label):
            raise XbnError(
                f"label {label!r} is not representable in BIF "
                "(identifiers only)"
            )
    out = [f"network {net.name} {{", "}"]
    for v in net.variables:
        out.append(f"variable {v.name} {{")
        out.append(
            f"  type discrete [ {len(v.states)} ] {{ {', '.join(v.states)} }};"
        )
        if v.alias:
            out.append(f"  property alias {v.alias};")
        out.append("}")
    for v in net.variables:
        cpt = net.cpts[v.name]
        if cpt.parents:
            out.append(f"probability ( {v.name} | {', '.join(cpt.parents)} ) {{")
            combos = itertools.product(*(net.states(q) for q in cpt.parents))
            for combo, row in zip(combos, cpt.rows):
                nums = ", ".join(repr(x) for x in row)
                out.append(f"  ( {', '.join(combo)} ) {nums};")
            out.append("}")
        else:
            out.append(f"probability ( {v.name} ) {{")
            out.append(f"  table {', '.join(repr(x) for x in cpt.rows[0])};")
            out.append("}")
    return "\n".join(out) + "\n"
