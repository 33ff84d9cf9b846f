"""Recursive-descent parser for polynomial strings and the domain file format.

Grammar::

    expr   := ['-'|'+'] term (('+'|'-') term)*
    term   := factor ('*' factor)*
    factor := base ('^' uint)?
    base   := 'z' uint | 'w' | rational | 'i' | '(' expr ')'
    rational := int ('/' uint)?

Implicit multiplication is rejected.  A sign is accepted only at the start
of an expression so that rendered polynomials such as ``-z1 + z2`` parse.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .algebra import GaussianRational, Polynomial, format_polynomial
from .domain import DomainSpec, ResourceCaps

MAX_EXPONENT = 10_000


class ParseError(ValueError):
    """Syntax or validation error with a 1-based column (and line, for files)."""

    def __init__(self, message: str, column: int | None = None, line: int | None = None):
        self.message = message
        self.column = column
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)


class _Parser:
    def __init__(self, src: str, nvars: int):
        self.src = src
        self.pos = 0
        self.nvars = nvars

    def error(self, message, pos=None):
        return ParseError(message, column=(self.pos if pos is None else pos) + 1)

    def skip(self):
        while self.pos < len(self.src) and self.src[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.src[self.pos] if self.pos < len(self.src) else ""

    def take(self, ch: str):
        if self.peek() != ch:
            found = self.peek() or "end of input"
            raise self.error(f"expected {ch!r}, found {found!r}")
        self.pos += 1

    def uint(self) -> int:
        self.skip()
        start = self.pos
        while self.pos < len(self.src) and self.src[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            found = self.src[self.pos] if self.pos < len(self.src) else "end of input"
            raise self.error(f"expected an unsigned integer, found {found!r}")
        return int(self.src[start:self.pos])

    def parse(self) -> Polynomial:
        result = self.expr()
        if self.peek():
            ch = self.peek()
            if ch.isalnum() or ch == "(":
                raise self.error("implicit multiplication is not allowed; use '*'")
            raise self.error(f"unexpected {ch!r}")
        return result

    def expr(self) -> Polynomial:
        sign = None
        if self.peek() in "+-" and self.peek():
            sign = self.peek()
            self.pos += 1
        value = self.term()
        if sign == "-":
            value = -value
        while self.peek() and self.peek() in "+-":
            op = self.peek()
            self.pos += 1
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> Polynomial:
        value = self.factor()
        while self.peek() == "*":
            self.pos += 1
            value = value * self.factor()
        return value

    def factor(self) -> Polynomial:
        base = self.base()
        if self.peek() == "^":
            self.pos += 1
            self.skip()
            at = self.pos
            k = self.uint()
            if k > MAX_EXPONENT:
                raise self.error(f"exponent {k} exceeds the limit {MAX_EXPONENT}", at)
            return base**k
        return base

    def base(self) -> Polynomial:
        ch = self.peek()
        at = self.pos
        n = self.nvars
        if ch == "z":
            self.pos += 1
            if self.pos >= len(self.src) or not self.src[self.pos].isdigit():
                raise self.error("expected a variable index after 'z'")
            idx = self.uint()
            if not 1 <= idx <= n:
                raise self.error(f"variable z{idx} out of range (n = {n})", at)
            return Polynomial.variable(idx - 1, n)
        if ch == "w":
            raise self.error(
                "variable w cannot appear in F; it is absorbed by the special-domain convention",
                at,
            )
        if ch == "i":
            self.pos += 1
            return Polynomial.constant(GaussianRational(0, 1), n)
        if ch.isdigit():
            num = self.uint()
            if self.peek() == "/":
                self.pos += 1
                self.skip()
                den_at = self.pos
                den = self.uint()
                if den == 0:
                    raise self.error("zero denominator", den_at)
                return Polynomial.constant(GaussianRational(f"{num}/{den}"), n)
            return Polynomial.constant(num, n)
        if ch == "(":
            self.pos += 1
            value = self.expr()
            self.take(")")
            return value
        if not ch:
            raise self.error("unexpected end of input")
        raise self.error(f"unexpected {ch!r}")


def parse_polynomial(src: str, n: int) -> Polynomial:
    """Parse ``src`` as an exact polynomial in z1..zn."""
    if n < 1:
        raise ValueError("n must be positive")
    return _Parser(src, n).parse()


def render_polynomial(p: Polynomial) -> str:
    return format_polynomial(p)


@dataclass
class DomainFile:
    """A parsed domain file: the domain plus run options."""

    spec: DomainSpec
    sources: list[str] = field(default_factory=list)
    convention: str = "siu"
    caps: ResourceCaps = field(default_factory=ResourceCaps)
    probe_cap: int | None = None
    trials: int | None = None


_INT_OPTIONS = {
    "max_degree",
    "max_pairs",
    "max_steps",
    "max_colength_degree",
    "probe_cap",
    "trials",
}


def loads_domain_file(text: str) -> DomainFile:
    """Parse the key-value domain format (``n = 2``, ``F = z1^2``, ...)."""
    n = None
    pending: list[tuple[int, str, int]] = []
    options: dict[str, object] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError("expected 'key = value'", line=lineno)
        key, value = (s.strip() for s in line.split("=", 1))
        after = raw.index("=") + 1
        col = after + len(raw[after:]) - len(raw[after:].lstrip()) + 1
        if key == "n":
            try:
                n = int(value)
            except ValueError:
                raise ParseError(f"n must be an integer, got {value!r}", line=lineno) from None
            if n < 1:
                raise ParseError("n must be positive", line=lineno)
        elif key == "F":
            pending.append((lineno, value, col))
        elif key == "convention":
            if value.lower() not in ("siu", "hermitian"):
                raise ParseError(f"unknown convention {value!r}", line=lineno)
            options["convention"] = value.lower()
        elif key in _INT_OPTIONS:
            try:
                options[key] = int(value)
            except ValueError:
                raise ParseError(f"{key} must be an integer, got {value!r}", line=lineno) from None
            if options[key] < 1:
                raise ParseError(f"{key} must be positive", line=lineno)
        else:
            raise ParseError(f"unknown key {key!r}", line=lineno)
    if n is None:
        raise ParseError("missing 'n = <int>' line")
    if not pending:
        raise ParseError("at least one 'F = <poly>' line is required")
    polys = []
    for lineno, src, col in pending:
        try:
            p = parse_polynomial(src, n)
        except ParseError as exc:
            column = None if exc.column is None else exc.column + col - 1
            raise ParseError(exc.message, column=column, line=lineno) from None
        if p.constant_term():
            raise ParseError(f"F must vanish at the origin: {src}", line=lineno)
        if not p:
            raise ParseError(f"F must be a nonzero polynomial: {src}", line=lineno)
        polys.append(p)
    caps = ResourceCaps()
    for name in ("max_degree", "max_pairs", "max_steps", "max_colength_degree"):
        if name in options:
            setattr(caps, name, options[name])
    return DomainFile(
        spec=DomainSpec(n, tuple(polys)),
        sources=[src for _, src, _ in pending],
        convention=options.get("convention", "siu"),
        caps=caps,
        probe_cap=options.get("probe_cap"),
        trials=options.get("trials"),
    )


def load_domain_spec(path) -> DomainFile:
    text = Path(path).read_text(encoding="utf-8")
    return loads_domain_file(text)
