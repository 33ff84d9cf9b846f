"""Exact multivariate polynomials over the Gaussian rationals Q(i).

Polynomials are immutable sparse maps from exponent tuples to
:class:`GaussianRational` coefficients.  Every operation returns a fresh
value in canonical form (no zero coefficients stored).
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from gmpy2 import mpq

__all__ = [
    "GaussianRational",
    "Polynomial",
    "Covector",
    "MonomialOrder",
    "GREVLEX",
    "LEX",
    "LOCAL",
    "block_order",
    "partial_derivative",
    "ord0",
    "substitute_curve",
    "poly_gcd",
    "exact_divide",
    "squarefree_part",
    "root_multiplicity",
    "jacobian_determinant",
    "conjugate_coeffs",
    "monomials_of_degree",
]


class GaussianRational:
    """A number ``re + im*i`` with arbitrary-precision rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if type(re) is type(_MPQ0) else mpq(re)
        self.im = im if type(im) is type(_MPQ0) else mpq(im)

    @classmethod
    def coerce(cls, value) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, complex):
            raise TypeError("floating point coefficients are not exact")
        return cls(value, 0)

    def __add__(self, other):
        other = GaussianRational.coerce(other)
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = GaussianRational.coerce(other)
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return GaussianRational.coerce(other) - self

    def __mul__(self, other):
        other = GaussianRational.coerce(other)
        if not self.im and not other.im:
            return GaussianRational(self.re * other.re, _MPQ0)
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def inverse(self) -> "GaussianRational":
        if not self:
            raise ZeroDivisionError("inverse of zero")
        if not self.im:
            return GaussianRational(1 / self.re, _MPQ0)
        norm = self.re * self.re + self.im * self.im
        return GaussianRational(self.re / norm, -self.im / norm)

    def __truediv__(self, other):
        return self * GaussianRational.coerce(other).inverse()

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) * self.inverse()

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = GaussianRational(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def is_real(self) -> bool:
        return not self.im

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, type(_MPQ0), Fraction)):
            return not self.im and self.re == mpq(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self):
        return f"GaussianRational({self})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}*i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re} {sign} {abs(self.im)}*i"


_MPQ0 = mpq(0)
_ONE = GaussianRational(1)
_ZERO = GaussianRational(0)


class MonomialOrder:
    """A monomial order given by a sort key: larger key means larger monomial."""

    def __init__(self, name: str, key):
        self.name = name
        self.key = key

    def __repr__(self):
        return f"MonomialOrder({self.name!r})"

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and self.name == other.name

    def __hash__(self):
        return hash(self.name)


def _grevlex_key(e):
    return (sum(e), tuple(-x for x in reversed(e)))


def _lex_key(e):
    return e


def _local_key(e):
    # negative-degree reverse lexicographic: lower degree ranks higher
    return (-sum(e), tuple(-x for x in reversed(e)))


GREVLEX = MonomialOrder("grevlex", _grevlex_key)
LEX = MonomialOrder("lex", _lex_key)
LOCAL = MonomialOrder("ds", _local_key)


def block_order(eliminate: Iterable[int]) -> MonomialOrder:
    """Elimination order: any monomial involving an ``eliminate`` variable
    dominates every monomial free of them; grevlex inside each block."""
    elim = tuple(sorted(set(eliminate)))

    def key(e):
        head = tuple(e[i] for i in elim)
        tail = tuple(x for i, x in enumerate(e) if i not in elim)
        return (_grevlex_key(head), _grevlex_key(tail))

    return MonomialOrder("block" + str(elim), key)


class Polynomial:
    """Immutable sparse polynomial in ``nvars`` variables over Q(i)."""

    __slots__ = ("terms", "nvars", "_hash")

    def __init__(self, terms: Mapping[Sequence[int], object] | None = None, nvars: int = 1):
        if nvars < 1:
            raise ValueError("a polynomial needs at least one variable")
        clean = {}
        for exp, coeff in (terms or {}).items():
            exp = tuple(int(x) for x in exp)
            if len(exp) != nvars:
                raise ValueError(f"exponent {exp} does not have length {nvars}")
            if any(x < 0 for x in exp):
                raise ValueError(f"negative exponent in {exp}")
            c = GaussianRational.coerce(coeff)
            if exp in clean:
                c = clean[exp] + c
            if c:
                clean[exp] = c
            else:
                clean.pop(exp, None)
        self.terms = clean
        self.nvars = nvars
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict, nvars: int) -> "Polynomial":
        # trusted constructor: terms already canonical and owned
        p = cls.__new__(cls)
        p.terms = terms
        p.nvars = nvars
        p._hash = None
        return p

    @classmethod
    def zero(cls, nvars: int) -> "Polynomial":
        return cls._raw({}, nvars)

    @classmethod
    def constant(cls, c, nvars: int) -> "Polynomial":
        c = GaussianRational.coerce(c)
        return cls._raw({(0,) * nvars: c} if c else {}, nvars)

    @classmethod
    def one(cls, nvars: int) -> "Polynomial":
        return cls.constant(1, nvars)

    @classmethod
    def variable(cls, index: int, nvars: int) -> "Polynomial":
        if not 0 <= index < nvars:
            raise IndexError(f"variable index {index} out of range for {nvars} variables")
        exp = [0] * nvars
        exp[index] = 1
        return cls._raw({tuple(exp): _ONE}, nvars)

    @classmethod
    def monomial(cls, exp: Sequence[int], coeff=1) -> "Polynomial":
        return cls({tuple(exp): coeff}, len(exp))

    # -- basic queries -------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self) -> GaussianRational:
        return self.terms.get((0,) * self.nvars, _ZERO)

    def total_degree(self) -> int:
        """Largest total degree of a term; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, var: int) -> int:
        return max((e[var] for e in self.terms), default=-1)

    def ord0(self) -> float | int:
        return ord0(self)

    def variables(self) -> set[int]:
        used = set()
        for e in self.terms:
            used.update(i for i, x in enumerate(e) if x)
        return used

    def leading_monomial(self, order: MonomialOrder = GREVLEX) -> tuple:
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return max(self.terms, key=order.key)

    def leading_coeff(self, order: MonomialOrder = GREVLEX) -> GaussianRational:
        return self.terms[self.leading_monomial(order)]

    def monic(self, order: MonomialOrder = GREVLEX) -> "Polynomial":
        if not self.terms:
            return self
        lc = self.leading_coeff(order)
        if lc == 1:
            return self
        return self.scale(lc.inverse())

    def sorted_terms(self, order: MonomialOrder = GREVLEX) -> list[tuple[tuple, GaussianRational]]:
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    # -- arithmetic ------------------------------------------------------

    def _check(self, other: "Polynomial"):
        if self.nvars != other.nvars:
            raise ValueError(
                f"variable-count mismatch: {self.nvars} vs {other.nvars}"
            )

    def _lift(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        return Polynomial.constant(other, self.nvars)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v = v + c
                if v:
                    out[e] = v
                else:
                    del out[e]
        return Polynomial._raw(out, self.nvars)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw({e: -c for e, c in self.terms.items()}, self.nvars)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def scale(self, c) -> "Polynomial":
        c = GaussianRational.coerce(c)
        if not c:
            return Polynomial.zero(self.nvars)
        return Polynomial._raw({e: v * c for e, v in self.terms.items()}, self.nvars)

    def mul_term(self, exp: tuple, c: GaussianRational) -> "Polynomial":
        return Polynomial._raw(
            {tuple(a + b for a, b in zip(e, exp)): v * c for e, v in self.terms.items()},
            self.nvars,
        )

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale(other)
        self._check(other)
        if len(self.terms) > len(other.terms):
            a, b = self.terms, other.terms
        else:
            a, b = other.terms, self.terms
        out: dict = {}
        for eb, cb in b.items():
            for ea, ca in a.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                v = out.get(e)
                out[e] = ca * cb if v is None else v + ca * cb
        return Polynomial._raw({e: c for e, c in out.items() if c}, self.nvars)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = Polynomial.one(self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, GaussianRational)):
            return self == Polynomial.constant(other, self.nvars)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    # -- calculus and maps ---------------------------------------------

    def partial(self, var: int) -> "Polynomial":
        return partial_derivative(self, var)

    def conjugate(self) -> "Polynomial":
        return conjugate_coeffs(self)

    def extend(self, extra: int) -> "Polynomial":
        """Same polynomial viewed in ``nvars + extra`` variables."""
        pad = (0,) * extra
        return Polynomial._raw({e + pad: c for e, c in self.terms.items()}, self.nvars + extra)

    def evaluate(self, point: Sequence) -> GaussianRational:
        point = [GaussianRational.coerce(x) for x in point]
        total = GaussianRational(0)
        for e, c in self.terms.items():
            v = c
            for x, k in zip(point, e):
                if k:
                    v = v * x**k
            total = total + v
        return total

    def is_constant_multiple_of(self, other: "Polynomial") -> bool:
        if not self or not other:
            return not self and not other
        return self.monic() == other.monic()

    def __repr__(self):
        return f"Polynomial({format_polynomial(self)!r}, nvars={self.nvars})"

    def __str__(self):
        return format_polynomial(self)


class Covector:
    """A (1,0)-form sum_j coeffs[j] dz^j with polynomial coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[Polynomial]):
        coeffs = tuple(coeffs)
        if not coeffs:
            raise ValueError("a covector needs at least one slot")
        n = coeffs[0].nvars
        if len(coeffs) != n or any(c.nvars != n for c in coeffs):
            raise ValueError("covector slots must match the variable count")
        self.coeffs = coeffs

    @classmethod
    def gradient(cls, f: Polynomial) -> "Covector":
        return cls([f.partial(j) for j in range(f.nvars)])

    @property
    def n(self) -> int:
        return len(self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def scale(self, c) -> "Covector":
        if isinstance(c, Polynomial):
            return Covector([c * p for p in self.coeffs])
        return Covector([p.scale(c) for p in self.coeffs])

    def __add__(self, other: "Covector") -> "Covector":
        return Covector([a + b for a, b in zip(self.coeffs, other.coeffs)])

    def normalized(self) -> "Covector":
        """Scale so the first nonzero slot is monic."""
        for p in self.coeffs:
            if p:
                return self.scale(p.leading_coeff().inverse())
        return self

    def __eq__(self, other):
        return isinstance(other, Covector) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return "Covector(" + ", ".join(str(p) for p in self.coeffs) + ")"


# -- module-level operations ---------------------------------------------


def partial_derivative(p: Polynomial, var: int) -> Polynomial:
    if not 0 <= var < p.nvars:
        raise IndexError(f"variable index {var} out of range for {p.nvars} variables")
    out = {}
    for e, c in p.terms.items():
        k = e[var]
        if k:
            d = list(e)
            d[var] = k - 1
            out[tuple(d)] = c * k
    return Polynomial._raw(out, p.nvars)


def ord0(p: Polynomial):
    """Vanishing order at the origin; ``math.inf`` for the zero polynomial."""
    if not p.terms:
        return float("inf")
    return min(sum(e) for e in p.terms)


def substitute_curve(p: Polynomial, exponents: Sequence[int], coefficients: Sequence) -> Polynomial:
    """Pull ``p`` back along t -> (c_1 t^a_1, ..., c_n t^a_n).

    The result is a polynomial in the single variable t.
    """
    if len(exponents) != p.nvars or len(coefficients) != p.nvars:
        raise ValueError("curve data must have one entry per variable")
    coefficients = [GaussianRational.coerce(c) for c in coefficients]
    out: dict = {}
    for e, c in p.terms.items():
        power = sum(a * k for a, k in zip(exponents, e))
        v = c
        for x, k in zip(coefficients, e):
            if k:
                v = v * x**k
        key = (power,)
        out[key] = out[key] + v if key in out else v
    return Polynomial._raw({e: c for e, c in out.items() if c}, 1)


def conjugate_coeffs(p: Polynomial) -> Polynomial:
    return Polynomial._raw({e: c.conjugate() for e, c in p.terms.items()}, p.nvars)


def exact_divide(a: Polynomial, b: Polynomial) -> Polynomial | None:
    """Return q with a == q*b, or None when b does not divide a."""
    a._check(b)
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    lm_b = b.leading_monomial()
    inv = b.terms[lm_b].inverse()
    rem = dict(a.terms)
    quot: dict = {}
    key = GREVLEX.key
    while rem:
        m = max(rem, key=key)
        if any(x < y for x, y in zip(m, lm_b)):
            return None
        q_exp = tuple(x - y for x, y in zip(m, lm_b))
        q_c = rem[m] * inv
        quot[q_exp] = q_c
        for e, c in b.terms.items():
            t = tuple(x + y for x, y in zip(e, q_exp))
            v = rem.get(t)
            v = -(c * q_c) if v is None else v - c * q_c
            if v:
                rem[t] = v
            else:
                rem.pop(t, None)
    return Polynomial._raw(quot, a.nvars)


# -- gcd via recursive content / subresultant PRS --------------------------


def _coeffs_in(p: Polynomial, var: int) -> dict[int, Polynomial]:
    """View p as a univariate polynomial in ``var`` over the other variables."""
    out: dict[int, dict] = {}
    for e, c in p.terms.items():
        k = e[var]
        rest = e[:var] + (0,) + e[var + 1:]
        out.setdefault(k, {})[rest] = c
    return {k: Polynomial._raw(t, p.nvars) for k, t in out.items()}


def _from_coeffs(coeffs: dict[int, Polynomial], var: int, nvars: int) -> Polynomial:
    out = {}
    for k, c in coeffs.items():
        for e, v in c.terms.items():
            d = list(e)
            d[var] = k
            out[tuple(d)] = v
    return Polynomial._raw(out, nvars)


def _prem_exact(a: dict[int, Polynomial], b: dict[int, Polynomial]) -> dict[int, Polynomial]:
    """prem(a, b) = remainder of lc(b)^(deg a - deg b + 1) * a by b."""
    da, db = max(a), max(b)
    lc_b = b[db]
    r = dict(a)
    steps = da - db + 1
    done = 0
    while r and max(r) >= db:
        dr = max(r)
        lc_r = r[dr]
        shift = dr - db
        nr = {k: lc_b * v for k, v in r.items()}
        for k, v in b.items():
            t = k + shift
            nr[t] = nr[t] - lc_r * v if t in nr else -(lc_r * v)
        r = {k: v for k, v in nr.items() if v}
        done += 1
    if done < steps and r:
        factor = lc_b ** (steps - done)
        r = {k: v * factor for k, v in r.items()}
    return r


def _content(coeffs: dict[int, Polynomial]) -> Polynomial:
    g = None
    for c in coeffs.values():
        g = c if g is None else poly_gcd(g, c)
        if g.is_constant():
            return Polynomial.one(g.nvars)
    return g


def _exact(a: Polynomial, b: Polynomial) -> Polynomial:
    q = exact_divide(a, b)
    if q is None:
        raise ArithmeticError("inexact division inside subresultant PRS")
    return q


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Greatest common divisor, monic under grevlex; gcd(0, 0) = 0."""
    a._check(b)
    if not a:
        return b.monic()
    if not b:
        return a.monic()
    if a.is_constant() or b.is_constant():
        return Polynomial.one(a.nvars)
    used = a.variables() | b.variables()
    var = max(used)
    ca, cb = _coeffs_in(a, var), _coeffs_in(b, var)
    if max(ca) == 0 or max(cb) == 0:
        # one side is free of var: the gcd divides every coefficient of the other
        if max(ca) == 0:
            return poly_gcd(a, _content(cb)).monic()
        return poly_gcd(_content(ca), b).monic()
    cont_a, cont_b = _content(ca), _content(cb)
    cont = poly_gcd(cont_a, cont_b)
    pa = {k: _exact(v, cont_a) for k, v in ca.items()}
    pb = {k: _exact(v, cont_b) for k, v in cb.items()}
    if max(pa) < max(pb):
        pa, pb = pb, pa
    g = _subresultant_gcd(pa, pb)
    result = _from_coeffs(g, var, a.nvars) * cont
    return result.monic()


def _subresultant_gcd(a: dict[int, Polynomial], b: dict[int, Polynomial]) -> dict[int, Polynomial]:
    """Primitive gcd of two primitive univariate polynomials (deg a >= deg b)."""
    nvars = next(iter(a.values())).nvars
    g = Polynomial.one(nvars)
    h = Polynomial.one(nvars)
    while True:
        delta = max(a) - max(b)
        r = _prem_exact(a, b)
        if not r:
            break
        if max(r) == 0:
            return {0: Polynomial.one(nvars)}
        a = b
        divisor = g * h**delta
        b = {k: _exact(v, divisor) for k, v in r.items()}
        g = a[max(a)]
        if delta == 0:
            pass
        elif delta == 1:
            h = g
        else:
            h = _exact(g**delta, h ** (delta - 1))
    cont = _content(b)
    return {k: _exact(v, cont) for k, v in b.items()}


def squarefree_part(p: Polynomial) -> Polynomial:
    """Product of the distinct irreducible factors of p, monic under grevlex."""
    if not p:
        raise ValueError("squarefree part of the zero polynomial")
    current = p.monic()
    while True:
        g = current
        for j in range(current.nvars):
            g = poly_gcd(g, current.partial(j))
            if g.is_constant():
                break
        if g.is_constant():
            return current
        current = _exact(current, g).monic()


def root_multiplicity(f: Polynomial, g: Polynomial, limit: int | None = None) -> int | None:
    """Smallest m >= 1 with g dividing f**m, or None if not found up to ``limit``."""
    if not g:
        raise ZeroDivisionError("divisor is the zero polynomial")
    limit = limit if limit is not None else max(g.total_degree(), 1)
    power = f
    for m in range(1, limit + 1):
        if exact_divide(power, g) is not None:
            return m
        power = power * f
    return None


def jacobian_determinant(rows: Sequence[Covector]) -> Polynomial:
    """Determinant of the square matrix whose rows are covector coefficients."""
    rows = list(rows)
    if not rows:
        raise ValueError("need at least one row")
    n = rows[0].n
    if len(rows) != n:
        raise ValueError(f"need exactly {n} covectors, got {len(rows)}")
    matrix = [r.coeffs for r in rows]
    return _laplace(matrix, tuple(range(n)), {})


def _laplace(matrix, cols: tuple, memo: dict) -> Polynomial:
    row = len(matrix) - len(cols)
    if len(cols) == 1:
        return matrix[row][cols[0]]
    if cols in memo:
        return memo[cols]
    nvars = matrix[0][0].nvars
    total = Polynomial.zero(nvars)
    for idx, c in enumerate(cols):
        entry = matrix[row][c]
        if not entry:
            continue
        minor = _laplace(matrix, cols[:idx] + cols[idx + 1:], memo)
        term = entry * minor
        total = total + term if idx % 2 == 0 else total - term
    memo[cols] = total
    return total


def monomials_of_degree(nvars: int, degree: int) -> Iterable[tuple]:
    """All exponent tuples with the given total degree."""
    for cut in itertools.combinations(range(degree + nvars - 1), nvars - 1):
        prev = -1
        exp = []
        for c in cut:
            exp.append(c - prev - 1)
            prev = c
        exp.append(degree + nvars - 2 - prev)
        yield tuple(exp)


# -- rendering -------------------------------------------------------------


def _fmt_monomial(e: tuple) -> str:
    parts = []
    for i, k in enumerate(e):
        if k == 1:
            parts.append(f"z{i + 1}")
        elif k:
            parts.append(f"z{i + 1}^{k}")
    return "*".join(parts)


def _fmt_term(c: GaussianRational, e: tuple) -> tuple[bool, str]:
    """Return (negative, body) for one term."""
    mono = _fmt_monomial(e)
    if c.is_real() or not c.re:
        value = c.re if c.is_real() else c.im
        negative = value < 0
        mag = abs(value)
        unit = "" if c.is_real() else "i"
        if mag == 1:
            pieces = [unit] if unit else []
        else:
            pieces = [str(mag)] + ([unit] if unit else [])
        if mono:
            pieces.append(mono)
        body = "*".join(pieces) if pieces else "1"
        return negative, body
    sign = "+" if c.im > 0 else "-"
    im = abs(c.im)
    im_s = "i" if im == 1 else f"{im}*i"
    coeff = f"({c.re} {sign} {im_s})"
    return False, coeff + ("*" + mono if mono else "")


def format_polynomial(p: Polynomial, order: MonomialOrder = GREVLEX) -> str:
    """Render with descending monomials, e.g. ``z1^4 + 3*z1*z2^2``."""
    if not p.terms:
        return "0"
    out = []
    for k, (e, c) in enumerate(p.sorted_terms(order)):
        negative, body = _fmt_term(c, e)
        if k == 0:
            out.append(("-" if negative else "") + body)
        else:
            out.append((" - " if negative else " + ") + body)
    return "".join(out)
