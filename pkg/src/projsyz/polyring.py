"""Variables, monomial orders, exact multivariate polynomials, and the parser.

Variable priority is positional: ``variables[0]`` is the greatest.  DEGLEX
compares total degree first, then exponent vectors lexicographically in that
priority, so within one degree the power of the first variable dominates; the
leading-power function ``d0`` relies on exactly this.

Polynomials are stored as ``{exponent tuple: scalar}`` with no zero
coefficients; term lists sorted strictly decreasing are produced on demand.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Sequence

from .fields import DEFAULT_FIELD, Field, FieldError
from .linalg import ExactMatrix, rank

ORDERS = ("deglex", "degrevlex", "lex")


class OrderError(ValueError):
    """Operation requires a different monomial order."""


def order_key(order: str) -> Callable[[tuple], tuple]:
    """Sort key: greater monomials get greater keys."""
    if order == "deglex":
        return lambda e: (sum(e), e)
    if order == "degrevlex":
        return lambda e: (sum(e), tuple(-x for x in reversed(e)))
    if order == "lex":
        return lambda e: e
    raise OrderError(f"unknown monomial order {order!r}")


def compare(order: str, a: "Monomial | tuple", b: "Monomial | tuple") -> str:
    """Compare two monomials: 'LT', 'EQ' or 'GT' (a relative to b)."""
    ea = a.exponents if isinstance(a, Monomial) else tuple(a)
    eb = b.exponents if isinstance(b, Monomial) else tuple(b)
    if len(ea) != len(eb):
        raise ValueError("monomials from different rings")
    key = order_key(order)
    ka, kb = key(ea), key(eb)
    return "EQ" if ka == kb else ("GT" if ka > kb else "LT")


@dataclass(frozen=True)
class RingDescriptor:
    """Polynomial ring: named variables in priority order, field, order tag."""

    variables: tuple[str, ...]
    field: Field = DEFAULT_FIELD
    order: str = "deglex"

    def __post_init__(self):
        if not self.variables:
            raise ValueError("ring needs at least one variable")
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("duplicate variable names")
        if self.order not in ORDERS:
            raise OrderError(f"unknown monomial order {self.order!r}")
        object.__setattr__(self, "variables", tuple(self.variables))

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def var_index(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            raise KeyError(f"unknown variable {name!r}") from None

    def variable(self, i: int) -> "Polynomial":
        e = [0] * self.nvars
        e[i] = 1
        return Polynomial(self, {tuple(e): self.field.one})

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.constant(1)

    def constant(self, c) -> "Polynomial":
        c = self.field.normalize(c)
        if c == self.field.zero:
            return Polynomial(self, {})
        return Polynomial(self, {(0,) * self.nvars: c})

    def with_order(self, order: str) -> "RingDescriptor":
        return RingDescriptor(self.variables, self.field, order)

    def subring(self, t: int) -> "RingDescriptor":
        """Coordinate subring on variables t..n (same priority and order)."""
        if not 0 <= t < self.nvars:
            raise ValueError(f"subring index {t} out of range")
        return RingDescriptor(self.variables[t:], self.field, self.order)

    def monomials_of_degree(self, d: int) -> list[tuple]:
        """All exponent tuples of total degree d, sorted decreasing."""
        return _monomials_of_degree(self.nvars, d, self.order)

    def key(self) -> Callable[[tuple], tuple]:
        return order_key(self.order)


@lru_cache(maxsize=None)
def _monomials_of_degree(nvars: int, d: int, order: str) -> list[tuple]:
    def gen(rem_vars: int, rem_deg: int):
        if rem_vars == 1:
            yield (rem_deg,)
            return
        for e in range(rem_deg, -1, -1):
            for tail in gen(rem_vars - 1, rem_deg - e):
                yield (e,) + tail

    mons = list(gen(nvars, d))
    mons.sort(key=order_key(order), reverse=True)
    return mons


@dataclass(frozen=True)
class Monomial:
    """Exponent vector with cached total degree."""

    exponents: tuple[int, ...]

    def __post_init__(self):
        if any(e < 0 for e in self.exponents):
            raise ValueError("negative exponent")
        object.__setattr__(self, "exponents", tuple(self.exponents))

    @property
    def degree(self) -> int:
        return sum(self.exponents)

    def mul(self, other: "Monomial") -> "Monomial":
        return Monomial(tuple(a + b for a, b in zip(self.exponents, other.exponents)))

    def divides(self, other: "Monomial") -> bool:
        return all(a <= b for a, b in zip(self.exponents, other.exponents))

    def quotient(self, other: "Monomial") -> "Monomial":
        if not other.divides(self):
            raise ValueError("not divisible")
        return Monomial(tuple(a - b for a, b in zip(self.exponents, other.exponents)))

    def lcm(self, other: "Monomial") -> "Monomial":
        return Monomial(tuple(max(a, b) for a, b in zip(self.exponents, other.exponents)))

    def to_string(self, ring: RingDescriptor) -> str:
        parts = []
        for name, e in zip(ring.variables, self.exponents):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        return "*".join(parts) if parts else "1"


class Polynomial:
    """Exact polynomial; term dict keyed by exponent tuples, no zeros stored."""

    __slots__ = ("ring", "terms", "_lm")

    def __init__(self, ring: RingDescriptor, terms: dict):
        self.ring = ring
        self.terms = terms
        self._lm = None

    @classmethod
    def from_terms(cls, ring: RingDescriptor, pairs: Iterable[tuple[tuple, object]]):
        f = ring.field
        terms: dict = {}
        for exps, c in pairs:
            exps = tuple(exps)
            if len(exps) != ring.nvars:
                raise ValueError("exponent tuple length mismatch")
            c = f.add(terms.get(exps, f.zero), f.normalize(c))
            if c == f.zero:
                terms.pop(exps, None)
            else:
                terms[exps] = c
        return cls(ring, terms)

    # -- basic structure ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def sorted_terms(self) -> list[tuple[tuple, object]]:
        key = self.ring.key()
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)

    def leading_exponents(self) -> tuple:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        if self._lm is None:
            self._lm = max(self.terms, key=self.ring.key())
        return self._lm

    def leading_monomial(self) -> Monomial:
        return Monomial(self.leading_exponents())

    def leading_coefficient(self):
        return self.terms[self.leading_exponents()]

    def degree(self) -> int:
        """Total degree (max over terms); -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def is_homogeneous(self) -> bool:
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    def monic(self) -> "Polynomial":
        if not self.terms:
            return self
        f = self.ring.field
        inv = f.inv(self.leading_coefficient())
        if inv == f.one:
            return self
        return Polynomial(self.ring, {e: f.mul(c, inv) for e, c in self.terms.items()})

    # -- arithmetic ----------------------------------------------------------

    def _check(self, other: "Polynomial"):
        if other.ring != self.ring:
            raise FieldError("polynomials from different rings")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        f = self.ring.field
        terms = dict(self.terms)
        for e, c in other.terms.items():
            v = f.add(terms.get(e, f.zero), c)
            if v == f.zero:
                terms.pop(e, None)
            else:
                terms[e] = v
        return Polynomial(self.ring, terms)

    def __neg__(self) -> "Polynomial":
        f = self.ring.field
        return Polynomial(self.ring, {e: f.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        f = self.ring.field
        terms: dict = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                v = f.add(terms.get(e, f.zero), f.mul(ca, cb))
                if v == f.zero:
                    terms.pop(e, None)
                else:
                    terms[e] = v
        return Polynomial(self.ring, terms)

    def scale(self, c) -> "Polynomial":
        f = self.ring.field
        c = f.normalize(c)
        if c == f.zero:
            return Polynomial(self.ring, {})
        return Polynomial(self.ring, {e: f.mul(v, c) for e, v in self.terms.items()})

    def mul_monomial(self, exps: tuple, coeff=None) -> "Polynomial":
        f = self.ring.field
        c = f.one if coeff is None else f.normalize(coeff)
        if c == f.zero:
            return Polynomial(self.ring, {})
        return Polynomial(self.ring, {
            tuple(a + b for a, b in zip(e, exps)): f.mul(v, c)
            for e, v in self.terms.items()
        })

    def __pow__(self, k: int) -> "Polynomial":
        if k < 0:
            raise ValueError("negative power")
        out = self.ring.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    def __eq__(self, other):
        return (isinstance(other, Polynomial) and other.ring == self.ring
                and other.terms == self.terms)

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    # -- evaluation / substitution -------------------------------------------

    def evaluate(self, point: Sequence) -> object:
        f = self.ring.field
        pt = [f.normalize(x) for x in point]
        total = f.zero
        for e, c in self.terms.items():
            v = c
            for x, k in zip(pt, e):
                for _ in range(k):
                    v = f.mul(v, x)
            total = f.add(total, v)
        return total

    def __str__(self):
        return polynomial_to_string(self)

    __repr__ = __str__


def d0(f: Polynomial) -> int:
    """Leading power of the first (greatest) variable in the leading term.

    For homogeneous f under DEGLEX this equals the maximal first-variable
    exponent over all terms of f.
    """
    if f.is_zero():
        raise ValueError("d0 of the zero polynomial is undefined")
    if f.ring.order != "deglex":
        raise OrderError("d0 requires the DEGLEX order with the first variable greatest")
    return f.leading_exponents()[0]


def substitute_linear(f: Polynomial, forms: Sequence[Polynomial],
                      target: RingDescriptor) -> Polynomial:
    """Substitute variable i of f by forms[i] (polynomials in ``target``)."""
    if len(forms) != f.ring.nvars:
        raise ValueError("one substitution form per variable required")
    out = target.zero()
    pow_cache: dict[tuple[int, int], Polynomial] = {}

    def power(i: int, k: int) -> Polynomial:
        if k == 0:
            return target.one()
        got = pow_cache.get((i, k))
        if got is None:
            got = power(i, k - 1) * forms[i]
            pow_cache[(i, k)] = got
        return got

    for e, c in f.terms.items():
        term = target.constant(c)
        for i, k in enumerate(e):
            if k:
                term = term * power(i, k)
        out = out + term
    return out


def apply_linear_change(f: Polynomial, a: ExactMatrix) -> Polynomial:
    """Substitute each variable x_i by the linear form in column i of ``a``.

    ``a`` must be an invertible nvars-by-nvars matrix over the ring's field;
    degree is preserved and the map is a ring homomorphism.
    """
    n = f.ring.nvars
    if a.rows != n or a.cols != n:
        raise ValueError(f"change matrix must be {n}x{n}")
    if a.field != f.ring.field:
        raise FieldError("change matrix over a different field")
    if rank(a) != n:
        raise ValueError("singular change-of-coordinates matrix")
    forms = []
    for i in range(n):
        col = {}
        for j in range(n):
            v = a.entry(j, i).value
            if v != f.ring.field.zero:
                e = [0] * n
                e[j] = 1
                col[tuple(e)] = v
        forms.append(Polynomial(f.ring, col))
    return substitute_linear(f, forms, f.ring)


# ---------------------------------------------------------------------------
# text format
# ---------------------------------------------------------------------------

class ParseError(ValueError):
    """Malformed polynomial text; carries the 0-based position."""

    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} (at position {pos})")
        self.pos = pos


_SYMBOLS = set("+-*^()")


def _tokenize(text: str):
    toks = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in _SYMBOLS:
            toks.append((ch, ch, i))
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            if j < n and (text[j].isalpha() or text[j] == "_" or text[j] == "."):
                raise ParseError(f"malformed token {text[i:j+1]!r}", i)
            toks.append(("int", int(text[i:j]), i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(("var", text[i:j], i))
            i = j
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    toks.append(("end", None, n))
    return toks


def parse_polynomial(text: str, ring: RingDescriptor) -> Polynomial:
    """Parse the exact grammar::

        expr   := ['+'|'-'] term (('+'|'-') term)*
        term   := factor ('*' factor)*
        factor := base ('^' uint)?
        base   := int | var | '(' expr ')'

    Multiplication is always explicit.  Unknown variables and non-integer
    coefficients are rejected with a position-carrying ParseError.
    """
    toks = _tokenize(text)
    pos = 0

    def peek():
        return toks[pos]

    def take(kind=None):
        nonlocal pos
        tk = toks[pos]
        if kind is not None and tk[0] != kind:
            raise ParseError(f"expected {kind}, found {tk[1]!r}", tk[2])
        pos += 1
        return tk

    def parse_base() -> Polynomial:
        kind, val, at = peek()
        if kind == "int":
            take()
            return ring.constant(val)
        if kind == "var":
            take()
            try:
                idx = ring.var_index(val)
            except KeyError:
                raise ParseError(f"unknown variable {val!r}", at) from None
            return ring.variable(idx)
        if kind == "(":
            take()
            e = parse_expr()
            if peek()[0] != ")":
                raise ParseError("expected ')'", peek()[2])
            take()
            return e
        raise ParseError(f"expected a coefficient, variable or '('", at)

    def parse_factor() -> Polynomial:
        base = parse_base()
        if peek()[0] == "^":
            take()
            kind, val, at = peek()
            if kind != "int" or val < 0:
                raise ParseError("expected a nonnegative integer exponent", at)
            take()
            return base ** val
        return base

    def parse_term() -> Polynomial:
        out = parse_factor()
        while peek()[0] == "*":
            take()
            out = out * parse_factor()
        return out

    def parse_expr() -> Polynomial:
        sign = 1
        if peek()[0] in ("+", "-"):
            sign = -1 if take()[0] == "-" else 1
        out = parse_term()
        if sign < 0:
            out = -out
        while peek()[0] in ("+", "-"):
            op = take()[0]
            nxt = parse_term()
            out = out - nxt if op == "-" else out + nxt
        return out

    result = parse_expr()
    kind, val, at = peek()
    if kind != "end":
        raise ParseError(f"trailing input {val!r}", at)
    return result


def _coeff_to_string(c, lead: bool) -> tuple[str, str]:
    """(sign, magnitude text); Fractions print as a/b, F_p values as-is."""
    if isinstance(c, Fraction):
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        return sign, (str(mag.numerator) if mag.denominator == 1
                      else f"{mag.numerator}/{mag.denominator}")
    return "+", str(c)


def polynomial_to_string(f: Polynomial) -> str:
    if f.is_zero():
        return "0"
    parts = []
    for exps, c in f.sorted_terms():
        sign, mag = _coeff_to_string(c, not parts)
        mon = Monomial(exps).to_string(f.ring)
        if mon == "1":
            body = mag
        elif mag == "1":
            body = mon
        else:
            body = f"{mag}*{mon}"
        if not parts:
            parts.append(body if sign == "+" else f"-{body}")
        else:
            parts.append(f" {sign} {body}")
    return "".join(parts)


class MonomialPacker:
    """Packs exponent vectors into single ints ordered like the ring order.

    Layout (8-bit fields, high guard bit per field kept clear):

    * deglex:    [deg | e_0 | e_1 | ... | e_{n-1}]
    * lex:       [e_0 | e_1 | ... | e_{n-1}]
    * degrevlex: [deg | K-e_{n-1} | ... | K-e_0]
    * elim1:     [e_0 | deg(e_1..) | e_1 | ... | e_{n-1}]  (block order, used
      by the colon/intersection auxiliary variable)

    With these layouts integer comparison of packed values equals the
    monomial order, and multiplication is packed addition (plus a constant
    correction for the complemented degrevlex fields).  Divisibility is the
    borrow-detection trick on guard bits.  Exponents and total degrees must
    stay below 64; the degree-capped callers never get close.
    """

    WIDTH = 8
    MAXE = 63

    def __init__(self, nvars: int, order: str):
        self.nvars = nvars
        self.order = order
        w = self.WIDTH
        if order == "deglex":
            fields = nvars + 1
            self.shifts = [(fields - 1 - k) * w for k in range(fields)]
        elif order == "lex":
            fields = nvars
            self.shifts = [(fields - 1 - k) * w for k in range(fields)]
        elif order == "degrevlex":
            fields = nvars + 1
            self.shifts = [(fields - 1 - k) * w for k in range(fields)]
        elif order == "elim1":
            fields = nvars + 1
            self.shifts = [(fields - 1 - k) * w for k in range(fields)]
        else:
            raise OrderError(f"unpackable order {order!r}")
        self.nfields = fields
        self.guard = 0
        for s in self.shifts:
            self.guard |= (1 << (w - 1)) << s
        k = (1 << (w - 1)) - 1  # 127
        self.k = k
        if order == "degrevlex":
            # complement correction over the exponent fields only
            self.kmask = sum(k << s for s in self.shifts[1:])
            self.cmask = sum(((1 << w) - 1) << s for s in self.shifts[1:])
        else:
            self.kmask = 0
            self.cmask = None

    def pack(self, exps: tuple) -> int:
        if any(e > self.MAXE for e in exps):
            raise OverflowError("exponent too large for packed monomials")
        o = self.order
        sh = self.shifts
        if o == "lex":
            v = 0
            for e, s in zip(exps, sh):
                v |= e << s
            return v
        d = sum(exps)
        if d > self.MAXE:
            raise OverflowError("degree too large for packed monomials")
        if o == "deglex":
            v = d << sh[0]
            for e, s in zip(exps, sh[1:]):
                v |= e << s
            return v
        if o == "degrevlex":
            v = d << sh[0]
            k = self.k
            # x_{n-1} in the most significant exponent field, complemented
            for j, s in zip(range(self.nvars - 1, -1, -1), sh[1:]):
                v |= (k - exps[j]) << s
            return v
        # elim1: first variable is the eliminated block
        v = exps[0] << sh[0]
        v |= (d - exps[0]) << sh[1]
        for e, s in zip(exps[1:], sh[2:]):
            v |= e << s
        return v

    def unpack(self, v: int) -> tuple:
        w = self.WIDTH
        mask = (1 << w) - 1
        o = self.order
        sh = self.shifts
        if o == "lex":
            return tuple((v >> s) & mask for s in sh)
        if o == "deglex":
            return tuple((v >> s) & mask for s in sh[1:])
        if o == "degrevlex":
            k = self.k
            rev = [(k - ((v >> s) & mask)) for s in sh[1:]]
            return tuple(reversed(rev))
        exps = [(v >> sh[0]) & mask]
        exps.extend((v >> s) & mask for s in sh[2:])
        return tuple(exps)

    def degree(self, v: int) -> int:
        o = self.order
        if o == "lex":
            return sum(self.unpack(v))
        if o == "elim1":
            w = self.WIDTH
            mask = (1 << w) - 1
            return ((v >> self.shifts[0]) & mask) + ((v >> self.shifts[1]) & mask)
        return (v >> self.shifts[0]) & ((1 << self.WIDTH) - 1)

    def mul(self, a: int, b: int) -> int:
        return a + b - self.kmask

    def quotient(self, a: int, b: int) -> int:
        """a / b; caller guarantees divisibility."""
        return a - b + self.kmask

    def divides(self, b: int, a: int) -> bool:
        """Does monomial b divide monomial a (componentwise <=)?"""
        if self.order == "degrevlex":
            # complemented fields reverse the inequality; mask out the degree
            t = ((b & self.cmask) | self.guard) - (a & self.cmask)
            return t & self.guard == self.guard
        t = (a | self.guard) - b
        return t & self.guard == self.guard

    def lcm(self, a: int, b: int) -> int:
        ea, eb = self.unpack(a), self.unpack(b)
        return self.pack(tuple(max(x, y) for x, y in zip(ea, eb)))

    def coprime(self, a: int, b: int) -> bool:
        ea, eb = self.unpack(a), self.unpack(b)
        return all(x == 0 or y == 0 for x, y in zip(ea, eb))

    def supp_mask(self, v: int) -> int:
        m = 0
        for i, e in enumerate(self.unpack(v)):
            if e:
                m |= 1 << i
        return m


@lru_cache(maxsize=None)
def packer(nvars: int, order: str) -> MonomialPacker:
    return MonomialPacker(nvars, order)


def random_polynomial(ring: RingDescriptor, degree: int, rng,
                      homogeneous: bool = True, sparsity: float = 0.5) -> Polynomial:
    """Seeded random polynomial with integer coefficients (test helper)."""
    mons = (ring.monomials_of_degree(degree) if homogeneous else
            [m for d in range(degree + 1) for m in ring.monomials_of_degree(d)])
    pairs = []
    for m in mons:
        if rng.random() < sparsity:
            c = rng.randrange(1, 100)
            if rng.random() < 0.5:
                c = -c
            pairs.append((m, c))
    if not pairs and mons:
        pairs.append((mons[0], 1))
    return Polynomial.from_terms(ring, pairs)
