"""Exact multivariate polynomials over the rationals.

Variables are identified by positive integer indices and print as ``v1``,
``v2``, ...  A monomial is a tuple of ``(index, exponent)`` pairs sorted by
index, so the constant monomial is ``()``.  Coefficients are Python ints when
integral and :class:`fractions.Fraction` otherwise.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from types import MappingProxyType
from typing import Iterable, Mapping, Union

FREE = "free"
DEPENDENT = "dependent"
AUXILIARY = "auxiliary"
ROLES = (FREE, DEPENDENT, AUXILIARY)

Monomial = tuple  # tuple[tuple[int, int], ...]
Number = Union[int, Fraction]
ONE: Monomial = ()


class PolynomialError(ValueError):
    pass


@dataclass(frozen=True)
class Variable:
    index: int
    role: str = FREE
    name: str | None = None

    def __post_init__(self):
        if self.index < 1:
            raise PolynomialError(f"variable index must be positive, got {self.index}")
        if self.role not in ROLES:
            raise PolynomialError(f"unknown variable role {self.role!r}")

    def __str__(self):
        return self.name or f"v{self.index}"

    @property
    def poly(self) -> Polynomial:
        return Polynomial.var(self.index)


def _norm(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


# -- monomials ---------------------------------------------------------------

def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


def mono_div(a: Monomial, b: Monomial) -> Monomial | None:
    """Return a/b, or None when b does not divide a."""
    d = dict(a)
    for v, e in b:
        r = d.get(v, 0) - e
        if r < 0:
            return None
        if r:
            d[v] = r
        else:
            del d[v]
    return tuple(sorted(d.items()))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    d = dict(a)
    for v, e in b:
        if e > d.get(v, 0):
            d[v] = e
    return tuple(sorted(d.items()))


def mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def monomial(exponents: Mapping[int, int]) -> Monomial:
    for v, e in exponents.items():
        if e < 0:
            raise PolynomialError(f"negative exponent for v{v}")
    return tuple(sorted((v, e) for v, e in exponents.items() if e))


# -- monomial orders ---------------------------------------------------------

LEX = "lex"
DEGREVLEX = "degrevlex"
BLOCK = "block"


@dataclass(frozen=True)
class MonomialOrder:
    """A monomial order on indexed variables.

    Variable precedence is given by ``gens`` (greatest first); variables not
    listed there rank below the listed ones, higher index first.  With no
    ``gens`` the higher index is the greater variable, so ``v13 > v12 > ...``.
    The ``block`` kind puts ``eliminate`` in a leading degrevlex block ahead
    of a degrevlex block for everything else.
    """

    kind: str = DEGREVLEX
    eliminate: frozenset = frozenset()
    gens: tuple | None = None

    def __post_init__(self):
        if self.kind not in (LEX, DEGREVLEX, BLOCK):
            raise PolynomialError(f"unknown monomial order {self.kind!r}")
        object.__setattr__(self, "eliminate", frozenset(self.eliminate))

    @classmethod
    def lex(cls, *gens: int) -> MonomialOrder:
        return cls(LEX, gens=tuple(gens) or None)

    @classmethod
    def degrevlex(cls, *gens: int) -> MonomialOrder:
        return cls(DEGREVLEX, gens=tuple(gens) or None)

    @classmethod
    def block(cls, eliminate: Iterable[int], gens: tuple | None = None) -> MonomialOrder:
        return cls(BLOCK, frozenset(eliminate), gens)

    def precedence(self, variables: Iterable[int]) -> tuple:
        """Sort ``variables`` greatest first."""
        variables = set(variables)
        head = []
        if self.gens:
            head = [v for v in self.gens if v in variables]
            variables.difference_update(head)
        return tuple(head) + tuple(sorted(variables, reverse=True))

    def blocks(self, variables: Iterable[int]) -> list:
        prec = self.precedence(variables)
        if self.kind != BLOCK:
            return [prec]
        elim = tuple(v for v in prec if v in self.eliminate)
        keep = tuple(v for v in prec if v not in self.eliminate)
        return [b for b in (elim, keep) if b]

    def key(self, m: Monomial, universe: Iterable[int]):
        """Tuple key for ``m``; comparing keys compares monomials."""
        exps = dict(m)
        if self.kind == LEX:
            return tuple(exps.get(v, 0) for v in self.precedence(universe))
        key = ()
        for block in self.blocks(universe):
            es = [exps.get(v, 0) for v in block]
            key += (sum(es),) + tuple(-e for e in reversed(es))
        return key

    def sort_key(self, universe: Iterable[int]):
        universe = tuple(universe)
        return lambda m: self.key(m, universe)


def _universe(*monos: Monomial) -> set:
    return {v for m in monos for v, _ in m}


def compare_monomials(order: MonomialOrder, m1: Monomial, m2: Monomial) -> int:
    """Return -1, 0 or 1 as m1 is less than, equal to or greater than m2."""
    u = _universe(m1, m2)
    k1, k2 = order.key(m1, u), order.key(m2, u)
    return (k1 > k2) - (k1 < k2)


DEFAULT_ORDER = MonomialOrder(DEGREVLEX)


# -- polynomials -------------------------------------------------------------

class Polynomial:
    """Immutable polynomial, a map from monomials to nonzero coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Number] | None = None):
        clean = {}
        if terms:
            for m, c in terms.items():
                c = _norm(Fraction(c) if isinstance(c, float) else c)
                if c:
                    clean[m] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> Polynomial:
        p = cls.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def constant(cls, c: Number) -> Polynomial:
        c = _norm(c)
        return cls._raw({ONE: c} if c else {})

    @classmethod
    def var(cls, index: int) -> Polynomial:
        return cls._raw({((index, 1),): 1})

    @classmethod
    def coerce(cls, x) -> Polynomial:
        if isinstance(x, Polynomial):
            return x
        if isinstance(x, Variable):
            return cls.var(x.index)
        if isinstance(x, (int, Fraction)):
            return cls.constant(x)
        raise TypeError(f"cannot convert {type(x).__name__} to Polynomial")

    # -- inspection

    @property
    def terms(self) -> Mapping[Monomial, Number]:
        return MappingProxyType(self._terms)

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and ONE in self._terms)

    def constant_value(self) -> Number:
        if not self.is_constant():
            raise PolynomialError("polynomial is not constant")
        return self._terms.get(ONE, 0)

    def variables(self) -> frozenset:
        return frozenset(v for m in self._terms for v, _ in m)

    def total_degree(self) -> int:
        if not self._terms:
            return -1
        return max(mono_degree(m) for m in self._terms)

    def degree_in(self, v: int) -> int:
        return max((dict(m).get(v, 0) for m in self._terms), default=0)

    # -- arithmetic

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == ({ONE: other} if other else {})
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __neg__(self):
        return Polynomial._raw({m: -c for m, c in self._terms.items()})

    def __pos__(self):
        return self

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            if not isinstance(other, (int, Fraction)):
                return NotImplemented
            other = Polynomial.constant(other)
        if len(other._terms) > len(self._terms):
            big, small = other._terms, self._terms
        else:
            big, small = self._terms, other._terms
        out = dict(big)
        for m, c in small.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = _norm(s)
            else:
                out.pop(m, None)
        return Polynomial._raw(out)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            if not isinstance(other, (int, Fraction)):
                return NotImplemented
            other = Polynomial.constant(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            if not isinstance(other, (int, Fraction)):
                return NotImplemented
            other = _norm(other)
            if not other:
                return Polynomial._raw({})
            return Polynomial._raw({m: _norm(c * other) for m, c in self._terms.items()})
        out = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return Polynomial._raw({m: _norm(c) for m, c in out.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("division of polynomial by zero")
            return self * (Fraction(1) / other)
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise PolynomialError("exponent must be a non-negative integer")
        result = Polynomial.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- substitution and evaluation

    def substitute(self, mapping: Mapping[int, object]) -> Polynomial:
        """Replace variables (by index) with polynomials or numbers."""
        if not mapping or not (self.variables() & mapping.keys()):
            return self
        images = {v: Polynomial.coerce(x) for v, x in mapping.items()}
        powers: dict = {}

        def power(v, e):
            key = (v, e)
            if key not in powers:
                powers[key] = images[v] ** e
            return powers[key]

        out = {}
        for m, c in self._terms.items():
            kept = []
            term = None
            for v, e in m:
                if v in images:
                    f = power(v, e)
                    term = f if term is None else term * f
                else:
                    kept.append((v, e))
            kept = tuple(kept)
            if term is None:
                out[kept] = out.get(kept, 0) + c
                continue
            for m2, c2 in term._terms.items():
                mm = mono_mul(kept, m2)
                out[mm] = out.get(mm, 0) + c * c2
        return Polynomial._raw({m: _norm(c) for m, c in out.items() if c})

    def evaluate(self, assignment: Mapping) -> Number:
        return evaluate(self, assignment)

    def derivative(self, v: int) -> Polynomial:
        out = {}
        for m, c in self._terms.items():
            e = dict(m).get(v, 0)
            if e:
                mm = tuple((w, f - 1) if w == v else (w, f) for w, f in m if w != v or f > 1)
                out[mm] = out.get(mm, 0) + c * e
        return Polynomial._raw({m: _norm(c) for m, c in out.items() if c})

    # -- normalization

    def content(self) -> Fraction:
        """Positive rational c with self/c integral and primitive."""
        if not self._terms:
            return Fraction(0)
        num = 0
        den = 1
        for c in self._terms.values():
            if isinstance(c, Fraction):
                num = gcd(num, c.numerator)
                den = den * c.denominator // gcd(den, c.denominator)
            else:
                num = gcd(num, c)
        return Fraction(num, den)

    def primitive(self, order: MonomialOrder = DEFAULT_ORDER) -> Polynomial:
        """Integer coefficients with gcd 1 and positive leading coefficient."""
        if not self._terms:
            return self
        c = self.content()
        if leading_term(self, order)[1] < 0:
            c = -c
        return Polynomial._raw({m: _norm(v / c) for m, v in self._terms.items()})

    def monic(self, order: MonomialOrder = DEFAULT_ORDER) -> Polynomial:
        lc = leading_term(self, order)[1]
        return self * (Fraction(1) / lc)

    def sorted_terms(self, order: MonomialOrder = DEFAULT_ORDER) -> list:
        """Terms in descending order."""
        key = order.sort_key(self.variables())
        return sorted(self._terms.items(), key=lambda t: key(t[0]), reverse=True)

    def leading_term(self, order: MonomialOrder = DEFAULT_ORDER):
        return leading_term(self, order)

    # -- rendering

    def format(self, names: Mapping[int, str] | None = None, order: MonomialOrder = DEFAULT_ORDER) -> str:
        return format_polynomial(self, names, order)

    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"Polynomial('{format_polynomial(self)}')"


def _var_name(v: int, names) -> str:
    if names and v in names:
        return names[v]
    return f"v{v}"


def format_polynomial(p: Polynomial, names: Mapping[int, str] | None = None,
                      order: MonomialOrder = DEFAULT_ORDER) -> str:
    """Log-style rendering, e.g. ``-1*v7*v6+v8*v5+v7*v4``."""
    if p.is_zero():
        return "0"
    parts = []
    for m, c in p.sorted_terms(order):
        factors = []
        for v, e in sorted(m, reverse=True):
            s = _var_name(v, names)
            factors.append(s if e == 1 else f"{s}^{e}")
        if not factors:
            parts.append(str(c))
        elif c == 1:
            parts.append("*".join(factors))
        else:
            parts.append(f"{c}*" + "*".join(factors))
    return "+".join(parts)


# -- spec-level operations ---------------------------------------------------

def arith(p: Polynomial, q: Polynomial, kind: str) -> Polynomial:
    if kind == "add":
        return p + q
    if kind == "subtract":
        return p - q
    if kind == "multiply":
        return p * q
    raise PolynomialError(f"unknown arithmetic kind {kind!r}")


def leading_term(p: Polynomial, order: MonomialOrder = DEFAULT_ORDER):
    """Return ``(monomial, coefficient)`` of the order-maximal term."""
    if p.is_zero():
        raise PolynomialError("no leading term")
    terms = p._terms
    if len(terms) == 1:
        return next(iter(terms.items()))
    key = order.sort_key(p.variables())
    m = max(terms, key=key)
    return m, terms[m]


def leading_monomial(p: Polynomial, order: MonomialOrder = DEFAULT_ORDER) -> Monomial:
    return leading_term(p, order)[0]


def divide_exact(p: Polynomial, q: Polynomial) -> Polynomial | None:
    """Return r with p == q*r, or None if q does not divide p."""
    if q.is_zero():
        raise PolynomialError("division by zero polynomial")
    if p.is_zero():
        return p
    if q.is_constant():
        return p * (Fraction(1) / q.constant_value())
    if not q.variables() <= p.variables():
        return None
    prec = MonomialOrder(LEX).precedence(p.variables())
    pos = {v: i for i, v in enumerate(prec)}
    n = len(prec)

    def key(m):  # smallest key = lex greatest monomial
        k = [0] * n
        for v, e in m:
            k[pos[v]] = -e
        return tuple(k)

    qm = min(q._terms, key=key)
    qc = q._terms[qm]
    q_terms = list(q._terms.items())
    rem = dict(p._terms)
    heap = [(key(m), m) for m in rem]
    heapq.heapify(heap)
    quotient = {}
    while rem:
        _, m = heapq.heappop(heap)
        c = rem.get(m)
        if c is None:
            continue  # stale entry
        t = mono_div(m, qm)
        if t is None:
            return None
        f = _norm(Fraction(c) / qc)
        quotient[t] = f
        for m2, c2 in q_terms:
            mm = mono_mul(t, m2)
            old = rem.get(mm)
            s = (0 if old is None else old) - f * c2
            if s:
                rem[mm] = _norm(s)
                if old is None:
                    heapq.heappush(heap, (key(mm), mm))
            elif old is not None:
                del rem[mm]
    return Polynomial._raw(quotient)


def evaluate(p: Polynomial, assignment: Mapping) -> Number:
    """Exact value of ``p`` under ``assignment`` (keys: Variable or index)."""
    values = {}
    for k, x in assignment.items():
        idx = k.index if isinstance(k, Variable) else k
        values[idx] = Fraction(x) if isinstance(x, float) else x
    missing = p.variables() - values.keys()
    if missing:
        raise PolynomialError(f"no value for variable v{min(missing)}")
    total = 0
    for m, c in p._terms.items():
        t = c
        for v, e in m:
            t = t * values[v] ** e
        total += t
    return _norm(total) if isinstance(total, Fraction) else total


def evaluate_float(p: Polynomial, values: Mapping[int, float]) -> tuple:
    """Float value of ``p`` and the sum of absolute term values (its scale)."""
    total = 0.0
    scale = 0.0
    for m, c in p._terms.items():
        t = float(c)
        for v, e in m:
            t *= values[v] ** e
        total += t
        scale += abs(t)
    return total, scale


# -- gcd and squarefree parts ------------------------------------------------

def _int_primitive(p: Polynomial) -> Polynomial:
    c = p.content()
    return Polynomial._raw({m: _norm(v / c) for m, v in p._terms.items()})


def coefficients_in(p: Polynomial, x: int) -> dict:
    """Coefficients of p as a polynomial in x: {degree: Polynomial}."""
    coeffs: dict = {}
    for m, c in p._terms.items():
        e = 0
        rest = []
        for v, f in m:
            if v == x:
                e = f
            else:
                rest.append((v, f))
        coeffs.setdefault(e, {})[tuple(rest)] = c
    return {e: Polynomial._raw(t) for e, t in coeffs.items()}


def _from_univariate(coeffs: Mapping[int, Polynomial], x: int) -> Polynomial:
    xp = Polynomial.var(x)
    out = Polynomial.constant(0)
    for e, c in coeffs.items():
        out = out + c * xp ** e
    return out


def _content_in(p: Polynomial, x: int) -> Polynomial:
    g = Polynomial.constant(0)
    for c in coefficients_in(p, x).values():
        g = poly_gcd(g, c)
        if g.is_constant():
            return Polynomial.constant(1)
    return g


def _prem(a: Polynomial, b: Polynomial, x: int) -> Polynomial:
    """Pseudo-remainder of a by b with respect to x."""
    db = b.degree_in(x)
    bu = coefficients_in(b, x)
    lb = bu[db]
    r = a
    xp = Polynomial.var(x)
    k = a.degree_in(x) - db + 1
    while not r.is_zero() and r.degree_in(x) >= db:
        dr = r.degree_in(x)
        lr = coefficients_in(r, x)[dr]
        r = r * lb - lr * b * xp ** (dr - db)
        k -= 1
    if k > 0:
        r = r * lb ** k
    return r


def poly_gcd(p: Polynomial, q: Polynomial) -> Polynomial:
    """Greatest common divisor, primitive over the integers.

    Recurses on the variable of highest index with primitive remainder
    sequences.  The sign is normalized to a positive leading coefficient.
    """
    if p.is_zero():
        return q.primitive() if not q.is_zero() else q
    if q.is_zero():
        return p.primitive()
    if p.is_constant() or q.is_constant():
        return Polynomial.constant(1)
    p, q = _int_primitive(p), _int_primitive(q)
    vs = p.variables() | q.variables()
    x = max(vs)
    if x not in p.variables():
        return poly_gcd(p, _content_in(q, x))
    if x not in q.variables():
        return poly_gcd(_content_in(p, x), q)
    cp, cq = _content_in(p, x), _content_in(q, x)
    c = poly_gcd(cp, cq)
    a = _primitive_in(p, x, cp)
    b = _primitive_in(q, x, cq)
    if a.degree_in(x) < b.degree_in(x):
        a, b = b, a
    while True:
        r = _prem(a, b, x)
        if r.is_zero():
            g = b
            break
        if x not in r.variables():
            g = Polynomial.constant(1)
            break
        a, b = b, _primitive_in(r, x)
    return (c * g).primitive()


def _primitive_in(p: Polynomial, x: int, content: Polynomial | None = None) -> Polynomial:
    if content is None:
        content = _content_in(p, x)
    return _int_primitive(divide_exact(p, content))


def squarefree_part(p: Polynomial) -> Polynomial:
    """Product of the distinct irreducible factors of the primitive part."""
    if p.is_zero():
        raise PolynomialError("squarefree part of the zero polynomial")
    if p.is_constant():
        return Polynomial.constant(1)
    g = p
    for v in sorted(p.variables()):
        g = poly_gcd(g, p.derivative(v))
        if g.is_constant():
            break
    return divide_exact(p, g).primitive()
