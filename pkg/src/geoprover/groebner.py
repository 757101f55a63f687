"""Buchberger's algorithm, normal forms and elimination ideals.

Internally a monomial is packed into one integer whose natural ordering is
the monomial order and whose addition is monomial multiplication.  Each
degrevlex block with variables g1 > ... > gk contributes
``deg * B**k - sum(e_i * B**(i-1))``; blocks are stacked in mixed radix.
A second packing with plain exponent digits and a guard bit per digit gives
branch-free divisibility tests.  Coefficients are ``gmpy2.mpq`` and every
basis element is kept monic.
"""

from __future__ import annotations

import heapq
import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from gmpy2 import mpq

from .polycore import (
    BLOCK,
    LEX,
    MonomialOrder,
    Polynomial,
    PolynomialError,
    leading_term,
)

log = logging.getLogger(__name__)

BITS = 16
DEFAULT_MAX_PAIRS = 500_000


class BudgetExceeded(RuntimeError):
    """A Gröbner computation ran out of pairs or wall time."""


@dataclass
class Budget:
    max_pairs: int = DEFAULT_MAX_PAIRS
    deadline: float | None = None  # time.monotonic() value
    pairs: int = 0

    @classmethod
    def seconds(cls, timeout: float | None, max_pairs: int = DEFAULT_MAX_PAIRS) -> Budget:
        deadline = None if timeout is None else time.monotonic() + timeout
        return cls(max_pairs=max_pairs, deadline=deadline)

    def charge(self):
        self.pairs += 1
        if self.pairs > self.max_pairs:
            raise BudgetExceeded(f"more than {self.max_pairs} pair reductions")
        self.check_time()

    def check_time(self):
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise BudgetExceeded("time budget exhausted")


@dataclass(frozen=True)
class GroebnerBasis:
    basis: tuple
    order: MonomialOrder
    reduced: bool = True
    stats: dict = field(default_factory=dict, compare=False)

    def __iter__(self):
        return iter(self.basis)

    def __len__(self):
        return len(self.basis)


# -- packed monomial arithmetic ----------------------------------------------

class _Ring:
    def __init__(self, order: MonomialOrder, variables: Iterable[int]):
        B = 1 << BITS
        self.order = order
        blocks = order.blocks(variables)
        self.lex = order.kind == LEX
        self.nvars = sum(len(b) for b in blocks)
        self.weight = {}
        self.digit = {}
        self.blocks = []  # (W, k, digit offset) for degrevlex blocks
        if self.lex:
            prec = blocks[0] if blocks else ()
            n = len(prec)
            for i, v in enumerate(prec):
                self.weight[v] = B ** (n - 1 - i)
                self.digit[v] = n - 1 - i
        else:
            W = 1
            offset = 0
            for block in reversed(blocks):
                k = len(block)
                for i, v in enumerate(block):
                    self.weight[v] = (B ** k - B ** i) * W
                    self.digit[v] = offset + i
                self.blocks.append((W, k, offset))
                W *= B ** (k + 1)
                offset += k
        self.var_of_digit = {d: v for v, d in self.digit.items()}
        self.guard = sum((B >> 1) << (BITS * d) for d in range(self.nvars))
        self.field_mask = B - 1

    def encode(self, mono) -> int:
        w = self.weight
        return sum(w[v] * e for v, e in mono)

    def exps_packed(self, P: int) -> int:
        """Plain exponent digits of the monomial packed as P."""
        if self.lex:
            return P
        S = 0
        B = BITS
        for W, k, offset in self.blocks:
            Pb = (P // W) % (1 << (B * (k + 1)))
            S |= ((-Pb) % (1 << (B * k))) << (B * offset)
        return S

    def divides(self, Sd: int, Sm: int) -> bool:
        g = self.guard
        return ((Sm | g) - Sd) & g == g

    def digits(self, S: int) -> list:
        m = self.field_mask
        return [(S >> (BITS * d)) & m for d in range(self.nvars)]

    def from_digits(self, digits: Sequence[int]) -> int:
        vd = self.var_of_digit
        w = self.weight
        return sum(w[vd[d]] * e for d, e in enumerate(digits) if e)

    def lcm(self, S1: int, S2: int) -> int:
        """Digitwise max of two exponent packings."""
        g = self.guard
        ge = ((S1 | g) - S2) & g  # guard set where S1 >= S2
        mask = (ge >> (BITS - 1)) * self.field_mask
        return (S1 & mask) | (S2 & ~mask)

    def degree(self, S: int) -> int:
        return sum(self.digits(S))

    def mono(self, P: int):
        digits = self.digits(self.exps_packed(P))
        vd = self.var_of_digit
        return tuple(sorted((vd[d], e) for d, e in enumerate(digits) if e))

    def has_any(self, S: int, variables: Iterable[int]) -> bool:
        m = self.field_mask
        return any((S >> (BITS * self.digit[v])) & m for v in variables if v in self.digit)


class _Elem:
    __slots__ = ("lm", "lms", "tail", "terms", "index")

    def __init__(self, ring: _Ring, terms: dict, index: int = -1):
        # terms: {P: mpq}, nonzero, leading coefficient 1
        self.terms = terms
        self.lm = max(terms)
        self.lms = ring.exps_packed(self.lm)
        self.tail = [(P - self.lm, c) for P, c in terms.items() if P != self.lm]
        self.index = index


def _to_internal(ring: _Ring, p: Polynomial) -> dict:
    out = {}
    for m, c in p.terms.items():
        if isinstance(c, Fraction):
            c = mpq(c.numerator, c.denominator)
        else:
            c = mpq(c)
        out[ring.encode(m)] = c
    return out


def _monic(terms: dict) -> dict:
    lc = terms[max(terms)]
    if lc == 1:
        return terms
    inv = 1 / lc
    return {P: c * inv for P, c in terms.items()}


def _to_polynomial(ring: _Ring, terms: dict, normalize: bool = True) -> Polynomial:
    out = {}
    for P, c in terms.items():
        out[ring.mono(P)] = Fraction(int(c.numerator), int(c.denominator))
    p = Polynomial(out)
    return p.primitive(ring.order) if normalize else p


def _reduce(ring: _Ring, terms: dict, basis: Sequence[_Elem], budget: Budget | None = None,
            full: bool = True) -> dict:
    """Normal form of ``terms`` modulo ``basis`` (leading coefficients 1)."""
    if not terms or not basis:
        return dict(terms)
    p = dict(terms)
    heap = [-P for P in p]
    heapq.heapify(heap)
    rem = {}
    divides = ring.divides
    exps = ring.exps_packed
    lms = [(g.lms, g) for g in basis]
    steps = 0
    while heap:
        P = -heapq.heappop(heap)
        c = p.pop(P, None)
        if c is None:
            continue
        S = exps(P)
        for gs, g in lms:
            if divides(gs, S):
                break
        else:
            rem[P] = c
            if not full:
                # leading term is irreducible; keep the rest unchanged
                for P2 in p:
                    rem[P2] = p[P2]
                return rem
            continue
        shift = P
        for d, cq in g.tail:
            P2 = d + shift
            v = p.get(P2)
            if v is None:
                p[P2] = -c * cq
                heapq.heappush(heap, -P2)
            else:
                v -= c * cq
                if v:
                    p[P2] = v
                else:
                    del p[P2]
        steps += 1
        if budget is not None and not steps & 1023:
            budget.check_time()
    return rem


# -- Buchberger with Gebauer-Möller pair management ----------------------------

class _Buchberger:
    def __init__(self, ring: _Ring, budget: Budget | None, strategy: str = "normal"):
        self.ring = ring
        self.budget = budget
        self.strategy = strategy
        self.elems: list = []
        self.active: list = []  # indices into elems, the current basis
        self.pairs: list = []  # heap of (key, i, j, lcm S)
        self.sugar: list = []
        self.reductions = 0
        self.zero_reductions = 0

    def pair_key(self, i: int, j: int, L: int):
        ring = self.ring
        PL = ring.from_digits(ring.digits(L))
        if self.strategy == "normal":
            return (PL, i, j)
        deg = ring.degree(L)
        if self.strategy == "sugar":
            si = self.sugar[i] + deg - ring.degree(self.elems[i].lms)
            sj = self.sugar[j] + deg - ring.degree(self.elems[j].lms)
            return (max(si, sj), PL, i, j)
        return (deg, PL, i, j)

    def add(self, terms: dict, sugar: int):
        ring = self.ring
        h = _Elem(ring, _monic(terms), len(self.elems))
        self.elems.append(h)
        self.sugar.append(sugar)
        hi = h.index
        hs = h.lms
        divides = ring.divides
        lcm = ring.lcm
        # new pairs (g, h): chain criterion among themselves, product criterion last
        C = [(gi, lcm(self.elems[gi].lms, hs)) for gi in self.active]
        D = []
        while C:
            gi, L = C.pop(0)
            coprime = L == self.elems[gi].lms + hs
            if coprime or not (any(divides(L2, L) for _, L2 in C)
                               or any(divides(L2, L) for _, L2, _ in D)):
                D.append((gi, L, coprime))
        new_pairs = [(gi, L) for gi, L, coprime in D if not coprime]
        # Gebauer-Möller criterion B_k on old pairs
        old = []
        for item in self.pairs:
            i, j, L = item[-3], item[-2], item[-1]
            if divides(hs, L):
                Li = lcm(self.elems[i].lms, hs)
                Lj = lcm(self.elems[j].lms, hs)
                if Li != L and Lj != L:
                    continue
            old.append(item)
        self.pairs = old
        for gi, L in new_pairs:
            self.pairs.append(self.pair_key(gi, hi, L) + (L,))
        heapq.heapify(self.pairs)
        self.active = [gi for gi in self.active if not divides(hs, self.elems[gi].lms)]
        self.active.append(hi)

    def spoly(self, i: int, j: int, L: int) -> dict:
        ring = self.ring
        PL = ring.from_digits(ring.digits(L))
        out = {}
        for d, c in self.elems[i].tail:
            out[d + PL] = c
        for d, c in self.elems[j].tail:
            P = d + PL
            v = out.get(P)
            if v is None:
                out[P] = -c
            else:
                v -= c
                if v:
                    out[P] = v
                else:
                    del out[P]
        return out

    def run(self, inputs: Sequence[dict]):
        ring = self.ring
        for terms in sorted(inputs, key=lambda t: (max(t),)):
            basis = [self.elems[i] for i in self.active]
            h = _reduce(ring, terms, basis, self.budget)
            if h:
                self.add(h, ring.degree(ring.exps_packed(max(h))))
                if max(h) == 0:
                    return
        while self.pairs:
            item = heapq.heappop(self.pairs)
            i, j, L = item[-3], item[-2], item[-1]
            if self.budget is not None:
                self.budget.charge()
            s = self.spoly(i, j, L)
            self.reductions += 1
            basis = [self.elems[k] for k in self.active]
            h = _reduce(ring, s, basis, self.budget)
            if not h:
                self.zero_reductions += 1
                continue
            sugar = item[0] if self.strategy == "sugar" else ring.degree(ring.exps_packed(max(h)))
            self.add(h, sugar)
            if max(h) == 0:
                # unit ideal
                self.active = [len(self.elems) - 1]
                self.pairs = []
                return

    def reduced_basis(self) -> list:
        ring = self.ring
        G = [self.elems[i] for i in self.active]
        G.sort(key=lambda g: g.lm)
        out = []
        for n, g in enumerate(G):
            others = G[:n] + G[n + 1:]
            t = _reduce(ring, g.terms, others, self.budget) if others else dict(g.terms)
            out.append(_Elem(ring, _monic(t)))
        out.sort(key=lambda g: g.lm)
        return out


def _variables_of(polys: Iterable[Polynomial]) -> set:
    vs = set()
    for p in polys:
        vs |= p.variables()
    return vs


def groebner_basis(generators: Sequence[Polynomial], order: MonomialOrder,
                   budget: Budget | None = None, strategy: str = "normal") -> GroebnerBasis:
    """Reduced Gröbner basis, elements primitive with positive leading coefficient.

    Pair selection: ``"normal"`` takes the least lcm in ``order``,
    ``"degree"`` the least total degree of the lcm first (the two agree
    for degrevlex), ``"sugar"`` the least sugar degree.  Remaining ties go
    by element index.  Product and chain criteria are applied in
    Gebauer-Möller form.
    """
    gens = [Polynomial.coerce(g) for g in generators]
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return GroebnerBasis((), order, True, {"pairs": 0})
    ring = _Ring(order, _variables_of(gens))
    bb = _Buchberger(ring, budget, strategy)
    bb.run([_to_internal(ring, g) for g in gens])
    basis = bb.reduced_basis()
    polys = tuple(_to_polynomial(ring, g.terms) for g in basis)
    stats = {"pairs": bb.reductions, "zero_reductions": bb.zero_reductions,
             "size": len(polys)}
    return GroebnerBasis(polys, order, True, stats)


buchberger = groebner_basis


def s_polynomial(f: Polynomial, g: Polynomial, order: MonomialOrder) -> Polynomial:
    if f.is_zero() or g.is_zero():
        raise PolynomialError("S-polynomial of the zero polynomial")
    from .polycore import mono_div, mono_lcm
    mf, cf = leading_term(f, order)
    mg, cg = leading_term(g, order)
    L = mono_lcm(mf, mg)
    uf = Polynomial({mono_div(L, mf): Fraction(1) / cf})
    ug = Polynomial({mono_div(L, mg): Fraction(1) / cg})
    return uf * f - ug * g


def normal_form(p: Polynomial, basis: Sequence[Polynomial], order: MonomialOrder) -> Polynomial:
    """Remainder of full multivariate division of p by basis."""
    basis = [b for b in basis if not b.is_zero()]
    if p.is_zero() or not basis:
        return p
    ring = _Ring(order, _variables_of(list(basis) + [p]))
    elems = [_Elem(ring, _monic(_to_internal(ring, b))) for b in basis]
    r = _reduce(ring, _to_internal(ring, p), elems)
    if not r:
        return Polynomial()
    return _to_polynomial(ring, r, normalize=False)


def contains_one(gb: GroebnerBasis | Sequence[Polynomial]) -> bool:
    return any(not g.is_zero() and g.is_constant() for g in gb)


def is_member(p: Polynomial, gb: GroebnerBasis) -> bool:
    return normal_form(p, gb.basis, gb.order).is_zero()


def elimination_ideal(generators: Sequence[Polynomial], eliminate: Iterable[int],
                      budget: Budget | None = None, strategy: str = "normal",
                      gens: tuple | None = None) -> list:
    """Generators of the ideal intersected with the ring of the other variables.

    An empty list means the elimination ideal is zero.  ``[1]`` means the
    input ideal is the unit ideal.
    """
    eliminate = frozenset(eliminate)
    order = MonomialOrder(BLOCK, eliminate, gens)
    gb = groebner_basis(generators, order, budget, strategy)
    return [g for g in gb.basis if not (g.variables() & eliminate)]


def elimination_basis(generators: Sequence[Polynomial], eliminate: Iterable[int],
                      budget: Budget | None = None, strategy: str = "normal") -> GroebnerBasis:
    eliminate = frozenset(eliminate)
    return groebner_basis(generators, MonomialOrder(BLOCK, eliminate), budget, strategy)
