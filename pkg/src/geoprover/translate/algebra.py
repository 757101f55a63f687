"""Polynomial points and the algebraic shapes of constructed objects.

A point is a pair of polynomials.  Objects keep the points they were built
from and know their own membership equation.  Some objects allocate
auxiliary variables lazily (circumcenter, bisector direction) so that
constructions which never need them keep a small variable count.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import permutations

from ..polycore import Polynomial, evaluate_float

HALF = Fraction(1, 2)


class Degenerate(Exception):
    """Raised by numeric constructors on degenerate samples."""


# -- polynomial point helpers --------------------------------------------------

def pt(x, y) -> tuple:
    return (Polynomial.coerce(x), Polynomial.coerce(y))


def add(p, q):
    return (p[0] + q[0], p[1] + q[1])


def sub(p, q):
    return (p[0] - q[0], p[1] - q[1])


def scale(k, p):
    return (p[0] * k, p[1] * k)


def rot90(p):
    return (-p[1], p[0])


def cross(u, w):
    return u[0] * w[1] - u[1] * w[0]


def dot(u, w):
    return u[0] * w[0] + u[1] * w[1]


def d2(p, q):
    return dot(sub(p, q), sub(p, q))


def midpoint(p, q):
    return scale(HALF, add(p, q))


def det(rows) -> Polynomial:
    """Leibniz expansion; fine for the 3x3 and 4x4 matrices used here."""
    n = len(rows)
    total = Polynomial()
    for perm in permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = Polynomial.constant(-1 if inv % 2 else 1)
        for i, j in enumerate(perm):
            term = term * rows[i][j]
            if term.is_zero():
                break
        total = total + term
    return total


def collinear(a, b, c) -> Polynomial:
    return cross(sub(b, a), sub(c, a))


def concyclic(a, b, c, d) -> Polynomial:
    one = Polynomial.constant(1)
    return det([[dot(p, p), p[0], p[1], one] for p in (a, b, c, d)])


# -- float helpers -------------------------------------------------------------

def fval(p: Polynomial, vals) -> float:
    return evaluate_float(p, vals)[0]


def fpt(p, vals) -> tuple:
    return (fval(p[0], vals), fval(p[1], vals))


def fsub(p, q):
    return (p[0] - q[0], p[1] - q[1])


def fadd(p, q):
    return (p[0] + q[0], p[1] + q[1])


def fscale(k, p):
    return (k * p[0], k * p[1])


def fdot(u, w):
    return u[0] * w[0] + u[1] * w[1]


def fcross(u, w):
    return u[0] * w[1] - u[1] * w[0]


def fnorm2(u):
    return u[0] * u[0] + u[1] * u[1]


def fdist2(p, q):
    return fnorm2(fsub(p, q))


def reflect_in_line(x, p, d):
    """Mirror image of point x in the line through p with direction d."""
    n2 = fnorm2(d)
    if n2 < 1e-18:
        raise Degenerate("reflection in a degenerate line")
    w = fsub(x, p)
    foot = fadd(p, fscale(fdot(w, d) / n2, d))
    return fsub(fscale(2, foot), x)


def line_line(p1, d1, p2, d2_):
    den = fcross(d1, d2_)
    if abs(den) < 1e-9 * math.sqrt(fnorm2(d1) * fnorm2(d2_)):
        raise Degenerate("parallel lines")
    t = fcross(fsub(p2, p1), d2_) / den
    return fadd(p1, fscale(t, d1))


def quadratic_roots(f, p, d) -> list:
    """Points p + t*d where the quadratic function f vanishes."""
    c = f(p)
    fp = f(fadd(p, d))
    fm = f(fsub(p, d))
    a = (fp + fm) / 2 - c
    b = (fp - fm) / 2
    if abs(a) < 1e-12 * (abs(b) + abs(c) + 1):
        if abs(b) < 1e-12:
            raise Degenerate("line does not meet the curve")
        return [fadd(p, fscale(-c / b, d))]
    disc = b * b - 4 * a * c
    if disc < 0:
        raise Degenerate("no real intersection")
    s = math.sqrt(disc)
    # numerically stable pair of roots
    q = -(b + math.copysign(s, b)) / 2
    roots = [q / a] + ([c / q] if q != 0 else [])
    return [fadd(p, fscale(t, d)) for t in roots]


def circle_points(center, r2, p, d) -> list:
    return quadratic_roots(lambda x: fdist2(x, center) - r2, p, d)


# -- objects -------------------------------------------------------------------

class Shape:
    owner: str | None = None

    def membership(self, X, ctx) -> Polynomial:
        raise NotImplementedError

    def thesis(self, X, ctx) -> Polynomial:
        return self.membership(X, ctx)

    def member_hyps(self, X, ctx, owner) -> list:
        """Hypotheses placing X on the object (may allocate auxiliaries)."""
        return [self.membership(X, ctx)]


class PointAlg:
    def __init__(self, x, y, name=None):
        self.p = pt(x, y)
        self.name = name

    def num(self, vals):
        return fpt(self.p, vals)


class LineAlg(Shape):
    def __init__(self, p1, p2, member=None):
        self.p1 = p1
        self.p2 = p2
        self.member = member

    def points(self, ctx):
        return self.p1, self.p2

    def direction(self, ctx):
        a, b = self.points(ctx)
        return sub(b, a)

    def membership(self, X, ctx):
        if self.member is not None:
            return self.member(X)
        return collinear(self.p1, self.p2, X)

    def num_lines(self, vals) -> list:
        a = fpt(self.p1, vals)
        b = fpt(self.p2, vals)
        d = fsub(b, a)
        if fnorm2(d) < 1e-12:
            raise Degenerate("line through coincident points")
        return [(a, d)]

    def map(self, f, ctx):
        return LineAlg(f(self.p1), f(self.p2))


class BisectorAlg(LineAlg):
    """Internal and external bisector of the angle ABC, as one curve."""

    def __init__(self, a, b, c):
        self.a, self.b, self.c = a, b, c
        self.member = None
        self._w = None

    def membership(self, X, ctx):
        a, b, c = self.a, self.b, self.c
        u = cross(sub(X, b), sub(a, b))
        w = cross(sub(X, b), sub(c, b))
        return u * u * d2(c, b) - w * w * d2(a, b)

    def points(self, ctx):
        if self._w is None:
            la = ctx.aux_var(self.owner, "l")
            lc = ctx.aux_var(self.owner, "l")
            La, Lc = Polynomial.var(la), Polynomial.var(lc)
            ctx.emit(La * La - d2(self.b, self.a), self.owner)
            ctx.emit(Lc * Lc - d2(self.b, self.c), self.owner)
            self._w = add(self.b, add(scale(Lc, sub(self.a, self.b)), scale(La, sub(self.c, self.b))))
            a, b, c = self.a, self.b, self.c

            def lengths(vals, rng):
                ra = math.sqrt(fdist2(fpt(a, vals), fpt(b, vals)))
                rc = math.sqrt(fdist2(fpt(c, vals), fpt(b, vals)))
                return ra, rng.choice((1, -1)) * rc
            ctx.recipe((la, lc), lengths, self.owner)
        return self.b, self._w

    def num_lines(self, vals):
        a, b, c = fpt(self.a, vals), fpt(self.b, vals), fpt(self.c, vals)
        ua, uc = fsub(a, b), fsub(c, b)
        na, nc = math.sqrt(fnorm2(ua)), math.sqrt(fnorm2(uc))
        if na < 1e-9 or nc < 1e-9:
            raise Degenerate("angle with a zero side")
        ua, uc = fscale(1 / na, ua), fscale(1 / nc, uc)
        out = []
        for d in (fadd(ua, uc), fsub(ua, uc)):
            if fnorm2(d) > 1e-12:
                out.append((b, d))
        return out

    def map(self, f, ctx):
        return BisectorAlg(f(self.a), f(self.b), f(self.c))


class CircleAlg(Shape):
    """Circle by center and squared radius."""

    def __init__(self, center, r2):
        self.center_pt = center
        self.r2 = r2

    def center(self, ctx):
        return self.center_pt

    def radius2(self, ctx):
        return self.r2

    def membership(self, X, ctx):
        return d2(X, self.center_pt) - self.r2

    def num_circle(self, vals):
        return fpt(self.center_pt, vals), fval(self.r2, vals)

    def num_quadratic(self, vals):
        c, r2 = self.num_circle(vals)
        return lambda x: fdist2(x, c) - r2

    def map(self, f, ctx):
        # only isometries are passed here
        return CircleAlg(f(self.center_pt), self.r2)


class Circle3Alg(CircleAlg):
    """Circle through three points; the center is allocated on demand."""

    def __init__(self, a, b, c):
        self.a, self.b, self.c = a, b, c
        self._center = None

    def membership(self, X, ctx):
        return concyclic(self.a, self.b, self.c, X)

    def center(self, ctx):
        if self._center is None:
            ox = ctx.aux_var(self.owner, "o")
            oy = ctx.aux_var(self.owner, "o")
            o = pt(Polynomial.var(ox), Polynomial.var(oy))
            ctx.emit(d2(o, self.a) - d2(o, self.b), self.owner)
            ctx.emit(d2(o, self.a) - d2(o, self.c), self.owner)
            self._center = o
            ctx.recipe((ox, oy), lambda vals, rng: self.num_circle(vals)[0], self.owner)
        return self._center

    def radius2(self, ctx):
        return d2(self.a, self.center(ctx))

    def num_circle(self, vals):
        a, b, c = fpt(self.a, vals), fpt(self.b, vals), fpt(self.c, vals)
        u, w = fsub(b, a), fsub(c, a)
        den = 2 * fcross(u, w)
        if abs(den) < 1e-9 * (fnorm2(u) + fnorm2(w)):
            raise Degenerate("circle through collinear points")
        nu, nw = fnorm2(u), fnorm2(w)
        ox = (w[1] * nu - u[1] * nw) / den
        oy = (u[0] * nw - w[0] * nu) / den
        return (a[0] + ox, a[1] + oy), ox * ox + oy * oy

    def map(self, f, ctx):
        return Circle3Alg(f(self.a), f(self.b), f(self.c))


class ParabolaAlg(Shape):
    def __init__(self, focus, d1, d2_):
        self.f = focus
        self.d1 = d1
        self.d2 = d2_

    def membership(self, X, ctx):
        e = sub(self.d2, self.d1)
        c = cross(e, sub(X, self.d1))
        return d2(X, self.f) * dot(e, e) - c * c

    def num_parts(self, vals):
        f, a, b = fpt(self.f, vals), fpt(self.d1, vals), fpt(self.d2, vals)
        e = fsub(b, a)
        if fnorm2(e) < 1e-12:
            raise Degenerate("degenerate directrix")
        return f, a, e

    def num_quadratic(self, vals):
        f, a, e = self.num_parts(vals)
        n2 = fnorm2(e)
        return lambda x: fdist2(x, f) * n2 - fcross(e, fsub(x, a)) ** 2

    def map(self, f, ctx):
        return ParabolaAlg(f(self.f), f(self.d1), f(self.d2))


_ELIMINANT = None


def conic_eliminant(ac2, cb2, ap2, pb2) -> Polynomial:
    """Product of the eight factors ac±cb±ap±pb written in squared lengths.

    The product is even in each length, so it is a polynomial in the
    squares and needs no auxiliary variables.
    """
    global _ELIMINANT
    if _ELIMINANT is None:
        a, b, c, d = (Polynomial.var(i) for i in (1, 2, 3, 4))
        prod = Polynomial.constant(1)
        for s1 in (1, -1):
            for s2 in (1, -1):
                for s3 in (1, -1):
                    prod = prod * (a + b * s1 + c * s2 + d * s3)
        _ELIMINANT = Polynomial({tuple((v, e // 2) for v, e in m): coef
                                 for m, coef in prod.terms.items()})
    return _ELIMINANT.substitute({1: ac2, 2: cb2, 3: ap2, 4: pb2})


class ConicAlg(Shape):
    """Ellipse or hyperbola from two foci and a circumpoint.

    ``l1``/``l2`` are the auxiliary lengths |F1C| and |CF2|; ``sign`` only
    steers the numeric realization (+1 ellipse, -1 hyperbola), the algebra
    cannot tell the two apart.
    """

    def __init__(self, f1, f2, c, l1, l2, sign):
        self.f1, self.f2, self.c = f1, f2, c
        self.l1, self.l2 = l1, l2
        self.sign = sign

    def member_hyps(self, X, ctx, owner):
        l3 = ctx.aux_var(owner, "l")
        l4 = ctx.aux_var(owner, "l")
        L3, L4 = Polynomial.var(l3), Polynomial.var(l4)
        L1, L2 = Polynomial.var(self.l1), Polynomial.var(self.l2)
        f1, f2 = self.f1, self.f2

        def lengths(vals, rng):
            x = fpt(X, vals)
            k = vals[self.l1] + vals[self.l2]
            r3 = math.sqrt(fdist2(fpt(f1, vals), x))
            r4 = math.sqrt(fdist2(x, fpt(f2, vals)))
            best = min(((s3 * r3, s4 * r4) for s3 in (1, -1) for s4 in (1, -1)),
                       key=lambda t: abs(t[0] + t[1] - k))
            return best
        ctx.recipe((l3, l4), lengths, owner)
        return [L3 * L3 - d2(self.f1, X), L4 * L4 - d2(X, self.f2), L1 + L2 - L3 - L4]

    def membership(self, X, ctx):
        return self.thesis(X, ctx)

    def thesis(self, X, ctx):
        return conic_eliminant(d2(self.f1, self.c), d2(self.c, self.f2),
                               d2(self.f1, X), d2(X, self.f2))

    def num_parts(self, vals):
        f1, f2 = fpt(self.f1, vals), fpt(self.f2, vals)
        k = vals[self.l1] + vals[self.l2]
        return f1, f2, k

    def num_quadratic(self, vals):
        f1, f2, k = self.num_parts(vals)
        k2 = k * k

        def q(x):
            a, b = fdist2(x, f1), fdist2(x, f2)
            return (a - b) ** 2 - 2 * k2 * (a + b) + k2 * k2
        return q

    def map(self, f, ctx):
        return ConicAlg(f(self.f1), f(self.f2), f(self.c), self.l1, self.l2, self.sign)


class PolygonAlg(Shape):
    def __init__(self, vertices):
        self.vertices = list(vertices)

    def membership(self, X, ctx):
        raise NotImplementedError("incidence with a polygon")


def signed_area2(points) -> Polynomial:
    total = Polynomial()
    n = len(points)
    for i in range(n):
        total = total + cross(points[i], points[(i + 1) % n])
    return total
