"""Tool catalog: hypotheses for construction steps, theses for statements.

Each tool handler emits hypothesis polynomials into the context and
registers a numeric recipe computing the same variables in floating point.
The recipes are replayed in allocation order by the numeric realizer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from ..geomodel import (
    COLLINEAR, CONCURRENT, CONCYCLIC, CONGRUENT, EQUAL, EQUAL_ANGLES, EQUATION,
    INCIDENT, PARALLEL, PERPENDICULAR, TOOLS, BinOp, Const, Construction,
    ConstructionStep, Dist2, Length, Neg, Pow, SignedArea2, Statement, validate_statement,
)
from ..polycore import AUXILIARY, Polynomial, Variable
from .algebra import (
    HALF, BisectorAlg, Circle3Alg, CircleAlg, ConicAlg, Degenerate, LineAlg, ParabolaAlg,
    PointAlg, PolygonAlg, add, collinear, concyclic, cross, d2, det, dot, fadd,
    fdist2, fdot, fnorm2, fpt, fscale, fsub, line_line, midpoint, pt, quadratic_roots,
    reflect_in_line, rot90, scale, signed_area2, sub,
)


class TranslationError(ValueError):
    pass


@dataclass
class Hypothesis:
    poly: Polynomial
    owner: str | None  # object whose construction emitted it; None = statement


@dataclass
class Recipe:
    outputs: tuple
    compute: Callable
    owner: str | None


class TranslationContext:
    """Variable allocator, emitted hypotheses and auxiliary registry."""

    def __init__(self, construction: Construction):
        self.construction = construction
        self.variables: dict[int, Variable] = {v.index: v for v in construction.variables}
        self.next_index = construction.next_index
        self.hypotheses: list[Hypothesis] = []
        self.recipes: list[Recipe] = []
        self.objects: dict = {}
        self.radicals: dict[int, int] = {}
        self.lengths: dict = {}

    def aux_var(self, owner, hint=None) -> int:
        v = Variable(self.next_index, AUXILIARY, None)
        self.variables[v.index] = v
        self.next_index += 1
        return v.index

    def emit(self, poly: Polynomial, owner) -> None:
        if not poly.is_zero():
            self.hypotheses.append(Hypothesis(poly, owner))

    def recipe(self, outputs, compute, owner) -> None:
        self.recipes.append(Recipe(tuple(outputs), compute, owner))

    def point(self, name):
        return self.objects[name].p

    def radical(self, n: int, owner) -> Polynomial:
        """Shared q with q^2 = n (n = 2 or 3)."""
        if n not in self.radicals:
            q = self.aux_var(owner, "q")
            self.radicals[n] = q
            self.emit(Polynomial.var(q) ** 2 - n, None)
            self.recipe((q,), lambda vals, rng: (math.sqrt(n),), None)
        return Polynomial.var(self.radicals[n])

    def aux_point(self, owner):
        x = self.aux_var(owner)
        y = self.aux_var(owner)
        return (x, y), pt(Polynomial.var(x), Polynomial.var(y))

    def length(self, p: str, q: str) -> Polynomial:
        key = frozenset((p, q))
        if key not in self.lengths:
            v = self.aux_var(None, "l")
            a, b = self.point(p), self.point(q)
            self.emit(Polynomial.var(v) ** 2 - d2(a, b), None)
            self.recipe((v,), lambda vals, rng: (math.sqrt(fdist2(fpt(a, vals), fpt(b, vals))),), None)
            self.lengths[key] = v
        return Polynomial.var(self.lengths[key])

    def hypotheses_for(self, names=None) -> list:
        if names is None:
            return [h.poly for h in self.hypotheses]
        return [h.poly for h in self.hypotheses if h.owner is None or h.owner in names]


# -- numeric shapes used by intersections ------------------------------------------

def _pick(rng, items):
    if not items:
        raise Degenerate("no real solution")
    return items[rng.randrange(len(items))]


def _intersect_numeric(o1, o2, vals, rng):
    lines1 = isinstance(o1, LineAlg)
    lines2 = isinstance(o2, LineAlg)
    if lines1 and lines2:
        p1, d1 = _pick(rng, o1.num_lines(vals))
        p2, d2_ = _pick(rng, o2.num_lines(vals))
        return line_line(p1, d1, p2, d2_)
    if not lines1 and lines2:
        o1, o2 = o2, o1
        lines1, lines2 = True, False
    if lines1:
        p, d = _pick(rng, o1.num_lines(vals))
        return _pick(rng, quadratic_roots(o2.num_quadratic(vals), p, d))
    c1, r1 = o1.num_circle(vals)
    c2, r2 = o2.num_circle(vals)
    return _circle_circle(c1, r1, c2, r2, rng)


def _sample_on(obj, vals, rng):
    if isinstance(obj, LineAlg):
        p, d = _pick(rng, obj.num_lines(vals))
        return fadd(p, fscale(rng.uniform(-2, 2), d))
    if isinstance(obj, CircleAlg):
        c, r2 = obj.num_circle(vals)
        phi = rng.uniform(0, 2 * math.pi)
        r = math.sqrt(r2)
        return (c[0] + r * math.cos(phi), c[1] + r * math.sin(phi))
    if isinstance(obj, ParabolaAlg):
        f, a, e = obj.num_parts(vals)
        ne = math.sqrt(fnorm2(e))
        e = fscale(1 / ne, e)
        n = (-e[1], e[0])
        fe, h = fdot(fsub(f, a), e), fdot(fsub(f, a), n)
        if abs(h) < 1e-9:
            raise Degenerate("focus on the directrix")
        s = fe + rng.uniform(-3, 3) * abs(h)
        u = ((s - fe) ** 2 + h * h) / (2 * h)
        return fadd(a, fadd(fscale(s, e), fscale(u, n)))
    if isinstance(obj, ConicAlg):
        f1, f2, k = obj.num_parts(vals)
        m = fscale(0.5, fadd(f1, f2))
        q = obj.num_quadratic(vals)
        for _ in range(50):
            phi = rng.uniform(0, math.pi)
            try:
                return _pick(rng, quadratic_roots(q, m, (math.cos(phi), math.sin(phi))))
            except Degenerate:
                continue
        raise Degenerate("no point found on the conic")
    raise Degenerate(f"cannot sample on {type(obj).__name__}")


def _tangent_circle(P, c, r2, rng):
    w = fsub(P, c)
    dd = fnorm2(w)
    if dd <= r2 * (1 + 1e-9) or r2 <= 0:
        raise Degenerate("point inside the circle")
    r = math.sqrt(r2)
    dist = math.sqrt(dd)
    alpha = math.acos(r / dist) * rng.choice((1, -1))
    ux, uy = w[0] / dist, w[1] / dist
    ca, sa = math.cos(alpha), math.sin(alpha)
    return (c[0] + r * (ca * ux - sa * uy), c[1] + r * (sa * ux + ca * uy))


def _circle_circle(c1, r1, c2, r2, rng):
    u = fsub(c2, c1)
    n2 = fnorm2(u)
    if n2 < 1e-12:
        raise Degenerate("concentric circles")
    t = (r1 - r2 + n2) / (2 * n2)
    foot = fadd(c1, fscale(t, u))
    return _pick(rng, quadratic_roots(lambda x: fdist2(x, c1) - r1, foot, (-u[1], u[0])))


# -- tool handlers -----------------------------------------------------------------

def _coords(ctx, obj):
    x, y = obj.coord_vars
    return (x.index, y.index), pt(x.poly, y.poly)


def _new_point(ctx, obj, compute, hyps):
    idx, X = _coords(ctx, obj)
    ctx.objects[obj.name] = PointAlg(*X, name=obj.name)
    ctx.recipe(idx, compute, obj.name)
    for h in hyps(X) if callable(hyps) else hyps:
        ctx.emit(h, obj.name)
    return X


def _t_point(ctx, obj, args):
    idx, X = _coords(ctx, obj)
    ctx.objects[obj.name] = PointAlg(*X, name=obj.name)
    ctx.recipe(idx, None, obj.name)  # filled by the realizer


def _t_point_on(ctx, obj, args):
    o = args[0]
    idx, X = _coords(ctx, obj)
    ctx.objects[obj.name] = PointAlg(*X, name=obj.name)
    ctx.recipe(idx, lambda vals, rng: _sample_on(o, vals, rng), obj.name)
    for h in o.member_hyps(X, ctx, obj.name):
        ctx.emit(h, obj.name)


def _t_line(ctx, obj, args):
    a, b = args
    ctx.objects[obj.name] = LineAlg(a.p, b.p)


def _t_circle(ctx, obj, args):
    o, b = args
    ctx.objects[obj.name] = CircleAlg(o.p, d2(b.p, o.p))


def _t_circle3(ctx, obj, args):
    a, b, c = args
    ctx.objects[obj.name] = Circle3Alg(a.p, b.p, c.p)


def _t_midpoint(ctx, obj, args):
    if len(args) == 2:
        a, b = args[0].p, args[1].p
    elif isinstance(args[0], CircleAlg):
        circ = args[0]
        o = circ.center(ctx)
        _new_point(ctx, obj, lambda vals, rng: fpt(o, vals), lambda X: list(sub(X, o)))
        return
    else:
        a, b = args[0].p1, args[0].p2
    _new_point(ctx, obj, lambda vals, rng: fpt(midpoint(a, b), vals),
               lambda X: [X[0] * 2 - a[0] - b[0], X[1] * 2 - a[1] - b[1]])


def _t_perp_bisector(ctx, obj, args):
    if len(args) == 2:
        a, b = args[0].p, args[1].p
    else:
        a, b = args[0].p1, args[0].p2
    m = midpoint(a, b)
    ctx.objects[obj.name] = LineAlg(m, add(m, rot90(sub(b, a))),
                                    member=lambda X: d2(X, a) - d2(X, b))


def _t_perp_line(ctx, obj, args):
    p, line = args[0].p, args[1]
    d = line.direction(ctx)
    ctx.objects[obj.name] = LineAlg(p, add(p, rot90(d)), member=lambda X: dot(d, sub(X, p)))


def _t_par_line(ctx, obj, args):
    p, line = args[0].p, args[1]
    d = line.direction(ctx)
    ctx.objects[obj.name] = LineAlg(p, add(p, d))


def _t_bisector(ctx, obj, args):
    a, b, c = (x.p for x in args)
    ctx.objects[obj.name] = BisectorAlg(a, b, c)


def _t_intersect(ctx, obj, args):
    o1, o2 = args
    if isinstance(o2, LineAlg) and not isinstance(o1, LineAlg):
        o1, o2 = o2, o1
    idx, X = _coords(ctx, obj)
    ctx.objects[obj.name] = PointAlg(*X, name=obj.name)
    ctx.recipe(idx, lambda vals, rng: _intersect_numeric(o1, o2, vals, rng), obj.name)
    for o in (o1, o2):
        for h in o.member_hyps(X, ctx, obj.name):
            ctx.emit(h, obj.name)


def _t_tangent(ctx, obj, args):
    P, conic = args[0].p, args[1]
    owner = obj.name
    tidx, T = ctx.aux_point(owner)
    if isinstance(conic, CircleAlg):
        o = conic.center(ctx)
        r2 = conic.radius2(ctx)
        ctx.emit(d2(T, o) - r2, owner)
        ctx.emit(dot(sub(T, o), sub(T, P)), owner)

        def touch(vals, rng):
            c, rr = conic.num_circle(vals)
            return _tangent_circle(fpt(P, vals), c, rr, rng)
        ctx.recipe(tidx, touch, owner)
    elif isinstance(conic, ParabolaAlg):
        didx, Td = ctx.aux_point(owner)
        d1, d2_ = conic.d1, conic.d2
        e = sub(d2_, d1)

        def touch(vals, rng):
            f, a, ev = conic.num_parts(vals)
            p = fpt(P, vals)
            # the foot of the touch point is at distance |PF| from P
            td = _pick(rng, quadratic_roots(lambda x: fdist2(x, p) - fdist2(p, f), a, ev))
            # T = td + u*n is equidistant from F and the directrix
            n = (-ev[1], ev[0])
            w = fsub(td, f)
            den = 2 * fdot(w, n)
            if abs(den) < 1e-12:
                raise Degenerate("tangent parallel to the axis")
            t = fadd(td, fscale(-fnorm2(w) / den, n))
            return t + td
        ctx.recipe(tidx + didx, touch, owner)
        # Td is the foot of T on the directrix; with it membership is quadratic
        ctx.emit(cross(e, sub(Td, d1)), owner)
        ctx.emit(dot(sub(T, Td), e), owner)
        ctx.emit(d2(T, conic.f) - d2(T, Td), owner)
        ctx.emit(d2(P, conic.f) - d2(P, Td), owner)
    elif isinstance(conic, ConicAlg):
        f1, f2 = conic.f1, conic.f2

        def touch(vals, rng):
            a, b, k = conic.num_parts(vals)
            p = fpt(P, vals)
            # mirror image of F2 in the tangent: |PF2'| = |PF2|, |F1F2'| = |k|
            g = _circle_circle(p, fdist2(p, b), a, k * k, rng)
            m = fscale(0.5, fadd(g, b))
            dirn = fsub(g, b)
            tangent_dir = (-dirn[1], dirn[0])
            return line_line(a, fsub(g, a), m, tangent_dir)
        ctx.recipe(tidx, touch, owner)
        for h in conic.member_hyps(T, ctx, owner):
            ctx.emit(h, owner)
        u = cross(sub(P, T), sub(f1, T))
        w = cross(sub(P, T), sub(f2, T))
        ctx.emit(u * u * d2(f2, T) - w * w * d2(f1, T), owner)
    else:
        raise TranslationError("Tangent is implemented for circles, parabolas, ellipses and hyperbolas")
    ctx.objects[obj.name] = LineAlg(P, T)


def _reflect_point_map(m):
    return lambda p: sub(scale(2, m), p)


def _t_reflect_point(ctx, obj, args):
    src, mobj = args
    m = mobj.p
    if isinstance(src, PointAlg):
        x = src.p
        _new_point(ctx, obj, lambda vals, rng: fpt(sub(scale(2, m), x), vals),
                   lambda X: list(sub(add(X, x), scale(2, m))))
        return
    out = src.map(_reflect_point_map(m), ctx)
    out.owner = obj.name
    ctx.objects[obj.name] = out


def _line_reflector(ctx, line, owner):
    a, b = line.points(ctx)
    e = sub(b, a)

    def f(p):
        idx, Q = ctx.aux_point(owner)

        def image(vals, rng):
            pa = fpt(a, vals)
            return reflect_in_line(fpt(p, vals), pa, fsub(fpt(b, vals), pa))
        ctx.recipe(idx, image, owner)
        ctx.emit(cross(e, sub(add(p, Q), scale(2, a))), owner)
        ctx.emit(dot(sub(Q, p), e), owner)
        return Q
    return f


def _t_reflect_line(ctx, obj, args):
    src, line = args
    a, b = line.points(ctx)
    e = sub(b, a)
    if isinstance(src, PointAlg):
        x = src.p

        def image(vals, rng):
            pa = fpt(a, vals)
            return reflect_in_line(fpt(x, vals), pa, fsub(fpt(b, vals), pa))
        _new_point(ctx, obj, image,
                   lambda X: [cross(e, sub(add(x, X), scale(2, a))), dot(sub(X, x), e)])
        return
    if isinstance(src, ConicAlg):
        raise TranslationError("reflecting an ellipse or hyperbola about a line is not implemented")
    out = src.map(_line_reflector(ctx, line, obj.name), ctx)
    out.owner = obj.name
    ctx.objects[obj.name] = out


def _t_reflect_circle(ctx, obj, args):
    src, circ = args
    A = circ.center(ctx)
    r2 = circ.radius2(ctx)
    if isinstance(src, PointAlg):
        x = src.p

        def image(vals, rng):
            a, rr = circ.num_circle(vals)
            w = fsub(fpt(x, vals), a)
            n2 = fnorm2(w)
            if n2 < 1e-12:
                raise Degenerate("inversion of the center")
            return fadd(a, fscale(rr / n2, w))
        dist = d2(x, A)
        _new_point(ctx, obj, image,
                   lambda X: [(x[0] - A[0]) * r2 - (X[0] - A[0]) * dist,
                              (x[1] - A[1]) * r2 - (X[1] - A[1]) * dist])
        return
    owner = obj.name
    C = src.center(ctx)
    rho2 = src.radius2(ctx)
    cidx, C2 = ctx.aux_point(owner)
    r2v = ctx.aux_var(owner)
    R2 = Polynomial.var(r2v)
    k = d2(C, A) - rho2
    ctx.emit((C2[0] - A[0]) * k - r2 * (C[0] - A[0]), owner)
    ctx.emit((C2[1] - A[1]) * k - r2 * (C[1] - A[1]), owner)
    ctx.emit(R2 * k * k - r2 * r2 * rho2, owner)

    def image(vals, rng):
        a, rr = circ.num_circle(vals)
        c, pp = src.num_circle(vals)
        kk = fdist2(c, a) - pp
        if abs(kk) < 1e-9 * (fdist2(c, a) + pp):
            raise Degenerate("circle through the center of inversion")
        c2 = fadd(a, fscale(rr / kk, fsub(c, a)))
        return c2[0], c2[1], rr * rr * pp / (kk * kk)
    ctx.recipe(cidx + (r2v,), image, owner)
    out = CircleAlg(C2, R2)
    out.owner = owner
    ctx.objects[obj.name] = out


def _rotation(ctx, angle, owner):
    """cos and sin of the angle as polynomials (possibly in a radical q)."""
    table = {0: (1, 0), 90: (0, 1), 180: (-1, 0), -90: (0, -1), -180: (-1, 0)}
    if angle in table:
        c, s = table[angle]
        return Polynomial.constant(c), Polynomial.constant(s)
    sgn = 1 if angle > 0 else -1
    a = abs(angle)
    if a == 45:
        q = ctx.radical(2, owner) * HALF
        return q, q * sgn
    q = ctx.radical(3, owner) * HALF
    h = Polynomial.constant(HALF)
    if a == 30:
        return q, h * sgn
    return h, q * sgn


def _t_rotate(ctx, obj, args):
    src, angle, center = args
    x, o = src.p, center.p
    c, s = _rotation(ctx, angle, obj.name)
    w = sub(x, o)
    img = add(o, (c * w[0] - s * w[1], s * w[0] + c * w[1]))
    rad = math.radians(angle)

    def rotate(vals, rng):
        ov = fpt(o, vals)
        wv = fsub(fpt(x, vals), ov)
        cr, sr = math.cos(rad), math.sin(rad)
        return (ov[0] + cr * wv[0] - sr * wv[1], ov[1] + sr * wv[0] + cr * wv[1])
    _new_point(ctx, obj, rotate, lambda X: list(sub(X, img)))


def _t_translate(ctx, obj, args):
    src, vec = args
    img = add(src.p, sub(vec.p2, vec.p1))
    _new_point(ctx, obj, lambda vals, rng: fpt(img, vals), lambda X: list(sub(X, img)))


def _t_parabola(ctx, obj, args):
    f, line = args
    a, b = line.points(ctx)
    ctx.objects[obj.name] = ParabolaAlg(f.p, a, b)


def _conic(sign):
    def handler(ctx, obj, args):
        f1, f2, c = (x.p for x in args)
        owner = obj.name
        l1 = ctx.aux_var(owner, "l")
        l2 = ctx.aux_var(owner, "l")
        ctx.emit(Polynomial.var(l1) ** 2 - d2(f1, c), owner)
        ctx.emit(Polynomial.var(l2) ** 2 - d2(c, f2), owner)

        def lengths(vals, rng):
            cv = fpt(c, vals)
            return (math.sqrt(fdist2(fpt(f1, vals), cv)), sign * math.sqrt(fdist2(cv, fpt(f2, vals))))
        ctx.recipe((l1, l2), lengths, owner)
        ctx.objects[obj.name] = ConicAlg(f1, f2, c, l1, l2, sign)
    return handler


def _t_polygon(ctx, obj, args):
    ctx.objects[obj.name] = PolygonAlg([a.p for a in args])


HANDLERS = {
    "Point": _t_point,
    "PointOn": _t_point_on,
    "Line": _t_line,
    "Segment": _t_line,
    "Ray": _t_line,
    "Vector": _t_line,
    "Circle": _t_circle,
    "Circle3": _t_circle3,
    "Midpoint": _t_midpoint,
    "PerpBisector": _t_perp_bisector,
    "PerpLine": _t_perp_line,
    "ParLine": _t_par_line,
    "AngularBisector": _t_bisector,
    "Intersect": _t_intersect,
    "Tangent": _t_tangent,
    "ReflectPoint": _t_reflect_point,
    "ReflectLine": _t_reflect_line,
    "ReflectCircle": _t_reflect_circle,
    "Rotate": _t_rotate,
    "Translate": _t_translate,
    "Parabola": _t_parabola,
    "Ellipse": _conic(1),
    "Hyperbola": _conic(-1),
    "Polygon": _t_polygon,
}

assert set(HANDLERS) == set(TOOLS)


def translate_step(step: ConstructionStep, ctx: TranslationContext) -> list:
    """Translate one step; returns the hypotheses it emitted."""
    handler = HANDLERS.get(step.tool)
    if handler is None:
        raise TranslationError(f"tool {step.tool} is not implemented; catalog: {', '.join(HANDLERS)}")
    before = len(ctx.hypotheses)
    args = [ctx.objects[a] if isinstance(a, str) else a for a in step.inputs]
    handler(ctx, step.output, args)
    obj = ctx.objects.get(step.output.name)
    if obj is not None and getattr(obj, "owner", None) is None and not isinstance(obj, PointAlg):
        obj.owner = step.output.name
    return [h.poly for h in ctx.hypotheses[before:]]


def translate(construction: Construction) -> TranslationContext:
    ctx = TranslationContext(construction)
    for step in construction.steps:
        translate_step(step, ctx)
    return ctx


# -- statements ----------------------------------------------------------------------

def _line_rows(ctx, line):
    (x1, y1), (x2, y2) = line.points(ctx)
    return [y2 - y1, x1 - x2, x2 * y1 - x1 * y2]


def _formula(ctx, node) -> Polynomial:
    if isinstance(node, Const):
        return Polynomial.constant(node.value)
    if isinstance(node, Dist2):
        return d2(ctx.point(node.p), ctx.point(node.q))
    if isinstance(node, Length):
        return ctx.length(node.p, node.q)
    if isinstance(node, SignedArea2):
        if len(node.points) == 1:
            return signed_area2(ctx.objects[node.points[0]].vertices)
        return signed_area2([ctx.point(n) for n in node.points])
    if isinstance(node, BinOp):
        a, b = _formula(ctx, node.left), _formula(ctx, node.right)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        raise TranslationError(f"unknown operator {node.op}")
    if isinstance(node, Neg):
        return -_formula(ctx, node.arg)
    if isinstance(node, Pow):
        return _formula(ctx, node.base) ** node.exponent
    raise TranslationError(f"unknown formula node {node!r}")


def translate_statement(s: Statement, ctx: TranslationContext) -> list:
    """Thesis polynomials; the statement holds iff all of them vanish."""
    validate_statement(ctx.construction, s)
    o = ctx.objects
    k, a = s.kind, s.args
    if k == COLLINEAR:
        return [collinear(*(ctx.point(n) for n in a))]
    if k == CONCURRENT:
        return [det([_line_rows(ctx, o[n]) for n in a])]
    if k == CONCYCLIC:
        return [concyclic(*(ctx.point(n) for n in a))]
    if k == CONGRUENT:
        s1, s2 = o[a[0]], o[a[1]]
        return [d2(s1.p1, s1.p2) - d2(s2.p1, s2.p2)]
    if k == EQUAL:
        return list(sub(ctx.point(a[0]), ctx.point(a[1])))
    if k == PARALLEL:
        return [cross(o[a[0]].direction(ctx), o[a[1]].direction(ctx))]
    if k == PERPENDICULAR:
        return [dot(o[a[0]].direction(ctx), o[a[1]].direction(ctx))]
    if k == INCIDENT:
        return [o[a[1]].thesis(ctx.point(a[0]), ctx)]
    if k == EQUAL_ANGLES:
        A, B, C, D, E, F = (ctx.point(n) for n in a)
        u, v, u2, v2 = sub(A, B), sub(C, B), sub(D, E), sub(F, E)
        return [cross(u, v) * dot(u2, v2) - cross(u2, v2) * dot(u, v)]
    if k == EQUATION:
        return [_formula(ctx, a[0]) - _formula(ctx, a[1])]
    raise TranslationError(f"unknown statement {k}")


__all__ = [
    "Hypothesis", "Recipe", "TranslationContext", "TranslationError", "translate",
    "translate_statement", "translate_step",
]
