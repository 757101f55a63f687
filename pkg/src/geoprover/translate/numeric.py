"""Numeric realization of constructions (the consistency oracle).

Free coordinates get random small rationals; every other variable is
computed by the recipe its tool registered.  A sample is accepted only if
every hypothesis vanishes up to a relative tolerance.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Callable, Mapping

from ..geomodel import Construction
from ..polycore import evaluate_float
from .algebra import Degenerate, fdist2
from .catalog import TranslationContext, translate

RESIDUAL_TOL = 1e-9
MAX_RETRIES = 100


class RealizationError(RuntimeError):
    pass


def small_rational(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-12, 12), rng.choice((1, 2, 3)))


def residual(poly, vals) -> float:
    """|p(x)| relative to the coefficient magnitude at the scale of x.

    The scale is sum |c_m| * R^deg(m) with R = max(1, max |x_i|); unlike the
    sum of absolute term values it stays meaningful when most terms vanish
    exactly and only rounding noise is left.
    """
    value, _ = evaluate_float(poly, vals)
    if value == 0.0:
        return 0.0
    R = max([1.0] + [abs(vals[v]) for v in poly.variables()])
    size = sum(abs(float(c)) * R ** sum(e for _, e in m) for m, c in poly.terms.items())
    return abs(value) / size


def _attempt(ctx: TranslationContext, rng, fixed, exact) -> dict:
    vals: dict[int, float] = {}
    free_points = []
    for r in ctx.recipes:
        if r.compute is None:
            coords = []
            for i in r.outputs:
                q = Fraction(fixed[i]) if i in fixed else small_rational(rng)
                exact[i] = q
                vals[i] = float(q)
                coords.append(vals[i])
            free_points.append(tuple(coords))
            continue
        out = r.compute(vals, rng)
        for i, x in zip(r.outputs, out):
            vals[i] = float(x)
    for i, p in enumerate(free_points):
        for q in free_points[:i]:
            if fdist2(p, q) < 1e-6:
                raise Degenerate("coincident free points")
    return vals


def realize_values(ctx: TranslationContext, seed: int = 0, fixed: Mapping[int, object] | None = None,
                   accept: Callable | None = None, retries: int = MAX_RETRIES,
                   tol: float = RESIDUAL_TOL, hypotheses=None) -> tuple:
    """Float values for every allocated variable plus exact free values.

    ``accept`` may reject a sample (e.g. one violating non-degeneracy
    conditions); rejected samples are retried like degenerate ones.
    """
    fixed = dict(fixed or {})
    hyps = [h.poly for h in ctx.hypotheses] if hypotheses is None else hypotheses
    last = "no attempt"
    for attempt in range(retries + 1):
        rng = random.Random(f"{seed}:{attempt}")
        exact: dict[int, Fraction] = {}
        try:
            vals = _attempt(ctx, rng, fixed, exact)
        except (Degenerate, ZeroDivisionError, ValueError, OverflowError) as exc:
            last = str(exc)
            continue
        bad = [h for h in hyps if residual(h, vals) > tol]
        if bad:
            last = f"hypothesis residual {residual(bad[0], vals):.3g}"
            continue
        if accept is not None and not accept(vals):
            last = "sample rejected"
            continue
        return vals, exact
    raise RealizationError(f"no valid sample after {retries} retries ({last})")


def numeric_realize(construction: Construction, seed: int = 0,
                    fixed: Mapping[int, object] | None = None) -> dict:
    """Map Variable -> rational for a random valid instance of the construction.

    Free coordinates are exact small rationals; dependent and auxiliary
    values are the exact rationals of the computed floats.
    """
    ctx = translate(construction)
    vals, exact = realize_values(ctx, seed, fixed)
    out = {}
    for i, v in ctx.variables.items():
        if i in vals:
            out[v] = exact.get(i, Fraction(vals[i]))
    return out
