"""Decision pipeline: fix coordinates, deny the thesis, eliminate, decide.

For every thesis polynomial T the hypotheses are extended by the denial
t*T - 1 and all non-free variables are eliminated.  A nonzero elimination
ideal means T vanishes wherever its generators do not; those generators are
turned into readable non-degeneracy conditions.

Before eliminating, the hypotheses are walked in construction order and
every one that is linear in a new variable, with a coefficient in already
known variables, is solved for it (the coefficient joins the
non-degeneracy conditions).  Variables a step leaves unconstrained, such
as the second coordinate of a point on a line, become parameters.  This
decides the statement on the main component of the configuration space
and is usually far smaller than the plain elimination.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import combinations

from .geomodel import Construction, Statement, step_text, validate_statement
from .groebner import DEFAULT_MAX_PAIRS, Budget, BudgetExceeded, contains_one, elimination_ideal
from .polycore import DEPENDENT, FREE, Polynomial, coefficients_in, divide_exact, squarefree_part
from .translate import TranslationContext, translate_step, translate_statement
from .translate.algebra import collinear, d2, dot, sub

log = logging.getLogger("geoprover")

TRUE = "TRUE"
FALSE = "FALSE"
UNKNOWN = "UNKNOWN"


@dataclass
class ProverConfig:
    timeout: float | None = 60.0
    max_pairs: int = DEFAULT_MAX_PAIRS
    fix_second_point: bool = False
    recognize_ndg: bool = True
    strategy: str = "degree"  # least lcm degree first
    prune: bool = True  # drop hypotheses of objects the statement does not depend on
    linear_substitution: bool = True
    parametric: bool = True  # solve linear steps in construction order first
    details: bool = False  # non-degeneracy conditions are wanted
    retry_rotated: bool = True  # on timeout, retry with the second point on the x-axis


@dataclass
class ProofTask:
    construction: Construction
    statement: Statement
    config: ProverConfig = field(default_factory=ProverConfig)


@dataclass(frozen=True)
class NDGCondition:
    name: str | None
    polynomial: Polynomial

    def __str__(self):
        return self.name if self.name else str(self.polynomial)


@dataclass
class ProverResult:
    verdict: str
    ndg: list = field(default_factory=list)
    elapsed_ms: float = 0.0
    stats: dict = field(default_factory=dict)
    reason: str = ""
    log: list = field(default_factory=list)

    def render(self, details: bool = False) -> str:
        if self.verdict == UNKNOWN:
            return "undefined"
        word = "true" if self.verdict == TRUE else "false"
        if not details:
            return word
        if self.verdict == FALSE:
            return "{false}"
        conds = sorted(f'"{c}"' for c in self.ndg)
        if not conds:
            return "{true}"
        return "{true, {" + ", ".join(conds) + "}}"


class _Log:
    def __init__(self):
        self.lines = []

    def __call__(self, msg):
        self.lines.append(msg)
        log.debug(msg)


# -- pipeline steps ----------------------------------------------------------------

def fix_coordinates(construction: Construction, config: ProverConfig | None = None) -> dict:
    """Variable index -> 0 for the first free point (and the second point's y)."""
    config = config or ProverConfig()
    free = construction.free_points()
    subst = {}
    if free:
        x, y = free[0].coord_vars
        subst[x.index] = 0
        subst[y.index] = 0
        if config.fix_second_point and len(free) > 1:
            subst[free[1].coord_vars[1].index] = 0
    return subst


def deny_thesis(t: Polynomial, ctx: TranslationContext) -> Polynomial:
    """Rabinowitsch denial t_R*t - 1 with a fresh auxiliary t_R."""
    if t.is_zero():
        raise ValueError("zero thesis has no denial")
    v = ctx.aux_var(None, "t")
    return Polynomial.var(v) * t - 1


def _linear_pivot(g: Polynomial, candidates):
    """A variable occurring in g only as c*v with constant c, with that c."""
    terms = g.terms
    for v in sorted(g.variables() & candidates, reverse=True):
        single = ((v, 1),)
        coef = terms.get(single)
        if coef is None:
            continue
        if all(m == single or all(w != v for w, _ in m) for m in terms):
            return v, coef
    return None


def substitute_linear(gens: list, eliminate: set) -> tuple:
    """Solve generators that are linear with constant coefficient in an
    eliminable variable and substitute them away.

    The elimination ideal is unchanged: the quotient rings are isomorphic.
    Returns the new generators and the set of variables removed.
    """
    gens = [g for g in gens if not g.is_zero()]
    removed = set()
    candidates = set(eliminate)
    while True:
        best = None
        for i, g in enumerate(gens):
            piv = _linear_pivot(g, candidates)
            if piv is not None and (best is None or len(g) < len(gens[best[0]])):
                best = (i, piv[0], piv[1])
        if best is None:
            return gens, removed
        i, v, c = best
        g = gens.pop(i)
        image = -(g - Polynomial.var(v) * c) * (Fraction(1) / Fraction(c))
        gens = [h.substitute({v: image}) for h in gens]
        gens = [h for h in gens if not h.is_zero()]
        removed.add(v)
        candidates.discard(v)
        if any(h.is_constant() for h in gens):
            return [Polynomial.constant(1)], removed


def _solve_into(h: Polynomial, v: int, c: Polynomial, r: Polynomial) -> Polynomial:
    """h with v = -r/c substituted, times c^deg, stripped of factors c."""
    if v not in h.variables():
        return h
    parts = coefficients_in(h, v)
    d = max(parts)
    out = Polynomial()
    for k, hk in parts.items():
        out = out + hk * (-r) ** k * c ** (d - k)
    if not c.is_constant():
        while not out.is_zero():
            q = divide_exact(out, c)
            if q is None:
                break
            out = q
    return out if out.is_zero() else out.primitive()


def _free_pivot(hs, known: set, eliminable: set):
    """(index, v, c, r) with hs[index] = c*v + r and c over known variables."""
    best = None
    for i, h in enumerate(hs):
        for v in h.variables() & eliminable:
            if v in known or h.degree_in(v) != 1:
                continue
            parts = coefficients_in(h, v)
            c = parts[1]
            if not c.variables() <= known:
                continue
            key = (not c.is_constant(), c.total_degree(), len(c), len(h), v)
            if best is None or key < best[0]:
                best = (key, i, v, c, parts.get(0, Polynomial()))
    return None if best is None else best[1:]


MAX_TERMS = 4000  # larger substitution results abandon the reduction


class ReductionTooLarge(RuntimeError):
    pass


@dataclass
class ParametricSystem:
    generators: list  # remaining hypotheses, then the denial
    multipliers: list  # pivot coefficients assumed nonzero
    parameters: set  # non-free variables promoted to parameters
    solved: int = 0


def reduce_parametric(groups, denial: Polynomial, free: set, eliminable: set,
                      budget: Budget | None = None, max_terms: int = MAX_TERMS) -> ParametricSystem:
    """Solve the hypotheses of each step in order where they are linear.

    ``groups`` are the hypothesis lists of consecutive construction steps.
    A step is solved only if all its hypotheses can be solved for its own
    new variables with coefficients in known variables; a partly solved
    step tends to blow up and is kept as it is.  On the open set where every
    multiplier is nonzero the result has the same solutions (projected) as
    the input.  Variables a solved step leaves unconstrained are promoted
    to parameters.
    """
    known = set(free)
    seen = set(free)
    pivots = []
    remaining = []
    mult = []
    params = set()

    def solve_into(h, v, c, r):
        out = _solve_into(h, v, c, r)
        if len(out) > max_terms:
            raise ReductionTooLarge(f"substitution produced {len(out)} terms")
        if budget is not None:
            budget.check_time()
        return out

    def apply(h):
        for v, c, r in pivots:
            if h.is_zero():
                break
            h = solve_into(h, v, c, r)
        return h

    for group in groups:
        introduced = set()
        for h in group:
            introduced |= h.variables() - seen
        seen |= introduced
        hs = [g for g in (apply(h) for h in group) if not g.is_zero()]
        trial = list(hs)
        steps = []
        while trial:
            piv = _free_pivot(trial, known, eliminable & introduced)
            if piv is None:
                break
            i, v, c, r = piv
            trial.pop(i)
            steps.append((v, c, r))
            trial = [g for g in (solve_into(h, v, c, r) for h in trial) if not g.is_zero()]
        if trial and steps:
            remaining.extend(hs)  # partly linear step: keep it whole
            continue
        pivots.extend(steps)
        mult.extend(c for _, c, _ in steps if not c.is_constant())
        solved = {v for v, _, _ in pivots}
        still = set()
        for h in trial:
            still |= h.variables()
        for v in introduced - solved - still:
            if v in eliminable:
                params.add(v)
                known.add(v)
        remaining.extend(trial)
    return ParametricSystem(remaining + [apply(denial)], mult, params, len(pivots))


# -- non-degeneracy conditions ---------------------------------------------------

def _normal_key(p: Polynomial):
    return p.primitive()


def ndg_candidates(construction: Construction, subst: dict | None = None, names=None) -> list:
    """(name, squarefree polynomial) for conditions among free points."""
    subst = subst or {}
    pts = [o for o in construction.free_points() if names is None or o.name in names]
    P = {o.name: (o.coord_vars[0].poly.substitute(subst), o.coord_vars[1].poly.substitute(subst))
         for o in pts}
    raw = []
    order = [o.name for o in pts]
    for a, b in combinations(order, 2):
        raw.append((f"AreEqual[{a},{b}]", d2(P[a], P[b])))
    for a, b, c in combinations(order, 3):
        raw.append((f"AreCollinear[{a},{b},{c}]", collinear(P[a], P[b], P[c])))
    segs = list(combinations(order, 2))
    for (a, b), (c, d) in combinations(segs, 2):
        raw.append((f"ArePerpendicular[Line[{a},{b}],Line[{c},{d}]]",
                    dot(sub(P[b], P[a]), sub(P[d], P[c]))))
    out = []
    seen = set()
    for name, p in raw:
        if p.is_constant():
            continue
        q = squarefree_part(p)
        if q.is_constant() or q in seen:
            continue
        seen.add(q)
        out.append((name, q))
    return out


def recognize_condition(p: Polynomial, candidates) -> str | None:
    """Name of the candidate equal to p up to a constant factor."""
    if p.is_zero() or p.is_constant():
        return None
    key = _normal_key(p)
    for name, q in candidates:
        if _normal_key(q) == key:
            return name
    return None


def _cover(s: Polynomial, candidates):
    """Fewest candidates whose product is s up to a constant, else None."""
    dividing = [(n, q) for n, q in candidates if divide_exact(s, q) is not None]
    best = None

    def search(rest, start, chosen):
        nonlocal best
        if rest.is_constant():
            if best is None or len(chosen) < len(best):
                best = list(chosen)
            return
        if best is not None and len(chosen) + 1 >= len(best):
            return
        for i in range(start, len(dividing)):
            quo = divide_exact(rest, dividing[i][1])
            if quo is not None:
                chosen.append(i)
                search(quo, i + 1, chosen)
                chosen.pop()

    search(s, 0, [])
    if best is None:
        return None
    return [dividing[i] for i in best]


SQUAREFREE_TERMS = 200  # larger unrecognized cofactors are reported as they are


def _cheap_squarefree(g: Polynomial, candidates) -> Polynomial:
    """Squarefree part of g, dividing out candidates before any gcd.

    Eliminants are often large powers of small conditions; a gcd on the
    whole generator is far slower than trial division.
    """
    rest = g
    hits = Polynomial.constant(1)
    for _, q in candidates:
        hit = False
        while not rest.is_constant():
            quo = divide_exact(rest, q)
            if quo is None:
                break
            rest, hit = quo, True
        if hit:
            hits = hits * q
    if not hits.is_constant():
        hits = squarefree_part(hits)
    if rest.is_constant():
        return hits
    if len(rest) <= SQUAREFREE_TERMS:
        rest = squarefree_part(rest)
    return hits * rest.primitive()


def decompose(g: Polynomial, candidates) -> tuple:
    """(fully recognized, conditions) for one eliminant generator."""
    s = _cheap_squarefree(g, candidates)
    if s.is_constant():
        return True, []
    cover = _cover(s, candidates)
    if cover is not None:
        return True, [NDGCondition(n, q) for n, q in cover]
    conds = []
    rest = s
    for n, q in sorted(candidates, key=lambda c: -c[1].total_degree()):
        quo = divide_exact(rest, q)
        if quo is not None:
            conds.append(NDGCondition(n, q))
            rest = quo
    if not rest.is_constant():
        conds.append(NDGCondition(None, rest.primitive()))
    return False, conds


def extract_ndg(E, construction: Construction, subst: dict | None = None,
                names=None, candidates=None) -> list:
    """Pick the most readable generator of E and return its conditions.

    Preference: fully recognized, fewest conditions, lowest degree of the
    conditions, conditions on the earliest constructed points, generator
    index.
    """
    if candidates is None:
        candidates = ndg_candidates(construction, subst, names)
    position = {name: i for i, (name, _) in enumerate(candidates)}
    best = None
    for i, g in enumerate(E):
        if g.is_constant():
            continue
        full, conds = decompose(g, candidates)
        degree = sum(c.polynomial.total_degree() for c in conds)
        early = tuple(sorted(position.get(c.name, len(candidates)) for c in conds))
        key = (not full, len(conds), degree, early, i)
        if best is None or key < best[0]:
            best = (key, conds)
    return [] if best is None else best[1]


def factor_by_candidates(g: Polynomial, candidates) -> tuple:
    """Constant, then (factor, multiplicity) pairs found by trial division."""
    factors = []
    rest = g
    for _, q in candidates:
        k = 0
        while not rest.is_constant():
            quo = divide_exact(rest, q)
            if quo is None:
                break
            rest, k = quo, k + 1
        if k:
            factors.append((q, k))
    if not rest.is_constant():
        prim = rest.primitive()
        factors.append((prim, 1))
        rest = divide_exact(rest, prim)
    return rest.constant_value(), factors


def singular_dump(E, candidates) -> str:
    """Factored eliminant generators as nested Singular-style arrays."""
    lines = []
    for i, g in enumerate(E, 1):
        const, factors = factor_by_candidates(g, candidates)
        lines.append(f"[{i}]:")
        lines.append(" [1]:")
        lines.append(f"  _[1]={const}")
        for j, (f, _) in enumerate(factors, 2):
            lines.append(f"  _[{j}]={f}")
        lines.append(" [2]: " + ",".join(["1"] + [str(k) for _, k in factors]))
    return "\n".join(lines)


# -- the prover ----------------------------------------------------------------------

def _translate_logged(task: ProofTask, say) -> TranslationContext:
    c = task.construction
    ctx = TranslationContext(c)
    n = 0
    for step in c.steps:
        o = step.output
        if step.tool != "Point":
            say(step_text(step))
        hyps = translate_step(step, ctx)
        if o.coord_vars:
            role = "Free" if o.is_free else "Constrained"
            say(f"// {role} point {o.name}({o.coord_vars[0]},{o.coord_vars[1]})")
        if hyps:
            if n == 0:
                say("Hypotheses:")
            for h in hyps:
                n += 1
                say(f"{n}. {h}")
    say("Hypotheses have been processed.")
    return ctx


def _conjunct(gens, eliminate, budget, config) -> tuple:
    """Verdict and eliminant for one denied system."""
    if config.linear_substitution:
        gens, _ = substitute_linear(gens, eliminate)
    if any(g.is_constant() and not g.is_zero() for g in gens):
        return TRUE, [Polynomial.constant(1)]
    present = set()
    for g in gens:
        present |= g.variables()
    E = elimination_ideal(gens, present & eliminate, budget, config.strategy)
    if E:
        return TRUE, E
    return FALSE, E


def _conjunct_parametric(groups, denial, free, eliminate, budget, config, say) -> tuple:
    """Verdict, eliminant and the pivot multipliers it holds under.

    The statement is proven where every eliminant generator and every
    multiplier is nonzero.
    """
    system = reduce_parametric(groups, denial, free, eliminate, budget)
    gens = [g for g in system.generators if not g.is_zero()]
    known = free | system.parameters
    say(f"Parametric reduction: {system.solved} variables solved, "
        f"{len(system.parameters)} parameters, {len(system.multipliers)} multipliers")
    present = set()
    for g in gens:
        present |= g.variables()
    unknown = present - known
    say(f"Eliminating system in {len(present)} variables ({len(unknown)} eliminated)")
    if any(g.is_constant() for g in gens):
        E = [Polynomial.constant(1)]
    else:
        E = elimination_ideal(gens, unknown, budget, config.strategy)
    if not E:
        return FALSE, E, []
    return TRUE, E, [m.primitive() for m in system.multipliers]


def _hypothesis_groups(ctx: TranslationContext, names, subst) -> list:
    """Hypotheses in emission order, split where the owner changes."""
    groups = []
    last = object()
    for h in ctx.hypotheses:
        if names is not None and h.owner is not None and h.owner not in names:
            continue
        poly = h.poly.substitute(subst)
        if poly.is_zero():
            continue
        if h.owner != last:
            groups.append([])
            last = h.owner
        groups[-1].append(poly)
    return groups


def _sub_budget(budget: Budget, share: float) -> Budget:
    if budget.deadline is None:
        return Budget(max_pairs=budget.max_pairs)
    left = max(0.0, budget.deadline - time.monotonic())
    return Budget(max_pairs=budget.max_pairs, deadline=time.monotonic() + share * left)


def _attempt(task: ProofTask, config: ProverConfig, budget: Budget, say) -> tuple:
    """(verdict, conditions, stats, reason) for one coordinate fixing."""
    c, s = task.construction, task.statement
    ctx = _translate_logged(task, say)
    theses = translate_statement(s, ctx)
    names = c.dependencies(s.refs()) if config.prune else None
    hyps = ctx.hypotheses_for(names)
    subst = fix_coordinates(c, config)
    if subst:
        say("substitutions: {" + ", ".join(f"v{k}=0" for k in sorted(subst)) + "}")
    hyps = [h.substitute(subst) for h in hyps]
    hyps = [h for h in hyps if not h.is_zero()]
    groups = _hypothesis_groups(ctx, names, subst) if config.parametric else None
    free = {i for i, v in ctx.variables.items() if v.role == FREE}
    stats = {"conjuncts": len(theses), "hypotheses": len(hyps)}
    conditions: list[NDGCondition] = []
    verdict = TRUE
    reason = ""
    candidates = None
    try:
        for T in theses:
            T = T.substitute(subst)
            if T.is_zero():
                say("Thesis is identically zero")
                continue
            say("Thesis reductio ad absurdum (denied statement)...")
            denial = deny_thesis(T, ctx)
            gens = hyps + [denial]
            say(f"{len(gens)}. {denial}")
            used = set()
            for g in gens:
                used |= g.variables()
            eliminate = used - free
            stats["variables"] = max(stats.get("variables", 0), len(used))
            part, E, mult = None, None, []
            plain_false = None
            if config.details or not config.parametric:
                dep = sum(1 for i in used if ctx.variables[i].role == DEPENDENT)
                say(f"Eliminating system in {len(used)} variables ({dep} dependent)")
                try:
                    plain = _sub_budget(budget, 0.5) if config.parametric else budget
                    part, E = _conjunct(gens, eliminate, plain, config)
                except BudgetExceeded:
                    if not config.parametric:
                        raise
                    say("Plain elimination gave up, trying the parametric reduction")
                if part == FALSE and config.parametric:
                    plain_false = E
                    part = None  # a degenerate component may hide the generic case
            if part is None:
                try:
                    part, E, mult = _conjunct_parametric(groups, denial, free, eliminate,
                                                         budget, config, say)
                except ReductionTooLarge as exc:
                    say(f"Parametric reduction abandoned ({exc}), eliminating plainly")
                    if plain_false is not None:
                        part, E = FALSE, plain_false
                    else:
                        part, E = _conjunct(gens, eliminate, budget, config)
            budget.check_time()
            if part == FALSE:
                say("Statement is FALSE")
                verdict = FALSE
                break
            E = [] if not E or contains_one(E) else E
            if not E and not mult:
                continue
            stats["eliminant_size"] = stats.get("eliminant_size", 0) + len(E) + len(mult)
            if not config.details:
                continue
            if candidates is None:
                candidates = ndg_candidates(c, subst, names)
            say(singular_dump(E + mult, candidates))
            if config.recognize_ndg:
                found = extract_ndg(E, c, subst, names, candidates) if E else []
                for m in mult:
                    found.extend(decompose(m, candidates)[1])
            else:
                found = [NDGCondition(None, g) for g in E + mult]
            for cond in found:
                if cond not in conditions:
                    conditions.append(cond)
    except BudgetExceeded as exc:
        verdict = UNKNOWN
        reason = str(exc)
        conditions = []
        say(f"Statement is UNKNOWN ({reason})")
    if verdict != TRUE:
        conditions = []
    return verdict, conditions, stats, reason


def prove(task: ProofTask) -> ProverResult:
    """Decide the statement; budget exhaustion gives UNKNOWN, never a guess.

    With ``config.parametric`` the verdict comes from the parametric
    reduction.  When non-degeneracy conditions are wanted, the plain
    elimination is tried first with half of the remaining budget because
    its conditions involve free points only.

    If only the first free point is fixed and the budget runs out half way,
    the proof is retried with the second free point on the x-axis.  Every
    tool and statement is invariant under rotations about the origin, so
    the verdict is the same; only the conditions are stated on that slice.
    """
    start = time.perf_counter()
    config = task.config
    say = _Log()
    validate_statement(task.construction, task.statement)
    budget = Budget.seconds(config.timeout, config.max_pairs)
    retry = config.retry_rotated and not config.fix_second_point \
        and len(task.construction.free_points()) > 1
    first = _sub_budget(budget, 0.5) if retry else budget
    verdict, conditions, stats, reason = _attempt(task, config, first, say)
    if verdict == UNKNOWN and retry:
        say("Retrying with the second free point on the x-axis")
        rotated = replace(config, fix_second_point=True)
        verdict, conditions, stats, reason = _attempt(task, rotated, budget, say)
        stats["rotated"] = True
    if verdict == TRUE:
        say("Statement is GENERALLY TRUE")
    elapsed = (time.perf_counter() - start) * 1000
    say(f"Benchmarking: {round(elapsed)} ms")
    return ProverResult(verdict, conditions, elapsed, stats, reason, say.lines)
