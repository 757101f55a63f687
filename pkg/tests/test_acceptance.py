"""Acceptance criteria 1-6.  Each test prints one PASS/FAIL line.

The lines are also repeated in the terminal summary (see conftest).
"""

import random
import time

from geoprover.cli import CORRECT, INCONCLUSIVE, INCORRECT, TIMEOUT
from geoprover.dsl import parse_construction, parse_file
from geoprover.geomodel import TOOLS
from geoprover.groebner import elimination_ideal, groebner_basis, is_member
from geoprover.polycore import MonomialOrder, Polynomial, divide_exact, monomial
from geoprover.prover import TRUE, ProofTask, ProverConfig, prove
from geoprover.translate import conic_eliminant, realize_values, residual, translate, \
    translate_statement

from .conftest import CORPUS

RESULTS = []

# topics of the classroom list and the corpus files that cover them
CLASSROOM = {
    "Pythagorean theorem": ["pythagoras"],
    "intercept theorem": ["intercept"],
    "geometric mean theorem": ["geometric_mean"],
    "cathetus theorem": ["cathetus"],
    "Thales": ["thales"],
    "medians concurrent": ["medians"],
    "bisector pair": ["bisector_pair"],
    "altitudes concurrent": ["altitudes"],
    "Euler line": ["euler_line"],
    "midline": ["midline", "midline_length"],
    "Varignon": ["varignon", "varignon_area"],
    "nine-point circle": ["nine_point_circle"],
    "Simson line": ["simson"],
    "angle bisector theorem": ["angle_bisector_theorem"],
    "reflection": ["reflect_point_line", "reflect_line_isometry", "reflect_point_circle"],
    "rotation": ["rotation_90", "rotation_60_equilateral", "rotation_45_twice"],
    "translation": ["translation_parallel", "translation_isometry"],
    "Ceva": ["ceva"],
    "Menelaus": ["menelaus"],
    "Desargues": ["desargues"],
    "Pappus": ["pappus"],
    "parabola tangent": ["parabola_tangent_vertex", "parabola_focus_directrix"],
    "circle tangent": ["circle_tangent", "circle_tangent_lengths"],
    "Pascal for ellipse and hyperbola": ["pascal_conic"],
}


def report(n, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}"
    print(line)
    RESULTS.append(line)
    return ok


# 1 -------------------------------------------------------------------------------

def test_criterion_1_inversion():
    c, s, mode = parse_file(CORPUS / "inversion.geo")
    start = time.perf_counter()
    r = prove(ProofTask(c, s, ProverConfig(details=mode == "ProveDetails")))
    seconds = time.perf_counter() - start
    got = {str(x) for x in r.ndg}
    want = {"AreCollinear[A,B,C]", "AreEqual[A,B]"}
    ok = r.verdict == TRUE and got == want and seconds <= 5
    assert report(1, ok, f"inversion {r.verdict} NDG={sorted(got)} in {seconds:.2f} s (limit 5 s)")


# 2 -------------------------------------------------------------------------------

def test_criterion_2_conic_eliminant():
    start = time.perf_counter()
    c, _, _ = parse_construction("A = Point()\nB = Point()\nC = Point()\nP = Point()\n"
                                 "e = Ellipse(A, B, C)\nProve(AreEqual(A, B))")
    ctx = translate(c)
    conic = ctx.objects["e"]
    hyps = [h.poly for h in ctx.hypotheses] + conic.member_hyps(ctx.objects["P"].p, ctx, "e")
    lengths = sorted(set().union(*(h.variables() for h in hyps)) - set(range(1, 9)))
    assert len(lengths) == 4
    # replace each squared distance by the square of a symbolic length
    sym = [Polynomial.var(20 + i) for i in range(4)]
    abstract = []
    k = 0
    for h in hyps:
        if h.total_degree() == 2:
            (lv,) = [v for v in h.variables() if v in lengths]
            abstract.append(Polynomial.var(lv) ** 2 - sym[k] ** 2)
            k += 1
        else:
            abstract.append(h)
    E = elimination_ideal(abstract, set(lengths))
    assert len(E) == 1
    g = E[0]
    ac, cb, ap, pb = sym
    product = Polynomial.constant(1)
    each = True
    for s1 in (1, -1):
        for s2 in (1, -1):
            for s3 in (1, -1):
                f = ac + s1 * cb + s2 * ap + s3 * pb
                each = each and divide_exact(g, f) is not None
                product = product * f
    quotient = divide_exact(g, product)
    whole = quotient is not None and quotient.is_constant()
    # the translator's cached form agrees with the computed one
    cached = conic_eliminant(ac * ac, cb * cb, ap * ap, pb * pb)
    same = divide_exact(g, cached) is not None and divide_exact(g, cached).is_constant()
    seconds = time.perf_counter() - start
    ok = each and whole and same and seconds <= 1
    assert report(2, ok, f"each of 8 factors divides: {each}, product divides: {whole}, "
                         f"cached form matches: {same}, {seconds:.3f} s (limit 1 s)")


# 3 -------------------------------------------------------------------------------

def test_criterion_3_corpus(manifest, corpus_records):
    records = corpus_records
    n = len(records)
    total_ms = sum(r.ms for r in records)
    counts = {k: sum(1 for r in records if r.outcome == k)
              for k in (CORRECT, INCORRECT, INCONCLUSIVE, TIMEOUT)}
    controls = sum(1 for r in records if r.expected == "FALSE")
    theorems = n - controls
    names = {r.name for r in records}
    missing = [t for t, files in CLASSROOM.items() if not set(files) <= names]
    ok = (theorems >= 40 and controls >= 5 and not missing and counts[INCORRECT] == 0
          and counts[CORRECT] >= 0.9 * n and total_ms <= 600_000
          and set(manifest) == names)
    assert report(3, ok, f"{theorems} theorems + {controls} false controls; "
                         f"correct={counts[CORRECT]} incorrect={counts[INCORRECT]} "
                         f"inconclusive={counts[INCONCLUSIVE] + counts[TIMEOUT]} "
                         f"({100 * counts[CORRECT] / n:.1f}% correct, need 90%), "
                         f"total {total_ms / 1000:.1f} s (limit 600 s), "
                         f"classroom topics missing: {missing or 'none'}")


# 4 -------------------------------------------------------------------------------

def random_poly(rng, nvars, max_deg, max_terms=4):
    p = Polynomial()
    for _ in range(rng.randint(1, max_terms)):
        exps = {}
        left = rng.randint(0, max_deg)
        for v in rng.sample(range(1, nvars + 1), nvars):
            e = rng.randint(0, left)
            exps[v] = e
            left -= e
        p = p + Polynomial({monomial(exps): rng.randint(-9, 9)})
    return p


def test_criterion_4_groebner_oracle():
    x, y = Polynomial.var(1), Polynomial.var(2)
    lex = MonomialOrder.lex(1, 2)
    hand = [
        set(groebner_basis([x * x - y, x * y - 1], lex).basis) == {x - y * y, y ** 3 - 1},
        elimination_ideal([x * x - y, x], {1}) == [y],
        groebner_basis([x, 1 - x], lex).basis == (Polynomial.constant(1),),
    ]
    rng = random.Random(4)
    members = 0
    trials = 0
    while trials < 100:
        nvars = rng.randint(1, 3)
        gens = [random_poly(rng, nvars, 3) for _ in range(rng.randint(1, 3))]
        gens = [g for g in gens if not g.is_zero()]
        if not gens:
            continue
        trials += 1
        order = rng.choice([MonomialOrder.lex(*range(1, nvars + 1)),
                            MonomialOrder.degrevlex(*range(1, nvars + 1))])
        gb = groebner_basis(gens, order)
        combo = Polynomial()
        for g in gens:
            combo = combo + random_poly(rng, nvars, 2) * g
        members += is_member(combo, gb)
    ok = all(hand) and members == 100
    assert report(4, ok, f"hand cases {sum(hand)}/3 exact, random memberships {members}/100")


# 5 -------------------------------------------------------------------------------

# every tool in every signature, each on top of a few free points
TOOL_CASES = {
    "Point": ["E = Point()"],
    "PointOn": ["l = Line(A, B)\nX = PointOn(l)", "k = Circle(A, B)\nX = PointOn(k)",
                "s = Segment(A, B)\nX = PointOn(s)",
                "d = Line(B, C)\np = Parabola(A, d)\nX = PointOn(p)",
                "e = Ellipse(A, B, C)\nX = PointOn(e)", "h = Hyperbola(A, B, C)\nX = PointOn(h)"],
    "Line": ["l = Line(A, B)"],
    "Segment": ["s = Segment(A, B)"],
    "Ray": ["r = Ray(A, B)\nX = PointOn(r)"],
    "Vector": ["u = Vector(A, B)\nX = PointOn(u)"],
    "Circle": ["k = Circle(A, B)"],
    "Circle3": ["k = Circle3(A, B, C)\nX = PointOn(k)"],
    "Midpoint": ["M = Midpoint(A, B)", "s = Segment(A, B)\nM = Midpoint(s)",
                 "k = Circle3(A, B, C)\nM = Midpoint(k)"],
    "PerpBisector": ["l = PerpBisector(A, B)\nX = PointOn(l)",
                     "s = Segment(A, B)\nl = PerpBisector(s)\nX = PointOn(l)"],
    "PerpLine": ["l = Line(A, B)\nm = PerpLine(C, l)\nX = PointOn(m)"],
    "ParLine": ["l = Line(A, B)\nm = ParLine(C, l)\nX = PointOn(m)"],
    "AngularBisector": ["l = AngularBisector(A, B, C)\nX = PointOn(l)"],
    "Intersect": ["l = Line(A, B)\nm = Line(C, D)\nX = Intersect(l, m)",
                  "k = Circle(A, B)\nl = Line(A, C)\nX = Intersect(k, l)",
                  "k = Circle(A, B)\nm = Circle(B, A)\nX = Intersect(k, m)",
                  "l = Line(C, D)\np = Parabola(A, l)\nm = Line(A, B)\nX = Intersect(m, p)",
                  "e = Ellipse(A, B, C)\nm = Line(A, D)\nX = Intersect(m, e)"],
    "Tangent": ["k = Circle(A, B)\nt = Tangent(C, k)\nX = PointOn(t)",
                "l = Line(C, D)\np = Parabola(A, l)\nX = PointOn(p)\nt = Tangent(X, p)\n"
                "Y = PointOn(t)",
                "e = Ellipse(A, B, C)\nt = Tangent(D, e)\nX = PointOn(t)"],
    "ReflectPoint": ["X = ReflectPoint(A, B)", "l = Line(A, B)\nm = ReflectPoint(l, C)\n"
                     "X = PointOn(m)", "k = Circle(A, B)\nm = ReflectPoint(k, C)\nX = PointOn(m)"],
    "ReflectLine": ["l = Line(A, B)\nX = ReflectLine(C, l)",
                    "l = Line(A, B)\nm = Line(C, D)\nn = ReflectLine(m, l)\nX = PointOn(n)",
                    "l = Line(A, B)\nk = Circle(C, D)\nn = ReflectLine(k, l)\nX = PointOn(n)",
                    "l = Line(A, B)\nd = Line(C, D)\np = Parabola(A, d)\nq = ReflectLine(p, l)\n"
                    "X = PointOn(q)"],
    "ReflectCircle": ["k = Circle(A, B)\nX = ReflectCircle(C, k)",
                      "k = Circle(A, B)\nm = Circle(C, D)\nn = ReflectCircle(m, k)\n"
                      "X = PointOn(n)"],
    "Rotate": [f"X = Rotate(A, {a}, B)" for a in (0, 30, -30, 45, -45, 60, -60, 90, -90, 180, -180)],
    "Translate": ["u = Vector(A, B)\nX = Translate(C, u)"],
    "Parabola": ["l = Line(B, C)\np = Parabola(A, l)\nX = PointOn(p)"],
    "Ellipse": ["e = Ellipse(A, B, C)\nX = PointOn(e)"],
    "Hyperbola": ["h = Hyperbola(A, B, C)\nX = PointOn(h)"],
    "Polygon": ["q = Polygon(A, B, C, D)"],
}

BASE = "A = Point()\nB = Point()\nC = Point()\nD = Point()\n"
TOOL_SAMPLES = 100
THESIS_SAMPLES = 50


def tool_residuals():
    """Worst hypothesis residual per tool over TOOL_SAMPLES realizations of each case."""
    worst = {}
    for tool, cases in TOOL_CASES.items():
        w = 0.0
        for case in cases:
            c, _, _ = parse_construction(BASE + case + "\nProve(AreEqual(A, B))")
            ctx = translate(c)
            hyps = [h.poly for h in ctx.hypotheses]
            for seed in range(TOOL_SAMPLES):
                vals, _ = realize_values(ctx, seed, tol=float("inf"))
                w = max([w] + [residual(h, vals) for h in hyps])
        worst[tool] = w
    return worst


def thesis_residuals(records):
    """Worst thesis residual per TRUE theorem over NDG-respecting samples."""
    worst = {}
    for r in records:
        if r.obtained != TRUE:
            continue
        c, s, _ = parse_file(CORPUS / f"{r.name}.geo")
        result = prove(ProofTask(c, s, ProverConfig(details=True)))
        assert result.verdict == TRUE, r.name
        fixed = {1: 0, 2: 0}
        if result.stats.get("rotated"):
            fixed[4] = 0
        ndg = [x.polynomial for x in result.ndg]
        ctx = translate(c)
        theses = [t for t in translate_statement(s, ctx) if not t.is_zero()]

        def respects(vals):
            return all(residual(p, vals) > 1e-6 for p in ndg)
        w = 0.0
        for seed in range(THESIS_SAMPLES):
            vals, _ = realize_values(ctx, seed, fixed=fixed, accept=respects, tol=float("inf"))
            w = max([w] + [residual(t, vals) for t in theses])
        worst[r.name] = w
    return worst


def test_criterion_5_numeric_sweep(corpus_records):
    tools = tool_residuals()
    theses = thesis_residuals(corpus_records)
    bad_tools = {t: w for t, w in tools.items() if w > 1e-9}
    bad_theses = {n: w for n, w in theses.items() if w > 1e-6}
    ok = set(tools) == set(TOOLS) and not bad_tools and not bad_theses
    assert report(5, ok, f"{len(tools)} tools x {TOOL_SAMPLES} realizations, worst hypothesis "
                         f"residual {max(tools.values()):.1e} (limit 1e-9); {len(theses)} TRUE "
                         f"theorems x {THESIS_SAMPLES} samples, worst thesis residual "
                         f"{max(theses.values()):.1e} (limit 1e-6); "
                         f"failing: {sorted(bad_tools) + sorted(bad_theses) or 'none'}")


# 6 -------------------------------------------------------------------------------

def test_criterion_6_tiny_budget(corpus_records_tiny):
    records = corpus_records_tiny
    wrong = [r.name for r in records if r.outcome == INCORRECT]
    correct = sum(1 for r in records if r.outcome == CORRECT)
    ok = not wrong
    assert report(6, ok, f"timeout 1 s: {correct} correct, {len(records) - correct - len(wrong)} "
                         f"inconclusive, incorrect: {wrong or 'none'}")
