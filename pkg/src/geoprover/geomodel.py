"""Constructions, objects, statements and variable bookkeeping."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .polycore import AUXILIARY, DEPENDENT, FREE, Variable

POINT = "Point"
LINE = "Line"
SEGMENT = "Segment"
RAY = "Ray"
VECTOR = "Vector"
CIRCLE = "Circle"
PARABOLA = "Parabola"
CONIC = "EllipseHyperbola"
POLYGON = "Polygon"
ANGLE = "angle"  # literal argument, not an object kind

LINE_LIKE = frozenset({LINE, SEGMENT, RAY, VECTOR})
CURVES = LINE_LIKE | {CIRCLE, PARABOLA, CONIC}
CONICS = frozenset({CIRCLE, PARABOLA, CONIC})

KNOWN_ANGLES = (0, 30, -30, 45, -45, 60, -60, 90, -90, 180, -180)

SAME = "same"  # output kind equals the kind of the first argument
VARIADIC = "..."

# tool -> list of (argument kinds, output kind); kinds are sets of object kinds
TOOLS = {
    "Point": [((), POINT)],
    "PointOn": [((CURVES,), POINT)],
    "Line": [(({POINT}, {POINT}), LINE)],
    "Segment": [(({POINT}, {POINT}), SEGMENT)],
    "Ray": [(({POINT}, {POINT}), RAY)],
    "Vector": [(({POINT}, {POINT}), VECTOR)],
    "Circle": [(({POINT}, {POINT}), CIRCLE)],
    "Circle3": [(({POINT}, {POINT}, {POINT}), CIRCLE)],
    "Midpoint": [(({POINT}, {POINT}), POINT), (({SEGMENT},), POINT), (({CIRCLE},), POINT)],
    "PerpBisector": [(({POINT}, {POINT}), LINE), (({SEGMENT},), LINE)],
    "PerpLine": [(({POINT}, LINE_LIKE), LINE)],
    "ParLine": [(({POINT}, LINE_LIKE), LINE)],
    "AngularBisector": [(({POINT}, {POINT}, {POINT}), LINE)],
    "Intersect": [((CURVES, CURVES), POINT)],
    "Tangent": [(({POINT}, CONICS), LINE)],
    "ReflectPoint": [(({POINT} | CURVES, {POINT}), SAME)],
    "ReflectLine": [(({POINT, CIRCLE, PARABOLA} | LINE_LIKE, LINE_LIKE), SAME)],
    "ReflectCircle": [(({POINT, CIRCLE}, {CIRCLE}), SAME)],
    "Rotate": [(({POINT}, {ANGLE}, {POINT}), POINT)],
    "Translate": [(({POINT}, {VECTOR}), POINT)],
    "Parabola": [(({POINT}, LINE_LIKE), PARABOLA)],
    "Ellipse": [(({POINT}, {POINT}, {POINT}), CONIC)],
    "Hyperbola": [(({POINT}, {POINT}, {POINT}), CONIC)],
    "Polygon": [(({POINT}, {POINT}, {POINT}, VARIADIC), POLYGON)],
}

# intersections that are translated (the rest cannot be decided properly)
INTERSECTIONS = {
    frozenset({LINE}), frozenset({LINE, CIRCLE}), frozenset({CIRCLE}),
    frozenset({LINE, PARABOLA}), frozenset({LINE, CONIC}),
}


class ConstructionError(ValueError):
    pass


@dataclass
class GeoObject:
    name: str
    kind: str
    tool: str
    args: tuple  # object names, or an int angle for Rotate
    coord_vars: tuple = ()

    @property
    def refs(self) -> tuple:
        return tuple(a for a in self.args if isinstance(a, str))

    @property
    def is_free(self) -> bool:
        return self.tool == "Point"


@dataclass(frozen=True)
class ConstructionStep:
    tool: str
    inputs: tuple
    output: GeoObject


def _line_kind(kind: str) -> str:
    return LINE if kind in LINE_LIKE else kind


class Construction:
    """Ordered tool applications with a symbol table.

    Every point gets two coordinate variables when it is appended; free
    points own free variables, all other points dependent ones.
    """

    def __init__(self):
        self.steps: list[ConstructionStep] = []
        self.symbols: dict[str, GeoObject] = {}
        self.variables: list[Variable] = []

    def __len__(self):
        return len(self.steps)

    def __getitem__(self, name: str) -> GeoObject:
        return self.symbols[name]

    def __contains__(self, name: str) -> bool:
        return name in self.symbols

    @property
    def next_index(self) -> int:
        return len(self.variables) + 1

    def _new_variable(self, role: str, name: str) -> Variable:
        v = Variable(self.next_index, role, name)
        self.variables.append(v)
        return v

    def add(self, name: str, tool: str, *inputs) -> GeoObject:
        return self.append_step(name, tool, inputs)

    def append_step(self, name: str, tool: str, inputs: Iterable = ()) -> GeoObject:
        inputs = tuple(inputs)
        if name in self.symbols:
            raise ConstructionError(f"duplicate name {name}")
        if tool not in TOOLS:
            raise ConstructionError(f"unknown tool {tool}; known tools: {', '.join(TOOLS)}")
        kinds = []
        for a in inputs:
            if isinstance(a, str):
                if a not in self.symbols:
                    raise ConstructionError(f"unknown object {a}")
                kinds.append(self.symbols[a].kind)
            elif isinstance(a, int):
                kinds.append(ANGLE)
            else:
                raise ConstructionError(f"bad argument {a!r} for {tool}")
        out_kind = match_signature(tool, kinds)
        if out_kind is None:
            raise ConstructionError(
                f"{tool} does not accept arguments ({', '.join(kinds)}); expected {signature_text(tool)}")
        if tool == "Rotate" and inputs[1] not in KNOWN_ANGLES:
            raise ConstructionError(
                f"unknown angle {inputs[1]}; known angles: {', '.join(map(str, KNOWN_ANGLES))}")
        if tool == "Intersect":
            pair = frozenset(_line_kind(k) for k in kinds)
            if pair not in INTERSECTIONS:
                raise ConstructionError(f"intersection of {kinds[0]} with {kinds[1]} is not implemented")
        if out_kind == SAME:
            out_kind = kinds[0]
        coords = ()
        if out_kind == POINT:
            role = FREE if tool == "Point" else DEPENDENT
            coords = (self._new_variable(role, None), self._new_variable(role, None))
        obj = GeoObject(name, out_kind, tool, inputs, coords)
        self.steps.append(ConstructionStep(tool, inputs, obj))
        self.symbols[name] = obj
        return obj

    def points(self) -> list[GeoObject]:
        return [s.output for s in self.steps if s.output.kind == POINT]

    def free_points(self) -> list[GeoObject]:
        return [s.output for s in self.steps if s.output.is_free]

    def classify_variables(self) -> tuple[set, set]:
        free = {v for v in self.variables if v.role == FREE}
        dep = {v for v in self.variables if v.role == DEPENDENT}
        return free, dep

    def dependencies(self, names: Iterable[str]) -> set:
        """Names of the given objects and everything they are built from."""
        seen = set()
        stack = list(names)
        while stack:
            n = stack.pop()
            if n in seen:
                continue
            seen.add(n)
            stack.extend(self.symbols[n].refs)
        return seen


def match_signature(tool: str, kinds: list) -> str | None:
    for sig, out in TOOLS[tool]:
        if sig and sig[-1] == VARIADIC:
            fixed = sig[:-1]
            if len(kinds) < len(fixed):
                continue
            rest = fixed[-1]
            if all(k in s for k, s in zip(kinds, fixed)) and all(k in rest for k in kinds[len(fixed):]):
                return out
            continue
        if len(sig) == len(kinds) and all(k in s for k, s in zip(kinds, sig)):
            return out
    return None


def _kinds_text(s) -> str:
    if s == VARIADIC:
        return "..."
    if s == LINE_LIKE:
        return "line"
    if s == CURVES:
        return "curve"
    if s == CONICS:
        return "conic"
    return "|".join(sorted(s))


def signature_text(tool: str) -> str:
    return " or ".join(f"{tool}({', '.join(_kinds_text(s) for s in sig)})" for sig, _ in TOOLS[tool])


# -- statements --------------------------------------------------------------

COLLINEAR = "AreCollinear"
CONCURRENT = "AreConcurrent"
CONCYCLIC = "AreConcyclic"
CONGRUENT = "AreCongruent"
EQUAL = "AreEqual"
PARALLEL = "AreParallel"
PERPENDICULAR = "ArePerpendicular"
INCIDENT = "Incident"
EQUAL_ANGLES = "EqualAngles"
EQUATION = "Equation"

STATEMENTS = {
    COLLINEAR: ({POINT},) * 3,
    CONCURRENT: (LINE_LIKE,) * 3,
    CONCYCLIC: ({POINT},) * 4,
    CONGRUENT: ({SEGMENT},) * 2,
    EQUAL: ({POINT},) * 2,
    PARALLEL: (LINE_LIKE,) * 2,
    PERPENDICULAR: (LINE_LIKE,) * 2,
    INCIDENT: ({POINT}, CURVES),
    EQUAL_ANGLES: ({POINT},) * 6,
    EQUATION: None,
}


@dataclass(frozen=True)
class Const:
    value: Fraction


@dataclass(frozen=True)
class Dist2:
    p: str
    q: str


@dataclass(frozen=True)
class Length:
    p: str
    q: str


@dataclass(frozen=True)
class SignedArea2:
    points: tuple  # point names, or a single polygon name


@dataclass(frozen=True)
class BinOp:
    op: str  # "+", "-", "*"
    left: object
    right: object


@dataclass(frozen=True)
class Neg:
    arg: object


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: int


def formula_refs(node) -> set:
    if isinstance(node, (Dist2, Length)):
        return {node.p, node.q}
    if isinstance(node, SignedArea2):
        return set(node.points)
    if isinstance(node, BinOp):
        return formula_refs(node.left) | formula_refs(node.right)
    if isinstance(node, Neg):
        return formula_refs(node.arg)
    if isinstance(node, Pow):
        return formula_refs(node.base)
    return set()


@dataclass(frozen=True)
class Statement:
    kind: str
    args: tuple = field(default_factory=tuple)  # names; (lhs, rhs) for Equation

    def refs(self) -> set:
        if self.kind == EQUATION:
            return formula_refs(self.args[0]) | formula_refs(self.args[1])
        return set(self.args)


def validate_statement(c: Construction, s: Statement) -> None:
    if s.kind not in STATEMENTS:
        raise ConstructionError(f"unknown statement {s.kind}; known: {', '.join(STATEMENTS)}")
    if s.kind == EQUATION:
        if len(s.args) != 2:
            raise ConstructionError("Equation needs a left and a right side")
        for n in s.refs():
            if n not in c:
                raise ConstructionError(f"unknown object {n}")
        _check_formula(c, s.args[0])
        _check_formula(c, s.args[1])
        return
    sig = STATEMENTS[s.kind]
    if len(s.args) != len(sig):
        raise ConstructionError(f"{s.kind} takes {len(sig)} arguments, got {len(s.args)}")
    for a, kinds in zip(s.args, sig):
        if a not in c:
            raise ConstructionError(f"unknown object {a}")
        if c[a].kind not in kinds:
            raise ConstructionError(f"{s.kind}: {a} is a {c[a].kind}, expected {_kinds_text(kinds)}")


def _check_formula(c: Construction, node) -> None:
    if isinstance(node, (Dist2, Length)):
        for n in (node.p, node.q):
            if c[n].kind != POINT:
                raise ConstructionError(f"{n} is not a point")
    elif isinstance(node, SignedArea2):
        if len(node.points) == 1:
            if c[node.points[0]].kind != POLYGON:
                raise ConstructionError(f"{node.points[0]} is not a polygon")
        else:
            if len(node.points) < 3:
                raise ConstructionError("SignedArea2 needs a polygon or at least 3 points")
            for n in node.points:
                if c[n].kind != POINT:
                    raise ConstructionError(f"{n} is not a point")
    elif isinstance(node, BinOp):
        _check_formula(c, node.left)
        _check_formula(c, node.right)
    elif isinstance(node, Neg):
        _check_formula(c, node.arg)
    elif isinstance(node, Pow):
        _check_formula(c, node.base)


__all__ = [
    "AUXILIARY", "Construction", "ConstructionError", "ConstructionStep", "GeoObject",
    "Statement", "validate_statement", "TOOLS", "STATEMENTS",
]


def step_text(step: ConstructionStep) -> str:
    """``name = Tool(args)`` as written in source files."""
    return f"{step.output.name} = {step.tool}({', '.join(str(a) for a in step.inputs)})"
