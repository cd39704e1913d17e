"""Finite graded algebras with a degree +1 operator and their axiom checks.

Vectors are ``dict[str, Fraction]`` keyed by basis name, with zero
coefficients dropped.  Every axiom is checked on basis elements only;
bilinearity extends the verdict to all of the algebra.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping

from .errors import DegreeViolation, NoUnit, NonHomogeneous, UnknownBasisElement, DuplicateBasisElement
from .reports import SCHEMA, dumps

Vector = dict[str, Fraction]


@dataclass(frozen=True)
class AlgebraSpec:
    """Raw algebra description, as produced by the text parser.

    ``mul`` maps ``(i, j)`` to a vector and ``delta`` maps ``i`` to a vector;
    missing entries are zero.  Products with the unit may be omitted.
    """

    basis: tuple[tuple[str, int], ...]
    unit: str | None
    mul: tuple[tuple[tuple[str, str], tuple[tuple[str, Fraction], ...]], ...] = ()
    delta: tuple[tuple[str, tuple[tuple[str, Fraction], ...]], ...] = ()

    @classmethod
    def build(cls, basis, unit, mul: Mapping | None = None, delta: Mapping | None = None) -> "AlgebraSpec":
        def frozen(vec):
            return tuple((k, Fraction(c)) for k, c in vec.items())

        return cls(
            basis=tuple((str(n), int(d)) for n, d in basis),
            unit=unit,
            mul=tuple(((i, j), frozen(v)) for (i, j), v in (mul or {}).items()),
            delta=tuple((i, frozen(v)) for i, v in (delta or {}).items()),
        )


def _clean(vec: Mapping[str, Fraction]) -> Vector:
    return {k: Fraction(c) for k, c in vec.items() if c != 0}


def add(*vecs: Mapping[str, Fraction], coeffs: Iterable | None = None) -> Vector:
    """Linear combination ``sum c_i v_i`` (coefficients default to 1)."""
    coeffs = list(coeffs) if coeffs is not None else [1] * len(vecs)
    out: dict[str, Fraction] = {}
    for c, v in zip(coeffs, vecs):
        for k, x in v.items():
            out[k] = out.get(k, Fraction(0)) + c * x
    return _clean(out)


def scale(c, vec: Mapping[str, Fraction]) -> Vector:
    return _clean({k: c * x for k, x in vec.items()})


@dataclass(frozen=True)
class GradedBasisAlgebra:
    basis: tuple[tuple[str, int], ...]
    unit: str
    mul: dict[tuple[str, str], Vector] = field(hash=False)
    delta: dict[str, Vector] = field(hash=False)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.basis)

    def degree(self, name: str) -> int:
        return self._degrees[name]

    @property
    def _degrees(self) -> dict[str, int]:
        return dict(self.basis)

    def basis_vector(self, name: str) -> Vector:
        if name not in self._degrees:
            raise UnknownBasisElement(f"unknown basis element {name!r}", name=name)
        return {name: Fraction(1)}

    def structure_constants(self) -> list[tuple[str, tuple, str, Fraction]]:
        """Every nonzero constant as ``(table, key, target, value)`` in a fixed order."""
        out = []
        for key in sorted(self.mul):
            for k, c in sorted(self.mul[key].items()):
                out.append(("mul", key, k, c))
        for key in sorted(self.delta):
            for k, c in sorted(self.delta[key].items()):
                out.append(("delta", key, k, c))
        return out

    def with_constant(self, table: str, key, target: str, value) -> "GradedBasisAlgebra":
        """Copy with one structure constant replaced (validation is skipped)."""
        mul = {k: dict(v) for k, v in self.mul.items()}
        delta = {k: dict(v) for k, v in self.delta.items()}
        tab = mul if table == "mul" else delta
        tab.setdefault(key, {})[target] = Fraction(value)
        tab[key] = _clean(tab[key])
        return GradedBasisAlgebra(self.basis, self.unit, mul, delta)


def load_algebra(spec: AlgebraSpec) -> GradedBasisAlgebra:
    """Validate an algebra description and fill in the omitted unit products."""
    degrees: dict[str, int] = {}
    for name, deg in spec.basis:
        if name in degrees:
            raise DuplicateBasisElement(f"basis element {name!r} declared twice", name=name)
        degrees[name] = deg

    def known(name):
        if name not in degrees:
            raise UnknownBasisElement(f"unknown basis element {name!r}", name=name)
        return name

    if spec.unit is None:
        raise NoUnit("algebra declares no unit")
    known(spec.unit)
    if degrees[spec.unit] != 0:
        raise NoUnit(f"unit {spec.unit!r} has degree {degrees[spec.unit]}, expected 0", name=spec.unit)

    mul: dict[tuple[str, str], Vector] = {}
    for (i, j), vec in spec.mul:
        known(i), known(j)
        target = degrees[i] + degrees[j]
        for k, c in vec:
            known(k)
            if c != 0 and degrees[k] != target:
                raise DegreeViolation(
                    f"product {i}*{j} has degree {target} but term {k} has degree {degrees[k]}",
                    name=f"{i},{j}",
                )
        mul[(i, j)] = add(mul.get((i, j), {}), _clean(dict(vec)))

    delta: dict[str, Vector] = {}
    for i, vec in spec.delta:
        known(i)
        for k, c in vec:
            known(k)
            if c != 0 and degrees[k] != degrees[i] + 1:
                raise DegreeViolation(
                    f"delta({i}) must have degree {degrees[i] + 1} but term {k} has degree {degrees[k]}",
                    name=i,
                )
        delta[i] = add(delta.get(i, {}), _clean(dict(vec)))

    u = spec.unit
    for name in degrees:
        mul.setdefault((u, name), {name: Fraction(1)})
        mul.setdefault((name, u), {name: Fraction(1)})

    mul = {k: v for k, v in mul.items() if v}
    delta = {k: v for k, v in delta.items() if v}
    return GradedBasisAlgebra(tuple(spec.basis), u, mul, delta)


def multiply(alg: GradedBasisAlgebra, x: Mapping, y: Mapping) -> Vector:
    out: dict[str, Fraction] = {}
    for i, a in x.items():
        for j, b in y.items():
            for k, c in alg.mul.get((i, j), {}).items():
                out[k] = out.get(k, Fraction(0)) + a * b * c
    return _clean(out)


def apply_delta(alg: GradedBasisAlgebra, x: Mapping) -> Vector:
    out: dict[str, Fraction] = {}
    for i, a in x.items():
        for k, c in alg.delta.get(i, {}).items():
            out[k] = out.get(k, Fraction(0)) + a * c
    return _clean(out)


def homogeneous_degree(alg: GradedBasisAlgebra, x: Mapping) -> int | None:
    """Degree of a nonzero homogeneous vector; ``None`` for zero."""
    degs = {alg.degree(k) for k, c in x.items() if c != 0}
    if len(degs) > 1:
        raise NonHomogeneous(f"vector mixes degrees {sorted(degs)}")
    return degs.pop() if degs else None


def homogeneous_parts(alg: GradedBasisAlgebra, x: Mapping) -> dict[int, Vector]:
    parts: dict[int, Vector] = {}
    for k, c in x.items():
        if c != 0:
            parts.setdefault(alg.degree(k), {})[k] = Fraction(c)
    return parts


def derived_bracket(alg: GradedBasisAlgebra, x: Mapping, y: Mapping) -> Vector:
    """``(-1)^|x| D(xy) - (-1)^|x| D(x)y - x D(y)`` for homogeneous ``x`` and ``y``."""
    dx = homogeneous_degree(alg, x)
    homogeneous_degree(alg, y)
    if dx is None:
        return {}
    s = -1 if dx % 2 else 1
    return add(
        apply_delta(alg, multiply(alg, x, y)),
        multiply(alg, apply_delta(alg, x), y),
        multiply(alg, x, apply_delta(alg, y)),
        coeffs=[s, -s, -1],
    )


def bracket(alg: GradedBasisAlgebra, x: Mapping, y: Mapping) -> Vector:
    """Derived bracket extended bilinearly over homogeneous parts."""
    px, py = homogeneous_parts(alg, x), homogeneous_parts(alg, y)
    return add(*(derived_bracket(alg, a, b) for a in px.values() for b in py.values()))


# -- reports ------------------------------------------------------------------------

def _fmt(vec: Mapping[str, Fraction]) -> dict[str, str]:
    return {k: str(c) for k, c in sorted(vec.items())}


@dataclass
class AxiomResult:
    axiom: str
    checked: int = 0
    failures: list[dict] = field(default_factory=list)
    informational: bool = False

    @property
    def passed(self) -> bool:
        return not self.failures

    def record(self, witness: dict, defect: Mapping[str, Fraction]) -> None:
        self.checked += 1
        if defect:
            self.failures.append({"params": {"axiom": self.axiom, **witness},
                                  "expected": {}, "actual": _fmt(defect)})

    def to_dict(self) -> dict:
        return {
            "axiom": self.axiom,
            "status": "pass" if self.passed else "fail",
            "checked": self.checked,
            "informational": self.informational,
            "counterexample": self.failures[0] if self.failures else None,
            "failure_count": len(self.failures),
        }


@dataclass
class CheckReport:
    """Aggregate of axiom results; informational items never affect the verdict."""

    kind: str
    items: list[AxiomResult]

    @property
    def failures(self) -> list[dict]:
        return [f for it in self.items if not it.informational for f in it.failures]

    @property
    def checked(self) -> int:
        return sum(it.checked for it in self.items if not it.informational)

    @property
    def passed(self) -> bool:
        return not self.failures

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def item(self, axiom: str) -> AxiomResult:
        for it in self.items:
            if it.axiom == axiom:
                return it
        raise KeyError(axiom)

    def failing_axioms(self) -> list[str]:
        return [it.axiom for it in self.items if not it.informational and not it.passed]

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "kind": self.kind,
            "checked": self.checked,
            "failures": self.failures,
            "verdict": self.verdict,
            "axioms": [it.to_dict() for it in self.items],
        }

    def to_json(self) -> str:
        return dumps(self.to_dict())


def _sign(e: int) -> int:
    return -1 if e % 2 else 1


def _basis(alg):
    return [(n, alg.basis_vector(n), d) for n, d in alg.basis]


def _commutative_associative_items(alg) -> list[AxiomResult]:
    comm, assoc, unit = AxiomResult("graded-commutative"), AxiomResult("associative"), AxiomResult("unit")
    b = _basis(alg)
    one = alg.basis_vector(alg.unit)
    for n, x, _ in b:
        unit.record({"basis": [n]}, add(multiply(alg, one, x), x, coeffs=[1, -1]))
        unit.record({"basis": [n, "right"]}, add(multiply(alg, x, one), x, coeffs=[1, -1]))
    for (n1, x, d1), (n2, y, d2) in product(b, repeat=2):
        defect = add(multiply(alg, x, y), multiply(alg, y, x), coeffs=[1, -_sign(d1 * d2)])
        comm.record({"basis": [n1, n2]}, defect)
    for (n1, x, _), (n2, y, _), (n3, z, _) in product(b, repeat=3):
        lhs = multiply(alg, multiply(alg, x, y), z)
        rhs = multiply(alg, x, multiply(alg, y, z))
        assoc.record({"basis": [n1, n2, n3]}, add(lhs, rhs, coeffs=[1, -1]))
    return [comm, assoc, unit]


def _leibniz_second(alg) -> AxiomResult:
    """``{a, bc} = {a,b}c + (-1)^{|b|(|a|+1)} b{a,c}``."""
    item = AxiomResult("leibniz")
    b = _basis(alg)
    for (n1, x, d1), (n2, y, d2), (n3, z, _) in product(b, repeat=3):
        lhs = derived_bracket(alg, x, multiply(alg, y, z))
        rhs = add(multiply(alg, derived_bracket(alg, x, y), z),
                  multiply(alg, y, derived_bracket(alg, x, z)),
                  coeffs=[1, _sign(d2 * (d1 + 1))])
        item.record({"basis": [n1, n2, n3]}, add(lhs, rhs, coeffs=[1, -1]))
    return item


def _leibniz_first(alg) -> AxiomResult:
    """``{ab, c} = a{b,c} + (-1)^{|b|(|c|+1)} {a,c}b``."""
    item = AxiomResult("leibniz-first")
    b = _basis(alg)
    for (n1, x, _), (n2, y, d2), (n3, z, d3) in product(b, repeat=3):
        lhs = bracket(alg, multiply(alg, x, y), z)
        rhs = add(multiply(alg, x, derived_bracket(alg, y, z)),
                  multiply(alg, derived_bracket(alg, x, z), y),
                  coeffs=[1, _sign(d2 * (d3 + 1))])
        item.record({"basis": [n1, n2, n3]}, add(lhs, rhs, coeffs=[1, -1]))
    return item


def check_graded_commutative_associative(alg: GradedBasisAlgebra) -> CheckReport:
    return CheckReport("graded-commutative-associative", _commutative_associative_items(alg))


def check_gerstenhaber(alg: GradedBasisAlgebra) -> CheckReport:
    """Antisymmetry as printed, Jacobi and Leibniz for the derived bracket.

    The conventional antisymmetry ``{a,b} = -(-1)^{(|a|+1)(|b|+1)}{b,a}`` is
    also evaluated and reported as an informational item.
    """
    anti = AxiomResult("antisymmetry")
    anti_minus = AxiomResult("antisymmetry-minus", informational=True)
    jacobi = AxiomResult("jacobi")
    b = _basis(alg)
    for (n1, x, d1), (n2, y, d2) in product(b, repeat=2):
        xy, yx = derived_bracket(alg, x, y), derived_bracket(alg, y, x)
        s = _sign((d1 + 1) * (d2 + 1))
        anti.record({"basis": [n1, n2]}, add(xy, yx, coeffs=[1, -s]))
        anti_minus.record({"basis": [n1, n2]}, add(xy, yx, coeffs=[1, s]))
    for (n1, x, d1), (n2, y, d2), (n3, z, _) in product(b, repeat=3):
        lhs = bracket(alg, x, derived_bracket(alg, y, z))
        rhs = add(bracket(alg, derived_bracket(alg, x, y), z),
                  bracket(alg, y, derived_bracket(alg, x, z)),
                  coeffs=[1, _sign((d1 + 1) * (d2 + 1))])
        jacobi.record({"basis": [n1, n2, n3]}, add(lhs, rhs, coeffs=[1, -1]))
    return CheckReport("gerstenhaber", [anti, anti_minus, jacobi, _leibniz_second(alg)])


def delta_squared_defects(alg: GradedBasisAlgebra) -> list[tuple[str, str, Fraction]]:
    """Nonzero entries ``(i, k, value)`` of the matrix of ``D o D``."""
    out = []
    for n in alg.names:
        for k, c in sorted(apply_delta(alg, apply_delta(alg, {n: Fraction(1)})).items()):
            out.append((n, k, c))
    return out


def check_bv(alg: GradedBasisAlgebra) -> CheckReport:
    """Commutative associative product, square-zero operator, bracket a derivation in each slot."""
    items = _commutative_associative_items(alg)
    sq = AxiomResult("delta-squared")
    for n in alg.names:
        sq.checked += 1
        for _, k, c in [e for e in delta_squared_defects(alg) if e[0] == n]:
            sq.failures.append({"params": {"axiom": sq.axiom, "entry": [n, k]},
                                "expected": "0", "actual": str(c)})
    items += [sq, _leibniz_second(alg), _leibniz_first(alg)]
    return CheckReport("bv", items)
