from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from chordprop.bv import (
    AlgebraSpec,
    apply_delta,
    bracket,
    check_bv,
    check_gerstenhaber,
    check_graded_commutative_associative,
    delta_squared_defects,
    derived_bracket,
    load_algebra,
    multiply,
)
from chordprop.errors import DegreeViolation, NoUnit, NonHomogeneous, UnknownBasisElement

from oracles import eval_bracket

F = Fraction


def basis(alg, name):
    return {name: F(1)}


def passing_items(alg):
    items = check_bv(alg).items + check_gerstenhaber(alg).items
    return {it.axiom for it in items if it.passed and not it.informational}


def mutants(alg):
    for table, key, target, value in alg.structure_constants():
        yield (table, key, target), alg.with_constant(table, key, target, -value)


class TestLoad:
    def test_truncated_polynomial(self, algebras):
        alg = algebras["delta_zero"]
        assert alg.degree("u2") == 4
        assert multiply(alg, basis(alg, "u"), basis(alg, "u2")) == {}

    def test_exterior_eps_valid(self, algebras):
        alg = algebras["exterior_eps"]
        assert apply_delta(alg, basis(alg, "t12")) == {"e": 1}
        assert alg.degree("e") == alg.degree("t12") + 1

    def test_product_degree_violation(self):
        spec = AlgebraSpec.build([("one", 0), ("x", 1), ("y", 3)], "one", {("x", "x"): {"y": 1}})
        with pytest.raises(DegreeViolation):
            load_algebra(spec)

    def test_delta_degree_violation(self):
        spec = AlgebraSpec.build([("one", 0), ("x", 1)], "one", delta={"x": {"one": 1}})
        with pytest.raises(DegreeViolation):
            load_algebra(spec)

    def test_no_unit(self):
        with pytest.raises(NoUnit):
            load_algebra(AlgebraSpec.build([("x", 0)], None))
        with pytest.raises(NoUnit):
            load_algebra(AlgebraSpec.build([("x", 2)], "x"))

    def test_unknown_name(self):
        with pytest.raises(UnknownBasisElement):
            load_algebra(AlgebraSpec.build([("one", 0)], "one", {("one", "z"): {"one": 1}}))

    def test_unit_products_implicit(self, algebras):
        alg = algebras["exterior"]
        for n in alg.names:
            assert alg.mul[("one", n)] == {n: 1} == alg.mul[(n, "one")]


class TestOperations:
    def test_unit_multiplication(self, algebras):
        for alg in algebras.values():
            for n in alg.names:
                assert multiply(alg, basis(alg, alg.unit), basis(alg, n)) == {n: 1}

    def test_anticommuting_generators(self, algebras):
        alg = algebras["exterior"]
        xy = multiply(alg, basis(alg, "t1"), basis(alg, "t2"))
        yx = multiply(alg, basis(alg, "t2"), basis(alg, "t1"))
        assert xy == {"t12": 1} and yx == {"t12": -1}

    def test_linearity(self, algebras):
        alg = algebras["exterior"]
        x, y = {"t1": F(2), "t2": F(1, 3)}, {"t3": F(-1)}
        assert multiply(alg, {k: 2 * v for k, v in x.items()}, y) == \
            {k: 2 * v for k, v in multiply(alg, x, y).items()}

    def test_delta_of_unit(self, algebras):
        for alg in algebras.values():
            assert apply_delta(alg, basis(alg, alg.unit)) == {}

    def test_delta_squared_on_bv_fixtures(self, algebras):
        for name in ("delta_zero", "exterior", "exterior_eps"):
            alg = algebras[name]
            assert delta_squared_defects(alg) == []
            for n in alg.names:
                assert apply_delta(alg, apply_delta(alg, basis(alg, n))) == {}

    def test_delta_lands_one_degree_up(self, algebras):
        for alg in algebras.values():
            for n in alg.names:
                for k in apply_delta(alg, basis(alg, n)):
                    assert alg.degree(k) == alg.degree(n) + 1


class TestBracket:
    def test_zero_when_delta_zero(self, algebras):
        alg = algebras["delta_zero"]
        for x in alg.names:
            for y in alg.names:
                assert derived_bracket(alg, basis(alg, x), basis(alg, y)) == {}

    def test_against_term_expansion(self, algebras):
        for alg in algebras.values():
            deg = dict(alg.basis)
            for x in alg.names:
                for y in alg.names:
                    assert derived_bracket(alg, basis(alg, x), basis(alg, y)) == \
                        eval_bracket(alg.mul, alg.delta, deg, x, y)

    def test_exterior_eps_value(self, algebras):
        alg = algebras["exterior_eps"]
        assert derived_bracket(alg, basis(alg, "t1"), basis(alg, "t2")) == {"e": -1}

    def test_unit_is_central(self, algebras):
        for name in ("delta_zero", "exterior", "exterior_eps"):
            alg = algebras[name]
            for y in alg.names:
                assert derived_bracket(alg, basis(alg, alg.unit), basis(alg, y)) == {}

    def test_non_homogeneous(self, algebras):
        alg = algebras["exterior"]
        with pytest.raises(NonHomogeneous):
            derived_bracket(alg, {"one": F(1), "t1": F(1)}, basis(alg, "t2"))

    def test_bilinear_extension(self, algebras):
        alg = algebras["exterior_eps"]
        x = {"one": F(1), "t1": F(2)}
        assert bracket(alg, x, basis(alg, "t2")) == {"e": -2}


class TestChecks:
    def test_delta_zero_passes_everything(self, algebras):
        alg = algebras["delta_zero"]
        assert check_graded_commutative_associative(alg).passed
        assert check_gerstenhaber(alg).passed
        assert check_bv(alg).passed

    def test_exterior_verdicts(self, algebras):
        alg = algebras["exterior"]
        assert check_graded_commutative_associative(alg).passed
        assert check_bv(alg).passed
        assert check_gerstenhaber(alg).passed

    def test_exterior_eps_verdicts(self, algebras):
        # nonzero bracket: the unsigned antisymmetry fails, the signed one holds
        alg = algebras["exterior_eps"]
        assert check_bv(alg).passed
        report = check_gerstenhaber(alg)
        assert report.failing_axioms() == ["antisymmetry"]
        assert report.item("antisymmetry-minus").passed
        assert report.item("jacobi").passed and report.item("leibniz").passed

    def test_bad_delta(self, algebras):
        report = check_bv(algebras["bad_delta"])
        assert report.failing_axioms() == ["delta-squared"]
        witness = report.item("delta-squared").failures[0]
        assert witness["params"]["entry"] == ["x", "z"]

    def test_square_nonzero_mutation_breaks_jacobi(self, algebras):
        alg = algebras["exterior"].with_constant("delta", "t12", "t1", 1)
        assert delta_squared_defects(alg)
        assert "jacobi" in check_gerstenhaber(alg).failing_axioms()
        assert "delta-squared" in check_bv(alg).failing_axioms()

    def test_mutated_product_witnessed(self, algebras):
        alg = algebras["exterior"].with_constant("mul", ("t1", "t2"), "t12", -1)
        report = check_graded_commutative_associative(alg)
        assert not report.passed
        assert report.item("graded-commutative").failures[0]["params"]["basis"] == ["t1", "t2"]

    def test_report_json(self, algebras):
        a = check_bv(algebras["exterior"]).to_dict()
        assert a["schema"] == "chordprop/1" and a["verdict"] == "pass"
        assert check_bv(algebras["bad_delta"]).to_json() == check_bv(algebras["bad_delta"]).to_json()


class TestMutationSensitivity:
    def test_every_sign_flip_of_exterior_detected(self, algebras):
        alg = algebras["exterior"]
        before = passing_items(alg)
        count = 0
        for where, m in mutants(alg):
            assert before - passing_items(m), where
            count += 1
        assert count == len(alg.structure_constants()) > 20

    def test_single_delta_entry_flip_is_invisible(self, algebras):
        # with one nonzero operator entry, flipping it is the symmetry delta -> -delta
        alg = algebras["exterior_eps"]
        flipped = alg.with_constant("delta", "t12", "e", -1)
        assert passing_items(flipped) == passing_items(alg)


@st.composite
def exterior_like(draw):
    """Exterior algebras on three degree -1 generators with a constant-coefficient
    first-order operator, plus a random rescaling of the operator."""
    coeffs = draw(st.lists(st.integers(-2, 2), min_size=3, max_size=3))
    monos = [(), (0,), (1,), (2,), (0, 1), (0, 2), (1, 2), (0, 1, 2)]

    def name(m):
        return "one" if not m else "t" + "".join(str(i + 1) for i in m)

    def sort_sign(seq):
        s = 1
        for i in range(len(seq)):
            for j in range(i + 1, len(seq)):
                if seq[i] > seq[j]:
                    s = -s
        return s

    mul = {}
    for a in monos:
        for b in monos:
            if not set(a) & set(b):
                mul[(name(a), name(b))] = {name(tuple(sorted(a + b))): sort_sign(a + b)}
    delta = {}
    for m in monos:
        out = {}
        for pos, k in enumerate(m):
            if coeffs[k]:
                rest = tuple(x for x in m if x != k)
                out[name(rest)] = out.get(name(rest), 0) + (-1) ** pos * coeffs[k]
        if out:
            delta[name(m)] = out
    basis_ = [(name(m), -len(m)) for m in monos]
    return load_algebra(AlgebraSpec.build(basis_, "one", mul, delta))


@settings(max_examples=25)
@given(exterior_like())
def test_cross_suite_consistency(alg):
    # whenever the BV suite passes, the bracket satisfies the signed antisymmetry,
    # Jacobi and Leibniz
    if check_bv(alg).passed:
        g = check_gerstenhaber(alg)
        for axiom in ("antisymmetry-minus", "jacobi", "leibniz"):
            assert g.item(axiom).passed


def test_cross_suite_consistency_on_fixtures(algebras):
    for alg in algebras.values():
        if check_bv(alg).passed:
            g = check_gerstenhaber(alg)
            for axiom in ("antisymmetry-minus", "jacobi", "leibniz"):
                assert g.item(axiom).passed
