'''
Validation tests for opminimal.sullivan
'''
import dataclasses
from functools import lru_cache
import pytest

from opminimal.dgoperad import (is_quasi_iso_upto, make_builtin,
                                restriction_target, validate_operad_axioms)
from opminimal.exactla import rank
from opminimal.freeop import FreeStage, TreeVector
from opminimal.sullivan import (CONVENTIONS, base_step, equivariant_average,
                                inductive_step, minimal_model, resolve_mode,
                                unitary_section_correction,
                                verify_minimal_model)
from opminimal.__validation import HypothesisError, VERIFY_COLUMNS
from .__utils import acyclic_operad, thick_com


@lru_cache(maxsize=None)
def _model(name, max_arity):
    return minimal_model(make_builtin(name, 4), max_arity)


def _with_stage(staged, **changes):
    """ Copy of a staged model whose stage has some fields replaced """
    stage = staged.stage
    fields = dict(generators=stage.generators,
                  differential=stage.differential,
                  restrictions=stage.restrictions, unitary=stage.unitary)
    fields.update(changes)
    return dataclasses.replace(staged, stage=FreeStage(**fields))


def _failed(report):
    return set(report.loc[~report['Passed'].astype(bool), 'Check'])


@pytest.fixture(scope="class")
def load_models(request):
    request.cls.ass = _model("ass", 4)
    request.cls.ass_plus = _model("ass_plus", 4)
    request.cls.com = _model("com", 4)
    request.cls.com_plus = _model("com_plus", 4)
    yield


class TestModes:
    def test_resolve_mode(self):
        assert resolve_mode(make_builtin("ass_plus", 2)) == "unitary"
        assert resolve_mode(make_builtin("ass", 2), "auto") == "non-unitary"
        assert resolve_mode(make_builtin("ass_plus", 2), "non-unitary") == \
            "non-unitary"
        with pytest.raises(ValueError):
            resolve_mode(make_builtin("ass", 2), "counital")

    def test_unitary_needs_unit_point(self):
        with pytest.raises(HypothesisError):
            minimal_model(make_builtin("com", 3), mode="unitary")

    def test_acyclic_target(self):
        with pytest.raises(HypothesisError):
            minimal_model(acyclic_operad(3))

    def test_arity_range(self):
        with pytest.raises(ValueError):
            minimal_model(make_builtin("ass", 3), 4)
        with pytest.raises(ValueError):
            minimal_model(make_builtin("ass", 3), 1)


class TestSteps:
    def test_base_step_of_ass(self):
        staged = base_step(make_builtin("ass", 4), "non-unitary")
        assert staged.completed_arity == 2
        assert staged.generator_dims() == {2: {0: 2}}
        assert staged.stage.dimension(3, 0) == 12
        rho = staged.rho.matrix(3, 0)
        assert rho.shape == (6, 12)
        assert rank(rho) == 6

    def test_inductive_step(self):
        staged = inductive_step(
            base_step(make_builtin("ass", 4), "non-unitary"), 3)
        assert staged.generator_dims()[3] == {-1: 6}
        assert staged.stage.dimension(3, 0) == 12
        assert staged.stage.dimension(3, -1) == 6
        assert staged.stage.degrees(3) == [-1, 0]

    def test_out_of_order(self):
        staged = base_step(make_builtin("ass", 3), "non-unitary")
        with pytest.raises(ValueError):
            inductive_step(staged, 4)
        staged = inductive_step(staged, 3)
        with pytest.raises(ValueError):
            inductive_step(staged, 4)


@pytest.mark.usefixtures("load_models")
class TestGeneratorCounts:
    def test_ass(self):
        assert self.ass.generator_dims() == {2: {0: 2}, 3: {-1: 6},
                                             4: {-2: 24}}
        assert self.ass_plus.generator_dims() == self.ass.generator_dims()

    def test_com(self):
        dims = {2: {0: 1}, 3: {-1: 2}, 4: {-2: 6}}
        assert self.com.generator_dims() == dims
        assert self.com_plus.generator_dims() == dims

    def test_modes(self):
        assert self.ass.mode == "non-unitary"
        assert self.ass_plus.mode == "unitary"
        assert not self.ass.stage.unitary

    def test_provenance(self):
        provenance = self.ass.provenance
        assert provenance["conventions"] == CONVENTIONS
        assert provenance["target"] == "ass"
        assert provenance["generator_dims"]["4"] == {"-2": 24}

    def test_quasi_isomorphism(self):
        for model in (self.ass, self.com_plus):
            report = is_quasi_iso_upto(model.rho, 4)
            assert report['Iso'].astype(bool).all()

    def test_stable_under_truncation(self):
        for name, full in (("ass", self.ass), ("ass_plus", self.ass_plus)):
            short = _model(name, 3)
            assert set(short.stage.generators) == {2, 3}
            for label in short.stage.generator_labels():
                n = short.stage.arity_of(label)
                assert short.stage.differential_of(label) == \
                    full.stage.differential_of(label)
                assert short.rho.value_of(label) == full.rho.value_of(label)
                for i in range(1, n + 1):
                    assert short.stage.restriction_of(label, i) == \
                        full.stage.restriction_of(label, i)


@pytest.mark.usefixtures("load_models")
class TestRestrictions:
    def test_binary_generators_restrict_to_identity(self):
        identity = TreeVector.single(1, 0)
        for model in (self.ass_plus, self.com_plus):
            for label in model.stage.generators[2].basis.flat_labels():
                for i in (1, 2):
                    assert model.stage.restriction_of(label, i) == identity

    def test_higher_generators_restrict_to_zero(self):
        stage = self.ass_plus.stage
        for n in (3, 4):
            for label in stage.generators[n].basis.flat_labels():
                for i in range(1, n + 1):
                    assert stage.restriction_of(label, i).is_zero()

    def test_averaging_keeps_equivariant_data(self):
        model = self.ass_plus
        stage, P = model.stage, model.target
        module = stage.generators[3]
        labels = module.basis.flat_labels()
        values = {lbl: model.rho.value_of(lbl) for lbl in labels}
        restrictions = {(lbl, i): stage.restriction_of(lbl, i)
                        for lbl in labels for i in (1, 2, 3)}
        averaged, none = equivariant_average(stage, P, module, values)
        assert averaged == values and none is None
        averaged, moved = equivariant_average(stage, P, module, values,
                                              restrictions)
        assert averaged == values
        assert moved == restrictions

    def test_section_correction_is_idle(self):
        model = self.ass_plus
        module = model.stage.generators[2]
        labels = module.basis.flat_labels()
        values = {lbl: model.rho.value_of(lbl) for lbl in labels}
        restrictions = {(lbl, i): model.stage.restriction_of(lbl, i)
                        for lbl in labels for i in (1, 2)}
        corrected = unitary_section_correction(model.stage, model.rho, 2,
                                               module, values, restrictions)
        assert corrected == values


@pytest.fixture(scope="class")
def load_thick(request):
    request.cls.target = thick_com(4)
    request.cls.model = minimal_model(request.cls.target, 4)
    yield


@pytest.mark.usefixtures("load_thick")
class TestNonzeroDifferential:
    def test_axioms_hold(self):
        assert validate_operad_axioms(self.target, unitary=True).empty

    def test_model_matches_com(self):
        dims = {2: {0: 1}, 3: {-1: 2}, 4: {-2: 6}}
        assert self.model.generator_dims() == dims
        assert not _failed(verify_minimal_model(self.model))
        flat = minimal_model(self.target, 4, mode="non-unitary")
        assert flat.generator_dims() == dims
        assert not _failed(verify_minimal_model(flat))

    def test_section_correction_removes_coboundary(self):
        model, P = self.model, self.target
        module = model.stage.generators[2]
        labels = module.basis.flat_labels()
        values = {lbl: model.rho.value_of(lbl) for lbl in labels}
        restrictions = {(lbl, i): model.stage.restriction_of(lbl, i)
                        for lbl in labels for i in (1, 2)}
        shifted = {lbl: v + P.element("b2") for lbl, v in values.items()}
        for lbl in labels:
            assert restriction_target(P, 1, shifted[lbl]) != \
                model.rho.evaluate(restrictions[(lbl, 1)])
        corrected = unitary_section_correction(model.stage, model.rho, 2,
                                               module, shifted, restrictions)
        # b2 is the only coboundary restricting to b1 in both slots
        assert corrected == values
        for lbl in labels:
            for i in (1, 2):
                assert restriction_target(P, i, corrected[lbl]) == \
                    model.rho.evaluate(restrictions[(lbl, i)])


@pytest.mark.usefixtures("load_models")
class TestVerification:
    def test_clean_models(self):
        for model in (self.ass, self.ass_plus, self.com, self.com_plus):
            report = verify_minimal_model(model)
            assert list(report.columns) == VERIFY_COLUMNS
            assert not _failed(report)

    def test_corrupted_differential(self):
        staged = self.ass.staged
        label = staged.stage.generators[4].basis.flat_labels()[0]
        dv = staged.stage.differential_of(label)
        tree, coef = dv.items()[0]
        differential = dict(staged.stage.differential)
        differential[label] = dv + TreeVector.single(tree, dv.degree, coef)
        report = verify_minimal_model(_with_stage(staged,
                                                  differential=differential))
        assert "d_squared" in _failed(report)

    def test_corrupted_restriction(self):
        staged = self.ass_plus.staged
        label = staged.stage.generators[2].basis.flat_labels()[0]
        restrictions = dict(staged.stage.restrictions)
        restrictions[(label, 1)] = TreeVector.zero(1, 0)
        report = verify_minimal_model(_with_stage(staged,
                                                  restrictions=restrictions))
        assert "restriction_compatibility" in _failed(report)
        assert "d_squared" not in _failed(report)
