'''
Validation tests for opminimal.reports
'''
from math import factorial
import pytest

from opminimal import reports
from opminimal.dgoperad import make_builtin
from opminimal.freeop import Node, TreeVector
from opminimal.sullivan import minimal_model
from opminimal.__validation import (COHOMOLOGY_COLUMNS, GENERATOR_COLUMNS,
                                    RESTRICTION_COLUMNS)
from .__utils import acyclic_operad


@pytest.fixture(scope="class")
def load_models(request):
    request.cls.ass = minimal_model(make_builtin("ass", 3))
    request.cls.ass_plus = minimal_model(make_builtin("ass_plus", 3))
    yield


class TestDescribe:
    def test_zero(self):
        assert reports.describe(TreeVector.zero(2, 0)) == "0"

    def test_prefix_notation(self):
        left = Node("e2_1", (Node("e2_1", (1, 2)), 3))
        right = Node("e2_1", (1, Node("e2_1", (2, 3))))
        v = TreeVector(3, 0, {left: 1, right: -1})
        assert reports.describe(v) == \
            "-e2_1(1,e2_1(2,3)) + e2_1(e2_1(1,2),3)"

    def test_fractions(self):
        v = TreeVector(2, 0, {Node("e2_1", (1, 2)): "1/2",
                              Node("e2_2", (1, 2)): -3})
        assert reports.describe(v) == "1/2 e2_1(1,2) - 3 e2_2(1,2)"
        assert reports.describe(TreeVector.single(1, 0)) == "1"


class TestTargetReports:
    def test_cohomology_of_ass(self):
        table = reports.cohomology_report(make_builtin("ass", 4))
        assert list(table.columns) == COHOMOLOGY_COLUMNS
        assert list(table['Dimension']) == [0] + \
            [factorial(n) for n in range(1, 5)]
        assert list(table['Arity']) == [0, 1, 2, 3, 4]

    def test_cohomology_of_com_plus(self):
        table = reports.cohomology_report(make_builtin("com_plus", 4), 3)
        assert list(table['Dimension']) == [1, 1, 1, 1]

    def test_acyclic(self):
        table = reports.cohomology_report(acyclic_operad(3))
        assert not table['Dimension'].any()
        hypotheses = reports.hypothesis_report(acyclic_operad(3))
        assert not hypotheses['Holds'].astype(bool).any()

    def test_hypotheses(self):
        report = reports.hypothesis_report(make_builtin("ass_plus", 3))
        assert report['Holds'].astype(bool).all()
        report = reports.hypothesis_report(make_builtin("com", 3))
        assert list(report['Holds'].astype(bool)) == [True, False, False]


@pytest.mark.usefixtures("load_models")
class TestModelReports:
    def test_generator_table(self):
        table = reports.generator_table(self.ass)
        assert list(table.columns) == GENERATOR_COLUMNS
        assert table.values.tolist() == [[2, 0, 2], [3, -1, 6]]

    def test_restriction_table(self):
        table = reports.restriction_table(self.ass_plus)
        assert list(table.columns) == RESTRICTION_COLUMNS
        assert len(table) == 2 * 2 + 6 * 3
        binary = table.loc[table['Arity'] == 2, 'Restriction']
        assert set(binary) == {"1"}
        ternary = table.loc[table['Arity'] == 3, 'Restriction']
        assert set(ternary) == {"0"}
        assert reports.restriction_table(self.ass).empty

    def test_summary(self):
        text = reports.model_summary(self.ass_plus)
        assert text.startswith("Minimal model of ass_plus (unitary)")
        assert "arity 3, degree -1: 6" in text
        assert "delta_1(e2_1) = 1" in text
        assert "d(e2_1) = 0" in text
        plain = reports.model_summary(self.ass)
        assert "Differentials:" in plain
        assert "Restrictions:" not in plain
