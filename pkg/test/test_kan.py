'''
Validation tests for opminimal.kan
'''
from fractions import Fraction
import numpy as np
import pytest

from opminimal import utils
from opminimal.dgoperad import make_builtin
from opminimal.exactla import Matrix, kernel_and_image, linear_combination
from opminimal.freeop import Node, TreeVector
from opminimal.kan import (FaceFamily, FillConstraint, faces, fill,
                           fill_equivariant, fill_refined, is_kan_family)
from opminimal.sullivan import minimal_model
from opminimal.symmod import regular_module
from opminimal.__validation import InfeasibleError, ValidationError
from .__utils import acyclic_operad, random_coordinates
np.random.seed(506)


# random elements per arity of the target; 500 families in total
FUZZ_COUNTS = {2: 100, 3: 150, 4: 250}


@pytest.fixture(scope="class")
def load_carriers(request):
    request.cls.ass = make_builtin("ass_plus", 4)
    request.cls.acyclic = acyclic_operad(3)
    rng = np.random.RandomState(506)
    request.cls.omegas = {n: [random_coordinates(utils.group_order(n), rng)
                              for _ in range(count)]
                          for n, count in FUZZ_COUNTS.items()}
    yield


@pytest.fixture(scope="class")
def load_model_stage(request):
    model = minimal_model(make_builtin("ass_plus", 4))
    request.cls.stage = model.stage
    request.cls.rho = model.rho
    yield


def _assert_equivariant(carrier, module, fillers, degree):
    n = module.arity
    for sigma in utils.all_permutations(n):
        mat = carrier.action_matrix(n, sigma, degree)
        for lbl in module.basis.flat_labels():
            image = module.act_on_label(sigma, lbl)
            expected = linear_combination(list(image.values()),
                                          [fillers[f] for f in image],
                                          carrier.dimension(n, degree))
            assert mat.apply(fillers[lbl]) == expected


@pytest.mark.usefixtures("load_carriers")
class TestKanFamilies:
    def test_faces_are_kan(self):
        for n, omegas in self.omegas.items():
            for omega in omegas:
                ok, violation = is_kan_family(faces(self.ass, n, 0, omega),
                                              self.ass)
                assert ok and violation is None

    def test_fill_recovers_faces(self):
        for n, omegas in self.omegas.items():
            for omega in omegas:
                family = faces(self.ass, n, 0, omega)
                filler = fill(family, self.ass)
                assert faces(self.ass, n, 0, filler) == family

    def test_not_kan(self):
        x1x2 = (1, 0)
        family = FaceFamily(3, 0, (x1x2, (0, 0), (0, 0)))
        assert is_kan_family(family, self.ass) == (False, (1, 2))
        with pytest.raises(ValidationError):
            fill(family, self.ass)

    def test_malformed_family(self):
        with pytest.raises(ValueError):
            FaceFamily(3, 0, ((1, 0), (0, 0)))
        with pytest.raises(ValueError):
            FaceFamily(2, 0, ((1, 0), (0,)))
        with pytest.raises(ValueError):
            is_kan_family(FaceFamily(2, 0, ((1, 0), (0, 1))), self.ass)


@pytest.mark.usefixtures("load_model_stage")
class TestStageFamilies:
    def test_fill_recovers_faces(self):
        rng = np.random.RandomState(506)
        for n in (2, 3, 4):
            for degree in self.stage.degrees(n):
                dim = self.stage.dimension(n, degree)
                for _ in range(5):
                    omega = random_coordinates(dim, rng)
                    family = faces(self.stage, n, degree, omega)
                    assert is_kan_family(family, self.stage) == (True, None)
                    filler = fill(family, self.stage)
                    assert faces(self.stage, n, degree, filler) == family

    def test_filler_in_kernel_of_rho(self):
        rho = self.rho.matrix(4, 0)
        kernel, _ = kernel_and_image(rho)
        assert kernel.dim == self.stage.dimension(4, 0) - 24
        # some kernel vector has nonzero faces, e.g. m(a, 4) with rho(a) = 0
        family = next(f for f in (faces(self.stage, 4, 0, v)
                                  for v in kernel.vectors)
                      if any(any(member) for member in f.members))
        result = fill_refined(family, FillConstraint(kernel_of=rho),
                              self.stage)
        assert not any(rho.apply(result.omega))
        assert faces(self.stage, 4, 0, result.omega) == family

    def test_kernel_filler_needs_kernel_faces(self):
        m = "e2_1"
        tree = Node(m, (Node(m, (Node(m, (1, 2)), 3)), 4))
        omega = self.stage.coordinates(TreeVector.single(tree, 0))
        family = faces(self.stage, 4, 0, omega)
        with pytest.raises(InfeasibleError):
            fill_refined(family,
                         FillConstraint(kernel_of=self.rho.matrix(4, 0)),
                         self.stage)


@pytest.mark.usefixtures("load_carriers")
class TestRefinedFillers:
    def test_coboundary_with_witness(self):
        family = faces(self.acyclic, 3, 0, (1,))
        result = fill_refined(family, FillConstraint(coboundary=True),
                              self.acyclic)
        assert result.omega == (1,)
        assert result.coboundary_witness == (1,)

    def test_cocycle(self):
        family = faces(self.acyclic, 3, 0, (2,))
        result = fill_refined(family, FillConstraint(cocycle=True),
                              self.acyclic)
        assert result.omega == (2,)

    def test_coboundary_rejected(self):
        P = self.ass
        family = faces(P, 3, 0, P.component(P.element("x1x2x3"), 0))
        with pytest.raises(ValidationError):
            fill_refined(family, FillConstraint(coboundary=True), self.ass)

    def test_image_and_kernel(self):
        omega = self.omegas[3][1]
        family = faces(self.ass, 3, 0, omega)
        constraint = FillConstraint(image_of=Matrix.identity(6))
        result = fill_refined(family, constraint, self.ass)
        assert result.image_witness == result.omega
        zero = FaceFamily(3, 0, ((0, 0),) * 3)
        everything = Matrix.identity(6)
        result = fill_refined(zero, FillConstraint(kernel_of=everything),
                              self.ass)
        assert not any(result.omega)


@pytest.mark.usefixtures("load_carriers")
class TestEquivariantFillers:
    def test_binary_generators(self):
        P = self.ass
        module = regular_module(2)
        families = {lbl: faces(P, 2, 0, P.component(P.element(lbl), 0))
                    for lbl in module.basis.flat_labels()}
        fillers = fill_equivariant(families, module, P)
        half = Fraction(1, 2)
        assert fillers == {"x1x2": (half, half), "x2x1": (half, half)}
        for lbl, omega in fillers.items():
            assert faces(P, 2, 0, omega) == families[lbl]
        _assert_equivariant(P, module, fillers, 0)

    def test_regular_generators(self):
        P = self.ass
        module = regular_module(3)
        families = {lbl: faces(P, 3, 0, P.component(P.element(lbl), 0))
                    for lbl in module.basis.flat_labels()}
        fillers = fill_equivariant(families, module, P)
        for lbl, omega in fillers.items():
            assert faces(P, 3, 0, omega) == families[lbl]
        _assert_equivariant(P, module, fillers, 0)


@pytest.mark.usefixtures("load_model_stage")
class TestEquivariantStageFillers:
    def test_binary_stage_generators(self):
        stage = self.stage
        module = stage.generators[2]
        families = {}
        for lbl in module.basis.flat_labels():
            omega = stage.coordinates(TreeVector.single(Node(lbl, (1, 2)), 0))
            families[lbl] = faces(stage, 2, 0, omega)
        fillers = fill_equivariant(families, module, stage)
        for lbl, omega in fillers.items():
            assert faces(stage, 2, 0, omega) == families[lbl]
        _assert_equivariant(stage, module, fillers, 0)
