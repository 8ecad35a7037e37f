'''
Validation tests for opminimal.exactla
'''
from fractions import Fraction
from itertools import product
import numpy as np
import pytest

from opminimal.exactla import (Matrix, SubspaceBasis, block_matrix,
                               cohomology_at_degree, inverse,
                               kernel_and_image, quotient_presentation, rank,
                               rref, solve_linear, vector)
from opminimal.__validation import ValidationError
from .__utils import minor_rank, random_matrix
np.random.seed(506)


@pytest.fixture(scope="class")
def load_random_matrices(request):
    request.cls.matrices = [random_matrix(5, 7, seed=s) for s in range(12)]
    request.cls.square = [random_matrix(6, 6, seed=100 + s, zero_share=0.1)
                          for s in range(8)]
    yield


class TestMatrix:
    def test_entries_are_fractions(self):
        m = Matrix([[1, "1/2"], [Fraction(2, 4), 0]])
        assert m.row(0) == (Fraction(1), Fraction(1, 2))
        assert all(isinstance(x, Fraction) for r in m.entries for x in r)

    def test_rejects_floats(self):
        with pytest.raises(TypeError):
            Matrix([[0.5]])

    def test_rejects_booleans(self):
        with pytest.raises(TypeError):
            Matrix([[True, 0]])
        with pytest.raises(TypeError):
            vector((1, False))

    def test_ragged(self):
        with pytest.raises(ValidationError):
            Matrix([1, 2, 3])

    def test_empty_shapes(self):
        m = Matrix.from_columns([], 3)
        assert m.shape == (3, 0)
        assert (Matrix.zeros(2, 3) @ m).shape == (2, 0)
        assert Matrix.zeros(0, 2).apply([1, 2]) == ()

    def test_arithmetic(self):
        a = Matrix([[1, 2], [3, 4]])
        assert a @ Matrix.identity(2) == a
        assert (a - a).is_zero()
        assert -a + a == Matrix.zeros(2, 2)
        assert a.T == Matrix([[1, 3], [2, 4]])
        assert a.apply([1, -1]) == (-1, -1)

    def test_block_matrix(self):
        a = Matrix([[1]])
        m = block_matrix([[a, None], [None, a.scale(2)]], [1, 1], [1, 1])
        assert m == Matrix([[1, 0], [0, 2]])


class TestRowReduction:
    def test_identity(self):
        r, pivots, t = rref(Matrix.identity(2))
        assert r == Matrix.identity(2)
        assert pivots == [0, 1]

    def test_rank_one(self):
        m = Matrix([[2, 4], [1, 2]])
        r, pivots, t = rref(m)
        assert r == Matrix([[1, 2], [0, 0]])
        assert pivots == [0]
        assert t @ m == r


@pytest.mark.usefixtures("load_random_matrices")
class TestRandomMatrices:
    """ Cross-checks row reduction against independent oracles
    """
    def test_rank_matches_minors(self):
        for m in self.matrices:
            assert rank(m) == minor_rank(m)

    def test_rref_idempotent(self):
        for m in self.matrices:
            r, pivots, t = rref(m)
            assert rref(r)[0] == r
            assert t @ m == r
            assert pivots == sorted(set(pivots))

    def test_rank_nullity(self):
        for m in self.matrices:
            kernel, image = kernel_and_image(m)
            assert kernel.dim + image.dim == m.cols
            assert image.dim == rank(m)
            for v in kernel.vectors:
                assert not any(m.apply(v))

    def test_consistent_systems(self):
        rng = np.random.RandomState(506)
        for m in self.square:
            x = tuple(Fraction(int(v)) for v in rng.randint(-4, 5, m.cols))
            b = m.apply(x)
            solution = solve_linear(m, b)
            assert solution is not None
            assert m.apply(solution) == b

    def test_inverse(self):
        for m in self.square:
            if rank(m) == m.rows:
                assert inverse(m) @ m == Matrix.identity(m.rows)


class TestSolveLinear:
    def test_identity(self):
        assert solve_linear(Matrix.identity(3), [1, 2, 3]) == (1, 2, 3)

    def test_free_variables_zero(self):
        assert solve_linear(Matrix([[1, 1]]), [2]) == (2, 0)

    def test_no_solution(self):
        assert solve_linear(Matrix([[1, 1], [1, 1]]), [1, 2]) is None
        assert solve_linear(Matrix.zeros(1, 0), [1]) is None

    def test_bad_length(self):
        with pytest.raises(ValueError):
            solve_linear(Matrix.identity(2), [1])


class TestSubspaces:
    def test_zero_and_identity(self):
        kernel, image = kernel_and_image(Matrix.zeros(3, 3))
        assert (kernel.dim, image.dim) == (3, 0)
        kernel, image = kernel_and_image(Matrix.identity(4))
        assert (kernel.dim, image.dim) == (0, 4)

    def test_canonical_representation(self):
        a = SubspaceBasis.span([[1, 1, 0], [0, 1, 1]], 3)
        b = SubspaceBasis.span([[1, 2, 1], [1, 0, -1]], 3)
        assert a == b
        assert a.contains(vector([2, 3, 1]))
        assert not a.contains(vector([1, 0, 0]))
        with pytest.raises(ValueError):
            a.coordinates(vector([1, 0, 0]))

    def test_coordinates(self):
        a = SubspaceBasis.span([[1, 1, 0], [0, 1, 1]], 3)
        v = vector([2, 3, 1])
        coords = a.coordinates(v)
        rebuilt = a.as_columns().apply(coords)
        assert rebuilt == v


class TestCohomology:
    def test_zero_differentials(self):
        h = cohomology_at_degree(Matrix.zeros(3, 0), Matrix.zeros(0, 3))
        assert h.dim == 3
        assert h.section == Matrix.identity(3)

    def test_incoming_identity(self):
        h = cohomology_at_degree(Matrix.identity(2), Matrix.zeros(0, 2))
        assert h.dim == 0

    def test_malformed_complex(self):
        with pytest.raises(ValidationError):
            cohomology_at_degree(Matrix([[1], [0]]), Matrix([[1, 0]]))
        with pytest.raises(ValidationError):
            cohomology_at_degree(Matrix.identity(2), Matrix.identity(3))

    def test_small_complexes(self):
        """ Every complex Q^a -> Q^2 -> Q^b with entries in {0, 1} against a
            hand count: dim H = (2 - rank d_out) - rank d_in
        """
        for a, b in product((0, 1, 2), repeat=2):
            for ins in product((0, 1), repeat=2 * a):
                d_in = Matrix([[ins[2 * k + r] for k in range(a)]
                               for r in range(2)], rows=2, cols=a)
                for outs in product((0, 1), repeat=2 * b):
                    d_out = Matrix([list(outs[2 * r:2 * r + 2])
                                    for r in range(b)], rows=b, cols=2)
                    if not (d_out @ d_in).is_zero():
                        continue
                    h = cohomology_at_degree(d_in, d_out)
                    assert h.dim == 2 - rank(d_out) - rank(d_in)
                    ident = h.projection @ h.section
                    assert ident == Matrix.identity(h.dim)
                    for v in h.coboundaries.vectors:
                        assert not any(h.projection.apply(v))
                    for rep in h.class_reps:
                        assert h.cocycles.contains(rep)

    def test_class_of(self):
        d_in = Matrix([[1], [1], [0]])
        h = cohomology_at_degree(d_in, Matrix.zeros(0, 3))
        assert h.dim == 2
        assert not any(h.class_of(vector([1, 1, 0])))
        with pytest.raises(ValueError):
            cohomology_at_degree(Matrix.zeros(2, 0),
                                 Matrix([[1, 0]])).class_of(vector([1, 0]))

    def test_quotient(self):
        q = quotient_presentation(Matrix([[1], [0]]))
        assert q.dim == 1
        assert q.projection.apply(vector([1, 0])) == (0,)
