from fractions import Fraction
from itertools import combinations
import numpy as np
import sympy

from opminimal.dgoperad import FiniteDgOperad
from opminimal.exactla import Matrix
from opminimal.freeop import TreeVector
from opminimal.symmod import GradedBasis, SigmaAction, SigmaModule


def minor_rank(m:Matrix):
    """ Rank as the size of the largest non-vanishing minor. Independent of
        row reduction; only suited to small matrices.

    Args:
        m (Matrix): the matrix

    Returns:
        int: the rank
    """
    full = sympy.Matrix(m.rows, m.cols, lambda r, c: sympy.Rational(
        m[r, c].numerator, m[r, c].denominator))
    for k in range(min(m.rows, m.cols), 0, -1):
        for rows in combinations(range(m.rows), k):
            for cols in combinations(range(m.cols), k):
                if full.extract(list(rows), list(cols)).det() != 0:
                    return k
    return 0


def random_fraction(rng, spread:int=3, zero_share:float=0.3):
    """ Small random rational, zero with probability zero_share """
    if rng.uniform() < zero_share:
        return Fraction(0)
    return Fraction(int(rng.randint(-spread, spread + 1)),
                    int(rng.randint(1, spread + 1)))


def random_matrix(rows:int, cols:int, seed:int=506, **kwargs):
    """ Synthesizes a random rational matrix

    Args:
        rows (int): number of rows
        cols (int): number of columns
        seed (int, optional): numpy seed. Defaults to 506.

    Returns:
        Matrix
    """
    rng = np.random.RandomState(seed)
    return Matrix([[random_fraction(rng, **kwargs) for _ in range(cols)]
                   for _ in range(rows)], rows=rows, cols=cols)


def random_coordinates(length:int, rng):
    return tuple(random_fraction(rng) for _ in range(length))


def acyclic_operad(max_arity:int=3):
    """ Com tensored with the acyclic algebra spanned by 1 and a, |a| = -1,
        d(a) = 1, a*a = 0. Every arity holds c_n in degree 0 and a_n in
        degree -1 with d(a_n) = c_n, so the cohomology vanishes everywhere
        although the operad carries both units and m2.
    """
    modules = {n: SigmaModule(GradedBasis(n, {-1: [f"a{n}"], 0: [f"c{n}"]}),
                              SigmaAction(n, {}))
               for n in range(max_arity + 1)}
    differentials = {n: {-1: Matrix([[1]])} for n in range(max_arity + 1)}
    # flat order (a, c) in every arity; a o a = 0, a o c = c o a = a
    table = Matrix([[0, 1, 1, 0], [0, 0, 0, 1]])
    compositions = {(m, i, n): table
                    for m in range(1, max_arity + 1)
                    for n in range(0, max_arity - m + 2)
                    for i in range(1, m + 1)}
    return FiniteDgOperad("acyclic", max_arity, modules,
                          differentials=differentials,
                          compositions=compositions, unit1="c1", unit0="c0",
                          m2="c2")


def random_tree_vector(stage, n:int, degree:int, rng, terms:int=3):
    """ Random combination of up to terms basis trees of the stage; zero if
        the stage has no trees of that arity and degree
    """
    trees = stage.basis(n, degree)
    if not trees:
        return TreeVector.zero(n, degree)
    picks = rng.choice(len(trees), size=min(terms, len(trees)), replace=False)
    return TreeVector(n, degree, {trees[k]: Fraction(int(rng.randint(1, 4)))
                                  * (-1 if rng.uniform() < 0.5 else 1)
                                  for k in picks})


def thick_com(max_arity:int=4):
    """ Com tensored with the algebra spanned by 1, a and b, |a| = -1,
        d(a) = b, all products of a and b zero. Every arity holds a_n in
        degree -1 and b_n, c_n in degree 0 with d(a_n) = b_n, so the
        cohomology is that of Com while the differential does not vanish.
    """
    modules = {n: SigmaModule(GradedBasis(n, {-1: [f"a{n}"],
                                              0: [f"b{n}", f"c{n}"]}),
                              SigmaAction(n, {}))
               for n in range(max_arity + 1)}
    differentials = {n: {-1: Matrix([[1], [0]])}
                     for n in range(max_arity + 1)}
    # flat order (a, b, c) in every arity; c is the unit of the algebra
    table = Matrix([[0, 0, 1, 0, 0, 0, 1, 0, 0],
                    [0, 0, 0, 0, 0, 1, 0, 1, 0],
                    [0, 0, 0, 0, 0, 0, 0, 0, 1]])
    compositions = {(m, i, n): table
                    for m in range(1, max_arity + 1)
                    for n in range(0, max_arity - m + 2)
                    for i in range(1, m + 1)}
    return FiniteDgOperad("thick_com", max_arity, modules,
                          differentials=differentials,
                          compositions=compositions, unit1="c1", unit0="c0",
                          m2="c2")
