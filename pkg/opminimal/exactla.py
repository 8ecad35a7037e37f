# -*- coding: utf-8 -*-
"""
Exact linear algebra over the rationals: row reduction, linear solves,
kernels, images, quotients and cohomology of finite cochain complexes.

Scalars are fractions.Fraction (always in lowest terms with a positive
denominator); matrices are immutable wrappers around numpy object arrays of
Fractions. Every canonical choice is made by pivoting, so repeated runs give
identical results.
"""
from dataclasses import dataclass
from fractions import Fraction
import logging
import numpy as np

from .__validation import ValidationError, validate_scalar


logger = logging.getLogger(__name__)

_ZERO = Fraction(0)
_ONE = Fraction(1)
_to_fraction = np.frompyfunc(validate_scalar, 1, 1)


''' Vectors '''


def vector(values):
    """ Returns values as a coordinate vector (tuple of Fractions) """
    return tuple(validate_scalar(v) for v in values)


def zero_vector(n:int):
    return (_ZERO,) * n


def unit_vector(n:int, k:int):
    v = [_ZERO] * n
    v[k] = _ONE
    return tuple(v)


def is_zero_vector(v):
    return all(x == 0 for x in v)


def add_vectors(*vectors):
    if not vectors:
        raise ValueError("Nothing to add")
    total = np.array(vectors[0], dtype=object)
    for v in vectors[1:]:
        if len(v) != len(total):
            raise ValueError("Cannot add vectors of different lengths")
        total = total + np.array(v, dtype=object)
    return tuple(total.tolist())


def scale_vector(c, v):
    c = validate_scalar(c)
    return tuple(c * x for x in v)


def linear_combination(coefficients, vectors, length:int):
    """ Returns sum_k coefficients[k] * vectors[k] """
    total = np.array(zero_vector(length), dtype=object)
    for c, v in zip(coefficients, vectors):
        if c != 0:
            total = total + np.array(v, dtype=object) * c
    return tuple(total.tolist())


''' Matrices '''


class Matrix:
    """ Immutable dense matrix of exact rationals

    Args:
        entries (list of rows or numpy array): entries convertible to
            Fraction (int, str "p/q", or Fraction)
        rows, cols (int, optional): shape; required when a dimension is zero
    """
    __slots__ = ('_array',)

    def __init__(self, entries=(), rows:int=None, cols:int=None):
        arr = np.array(entries, dtype=object)
        if arr.size == 0:
            rows = arr.shape[0] if rows is None else rows
            if cols is None:
                cols = arr.shape[1] if arr.ndim == 2 else 0
            arr = np.empty((rows, cols), dtype=object)
        elif arr.ndim != 2:
            raise ValidationError("Matrix entries must form a rectangular "
                                  f"grid. Found array of shape {arr.shape}")
        else:
            if rows is not None and arr.shape[0] != rows or \
               cols is not None and arr.shape[1] != cols:
                raise ValidationError(f"Expected a {rows}x{cols} matrix. "
                                      f"Found {arr.shape[0]}x{arr.shape[1]}")
            arr = _to_fraction(arr).astype(object)
        self._array = arr

    @classmethod
    def _wrap(cls, array):
        obj = cls.__new__(cls)
        obj._array = array
        return obj

    @classmethod
    def zeros(cls, rows:int, cols:int):
        return cls._wrap(np.full((rows, cols), _ZERO, dtype=object))

    @classmethod
    def identity(cls, n:int):
        arr = np.full((n, n), _ZERO, dtype=object)
        for k in range(n):
            arr[k, k] = _ONE
        return cls._wrap(arr)

    @classmethod
    def from_columns(cls, columns, rows:int):
        columns = [vector(c) for c in columns]
        if not columns:
            return cls.zeros(rows, 0)
        return cls(np.array(columns, dtype=object).T, rows=rows)

    @classmethod
    def from_rows(cls, rows_, cols:int):
        rows_ = [vector(r) for r in rows_]
        if not rows_:
            return cls.zeros(0, cols)
        return cls(rows_, cols=cols)

    @property
    def rows(self):
        return self._array.shape[0]

    @property
    def cols(self):
        return self._array.shape[1]

    @property
    def shape(self):
        return self._array.shape

    @property
    def entries(self):
        return tuple(tuple(r) for r in self._array.tolist())

    @property
    def T(self):
        return Matrix._wrap(self._array.T.copy())

    def to_array(self):
        return self._array.copy()

    def row(self, i:int):
        return tuple(self._array[i].tolist())

    def column(self, j:int):
        return tuple(self._array[:, j].tolist())

    def columns(self):
        return [self.column(j) for j in range(self.cols)]

    def select(self, rows=None, cols=None):
        arr = self._array
        if rows is not None:
            arr = arr[list(rows), :] if len(rows) else \
                np.empty((0, arr.shape[1]), dtype=object)
        if cols is not None:
            arr = arr[:, list(cols)] if len(cols) else \
                np.empty((arr.shape[0], 0), dtype=object)
        return Matrix._wrap(arr.copy())

    def apply(self, v):
        """ Returns the matrix-vector product as a coordinate vector """
        if len(v) != self.cols:
            raise ValueError(f"Cannot apply a {self.rows}x{self.cols} matrix"
                             f" to a vector of length {len(v)}")
        return self.__matmul__(Matrix.from_columns([v], self.cols)).column(0)

    def is_zero(self):
        return all(x == 0 for x in self._array.flat)

    def scale(self, c):
        return Matrix._wrap(self._array * validate_scalar(c))

    def __getitem__(self, key):
        return self._array[key]

    def __matmul__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.cols != other.rows:
            raise ValueError(f"Inner shapes do not match: {self.shape} @ "
                             f"{other.shape}")
        if self.cols == 0 or self.rows == 0 or other.cols == 0:
            return Matrix.zeros(self.rows, other.cols)
        return Matrix._wrap(self._array.dot(other._array))

    def __add__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.shape != other.shape:
            raise ValueError("Matrix addition requires equal shapes")
        return Matrix._wrap(self._array + other._array)

    def __sub__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.shape != other.shape:
            raise ValueError("Matrix subtraction requires equal shapes")
        return Matrix._wrap(self._array - other._array)

    def __neg__(self):
        return Matrix._wrap(-self._array)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.shape != other.shape:
            return False
        return all(x == y for x, y in zip(self._array.flat, other._array.flat))

    def __hash__(self):
        return hash((self.shape, self.entries))

    def __repr__(self):
        body = '\n'.join('  '.join(str(x).rjust(5) for x in r)
                         for r in self.entries)
        return f"Matrix({self.rows}x{self.cols})\n{body}"


def hstack(*matrices):
    rows = matrices[0].rows
    if any(m.rows != rows for m in matrices):
        raise ValueError("hstack requires equal row counts")
    cols = sum(m.cols for m in matrices)
    if rows == 0 or cols == 0:
        return Matrix.zeros(rows, cols)
    return Matrix._wrap(np.concatenate([m._array for m in matrices], axis=1))


def vstack(*matrices):
    cols = matrices[0].cols
    if any(m.cols != cols for m in matrices):
        raise ValueError("vstack requires equal column counts")
    rows = sum(m.rows for m in matrices)
    if rows == 0 or cols == 0:
        return Matrix.zeros(rows, cols)
    return Matrix._wrap(np.concatenate([m._array for m in matrices], axis=0))


def block_matrix(blocks, row_sizes, col_sizes):
    """ Assembles a matrix from a grid of blocks; None stands for zero

    Args:
        blocks (list of lists): blocks[r][c] is a Matrix of shape
            (row_sizes[r], col_sizes[c]) or None
    """
    rows = []
    for r, size in enumerate(row_sizes):
        row = [blocks[r][c] if blocks[r][c] is not None
               else Matrix.zeros(size, csize)
               for c, csize in enumerate(col_sizes)]
        rows.append(hstack(*row) if row else Matrix.zeros(size, 0))
    if not rows:
        return Matrix.zeros(0, sum(col_sizes))
    return vstack(*rows)


''' Row reduction '''


def _row_reduce(arr, transform=None):
    """ Reduces arr in place to reduced row echelon form, applying the same
        row operations to transform (if given). Returns the pivot columns.
    """
    n_rows, n_cols = arr.shape
    pivots = []
    row = 0
    for col in range(n_cols):
        if row == n_rows:
            break
        candidates = np.nonzero(arr[row:, col] != 0)[0]
        if not len(candidates):
            continue
        p = row + int(candidates[0])
        if p != row:
            arr[[row, p]] = arr[[p, row]]
            if transform is not None:
                transform[[row, p]] = transform[[p, row]]
        inv = _ONE / arr[row, col]
        if inv != 1:
            arr[row] = arr[row] * inv
            if transform is not None:
                transform[row] = transform[row] * inv
        others = [k for k in np.nonzero(arr[:, col] != 0)[0] if k != row]
        if others:
            factors = arr[others, col].copy()
            arr[others] = arr[others] - np.outer(factors, arr[row])
            if transform is not None:
                transform[others] = transform[others] - \
                    np.outer(factors, transform[row])
        pivots.append(col)
        row += 1
    return pivots


def rref(m:Matrix):
    """ Returns the reduced row echelon form of m

    Args:
        m (Matrix): any rational matrix

    Returns:
        tuple: (reduced Matrix, list of pivot columns, transform Matrix T)
            with T @ m equal to the reduced matrix
    """
    arr = m.to_array()
    transform = Matrix.identity(m.rows).to_array()
    pivots = _row_reduce(arr, transform)
    return Matrix._wrap(arr), pivots, Matrix._wrap(transform)


def rank(m:Matrix):
    return len(_row_reduce(m.to_array()))


def solve_linear(a:Matrix, b):
    """ Solves a @ x = b exactly

    Args:
        a (Matrix): coefficient matrix
        b (sequence): right-hand side of length a.rows

    Returns:
        tuple or None: the solution with every free variable set to zero,
            or None if b is not in the image of a
    """
    if len(b) != a.rows:
        raise ValueError(f"Right-hand side has length {len(b)}; expected "
                         f"{a.rows}")
    if a.rows == 0:
        return zero_vector(a.cols)
    arr = np.concatenate([a.to_array(),
                          np.array(vector(b), dtype=object).reshape(-1, 1)],
                         axis=1)
    pivots = _row_reduce(arr)
    if pivots and pivots[-1] == a.cols:
        return None
    x = [_ZERO] * a.cols
    for r, p in enumerate(pivots):
        x[p] = arr[r, -1]
    return tuple(x)


def inverse(m:Matrix):
    if m.rows != m.cols:
        raise ValueError("Only square matrices can be inverted")
    arr = m.to_array()
    transform = Matrix.identity(m.rows).to_array()
    pivots = _row_reduce(arr, transform)
    if len(pivots) != m.rows:
        raise ValueError("Matrix is singular")
    return Matrix._wrap(transform)


''' Subspaces '''


@dataclass(frozen=True)
class SubspaceBasis:
    """ A subspace of Q^ambient_dim, stored as the nonzero rows of a reduced
        row echelon matrix so that equal subspaces compare equal
    """
    ambient_dim: int
    vectors: tuple
    pivots: tuple

    @classmethod
    def span(cls, vectors, ambient_dim:int):
        vectors = [vector(v) for v in vectors]
        if any(len(v) != ambient_dim for v in vectors):
            raise ValueError(f"Vectors must have length {ambient_dim}")
        if not vectors:
            return cls(ambient_dim, (), ())
        arr = np.array(vectors, dtype=object)
        pivots = _row_reduce(arr)
        rows = tuple(tuple(arr[r].tolist()) for r in range(len(pivots)))
        return cls(ambient_dim, rows, tuple(pivots))

    @property
    def dim(self):
        return len(self.vectors)

    def contains(self, v):
        if len(v) != self.ambient_dim:
            return False
        return is_zero_vector(self._residual(v))

    def _residual(self, v):
        coords = [v[p] for p in self.pivots]
        return tuple(x - y for x, y in
                     zip(v, linear_combination(coords, self.vectors,
                                               self.ambient_dim)))

    def coordinates(self, v):
        """ Returns the coordinates of v in this basis

        Raises:
            ValueError: if v is not in the subspace
        """
        if not self.contains(v):
            raise ValueError("Vector does not lie in the subspace")
        return tuple(validate_scalar(v[p]) for p in self.pivots)

    def as_columns(self):
        """ Returns the ambient_dim x dim matrix whose columns are the basis """
        return Matrix.from_columns(self.vectors, self.ambient_dim)

    def is_subspace_of(self, other):
        return all(other.contains(v) for v in self.vectors)


def kernel_and_image(m:Matrix):
    """ Returns the kernel (in Q^cols) and the image (in Q^rows) of m

    Returns:
        tuple of SubspaceBasis: (kernel, image)
    """
    arr = m.to_array()
    pivots = _row_reduce(arr)
    free = [c for c in range(m.cols) if c not in set(pivots)]
    kernel_vectors = []
    for f in free:
        v = [_ZERO] * m.cols
        v[f] = _ONE
        for r, p in enumerate(pivots):
            v[p] = -arr[r, f]
        kernel_vectors.append(v)
    kernel = SubspaceBasis.span(kernel_vectors, m.cols)
    image = SubspaceBasis.span(m.T.entries, m.rows)
    return kernel, image


''' Cohomology '''


@dataclass(frozen=True)
class CohomologyPresentation:
    """ Cohomology of a cochain complex at one degree

    Attributes:
        cocycles (SubspaceBasis): kernel of the outgoing differential
        coboundaries (SubspaceBasis): image of the incoming differential
        class_reps (tuple): one cocycle per basis class
        projection (Matrix): dim x ambient; sends a cocycle to its class
            coordinates and annihilates coboundaries
        section (Matrix): ambient x dim; columns are class_reps
    """
    cocycles: SubspaceBasis
    coboundaries: SubspaceBasis
    class_reps: tuple
    projection: Matrix
    section: Matrix

    @property
    def dim(self):
        return len(self.class_reps)

    @property
    def ambient_dim(self):
        return self.cocycles.ambient_dim

    def class_of(self, v):
        """ Returns the class coordinates of the cocycle v

        Raises:
            ValueError: if v is not a cocycle
        """
        if not self.cocycles.contains(v):
            raise ValueError("Vector is not a cocycle")
        return self.projection.apply(v)

    def representative(self, coordinates):
        return self.section.apply(coordinates)


def cohomology_at_degree(d_in:Matrix, d_out:Matrix):
    """ Presents ker(d_out) / im(d_in)

    Args:
        d_in (Matrix): differential arriving at this degree (N x a)
        d_out (Matrix): differential leaving this degree (b x N)

    Raises:
        ValidationError: if the shapes disagree or d_out @ d_in != 0

    Returns:
        CohomologyPresentation
    """
    if d_in.rows != d_out.cols:
        raise ValidationError(f"Differentials do not compose: {d_in.shape} "
                              f"then {d_out.shape}")
    if not (d_out @ d_in).is_zero():
        raise ValidationError("Malformed complex: d_out @ d_in != 0")
    n = d_in.rows
    cocycles, _ = kernel_and_image(d_out)
    _, coboundaries = kernel_and_image(d_in)
    # the first maximal independent subset of [coboundaries, cocycles]
    candidates = list(coboundaries.vectors) + list(cocycles.vectors)
    if candidates:
        arr = Matrix.from_columns(candidates, n).to_array()
        pivots = _row_reduce(arr)
    else:
        pivots = []
    reps = tuple(candidates[p] for p in pivots if p >= coboundaries.dim)
    # complete [coboundaries, reps] with unit vectors off the cocycle pivots
    complement = [unit_vector(n, k) for k in range(n)
                  if k not in set(cocycles.pivots)]
    q = Matrix.from_columns(list(coboundaries.vectors) + list(reps) +
                            complement, n)
    q_inv = inverse(q) if n else Matrix.zeros(0, 0)
    start = coboundaries.dim
    projection = q_inv.select(rows=range(start, start + len(reps)))
    section = Matrix.from_columns(reps, n)
    return CohomologyPresentation(cocycles, coboundaries, reps, projection,
                                  section)


def quotient_presentation(subspace_columns:Matrix):
    """ Presents Q^rows / span(columns) as the cohomology of the two-term
        complex with incoming differential subspace_columns and zero
        outgoing differential
    """
    return cohomology_at_degree(subspace_columns,
                                Matrix.zeros(0, subspace_columns.rows))
