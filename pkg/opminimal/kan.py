# -*- coding: utf-8 -*-
"""
Kan-like calculus over operads with restrictions: compatibility of face
families, fillers, refined fillers and Sigma_n-equivariant fillers.

A family omega_1..omega_n of arity n-1 is a Kan family when
delta_i omega_j = delta_{j-1} omega_i for all i < j. A filler is an omega of
arity n with delta_i omega = omega_i for every i. Fillers are found by one
exact linear solve over the stacked restriction maps; every result is checked
before it is returned.
"""
from dataclasses import dataclass
import logging
from typing import Optional, Protocol

from .exactla import (Matrix, block_matrix, linear_combination, solve_linear,
                      zero_vector)
from .symmod import SigmaModule, reynolds_average
from .__validation import (InconsistencyError, InfeasibleError,
                           ValidationError)
from . import utils


logger = logging.getLogger(__name__)


class Carrier(Protocol):
    """ Anything exposing per-arity, per-degree matrices: finite dg operads
        and free stages
    """
    def degrees(self, n:int) -> list: ...

    def dimension(self, n:int, degree:int) -> int: ...

    def differential_matrix(self, n:int, degree:int) -> Matrix: ...

    def restriction_matrix(self, n:int, i:int, degree:int) -> Matrix: ...

    def action_matrix(self, n:int, sigma, degree:int) -> Matrix: ...


@dataclass(frozen=True)
class FaceFamily:
    """ Candidate faces omega_1..omega_n, coordinate vectors of the carrier
        in arity n-1 and a common degree
    """
    n: int
    degree: int
    members: tuple

    def __post_init__(self):
        if len(self.members) != self.n:
            raise ValueError(f"A family of arity {self.n} needs {self.n} "
                             f"members. Found {len(self.members)}")
        if len({len(m) for m in self.members}) > 1:
            raise ValueError("Members have different dimensions: mixed "
                             "arities or degrees")


@dataclass(frozen=True)
class FillConstraint:
    """ Extra requirements on a filler

    Args:
        cocycle (bool): d omega = 0
        coboundary (bool): omega = d u for some u (returned as witness)
        kernel_of (Matrix, optional): phi with phi omega = 0
        image_of (Matrix, optional): Phi with omega = Phi y (y returned)
    """
    cocycle: bool = False
    coboundary: bool = False
    kernel_of: Optional[Matrix] = None
    image_of: Optional[Matrix] = None


@dataclass(frozen=True)
class FillResult:
    omega: tuple
    coboundary_witness: Optional[tuple] = None
    image_witness: Optional[tuple] = None


def faces(carrier:Carrier, n:int, degree:int, omega):
    """ Returns the family (delta_1 omega, ..., delta_n omega) """
    return FaceFamily(n, degree, tuple(
        carrier.restriction_matrix(n, i, degree).apply(omega)
        for i in range(1, n + 1)))


def _check_dims(family, carrier):
    expected = carrier.dimension(family.n - 1, family.degree)
    if any(len(m) != expected for m in family.members):
        raise ValueError(f"Members must have length {expected} (arity "
                         f"{family.n - 1}, degree {family.degree})")


def is_kan_family(family:FaceFamily, carrier:Carrier):
    """ Checks delta_i omega_j = delta_{j-1} omega_i for all i < j

    Returns:
        tuple: (bool, first violating pair (i, j) or None)
    """
    _check_dims(family, carrier)
    n, d = family.n, family.degree
    if n < 2:
        return True, None
    for j in range(2, n + 1):
        for i in range(1, j):
            lhs = carrier.restriction_matrix(n - 1, i, d).apply(
                family.members[j - 1])
            rhs = carrier.restriction_matrix(n - 1, j - 1, d).apply(
                family.members[i - 1])
            if lhs != rhs:
                return False, (i, j)
    return True, None


def _require_kan(family, carrier):
    ok, violation = is_kan_family(family, carrier)
    if not ok:
        i, j = violation
        raise ValidationError(f"Not a Kan family: delta_{i} omega_{j} != "
                              f"delta_{j - 1} omega_{i}")


def _assert_faces(family, carrier, omega):
    found = faces(carrier, family.n, family.degree, omega)
    if found.members != tuple(tuple(m) for m in family.members):
        raise InconsistencyError(f"Filler of arity {family.n} does not "
                                 "recover its faces")


def fill(family:FaceFamily, carrier:Carrier):
    """ Returns omega with delta_i omega = omega_i for all i

    Raises:
        ValidationError: family is not a Kan family
        InfeasibleError: no filler exists (the carrier is malformed)
    """
    return fill_refined(family, FillConstraint(), carrier).omega


def fill_refined(family:FaceFamily, constraint:FillConstraint,
                 carrier:Carrier):
    """ Returns a filler satisfying every flag of constraint

        The linear system stacks the face equations with the flag
        equations; unknowns are omega, then u (coboundary flag), then y
        (image flag).

    Raises:
        ValidationError: family not Kan, or flags inconsistent with the
            faces
        InfeasibleError: no filler exists

    Returns:
        FillResult
    """
    _require_kan(family, carrier)
    n, d = family.n, family.degree
    _check_flags(family, constraint, carrier)
    dim = carrier.dimension(n, d)
    face_dim = carrier.dimension(n - 1, d)
    col_sizes = [dim]
    if constraint.coboundary:
        col_sizes.append(carrier.dimension(n, d - 1))
    if constraint.image_of is not None:
        col_sizes.append(constraint.image_of.cols)
    blocks, row_sizes, rhs = [], [], []

    def add_row(size, pieces, values):
        row = [None] * len(col_sizes)
        for pos, mat in pieces.items():
            row[pos] = mat
        blocks.append(row)
        row_sizes.append(size)
        rhs.extend(values)

    for i in range(1, n + 1):
        add_row(face_dim, {0: carrier.restriction_matrix(n, i, d)},
                family.members[i - 1])
    if constraint.cocycle:
        size = carrier.dimension(n, d + 1)
        add_row(size, {0: carrier.differential_matrix(n, d)},
                zero_vector(size))
    pos = 1
    if constraint.coboundary:
        add_row(dim, {0: Matrix.identity(dim),
                      pos: -carrier.differential_matrix(n, d - 1)},
                zero_vector(dim))
        pos += 1
    if constraint.kernel_of is not None:
        size = constraint.kernel_of.rows
        add_row(size, {0: constraint.kernel_of}, zero_vector(size))
    if constraint.image_of is not None:
        add_row(dim, {0: Matrix.identity(dim), pos: -constraint.image_of},
                zero_vector(dim))
    system = block_matrix(blocks, row_sizes, col_sizes)
    solution = solve_linear(system, rhs)
    if solution is None:
        raise InfeasibleError("No filler exists", f"arity {n}, degree {d}")
    omega = solution[:dim]
    offset = dim
    witness_u = witness_y = None
    if constraint.coboundary:
        witness_u = solution[offset:offset + col_sizes[1]]
        offset += col_sizes[1]
    if constraint.image_of is not None:
        witness_y = solution[offset:]
    _assert_faces(family, carrier, omega)
    result = FillResult(tuple(omega), witness_u, witness_y)
    _assert_flags(result, constraint, carrier, n, d)
    logger.debug(f"Filled a family of arity {n}, degree {d}")
    return result


def _check_flags(family, constraint, carrier):
    n, d = family.n, family.degree
    if constraint.cocycle:
        dmat = carrier.differential_matrix(n - 1, d)
        if any(not all(x == 0 for x in dmat.apply(m))
               for m in family.members):
            raise ValidationError("Cocycle filler requested for faces that "
                                  "are not cocycles")
    if constraint.coboundary:
        dmat = carrier.differential_matrix(n - 1, d - 1)
        if any(solve_linear(dmat, m) is None for m in family.members):
            raise ValidationError("Coboundary filler requested for faces "
                                  "that are not coboundaries")


def _assert_flags(result, constraint, carrier, n, d):
    omega = result.omega
    if constraint.cocycle and \
            any(carrier.differential_matrix(n, d).apply(omega)):
        raise InconsistencyError("Filler is not a cocycle")
    if constraint.coboundary and \
            carrier.differential_matrix(n, d - 1).apply(
                result.coboundary_witness) != omega:
        raise InconsistencyError("Filler witness does not bound")
    if constraint.kernel_of is not None and \
            any(constraint.kernel_of.apply(omega)):
        raise InconsistencyError("Filler is not in the kernel")
    if constraint.image_of is not None and \
            constraint.image_of.apply(result.image_witness) != omega:
        raise InconsistencyError("Filler is not in the image")


def fill_equivariant(families:dict, module:SigmaModule, carrier:Carrier,
                     constraint:FillConstraint=None):
    """ Fills a family depending linearly on the generators e of module,
        Sigma_n-equivariantly in e

    Args:
        families (dict): basis label of module -> FaceFamily omega_i(e)
        module (SigmaModule): the generators E(n)
        carrier (Carrier): where fillers live
        constraint (FillConstraint, optional): flags stable under the action

    Raises:
        InfeasibleError: some family has no filler
        InconsistencyError: the averaged map loses a face or equivariance,
            which signals faces that do not depend equivariantly on e

    Returns:
        dict: label -> filler coordinates, with L(sigma e) = sigma L(e)
    """
    constraint = constraint or FillConstraint()
    n = module.arity
    initial = {lbl: fill_refined(families[lbl], constraint, carrier).omega
               for lbl in module.basis.flat_labels()}

    def degree_of(lbl):
        return families[lbl].degree

    def act(sigma, vec):
        d, v = vec
        return d, carrier.action_matrix(n, sigma, d).apply(v)

    def combine(terms):
        degrees = {v[0] for _, v in terms}
        if len(degrees) != 1:
            raise InconsistencyError("The action mixes degrees")
        d = degrees.pop()
        return d, linear_combination([c for c, _ in terms],
                                     [v[1] for _, v in terms],
                                     carrier.dimension(n, d))

    averaged = reynolds_average(
        module, {lbl: (degree_of(lbl), v) for lbl, v in initial.items()},
        act, combine)
    result = {lbl: v for lbl, (_, v) in averaged.items()}
    for lbl, omega in result.items():
        _assert_faces(families[lbl], carrier, omega)
    for i in range(1, n):
        s = utils.transposition(n, i)
        for lbl in module.basis.flat_labels():
            d = degree_of(lbl)
            image = module.act_on_label(s, lbl)
            expected = linear_combination(list(image.values()),
                                          [result[f] for f in image],
                                          carrier.dimension(n, d))
            if carrier.action_matrix(n, s, d).apply(result[lbl]) != expected:
                raise InconsistencyError(f"Averaged filler of {lbl} is not "
                                         f"equivariant under s_{i}")
    return result
