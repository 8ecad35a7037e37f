# -*- coding: utf-8 -*-
"""
Finite-dimensional dg operads presented by structure constants, and
morphisms from free stages into them.

Elements of arity n are coordinate vectors over the flattened basis of
P(n): degrees ascending, labels in order within a degree. The composition
o_i : P(m) x P(n) -> P(m+n-1) is a matrix with one column per basis pair,
column index a * dim P(n) + b.
"""
from dataclasses import dataclass
from fractions import Fraction
import logging
import pandas as pd

from .exactla import Matrix, cohomology_at_degree, rank
from .freeop import UNIT, Node, TreeVector, standardize
from .symmod import (GradedBasis, LambdaMaps, SigmaAction, SigmaModule,
                     parse_word, regular_module, trivial_module,
                     validate_sigma_module, word_label)
from .__validation import (QUASI_ISO_COLUMNS, HypothesisError,
                           ValidationError, validate_arity, validate_scalar,
                           validate_slot, violation_report)
from . import utils


logger = logging.getLogger(__name__)

_ZERO = Fraction(0)
_ONE = Fraction(1)


BUILTINS = {
    "ass": "associative operad: Ass(n) is the regular representation of "
           "Sigma_n in degree 0",
    "ass_plus": "unitary associative operad: Ass with Ass(0) spanned by the "
                "unit",
    "com": "commutative operad: Com(n) is the trivial representation",
    "com_plus": "unitary commutative operad: Com with Com(0) spanned by the "
                "unit",
}


@dataclass(frozen=True)
class Element:
    """ An element of P(arity), as coordinates over the flattened basis """
    arity: int
    coords: tuple

    def __add__(self, other):
        if self.arity != other.arity:
            raise ValueError("Cannot add elements of different arities")
        return Element(self.arity, tuple(x + y for x, y in
                                         zip(self.coords, other.coords)))

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c):
        c = validate_scalar(c)
        return Element(self.arity, tuple(c * x for x in self.coords))

    def is_zero(self):
        return all(x == 0 for x in self.coords)


class FiniteDgOperad:
    """ A dg operad truncated at max_arity, given by structure constants

    Args:
        name (str): display name
        max_arity (int): largest arity present
        modules (dict): arity -> SigmaModule (missing arities are zero)
        differentials (dict): arity -> {degree: Matrix from degree to
            degree+1}; missing entries are zero
        compositions (dict): (m, i, n) -> Matrix of o_i; missing entries are
            zero
        unit1 (str): label of the operad unit in arity 1, degree 0
        unit0 (str, optional): label of the unit point in arity 0
        m2 (str, optional): label of the unitary multiplication in arity 2

    Raises:
        ValidationError: inconsistent shapes or labels
    """
    def __init__(self, name:str, max_arity:int, modules:dict,
                 differentials:dict=None, compositions:dict=None,
                 unit1:str=None, unit0:str=None, m2:str=None):
        validate_arity(max_arity, 1, "max_arity")
        self.name = name
        self.max_arity = max_arity
        self.modules = {}
        for n in range(max_arity + 1):
            module = modules.get(n)
            if module is None:
                module = SigmaModule(GradedBasis(n, {}), SigmaAction(n, {}))
            if module.arity != n:
                raise ValidationError(f"Module of arity {module.arity} filed "
                                      f"under arity {n}")
            self.modules[n] = module
        extra = set(modules) - set(self.modules)
        if extra:
            raise ValidationError(f"Arities {sorted(extra)} exceed max_arity")
        seen = set()
        for module in self.modules.values():
            labels = set(module.basis.flat_labels())
            if labels & seen:
                raise ValidationError(f"Labels {sorted(labels & seen)} repeat "
                                      "across arities")
            seen |= labels
        self.differentials = {}
        for n, per_degree in (differentials or {}).items():
            for d, mat in per_degree.items():
                expected = (self.dimension(n, d + 1), self.dimension(n, d))
                if mat.shape != expected:
                    raise ValidationError(f"Differential of arity {n}, "
                                          f"degree {d} has shape {mat.shape};"
                                          f" expected {expected}")
                self.differentials.setdefault(n, {})[d] = mat
        self.compositions = {}
        for key, mat in (compositions or {}).items():
            m, i, n = key
            if m < 1 or not 1 <= i <= m or n < 0 or m + n - 1 > max_arity:
                raise ValidationError(f"Composition {key} is out of range")
            expected = (self.flat_dim(m + n - 1),
                        self.flat_dim(m) * self.flat_dim(n))
            if mat.shape != expected:
                raise ValidationError(f"Composition {key} has shape "
                                      f"{mat.shape}; expected {expected}")
            self.compositions[tuple(key)] = mat
        for label, n, what in ((unit1, 1, "unit1"), (unit0, 0, "unit0"),
                               (m2, 2, "m2")):
            if label is None:
                continue
            if n > max_arity or label not in self.modules[n].basis:
                raise ValidationError(f"{what} label {label!r} not found in "
                                      f"arity {n}")
            if self.modules[n].basis.degree_of(label) != 0:
                raise ValidationError(f"{what} must have degree 0")
        if unit1 is None:
            raise ValidationError("An operad needs a unit in arity 1")
        self.unit1 = unit1
        self.unit0 = unit0
        self.m2 = m2
        self._cache = {}

    def __repr__(self):
        return f"FiniteDgOperad({self.name!r}, max_arity={self.max_arity})"

    ''' bases '''

    @property
    def unitary(self):
        return self.unit0 is not None

    def basis(self, n:int):
        return self.modules[n].basis if n in self.modules else \
            GradedBasis(n, {})

    def degrees(self, n:int):
        return list(self.basis(n).nonzero_degrees)

    def dimension(self, n:int, degree:int):
        return self.basis(n).dimension(degree)

    def flat_dim(self, n:int):
        return self.basis(n).total_dim

    def flat_labels(self, n:int):
        return self.basis(n).flat_labels()

    def degree_slice(self, n:int, degree:int):
        start = 0
        for d in self.degrees(n):
            if d == degree:
                return slice(start, start + self.dimension(n, d))
            start += self.dimension(n, d)
        return slice(start, start)

    def flat_index(self, label):
        for n, module in self.modules.items():
            if label in module.basis:
                d, pos = module.basis.locate(label)
                return n, self.degree_slice(n, d).start + pos
        raise KeyError(f"Unknown label {label!r}")

    ''' elements '''

    def zero(self, n:int):
        return Element(n, (_ZERO,) * self.flat_dim(n))

    def element(self, label, coef=1):
        n, idx = self.flat_index(label)
        coords = [_ZERO] * self.flat_dim(n)
        coords[idx] = validate_scalar(coef)
        return Element(n, tuple(coords))

    def homogeneous(self, n:int, degree:int, coords):
        full = [_ZERO] * self.flat_dim(n)
        sl = self.degree_slice(n, degree)
        if len(coords) != sl.stop - sl.start:
            raise ValueError(f"Expected {sl.stop - sl.start} coordinates for "
                             f"arity {n}, degree {degree}")
        full[sl] = coords
        return Element(n, tuple(full))

    def component(self, e:Element, degree:int):
        return e.coords[self.degree_slice(e.arity, degree)]

    def element_degree(self, e:Element):
        """ Returns the degree of a nonzero homogeneous element, else None """
        found = {d for d in self.degrees(e.arity)
                 if any(x != 0 for x in self.component(e, d))}
        return found.pop() if len(found) == 1 else None

    ''' sparse structure constants '''

    def _sparse(self, e:Element):
        return {k: c for k, c in enumerate(e.coords) if c != 0}

    def _dense(self, n:int, sparse:dict):
        coords = [_ZERO] * self.flat_dim(n)
        for k, c in sparse.items():
            coords[k] = c
        return Element(n, tuple(coords))

    def _composition_table(self, m:int, i:int, n:int):
        key = ('comp', m, i, n)
        if key not in self._cache:
            table = {}
            mat = self.compositions.get((m, i, n))
            width = self.flat_dim(n)
            if mat is not None:
                for col in range(mat.cols):
                    entries = [(r, c) for r, c in enumerate(mat.column(col))
                               if c != 0]
                    if entries:
                        table[divmod(col, width)] = entries
            self._cache[key] = table
        return self._cache[key]

    def compose_sparse(self, m:int, i:int, n:int, a:dict, b:dict):
        table = self._composition_table(m, i, n)
        out = {}
        for ka, ca in a.items():
            for kb, cb in b.items():
                for r, c in table.get((ka, kb), ()):
                    total = out.get(r, 0) + ca * cb * c
                    if total:
                        out[r] = total
                    else:
                        out.pop(r, None)
        return out

    def _permutation_table(self, n:int, sigma):
        key = ('perm', n, sigma)
        if key not in self._cache:
            table = {}
            for d in self.degrees(n):
                offset = self.degree_slice(n, d).start
                mat = self.modules[n].permutation_matrix(sigma, d)
                for col in range(mat.cols):
                    table[offset + col] = [(offset + r, c) for r, c in
                                           enumerate(mat.column(col))
                                           if c != 0]
            self._cache[key] = table
        return self._cache[key]

    def act_sparse(self, n:int, sigma, a:dict):
        sigma = tuple(sigma)
        if sigma == utils.identity_permutation(n):
            return dict(a)
        table = self._permutation_table(n, sigma)
        out = {}
        for k, c in a.items():
            for r, v in table[k]:
                total = out.get(r, 0) + c * v
                if total:
                    out[r] = total
                else:
                    out.pop(r, None)
        return out

    def act(self, sigma, e:Element):
        sigma = utils.validate_permutation(sigma, e.arity)
        return self._dense(e.arity, self.act_sparse(e.arity, sigma,
                                                    self._sparse(e)))

    def apply_differential(self, e:Element):
        coords = [_ZERO] * self.flat_dim(e.arity)
        for d in self.degrees(e.arity):
            part = self.component(e, d)
            if not any(part) or self.dimension(e.arity, d + 1) == 0:
                continue
            image = self.differential_matrix(e.arity, d).apply(part)
            sl = self.degree_slice(e.arity, d + 1)
            coords[sl] = image
        return Element(e.arity, tuple(coords))

    ''' carrier views '''

    def differential_matrix(self, n:int, degree:int):
        """ Matrix of d from degree to degree + 1 in arity n """
        mat = self.differentials.get(n, {}).get(degree)
        if mat is None:
            return Matrix.zeros(self.dimension(n, degree + 1),
                                self.dimension(n, degree))
        return mat

    def restriction_matrix(self, n:int, i:int, degree:int):
        key = ('delta', n, i, degree)
        if key not in self._cache:
            cols = []
            sl = self.degree_slice(n, degree)
            for k in range(sl.start, sl.stop):
                image = restriction_target(self, i, self._dense(n, {k: _ONE}))
                cols.append(self.component(image, degree))
            self._cache[key] = Matrix.from_columns(
                cols, self.dimension(n - 1, degree))
        return self._cache[key]

    def action_matrix(self, n:int, sigma, degree:int):
        return self.modules[n].permutation_matrix(tuple(sigma), degree)

    def transposition_matrix(self, n:int, i:int, degree:int):
        return self.modules[n].transposition_matrix(i, degree)


''' builtins '''


def _compose_words(u, i, v):
    n = len(v)
    out = []
    for letter in u:
        if letter == i:
            out.extend(x + i - 1 for x in v)
        elif letter > i:
            out.append(letter + n - 1)
        else:
            out.append(letter)
    return tuple(out)


def _composition_matrix(P, m, i, n, compose_labels):
    rows = P.flat_dim(m + n - 1)
    a_labels, b_labels = P.flat_labels(m), P.flat_labels(n)
    target = {lbl: k for k, lbl in enumerate(P.flat_labels(m + n - 1))}
    arr = Matrix.zeros(rows, len(a_labels) * len(b_labels)).to_array()
    for ka, a in enumerate(a_labels):
        for kb, b in enumerate(b_labels):
            arr[target[compose_labels(a, i, b)], ka * len(b_labels) + kb] = \
                _ONE
    return Matrix(arr, rows=rows, cols=len(a_labels) * len(b_labels))


def make_builtin(name:str, max_arity:int=4):
    """ Returns one of the builtin operads truncated at max_arity

    Args:
        name (str): one of "ass", "ass_plus", "com", "com_plus"
        max_arity (int): at least 2

    Raises:
        ValueError: unknown name or max_arity below 2
    """
    if name not in BUILTINS:
        raise ValueError(f"Unknown builtin {name!r}. Choose from "
                         f"{sorted(BUILTINS)}")
    validate_arity(max_arity, 2, "max_arity")
    unitary = name.endswith("_plus")
    low = 0 if unitary else 1
    if name.startswith("ass"):
        modules = {n: regular_module(n) for n in range(low, max_arity + 1)}

        def compose_labels(a, i, b):
            return word_label(_compose_words(parse_word(a), i,
                                             parse_word(b)))
        unit1, unit0, m2 = "x1", ("1" if unitary else None), "x1x2"
    else:
        modules = {n: trivial_module(n, f"c{n}")
                   for n in range(low, max_arity + 1)}

        def compose_labels(a, i, b):
            return f"c{int(a[1:]) + int(b[1:]) - 1}"
        unit1, unit0, m2 = "c1", ("c0" if unitary else None), "c2"
    shell = FiniteDgOperad(name, max_arity, modules, unit1=unit1,
                           unit0=unit0, m2=m2)
    compositions = {}
    for m in range(1, max_arity + 1):
        for n in range(low, max_arity - m + 2):
            for i in range(1, m + 1):
                compositions[(m, i, n)] = _composition_matrix(
                    shell, m, i, n, compose_labels)
    return FiniteDgOperad(name, max_arity, modules,
                          compositions=compositions, unit1=unit1,
                          unit0=unit0, m2=m2)


''' operations '''


def partial_compose_target(P:FiniteDgOperad, a:Element, i:int, b:Element):
    """ Returns a o_i b by the structure constants of P

    Raises:
        ValueError: slot out of range or result above max_arity
    """
    validate_slot(i, a.arity)
    if a.arity + b.arity - 1 > P.max_arity:
        raise ValueError(f"Arity {a.arity + b.arity - 1} exceeds the "
                         f"truncation {P.max_arity}")
    out = P.compose_sparse(a.arity, i, b.arity, P._sparse(a), P._sparse(b))
    return P._dense(a.arity + b.arity - 1, out)


def restriction_target(P:FiniteDgOperad, i:int, v:Element):
    """ Returns delta_i(v) = v o_i 1

    Raises:
        ValidationError: P has no unit in arity zero
    """
    if P.unit0 is None:
        raise ValidationError(f"{P.name} has no arity-zero unit")
    return partial_compose_target(P, v, i, P.element(P.unit0))


def degeneracy_target(P:FiniteDgOperad, i:int, v:Element):
    """ Returns s_i(v) = v o_i m2

    Raises:
        ValidationError: P has no unitary multiplication
    """
    if P.m2 is None:
        raise ValidationError(f"{P.name} has no multiplication m2")
    return partial_compose_target(P, v, i, P.element(P.m2))


def cohomology(carrier, n:int, degree:int):
    """ Cohomology of any carrier (operad or stage) at arity n and degree """
    return cohomology_at_degree(carrier.differential_matrix(n, degree - 1),
                                carrier.differential_matrix(n, degree))


def arity_cohomology(P:FiniteDgOperad, n:int, check_hypotheses:bool=False):
    """ Returns the cohomology of P(n) as {degree: CohomologyPresentation}

    Args:
        check_hypotheses (bool): for n in (0, 1) require the cohomology to
            be one-dimensional in degree 0 and spanned by the unit

    Raises:
        ValidationError: d^2 != 0
        HypothesisError: a checked hypothesis fails
    """
    validate_arity(n, 0)
    if n > P.max_arity:
        raise ValueError(f"Arity {n} exceeds max_arity {P.max_arity}")
    result = {d: cohomology(P, n, d) for d in P.degrees(n)}
    if check_hypotheses and n in (0, 1):
        dims = {d: h.dim for d, h in result.items() if h.dim}
        if dims != {0: 1}:
            raise HypothesisError(f"HP({n}) must be one-dimensional in "
                                  f"degree 0. Found dimensions {dims}")
        unit = P.unit1 if n == 1 else P.unit0
        if unit is None:
            raise HypothesisError(f"HP({n}) is not spanned by a unit")
        vec = P.component(P.element(unit), 0)
        h = result[0]
        if not h.cocycles.contains(vec) or h.coboundaries.contains(vec):
            raise HypothesisError(f"The unit of arity {n} does not span "
                                  f"HP({n})")
    return result


def check_hypotheses(P:FiniteDgOperad, unitary:bool):
    """ Raises HypothesisError unless the minimal model hypotheses hold """
    arity_cohomology(P, 1, check_hypotheses=True)
    if not unitary:
        return
    if P.unit0 is None:
        raise HypothesisError(f"{P.name} has no arity-zero unit; unitary "
                              "mode needs HP(0) = k")
    arity_cohomology(P, 0, check_hypotheses=True)
    if P.m2 is None:
        raise HypothesisError("unitary multiplication missing")
    ident = P.element(P.unit1)
    m2 = P.element(P.m2)
    if restriction_target(P, 1, m2) != ident or \
            restriction_target(P, 2, m2) != ident:
        raise HypothesisError("m2 o_1 1 = id = m2 o_2 1 fails")
    if not P.apply_differential(m2).is_zero():
        raise HypothesisError("m2 is not a cocycle")


def _basis_elements(P, n):
    for k, label in enumerate(P.flat_labels(n)):
        yield label, P.basis(n).degree_of(label), {k: _ONE}


def validate_operad_axioms(P:FiniteDgOperad, unitary:bool=False):
    """ Checks the operad axioms exhaustively on basis elements

    Args:
        unitary (bool): also require the unitary multiplication

    Returns:
        pandas DataFrame: violation report with the witnessing elements
    """
    rows = []
    N = P.max_arity
    for n in range(N + 1):
        report = validate_sigma_module(P.modules[n])
        rows.extend(report.itertuples(index=False, name=None))
        for d in P.degrees(n):
            dd = P.differential_matrix(n, d + 1) @ P.differential_matrix(n, d)
            if not dd.is_zero():
                rows.append(("d_squared", f"arity {n}, degree {d}",
                             "d o d != 0"))
            for i in range(1, n):
                lhs = P.differential_matrix(n, d) @ \
                    P.transposition_matrix(n, i, d)
                rhs = P.transposition_matrix(n, i, d + 1) @ \
                    P.differential_matrix(n, d)
                if lhs != rhs:
                    rows.append(("d_equivariance", f"arity {n}, degree {d}",
                                 f"d does not commute with s_{i}"))
    rows.extend(_check_units(P, unitary))
    rows.extend(_check_compositions(P))
    return violation_report(rows)


def _check_units(P, unitary):
    rows = []
    ident = {P.flat_index(P.unit1)[1]: _ONE}
    for n in range(P.max_arity + 1):
        for label, _, a in _basis_elements(P, n):
            if n >= 1 and P.compose_sparse(1, 1, n, ident, a) != a:
                rows.append(("unit", label, "id o_1 a != a"))
            for i in range(1, n + 1):
                if P.compose_sparse(n, i, 1, a, ident) != a:
                    rows.append(("unit", label, f"a o_{i} id != a"))
    for label in (P.unit1, P.unit0, P.m2):
        if label is not None and \
                not P.apply_differential(P.element(label)).is_zero():
            rows.append(("cocycle", label, "distinguished element is not a "
                         "cocycle"))
    if unitary:
        if P.unit0 is None or P.m2 is None:
            rows.append(("unitary_multiplication", P.name,
                         "unitary multiplication missing"))
        else:
            ident_e = P.element(P.unit1)
            m2 = P.element(P.m2)
            for i in (1, 2):
                if restriction_target(P, i, m2) != ident_e:
                    rows.append(("unitary_multiplication", P.m2,
                                 f"m2 o_{i} 1 != id"))
    return rows


def _check_compositions(P):
    rows = []
    N = P.max_arity
    low = 0 if P.unit0 is not None else 1
    elements = {n: list(_basis_elements(P, n)) for n in range(N + 1)}
    arities = [n for n in range(low, N + 1) if elements[n]]
    for m in arities:
        if m == 0:
            continue
        for n in arities:
            if m + n - 1 > N:
                continue
            for la, da, a in elements[m]:
                for lb, db, b in elements[n]:
                    for i in range(1, m + 1):
                        ab = P.compose_sparse(m, i, n, a, b)
                        where = f"({la}) o_{i} ({lb})"
                        # Leibniz
                        lhs = _d_sparse(P, m + n - 1, ab)
                        rhs = _add(P.compose_sparse(m, i, n, _d_sparse(P, m, a),
                                                    b),
                                   P.compose_sparse(m, i, n, a,
                                                    _d_sparse(P, n, b)),
                                   -1 if da % 2 else 1)
                        if lhs != rhs:
                            rows.append(("leibniz", where,
                                         "d(a o_i b) != da o_i b "
                                         "+- a o_i db"))
                        # equivariance in a
                        for k in range(1, m):
                            s = utils.transposition(m, k)
                            pi = utils.composition_permutation(s, i, n)
                            left = P.compose_sparse(m, s[i - 1], n,
                                                    P.act_sparse(m, s, a), b)
                            if left != P.act_sparse(m + n - 1, pi, ab):
                                rows.append(("equivariance", where,
                                             f"outer action of s_{k}"))
                        # equivariance in b
                        for k in range(1, n):
                            t = utils.transposition(n, k)
                            pi = utils.inner_composition_permutation(m, i, t)
                            left = P.compose_sparse(m, i, n, a,
                                                    P.act_sparse(n, t, b))
                            if left != P.act_sparse(m + n - 1, pi, ab):
                                rows.append(("equivariance", where,
                                             f"inner action of s_{k}"))
                        rows.extend(_check_associativity(
                            P, elements, arities, (m, la, da, a),
                            (n, lb, db, b), i, ab))
    return rows


def _check_associativity(P, elements, arities, first, second, i, ab):
    rows = []
    N = P.max_arity
    m, la, _, a = first
    n, lb, db, b = second
    for p in arities:
        if m + n + p - 2 > N:
            continue
        for lc, dc, c in elements[p]:
            # sequential
            for j in range(1, n + 1 if n + p - 1 <= N else 1):
                lhs = P.compose_sparse(m + n - 1, i + j - 1, p, ab, c)
                rhs = P.compose_sparse(m, i, n + p - 1, a,
                                       P.compose_sparse(n, j, p, b, c))
                if lhs != rhs:
                    rows.append(("associativity",
                                 f"({la} o_{i} {lb}) o_{i + j - 1} {lc}",
                                 "sequential associativity fails"))
            # parallel
            for j in range(i + 1, m + 1 if m + p - 1 <= N else i + 1):
                lhs = P.compose_sparse(m + n - 1, j + n - 1, p, ab, c)
                ac = P.compose_sparse(m, j, p, a, c)
                rhs = P.compose_sparse(m + p - 1, i, n, ac, b)
                sign = -1 if (db * dc) % 2 else 1
                if lhs != {k: sign * v for k, v in rhs.items()}:
                    rows.append(("associativity",
                                 f"({la} o_{i} {lb}) o_{j + n - 1} {lc}",
                                 "parallel associativity fails"))
    return rows


def _d_sparse(P, n, a):
    return P._sparse(P.apply_differential(P._dense(n, a)))


def _add(x, y, sign):
    out = dict(x)
    for k, v in y.items():
        total = out.get(k, 0) + sign * v
        if total:
            out[k] = total
        else:
            out.pop(k, None)
    return out


def simplicial_identity_report(P:FiniteDgOperad, max_arity:int=None):
    """ Checks the five families of simplicial-like identities between the
        restrictions delta_i and the degeneracies s_i on basis elements

    Returns:
        pandas DataFrame: violation report
    """
    max_arity = P.max_arity if max_arity is None else min(max_arity,
                                                          P.max_arity)
    rows = []
    if P.unit0 is None or P.m2 is None:
        rows.append(("unitary_multiplication", P.name,
                     "restrictions and degeneracies need a unit point and "
                     "m2"))
        return violation_report(rows)

    def d(i, v):
        return restriction_target(P, i, v)

    def s(i, v):
        return degeneracy_target(P, i, v)

    for n in range(max_arity + 1):
        for label in P.flat_labels(n):
            w = P.element(label)
            for j in range(2, n + 1):
                for i in range(1, j):
                    if d(i, d(j, w)) != d(j - 1, d(i, w)):
                        rows.append(("delta_delta", f"{label}, i={i}, j={j}",
                                     "delta_i delta_j != delta_(j-1) "
                                     "delta_i"))
            if n + 1 > max_arity:
                continue
            for j in range(1, n + 1):
                sj = s(j, w)
                if d(j, sj) != w:
                    rows.append(("delta_s_left", f"{label}, i={j}",
                                 "delta_i s_i != id"))
                if d(j + 1, sj) != w:
                    rows.append(("delta_s_right", f"{label}, i={j}",
                                 "delta_(i+1) s_i != id"))
                for i in range(1, j):
                    if d(i, sj) != s(j - 1, d(i, w)):
                        rows.append(("delta_s_below",
                                     f"{label}, i={i}, j={j}",
                                     "delta_i s_j != s_(j-1) delta_i"))
                for i in range(j + 2, n + 2):
                    if d(i, sj) != s(j, d(i - 1, w)):
                        rows.append(("delta_s_above",
                                     f"{label}, i={i}, j={j}",
                                     "delta_i s_j != s_j delta_(i-1)"))
    return violation_report(rows)


def lambda_maps(P:FiniteDgOperad):
    """ Exports the restrictions of a unitary operad as LambdaMaps """
    if P.unit0 is None:
        raise ValidationError(f"{P.name} has no arity-zero unit")
    bases = {n: P.basis(n) for n in range(P.max_arity + 1)}
    maps = {(n, i, d): P.restriction_matrix(n, i, d)
            for n in range(1, P.max_arity + 1) for i in range(1, n + 1)
            for d in P.degrees(n)}
    return LambdaMaps(bases, maps)


''' morphisms from free stages '''


class StageMorphism:
    """ A morphism rho from a free stage to a target operad, determined by
        its values on generators

    Args:
        source (FreeStage): the free stage
        target (FiniteDgOperad): the target operad
        values (dict): generator label -> Element of matching arity
    """
    def __init__(self, source, target:FiniteDgOperad, values:dict):
        self.source = source
        self.target = target
        self.values = dict(values)
        for label, e in self.values.items():
            if e.arity != source.arity_of(label):
                raise ValidationError(f"Value of {label} has arity {e.arity};"
                                      f" expected {source.arity_of(label)}")
        self._cache = {}

    def extended(self, source, values:dict):
        """ Returns the morphism on a larger stage agreeing with this one """
        morphism = StageMorphism(source, self.target,
                                 {**self.values, **values})
        morphism._cache = {k: v for k, v in self._cache.items()
                           if k[0] == 'tree'}
        return morphism

    def value_of(self, label):
        if label not in self.values:
            raise ValidationError(f"No value assigned to generator {label}")
        return self.values[label]

    def _evaluate_tree(self, tree):
        """ Sparse value of a canonical tree on leaves 1..k """
        key = ('tree', tree)
        if key in self._cache:
            return self._cache[key]
        P = self.target
        if tree is UNIT:
            result = {P.flat_index(P.unit0)[1]: _ONE}
        elif not isinstance(tree, Node):
            result = {P.flat_index(P.unit1)[1]: _ONE}
        else:
            result = P._sparse(self.value_of(tree.label))
            arity, pos = len(tree.children), 1
            block_labels = []
            for child in tree.children:
                std, leaves = standardize(child)
                value = self._evaluate_tree(std)
                result = P.compose_sparse(arity, pos, len(leaves), result,
                                          value)
                arity += len(leaves) - 1
                pos += len(leaves)
                block_labels.extend(leaves)
            result = P.act_sparse(arity, tuple(block_labels), result)
        self._cache[key] = result
        return result

    def evaluate(self, v:TreeVector):
        P = self.target
        out = {}
        for tree, coef in v.items():
            for k, c in self._evaluate_tree(tree).items():
                total = out.get(k, 0) + coef * c
                if total:
                    out[k] = total
                else:
                    out.pop(k, None)
        return P._dense(v.arity, out)

    def matrix(self, n:int, degree:int):
        """ Matrix of rho from stage(n)^degree to P(n)^degree """
        key = ('matrix', n, degree)
        if key not in self._cache:
            cols = [self.target.component(
                        self.evaluate(TreeVector.single(t, degree)), degree)
                    for t in self.source.basis(n, degree)]
            self._cache[key] = Matrix.from_columns(
                cols, self.target.dimension(n, degree))
        return self._cache[key]


def evaluate_morphism(rho:StageMorphism, v:TreeVector):
    """ Evaluates rho on a tree vector: decorations are replaced by their
        values and folded with the target compositions in depth-first order

    Raises:
        ValidationError: a generator without an assigned value
    """
    return rho.evaluate(v)


def is_quasi_iso_upto(rho:StageMorphism, n:int):
    """ Compares the cohomology of source and target in arities up to n

    Returns:
        pandas DataFrame: one row per (arity, degree) with the dimensions of
            the kernel and cokernel of H(rho)
    """
    rows = []
    low = 0 if rho.source.unitary else 1
    for k in range(low, n + 1):
        degrees = sorted(set(rho.source.degrees(k)) |
                         set(rho.target.degrees(k)))
        for d in degrees:
            hs = cohomology(rho.source, k, d)
            hp = cohomology(rho.target, k, d)
            if not (hs.dim or hp.dim):
                continue
            r = rank(hp.projection @ rho.matrix(k, d) @ hs.section)
            rows.append((k, d, hs.dim, hp.dim, r, hs.dim - r, hp.dim - r,
                         hs.dim == hp.dim == r))
    return pd.DataFrame(rows, columns=QUASI_ISO_COLUMNS)


def load_operad(source, validate:bool=True):
    """ Reads an operad from a JSON file path or a parsed dict

    Raises:
        ValidationError: unparsable input or, when validate is set, failed
            operad axioms
    """
    from .__serialization import operad_from_dict, read_json
    data = read_json(source) if not isinstance(source, dict) else source
    P = operad_from_dict(data)
    if validate:
        report = validate_operad_axioms(P)
        if not report.empty:
            first = report.iloc[0]
            raise ValidationError(f"{len(report)} operad axiom violations; "
                                  f"first: {first['Check']} at "
                                  f"{first['Location']}")
    return P


def dump_operad(P:FiniteDgOperad, path=None):
    """ Returns the JSON text of P, writing it to path when given """
    from .__serialization import operad_to_dict, write_json
    return write_json(operad_to_dict(P), path)

