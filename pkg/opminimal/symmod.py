# -*- coding: utf-8 -*-
"""
Graded Sigma-modules: arity- and degree-graded based vector spaces carrying
symmetric-group actions, and Lambda-structures (restriction maps lowering the
arity by one).

Actions are stored on the adjacent transpositions s_i = (i, i+1) only;
arbitrary permutations act through a decomposition into adjacent
transpositions, which is well defined once the Coxeter relations hold.
Degrees are cohomological and may be negative.
"""
from dataclasses import dataclass, field
from fractions import Fraction
import logging

from .exactla import Matrix
from .__validation import ValidationError, validate_arity, violation_report
from . import utils


logger = logging.getLogger(__name__)


def word_label(word):
    """ Returns the label of the permutation (word) w: "x{w1}x{w2}..."

        The empty word is labeled "1".
    """
    if not word:
        return "1"
    return "".join(f"x{k}" for k in word)


def parse_word(label:str):
    if label == "1":
        return ()
    if not label.startswith("x"):
        raise ValidationError(f"Unreadable word label {label!r}")
    return tuple(int(k) for k in label[1:].split("x"))


@dataclass(frozen=True)
class GradedBasis:
    """ Basis labels of one arity, grouped by cohomological degree

    Args:
        arity (int): non-negative arity
        degrees (dict): degree -> ordered list of labels
    """
    arity: int
    degrees: dict = field(default_factory=dict)

    def __post_init__(self):
        validate_arity(self.arity)
        clean = {int(d): tuple(labels) for d, labels in
                 sorted(self.degrees.items()) if len(labels)}
        object.__setattr__(self, 'degrees', clean)
        index = {}
        for d, labels in clean.items():
            for pos, lbl in enumerate(labels):
                if lbl in index:
                    raise ValidationError(f"Duplicate basis label {lbl!r} in "
                                          f"arity {self.arity}")
                index[lbl] = (d, pos)
        object.__setattr__(self, '_index', index)

    def labels(self, degree:int):
        return self.degrees.get(degree, ())

    def dimension(self, degree:int):
        return len(self.labels(degree))

    @property
    def nonzero_degrees(self):
        return tuple(self.degrees)

    @property
    def total_dim(self):
        return sum(len(lbls) for lbls in self.degrees.values())

    def flat_labels(self):
        """ All labels, degrees ascending """
        return [lbl for d in self.degrees for lbl in self.degrees[d]]

    def __contains__(self, label):
        return label in self._index

    def locate(self, label):
        """ Returns (degree, position) of label

        Raises:
            KeyError: unknown label
        """
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"Unknown label {label!r} in arity {self.arity}")

    def degree_of(self, label):
        return self.locate(label)[0]


@dataclass(frozen=True, eq=False)
class SigmaAction:
    """ Matrices of the adjacent transpositions, per degree

    Args:
        arity (int): n
        transpositions (dict): degree -> list of n-1 square Matrices, the
            k-th entry acting as s_{k+1}
    """
    arity: int
    transpositions: dict = field(default_factory=dict)

    def matrix(self, i:int, degree:int, dim:int):
        mats = self.transpositions.get(degree)
        if not mats:
            return Matrix.identity(dim)
        return mats[i - 1]


@dataclass(frozen=True, eq=False)
class SigmaModule:
    """ A graded Sigma_n-module with a distinguished basis """
    basis: GradedBasis
    action: SigmaAction

    def __post_init__(self):
        if self.basis.arity != self.action.arity:
            raise ValidationError("Basis and action arities differ")
        for d, mats in self.action.transpositions.items():
            dim = self.basis.dimension(d)
            if len(mats) != max(self.arity - 1, 0):
                raise ValidationError(f"Arity {self.arity} needs "
                                      f"{self.arity - 1} transposition "
                                      f"matrices in degree {d}")
            for k, m in enumerate(mats, start=1):
                if m.shape != (dim, dim):
                    raise ValidationError(f"Transposition s_{k} in degree {d}"
                                          f" has shape {m.shape}; expected "
                                          f"{(dim, dim)}")
        object.__setattr__(self, '_cache', {})

    @property
    def arity(self):
        return self.basis.arity

    def transposition_matrix(self, i:int, degree:int):
        return self.action.matrix(i, degree, self.basis.dimension(degree))

    def permutation_matrix(self, sigma, degree:int):
        """ Returns the matrix of sigma acting on the given degree """
        sigma = utils.validate_permutation(sigma, self.arity)
        key = (sigma, degree)
        if key not in self._cache:
            dim = self.basis.dimension(degree)
            result = Matrix.identity(dim)
            for i in utils.adjacent_word(sigma):
                result = self.transposition_matrix(i, degree) @ result
            self._cache[key] = result
        return self._cache[key]

    def act_on_label(self, sigma, label):
        """ Returns sigma . label as a dict label -> coefficient """
        degree, pos = self.basis.locate(label)
        column = self.permutation_matrix(sigma, degree).column(pos)
        labels = self.basis.labels(degree)
        return {labels[r]: c for r, c in enumerate(column) if c != 0}


def act_permutation(module:SigmaModule, sigma, v, degree:int):
    """ Acts by sigma on the coordinate vector v of the given degree

    Raises:
        ValueError: dimension mismatch or invalid permutation
    """
    if len(v) != module.basis.dimension(degree):
        raise ValueError(f"Vector of length {len(v)} does not match the "
                         f"dimension {module.basis.dimension(degree)} of "
                         f"degree {degree}")
    return module.permutation_matrix(sigma, degree).apply(v)


def validate_sigma_module(module:SigmaModule):
    """ Checks the Coxeter relations of the stored transpositions

    Returns:
        pandas DataFrame: violation report (empty if valid)
    """
    rows = []
    n = module.arity
    for d in module.basis.nonzero_degrees:
        dim = module.basis.dimension(d)
        ident = Matrix.identity(dim)
        mats = {i: module.transposition_matrix(i, d) for i in range(1, n)}
        for i in range(1, n):
            where = f"arity {n}, degree {d}, s_{i}"
            if mats[i] @ mats[i] != ident:
                rows.append(("involution", where, "s_i squared is not the "
                             "identity"))
            if i + 1 < n:
                a, b = mats[i], mats[i + 1]
                if a @ b @ a != b @ a @ b:
                    rows.append(("braid", where,
                                 f"s_{i} s_{i+1} s_{i} != s_{i+1} s_{i} "
                                 f"s_{i+1}"))
            for j in range(i + 2, n):
                if mats[i] @ mats[j] != mats[j] @ mats[i]:
                    rows.append(("commutation", where,
                                 f"s_{i} and s_{j} do not commute"))
    return violation_report(rows)


def direct_sum(modules, arity:int):
    """ Returns the direct sum of Sigma_n-modules with disjoint labels;
        labels keep the order of the summands within each degree
    """
    degrees = {}
    blocks = {}
    for mod in modules:
        if mod.arity != arity:
            raise ValidationError("Summands must share the arity")
        for d in mod.basis.nonzero_degrees:
            degrees.setdefault(d, []).extend(mod.basis.labels(d))
            blocks.setdefault(d, []).append(mod)
    transpositions = {}
    for d, mods in blocks.items():
        dims = [m.basis.dimension(d) for m in mods]
        total = sum(dims)
        mats = []
        for i in range(1, arity):
            arr = Matrix.zeros(total, total).to_array()
            offset = 0
            for m, dim in zip(mods, dims):
                arr[offset:offset + dim, offset:offset + dim] = \
                    m.transposition_matrix(i, d).to_array()
                offset += dim
            mats.append(Matrix(arr, rows=total, cols=total))
        transpositions[d] = mats
    return SigmaModule(GradedBasis(arity, degrees),
                       SigmaAction(arity, transpositions))


def trivial_module(n:int, label:str, degree:int=0):
    ident = [Matrix.identity(1)] * max(n - 1, 0)
    return SigmaModule(GradedBasis(n, {degree: [label]}),
                       SigmaAction(n, {degree: ident}))


def sign_module(n:int, label:str, degree:int=0):
    neg = [Matrix([[-1]])] * max(n - 1, 0)
    return SigmaModule(GradedBasis(n, {degree: [label]}),
                       SigmaAction(n, {degree: neg}))


def regular_module(n:int, degree:int=0, labeler=word_label):
    """ The regular representation of Sigma_n: basis e_w for w in Sigma_n,
        with sigma . e_w = e_{sigma w}
    """
    words = utils.all_permutations(n)
    position = {w: k for k, w in enumerate(words)}
    mats = []
    for i in range(1, n):
        s = utils.transposition(n, i)
        arr = Matrix.zeros(len(words), len(words)).to_array()
        for k, w in enumerate(words):
            arr[position[utils.compose(s, w)], k] = Fraction(1)
        mats.append(Matrix(arr))
    return SigmaModule(GradedBasis(n, {degree: [labeler(w) for w in words]}),
                       SigmaAction(n, {degree: mats} if n > 1 else {}))


def subspace_module(module:SigmaModule, subspaces:dict, labels:dict):
    """ Restricts the action to invariant subspaces, in the coordinates of
        their reduced bases

    Args:
        module (SigmaModule): ambient module
        subspaces (dict): degree -> invariant SubspaceBasis
        labels (dict): degree -> labels of the new basis vectors

    Raises:
        ValidationError: a subspace is not invariant
    """
    transpositions = {}
    for d, sub in subspaces.items():
        if not sub.dim:
            continue
        mats = []
        for i in range(1, module.arity):
            t = module.transposition_matrix(i, d)
            images = [t.apply(v) for v in sub.vectors]
            try:
                cols = [sub.coordinates(w) for w in images]
            except ValueError:
                raise ValidationError(f"Subspace of degree {d} is not "
                                      f"invariant under s_{i}")
            mats.append(Matrix.from_columns(cols, sub.dim))
        transpositions[d] = mats
    degrees = {d: labels[d] for d, sub in subspaces.items() if sub.dim}
    return SigmaModule(GradedBasis(module.arity, degrees),
                       SigmaAction(module.arity, transpositions))


def quotient_module(module:SigmaModule, presentations:dict, labels:dict):
    """ Induces the action on quotients presented as cohomology

    Args:
        presentations (dict): degree -> CohomologyPresentation whose
            cocycles and coboundaries are invariant subspaces
    """
    transpositions = {}
    for d, pres in presentations.items():
        if not pres.dim:
            continue
        mats = [pres.projection @ module.transposition_matrix(i, d) @
                pres.section for i in range(1, module.arity)]
        transpositions[d] = mats
    degrees = {d: labels[d] for d, p in presentations.items() if p.dim}
    return SigmaModule(GradedBasis(module.arity, degrees),
                       SigmaAction(module.arity, transpositions))


@dataclass(frozen=True, eq=False)
class LambdaMaps:
    """ Restriction maps delta_i between consecutive arities

    Args:
        bases (dict): arity -> GradedBasis
        maps (dict): (n, i, degree) -> Matrix from the degree component of
            arity n to that of arity n-1. Missing entries are zero maps.
    """
    bases: dict
    maps: dict = field(default_factory=dict)

    def matrix(self, n:int, i:int, degree:int):
        key = (n, i, degree)
        if key in self.maps:
            return self.maps[key]
        return Matrix.zeros(self.bases[n - 1].dimension(degree),
                            self.bases[n].dimension(degree))

    @property
    def arities(self):
        return sorted(self.bases)


def validate_lambda_structure(maps:LambdaMaps):
    """ Checks delta_i delta_j = delta_{j-1} delta_i for all i < j

    Returns:
        pandas DataFrame: violation report (empty if valid)
    """
    rows = []
    for n in maps.arities:
        if n < 2 or (n - 1) not in maps.bases or (n - 2) not in maps.bases:
            continue
        for d in maps.bases[n].nonzero_degrees:
            for j in range(2, n + 1):
                for i in range(1, j):
                    lhs = maps.matrix(n - 1, i, d) @ maps.matrix(n, j, d)
                    rhs = maps.matrix(n - 1, j - 1, d) @ maps.matrix(n, i, d)
                    if lhs != rhs:
                        rows.append(("lambda_coherence",
                                     f"arity {n}, degree {d}, i={i}, j={j}",
                                     f"delta_{i} delta_{j} != "
                                     f"delta_{j-1} delta_{i}"))
    return violation_report(rows)


def reynolds_average(module:SigmaModule, values:dict, act, combine):
    """ Averages a linear map e -> values[e] over Sigma_n so that it commutes
        with the action: L(e) = 1/n! sum_sigma sigma . L0(sigma^-1 . e)

    Args:
        module (SigmaModule): the source module; values are keyed by its
            basis labels
        values (dict): label -> vector in the target
        act (callable): act(sigma, vector) -> vector, the target action
        combine (callable): combine([(coef, vector), ...]) -> vector

    Returns:
        dict: label -> averaged vector; values unchanged if the map already
            commutes with every adjacent transposition
    """
    n = module.arity
    labels = module.basis.flat_labels()
    if all(act(utils.transposition(n, i), values[lbl]) ==
           combine([(c, values[f]) for f, c in
                    module.act_on_label(utils.transposition(n, i),
                                        lbl).items()])
           for i in range(1, n) for lbl in labels):
        return dict(values)
    weight = Fraction(1, utils.group_order(n))
    sums = {lbl: [] for lbl in labels}
    for sigma in utils.all_permutations(n):
        inv = utils.inverse(sigma)
        for lbl in labels:
            pre = combine([(c, values[f]) for f, c in
                           module.act_on_label(inv, lbl).items()])
            sums[lbl].append((weight, act(sigma, pre)))
    return {lbl: combine(terms) for lbl, terms in sums.items()}
