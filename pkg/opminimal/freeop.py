# -*- coding: utf-8 -*-
"""
Free graded operads on canonical decorated trees.

A tree is either an integer leaf label, the arity-zero UNIT, or a Node whose
label is a generator and whose children fill the generator's inputs in
order. A tree is canonical when the children of every vertex are sorted by
the minimal leaf beneath them. As a graded object a tree is the tensor
product of its decorations listed in depth-first (pre-order) order; every
sign in this module is the Koszul sign of reordering that tensor.

Stages (FreeStage) are never modified once built: extensions return new
stages that share the lower-arity data of the old one.
"""
from collections import namedtuple
from fractions import Fraction
from itertools import count, product
import logging
from math import comb
from typing import NamedTuple

from sympy.utilities.iterables import multiset_partitions

from .exactla import Matrix
from .symmod import SigmaModule
from .__validation import ValidationError, validate_scalar, validate_slot
from . import utils


logger = logging.getLogger(__name__)

_ONE = Fraction(1)


''' Trees '''


class Node(NamedTuple):
    """ Internal vertex decorated by a generator label """
    label: str
    children: tuple


class _UnitTree:
    """ The arity-zero tree representing the unit point of a unitary stage """
    __slots__ = ()

    def __repr__(self):
        return "UNIT"

    def __reduce__(self):
        return "UNIT"


UNIT = _UnitTree()


def tree_arity(tree):
    if tree is UNIT:
        return 0
    return len(tree_leaves(tree))


def tree_leaves(tree):
    """ Leaf labels in depth-first order """
    if tree is UNIT:
        return []
    if isinstance(tree, Node):
        return [leaf for c in tree.children for leaf in tree_leaves(c)]
    return [tree]


def tree_vertices(tree):
    """ Internal vertices in depth-first (pre-order) order """
    if isinstance(tree, Node):
        out = [tree]
        for c in tree.children:
            out.extend(tree_vertices(c))
        return out
    return []


def tree_key(tree):
    """ Sort key giving the canonical order of trees in a TreeVector """
    if tree is UNIT:
        return (-1,)
    if isinstance(tree, Node):
        return (1, tree.label, tuple(tree_key(c) for c in tree.children))
    return (0, tree)


def tree_to_str(tree):
    """ Prefix notation, e.g. e2_1(1,e2_1(2,3)) """
    if tree is UNIT:
        return "unit"
    if isinstance(tree, Node):
        inner = ','.join(tree_to_str(c) for c in tree.children)
        return f"{tree.label}({inner})"
    return str(tree)


def relabel_tree(tree, mapping):
    if isinstance(tree, Node):
        return Node(tree.label, tuple(relabel_tree(c, mapping)
                                      for c in tree.children))
    if tree is UNIT:
        return tree
    return mapping[tree]


def standardize(tree):
    """ Returns (tree relabeled monotonically onto 1..k, sorted leaf labels)

        Monotone relabeling preserves canonical form.
    """
    leaves = sorted(tree_leaves(tree))
    return relabel_tree(tree, {leaf: k for k, leaf in enumerate(leaves, 1)}), \
        leaves


''' Tree vectors '''


class TreeVector:
    """ Finite linear combination of canonical trees of one arity and degree

    Args:
        arity (int): common arity of the trees
        degree (int): common degree of the trees
        terms (dict, optional): tree -> coefficient; zero coefficients are
            dropped
    """
    __slots__ = ('arity', 'degree', '_terms')

    def __init__(self, arity:int, degree:int, terms=None):
        clean = {}
        for tree, coef in (terms or {}).items():
            coef = validate_scalar(coef)
            if coef != 0:
                clean[tree] = coef
        self.arity = arity
        self.degree = degree
        self._terms = clean

    @classmethod
    def _wrap(cls, arity, degree, terms):
        obj = cls.__new__(cls)
        obj.arity = arity
        obj.degree = degree
        obj._terms = terms
        return obj

    @classmethod
    def zero(cls, arity:int, degree:int):
        return cls._wrap(arity, degree, {})

    @classmethod
    def single(cls, tree, degree:int, coef=1):
        return cls(tree_arity(tree), degree, {tree: coef})

    def items(self):
        """ (tree, coefficient) pairs in canonical tree order """
        return sorted(self._terms.items(), key=lambda kv: tree_key(kv[0]))

    def trees(self):
        return [t for t, _ in self.items()]

    def coefficient(self, tree):
        return self._terms.get(tree, Fraction(0))

    def is_zero(self):
        return not self._terms

    def __len__(self):
        return len(self._terms)

    def _check(self, other):
        if not isinstance(other, TreeVector):
            raise TypeError("Expected a TreeVector")
        if self.arity != other.arity:
            raise ValueError(f"Arity mismatch: {self.arity} vs "
                             f"{other.arity}")
        if self._terms and other._terms and self.degree != other.degree:
            raise ValueError(f"Degree mismatch: {self.degree} vs "
                             f"{other.degree}")

    def __add__(self, other):
        self._check(other)
        terms = dict(self._terms)
        for tree, coef in other._terms.items():
            _accumulate(terms, tree, coef)
        degree = self.degree if self._terms else other.degree
        return TreeVector._wrap(self.arity, degree, terms)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c):
        c = validate_scalar(c)
        if c == 0:
            return TreeVector.zero(self.arity, self.degree)
        return TreeVector._wrap(self.arity, self.degree,
                                {t: c * v for t, v in self._terms.items()})

    def __rmul__(self, c):
        return self.scale(c)

    def __eq__(self, other):
        if not isinstance(other, TreeVector):
            return NotImplemented
        if self.arity != other.arity or self._terms != other._terms:
            return False
        return not self._terms or self.degree == other.degree

    __hash__ = None

    def __repr__(self):
        if not self._terms:
            return f"TreeVector(arity={self.arity}, 0)"
        body = " + ".join(f"{c}*{tree_to_str(t)}" for t, c in self.items())
        return f"TreeVector(arity={self.arity}, degree={self.degree}, {body})"


def _accumulate(terms, tree, coef):
    total = terms.get(tree, 0) + coef
    if total:
        terms[tree] = total
    else:
        terms.pop(tree, None)


''' Canonicalization '''


# a tree whose vertices carry reference ranks for the Koszul sign
_Raw = namedtuple('_Raw', 'label children rank')


def _to_raw(tree, rank, relabel=None, graft=None):
    counter = count()

    def walk(t):
        if isinstance(t, Node):
            k = next(counter)
            return _Raw(t.label, tuple(walk(c) for c in t.children), rank(k))
        if graft is not None and t in graft:
            return graft[t]
        return relabel(t) if relabel is not None else t
    return walk(tree)


def _graft_raw(x, kids, k):
    """ Raw copy of the canonical tree x whose leaf j is replaced by
        kids[j-1]; vertices of x are ranked (k, s)
    """
    counter = count()

    def walk(t):
        if isinstance(t, Node):
            s = next(counter)
            return _Raw(t.label, tuple(walk(c) for c in t.children), (k, s))
        return kids[t - 1]
    return walk(x)


def _replace_vertex(tree, target, build, relabel=None):
    """ Raw copy of tree with vertices ranked (index, 0), in which the vertex
        of depth-first index target is replaced by build(raw children)
    """
    counter = count()

    def walk(t):
        if isinstance(t, Node):
            k = next(counter)
            kids = [walk(c) for c in t.children]
            if k == target:
                return build(kids)
            return _Raw(t.label, tuple(kids), (k, 0))
        return relabel(t) if relabel is not None else t
    return walk(tree)


def _canon(stage, raw):
    """ Returns (minimal leaf, [(coef, canonical tree, graded items)]) """
    if not isinstance(raw, _Raw):
        return raw, [(_ONE, raw, ())]
    parts = [_canon(stage, c) for c in raw.children]
    order = sorted(range(len(parts)), key=lambda j: parts[j][0])
    sigma = [0] * len(parts)
    for pos, j in enumerate(order, start=1):
        sigma[j] = pos
    sigma = tuple(sigma)
    if sigma == utils.identity_permutation(len(sigma)):
        decorations = {raw.label: _ONE}
    else:
        decorations = stage.module_of(raw.label).act_on_label(sigma,
                                                              raw.label)
    degree = stage.degree_of(raw.label)
    choices = [parts[j][1] for j in order]
    terms = []
    for combo in product(*choices):
        coef = _ONE
        items = [(raw.rank, degree)]
        for c, _, sub in combo:
            coef *= c
            items.extend(sub)
        children = tuple(t for _, t, _ in combo)
        for label, c in decorations.items():
            terms.append((coef * c, Node(label, children), tuple(items)))
    return parts[order[0]][0], terms


def _accumulate_raw(stage, raw, coef, terms):
    for c, tree, items in _canon(stage, raw)[1]:
        _accumulate(terms, tree, coef * c * utils.koszul_sign(items))


def canonicalize(stage, tree):
    """ Brings a tree with arbitrary child order into canonical form

    Args:
        stage (FreeStage): supplies the generator actions and degrees
        tree (Node or int): leaves labeled by a bijection onto 1..n; the
            reference order of decorations is the given depth-first order

    Raises:
        ValidationError: malformed tree

    Returns:
        TreeVector: sorting the children of a vertex acts on its decoration
            by the inducing permutation, with the Koszul sign of the induced
            reordering of decorations
    """
    if tree is UNIT:
        return TreeVector(0, 0, {UNIT: 1})
    leaves = tree_leaves(tree)
    if sorted(leaves) != list(range(1, len(leaves) + 1)):
        raise ValidationError(f"Leaf labels {leaves} are not a bijection "
                              f"onto 1..{len(leaves)}")
    degree = 0
    for v in tree_vertices(tree):
        if stage.arity_of(v.label) != len(v.children):
            raise ValidationError(f"Generator {v.label} of arity "
                                  f"{stage.arity_of(v.label)} decorates a "
                                  f"vertex with {len(v.children)} children")
        degree += stage.degree_of(v.label)
    terms = {}
    _accumulate_raw(stage, _to_raw(tree, rank=lambda k: k), _ONE, terms)
    return TreeVector._wrap(len(leaves), degree, terms)


''' Operations on tree vectors '''


def partial_compose(stage, a:TreeVector, i:int, b:TreeVector):
    """ Returns a o_i b: grafts b into the leaf i of a

        Leaves of b are shifted by i-1 and leaves of a above i by
        arity(b)-1. Composing with the arity-zero unit is the restriction
        delta_i.

    Raises:
        ValueError: slot out of range
    """
    validate_slot(i, a.arity)
    if b.arity == 0:
        return apply_restriction(stage, i, a).scale(b.coefficient(UNIT))
    n = b.arity
    terms = {}
    for ta, ca in a.items():
        for tb, cb in b.items():
            graft = _to_raw(tb, rank=lambda s: (1, s),
                            relabel=lambda leaf: leaf + i - 1)
            raw = _to_raw(ta, rank=lambda s: (0, s),
                          relabel=lambda leaf: leaf if leaf < i
                          else leaf + n - 1,
                          graft={i: graft})
            _accumulate_raw(stage, raw, ca * cb, terms)
    return TreeVector._wrap(a.arity + n - 1, a.degree + b.degree, terms)


def act_on_tree_vector(stage, sigma, v:TreeVector):
    """ Relabels the leaves j -> sigma(j) and canonicalizes

    Raises:
        ValueError: sigma does not permute 1..arity(v)
    """
    sigma = utils.validate_permutation(sigma, v.arity)
    if v.arity == 0 or sigma == utils.identity_permutation(v.arity):
        return v
    cache = stage._cache.setdefault(('act', v.arity), {})
    terms = {}
    for tree, coef in v.items():
        key = (sigma, tree)
        if key not in cache:
            part = {}
            _accumulate_raw(stage, _to_raw(tree, rank=lambda k: k,
                                           relabel=lambda leaf:
                                           sigma[leaf - 1]), _ONE, part)
            cache[key] = part
        for t, c in cache[key].items():
            _accumulate(terms, t, coef * c)
    return TreeVector._wrap(v.arity, v.degree, terms)


def apply_differential(stage, v:TreeVector):
    """ Extends the generator differential to trees by the Leibniz rule

        The vertex of depth-first index k contributes with the sign
        (-1)^(sum of the degrees of the decorations before it).

    Raises:
        ValidationError: unknown generator
    """
    terms = {}
    for tree, coef in v.items():
        preceding = 0
        for k, node in enumerate(tree_vertices(tree)):
            dg = stage.differential_of(node.label)
            sign = -1 if preceding % 2 else 1
            for x, c in dg.items():
                raw = _replace_vertex(
                    tree, k, lambda kids, x=x, k=k: _graft_raw(x, kids, k))
                _accumulate_raw(stage, raw, coef * c * sign, terms)
            preceding += stage.degree_of(node.label)
    return TreeVector._wrap(v.arity, v.degree + 1, terms)


def _parent_of_leaf(tree, leaf):
    """ Returns (depth-first index, vertex, slot) of the vertex holding leaf """
    for k, node in enumerate(tree_vertices(tree)):
        for slot, c in enumerate(node.children, start=1):
            if c == leaf and not isinstance(c, Node):
                return k, node, slot
    raise ValidationError(f"Leaf {leaf} not found in {tree_to_str(tree)}")


def apply_restriction(stage, i:int, v:TreeVector):
    """ Returns delta_i(v) = v o_i 1

        For each tree the decoration g of the parent of leaf i (leaf i in
        slot j of g) is replaced by the generator restriction delta_j(g);
        an identity value splices the remaining child through. Leaves above
        i are renumbered down by one.

    Raises:
        ValidationError: the stage is not unitary
    """
    if not stage.unitary:
        raise ValidationError("Restrictions require a unitary stage")
    validate_slot(i, v.arity)
    if v.arity == 1:
        return TreeVector(0, v.degree, {UNIT: v.coefficient(1)})
    terms = {}

    def relabel(leaf):
        return leaf if leaf < i else leaf - 1

    for tree, coef in v.items():
        k, node, j = _parent_of_leaf(tree, i)
        value = stage.restriction_of(node.label, j)
        for x, c in value.items():
            raw = _replace_vertex(
                tree, k,
                lambda kids, x=x: _graft_raw(x, kids[:j - 1] + kids[j:], k),
                relabel=relabel)
            _accumulate_raw(stage, raw, coef * c, terms)
    return TreeVector._wrap(v.arity - 1, v.degree, terms)


''' Stages '''


class FreeStage:
    """ The free graded operad on generators in arities >= 2 with a
        differential given on generators, and, for unitary stages, an
        arity-zero unit with restriction values on generators

    Args:
        generators (dict): arity -> SigmaModule of generators
        differential (dict): label -> TreeVector of degree deg(label)+1
        restrictions (dict): (label, slot) -> TreeVector of arity n-1;
            missing entries are zero
        unitary (bool): whether arity zero is spanned by UNIT
    """
    def __init__(self, generators=None, differential=None, restrictions=None,
                 unitary:bool=False):
        self.generators = dict(sorted((generators or {}).items()))
        self.differential = dict(differential or {})
        self.restrictions = dict(restrictions or {})
        self.unitary = bool(unitary)
        self._owner = {}
        for n, module in self.generators.items():
            if n < 2:
                raise ValidationError("Generators are forbidden in arities 0 "
                                      "and 1")
            if module.arity != n:
                raise ValidationError(f"Module of arity {module.arity} filed "
                                      f"under arity {n}")
            for label in module.basis.flat_labels():
                if label in self._owner:
                    raise ValidationError(f"Duplicate generator {label}")
                self._owner[label] = n
        self._cache = {}

    def __repr__(self):
        dims = {n: m.basis.total_dim for n, m in self.generators.items()}
        return f"FreeStage(generators={dims}, unitary={self.unitary})"

    ''' generator data '''

    def generator_labels(self):
        return list(self._owner)

    def arity_of(self, label):
        try:
            return self._owner[label]
        except KeyError:
            raise ValidationError(f"Unknown generator {label!r}")

    def module_of(self, label) -> SigmaModule:
        return self.generators[self.arity_of(label)]

    def degree_of(self, label):
        return self.module_of(label).basis.degree_of(label)

    def differential_of(self, label):
        n = self.arity_of(label)
        if label in self.differential:
            return self.differential[label]
        return TreeVector.zero(n, self.degree_of(label) + 1)

    def restriction_of(self, label, slot:int):
        n = self.arity_of(label)
        validate_slot(slot, n)
        if (label, slot) in self.restrictions:
            return self.restrictions[(label, slot)]
        return TreeVector.zero(n - 1, self.degree_of(label))

    ''' bases '''

    def _trees_on(self, size:int):
        """ All canonical trees on leaves 1..size as (tree, degree) """
        key = ('trees', size)
        if key in self._cache:
            return self._cache[key]
        if size == 1:
            result = [(1, 0)]
        else:
            result = []
            leaves = list(range(1, size + 1))
            for k, module in self.generators.items():
                if k > size:
                    continue
                labels = [(lbl, module.basis.degree_of(lbl))
                          for lbl in module.basis.flat_labels()]
                for blocks in multiset_partitions(leaves, k):
                    blocks = sorted((sorted(b) for b in blocks),
                                    key=lambda b: b[0])
                    options = []
                    for block in blocks:
                        mapping = dict(enumerate(block, start=1))
                        options.append([(relabel_tree(t, mapping), d)
                                        for t, d in self._trees_on(len(block))])
                    for combo in product(*options):
                        children = tuple(t for t, _ in combo)
                        sub_degree = sum(d for _, d in combo)
                        for lbl, d in labels:
                            result.append((Node(lbl, children),
                                           d + sub_degree))
        self._cache[key] = result
        return result

    def basis(self, n:int, degree:int):
        """ Canonical trees of arity n and the given degree, sorted """
        key = ('basis', n, degree)
        if key not in self._cache:
            if n == 0:
                trees = [UNIT] if self.unitary and degree == 0 else []
            else:
                trees = sorted((t for t, d in self._trees_on(n)
                                if d == degree), key=tree_key)
            self._cache[key] = trees
            self._cache[('index', n, degree)] = {t: k for k, t in
                                                 enumerate(trees)}
        return self._cache[key]

    def degrees(self, n:int):
        if n == 0:
            return [0] if self.unitary else []
        return sorted({d for _, d in self._trees_on(n)})

    def dimension(self, n:int, degree:int):
        return len(self.basis(n, degree))

    def coordinates(self, v:TreeVector, degree:int=None):
        """ Returns the coordinates of v in the tree basis

        Raises:
            ValidationError: v holds a non-canonical or foreign tree
        """
        degree = v.degree if degree is None else degree
        self.basis(v.arity, degree)
        index = self._cache[('index', v.arity, degree)]
        coords = [Fraction(0)] * len(index)
        for tree, coef in v.items():
            if tree not in index:
                raise ValidationError(f"{tree_to_str(tree)} is not a "
                                      f"canonical basis tree of arity "
                                      f"{v.arity}, degree {degree}")
            coords[index[tree]] = coef
        return tuple(coords)

    def tree_vector(self, n:int, degree:int, coords):
        trees = self.basis(n, degree)
        if len(coords) != len(trees):
            raise ValueError(f"Expected {len(trees)} coordinates")
        return TreeVector(n, degree, {t: c for t, c in zip(trees, coords)
                                      if c != 0})

    ''' matrix views '''

    def differential_matrix(self, n:int, degree:int):
        """ Matrix of the differential from degree to degree + 1 """
        key = ('d', n, degree)
        if key not in self._cache:
            cols = [self.coordinates(apply_differential(
                        self, TreeVector.single(t, degree)), degree + 1)
                    for t in self.basis(n, degree)]
            self._cache[key] = Matrix.from_columns(
                cols, self.dimension(n, degree + 1))
        return self._cache[key]

    def restriction_matrix(self, n:int, i:int, degree:int):
        """ Matrix of delta_i from arity n to arity n-1 """
        key = ('delta', n, i, degree)
        if key not in self._cache:
            cols = [self.coordinates(apply_restriction(
                        self, i, TreeVector.single(t, degree)), degree)
                    for t in self.basis(n, degree)]
            self._cache[key] = Matrix.from_columns(
                cols, self.dimension(n - 1, degree))
        return self._cache[key]

    def action_matrix(self, n:int, sigma, degree:int):
        key = ('sigma', n, tuple(sigma), degree)
        if key not in self._cache:
            cols = [self.coordinates(act_on_tree_vector(
                        self, sigma, TreeVector.single(t, degree)), degree)
                    for t in self.basis(n, degree)]
            self._cache[key] = Matrix.from_columns(
                cols, self.dimension(n, degree))
        return self._cache[key]

    def transposition_matrix(self, n:int, i:int, degree:int):
        return self.action_matrix(n, utils.transposition(n, i), degree)

    def _extended(self, n, generators, differential, restrictions):
        stage = FreeStage(generators, differential, restrictions,
                          self.unitary)
        # trees and matrices below arity n do not see the new generators
        stage._cache = {k: v for k, v in self._cache.items() if k[1] < n}
        return stage


def enumerate_basis(stage:FreeStage, n:int, degree:int):
    return list(stage.basis(n, degree))


def count_trees(stage:FreeStage, n:int, degree:int):
    """ Counts canonical trees of arity n and given degree without
        enumerating them, from the recursion on the block holding leaf 1
    """
    gen_dims = {k: {d: m.basis.dimension(d) for d in m.basis.nonzero_degrees}
                for k, m in stage.generators.items()}
    trees, forests = {}, {}

    def convolve(p, q):
        out = {}
        for d1, c1 in p.items():
            for d2, c2 in q.items():
                out[d1 + d2] = out.get(d1 + d2, 0) + c1 * c2
        return out

    def tree_counts(s):
        if s not in trees:
            out = {0: 1} if s == 1 else {}
            for k, dims in gen_dims.items():
                if k > s:
                    continue
                for d, c in forest_counts(s, k).items():
                    for e, dim in dims.items():
                        out[d + e] = out.get(d + e, 0) + c * dim
            trees[s] = out
        return trees[s]

    def forest_counts(s, k):
        """ unordered forests of k trees on s labeled leaves """
        if (s, k) not in forests:
            if k == 0:
                out = {0: 1} if s == 0 else {}
            else:
                out = {}
                for t in range(1, s - k + 2):
                    ways = comb(s - 1, t - 1)
                    for d, c in convolve(tree_counts(t),
                                         forest_counts(s - t, k - 1)).items():
                        out[d] = out.get(d, 0) + ways * c
            forests[(s, k)] = out
        return forests[(s, k)]

    if n == 0:
        return 1 if stage.unitary and degree == 0 else 0
    return tree_counts(n).get(degree, 0)


''' Extensions '''


def _check_equivariant_differential(stage, module, differential):
    n = module.arity
    for i in range(1, n):
        s = utils.transposition(n, i)
        for label in module.basis.flat_labels():
            lhs = act_on_tree_vector(stage, s, differential[label])
            rhs = TreeVector.zero(n, module.basis.degree_of(label) + 1)
            for other, c in module.act_on_label(s, label).items():
                rhs = rhs + differential[other].scale(c)
            if lhs != rhs:
                raise ValidationError(f"Differential of {label} does not "
                                      f"commute with s_{i}")


def make_principal_extension(stage:FreeStage, n:int, module:SigmaModule,
                             differential:dict):
    """ Attaches the arity-n generators of module with the given differential

    Args:
        stage (FreeStage): the stage to extend
        n (int): arity of the new generators, at least 2
        module (SigmaModule): generators E(n) with zero internal differential
        differential (dict): label -> cocycle of the stage in arity n and
            degree deg(label)+1

    Raises:
        ValidationError: forbidden arity, or a differential value that is not
            a decomposable cocycle of the right arity and degree

    Returns:
        FreeStage: new stage; arities below n are unchanged
    """
    return _extend(stage, n, module, differential, None)


def make_unitary_principal_extension(stage:FreeStage, n:int,
                                     module:SigmaModule, differential:dict,
                                     restrictions:dict):
    """ Principal extension that also assigns the restrictions delta_i(e)

    Args:
        restrictions (dict): (label, i) -> TreeVector of the stage in arity
            n-1 and degree deg(label); missing pairs are zero

    Raises:
        ValidationError: a failing compatibility equation, naming the
            offending (generator, slot) pair
    """
    if not stage.unitary:
        raise ValidationError("Unitary extensions require a unitary stage")
    return _extend(stage, n, module, differential, restrictions or {})


def _extend(stage, n, module, differential, restrictions):
    if n < 2:
        raise ValidationError(f"Generators are forbidden in arity {n}")
    if module.arity != n:
        raise ValidationError(f"Generators of arity {module.arity} cannot be "
                              f"attached in arity {n}")
    labels = module.basis.flat_labels()
    if not labels:
        return stage
    if n in stage.generators:
        raise ValidationError(f"Arity {n} already carries generators")
    values = {}
    for label in labels:
        degree = module.basis.degree_of(label)
        dv = differential.get(label, TreeVector.zero(n, degree + 1))
        if dv.arity != n or (not dv.is_zero() and dv.degree != degree + 1):
            raise ValidationError(f"Differential of {label} must have arity "
                                  f"{n} and degree {degree + 1}")
        dv = TreeVector._wrap(n, degree + 1, dict(dv._terms))
        stage.coordinates(dv)
        if any(len(tree_vertices(t)) < 2 for t in dv.trees()):
            raise ValidationError(f"Differential of {label} is not "
                                  "decomposable")
        if not apply_differential(stage, dv).is_zero():
            raise ValidationError(f"Differential of {label} is not a "
                                  "cocycle")
        values[label] = dv
    _check_equivariant_differential(stage, module, values)
    assigned = {}
    if restrictions is not None:
        for (label, i), r in restrictions.items():
            if label not in values:
                raise ValidationError(f"Restriction given for unknown "
                                      f"generator {label}")
            validate_slot(i, n)
            degree = module.basis.degree_of(label)
            if r.arity != n - 1 or (not r.is_zero() and r.degree != degree):
                raise ValidationError(f"Restriction delta_{i}({label}) must "
                                      f"have arity {n - 1} and degree "
                                      f"{degree}")
            r = TreeVector._wrap(n - 1, degree, dict(r._terms))
            stage.coordinates(r)
            assigned[(label, i)] = r
        for label in labels:
            degree = module.basis.degree_of(label)
            for i in range(1, n + 1):
                r = assigned.setdefault((label, i),
                                        TreeVector.zero(n - 1, degree))
                if apply_differential(stage, r) != \
                        apply_restriction(stage, i, values[label]):
                    raise ValidationError(
                        f"Restriction delta_{i}({label}) does not commute "
                        "with the differential")
        for label in labels:
            for j in range(2, n + 1):
                for i in range(1, j):
                    lhs = apply_restriction(stage, i, assigned[(label, j)])
                    rhs = apply_restriction(stage, j - 1,
                                            assigned[(label, i)])
                    if lhs != rhs:
                        raise ValidationError(
                            f"Restrictions of {label} are not coherent: "
                            f"delta_{i} delta_{j} != delta_{j-1} delta_{i}")
    generators = dict(stage.generators)
    generators[n] = module
    diff = dict(stage.differential)
    diff.update(values)
    restr = dict(stage.restrictions)
    restr.update(assigned)
    logger.debug(f"Attached {len(labels)} generators in arity {n}")
    return stage._extended(n, generators, diff, restr)
