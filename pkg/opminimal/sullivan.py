# -*- coding: utf-8 -*-
"""
Sullivan minimal models of dg operads, built inductively on the arity.

Each arity step compares the cohomology of the current free stage with the
cohomology of the target and attaches two groups of generators: cocycle
generators for the cokernel of H(rho) and kernel-killing generators whose
differential is a representative of a class in the kernel. In unitary mode
every new generator also receives restriction values, chosen so that the
stage keeps a Lambda-structure compatible with rho; its target value is
corrected by a coboundary Kan filler. All choices are averaged over the
symmetric group and every step is checked before it is returned.
"""
from dataclasses import dataclass, field
import logging

import numpy as np
import pandas as pd

from . import __version__
from .dgoperad import (FiniteDgOperad, StageMorphism, check_hypotheses,
                       cohomology, is_quasi_iso_upto, restriction_target)
from .exactla import (Matrix, block_matrix, kernel_and_image,
                      quotient_presentation, solve_linear, zero_vector)
from .freeop import (FreeStage, TreeVector, act_on_tree_vector,
                     apply_differential, apply_restriction,
                     make_principal_extension,
                     make_unitary_principal_extension, partial_compose,
                     tree_vertices)
from .kan import FaceFamily, FillConstraint, fill_equivariant
from .symmod import (GradedBasis, SigmaAction, SigmaModule, direct_sum,
                     quotient_module, reynolds_average)
from .__validation import (VERIFY_COLUMNS, InconsistencyError,
                           InfeasibleError, validate_arity, validate_mode)
from . import utils


logger = logging.getLogger(__name__)

CONVENTIONS = "dfs-koszul/leibniz-prefix-sign/v1"


@dataclass
class StagedModel:
    """ A free stage with its morphism to the target, complete (quasi-
        isomorphic) up to completed_arity
    """
    mode: str
    target: FiniteDgOperad
    stage: FreeStage
    rho: StageMorphism
    completed_arity: int

    @property
    def unitary(self):
        return self.mode == "unitary"

    def generator_dims(self):
        """ {arity: {degree: number of generators}} """
        return {n: {d: m.basis.dimension(d) for d in m.basis.nonzero_degrees}
                for n, m in self.stage.generators.items()}


@dataclass
class MinimalModel:
    """ A staged model at the requested arity with its provenance """
    staged: StagedModel
    provenance: dict = field(default_factory=dict)

    @property
    def mode(self):
        return self.staged.mode

    @property
    def target(self):
        return self.staged.target

    @property
    def stage(self):
        return self.staged.stage

    @property
    def rho(self):
        return self.staged.rho

    @property
    def completed_arity(self):
        return self.staged.completed_arity

    def generator_dims(self):
        return self.staged.generator_dims()


def resolve_mode(target:FiniteDgOperad, mode:str=None):
    """ "auto" (or None) selects unitary mode exactly when the target has an
        arity-zero unit
    """
    if mode in (None, "auto"):
        return "unitary" if target.unitary else "non-unitary"
    return validate_mode(mode)


''' helpers on target elements and tree vectors '''


def _combine_elements(P, n):
    def combine(terms):
        total = P.zero(n)
        for c, e in terms:
            if c != 0:
                total = total + e.scale(c)
        return total
    return combine


def _combine_trees(n, degree):
    def combine(terms):
        total = TreeVector.zero(n, degree)
        for c, v in terms:
            if c != 0:
                total = total + v.scale(c)
        return total
    return combine


def _module_from_matrices(n, degree, labels, mats):
    return SigmaModule(GradedBasis(n, {degree: labels}),
                       SigmaAction(n, {degree: mats} if n > 1 and labels
                                   else {}))


''' arity steps '''


def base_step(target:FiniteDgOperad, mode:str="unitary"):
    """ Builds P_2 = Gamma(E(2)) with E(2) = HP(2) and rho_2 an equivariant
        section of the projection onto cohomology

    Raises:
        HypothesisError: HP(1) != k, or (unitary mode) HP(0) != k or no
            unitary multiplication
        ValueError: target truncated below arity 2
    """
    mode = validate_mode(mode)
    validate_arity(target.max_arity, 2, "max_arity")
    check_hypotheses(target, mode == "unitary")
    stage = FreeStage(unitary=(mode == "unitary"))
    model = StagedModel(mode, target, stage, StageMorphism(stage, target, {}),
                        completed_arity=1)
    return _attach_arity(model, 2)


def inductive_step(model:StagedModel, n:int):
    """ Extends a model complete to arity n-1 into one complete to arity n

    Raises:
        ValueError: model not complete to arity n-1, or n above the target
            truncation
        InconsistencyError: a lift the theory guarantees does not exist
    """
    if model.completed_arity != n - 1:
        raise ValueError(f"Model is complete to arity "
                         f"{model.completed_arity}; cannot build arity {n}")
    if n > model.target.max_arity:
        raise ValueError(f"Arity {n} exceeds the target truncation "
                         f"{model.target.max_arity}")
    return _attach_arity(model, n)


def _attach_arity(model, n):
    stage, rho, P = model.stage, model.rho, model.target
    degrees = sorted(set(stage.degrees(n)) | set(P.degrees(n)))
    cokernels, kernels = [], []
    for d in degrees:
        hs = cohomology(stage, n, d)
        hp = cohomology(P, n, d)
        induced = hp.projection @ rho.matrix(n, d) @ hs.section
        logger.debug(f"arity {n}, degree {d}: H(stage)={hs.dim}, "
                     f"H(target)={hp.dim}")
        quotient = quotient_presentation(induced)
        if quotient.dim:
            cokernels.append((d, hp, quotient))
        kernel, _ = kernel_and_image(induced)
        if kernel.dim:
            kernels.append((d, hs, kernel))
    counter = iter(range(1, 1 + sum(q.dim for _, _, q in cokernels) +
                         sum(k.dim for _, _, k in kernels)))
    modules, values, differential = [], {}, {}
    for d, hp, quotient in cokernels:
        labels = [f"e{n}_{next(counter)}" for _ in range(quotient.dim)]
        on_classes = _module_from_matrices(
            n, d, [f"h{k}" for k in range(hp.dim)],
            [hp.projection @ P.transposition_matrix(n, i, d) @ hp.section
             for i in range(1, n)])
        modules.append(quotient_module(on_classes, {d: quotient},
                                       {d: labels}))
        for k, label in enumerate(labels):
            rep = hp.section.apply(quotient.section.column(k))
            values[label] = P.homogeneous(n, d, rep)
            differential[label] = TreeVector.zero(n, d + 1)
    kernel_labels = []
    for d, hs, kernel in kernels:
        labels = [f"e{n}_{next(counter)}" for _ in range(kernel.dim)]
        mats = []
        for i in range(1, n):
            on_classes = hs.projection @ stage.transposition_matrix(n, i, d) \
                @ hs.section
            try:
                cols = [kernel.coordinates(on_classes.apply(v))
                        for v in kernel.vectors]
            except ValueError:
                raise InconsistencyError(f"Kernel of H(rho) in arity {n}, "
                                         f"degree {d} is not invariant")
            mats.append(Matrix.from_columns(cols, kernel.dim))
        modules.append(_module_from_matrices(n, d - 1, labels, mats))
        for label, v in zip(labels, kernel.vectors):
            differential[label] = stage.tree_vector(n, d, hs.section.apply(v))
        kernel_labels.append((d, labels))
    module = direct_sum(modules, n) if modules else \
        SigmaModule(GradedBasis(n, {}), SigmaAction(n, {}))
    labels = module.basis.flat_labels()
    if labels:
        differential = _average_differential(stage, module, differential)
        for d, group in kernel_labels:
            for label in group:
                values[label] = _lift_value(stage, rho, n, d,
                                            differential[label], label)
        values = reynolds_average(
            module, values, lambda s, e: P.act(s, e),
            _combine_elements(P, n))
    if model.unitary:
        restrictions = assign_generator_restrictions(
            stage, rho, n, module, differential, values)
        values, restrictions = equivariant_average(
            stage, P, module, values, restrictions)
        values = unitary_section_correction(stage, rho, n, module, values,
                                            restrictions)
        new_stage = make_unitary_principal_extension(
            stage, n, module, differential, restrictions)
    else:
        new_stage = make_principal_extension(stage, n, module, differential)
    new_rho = rho.extended(new_stage, values)
    result = StagedModel(model.mode, P, new_stage, new_rho, n)
    _check_step(result, n, module, differential, values)
    dims = {d: module.basis.dimension(d) for d in module.basis.nonzero_degrees}
    logger.info(f"Arity {n} complete: generators by degree {dims}")
    return result


def _average_differential(stage, module, differential):
    n = module.arity
    by_degree = {}
    for label in module.basis.flat_labels():
        by_degree.setdefault(module.basis.degree_of(label), []).append(label)

    def combine(terms):
        degrees = {v.degree for _, v in terms}
        total = TreeVector.zero(n, degrees.pop() if len(degrees) == 1
                                else 0)
        for c, v in terms:
            if c != 0:
                total = total + v.scale(c)
        return total
    return reynolds_average(module, differential,
                            lambda s, v: act_on_tree_vector(stage, s, v),
                            combine)


def _lift_value(stage, rho, n, d, z, label):
    """ Solves d_P w = rho(z) for the value of a kernel-killing generator """
    P = rho.target
    image = P.component(rho.evaluate(z), d)
    w = solve_linear(P.differential_matrix(n, d - 1), image)
    if w is None:
        raise InfeasibleError("The image of a kernel class is not a "
                              "coboundary of the target", label)
    logger.debug(f"Lifted the value of {label}")
    return P.homogeneous(n, d - 1, w)


def _check_step(model, n, module, differential, values):
    P, stage, rho = model.target, model.stage, model.rho
    for label in module.basis.flat_labels():
        lhs = rho.evaluate(differential[label])
        rhs = P.apply_differential(values[label])
        if lhs != rhs:
            raise InconsistencyError(f"rho is not a chain map on {label}")
    report = is_quasi_iso_upto(rho, n)
    failed = report.loc[(report["Arity"] == n) &
                        ~report["Iso"].astype(bool)]
    if not failed.empty:
        row = failed.iloc[0]
        raise InconsistencyError(f"H(rho) is not an isomorphism in arity {n},"
                                 f" degree {row['Degree']}")


''' unitary mode '''


def assign_generator_restrictions(stage:FreeStage, rho:StageMorphism, n:int,
                                  module:SigmaModule, differential:dict,
                                  values:dict, exact:bool=False):
    """ Chooses restriction values delta_i(e) in stage(n-1) for the new
        generators, solving all slots of one generator jointly

        Equations, per generator e with z = d(e) and w = rho(e):
            chain:      d(delta_i e) = delta_i z
            rho:        rho(delta_i e) - delta_i w = d_P v_i  (v_i = 0 if
                        exact)
            coherence:  delta_i delta_j e = delta_{j-1} delta_i e, i < j

    Raises:
        InfeasibleError: naming the generator and the first equation group
            that cannot be met

    Returns:
        dict: (label, i) -> TreeVector of arity n-1
    """
    result = {}
    for label in module.basis.flat_labels():
        q = module.basis.degree_of(label)
        z, w = differential[label], values[label]
        system = _restriction_system(stage, rho, n, q, z, w, exact)
        solution = _solve_groups(system, label)
        width = stage.dimension(n - 1, q)
        for i in range(1, n + 1):
            coords = solution[(i - 1) * width:i * width]
            result[(label, i)] = stage.tree_vector(n - 1, q, coords)
        _assert_restrictions(stage, rho, label, q, z, w,
                             [result[(label, i)] for i in range(1, n + 1)],
                             exact)
    logger.debug(f"Assigned restrictions for {len(result)} generator slots "
                 f"in arity {n}")
    return result


def _restriction_system(stage, rho, n, q, z, w, exact):
    P = rho.target
    a = stage.dimension(n - 1, q)
    b = 0 if exact else P.dimension(n - 1, q - 1)
    col_sizes = [a] * n + [b] * n
    groups = {"chain": [], "rho": [], "coherence": []}
    chain = stage.differential_matrix(n - 1, q)
    for i in range(1, n + 1):
        row = [None] * (2 * n)
        row[i - 1] = chain
        rhs = stage.coordinates(apply_restriction(stage, i, z), q + 1)
        groups["chain"].append((row, chain.rows, rhs))
    evaluation = rho.matrix(n - 1, q)
    slack = -P.differential_matrix(n - 1, q - 1)
    for i in range(1, n + 1):
        row = [None] * (2 * n)
        row[i - 1] = evaluation
        if b:
            row[n + i - 1] = slack
        rhs = P.component(restriction_target(P, i, w), q)
        groups["rho"].append((row, evaluation.rows, rhs))
    for j in range(2, n + 1):
        for i in range(1, j):
            first = stage.restriction_matrix(n - 1, i, q)
            second = stage.restriction_matrix(n - 1, j - 1, q)
            row = [None] * (2 * n)
            row[j - 1] = first
            row[i - 1] = -second
            groups["coherence"].append((row, first.rows,
                                        zero_vector(first.rows)))
    return col_sizes, groups


def _solve_groups(system, label):
    col_sizes, groups = system
    names = list(groups)

    def solve(upto):
        rows, sizes, rhs = [], [], []
        for name in names[:upto]:
            for row, size, values in groups[name]:
                rows.append(row)
                sizes.append(size)
                rhs.extend(values)
        mat = block_matrix(rows, sizes, col_sizes)
        return solve_linear(mat, rhs)

    solution = solve(len(names))
    if solution is not None:
        return solution
    for upto in range(1, len(names) + 1):
        if solve(upto) is None:
            raise InfeasibleError("No restriction assignment satisfies the "
                                  f"{names[upto - 1]} equations", label)
    raise InfeasibleError("No restriction assignment exists", label)


def _assert_restrictions(stage, rho, label, q, z, w, restrictions, exact):
    P = rho.target
    n = len(restrictions)
    for i, r in enumerate(restrictions, start=1):
        if apply_differential(stage, r) != apply_restriction(stage, i, z):
            raise InconsistencyError(f"chain equation fails for "
                                     f"({label}, {i})")
        gap = rho.evaluate(r) - restriction_target(P, i, w)
        if exact and not gap.is_zero():
            raise InconsistencyError(f"rho equation fails for "
                                     f"({label}, {i})")
        if not gap.is_zero() and solve_linear(
                P.differential_matrix(n - 1, q - 1),
                P.component(gap, q)) is None:
            raise InconsistencyError(f"rho equation fails up to coboundary "
                                     f"for ({label}, {i})")
    for j in range(2, n + 1):
        for i in range(1, j):
            lhs = apply_restriction(stage, i, restrictions[j - 1])
            rhs = apply_restriction(stage, j - 1, restrictions[i - 1])
            if lhs != rhs:
                raise InconsistencyError(f"coherence fails for {label}, "
                                         f"i={i}, j={j}")


def equivariant_average(stage:FreeStage, target:FiniteDgOperad,
                        module:SigmaModule, values:dict,
                        restrictions:dict=None):
    """ Averages generator values and restriction values jointly over
        Sigma_n, so that rho(sigma e) = sigma rho(e) and
        delta_{sigma(j)}(sigma e) = sigma_j^ delta_j(e), where sigma_j^ is
        sigma with input j deleted

    Returns:
        tuple: (values, restrictions); restrictions is None when not given
    """
    n = module.arity
    labels = module.basis.flat_labels()
    if not labels:
        return dict(values), restrictions
    if restrictions is None:
        averaged = reynolds_average(module, values,
                                    lambda s, e: target.act(s, e),
                                    _combine_elements(target, n))
        return averaged, None
    packed = {lbl: (values[lbl], tuple(restrictions[(lbl, i)]
                                       for i in range(1, n + 1)))
              for lbl in labels}

    def act(sigma, pair):
        w, rs = pair
        moved = [None] * n
        for j in range(1, n + 1):
            moved[sigma[j - 1] - 1] = act_on_tree_vector(
                stage, utils.deletion(sigma, j), rs[j - 1])
        return target.act(sigma, w), tuple(moved)

    def combine(terms):
        w = _combine_elements(target, n)([(c, p[0]) for c, p in terms])
        rs = []
        for i in range(n):
            parts = [(c, p[1][i]) for c, p in terms]
            total = TreeVector.zero(n - 1, parts[0][1].degree)
            for c, v in parts:
                if c != 0:
                    total = total + v.scale(c)
            rs.append(total)
        return w, tuple(rs)

    averaged = reynolds_average(module, packed, act, combine)
    new_values = {lbl: p[0] for lbl, p in averaged.items()}
    new_restrictions = {(lbl, i): p[1][i - 1] for lbl, p in averaged.items()
                        for i in range(1, n + 1)}
    return new_values, new_restrictions


def unitary_section_correction(stage:FreeStage, rho:StageMorphism, n:int,
                               module:SigmaModule, values:dict,
                               restrictions:dict):
    """ Corrects the generator values so that rho commutes with the
        restrictions on the nose

        The differences omega_i(e) = delta_i rho(e) - rho(delta_i e) are
        coboundaries forming a Kan family; an equivariant coboundary filler
        f(e) of them is subtracted: rho'(e) = rho(e) - f(e).

    Raises:
        InfeasibleError: the differences cannot be filled
        InconsistencyError: a postcondition fails

    Returns:
        dict: label -> corrected value
    """
    P = rho.target
    labels = module.basis.flat_labels()
    families = {}
    for label in labels:
        q = module.basis.degree_of(label)
        members = tuple(P.component(restriction_target(P, i, values[label]) -
                                    rho.evaluate(restrictions[(label, i)]), q)
                        for i in range(1, n + 1))
        families[label] = FaceFamily(n, q, members)
    if all(not any(m) for f in families.values() for m in f.members):
        return dict(values)
    fillers = fill_equivariant(families, module, P,
                               FillConstraint(coboundary=True))
    corrected = {}
    for label in labels:
        q = module.basis.degree_of(label)
        corrected[label] = values[label] - P.homogeneous(n, q,
                                                         fillers[label])
        for i in range(1, n + 1):
            if restriction_target(P, i, corrected[label]) != \
                    rho.evaluate(restrictions[(label, i)]):
                raise InconsistencyError(f"Corrected value of {label} does "
                                         f"not commute with delta_{i}")
        if P.apply_differential(corrected[label]) != \
                P.apply_differential(values[label]):
            raise InconsistencyError(f"Correction of {label} changed its "
                                     "differential")
    logger.debug(f"Corrected {len(labels)} values in arity {n}")
    return corrected


''' driver and verification '''


def minimal_model(target:FiniteDgOperad, max_arity:int=None,
                  mode:str="auto"):
    """ Computes the Sullivan minimal model of target up to max_arity

    Args:
        target (FiniteDgOperad): the operad to resolve
        max_arity (int, optional): defaults to the target truncation
        mode (str): "unitary", "non-unitary" or "auto"

    Returns:
        MinimalModel
    """
    max_arity = target.max_arity if max_arity is None else max_arity
    validate_arity(max_arity, 2, "max_arity")
    if max_arity > target.max_arity:
        raise ValueError(f"max_arity {max_arity} exceeds the target "
                         f"truncation {target.max_arity}")
    utils.limit_alert(max_arity, "arities", limit=5)
    mode = resolve_mode(target, mode)
    model = base_step(target, mode)
    for n in range(3, max_arity + 1):
        model = inductive_step(model, n)
    dims = model.generator_dims()
    provenance = {
        "package": "opminimal",
        "version": __version__,
        "conventions": CONVENTIONS,
        "target": target.name,
        "generator_dims": {str(n): {str(d): c for d, c in per.items()}
                           for n, per in dims.items()},
    }
    return MinimalModel(model, provenance)


def _staged(model):
    return model.staged if isinstance(model, MinimalModel) else model


def verify_minimal_model(model, leibniz_samples:int=50, seed:int=506):
    """ Re-checks every invariant of a model

    Returns:
        pandas DataFrame: one row per check with columns Check, Passed,
            Violations, Detail
    """
    staged = _staged(model)
    checks = [("d_squared", _verify_d_squared),
              ("leibniz", lambda m: _verify_leibniz(m, leibniz_samples,
                                                    seed)),
              ("minimality", _verify_minimality),
              ("differential_degree", _verify_degrees),
              ("chain_map", _verify_chain_map),
              ("restriction_compatibility", _verify_restrictions),
              ("lambda_coherence", _verify_coherence),
              ("equivariance", _verify_equivariance),
              ("quasi_iso", _verify_quasi_iso)]
    rows = []
    for name, check in checks:
        try:
            violations = check(staged)
        except Exception as e:
            violations = [f"check aborted: {e}"]
        rows.append((name, not violations, len(violations),
                     violations[0] if violations else ""))
    return pd.DataFrame(rows, columns=VERIFY_COLUMNS)


def _generators(staged):
    stage = staged.stage
    for n, module in stage.generators.items():
        if n > staged.completed_arity:
            continue
        for label in module.basis.flat_labels():
            yield n, module, label


def _verify_d_squared(staged):
    stage = staged.stage
    out = []
    for n, _, label in _generators(staged):
        if not apply_differential(stage, stage.differential_of(label)) \
                .is_zero():
            out.append(f"d(d {label}) != 0")
    for n in range(2, staged.completed_arity + 1):
        for d in stage.degrees(n):
            product = stage.differential_matrix(n, d + 1) @ \
                stage.differential_matrix(n, d)
            if not product.is_zero():
                out.append(f"arity {n}, degree {d}")
    return out


def _verify_leibniz(staged, samples, seed):
    stage = staged.stage
    top = staged.completed_arity
    rng = np.random.RandomState(seed)
    pool = [(n, d, t) for n in range(1, top + 1) for d in stage.degrees(n)
            for t in stage.basis(n, d)]
    out = []
    if not pool:
        return out
    for _ in range(samples):
        n1, d1, t1 = pool[rng.randint(len(pool))]
        fits = [p for p in pool if p[0] + n1 - 1 <= top]
        n2, d2, t2 = fits[rng.randint(len(fits))]
        i = int(rng.randint(1, n1 + 1))
        a, b = TreeVector.single(t1, d1), TreeVector.single(t2, d2)
        lhs = apply_differential(stage, partial_compose(stage, a, i, b))
        rhs = partial_compose(stage, apply_differential(stage, a), i, b) + \
            partial_compose(stage, a, i,
                            apply_differential(stage, b)).scale(
                                -1 if d1 % 2 else 1)
        if lhs != rhs:
            out.append(f"{t1} o_{i} {t2}")
    return out


def _verify_minimality(staged):
    stage = staged.stage
    out = []
    for n, _, label in _generators(staged):
        if n < 2:
            out.append(f"{label} has arity {n}")
        for tree in stage.differential_of(label).trees():
            if len(tree_vertices(tree)) < 2:
                out.append(f"d({label}) is not decomposable")
                break
    return out


def _verify_degrees(staged):
    stage = staged.stage
    out = []
    for n, module, label in _generators(staged):
        dv = stage.differential_of(label)
        if dv.arity != n or (not dv.is_zero() and
                             dv.degree != module.basis.degree_of(label) + 1):
            out.append(f"d({label}) has the wrong arity or degree")
    return out


def _verify_chain_map(staged):
    stage, rho, P = staged.stage, staged.rho, staged.target
    out = []
    for n, _, label in _generators(staged):
        if rho.evaluate(stage.differential_of(label)) != \
                P.apply_differential(rho.value_of(label)):
            out.append(f"rho(d {label}) != d rho({label})")
    return out


def _verify_restrictions(staged):
    if not staged.unitary:
        return []
    stage, rho, P = staged.stage, staged.rho, staged.target
    out = []
    for n, _, label in _generators(staged):
        for i in range(1, n + 1):
            r = stage.restriction_of(label, i)
            if apply_differential(stage, r) != apply_restriction(
                    stage, i, stage.differential_of(label)):
                out.append(f"d delta_{i}({label}) != delta_{i} d({label})")
            if rho.evaluate(r) != restriction_target(P, i,
                                                     rho.value_of(label)):
                out.append(f"rho delta_{i}({label}) != delta_{i} "
                           f"rho({label})")
    return out


def _verify_coherence(staged):
    if not staged.unitary:
        return []
    stage = staged.stage
    out = []
    for n, _, label in _generators(staged):
        for j in range(2, n + 1):
            for i in range(1, j):
                lhs = apply_restriction(stage, i,
                                        stage.restriction_of(label, j))
                rhs = apply_restriction(stage, j - 1,
                                        stage.restriction_of(label, i))
                if lhs != rhs:
                    out.append(f"{label}: delta_{i} delta_{j} != "
                               f"delta_{j - 1} delta_{i}")
    return out


def _verify_equivariance(staged):
    stage, rho, P = staged.stage, staged.rho, staged.target
    out = []
    for n, module, label in _generators(staged):
        degree = module.basis.degree_of(label)
        for k in range(1, n):
            s = utils.transposition(n, k)
            image = module.act_on_label(s, label)
            value = _combine_elements(P, n)(
                [(c, rho.value_of(f)) for f, c in image.items()])
            if P.act(s, rho.value_of(label)) != value:
                out.append(f"rho(s_{k} {label}) != s_{k} rho({label})")
            dv = _combine_trees(n, degree + 1)(
                [(c, stage.differential_of(f)) for f, c in image.items()])
            if act_on_tree_vector(stage, s, stage.differential_of(label)) \
                    != dv:
                out.append(f"d(s_{k} {label}) != s_{k} d({label})")
            if not staged.unitary:
                continue
            for j in range(1, n + 1):
                lhs = _combine_trees(n - 1, degree)(
                    [(c, stage.restriction_of(f, s[j - 1]))
                     for f, c in image.items()])
                rhs = act_on_tree_vector(stage, utils.deletion(s, j),
                                         stage.restriction_of(label, j))
                if lhs != rhs:
                    out.append(f"delta_{s[j - 1]}(s_{k} {label}) != "
                               f"s_{k}^ delta_{j}({label})")
    return out


def _verify_quasi_iso(staged):
    report = is_quasi_iso_upto(staged.rho, staged.completed_arity)
    failed = report.loc[~report["Iso"].astype(bool)]
    return [f"arity {r['Arity']}, degree {r['Degree']}: kernel "
            f"{r['Kernel Dim']}, cokernel {r['Cokernel Dim']}"
            for _, r in failed.iterrows()]
