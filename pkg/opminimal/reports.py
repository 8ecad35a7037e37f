# -*- coding: utf-8 -*-
"""
Tools producing reports on target operads and on computed minimal models:
cohomology tables, hypothesis checks, generator and restriction tables, and
the human-readable model summary
"""
from fractions import Fraction
import logging

import pandas as pd

from .dgoperad import (FiniteDgOperad, arity_cohomology, check_hypotheses,
                       cohomology)
from .freeop import TreeVector, tree_to_str
from .__validation import (COHOMOLOGY_COLUMNS, GENERATOR_COLUMNS,
                           HYPOTHESIS_COLUMNS, RESTRICTION_COLUMNS,
                           HypothesisError)


logger = logging.getLogger(__name__)


''' Rendering '''


def _format_coef(c:Fraction, first:bool):
    sign = "-" if c < 0 else ("" if first else "+")
    mag = abs(c)
    text = "" if mag == 1 else f"{mag} "
    if first:
        return f"{sign}{text}"
    return f" {sign} {text}"


def describe(v:TreeVector):
    """ Renders a tree vector in prefix notation, e.g.
        "e2_1(e2_1(1,2),3) - e2_1(1,e2_1(2,3))"
    """
    items = v.items()
    if not items:
        return "0"
    parts = [_format_coef(c, k == 0) + tree_to_str(t)
             for k, (t, c) in enumerate(items)]
    return "".join(parts)


''' Target reports '''


def cohomology_report(P:FiniteDgOperad, max_arity:int=None):
    """ Returns the cohomology dimensions of P per arity and degree

    Args:
        P (FiniteDgOperad): the operad
        max_arity (int, optional): defaults to the truncation of P

    Returns:
        pandas DataFrame with columns Arity, Degree, Dimension; arities
            without any cochains contribute a single zero row in degree 0
    """
    max_arity = P.max_arity if max_arity is None else max_arity
    rows = []
    for n in range(0, max_arity + 1):
        degrees = P.degrees(n)
        if not degrees:
            rows.append((n, 0, 0))
        for d in degrees:
            rows.append((n, d, cohomology(P, n, d).dim))
    return pd.DataFrame(rows, columns=COHOMOLOGY_COLUMNS)


def hypothesis_report(P:FiniteDgOperad):
    """ Checks each hypothesis of the minimal model construction separately

    Returns:
        pandas DataFrame with columns Hypothesis, Holds, Detail
    """
    rows = []
    for n, name in ((1, "HP(1) = k"), (0, "HP(0) = k (unitary mode)")):
        try:
            result = arity_cohomology(P, n, check_hypotheses=True)
            dims = {d: h.dim for d, h in result.items() if h.dim}
            rows.append((name, True, f"dimensions {dims}"))
        except HypothesisError as e:
            rows.append((name, False, str(e)))
    try:
        check_hypotheses(P, unitary=True)
        rows.append(("unitary multiplication", True, f"m2 = {P.m2}"))
    except HypothesisError as e:
        rows.append(("unitary multiplication", False, str(e)))
    return pd.DataFrame(rows, columns=HYPOTHESIS_COLUMNS)


''' Model reports '''


def generator_table(model):
    """ Returns the number of generators per arity and degree

    Args:
        model (StagedModel or MinimalModel)
    """
    rows = [(n, d, count) for n, per in sorted(model.generator_dims().items())
            for d, count in sorted(per.items())]
    return pd.DataFrame(rows, columns=GENERATOR_COLUMNS)


def restriction_table(model):
    """ Lists the restriction values delta_i(e) of every generator of a
        unitary model; empty for non-unitary models
    """
    stage = model.stage
    rows = []
    if stage.unitary:
        for n, module in stage.generators.items():
            for label in module.basis.flat_labels():
                for i in range(1, n + 1):
                    rows.append((label, n, i,
                                 describe(stage.restriction_of(label, i))))
    return pd.DataFrame(rows, columns=RESTRICTION_COLUMNS)


def model_summary(model):
    """ Human-readable summary: generator dimensions, differentials in
        prefix tree notation and, for unitary models, restrictions

    Returns:
        str
    """
    stage = model.stage
    lines = [f"Minimal model of {model.target.name} ({model.mode}), "
             f"complete to arity {model.completed_arity}", "",
             "Generators:"]
    for _, row in generator_table(model).iterrows():
        lines.append(f"  arity {row['Arity']}, degree {row['Degree']}: "
                     f"{row['Generators']}")
    lines += ["", "Differentials:"]
    for label in stage.generator_labels():
        lines.append(f"  d({label}) = {describe(stage.differential_of(label))}")
    if stage.unitary:
        lines += ["", "Restrictions:"]
        for _, row in restriction_table(model).iterrows():
            lines.append(f"  delta_{row['Slot']}({row['Generator']}) = "
                         f"{row['Restriction']}")
    return "\n".join(lines)
