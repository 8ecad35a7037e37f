''' JSON codecs for scalars, matrices, trees, operads and minimal models

    Scalars are written as canonical rational strings ("3", "-1/2"). Files
    are written with sorted keys so that identical objects give identical
    bytes.
'''
from fractions import Fraction
import json
from pathlib import Path

from .dgoperad import Element, FiniteDgOperad, StageMorphism
from .exactla import Matrix
from .freeop import UNIT, FreeStage, Node, TreeVector
from .symmod import GradedBasis, SigmaAction, SigmaModule
from .sullivan import MinimalModel, StagedModel
from .__validation import ValidationError, validate_scalar


''' Files '''


def read_json(source):
    """ Parses JSON from a path or from an open text stream

    Raises:
        ValidationError: unreadable or unparsable input
    """
    try:
        if hasattr(source, "read"):
            return json.load(source)
        with open(source, "r", encoding="utf-8") as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise ValidationError(f"Invalid JSON in {source}: {e}") from e
    except OSError as e:
        raise ValidationError(f"Cannot read {source}: {e}") from e


def write_json(data, path=None):
    """ Returns the canonical JSON text of data, writing it to path if given
    """
    text = json.dumps(data, sort_keys=True, indent=2) + "\n"
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


''' Scalars and matrices '''


def scalar_to_json(c):
    return str(Fraction(c))


def scalar_from_json(value):
    try:
        return validate_scalar(value)
    except TypeError as e:
        raise ValidationError(str(e)) from e


def matrix_to_json(m:Matrix):
    return [[scalar_to_json(x) for x in m.row(r)] for r in range(m.rows)]


def matrix_from_json(rows, shape):
    """ Reads a list of rows; the shape comes from the surrounding bases """
    n_rows, n_cols = shape
    if len(rows) != n_rows or any(len(r) != n_cols for r in rows):
        raise ValidationError(f"Matrix does not have shape {shape}")
    return Matrix.from_rows([[scalar_from_json(x) for x in r] for r in rows],
                            n_cols)


''' Trees '''


def tree_to_json(tree):
    if tree is UNIT:
        return None
    if isinstance(tree, Node):
        return {"g": tree.label,
                "children": [tree_to_json(c) for c in tree.children]}
    return int(tree)


def tree_from_json(data):
    if data is None:
        return UNIT
    if isinstance(data, bool):
        raise ValidationError("A tree leaf must be an integer")
    if isinstance(data, int):
        return data
    if isinstance(data, dict) and "g" in data:
        return Node(str(data["g"]), tuple(tree_from_json(c) for c in
                                          data.get("children", [])))
    raise ValidationError(f"Cannot read a tree from {data!r}")


def tree_vector_to_json(v:TreeVector):
    return [{"coef": scalar_to_json(c), "tree": tree_to_json(t)}
            for t, c in v.items()]


def tree_vector_from_json(data, arity:int, degree:int):
    terms = {}
    for term in data:
        tree = tree_from_json(term["tree"])
        terms[tree] = terms.get(tree, 0) + scalar_from_json(term["coef"])
    return TreeVector(arity, degree, terms)


''' Operads '''


def _module_to_json(module:SigmaModule):
    basis = module.basis
    return {
        "degrees": {str(d): list(basis.labels(d))
                    for d in basis.nonzero_degrees},
        "transpositions": {
            str(i): {str(d): matrix_to_json(module.transposition_matrix(i, d))
                     for d in basis.nonzero_degrees}
            for i in range(1, module.arity)},
    }


def _module_from_json(n, data):
    degrees = {int(d): list(labels)
               for d, labels in data.get("degrees", {}).items()}
    basis = GradedBasis(n, degrees)
    transpositions = {}
    per_slot = data.get("transpositions", {})
    for d in basis.nonzero_degrees:
        dim = basis.dimension(d)
        if n > 1 and per_slot:
            transpositions[d] = [
                matrix_from_json(per_slot[str(i)][str(d)], (dim, dim))
                for i in range(1, n)]
    return SigmaModule(basis, SigmaAction(n, transpositions))


def operad_to_dict(P:FiniteDgOperad):
    arities = []
    for n in range(P.max_arity + 1):
        entry = {"n": n, **_module_to_json(P.modules[n])}
        entry["differential"] = {
            str(d): matrix_to_json(P.differentials[n][d])
            for d in sorted(P.differentials.get(n, {}))}
        arities.append(entry)
    return {
        "name": P.name,
        "max_arity": P.max_arity,
        "arities": arities,
        "compositions": {f"{m},{i},{n}": matrix_to_json(mat)
                         for (m, i, n), mat in P.compositions.items()},
        "unit1": P.unit1,
        "unit0": P.unit0,
        "m2": P.m2,
    }


def operad_from_dict(data):
    """ Builds a FiniteDgOperad from its JSON dict

    Raises:
        ValidationError: missing fields or inconsistent shapes
    """
    try:
        max_arity = int(data["max_arity"])
        modules, raw_diffs = {}, {}
        for entry in data["arities"]:
            n = int(entry["n"])
            modules[n] = _module_from_json(n, entry)
            raw_diffs[n] = entry.get("differential", {})
        shell = FiniteDgOperad(data.get("name", "operad"), max_arity,
                               modules, unit1=data["unit1"],
                               unit0=data.get("unit0"), m2=data.get("m2"))
        differentials = {}
        for n, per_degree in raw_diffs.items():
            for d, rows in per_degree.items():
                d = int(d)
                differentials.setdefault(n, {})[d] = matrix_from_json(
                    rows, (shell.dimension(n, d + 1), shell.dimension(n, d)))
        compositions = {}
        for key, rows in data.get("compositions", {}).items():
            m, i, n = (int(x) for x in key.split(","))
            compositions[(m, i, n)] = matrix_from_json(
                rows, (shell.flat_dim(m + n - 1),
                       shell.flat_dim(m) * shell.flat_dim(n)))
    except (KeyError, TypeError, ValueError, AttributeError) as e:
        raise ValidationError(f"Malformed operad description: {e}") from e
    return FiniteDgOperad(shell.name, max_arity, modules,
                          differentials=differentials,
                          compositions=compositions, unit1=shell.unit1,
                          unit0=shell.unit0, m2=shell.m2)


''' Models '''


def _report_to_json(report):
    if report is None:
        return None
    return [{"check": str(r["Check"]), "passed": bool(r["Passed"]),
             "violations": int(r["Violations"]), "detail": str(r["Detail"])}
            for _, r in report.iterrows()]


def model_to_dict(model, report=None):
    """ Returns the JSON dict of a MinimalModel

    Args:
        model (MinimalModel): the model
        report (pandas DataFrame, optional): output of verify_minimal_model
    """
    stage, rho = model.stage, model.rho
    generators, actions = {}, {}
    differential, restrictions, values = {}, {}, {}
    for n, module in stage.generators.items():
        encoded = _module_to_json(module)
        generators[str(n)] = encoded["degrees"]
        actions[str(n)] = encoded["transpositions"]
        for label in module.basis.flat_labels():
            differential[label] = tree_vector_to_json(
                stage.differential_of(label))
            values[label] = [scalar_to_json(x)
                             for x in rho.value_of(label).coords]
            if stage.unitary:
                restrictions[label] = {
                    str(i): tree_vector_to_json(stage.restriction_of(label,
                                                                     i))
                    for i in range(1, n + 1)}
    return {
        "mode": model.mode,
        "target": model.target.name,
        "max_arity": model.completed_arity,
        "generators": generators,
        "actions": actions,
        "differential": differential,
        "restrictions": restrictions,
        "rho": values,
        "report": _report_to_json(report),
        "provenance": getattr(model, "provenance", {}),
        "operad": operad_to_dict(model.target),
    }


def model_from_dict(data):
    """ Rebuilds a MinimalModel from its JSON dict without re-running the
        extension checks, so that corrupted models can still be verified

    Raises:
        ValidationError: missing fields or unreadable values
    """
    try:
        target = operad_from_dict(data["operad"])
        mode = data["mode"]
        generators = {}
        for n, degrees in data["generators"].items():
            n = int(n)
            generators[n] = _module_from_json(
                n, {"degrees": degrees,
                    "transpositions": data.get("actions", {}).get(str(n),
                                                                  {})})
        differential, restrictions, values = {}, {}, {}
        for n, module in generators.items():
            for label in module.basis.flat_labels():
                degree = module.basis.degree_of(label)
                differential[label] = tree_vector_from_json(
                    data["differential"].get(label, []), n, degree + 1)
                for i, tv in data.get("restrictions", {}).get(label,
                                                              {}).items():
                    restrictions[(label, int(i))] = tree_vector_from_json(
                        tv, n - 1, degree)
                coords = tuple(scalar_from_json(x)
                               for x in data["rho"][label])
                if len(coords) != target.flat_dim(n):
                    raise ValidationError(f"Value of {label} has "
                                          f"{len(coords)} coordinates")
                values[label] = Element(n, coords)
        stage = FreeStage(generators, differential, restrictions,
                          unitary=(mode == "unitary"))
        staged = StagedModel(mode, target, stage,
                             StageMorphism(stage, target, values),
                             int(data["max_arity"]))
    except (KeyError, TypeError, ValueError, AttributeError) as e:
        raise ValidationError(f"Malformed model description: {e}") from e
    return MinimalModel(staged, dict(data.get("provenance") or {}))
