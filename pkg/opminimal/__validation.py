''' Manages data validation tasks and the exception hierarchy across modules
'''
from fractions import Fraction
import pandas as pd


VALID_MODES = ("unitary", "non-unitary")

VIOLATION_COLUMNS = ['Check', 'Location', 'Message']

QUASI_ISO_COLUMNS = ['Arity', 'Degree', 'Source Dim', 'Target Dim', 'Rank',
                     'Kernel Dim', 'Cokernel Dim', 'Iso']

COHOMOLOGY_COLUMNS = ['Arity', 'Degree', 'Dimension']

VERIFY_COLUMNS = ['Check', 'Passed', 'Violations', 'Detail']

GENERATOR_COLUMNS = ['Arity', 'Degree', 'Generators']

RESTRICTION_COLUMNS = ['Generator', 'Arity', 'Slot', 'Restriction']

HYPOTHESIS_COLUMNS = ['Hypothesis', 'Holds', 'Detail']


class ValidationError(Exception):
    """ Malformed input: matrices, trees, complexes or operads that do not
        satisfy their structural invariants
    """
    pass


class HypothesisError(ValidationError):
    """ A hypothesis of the construction fails for the target """
    pass


class InconsistencyError(Exception):
    """ A postcondition of the algorithm failed """
    pass


class InfeasibleError(InconsistencyError):
    """ A linear system that the theory guarantees solvable has no solution

    Args:
        message (str): description of the failure
        location (str, optional): generator, slot, or equation group
            witnessing the failure
    """
    def __init__(self, message, location=None):
        super().__init__(message if location is None
                         else f"{message} (at {location})")
        self.location = location


def validate_mode(mode):
    if mode not in VALID_MODES:
        raise ValueError(f"Mode must be one of {VALID_MODES}. Found: {mode}")
    return mode


def validate_arity(n, minimum:int=0, name="arity"):
    if not isinstance(n, int) or isinstance(n, bool):
        raise TypeError(f"{name} must be an integer")
    if n < minimum:
        raise ValueError(f"{name} must be at least {minimum}. Found: {n}")
    return n


def validate_slot(i, arity:int):
    if not 1 <= i <= arity:
        raise ValueError(f"Slot {i} out of range for arity {arity}")
    return i


def validate_scalar(value):
    """ Returns value as an exact rational. Floats are rejected: no rounding
        is tolerated anywhere in the library.

    Raises:
        TypeError
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError(f"Inexact scalar {value!r}; use int, str or Fraction")
    if isinstance(value, bool):
        raise TypeError(f"Boolean {value!r} is not a scalar")
    try:
        return Fraction(value)
    except (ValueError, TypeError) as e:
        raise TypeError(f"Cannot read {value!r} as a rational number") from e


def violation_report(rows):
    """ Formats a list of (check, location, message) triples as a report

    Returns:
        pandas DataFrame: one row per violation; empty if clean
    """
    return pd.DataFrame(list(rows), columns=VIOLATION_COLUMNS)
