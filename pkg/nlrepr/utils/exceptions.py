"""nlrepr specific exceptions"""

# Copyright (c) nlrepr Development Team.
# Distributed under the terms of the Modified BSD License.

from __future__ import annotations


class NlreprError(Exception):
    """Base class for errors raised by nlrepr."""


class ParameterError(NlreprError, ValueError):
    """A parameter is outside the range an operation accepts."""


class TreeStructureError(ParameterError):
    """An event tree violates a structural invariant."""


class StoppingRuleError(ParameterError):
    """A stopping rule is not admissible for the requested operation."""


class DocumentError(ParameterError):
    """A problem document cannot be turned into a problem."""


class ConditionViolated(NlreprError):
    """An operator fails its monotonicity certificate.

    ``node`` is the label of the offending node and ``margin`` the
    (negative or too small) certificate margin found there.
    """

    code = "CONDITION_VIOLATED"

    def __init__(self, node, margin, reason="monotonicity margin below 1e-9"):
        self.node = node
        self.margin = float(margin)
        self.reason = reason
        super().__init__(f"{self.code}: {reason} at node {node!r} (margin {self.margin:.6g})")


class UncertifiedOperatorError(NlreprError):
    """An operation needs a certified operator."""


class NonTowerOperatorError(NlreprError):
    """An operation needs the tower property, which the operator lacks."""


class FixedPointError(NlreprError):
    """The implicit one-step equation did not converge."""


class BracketError(NlreprError):
    """A root could not be bracketed within the expansion limit."""


class EnumerationGuardError(NlreprError):
    """Exhaustive enumeration would exceed its guard."""
