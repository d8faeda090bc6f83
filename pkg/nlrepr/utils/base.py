"""Global configuration class."""

# Copyright (c) nlrepr Development Team.
# Distributed under the terms of the Modified BSD License.

from traitlets import Float, Integer, TraitError, validate
from traitlets.config.configurable import LoggingConfigurable


class NlreprBase(LoggingConfigurable):
    """Global configurable class for shared config

    Tolerances and enumeration guards used by every solver and task.
    """

    tol_root = Float(
        1e-11,
        help="Absolute target for the root functional |Phi| in per-node root finding.",
    ).tag(config=True)

    tol_bracket = Float(
        1e-12,
        help="Relative bracket width, scaled by (1 + |root|), at which bisection may stop.",
    ).tag(config=True)

    tol_residual = Float(
        1e-9,
        help="Largest residual accepted when verifying a representation.",
    ).tag(config=True)

    tol_check = Float(
        1e-9,
        help="Tolerance for dominance, flat-off and value agreement checks.",
    ).tag(config=True)

    max_depth = Integer(20, help="Largest horizon accepted for generated binary trees.").tag(
        config=True
    )

    max_leaves = Integer(
        2**12, help="Largest leaf count for which stopping rules are enumerated."
    ).tag(config=True)

    max_rules = Integer(10**7, help="Largest number of stopping rules ever enumerated.").tag(
        config=True
    )

    threads = Integer(
        1, help="Worker threads for independent per-strike and per-node evaluations."
    ).tag(config=True)

    @validate("tol_root", "tol_bracket", "tol_residual", "tol_check")
    def _validate_tolerance(self, proposal):
        value = proposal["value"]
        if not value > 0:
            msg = f"{proposal['trait'].name} must be positive, got {value!r}"
            raise TraitError(msg)
        return value

    @validate("max_depth", "max_leaves", "max_rules", "threads")
    def _validate_count(self, proposal):
        value = proposal["value"]
        if value < 1:
            msg = f"{proposal['trait'].name} must be at least 1, got {value!r}"
            raise TraitError(msg)
        return value
