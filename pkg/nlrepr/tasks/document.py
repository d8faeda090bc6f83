"""Problem documents: JSON descriptions of a tree, an operator and inputs."""

# Copyright (c) nlrepr Development Team.
# Distributed under the terms of the Modified BSD License.

from __future__ import annotations

import json
import os
from functools import cached_property

import numpy as np

from nlrepr.american import MarketSpec, build_crr
from nlrepr.expectation import NonlinearExpectation, OperatorSpec
from nlrepr.representation import Formulation, FSpec
from nlrepr.tree import (
    AdaptedProcess,
    StoppingRule,
    TreeTopology,
    build_binomial,
    build_chain,
    build_explicit,
)
from nlrepr.tree.builders import MAX_DEPTH
from nlrepr.utils.exceptions import DocumentError
from nlrepr.utils.io import read_process_csv


def parse_strikes(value) -> np.ndarray | None:
    """A list of strikes or an ``a:b:n`` grid."""
    if value is None:
        return None
    if isinstance(value, str):
        try:
            start, stop, count = value.split(":")
            return np.linspace(float(start), float(stop), int(count))
        except ValueError:
            msg = f"strike grid must read a:b:n, got {value!r}"
            raise DocumentError(msg) from None
    return np.asarray(value, dtype=float).ravel()


class ProblemDocument:
    """Lazily built objects of one problem document.

    ``path`` locates files referenced by the document; ``seed`` drives
    every ``{"random": ...}`` entry.
    """

    def __init__(self, data: dict, path: str = "", seed: int = 0, max_depth: int = MAX_DEPTH):
        if not isinstance(data, dict):
            msg = "a problem document is a JSON object"
            raise DocumentError(msg)
        self.data = data
        self.path = path
        self.seed = seed
        self.max_depth = max_depth
        self.rng = np.random.default_rng(seed)

    @classmethod
    def from_filename(
        cls, filename: str, seed: int = 0, max_depth: int = MAX_DEPTH
    ) -> ProblemDocument:
        try:
            with open(filename, encoding="utf-8") as f:
                data = json.load(f)
        except OSError as e:
            msg = f"cannot read problem document {filename!r}: {e.strerror}"
            raise DocumentError(msg) from None
        except json.JSONDecodeError as e:
            msg = f"{filename}: invalid JSON ({e.msg} at line {e.lineno})"
            raise DocumentError(msg) from None
        return cls(data, os.path.dirname(os.path.abspath(filename)), seed, max_depth)

    def _resolve(self, name: str) -> str:
        return name if os.path.isabs(name) else os.path.join(self.path, name)

    def _section(self, key: str, required: bool = True):
        value = self.data.get(key)
        if value is None and required:
            msg = f"the problem document has no {key!r} entry"
            raise DocumentError(msg)
        if isinstance(value, dict) and "file" in value:
            filename = self._resolve(value["file"])
            try:
                with open(filename, encoding="utf-8") as f:
                    return json.load(f)
            except (OSError, json.JSONDecodeError) as e:
                msg = f"cannot load {key!r} from {filename!r}: {e}"
                raise DocumentError(msg) from None
        return value

    # ------------------------------------------------------------------

    @cached_property
    def _tree_and_market(self):
        spec = dict(self._section("tree"))
        kind = str(spec.pop("kind", "binomial")).lower()
        if kind in ("binomial", "crr"):
            spec.setdefault("max_depth", self.max_depth)
        try:
            if kind == "binomial":
                return build_binomial(**spec), None
            if kind == "chain":
                return build_chain(**spec), None
            if kind == "explicit":
                return build_explicit(spec["nodes"], spec.get("dt", 1.0)), None
            if kind == "crr":
                market = build_crr(**spec)
                return market.tree, market
        except (TypeError, KeyError) as e:
            msg = f"bad {kind} tree specification: {e}"
            raise DocumentError(msg) from None
        msg = f"unknown tree kind {kind!r}"
        raise DocumentError(msg)

    @property
    def tree(self) -> TreeTopology:
        return self._tree_and_market[0]

    @cached_property
    def operator_spec(self) -> OperatorSpec:
        return OperatorSpec.from_dict(self._section("operator", required=False))

    @cached_property
    def operator(self) -> NonlinearExpectation:
        data = self._section("operator", required=False) or {}
        return NonlinearExpectation(
            self.operator_spec, self.tree, validate=bool(data.get("validate", True))
        )

    def process(self, value, name: str = "X") -> AdaptedProcess:
        """An adapted process from a list, mapping, CSV reference or generator."""
        tree = self.tree
        if isinstance(value, dict):
            if "csv" in value:
                try:
                    values = read_process_csv(self._resolve(value["csv"]), tree)
                    return AdaptedProcess(tree, values)
                except (OSError, ValueError) as e:
                    msg = f"cannot read {name} from CSV: {e}"
                    raise DocumentError(msg) from None
            if "random" in value:
                scale = float((value["random"] or {}).get("scale", 1.0))
                return AdaptedProcess(tree, self.rng.normal(scale=scale, size=tree.n_nodes))
            if "constant" in value:
                return AdaptedProcess.constant(tree, value["constant"])
            return AdaptedProcess.from_mapping(tree, value)
        if isinstance(value, list):
            return AdaptedProcess(tree, np.asarray(value, dtype=float))
        msg = f"{name} must be a list, a mapping, or a csv/random/constant entry"
        raise DocumentError(msg)

    @cached_property
    def X(self) -> AdaptedProcess:
        return self.process(self._section("X"), "X")

    @cached_property
    def f(self) -> FSpec:
        return FSpec.from_dict(self.data.get("f"))

    @property
    def variant(self) -> Formulation:
        try:
            return Formulation(str(self.data.get("variant", "PLAIN")).upper())
        except ValueError:
            msg = f"unknown variant {self.data.get('variant')!r}"
            raise DocumentError(msg) from None

    def rule(self, value) -> StoppingRule:
        """A stopping rule from ``{"constant": t}`` or ``{"stops": [node ids]}``."""
        tree = self.tree
        if isinstance(value, int):
            value = {"constant": value}
        if "constant" in value:
            return StoppingRule.constant(tree, int(value["constant"]))
        stops = frozenset(tree.index_of(label) for label in value["stops"])
        return StoppingRule(tree, stops, extended=bool(value.get("extended", False)))

    @property
    def sigma(self) -> StoppingRule:
        return self.rule(self.data.get("sigma", {"constant": 0}))

    @cached_property
    def market(self) -> MarketSpec:
        market = self._tree_and_market[1]
        spec = self._section("market", required=market is None)
        if spec is None:
            return market
        if "rate" not in spec or "prices" not in spec:
            msg = "a market needs prices and rate"
            raise DocumentError(msg)
        return MarketSpec(self.process(spec["prices"], "prices"), float(spec["rate"]))

    @property
    def strikes(self) -> np.ndarray | None:
        return parse_strikes(self.data.get("strikes"))

    @property
    def trials(self) -> int:
        return int(self.data.get("trials", 100))

    @property
    def zeta(self):
        return self.data.get("zeta")

