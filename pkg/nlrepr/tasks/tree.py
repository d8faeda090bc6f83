"""Tree generation."""

# Copyright (c) nlrepr Development Team.
# Distributed under the terms of the Modified BSD License.

import pandas as pd

from nlrepr.utils.io import process_frame

from .base import Task


class TreeGenTask(Task):
    """Build the document's tree and emit it as an explicit tree document."""

    command = "tree gen"

    def run(self, document, resources):
        tree = document.tree
        frame = process_frame(tree, tree.prob).rename(columns={"value": "prob"})
        increments = pd.DataFrame(
            tree.increment, columns=[f"increment_{j}" for j in range(tree.dim)]
        )
        self.add_table(resources, "nodes", pd.concat([frame, increments], axis=1))
        return {
            "horizon": tree.horizon,
            "n_nodes": tree.n_nodes,
            "n_leaves": tree.n_leaves,
            "dim": tree.dim,
            "document": {"tree": tree.to_document()},
        }
