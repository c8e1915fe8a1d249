"""twoec: minimum 2-edge-connected spanning subgraph solver.

A 5/4-approximation pipeline (reduction, triangle-free 2-edge cover,
bridge covering, gluing) plus exact branch-and-bound oracles for small
instances and a CLI harness.
"""

from .graph import Graph, Edge

__all__ = ["Graph", "Edge"]
__version__ = "0.1.0"
