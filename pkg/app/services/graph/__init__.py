"""Graph representation, edge-list ingestion and component extraction."""

from app.services.graph.core import (
    Graph,
    GraphLabelTable,
    density,
    largest_connected_component,
)
from app.services.graph.io import load_edge_list, write_edge_list

__all__ = [
    "Graph",
    "GraphLabelTable",
    "density",
    "largest_connected_component",
    "load_edge_list",
    "write_edge_list",
]
