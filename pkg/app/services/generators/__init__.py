"""Seeded random-graph generators (ER, SBM/PPM, power-law configuration model)."""

from app.services.generators.configuration import (
    configuration_graph,
    fit_power_law_exponent,
    generate_cm,
    power_law_degrees,
)
from app.services.generators.random_graphs import (
    block_membership,
    expected_sbm_density,
    generate_er,
    generate_sbm,
    sample_block_sizes,
)
from app.services.generators.specs import (
    CmSpec,
    ErSpec,
    GraphSpec,
    SbmSpec,
    read_spec_sidecar,
    spec_from_text,
    spec_to_text,
    write_spec_sidecar,
)
from app.services.graph.core import Graph


def generate(spec: GraphSpec, threads: int | None = None) -> Graph:
    """Dispatch on spec kind."""
    if isinstance(spec, ErSpec):
        return generate_er(spec, threads=threads)
    if isinstance(spec, SbmSpec):
        return generate_sbm(spec, threads=threads)
    return generate_cm(spec)


__all__ = [
    "CmSpec",
    "ErSpec",
    "GraphSpec",
    "SbmSpec",
    "block_membership",
    "configuration_graph",
    "expected_sbm_density",
    "fit_power_law_exponent",
    "generate",
    "generate_cm",
    "generate_er",
    "generate_sbm",
    "power_law_degrees",
    "read_spec_sidecar",
    "sample_block_sizes",
    "spec_from_text",
    "spec_to_text",
    "write_spec_sidecar",
]
