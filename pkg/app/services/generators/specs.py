"""Generator specs and their plain key-value text serialization.

A spec fully determines a generated graph (seed included). The text form is
embedded in experiment reports and written next to generated edge lists as a
"<graph>.spec" sidecar:

    kind=sbm
    n=3400
    p_in=0.9
    p_out=0.1
    blocks=75,80,...
    directed=false
    seed=7
"""

import logging
from pathlib import Path
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from app.exceptions import GraphDataError

logger = logging.getLogger(__name__)

SEED_FIELD = Field(default=0, ge=0, lt=2**64, description="64-bit generation seed")


class ErSpec(BaseModel):
    """Erdős–Rényi G(n, p)."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["er"] = "er"
    n: int = Field(..., ge=1)
    p: float = Field(..., ge=0.0, le=1.0)
    directed: bool = False
    seed: int = SEED_FIELD

    def label(self) -> str:
        return f"ER {self.p:g}" + (" (Directed)" if self.directed else "")


class SbmSpec(BaseModel):
    """Stochastic block / planted partition model with uniform in/out probabilities."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["sbm"] = "sbm"
    block_sizes: tuple[int, ...] = Field(..., min_length=1)
    p_in: float = Field(..., ge=0.0, le=1.0)
    p_out: float = Field(..., ge=0.0, le=1.0)
    directed: bool = False
    seed: int = SEED_FIELD

    @field_validator("block_sizes")
    @classmethod
    def _positive_blocks(cls, sizes: tuple[int, ...]) -> tuple[int, ...]:
        if any(size < 1 for size in sizes):
            raise ValueError("every block needs at least one node")
        return sizes

    @model_validator(mode="after")
    def _assortative(self) -> "SbmSpec":
        if self.p_out > self.p_in:
            raise ValueError(f"p_out ({self.p_out}) must not exceed p_in ({self.p_in})")
        return self

    @property
    def n(self) -> int:
        return sum(self.block_sizes)

    def label(self) -> str:
        return f"SBM {self.p_in:g}/{self.p_out:g}" + (" (Directed)" if self.directed else "")


class CmSpec(BaseModel):
    """Erased configuration model on a discrete power-law degree sequence."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["cm"] = "cm"
    n: int = Field(..., ge=2)
    exponent: float = Field(default=3.5, gt=2.0)
    directed: bool = False
    seed: int = SEED_FIELD

    def label(self) -> str:
        return f"CM{self.n}" + (" (Directed)" if self.directed else "")


GraphSpec = ErSpec | SbmSpec | CmSpec

_SPEC_TYPES: dict[str, type[ErSpec] | type[SbmSpec] | type[CmSpec]] = {
    "er": ErSpec,
    "sbm": SbmSpec,
    "cm": CmSpec,
}


def spec_to_text(spec: GraphSpec) -> str:
    """Serialize a spec as key=value lines."""
    lines = [f"kind={spec.kind}", f"n={spec.n}"]
    if isinstance(spec, ErSpec):
        lines.append(f"p={spec.p!r}")
    elif isinstance(spec, SbmSpec):
        lines.append(f"p_in={spec.p_in!r}")
        lines.append(f"p_out={spec.p_out!r}")
        lines.append("blocks=" + ",".join(str(b) for b in spec.block_sizes))
    else:
        lines.append(f"exponent={spec.exponent!r}")
    lines.append(f"directed={'true' if spec.directed else 'false'}")
    lines.append(f"seed={spec.seed}")
    return "\n".join(lines) + "\n"


def spec_from_text(text: str) -> GraphSpec:
    """Parse the key=value form produced by spec_to_text."""
    fields: dict[str, str] = {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise GraphDataError(f"Spec line without '=': {line!r}")
        fields[key.strip()] = value.strip()

    kind = fields.pop("kind", None)
    if kind not in _SPEC_TYPES:
        raise GraphDataError(f"Unknown or missing spec kind: {kind!r}")

    if kind == "sbm":
        blocks = fields.pop("blocks", "")
        fields.pop("n", None)
        fields["block_sizes"] = [int(b) for b in blocks.split(",") if b]  # type: ignore[assignment]
    try:
        return _SPEC_TYPES[kind].model_validate(fields)
    except ValidationError as e:
        raise GraphDataError(f"Invalid {kind} spec: {e}") from e


def sidecar_path(graph_path: str | Path) -> Path:
    graph_path = Path(graph_path)
    return graph_path.with_name(graph_path.name + ".spec")


def write_spec_sidecar(spec: GraphSpec, graph_path: str | Path) -> Path:
    path = sidecar_path(graph_path)
    path.write_text(spec_to_text(spec), encoding="utf-8")
    return path


def read_spec_sidecar(graph_path: str | Path) -> GraphSpec | None:
    """Spec stored next to a generated edge list, or None when there is none."""
    path = sidecar_path(graph_path)
    if not path.exists():
        return None
    spec = spec_from_text(path.read_text(encoding="utf-8"))
    logger.debug("Read spec sidecar %s: %s", path, spec.label())
    return spec
