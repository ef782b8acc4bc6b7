from __future__ import annotations

from dataclasses import dataclass, field

from ..core import TAS, Assembly, Point
from ..verifier import SndDeclaration
from .params import BuildParams


@dataclass(frozen=True)
class GeneratedTas:
    """A generated system together with its declaration and target shape.

    ``reference`` is the intended terminal assembly built directly from the
    gadget layout; ``provenance`` lists the placed gadget instances in order.
    """

    tas: TAS
    decl: SndDeclaration
    expected_domain: frozenset[Point]
    provenance: tuple[str, ...] = ()
    reference: Assembly | None = None
    params: BuildParams | None = None
    tile_count: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "expected_domain", frozenset(Point(*p) for p in self.expected_domain))
        object.__setattr__(self, "tile_count", len(self.tas.tiles))

    @property
    def r(self) -> int:
        return self.decl.r
