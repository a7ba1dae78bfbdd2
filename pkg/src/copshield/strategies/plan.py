"""Protection plans: the recursion tree behind a composed strategy.

Every node records which vertex set it removes (and protects), how many cops
it costs, and its activation threshold.  Vertex ids are always those of the
top-level graph so a serialized plan can be read without the subgraphs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

NODE_KINDS = (
    "geodesic-guard",
    "one-ball",
    "patrol",
    "cover-dispatch",
    "base-case",
    "component-branch",
)


@dataclass
class PlanNode:
    kind: str
    budget: int
    threshold: int
    removed: frozenset[int] = frozenset()
    protected: frozenset[int] = frozenset()
    params: dict = field(default_factory=dict)
    children: list["PlanNode"] = field(default_factory=list)
    component: frozenset[int] | None = None
    flags: list[str] = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.kind not in NODE_KINDS:
            raise ValueError(f"unknown plan node kind {self.kind!r}")

    def walk(self) -> Iterator["PlanNode"]:
        yield self
        for child in self.children:
            yield from child.walk()

    def depth(self) -> int:
        return 1 + max((c.depth() for c in self.children), default=0)

    def reductions_on_paths(self, kinds: tuple[str, ...]) -> int:
        """Largest number of ``kinds`` nodes on a root-to-leaf path."""
        own = 1 if self.kind in kinds else 0
        return own + max((c.reductions_on_paths(kinds) for c in self.children), default=0)

    def all_flags(self) -> list[str]:
        return [f for node in self.walk() for f in node.flags]

    def to_dict(self) -> dict:
        out = {
            "kind": self.kind,
            "budget": self.budget,
            "threshold": self.threshold,
            "removed": sorted(self.removed),
            "protected": sorted(self.protected),
            "params": {k: _plain(v) for k, v in self.params.items()},
            "flags": list(self.flags),
            "children": [c.to_dict() for c in self.children],
        }
        if self.component is not None:
            out["component"] = sorted(self.component)
        return out


# the plan type exported under its domain name
ProtectionPlan = PlanNode


def _plain(value):
    if isinstance(value, (frozenset, set)):
        return sorted(value)
    if isinstance(value, tuple):
        return [_plain(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    return value
