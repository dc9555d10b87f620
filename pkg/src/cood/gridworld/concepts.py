"""Concept combinations, the 8-node concept graph, and distance-based splits.

Three binary concept variables (shape, colour, action) span a unit cube of
8 combinations. Splitting that cube by Hamming distance from a 4-node
training class yields the Train / Distance-1 / Distance-2 categories that
define the out-of-distribution structure of both world models.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


@dataclass(frozen=True, order=True)
class ConceptCombo:
    """One corner of the (shape, colour, action) unit cube."""

    shape_bit: int
    colour_bit: int
    action_bit: int

    def __post_init__(self):
        for b in (self.shape_bit, self.colour_bit, self.action_bit):
            if b not in (0, 1):
                raise ValueError(f"concept bits must be 0 or 1, got {b}")

    def bits(self) -> tuple[int, int, int]:
        return (self.shape_bit, self.colour_bit, self.action_bit)


ALL_COMBOS: tuple[ConceptCombo, ...] = tuple(
    ConceptCombo(s, c, a) for s in (0, 1) for c in (0, 1) for a in (0, 1)
)


class SplitClass(Enum):
    TRAIN = "train"
    DISTANCE_1 = "distance_1"
    DISTANCE_2 = "distance_2"


def hamming(a: ConceptCombo, b: ConceptCombo) -> int:
    return sum(x != y for x, y in zip(a.bits(), b.bits()))


@dataclass(frozen=True)
class ConceptGraph:
    """The 8 combos plus all pairwise Hamming distances."""

    nodes: tuple[ConceptCombo, ...]
    distance: dict[tuple[ConceptCombo, ConceptCombo], int]

    def dist(self, a: ConceptCombo, b: ConceptCombo) -> int:
        return self.distance[(a, b)]


@dataclass(frozen=True)
class SplitAssignment:
    """Partition of the concept graph into train / distance-1 / distance-2."""

    graph: ConceptGraph
    assignment: dict[ConceptCombo, SplitClass]

    def combos(self, cls: SplitClass) -> tuple[ConceptCombo, ...]:
        return tuple(c for c in self.graph.nodes if self.assignment[c] is cls)

    def min_distance_to_train(self, combo: ConceptCombo) -> int:
        train = self.combos(SplitClass.TRAIN)
        return min(self.graph.dist(combo, t) for t in train)

    def class_of(self, combo: ConceptCombo) -> SplitClass:
        return self.assignment[combo]


def build_concept_graph() -> ConceptGraph:
    """Enumerate all 8 combos and their pairwise Hamming distances."""
    distance = {(a, b): hamming(a, b) for a in ALL_COMBOS for b in ALL_COMBOS}
    return ConceptGraph(nodes=ALL_COMBOS, distance=distance)


def assign_splits(graph: ConceptGraph) -> SplitAssignment:
    """Assign each combo to a concept class by its Hamming weight.

    The four combos with at most one set bit form the training class. The
    three weight-2 combos sit at distance 1 from it, and (1,1,1) at
    distance 2.
    """
    if len(graph.nodes) != 8:
        raise ValueError(f"concept graph must have 8 nodes, got {len(graph.nodes)}")
    assignment: dict[ConceptCombo, SplitClass] = {}
    for combo in graph.nodes:
        weight = sum(combo.bits())
        if weight <= 1:
            assignment[combo] = SplitClass.TRAIN
        elif weight == 2:
            assignment[combo] = SplitClass.DISTANCE_1
        else:
            assignment[combo] = SplitClass.DISTANCE_2
    result = SplitAssignment(graph=graph, assignment=assignment)
    # Sanity: class sizes 4/3/1 with min distances 0/1/2.
    assert len(result.combos(SplitClass.TRAIN)) == 4
    assert len(result.combos(SplitClass.DISTANCE_1)) == 3
    assert len(result.combos(SplitClass.DISTANCE_2)) == 1
    return result
