"""Exact outcome probabilities with rational arithmetic.

Two views of the same process are provided. The producible-assembly DAG merges
sequences that reach the same assembly and runs a forward DP. The sequence
tree keeps every producing sequence apart and backs the sub-probability tree
tools (restriction to a bottleneck and the competing/non-competing split).
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterable, Iterator

from .core import TAS, Assembly, Point, TileType, attach, frontier

ONE = Fraction(1)


# ---------------------------------------------------------------------------
# producible-assembly DAG
# ---------------------------------------------------------------------------


@dataclass
class ProducibleDag:
    nodes: list[Assembly]
    children: list[list[int]]
    out_degree: list[int]
    terminals: list[int]
    partial: bool
    index: dict = field(repr=False, default_factory=dict)
    parent: list = field(repr=False, default_factory=list)

    root = 0

    def __len__(self) -> int:
        return len(self.nodes)

    def edges(self) -> Iterator[tuple[int, int, Fraction]]:
        for a, kids in enumerate(self.children):
            for b in kids:
                yield a, b, Fraction(1, self.out_degree[a])

    def node_of(self, a: Assembly) -> int | None:
        return self.index.get(a)

    def sequence_to(self, i: int) -> list[tuple[Point, str]]:
        """One producing sequence (seed first) that reaches node ``i``."""
        steps = []
        while i:
            j, p, name = self.parent[i]
            steps.append((p, name))
            i = j
        p0, t0 = next(iter(self.nodes[0].items()))
        return [(p0, t0.name)] + steps[::-1]


def enumerate_dag(tas: TAS, size_cap: int = 10_000, node_cap: int = 1_000_000) -> ProducibleDag:
    """Breadth-first enumeration of producible assemblies up to the caps.

    Nodes come out grouped by size, which is a topological order because every
    edge adds exactly one tile. ``partial`` is set when a cap cut the search.
    """
    if size_cap < 1 or node_cap < 1:
        raise ValueError("caps must be at least 1")
    root = tas.seed_assembly()
    nodes = [root]
    index = {root: 0}
    parent: list = [None]
    children: list[list[int]] = []
    out_degree: list[int] = []
    terminals: list[int] = []
    partial = False
    i = 0
    while i < len(nodes):
        a = nodes[i]
        opts = frontier(tas, a)
        out_degree.append(len(opts))
        kids: list[int] = []
        if not opts:
            terminals.append(i)
        elif len(a) >= size_cap:
            partial = True
        else:
            for p, t in opts:
                b = attach(a, p, t, tas)
                j = index.get(b)
                if j is None:
                    if len(nodes) >= node_cap:
                        partial = True
                        continue
                    j = len(nodes)
                    index[b] = j
                    nodes.append(b)
                    parent.append((i, p, t.name))
                kids.append(j)
        children.append(kids)
        i += 1
    return ProducibleDag(nodes, children, out_degree, terminals, partial, index, parent)


class ProbabilityTable(dict):
    """Terminal assembly -> exact probability; ``lower_bound`` marks partial DAGs."""

    lower_bound: bool = False

    def by_domain(self) -> dict[frozenset, Fraction]:
        out: dict[frozenset, Fraction] = {}
        for a, p in self.items():
            d = a.domain
            out[d] = out.get(d, Fraction(0)) + p
        return out


def node_probabilities(dag: ProducibleDag) -> list[Fraction]:
    """Probability that a random sequence passes through each DAG node."""
    prob = [Fraction(0)] * len(dag.nodes)
    prob[0] = ONE
    for a, kids in enumerate(dag.children):
        if kids and prob[a]:
            share = prob[a] / dag.out_degree[a]
            for b in kids:
                prob[b] += share
    return prob


def exact_terminal_probabilities(dag: ProducibleDag) -> ProbabilityTable:
    prob = node_probabilities(dag)
    table = ProbabilityTable((dag.nodes[i], prob[i]) for i in dag.terminals)
    table.lower_bound = dag.partial
    return table


def streaming_terminal_probabilities(
    tas: TAS, size_cap: int = 100_000, width_cap: int = 2_000_000
) -> ProbabilityTable:
    """Same DP as the DAG route, but keeps only one size layer in memory.

    Suited to systems whose assemblies are large but whose layers stay narrow,
    such as small counters. ``lower_bound`` is set if a cap was hit.
    """
    layer: dict[Assembly, Fraction] = {tas.seed_assembly(): ONE}
    table = ProbabilityTable()
    partial = False
    while layer:
        nxt: dict[Assembly, Fraction] = {}
        for a, prob in layer.items():
            opts = frontier(tas, a)
            if not opts:
                table[a] = table.get(a, Fraction(0)) + prob
                continue
            if len(a) >= size_cap:
                partial = True
                continue
            share = prob / len(opts)
            for p, t in opts:
                b = attach(a, p, t, tas)
                if b in nxt:
                    nxt[b] += share
                elif len(nxt) >= width_cap:
                    partial = True
                else:
                    nxt[b] = share
        layer = nxt
    table.lower_bound = partial
    return table


def shape_probability(tas: TAS, shape: Iterable, **caps) -> Fraction:
    target = frozenset(Point(*p) for p in shape)
    table = exact_terminal_probabilities(enumerate_dag(tas, **caps))
    return sum((p for a, p in table.items() if a.domain == target), Fraction(0))


def event_probability(tas: TAS, predicate: Callable[[Assembly], bool], **caps) -> Fraction:
    table = exact_terminal_probabilities(enumerate_dag(tas, **caps))
    return sum((p for a, p in table.items() if predicate(a)), Fraction(0))


# ---------------------------------------------------------------------------
# sequence enumeration (brute-force oracle for the DAG DP)
# ---------------------------------------------------------------------------


def sequence_probabilities(tas: TAS, max_sequences: int = 1_000_000) -> dict[Assembly, Fraction]:
    """Sum per-sequence products over every producing sequence, one at a time."""
    out: dict[Assembly, Fraction] = {}
    count = 0

    def walk(a: Assembly, prob: Fraction):
        nonlocal count
        opts = frontier(tas, a)
        if not opts:
            count += 1
            if count > max_sequences:
                raise RuntimeError("too many producing sequences")
            out[a] = out.get(a, Fraction(0)) + prob
            return
        share = prob / len(opts)
        for p, t in opts:
            walk(attach(a, p, t, tas), share)

    walk(tas.seed_assembly(), ONE)
    return out


# ---------------------------------------------------------------------------
# sub-probability trees
# ---------------------------------------------------------------------------

PLAIN, DIAMOND, CIRCULAR = "plain", "diamond", "circular"


@dataclass(eq=False)
class SptNode:
    payload: Any = None
    kind: str = PLAIN
    children: list[tuple[Fraction, "SptNode"]] = field(default_factory=list)

    def add(self, prob, child: "SptNode") -> "SptNode":
        prob = Fraction(prob)
        if not 0 < prob <= 1:
            raise ValueError(f"edge probability {prob} outside (0, 1]")
        self.children.append((prob, child))
        return child

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def out_sum(self) -> Fraction:
        return sum((p for p, _ in self.children), Fraction(0))

    def normalized(self) -> bool:
        return self.out_sum() == 1

    def walk(self) -> Iterator["SptNode"]:
        stack = [self]
        while stack:
            v = stack.pop()
            yield v
            stack.extend(c for _, c in reversed(v.children))

    def leaves(self) -> Iterator["SptNode"]:
        return (v for v in self.walk() if v.is_leaf)

    def size(self) -> int:
        return sum(1 for _ in self.walk())

    def maximal_paths(self) -> Iterator[list["SptNode"]]:
        stack = [(self, [self])]
        while stack:
            v, path = stack.pop()
            if v.is_leaf:
                yield path
            for _, c in reversed(v.children):
                stack.append((c, path + [c]))

    def check(self) -> None:
        """Raise if an edge weight or an outgoing sum violates the tree rules."""
        for v in self.walk():
            for p, _ in v.children:
                if not 0 < p <= 1:
                    raise ValueError(f"edge probability {p} outside (0, 1]")
            if v.out_sum() > 1:
                raise ValueError("outgoing probabilities exceed 1")


def spt_probability(q: SptNode) -> Fraction:
    """Sum over leaves of the product of edge weights on the root-to-leaf path."""
    total = Fraction(0)
    stack = [(q, ONE)]
    while stack:
        v, w = stack.pop()
        if v.is_leaf:
            total += w
        else:
            for p, c in v.children:
                stack.append((c, w * p))
    return total


def path_probability(q: SptNode, target: SptNode) -> Fraction | None:
    stack = [(q, ONE)]
    while stack:
        v, w = stack.pop()
        if v is target:
            return w
        for p, c in v.children:
            stack.append((c, w * p))
    return None


class BottleneckError(ValueError):
    def __init__(self, message: str, witness: list):
        super().__init__(message)
        self.witness = witness


def restrict(q: SptNode, bottleneck) -> SptNode:
    """Copy of ``q`` cut at the bottleneck nodes, which become the leaves.

    ``bottleneck`` is a set of nodes or a predicate over nodes. Every maximal
    path must meet it exactly once; the first violating path is reported.
    """
    member = bottleneck if callable(bottleneck) else (lambda v, s=set(map(id, bottleneck)): id(v) in s)
    for path in q.maximal_paths():
        hits = [v for v in path if member(v)]
        if len(hits) != 1:
            raise BottleneckError(
                f"maximal path meets the bottleneck {len(hits)} times",
                [v.payload for v in path],
            )

    def copy(v: SptNode) -> SptNode:
        out = SptNode(v.payload, v.kind)
        if not member(v):
            for p, c in v.children:
                out.children.append((p, copy(c)))
        return out

    return copy(q)


def split(
    q: SptNode,
    competing: Callable[[SptNode], bool],
    total_children: Callable[[SptNode], int],
    competing_children: Callable[[SptNode], int],
) -> SptNode:
    """Insert a diamond (competing) and a circular (other) node under each internal node.

    ``total_children`` and ``competing_children`` report the counts in the full
    sequence tree, which may exceed those present in ``q``.
    """
    if q.is_leaf:
        return SptNode(q.payload, q.kind)
    c = competing_children(q)
    m = total_children(q)
    diamond = SptNode(kind=DIAMOND)
    circle = SptNode(kind=CIRCULAR)
    c_in = 0
    for _, child in q.children:
        sub = split(child, competing, total_children, competing_children)
        if competing(child):
            c_in += 1
            diamond.add(Fraction(1, c), sub)
        else:
            circle.add(Fraction(1, m - c), sub)
    root = SptNode(q.payload, q.kind)
    if c_in > 0:
        root.add(Fraction(c, m), diamond)
    if len(q.children) - c_in > 0:
        root.add(Fraction(m - c, m), circle)
    return root


# ---------------------------------------------------------------------------
# the sequence tree of a concrete system
# ---------------------------------------------------------------------------


@dataclass(eq=False)
class SeqState:
    """Payload of a sequence-tree node: the current assembly and the last placement."""

    assembly: Assembly
    last: tuple[Point, TileType] | None
    options: tuple = ()
    depth: int = 0
    parent: "SeqState | None" = None

    def placements(self) -> list[tuple[Point, str]]:
        out = []
        s = self
        while s is not None and s.last is not None:
            out.append((s.last[0], s.last[1].name))
            s = s.parent
        return out[::-1]


def sequence_tree(
    tas: TAS,
    max_depth: int | None = None,
    keep: Callable[[SeqState, tuple[Point, TileType]], bool] | None = None,
    stop: Callable[[SeqState], bool] | None = None,
    node_cap: int = 200_000,
) -> SptNode:
    """Build the tree of producing sequences with edge weights ``1/M``.

    ``keep`` filters which options are expanded (pruning), ``stop`` turns a node
    into a leaf, and ``max_depth`` bounds the number of attachments.
    """
    count = 0

    def build(state: SeqState) -> SptNode:
        nonlocal count
        count += 1
        if count > node_cap:
            raise RuntimeError("sequence tree exceeds the node cap")
        node = SptNode(state)
        if stop is not None and stop(state):
            return node
        if max_depth is not None and state.depth >= max_depth:
            return node
        opts = state.options
        for p, t in opts:
            if keep is not None and not keep(state, (p, t)):
                continue
            child_state = SeqState(attach(state.assembly, p, t, tas), (p, t), (), state.depth + 1, state)
            child_state.options = tuple(frontier(tas, child_state.assembly))
            node.add(Fraction(1, len(opts)), build(child_state))
        return node

    root = tas.seed_assembly()
    return build(SeqState(root, None, tuple(frontier(tas, root))))


def subtrees(q: SptNode, rng, count: int, stop_prob: float = 0.3, drop_prob: float = 0.0) -> list[SptNode]:
    """Random finite subtrees sharing the root of ``q``.

    Each internal node is cut with probability ``stop_prob``; with ``drop_prob``
    each child is dropped independently (at least one is always kept).
    """
    out = []
    for _ in range(count):

        def sample(v: SptNode, top: bool) -> SptNode:
            node = SptNode(v.payload, v.kind)
            if v.is_leaf or (not top and rng.random() < stop_prob):
                return node
            kids = [(p, c) for p, c in v.children if rng.random() >= drop_prob]
            if not kids:
                kids = [rng.choice(v.children)]
            for p, c in kids:
                node.children.append((p, sample(c, False)))
            return node

        out.append(sample(q, True))
    return out


def all_orderings(items: Iterable) -> Iterator[tuple]:
    return itertools.permutations(items)


def bfs_layers(dag: ProducibleDag) -> list[list[int]]:
    layers: dict[int, list[int]] = {}
    for i, a in enumerate(dag.nodes):
        layers.setdefault(len(a), []).append(i)
    return [layers[k] for k in sorted(layers)]


def reachable(dag: ProducibleDag, start: int = 0) -> set[int]:
    seen = {start}
    todo = deque([start])
    while todo:
        a = todo.popleft()
        for b in dag.children[a]:
            if b not in seen:
                seen.add(b)
                todo.append(b)
    return seen
