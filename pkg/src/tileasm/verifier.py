"""Bounded checks of the sequential non-determinism hypotheses on a concrete system.

Every check returns a three-valued result. ``Fail`` always carries a witness
that can be replayed, ``Inconclusive`` means a cap was hit before the search
space was exhausted.
"""

from __future__ import annotations

import random
from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, Sequence

from .competition import CompetitionSpec
from .core import TAS, Assembly, Point, TileType, attachable, frontier_set, neighbors, opposite
from .dynamics import replay, run_sequence, trace_index
from .exact import enumerate_dag


@dataclass(frozen=True)
class SndDeclaration:
    """Ordered contested points with their start points, intended tiles and races."""

    pocs: tuple[Point, ...]
    starts: tuple[Point, ...]
    winner: Mapping[Point, str]
    competitions: tuple[CompetitionSpec, ...]

    def __post_init__(self):
        pocs = tuple(Point(*p) for p in self.pocs)
        starts = tuple(Point(*p) for p in self.starts)
        winner = {Point(*p): name for p, name in dict(self.winner).items()}
        comps = tuple(self.competitions)
        object.__setattr__(self, "pocs", pocs)
        object.__setattr__(self, "starts", starts)
        object.__setattr__(self, "winner", winner)
        object.__setattr__(self, "competitions", comps)
        if not (len(pocs) == len(starts) == len(comps)):
            raise ValueError("pocs, starts and competitions must have equal length")
        if len(set(pocs)) != len(pocs):
            raise ValueError("duplicate contested point")
        if set(pocs) & set(starts):
            raise ValueError("a start point is also a contested point")
        if set(winner) != set(pocs):
            raise ValueError("winner must be defined exactly on the contested points")
        for p, s, c in zip(pocs, starts, comps):
            if c.poc != p or c.start != s:
                raise ValueError(f"competition for {p} does not match its declared points")
            if c.winner_tile != winner[p]:
                raise ValueError(f"competition winner at {p} disagrees with the winner map")

    @classmethod
    def from_competitions(cls, comps: Iterable[CompetitionSpec]) -> "SndDeclaration":
        comps = tuple(comps)
        return cls(
            pocs=tuple(c.poc for c in comps),
            starts=tuple(c.start for c in comps),
            winner={c.poc: c.winner_tile for c in comps},
            competitions=comps,
        )

    @classmethod
    def empty(cls) -> "SndDeclaration":
        return cls((), (), {}, ())

    @property
    def r(self) -> int:
        return len(self.pocs)

    def competition_at(self, p) -> CompetitionSpec | None:
        p = Point(*p)
        for c in self.competitions:
            if c.poc == p:
                return c
        return None


class CheckStatus(str, Enum):
    PASS = "Pass"
    FAIL = "Fail"
    INCONCLUSIVE = "Inconclusive"


@dataclass
class CheckResult:
    name: str
    status: CheckStatus
    detail: str = ""
    witness: object = None

    def __str__(self) -> str:
        text = f"{self.name}: {self.status.value}"
        return f"{text} ({self.detail})" if self.detail else text


@dataclass
class VerificationReport:
    checks: list[CheckResult] = field(default_factory=list)
    caps: dict = field(default_factory=dict)

    def add(self, result: CheckResult) -> CheckResult:
        self.checks.append(result)
        return result

    @property
    def failed(self) -> list[CheckResult]:
        return [c for c in self.checks if c.status is CheckStatus.FAIL]

    @property
    def ok(self) -> bool:
        return not self.failed

    def __getitem__(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def render(self) -> str:
        lines = [str(c) for c in self.checks]
        if self.caps:
            lines.append("caps: " + " ".join(f"{k}={v}" for k, v in sorted(self.caps.items())))
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# graph helpers
# ---------------------------------------------------------------------------


def _adjacency(edges) -> dict:
    adj: dict = defaultdict(list)
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    return adj


def _reachable_avoiding(adj, src, dst, avoid) -> bool:
    if src == avoid:
        return False
    seen = {src}
    stack = [src]
    while stack:
        v = stack.pop()
        if v == dst:
            return True
        for u in adj.get(v, ()):
            if u != avoid and u not in seen:
                seen.add(u)
                stack.append(u)
    return False


def all_paths_through(a: Assembly, src, dst, via) -> bool:
    """Whether every simple binding-graph path from ``src`` to ``dst`` visits ``via``."""
    src, dst, via = Point(*src), Point(*dst), Point(*via)
    if via in (src, dst):
        return True
    adj = _adjacency(a.binding_graph())
    return not _reachable_avoiding(adj, src, dst, via)


def _binding_sides(a: Assembly, p: Point, t: TileType) -> list[tuple[int, str]]:
    """(side, neighbor tile name) pairs through which ``t`` would bind at ``p``."""
    out = []
    for side, q in neighbors(p):
        other = a.get(q)
        if other is not None and t.glues[side].binds(other.glues[opposite(side)]):
            out.append((side, other.name))
    return out


# ---------------------------------------------------------------------------
# checks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DdWitness:
    """Two producing sequences whose results agree yet admit different tiles at ``point``."""

    first: tuple
    second: tuple
    point: Point
    tiles: tuple[str, str]


def replay_dd_witness(tas: TAS, w: DdWitness, pocs: Iterable = ()) -> bool:
    """Re-derive a directional determinism violation from its witness alone."""
    a = replay(tas, w.first)
    b = replay(tas, w.second)
    ta, tb = tas.tiles[w.tiles[0]], tas.tiles[w.tiles[1]]
    if ta == tb or not a.agrees_with(b):
        return False
    if not (attachable(tas, a, w.point, ta) and attachable(tas, b, w.point, tb)):
        return False
    if Point(*w.point) not in {Point(*p) for p in pocs}:
        return True
    shared = set(_binding_sides(a, w.point, ta)) & set(_binding_sides(b, w.point, tb))
    return bool(shared)


def check_directional_determinism(
    tas: TAS, decl: SndDeclaration, size_cap: int = 64, node_cap: int = 20_000
) -> CheckResult:
    name = "directional_determinism"
    dag = enumerate_dag(tas, size_cap=size_cap, node_cap=node_cap)
    pocs = set(decl.pocs)
    by_point: dict[Point, list[tuple[int, TileType]]] = defaultdict(list)
    for i, a in enumerate(dag.nodes):
        for p, t in frontier_set(tas, a):
            by_point[p].append((i, t))
    for p in sorted(by_point):
        entries = by_point[p]
        if len({t.name for _, t in entries}) < 2:
            continue
        for u in range(len(entries)):
            i, ti = entries[u]
            a = dag.nodes[i]
            for v in range(u, len(entries)):
                j, tj = entries[v]
                if ti == tj:
                    continue
                b = dag.nodes[j]
                if not a.agrees_with(b):
                    continue
                if p in pocs:
                    shared = set(_binding_sides(a, p, ti)) & set(_binding_sides(b, p, tj))
                    if not shared:
                        continue
                    why = "same attachment side and neighbor at a contested point"
                else:
                    why = "agreeing assemblies admit different tiles at an ordinary point"
                witness = DdWitness(tuple(dag.sequence_to(i)), tuple(dag.sequence_to(j)), p, (ti.name, tj.name))
                return CheckResult(name, CheckStatus.FAIL, f"{why} at {tuple(p)}", witness)
    if dag.partial:
        return CheckResult(name, CheckStatus.INCONCLUSIVE, f"enumeration capped at {len(dag)} assemblies")
    return CheckResult(name, CheckStatus.PASS, f"{len(dag)} assemblies")


def poc_order_violation(trace: Sequence, decl: SndDeclaration) -> str | None:
    """Explain how ``trace`` breaks the declared order, or return None."""
    idx = trace_index(trace)
    if not all(p in idx for p in decl.pocs):
        return None
    for a, b in zip(decl.pocs, decl.pocs[1:]):
        if idx[a] >= idx[b]:
            return f"{tuple(a)} placed at step {idx[a]}, after {tuple(b)} at step {idx[b]}"
    chain = []
    for x, y in zip(decl.starts, decl.pocs):
        if x not in idx:
            return f"start {tuple(x)} missing although {tuple(y)} is placed"
        chain += [x, y]
    for a, b in zip(chain, chain[1:]):
        if idx[a] >= idx[b]:
            return f"{tuple(a)} (step {idx[a]}) does not precede {tuple(b)} (step {idx[b]})"
    return None


def check_poc_order(
    tas: TAS, decl: SndDeclaration, trials: int, seed: int, step_cap: int, kernel: str | None = None
) -> CheckResult:
    name = "poc_order"
    if trials < 1:
        raise ValueError("trials must be at least 1")
    covered = 0
    capped = 0
    for i in range(trials):
        res = run_sequence(tas, random.Random(f"{seed}:{i}"), step_cap, record_trace=True, kernel=kernel)
        if not res.terminal:
            capped += 1
        why = poc_order_violation(res.trace, decl)
        if why is not None:
            return CheckResult(name, CheckStatus.FAIL, why, res.trace)
        covered += all(p in res.final for p in decl.pocs)
    if decl.r and covered == 0:
        return CheckResult(name, CheckStatus.INCONCLUSIVE, f"no trace of {trials} covered every contested point")
    detail = f"{trials} traces, {covered} covering all contested points"
    if capped:
        detail += f", {capped} hit the step cap"
    return CheckResult(name, CheckStatus.PASS, detail)


def check_w_correct(a: Assembly, decl: SndDeclaration) -> bool:
    """Every covered contested point holds its intended tile."""
    for p in decl.pocs:
        t = a.get(p)
        if t is not None and t.name != decl.winner[p]:
            return False
    return True


def _prefix_assembly(tas: TAS, prefix) -> Assembly:
    if isinstance(prefix, Assembly):
        return prefix
    return replay(tas, prefix)


def is_rigged_by(tas: TAS, comp: CompetitionSpec, prefix) -> bool:
    """Whether a prefix already blocks the losing path at a point every seed-to-start path crosses.

    ``prefix`` is a trace of ``(point, tile name)`` pairs or an assembly; it
    must contain the start point.
    """
    a = _prefix_assembly(tas, prefix)
    if comp.start not in a:
        raise ValueError("prefix does not contain the start point")
    interior = [p for p in comp.losing_path[1:-1] if p in a]
    if not interior:
        return False
    adj = _adjacency(a.binding_graph())
    s = tas.seed_point
    return any(not _reachable_avoiding(adj, s, comp.start, p) for p in interior)


def is_competing_tile(tas: TAS, decl: SndDeclaration, beta: Assembly, p, t: TileType) -> bool:
    """Whether placing ``t`` at ``p`` in ``beta`` extends one of the declared races."""
    p = Point(*p)
    if len(beta) == 0:
        return False
    if decl.r and len(beta) == 1 and p == tas.seed_point == decl.starts[0]:
        return True
    if not attachable(tas, beta, p, t):
        return False
    grown = None
    for c in decl.competitions:
        if c.poc in beta:
            continue
        if p not in c.winning_path and p not in c.losing_path:
            continue
        if grown is None:
            grown = beta.with_tile(p, t)
        if all_paths_through(grown, tas.seed_point, p, c.start):
            return True
    return False


def check_structure(
    tas: TAS, decl: SndDeclaration, expected_domain: Iterable | None = None, terminal: Assembly | None = None
) -> CheckResult:
    """Static consistency of a declaration against its tile set and expected shape."""
    name = "structure"
    names = set(tas.tiles.names())
    for p in decl.pocs:
        if decl.winner[p] not in names:
            return CheckResult(name, CheckStatus.FAIL, f"winner tile at {tuple(p)} is not in the tile set", p)
    domain = {Point(*q) for q in expected_domain} if expected_domain is not None else None
    if domain is not None:
        if tas.seed_point not in domain:
            return CheckResult(name, CheckStatus.FAIL, "seed lies outside the expected domain")
        for c in decl.competitions:
            for q in c.winning_path + c.losing_path:
                if q not in domain:
                    return CheckResult(name, CheckStatus.FAIL, f"race point {tuple(q)} outside the domain", q)
    if terminal is not None:
        if not terminal.is_connected():
            return CheckResult(name, CheckStatus.FAIL, "reference terminal is not connected")
        if domain is not None and terminal.domain != domain:
            return CheckResult(name, CheckStatus.FAIL, "reference terminal does not cover the expected domain")
        if not check_w_correct(terminal, decl):
            return CheckResult(name, CheckStatus.FAIL, "reference terminal is not w-correct")
        if frontier_set(tas, terminal):
            return CheckResult(name, CheckStatus.FAIL, "reference terminal still has attachable tiles")
    return CheckResult(name, CheckStatus.PASS, f"r={decl.r}, {len(tas.tiles)} tile types")


def verify(
    tas: TAS,
    decl: SndDeclaration,
    *,
    expected_domain: Iterable | None = None,
    terminal: Assembly | None = None,
    size_cap: int = 64,
    node_cap: int = 20_000,
    trials: int = 100,
    seed: int = 0,
    step_cap: int = 1_000_000,
) -> VerificationReport:
    report = VerificationReport(
        caps={"size_cap": size_cap, "node_cap": node_cap, "trials": trials, "step_cap": step_cap}
    )
    report.add(check_structure(tas, decl, expected_domain, terminal))
    report.add(check_directional_determinism(tas, decl, size_cap, node_cap))
    report.add(check_poc_order(tas, decl, trials, seed, step_cap))
    return report
