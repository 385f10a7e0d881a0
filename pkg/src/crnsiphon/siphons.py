"""Siphon predicate, minimal-siphon enumeration, and hypergraph transversals.

A siphon is a non-empty species set Z such that every reaction producing a
species of Z already consumes some species of Z.  Three enumeration routes
live here:

* ``brute_force_minimal_siphons`` — the oracle: filter all subsets.
* ``minimal_siphons`` — depth-first search that repairs one violated
  production clause at a time, pruning branches that contain a previously
  found siphon, with a final inclusion-minimality pass.
* ``minimal_siphons_fast`` — for strongly connected networks the minimal
  siphons are exactly the minimal transversals of the complex supports, so
  the hypergraph dualizer below applies.

The transversal enumerator keeps, for every chosen vertex, a non-empty set
of "private" edges hit by that vertex alone; a branch is extended only
while that stays true, which makes every emitted set minimal by
construction and lets counting run without storing results.
"""

from __future__ import annotations

import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Iterable

from crnsiphon.network import ReactionNetwork, connectivity

__all__ = [
    "Siphon",
    "SiphonViolation",
    "Budget",
    "BudgetExceededError",
    "Hypergraph",
    "TransversalTally",
    "is_siphon",
    "siphon_violation",
    "brute_force_minimal_siphons",
    "minimal_siphons",
    "minimal_siphons_fast",
    "minimal_transversals",
    "transversal_counts",
    "complex_support_hypergraph",
]

_BRUTE_FORCE_LIMIT = 22


@dataclass(frozen=True, order=True)
class Siphon:
    """Non-empty, sorted tuple of species indices."""

    members: tuple[int, ...]

    def __post_init__(self):
        if not self.members:
            raise ValueError("a siphon is non-empty by definition")
        if tuple(sorted(set(self.members))) != self.members:
            raise ValueError("siphon members must be sorted and distinct")

    def names(self, net: ReactionNetwork) -> tuple[str, ...]:
        return tuple(net.species.names[i] for i in self.members)

    @classmethod
    def from_names(cls, net: ReactionNetwork, names: Iterable[str]) -> "Siphon":
        idx = net.species.index
        return cls(tuple(sorted(idx[n] for n in names)))


@dataclass(frozen=True)
class SiphonViolation:
    reason: str
    reaction_index: int | None = None
    species: int | None = None


def siphon_violation(net: ReactionNetwork, members: Iterable[int]) -> SiphonViolation | None:
    """None if the set is a siphon, else one violated production clause."""
    z = set(members)
    if not z:
        return SiphonViolation("the empty set is not a siphon by definition")
    if any(not 0 <= i < net.num_species for i in z):
        raise ValueError("species index out of range")
    for ri in range(len(net.reactions)):
        produced = net.product_support(ri) & z
        if produced and not (net.reactant_support(ri) & z):
            return SiphonViolation(
                f"reaction {net.reaction_text(ri)} produces a member but consumes none",
                reaction_index=ri,
                species=min(produced),
            )
    return None


def is_siphon(net: ReactionNetwork, members: Iterable[int]) -> bool:
    return siphon_violation(net, members) is None


# ---------------------------------------------------------------------------
# budgets


@dataclass(frozen=True)
class Budget:
    """Enumeration limits; None means unlimited."""

    max_results: int | None = None
    max_ms: int | None = None


class BudgetExceededError(RuntimeError):
    """Raised when an enumeration hits its budget.

    ``partial`` holds whatever was found before the limit; it is not
    exhaustive.
    """

    def __init__(self, message: str, partial):
        super().__init__(message)
        self.partial = partial


class _BudgetClock:
    __slots__ = ("deadline", "max_results", "emitted", "ticks")

    def __init__(self, budget: Budget | None):
        self.deadline = None
        self.max_results = None
        if budget is not None:
            if budget.max_ms is not None:
                self.deadline = time.monotonic() + budget.max_ms / 1000.0
            self.max_results = budget.max_results
        self.emitted = 0
        self.ticks = 0

    def note_result(self):
        self.emitted += 1
        if self.max_results is not None and self.emitted > self.max_results:
            raise _BudgetSignal("result limit exceeded")

    def tick(self):
        self.ticks += 1
        if self.deadline is not None and self.ticks % 1024 == 0:
            if time.monotonic() > self.deadline:
                raise _BudgetSignal("time limit exceeded")


class _BudgetSignal(Exception):
    pass


# ---------------------------------------------------------------------------
# hypergraph transversals


@dataclass(frozen=True)
class Hypergraph:
    num_vertices: int
    edges: tuple[frozenset[int], ...]

    def __post_init__(self):
        for e in self.edges:
            if not e:
                raise ValueError("hypergraph edges must be non-empty")
            if any(not 0 <= v < self.num_vertices for v in e):
                raise ValueError("edge vertex out of range")


@dataclass(frozen=True)
class TransversalTally:
    total: int
    by_size: dict[int, int] = field(default_factory=dict)


def _dualize(
    num_vertices: int,
    edge_vertex_masks: list[int],
    emit: Callable[[list[int]], None],
    clock: _BudgetClock,
) -> None:
    """Enumerate minimal hitting sets of the given edges, emitting each once.

    Bitmask conventions: vertex sets are ints over vertex bits; edge sets
    (``uncov``, criticality sets) are ints over *edge-id* bits.  Every
    critical edge belongs to exactly one chosen vertex, so ``owner`` maps
    edge bits to that vertex and the minimality check on adding v touches
    only the owners of the edges v would steal, not the whole chosen set.
    """
    m = len(edge_vertex_masks)
    if m == 0:
        emit([])
        return
    # edges_at[v]: edge-id mask of edges containing vertex v
    edges_at = [0] * num_vertices
    for eid, vmask in enumerate(edge_vertex_masks):
        rest = vmask
        while rest:
            low = rest & -rest
            edges_at[low.bit_length() - 1] |= 1 << eid
            rest &= rest - 1

    chosen: list[int] = []
    crit: dict[int, int] = {}  # chosen vertex -> edge-id mask of its private edges
    owner: dict[int, int] = {}  # edge bit -> owning vertex (stale entries unread)
    masks = edge_vertex_masks
    tick = clock.tick
    note_result = clock.note_result

    def rec(uncov: int, cand: int, critical: int) -> None:
        tick()
        if uncov == 0:
            note_result()
            emit(chosen)
            return
        # Pick an uncovered edge with the fewest candidate vertices; an
        # edge with none kills the branch, one with a single candidate is
        # forced, so scanning stops early in both cases.
        best_inter = 0
        best_count = None
        rest = uncov
        while rest:
            low = rest & -rest
            rest &= rest - 1
            inter = masks[low.bit_length() - 1] & cand
            c = inter.bit_count()
            if c == 0:
                return
            if best_count is None or c < best_count:
                best_inter = inter
                best_count = c
                if c == 1:
                    break
        cand &= ~best_inter
        branch = best_inter
        while branch:
            vbit = branch & -branch
            branch &= branch - 1
            v = vbit.bit_length() - 1
            steal = edges_at[v]
            affected = steal & critical
            losses: dict[int, int] = {}
            rest = affected
            while rest:
                low = rest & -rest
                rest &= rest - 1
                u = owner[low]
                losses[u] = losses.get(u, 0) | low
            if all(crit[u] != lost for u, lost in losses.items()):
                for u, lost in losses.items():
                    crit[u] &= ~lost
                covered = uncov & steal
                crit[v] = covered
                rest = covered
                while rest:
                    low = rest & -rest
                    rest &= rest - 1
                    owner[low] = v
                chosen.append(v)
                rec(uncov & ~steal, cand, (critical & ~affected) | covered)
                chosen.pop()
                del crit[v]
                for u, lost in losses.items():
                    crit[u] |= lost
            cand |= vbit

    rec((1 << m) - 1, (1 << num_vertices) - 1, 0)


def _run_dualizer(h: Hypergraph, budget: Budget | None, emit, partial_factory):
    clock = _BudgetClock(budget)
    masks = [sum(1 << v for v in e) for e in h.edges]
    try:
        _dualize(h.num_vertices, masks, emit, clock)
    except _BudgetSignal as sig:
        raise BudgetExceededError(str(sig), partial_factory()) from None


def minimal_transversals(h: Hypergraph, budget: Budget | None = None) -> list[frozenset[int]]:
    """All minimal hitting sets, sorted by (size, members)."""
    out: list[frozenset[int]] = []
    _run_dualizer(h, budget, lambda chosen: out.append(frozenset(chosen)), lambda: list(out))
    out.sort(key=lambda t: (len(t), sorted(t)))
    return out


def transversal_counts(h: Hypergraph, budget: Budget | None = None) -> TransversalTally:
    """Count minimal hitting sets per size without storing them."""
    tally: Counter[int] = Counter()

    def emit(chosen: list[int]) -> None:
        tally[len(chosen)] += 1

    _run_dualizer(
        h, budget, emit, lambda: TransversalTally(sum(tally.values()), dict(sorted(tally.items())))
    )
    return TransversalTally(sum(tally.values()), dict(sorted(tally.items())))


# ---------------------------------------------------------------------------
# minimal siphons


def _reaction_masks(net: ReactionNetwork) -> list[tuple[int, int]]:
    masks = []
    for ri in range(len(net.reactions)):
        reac = sum(1 << i for i in net.reactant_support(ri))
        prod = sum(1 << i for i in net.product_support(ri))
        masks.append((reac, prod))
    return masks


def _minimal_filter(found: Iterable[int]) -> list[int]:
    kept: list[int] = []
    for mask in sorted(set(found), key=lambda z: (z.bit_count(), z)):
        if not any(k & mask == k for k in kept):
            kept.append(mask)
    return kept


def _mask_to_siphon(mask: int) -> Siphon:
    members = []
    while mask:
        low = mask & -mask
        members.append(low.bit_length() - 1)
        mask &= mask - 1
    return Siphon(tuple(members))


def _sorted_siphons(masks: Iterable[int]) -> list[Siphon]:
    return [
        _mask_to_siphon(m) for m in sorted(masks, key=lambda z: (z.bit_count(), _bits_tuple(z)))
    ]


def _bits_tuple(mask: int) -> tuple[int, ...]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask &= mask - 1
    return tuple(out)


def brute_force_minimal_siphons(net: ReactionNetwork) -> list[Siphon]:
    """Oracle enumeration over all non-empty subsets (guarded to s <= 22)."""
    s = net.num_species
    if s > _BRUTE_FORCE_LIMIT:
        raise ValueError(f"brute force is limited to {_BRUTE_FORCE_LIMIT} species, got {s}")
    masks = _reaction_masks(net)
    siphon_masks = []
    for z in range(1, 1 << s):
        if all(not (prod & z) or (reac & z) for reac, prod in masks):
            siphon_masks.append(z)
    return _sorted_siphons(_minimal_filter(siphon_masks))


def _search_minimal_siphons(net: ReactionNetwork, budget: Budget | None) -> list[int]:
    s = net.num_species
    masks = _reaction_masks(net)
    clock = _BudgetClock(budget)
    found: list[int] = []

    def rec(z: int, allowed: int, visited: set[int]) -> None:
        clock.tick()
        if z in visited:
            return
        visited.add(z)
        for f in found:
            if f & z == f:
                return
        best = None
        best_count = None
        for reac, prod in masks:
            if prod & z and not reac & z:
                options = reac & allowed
                c = options.bit_count()
                if c == 0:
                    return
                if best_count is None or c < best_count:
                    best, best_count = options, c
                    if c == 1:
                        break
        if best is None:
            found.append(z)
            clock.note_result()
            return
        branch = best
        while branch:
            vbit = branch & -branch
            branch &= branch - 1
            rec(z | vbit, allowed, visited)

    try:
        for seed in range(s):
            allowed = ~((1 << seed) - 1)
            rec(1 << seed, allowed, set())
    except _BudgetSignal as sig:
        raise BudgetExceededError(
            str(sig), _sorted_siphons(_minimal_filter(found))
        ) from None
    return _minimal_filter(found)


def complex_support_hypergraph(net: ReactionNetwork) -> Hypergraph:
    """Hypergraph whose edges are the supports of the network's complexes."""
    supports = [c.support for c in net.complexes]
    if any(not sup for sup in supports):
        raise ValueError("the empty complex has an empty support")
    return Hypergraph(net.num_species, tuple(dict.fromkeys(supports)))


def minimal_siphons_fast(net: ReactionNetwork, budget: Budget | None = None) -> list[Siphon]:
    """Minimal siphons via complex-support transversals.

    Valid only for strongly connected networks, where a set of *occurring*
    species is a siphon exactly when it meets the support of every complex.
    A species appearing in no complex is produced by nothing, so it is a
    minimal siphon on its own and is handled separately.
    """
    if not connectivity(net).is_strongly_connected:
        raise ValueError("the transversal route requires a strongly connected network")
    used: set[int] = set()
    for c in net.complexes:
        used |= c.support
    singletons = [Siphon((i,)) for i in range(net.num_species) if i not in used]
    if any(c.is_zero for c in net.complexes):
        # the empty support cannot be hit, so no occurring-species siphons
        return sorted(singletons)
    h = complex_support_hypergraph(net)
    try:
        transversals = minimal_transversals(h, budget)
    except BudgetExceededError as exc:
        partial = sorted(
            singletons + [Siphon(tuple(sorted(t))) for t in exc.partial],
            key=lambda z: (len(z.members), z.members),
        )
        raise BudgetExceededError(str(exc), partial) from None
    found = singletons + [Siphon(tuple(sorted(t))) for t in transversals]
    return sorted(found, key=lambda z: (len(z.members), z.members))


def minimal_siphons(
    net: ReactionNetwork, budget: Budget | None = None, method: str = "auto"
) -> list[Siphon]:
    """All inclusion-minimal siphons, sorted by (size, members).

    ``method`` selects the route: "search" (general branch-and-prune),
    "transversal" (strongly connected networks only), or "auto" (transversal
    when the precondition holds, search otherwise).
    """
    if method not in ("auto", "search", "transversal"):
        raise ValueError(f"unknown method {method!r}")
    if method == "transversal":
        return minimal_siphons_fast(net, budget)
    if method == "auto" and connectivity(net).is_strongly_connected:
        return minimal_siphons_fast(net, budget)
    return _sorted_siphons(_search_minimal_siphons(net, budget))
