"""Relevance verdicts for siphons and whole-network boundary certificates.

A siphon Z is *relevant* when some invariant polytope has a non-empty face
``x_Z = 0``; a non-relevant siphon can never empty out along trajectories
that start positive.  Two independent decision routes are implemented:

* ``conservation_lp`` — Z is non-relevant exactly when some non-negative
  conservation law has its support inside Z.  This is one exact LP and is
  valid for every network; a feasible point is the witness, an infeasible
  one yields a Farkas certificate.
* ``facet`` — when the cone of conserved quantities is pointed, Z is
  non-relevant exactly when the complement of some cone facet is inside Z.

The two routes must agree; :func:`analyze` cross-checks them and treats a
disagreement as an internal error.  When no minimal siphon is relevant,
the report carries a network-level certificate: no invariant polytope has
a boundary steady state.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Sequence

from crnsiphon.geometry import (
    ConeQ,
    Facet,
    InvariantPolytope,
    NotPointedError,
    build_cone,
    cone_is_pointed,
    face_dimension,
)
from crnsiphon.linalg import SubspaceBasis, conservation_basis, normalize_integer_vector
from crnsiphon.lp import LinearSystem, feasible
from crnsiphon.network import (
    ConnectivityInfo,
    ReactionNetwork,
    connectivity,
    stoichiometric_generators,
)
from crnsiphon.siphons import Budget, BudgetExceededError, Siphon, is_siphon, minimal_siphons

__all__ = [
    "RelevanceVerdict",
    "SiphonAnalysis",
    "AnalysisReport",
    "RouteDisagreementError",
    "supported_conservation_system",
    "is_relevant",
    "is_relevant_by_facets",
    "is_c0_relevant",
    "omega_relevant",
    "relevant_minimal_siphons",
    "analyze",
    "orbit_partition",
]

Vec = tuple[Fraction, ...]

# analyze() skips the facet cross-check when the subset count of the
# brute-force facet enumeration would exceed this; the LP route is
# authoritative either way.
DEFAULT_FACET_ENUMERATION_LIMIT = 250_000


class RouteDisagreementError(RuntimeError):
    """The two independent relevance routes disagreed; this indicates a bug,
    never an input problem."""


@dataclass(frozen=True)
class RelevanceVerdict:
    siphon: Siphon
    relevant: bool
    route: str  # "conservation_lp" | "facet" | "face_lp"
    conservation_law: Vec | None = None  # non-relevant, conservation_lp route
    certificate: Vec | None = None  # relevant, conservation_lp route
    facet: Facet | None = None  # non-relevant, facet route
    face_point: Vec | None = None  # relevant, face_lp route
    cross_checked: bool = False


def supported_conservation_system(net: ReactionNetwork, members: Iterable[int]) -> LinearSystem:
    """LP asking for a non-negative conservation law supported inside Z,
    normalized to total mass 1 on Z so the zero law does not qualify."""
    z = sorted(set(members))
    s = net.num_species
    gens = dict.fromkeys(stoichiometric_generators(net))
    rows = [(g, 0) for g in gens]
    norm = [Fraction(0)] * s
    for i in z:
        norm[i] = Fraction(1)
    return LinearSystem.build(
        s,
        eq_rows=rows,
        nonneg=z,
        zero=[i for i in range(s) if i not in set(z)],
        normalization=norm,
    )


def is_relevant(net: ReactionNetwork, siphon: Siphon) -> RelevanceVerdict:
    """Global relevance via the conservation-law LP (valid for any network)."""
    if not is_siphon(net, siphon.members):
        raise ValueError("relevance is defined for siphons only")
    result = feasible(supported_conservation_system(net, siphon.members))
    if result.feasible:
        law = normalize_integer_vector(result.witness)
        return RelevanceVerdict(siphon, False, "conservation_lp", conservation_law=law)
    return RelevanceVerdict(siphon, True, "conservation_lp", certificate=result.certificate)


def is_relevant_by_facets(
    net: ReactionNetwork, siphon: Siphon, cone: ConeQ | None = None
) -> RelevanceVerdict:
    """Global relevance via cone facets: non-relevant exactly when some
    facet complement is contained in the siphon.  Pointed cones only."""
    if cone is None:
        cone = build_cone(conservation_basis(net))
    if not cone.pointed:
        raise NotPointedError(
            "cone is not pointed; use the conservation-law LP route for relevance"
        )
    members = set(siphon.members)
    for facet in cone.facets or ():
        if set(facet.complement(cone.num_generators)) <= members:
            return RelevanceVerdict(siphon, False, "facet", facet=facet)
    return RelevanceVerdict(siphon, True, "facet")


def _face_verdict(polytope: InvariantPolytope, siphon: Siphon) -> RelevanceVerdict:
    result = feasible(polytope.face_system(siphon.members))
    if result.feasible:
        return RelevanceVerdict(siphon, True, "face_lp", face_point=result.witness)
    return RelevanceVerdict(siphon, False, "face_lp", certificate=result.certificate)


def is_c0_relevant(net: ReactionNetwork, c0: Sequence, siphon: Siphon) -> RelevanceVerdict:
    """Relevance for one initial condition: is the face x_Z = 0 of the
    invariant polytope of c0 non-empty?"""
    if not is_siphon(net, siphon.members):
        raise ValueError("relevance is defined for siphons only")
    return _face_verdict(InvariantPolytope.from_network(net, c0), siphon)


def omega_relevant(
    net: ReactionNetwork, samples: Sequence[Sequence], siphon: Siphon
) -> tuple[bool, int | None]:
    """OR of per-sample relevance; returns the index of the first witnessing
    sample, or None.  The sampled starts stand in for a whole region."""
    if not samples:
        raise ValueError("at least one sample initial condition is required")
    for idx, c0 in enumerate(samples):
        if is_c0_relevant(net, c0, siphon).relevant:
            return True, idx
    return False, None


def relevant_minimal_siphons(
    net: ReactionNetwork, budget: Budget | None = None
) -> list[Siphon]:
    return [z for z in minimal_siphons(net, budget) if is_relevant(net, z).relevant]


# ---------------------------------------------------------------------------
# full analysis


@dataclass(frozen=True)
class SiphonAnalysis:
    verdict: RelevanceVerdict
    facet_verdict: RelevanceVerdict | None = None
    c0_verdict: RelevanceVerdict | None = None
    face_dim: int | None = None
    omega_hits: tuple[int, ...] | None = None  # witnessing sample indices


@dataclass(frozen=True)
class AnalysisReport:
    network: ReactionNetwork
    connectivity_info: ConnectivityInfo
    conservation: SubspaceBasis
    cone: ConeQ
    facet_route_used: bool
    siphons: tuple[SiphonAnalysis, ...]
    exhaustive: bool
    all_non_relevant: bool
    boundary_certificate: str | None
    notes: tuple[str, ...]
    c0: Vec | None = None
    omega_samples: tuple[Vec, ...] | None = None
    orbits: tuple[tuple[int, ...], ...] | None = None  # siphon indices per orbit
    timing_ms: dict[str, float] | None = None


def orbit_partition(
    siphons: Sequence[Siphon], permutations: Sequence[dict[int, int]]
) -> tuple[tuple[int, ...], ...]:
    """Group siphon indices into orbits of the given index permutations.

    A permutation that maps some listed siphon outside the list leaves it
    in a singleton orbit only if no other permutation connects it.
    """
    position = {z.members: i for i, z in enumerate(siphons)}
    parent = list(range(len(siphons)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for perm in permutations:
        for i, z in enumerate(siphons):
            image = tuple(sorted(perm[m] for m in z.members))
            j = position.get(image)
            if j is not None:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)
    groups: dict[int, list[int]] = {}
    for i in range(len(siphons)):
        groups.setdefault(find(i), []).append(i)
    return tuple(tuple(g) for g in sorted(groups.values()))


def _thread_count() -> int:
    raw = os.environ.get("SIPHON_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _positive_vec(values: Sequence) -> Vec:
    return tuple(x if isinstance(x, Fraction) else Fraction(x) for x in values)


def analyze(
    net: ReactionNetwork,
    c0: Sequence | None = None,
    omega_samples: Sequence[Sequence] | None = None,
    budget: Budget | None = None,
    symmetry: Sequence[dict[int, int]] | None = None,
    facet_limit: int = DEFAULT_FACET_ENUMERATION_LIMIT,
    collect_timing: bool = False,
) -> AnalysisReport:
    """Run the full pipeline and assemble a report.

    Every minimal siphon gets a conservation-LP verdict; when the cone is
    pointed (and small enough to enumerate facets under ``facet_limit``)
    the facet route runs as a cross-check and a disagreement raises
    :class:`RouteDisagreementError`.  With ``c0`` the per-start relevance
    and face dimensions are added; with ``omega_samples`` the per-sample
    pattern is added.  A budget overrun degrades to a partial,
    non-exhaustive report instead of failing.
    """
    timings: dict[str, float] = {}
    t0 = time.monotonic()

    conn = connectivity(net)
    basis = conservation_basis(net)

    d, s = basis.dim, net.num_species
    enumeration_cost = comb(s, d - 1) if d >= 1 else 0
    if d >= 1 and enumeration_cost <= facet_limit:
        cone = build_cone(basis)
    else:
        # size guard: keep pointedness (one LP) but skip facet enumeration
        pointed = cone_is_pointed(basis)
        cone = ConeQ(basis.matrix, pointed=pointed, facets=() if d == 0 else None)
    timings["setup_ms"] = (time.monotonic() - t0) * 1000

    t1 = time.monotonic()
    exhaustive = True
    try:
        siphons = minimal_siphons(net, budget)
    except BudgetExceededError as exc:
        siphons = exc.partial
        exhaustive = False
    timings["siphons_ms"] = (time.monotonic() - t1) * 1000

    facet_route_used = cone.pointed and cone.facets is not None
    polytope = InvariantPolytope(basis.matrix, _positive_vec(c0)) if c0 is not None else None
    sample_polytopes = (
        [InvariantPolytope(basis.matrix, _positive_vec(sm)) for sm in omega_samples]
        if omega_samples
        else None
    )

    def examine(z: Siphon) -> SiphonAnalysis:
        verdict = is_relevant(net, z)
        facet_verdict = None
        if facet_route_used:
            facet_verdict = is_relevant_by_facets(net, z, cone)
            if facet_verdict.relevant != verdict.relevant:
                raise RouteDisagreementError(
                    f"relevance routes disagree on {z.names(net)}: "
                    f"conservation_lp={verdict.relevant}, facet={facet_verdict.relevant}"
                )
            verdict = RelevanceVerdict(
                siphon=verdict.siphon,
                relevant=verdict.relevant,
                route=verdict.route,
                conservation_law=verdict.conservation_law,
                certificate=verdict.certificate,
                cross_checked=True,
            )
        c0_verdict = None
        dim = None
        if polytope is not None:
            c0_verdict = _face_verdict(polytope, z)
            if c0_verdict.relevant:
                dim = face_dimension(polytope, z.members)
        hits = None
        if sample_polytopes is not None:
            hits = tuple(
                idx
                for idx, sample in enumerate(sample_polytopes)
                if _face_verdict(sample, z).relevant
            )
        return SiphonAnalysis(verdict, facet_verdict, c0_verdict, dim, hits)

    t2 = time.monotonic()
    workers = _thread_count()
    if workers > 1 and len(siphons) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            analyses = tuple(pool.map(examine, siphons))
    else:
        analyses = tuple(examine(z) for z in siphons)
    timings["relevance_ms"] = (time.monotonic() - t2) * 1000

    all_non_relevant = all(not a.verdict.relevant for a in analyses)
    certificate = None
    notes = []
    if all_non_relevant and exhaustive:
        certificate = (
            "no relevant siphons: every minimal siphon carries a non-negative "
            "conservation law supported inside it, so no invariant polytope "
            "has a boundary steady state"
        )
    if conn.is_strongly_connected:
        notes.append(
            "network is strongly connected: every non-empty siphon face of an "
            "invariant polytope consists entirely of steady states"
        )
    notes.append(
        "complex-balancing rate conditions are not analyzed; verdicts here "
        "are structural and hold for every choice of positive rates"
    )
    if not facet_route_used and cone.pointed and d >= 1:
        notes.append(
            "facet enumeration skipped (size guard); relevance rests on the "
            "conservation-law LP route alone"
        )
    if not cone.pointed:
        notes.append(
            "cone of conserved quantities is not pointed; facet route disabled"
        )
    if not exhaustive:
        notes.append("enumeration budget exceeded: siphon list is not exhaustive")

    orbits = None
    if symmetry is not None:
        orbits = orbit_partition([a.verdict.siphon for a in analyses], symmetry)

    timings["total_ms"] = (time.monotonic() - t0) * 1000
    return AnalysisReport(
        network=net,
        connectivity_info=conn,
        conservation=basis,
        cone=cone,
        facet_route_used=facet_route_used,
        siphons=analyses,
        exhaustive=exhaustive,
        all_non_relevant=all_non_relevant,
        boundary_certificate=certificate,
        notes=tuple(notes),
        c0=tuple(Fraction(x) for x in c0) if c0 is not None else None,
        omega_samples=tuple(tuple(Fraction(x) for x in sm) for sm in omega_samples)
        if omega_samples
        else None,
        orbits=orbits,
        timing_ms=timings if collect_timing else None,
    )
