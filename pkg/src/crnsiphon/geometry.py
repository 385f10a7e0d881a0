"""Cone of conserved quantities, its facets, and invariant polytopes.

For a network with conservation basis A (rows spanning the conservation
space), the attainable conserved quantities form the cone generated by
the columns of A.  Everything downstream is combinatorial data about that
cone and about the polytopes ``{x >= 0 : A x = A c0}``:

* facets of the cone, each carrying an exactly verified inner normal;
* vertex supports of an invariant polytope (its combinatorial type);
* emptiness / dimension of faces ``{x in polytope : x_Z = 0}``;
* a chamber signature: two positive initial conditions are in the same
  chamber exactly when their polytopes have the same vertex supports.

Facets are enumerated by brute force over generator subsets of rank
dim-1, vertices by basic-solution enumeration; both stay exact and are
intended for the dozens-of-species scale.  Relevance queries that only
need face emptiness should use :func:`face_nonempty`, which is a single
small LP and does not enumerate anything.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

from crnsiphon.linalg import (
    RationalMatrix,
    SubspaceBasis,
    conservation_basis,
    dot,
    normalize_integer_vector,
    nullspace_basis,
    row_reduce,
)
from crnsiphon.lp import LinearSystem, affine_dim, feasible
from crnsiphon.network import ReactionNetwork

__all__ = [
    "Facet",
    "ConeQ",
    "InvariantPolytope",
    "NotPointedError",
    "build_cone",
    "cone_facets",
    "cone_is_pointed",
    "vertex_supports",
    "face_nonempty",
    "face_dimension",
    "chamber_signature",
]

Vec = tuple[Fraction, ...]


class NotPointedError(RuntimeError):
    """The cone has no strictly positive supporting functional; facet-based
    relevance is unavailable (the conservation-law LP route still works)."""


@dataclass(frozen=True)
class Facet:
    """A facet as its generator incidence set plus a verified inner normal."""

    members: tuple[int, ...]  # generator indices lying on the facet
    normal: Vec  # integer vector v with <v, a_i> = 0 on members, > 0 off

    def complement(self, num_generators: int) -> tuple[int, ...]:
        inside = set(self.members)
        return tuple(i for i in range(num_generators) if i not in inside)


@dataclass(frozen=True)
class ConeQ:
    matrix: RationalMatrix  # rows: conservation basis; columns: generators a_i
    pointed: bool
    facets: tuple[Facet, ...] | None  # None when not pointed

    @property
    def dim(self) -> int:
        return self.matrix.rows

    @property
    def num_generators(self) -> int:
        return self.matrix.cols

    @property
    def has_conservation_laws(self) -> bool:
        return self.dim > 0


def _pointedness_system(a: RationalMatrix) -> LinearSystem:
    # exists v with <v, a_i> >= 1 for every generator column a_i; by
    # scaling this is the same as all inner products being positive.
    d, s = a.rows, a.cols
    rows = []
    for i in range(s):
        row = [a.entries[r][i] for r in range(d)]
        row.extend(Fraction(-1) if j == i else Fraction(0) for j in range(s))
        rows.append((row, Fraction(1)))
    return LinearSystem.build(d + s, eq_rows=rows, nonneg=range(d, d + s))


def _enumerate_facets(a: RationalMatrix) -> tuple[Facet, ...]:
    d, s = a.rows, a.cols
    cols = [a.column(i) for i in range(s)]
    facets: dict[tuple[int, ...], Facet] = {}
    for subset in combinations(range(s), d - 1):
        sub = RationalMatrix.from_rows([cols[i] for i in subset], cols=d)
        kernel = nullspace_basis(sub)
        if kernel.rows != 1:
            continue
        normal = kernel.row(0)
        values = [dot(normal, c) for c in cols]
        if all(v <= 0 for v in values):
            normal = tuple(-x for x in normal)
            values = [-v for v in values]
        elif not all(v >= 0 for v in values):
            continue
        members = tuple(i for i, v in enumerate(values) if v == 0)
        if members not in facets:
            facets[members] = Facet(members, normalize_integer_vector(normal, fix_sign=False))
    return tuple(facets[key] for key in sorted(facets))


def cone_is_pointed(basis: SubspaceBasis) -> bool:
    """Whether some linear functional is strictly positive on every
    generator column (vacuously true with no conservation laws)."""
    if basis.matrix.rows == 0:
        return True
    return feasible(_pointedness_system(basis.matrix)).feasible


def build_cone(basis: SubspaceBasis) -> ConeQ:
    """Cone generated by the columns of the basis matrix, with facets when
    pointed.  A zero-dimensional cone (no conservation laws) is pointed and
    facet-free."""
    a = basis.matrix
    if a.rows == 0:
        return ConeQ(a, pointed=True, facets=())
    if not cone_is_pointed(basis):
        return ConeQ(a, pointed=False, facets=None)
    return ConeQ(a, pointed=True, facets=_enumerate_facets(a))


def cone_facets(cone: ConeQ) -> tuple[Facet, ...]:
    if not cone.pointed:
        raise NotPointedError(
            "cone is not pointed; use the conservation-law LP route for relevance"
        )
    assert cone.facets is not None
    return cone.facets


@dataclass(frozen=True)
class InvariantPolytope:
    """The polytope ``{x >= 0 : A x = A c0}`` for a positive start c0."""

    matrix: RationalMatrix
    c0: Vec

    def __post_init__(self):
        if len(self.c0) != self.matrix.cols:
            raise ValueError("c0 length does not match matrix columns")
        if any(x <= 0 for x in self.c0):
            raise ValueError("c0 must be strictly positive")

    @classmethod
    def from_network(cls, net: ReactionNetwork, c0: Sequence) -> "InvariantPolytope":
        vec = tuple(x if isinstance(x, Fraction) else Fraction(x) for x in c0)
        return cls(conservation_basis(net).matrix, vec)

    @property
    def num_species(self) -> int:
        return self.matrix.cols

    @cached_property
    def rhs(self) -> Vec:
        return self.matrix.matvec(self.c0)

    @cached_property
    def vertex_supports(self) -> tuple[tuple[int, ...], ...]:
        return vertex_supports(self)

    def face_system(self, zero_set: Iterable[int]) -> LinearSystem:
        return LinearSystem.build(
            self.num_species,
            eq_rows=list(zip(self.matrix.entries, self.rhs)),
            nonneg=range(self.num_species),
            zero=tuple(zero_set),
        )


def vertex_supports(p: InvariantPolytope) -> tuple[tuple[int, ...], ...]:
    """Supports of all vertices, each exactly once, sorted by (size, members).

    Enumerates basic solutions: for every column subset of size rank(A)
    solve the square system and keep the non-negative solutions.  Distinct
    bases giving the same degenerate vertex are deduplicated by the point.
    """
    a = p.matrix
    r = a.rows  # conservation bases have independent rows
    s = a.cols
    points: set[Vec] = set()
    if r == 0:
        points.add(tuple(Fraction(0) for _ in range(s)))
    for subset in combinations(range(s), r):
        sub = RationalMatrix.from_rows(
            [[a.entries[i][j] for j in subset] for i in range(r)], cols=r
        )
        solution = _solve_square(sub, p.rhs)
        if solution is None or any(x < 0 for x in solution):
            continue
        full = [Fraction(0)] * s
        for j, val in zip(subset, solution):
            full[j] = val
        points.add(tuple(full))
    supports = {tuple(i for i, x in enumerate(pt) if x > 0) for pt in points}
    return tuple(sorted(supports, key=lambda sup: (len(sup), sup)))


def _solve_square(m: RationalMatrix, rhs: Vec) -> Vec | None:
    n = m.rows
    aug = RationalMatrix.from_rows(
        [list(m.entries[i]) + [rhs[i]] for i in range(n)], cols=n + 1
    )
    red = row_reduce(aug)
    if red.pivot_cols[: red.rank] != tuple(range(red.rank)) or red.rank != n:
        return None
    return tuple(red.rref.entries[i][n] for i in range(n))


def face_nonempty(p: InvariantPolytope, zero_set: Iterable[int]) -> Vec | None:
    """A point of the face with the given coordinates pinned to zero, or
    None when that face is empty."""
    result = feasible(p.face_system(zero_set))
    return result.witness if result.feasible else None


def face_dimension(p: InvariantPolytope, zero_set: Iterable[int]) -> int | None:
    """Affine dimension of the face, or None when it is empty."""
    return affine_dim(p.face_system(zero_set))


def chamber_signature(net: ReactionNetwork, c0: Sequence) -> tuple[tuple[int, ...], ...]:
    """Vertex-support list of the invariant polytope; equal signatures mean
    the two starts lie in the same chamber of the cone."""
    return InvariantPolytope.from_network(net, c0).vertex_supports
