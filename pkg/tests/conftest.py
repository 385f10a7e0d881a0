"""Shared fixtures: benchmark networks and a random-network generator."""

from __future__ import annotations

import random

import pytest

from crnsiphon.network import (
    Complex,
    Reaction,
    ReactionNetwork,
    SpeciesTable,
    parse_network,
)

RECEPTOR_LIGAND = """\
# receptor-ligand dimer model: A receptor, B dimer, C ligand, D=AC, E=BC
species A, B, C, D, E
2A + C <-> A + D
A + D <-> E
E <-> B + C
B + C <-> 2A + C
"""

ENZYME_INHIBITOR = """\
# enzymatic mechanism with an uncompetitive inhibitor
species S, E, Q, P, I, R
S + E <-> Q
Q <-> P + E
Q + I <-> R
"""

FUTILE_CYCLE = """\
# one-step conversion driven by enzyme E, reverted by enzyme F
species S0, E, X, P, F, Y
S0 + E <-> X
X -> P + E
P + F <-> Y
Y -> S0 + F
"""

TWO_SPECIES = "X <-> Y\n"


def chain_network(s: int) -> ReactionNetwork:
    """Reversible chain c1c2 <-> c2c3 <-> ... with s species."""
    lines = [f"c{i} + c{i+1} <-> c{i+1} + c{i+2}" for i in range(1, s - 1)]
    return parse_network("\n".join(lines))


def grid_minors_network(n: int) -> ReactionNetwork:
    """Adjacent 2x2-minor reactions on an n x n species grid."""
    lines = [
        "species " + ", ".join(f"c{i}{j}" for i in range(1, n + 1) for j in range(1, n + 1))
    ]
    for i in range(1, n):
        for j in range(1, n):
            lines.append(f"c{i}{j} + c{i+1}{j+1} <-> c{i}{j+1} + c{i+1}{j}")
    return parse_network("\n".join(lines))


def grid_symmetries(net: ReactionNetwork, n: int) -> list[dict[int, int]]:
    """The eight rotation/reflection permutations of the n x n grid, as
    species-index maps."""
    idx = net.species.index

    def perm(f):
        return {
            idx[f"c{i}{j}"]: idx["c%d%d" % f(i, j)]
            for i in range(1, n + 1)
            for j in range(1, n + 1)
        }

    m = n + 1
    return [
        perm(lambda i, j: (i, j)),
        perm(lambda i, j: (j, m - i)),
        perm(lambda i, j: (m - i, m - j)),
        perm(lambda i, j: (m - j, i)),
        perm(lambda i, j: (j, i)),
        perm(lambda i, j: (m - i, j)),
        perm(lambda i, j: (i, m - j)),
        perm(lambda i, j: (m - j, m - i)),
    ]


def random_network(
    rng: random.Random,
    max_species: int = 8,
    max_complexes: int = 6,
    max_reactions: int = 10,
    allow_zero_complex: bool = True,
) -> ReactionNetwork:
    while True:
        s = rng.randint(2, max_species)
        ncomp = rng.randint(2, max_complexes)
        seen: set[tuple[int, ...]] = set()
        comps: list[tuple[int, ...]] = []
        guard = 0
        while len(comps) < ncomp and guard < 200:
            guard += 1
            if allow_zero_complex and rng.random() < 0.05:
                exp = tuple(0 for _ in range(s))
            else:
                exp = tuple(rng.choice((0, 0, 0, 1, 1, 1, 2, 3)) for _ in range(s))
            if exp in seen:
                continue
            seen.add(exp)
            comps.append(exp)
        if len(comps) < 2:
            continue
        edges: set[tuple[int, int]] = set()
        for _ in range(3 * max_reactions):
            i, j = rng.randrange(len(comps)), rng.randrange(len(comps))
            if i != j and (i, j) not in edges:
                edges.add((i, j))
                if len(edges) >= rng.randint(1, max_reactions):
                    break
        if not edges:
            continue
        used = sorted({k for e in edges for k in e})
        remap = {old: new for new, old in enumerate(used)}
        complexes = tuple(Complex(comps[k]) for k in used)
        reactions = tuple(Reaction(remap[i], remap[j]) for i, j in sorted(edges))
        names = SpeciesTable(tuple(f"s{k}" for k in range(s)))
        net = ReactionNetwork(names, complexes, reactions)
        # normalize complex indices to first-use order, as the parser would
        from crnsiphon.network import canonical_text

        return parse_network(canonical_text(net))


@pytest.fixture(scope="session")
def receptor_ligand() -> ReactionNetwork:
    return parse_network(RECEPTOR_LIGAND)


@pytest.fixture(scope="session")
def enzyme_inhibitor() -> ReactionNetwork:
    return parse_network(ENZYME_INHIBITOR)


@pytest.fixture(scope="session")
def futile_cycle() -> ReactionNetwork:
    return parse_network(FUTILE_CYCLE)


@pytest.fixture(scope="session")
def two_species() -> ReactionNetwork:
    return parse_network(TWO_SPECIES)


@pytest.fixture(scope="session")
def grid5() -> ReactionNetwork:
    return grid_minors_network(5)
