"""Shared test helpers: random valid frames, exhaustive basis enumeration,
and independent brute-force oracles for ranks and switching counts."""

from __future__ import annotations

import itertools
import random

from limitknow.frame import AgentSpec, Frame, Topology, validate_basis
from limitknow.hierarchy import (
    INFINITE,
    DecisionMethod,
    Verdict,
    limit_yes_set,
    max_switches,
)


def close_under_meets(elements: set[int]) -> set[int]:
    """Close a family under non-empty pairwise intersection; the result is
    locally directed at every world."""
    out = set(elements)
    frontier = set(elements)
    while frontier:
        fresh = set()
        for a in frontier:
            for b in out:
                m = a & b
                if m and m not in out:
                    fresh.add(m)
        out |= fresh
        frontier = fresh
    return out


def random_basis(rng: random.Random, n_worlds: int, max_seeds: int = 4) -> tuple[int, ...]:
    """A random valid basis: random seed sets closed under meets, with the
    universe added when cover fails (or, usually, from the start)."""
    universe = (1 << n_worlds) - 1
    elements: set[int] = set()
    if rng.random() < 0.7:
        elements.add(universe)
    for _ in range(rng.randint(1, max_seeds)):
        elements.add(rng.randint(1, universe))
    elements = close_under_meets(elements)
    covered = 0
    for e in elements:
        covered |= e
    if covered != universe:
        elements.add(universe)
    basis = tuple(sorted(elements))
    assert validate_basis(basis, universe).ok
    return basis


def random_frame(
    rng: random.Random,
    max_worlds: int = 6,
    max_agents: int = 3,
    max_tolerance: int = 3,
    require_start: bool = False,
) -> Frame:
    n = rng.randint(1, max_worlds)
    worlds = [f"w{i}" for i in range(n)]
    agents = []
    for k in range(rng.randint(1, max_agents)):
        basis = random_basis(rng, n)
        if require_start and (1 << n) - 1 not in basis:
            basis = tuple(sorted(set(basis) | {(1 << n) - 1}))
        agents.append(AgentSpec(f"a{k}", basis, rng.randint(0, max_tolerance)))
    return Frame(worlds, agents)


def all_valid_bases(n_worlds: int, max_elements: int | None = None) -> list[tuple[int, ...]]:
    """Every valid basis over n worlds (optionally capped in size)."""
    universe = (1 << n_worlds) - 1
    atoms = list(range(1, universe + 1))
    out = []
    for size in range(1, (max_elements or len(atoms)) + 1):
        for family in itertools.combinations(atoms, size):
            if validate_basis(family, universe).ok:
                out.append(tuple(family))
    return out


# ---------------------------------------------------------------------------
# independent oracles


def oracle_all_ranks(topology: Topology) -> dict[int, int]:
    """Minimum descending-open-chain length for every achievable nested
    difference, by level-by-level search over (chain head, chain value)
    pairs; sets absent from the result have no finite rank. Finite ranks
    need at most one strictly smaller open per world, so searching chain
    lengths up to the world count is complete."""
    ranks = {0: 0}
    opens = topology.opens
    level = {(o, o) for o in opens}
    for k in range(1, topology.universe.bit_count() + 1):
        for _, v in level:
            ranks.setdefault(v, k)
        level = {(o, o & ~v) for head, v in level for o in opens if head & ~o == 0}
    return ranks


def oracle_open_rank(topology: Topology, s: int) -> int | float:
    return oracle_all_ranks(topology).get(s, INFINITE)


def all_methods(basis: tuple[int, ...]):
    """Every decision method on a basis."""
    for verdicts in itertools.product((Verdict.YES, Verdict.NO), repeat=len(basis)):
        yield DecisionMethod(dict(zip(basis, verdicts)))


def oracle_min_switches(frame: Frame, agent: str, w_set: int) -> int | float:
    """Fewest switches over all decision methods that limit decide the set,
    where a method starting from a verdict witnesses its alternation count
    from that verdict."""
    spec = frame.agent(agent)
    universe = frame.universe
    best: int | float = INFINITE
    for method in all_methods(spec.basis):
        if limit_yes_set(method, spec.basis) != w_set:
            continue
        start = method.verdicts[universe]
        best = min(best, max_switches(method, spec.basis, start).switches)
    return best
