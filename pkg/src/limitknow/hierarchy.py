"""Difference-hierarchy machinery over finite topologies.

Covers nested differences of descending open chains, open/closed ranks with
witness chains, decision methods with bounded verdict switching, limit
verdicts, and the evidence-relative belief predicates used by the operators.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Sequence

from .frame import Frame, FrameError, Topology, bits

INFINITE = float("inf")


class Verdict(Enum):
    YES = "yes"
    NO = "no"
    DIVERGES = "diverges"

    def flipped(self) -> "Verdict":
        if self is Verdict.YES:
            return Verdict.NO
        if self is Verdict.NO:
            return Verdict.YES
        return self


# ---------------------------------------------------------------------------
# nested differences and chains


def nested_difference(sets: Sequence[int]) -> int:
    """Evaluate S0 \\ (S1 \\ (... Sn)...) for a descending sequence.

    The empty sequence evaluates to the empty set.
    """
    for a, b in zip(sets, sets[1:]):
        if b & ~a:
            raise FrameError("chain is not descending")
    acc = 0
    for s in reversed(sets):
        acc = s & ~acc
    return acc


@dataclass(frozen=True)
class DescendingOpenChain:
    """A descending sequence of open sets of one topology."""

    topology: Topology
    sets: tuple[int, ...]

    def __post_init__(self):
        for a, b in zip(self.sets, self.sets[1:]):
            if b & ~a:
                raise FrameError("chain is not descending")
        for s in self.sets:
            if not self.topology.is_open(s):
                raise FrameError("chain member is not open in the topology")

    def evaluate(self) -> int:
        return nested_difference(self.sets)

    def __len__(self) -> int:
        return len(self.sets)


# ---------------------------------------------------------------------------
# ranks


@dataclass(frozen=True)
class RankResult:
    """Least k such that a set is k-open, with a witness chain of exactly k
    opens whose nested difference is the set; rank INFINITE carries no witness.

    ``closed_rank`` reports the complement's open rank, so there the witness
    chain evaluates to the complement of the queried set.
    """

    rank: int | float
    witness: tuple[int, ...] | None

    @property
    def is_infinite(self) -> bool:
        return self.rank == INFINITE


def open_rank(topology: Topology, s: int) -> RankResult:
    """Least number of descending opens whose nested difference is ``s``.

    Greedy hull-derivative: repeatedly take the open hull and subtract; the
    recorded hulls are themselves the canonical witness chain. The hull
    sequence is non-increasing, so a repeated hull before the derivative
    empties means no finite chain exists.
    """
    topology.check_subset(s)
    memo = topology._rank_memo
    cached = memo.get(s)
    if cached is not None:
        return cached

    trail: list[int] = []
    hulls: list[int] = []
    cur = s
    prev_hull = -1
    result: RankResult | None = None
    while True:
        if cur == 0:
            result = RankResult(len(hulls), tuple(hulls))
            break
        hit = memo.get(cur)
        if hit is not None:
            if hit.is_infinite:
                result = RankResult(INFINITE, None)
            else:
                result = RankResult(len(hulls) + hit.rank, tuple(hulls) + hit.witness)
            break
        trail.append(cur)
        hull = topology.hull(cur)
        if hull == prev_hull:
            result = RankResult(INFINITE, None)
            break
        hulls.append(hull)
        prev_hull = hull
        cur = hull & ~cur

    # Every intermediate derivative's rank is now known; fill the memo.
    for depth, inter in enumerate(trail):
        if result.is_infinite:
            memo[inter] = RankResult(INFINITE, None)
        else:
            memo[inter] = RankResult(result.rank - depth, result.witness[depth:])
    memo[s] = memo.get(s, result)
    return memo[s]


def closed_rank(topology: Topology, s: int) -> RankResult:
    """Least k such that ``s`` is k-closed (its complement is k-open)."""
    topology.check_subset(s)
    return open_rank(topology, topology.universe & ~s)


def is_k_open(topology: Topology, s: int, k: int | float) -> bool:
    if k < 0:
        return False
    return open_rank(topology, s).rank <= k


def is_k_closed(topology: Topology, s: int, k: int | float) -> bool:
    if k < 0:
        return False
    return closed_rank(topology, s).rank <= k


def is_k_clopen(topology: Topology, s: int, k: int | float) -> bool:
    return is_k_open(topology, s, k) and is_k_closed(topology, s, k)


# ---------------------------------------------------------------------------
# evidence-relative belief predicates


def gives_reason(frame: Frame, agent: str, w_set: int, evidence: int) -> bool:
    """Does this piece of evidence give the agent reason simpliciter to
    believe ``w_set``?

    Holds iff for some k up to the agent's tolerance, the part of ``w_set``
    inside the evidence is k-closed but not k-open in the subspace over the
    evidence: within budget, the evidence settles the agent on believing
    strictly rather than disbelieving. The strictness matters when the part
    is clopen proper at depth k (the subspace is disconnected there); such
    evidence supports believing and disbelieving equally, counts as neither,
    and keeping it out is what makes having-reason idempotent.
    """
    spec = frame.agent(agent)
    if evidence not in spec.basis:
        raise FrameError(f"not a basis element of agent {agent!r}")
    sub = frame.subspace(agent, evidence)
    part = w_set & evidence
    for k in range(spec.tolerance + 1):
        if is_k_closed(sub, part, k) and not is_k_open(sub, part, k):
            return True
    return False


def gives_reason_against(frame: Frame, agent: str, w_set: int, evidence: int) -> bool:
    """Dual predicate: evidence gives reason simpliciter to disbelieve."""
    return gives_reason(frame, agent, frame.universe & ~w_set, evidence)


# ---------------------------------------------------------------------------
# decision methods


@dataclass(frozen=True)
class DecisionMethod:
    """A total Yes/No verdict map on an agent's basis elements."""

    verdicts: Mapping[int, Verdict]
    owner: str | None = None

    def verdict(self, evidence: int) -> Verdict:
        return self.verdicts[evidence]


def check_method(method: DecisionMethod, basis: Sequence[int]) -> None:
    if set(method.verdicts) != set(basis):
        raise FrameError("method domain must equal the basis exactly")
    if any(v is Verdict.DIVERGES for v in method.verdicts.values()):
        raise FrameError("method verdicts must be Yes or No")


def limit_verdicts(method: DecisionMethod, basis: Sequence[int]) -> dict[int, Verdict]:
    """The verdict each world's evidence stream converges to.

    A world settles on Yes iff some evidence containing it has every finer
    evidence containing it mapped to Yes; symmetrically for No. On a finite
    valid basis every world settles (bounded switching), which is asserted.
    """
    check_method(method, basis)
    universe = 0
    for e in basis:
        universe |= e
    out: dict[int, Verdict] = {}
    for w in bits(universe):
        at_w = [e for e in basis if (e >> w) & 1]
        verdict = Verdict.DIVERGES
        for e in at_w:
            fixed = method.verdicts[e]
            if all(
                method.verdicts[e2] is fixed
                for e2 in at_w
                if e2 & ~e == 0
            ):
                verdict = fixed
                break
        assert verdict is not Verdict.DIVERGES, "bounded switching settles every world"
        out[w] = verdict
    return out


def limit_yes_set(method: DecisionMethod, basis: Sequence[int]) -> int:
    """Worlds whose limit verdict is Yes, as a mask."""
    sigma = limit_verdicts(method, basis)
    out = 0
    for w, v in sigma.items():
        if v is Verdict.YES:
            out |= 1 << w
    return out


@dataclass(frozen=True)
class SwitchCount:
    """Longest alternation count, plus whether the start verdict occurs at all
    (an absent start verdict also yields count 0)."""

    switches: int
    start_occurs: bool


def max_switches(
    method: DecisionMethod, basis: Sequence[int], start: Verdict
) -> SwitchCount:
    """Largest t for which a t-switching sequence with the given start verdict
    exists: a descending evidence sequence whose verdicts alternate starting
    from ``start``. Computed by longest-path dynamic programming over the
    strict-containment order (alternation forces strict descent).
    """
    check_method(method, basis)
    order = sorted(basis, key=lambda e: (e.bit_count(), e))
    best: dict[int, int] = {}
    for e in order:
        want = method.verdicts[e].flipped()
        longest = 0
        for e2 in order:
            if e2 == e or e2 & ~e:
                continue
            if method.verdicts[e2] is want:
                longest = max(longest, 1 + best[e2])
        best[e] = longest
    starts = [best[e] for e in basis if method.verdicts[e] is start]
    if not starts:
        return SwitchCount(0, False)
    return SwitchCount(max(starts), True)


def has_at_most_switches_after(
    method: DecisionMethod, basis: Sequence[int], start: Verdict, n: int
) -> bool:
    return max_switches(method, basis, start).switches <= n


def min_switches(frame: Frame, agent: str, w_set: int) -> int | float:
    """Fewest verdict alternations with which the agent can limit decide
    ``w_set``, over both start verdicts; INFINITE when no bound exists.

    Requires the agent's basis to have a starting point (the whole universe
    as evidence). Equals the lesser of the open and closed ranks of the set:
    deciding in n switches starting from Yes forces the set to be n-closed,
    starting from No forces it n-open, and each rank is attained.
    """
    spec = frame.agent(agent)
    if frame.universe not in spec.basis:
        raise FrameError(f"agent {agent!r} has no starting point in its basis")
    topo = frame.topology(agent)
    return min(open_rank(topo, w_set).rank, closed_rank(topo, w_set).rank)


# ---------------------------------------------------------------------------
# chains <-> methods (the two halves of the switching/rank correspondence)


def method_from_chain(
    chain: DescendingOpenChain, basis: Sequence[int], owner: str | None = None
) -> DecisionMethod:
    """Read a decision method off a witness chain: evidence answers Yes when
    the deepest chain member containing it sits at an even position, No at an
    odd position or when no member contains it (depth -1 counts as odd).

    The result has at most len(chain)-1 switches after saying Yes and its
    limit-Yes set is the chain's nested difference; both are asserted.
    """
    verdicts: dict[int, Verdict] = {}
    for e in basis:
        deepest = -1
        for k, o in enumerate(chain.sets):
            if e & ~o == 0:
                deepest = k
        verdicts[e] = Verdict.YES if deepest % 2 == 0 and deepest >= 0 else Verdict.NO
    method = DecisionMethod(verdicts, owner)
    assert max_switches(method, basis, Verdict.YES).switches <= max(len(chain) - 1, 0)
    assert limit_yes_set(method, basis) == chain.evaluate()
    return method


def chain_from_method(
    method: DecisionMethod,
    basis: Sequence[int],
    n: int,
    topology: Topology | None = None,
) -> DescendingOpenChain:
    """Build a witness chain of n+1 opens for a method with at most n switches
    after saying Yes, by layering the evidence sets where the verdict
    alternates. The chain's nested difference recovers the limit-Yes set.
    """
    if not has_at_most_switches_after(method, basis, Verdict.YES, n):
        raise FrameError(f"method exceeds {n} switches after saying Yes")
    if topology is None:
        from .frame import generate_topology

        topology = generate_topology(basis)

    layer = [e for e in basis if method.verdicts[e] is Verdict.YES]
    opens = []
    for k in range(n + 1):
        opens.append(_union(layer))
        want = Verdict.NO if (k + 1) % 2 == 1 else Verdict.YES
        layer = [
            e2
            for e2 in basis
            if method.verdicts[e2] is want
            and any(e2 & ~e == 0 for e in layer)
        ]
    assert not layer, "alternation layers must be exhausted at the switch bound"
    chain = DescendingOpenChain(topology, tuple(opens))
    assert chain.evaluate() == limit_yes_set(method, basis)
    return chain


def _union(sets: Sequence[int]) -> int:
    out = 0
    for s in sets:
        out |= s
    return out
