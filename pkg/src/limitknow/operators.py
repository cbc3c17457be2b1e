"""Set-valued epistemic operators over a frame.

Each operator maps world sets to world sets: reason simpliciter, indication,
belief via a witness, true reason, witness-generated common inductive
knowledge (a greatest fixed point), common inductive knowledge (interior in
the meet of the per-agent true-reason topologies), and its witness-existential
variant. All operators are pure; the context only caches frame-derived data,
so concurrent readers are safe.
"""

from __future__ import annotations

from .frame import Frame, FrameError, Topology, submasks, topology_from_open_family
from .hierarchy import INFINITE, gives_reason, open_rank

DEFAULT_ENUMERATION_CAP = 16


class OperatorContext:
    """Operator evaluation over one frame, with per-agent caches.

    Caches hold topologies, the family of two-step-open sets (differences of
    opens) that generates each agent's true-reason topology, and the evidence
    that supports each queried witness set. Rebuilding a context from the
    same frame yields identical families.
    """

    def __init__(self, frame: Frame):
        self.frame = frame
        self.universe = frame.universe
        self._two_open: dict[str, tuple[int, ...]] = {}
        self._supporting: dict[tuple[str, int], tuple[int, ...]] = {}

    # -- cached frame data -------------------------------------------------

    def two_open_family(self, agent: str) -> tuple[int, ...]:
        """All differences of nested opens in the agent's topology."""
        fam = self._two_open.get(agent)
        if fam is None:
            opens = self.frame.topology(agent).opens
            fam = tuple(sorted({o & ~o2 for o in opens for o2 in opens}))
            self._two_open[agent] = fam
        return fam

    def supporting_evidence(self, agent: str, w_set: int) -> tuple[int, ...]:
        """Basis elements that give the agent reason simpliciter to believe
        the set."""
        key = (agent, w_set)
        ev = self._supporting.get(key)
        if ev is None:
            ev = tuple(
                e
                for e in self.frame.agent(agent).basis
                if gives_reason(self.frame, agent, w_set, e)
            )
            self._supporting[key] = ev
        return ev

    # -- the operators -------------------------------------------------------

    def reason(self, agent: str, w_set: int) -> int:
        """Worlds where the agent has reason simpliciter to believe the set:
        some evidence there supports it. Always a union of basis elements."""
        out = 0
        for e in self.supporting_evidence(agent, w_set):
            out |= e
        assert self.frame.topology(agent).is_open(out)
        return out

    def indicates(self, agent: str, witness: int, target: int) -> int:
        """Worlds where the witness indicates the target to the agent: every
        supporting evidence confines the witness inside the target."""
        bad = 0
        for e in self.supporting_evidence(agent, witness):
            if witness & e & ~target:
                bad |= e
        return self.universe & ~bad

    def believes_via(self, agent: str, witness: int, target: int) -> int:
        """Worlds where the agent has the witness as reason to believe the
        target."""
        return self.reason(agent, witness) & self.indicates(agent, witness, target)

    def true_reason(self, agent: str, target: int) -> int:
        """Worlds where the agent has some true reason to believe the target.

        A deductive agent (tolerance 0) gets the plain interior; an inductive
        agent gets the union of all two-step-open subsets of the target.
        """
        spec = self.frame.agent(agent)
        if spec.tolerance == 0:
            return self.frame.topology(agent).interior(target)
        out = 0
        for d in self.two_open_family(agent):
            if d & ~target == 0:
                out |= d
        return out

    def everyone_believes_via(self, witness: int, target: int) -> int:
        """One step of everyone-believes with a shared witness."""
        out = self.universe
        for a in self.frame.agents:
            out &= self.believes_via(a.name, witness, target)
        return out

    def generates(self, witness: int, target: int) -> int:
        """Worlds where the witness generates common inductive knowledge of
        the target: the intersection of all iterated everyone-believes steps.

        Computed as the greatest fixed point of one monotone map (which
        commutes with intersections, so its descending iteration from the
        full space reaches the same limit in finitely many steps).
        """
        first = self.everyone_believes_via(witness, target)
        x = self.universe
        while True:
            nxt = first & self.everyone_believes_via(witness, x)
            if nxt == x:
                return x
            x = nxt

    def common(self, target: int) -> int:
        """Worlds where the target is common inductive knowledge: the greatest
        fixed point of X -> target AND everyone's true reason for X, iterated
        downward from the target itself (the map's image always sits inside
        the target)."""
        x = target
        while True:
            nxt = target
            for a in self.frame.agents:
                nxt &= self.true_reason(a.name, x)
            if nxt == x:
                return x
            x = nxt

    def true_reason_topology(self, agent: str) -> Topology:
        """The topology whose interior operator is ``true_reason``: the
        agent's own topology for tolerance 0, else the one generated by the
        two-step-open family. Exponential materialization; intended for
        cross-checks at small world counts."""
        spec = self.frame.agent(agent)
        if spec.tolerance == 0:
            return self.frame.topology(agent)
        return topology_from_open_family(self.two_open_family(agent), self.universe)

    def common_via_interior(self, target: int) -> int:
        """Cross-check path for ``common``: interior of the target in the
        meet of all agents' true-reason topologies."""
        families = [set(self.true_reason_topology(a.name).opens) for a in self.frame.agents]
        shared = set.intersection(*families)
        out = 0
        for o in shared:
            if o & ~target == 0:
                out |= o
        return out

    def lewis_common(self, target: int, cap: int = DEFAULT_ENUMERATION_CAP) -> int:
        """Worlds where some true witness generates common inductive knowledge
        of the target: the union of all subsets of the target that are
        feasibly decidable for every agent (rank within tolerance + 1).

        Enumeration is sound when restricted to subsets of ``common(target)``
        and is capped; past the cap only the fast path (the common-knowledge
        set itself being feasible for everyone) is offered.
        """
        c = self.common(target)
        if self._feasible(c):
            return c
        if c.bit_count() > cap:
            raise FrameError(
                f"witness enumeration over {c.bit_count()} worlds exceeds cap {cap}"
            )
        out = 0
        for v in submasks(c):
            if v and v & ~out and self._feasible(v):
                out |= v
        return out

    def _feasible(self, v: int) -> bool:
        return all(
            open_rank(self.frame.topology(a.name), v).rank <= a.tolerance + 1
            for a in self.frame.agents
        )

    def min_tolerance(self, agent: str, target: int) -> int:
        """Least tolerance at which the common-knowledge set of the target is
        feasibly decidable for the agent."""
        rank = open_rank(self.frame.topology(agent), self.common(target)).rank
        if rank == INFINITE:
            raise FrameError(
                f"common-knowledge set of the target has no finite rank for {agent!r}"
            )
        return max(rank - 1, 0)
