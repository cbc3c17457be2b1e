"""Attestation protocols for the inductive coordinated-attack problem.

Agents map each piece of evidence to "attest" or "defer"; a protocol solves
coordinated attack for a target proposition when no agent's limit output ever
falsely attests (validity), all agents converge to the same output everywhere
(agreement), and at least one world has everyone attesting (nontriviality).
This module verifies protocols, synthesizes them from witness chains, and
simulates them over finite evidence streams with optional faulty agents and a
majority-vote aggregator.
"""

from __future__ import annotations

import json
import os
import random
from dataclasses import dataclass
from typing import Mapping, Sequence

from .frame import Frame, load_frame_file, submasks
from .hierarchy import (
    DecisionMethod,
    DescendingOpenChain,
    Verdict,
    limit_verdicts,
    max_switches,
    method_from_chain,
    open_rank,
)
from .operators import OperatorContext


class ProtocolError(ValueError):
    """An infeasible synthesis target or malformed protocol/scenario."""


ATTEST = "yes"
DEFER = "defer"


@dataclass(frozen=True)
class AttestationStrategy:
    """A total attest/defer map on one agent's basis elements."""

    owner: str
    verdicts: Mapping[int, str]  # evidence mask -> ATTEST | DEFER

    def induced_method(self) -> DecisionMethod:
        return DecisionMethod(
            {e: Verdict.YES if v == ATTEST else Verdict.NO for e, v in self.verdicts.items()},
            self.owner,
        )


@dataclass(frozen=True)
class AttestationProtocol:
    """One strategy per agent of a frame, in frame order."""

    strategies: tuple[AttestationStrategy, ...]

    def strategy(self, agent: str) -> AttestationStrategy:
        for s in self.strategies:
            if s.owner == agent:
                return s
        raise ProtocolError(f"protocol has no strategy for agent {agent!r}")


def _check_protocol_shape(frame: Frame, protocol: AttestationProtocol) -> None:
    names = [s.owner for s in protocol.strategies]
    expected = [a.name for a in frame.agents]
    if sorted(names) != sorted(expected):
        raise ProtocolError(
            f"protocol agents {names} do not match frame agents {expected}"
        )
    for s in protocol.strategies:
        basis = frame.agent(s.owner).basis
        if set(s.verdicts) != set(basis):
            raise ProtocolError(
                f"strategy for {s.owner!r} is not total on the agent's basis"
            )
        if any(v not in (ATTEST, DEFER) for v in s.verdicts.values()):
            raise ProtocolError(f"strategy for {s.owner!r} has unknown verdicts")


# ---------------------------------------------------------------------------
# verification


@dataclass(frozen=True)
class SwitchBoundCheck:
    switches: int
    bound: int

    @property
    def ok(self) -> bool:
        return self.switches <= self.bound


@dataclass(frozen=True)
class VerifyReport:
    validity: bool
    agreement: bool
    nontriviality: bool
    switch_bounds: Mapping[str, SwitchBoundCheck]
    limit_yes: Mapping[str, int]  # per-agent limit-attest set
    success_set: int

    @property
    def solves(self) -> bool:
        return (
            self.validity
            and self.agreement
            and self.nontriviality
            and all(c.ok for c in self.switch_bounds.values())
        )


def verify_protocol(
    frame: Frame, protocol: AttestationProtocol, target: int
) -> VerifyReport:
    """Check validity, agreement, nontriviality, and the per-agent switch
    bounds. Violations are report data, not errors."""
    _check_protocol_shape(frame, protocol)
    limit_yes: dict[str, int] = {}
    bounds: dict[str, SwitchBoundCheck] = {}
    for spec in frame.agents:
        strategy = protocol.strategy(spec.name)
        method = strategy.induced_method()
        sigma = limit_verdicts(method, spec.basis)
        yes = 0
        for w, v in sigma.items():
            if v is Verdict.YES:
                yes |= 1 << w
        limit_yes[spec.name] = yes
        count = max_switches(method, spec.basis, Verdict.YES).switches
        bounds[spec.name] = SwitchBoundCheck(count, spec.tolerance)

    sets = list(limit_yes.values())
    success = frame.universe
    for s in sets:
        success &= s
    return VerifyReport(
        validity=all(s & ~target == 0 for s in sets),
        agreement=all(s == sets[0] for s in sets),
        nontriviality=success != 0,
        switch_bounds=bounds,
        limit_yes=limit_yes,
        success_set=success,
    )


# ---------------------------------------------------------------------------
# synthesis


def _strategy_for_success_set(frame: Frame, agent: str, success: int) -> AttestationStrategy:
    spec = frame.agent(agent)
    topo = frame.topology(agent)
    rank = open_rank(topo, success)
    if rank.rank > spec.tolerance + 1:
        raise ProtocolError(
            f"target is not decidable for agent {agent!r}: "
            f"needs a chain of {rank.rank} opens, tolerance allows {spec.tolerance + 1}"
        )
    padded = rank.witness + (0,) * (spec.tolerance + 1 - len(rank.witness))
    chain = DescendingOpenChain(topo, padded)
    method = method_from_chain(chain, spec.basis, owner=agent)
    return AttestationStrategy(
        agent,
        {
            e: ATTEST if v is Verdict.YES else DEFER
            for e, v in method.verdicts.items()
        },
    )


def synthesize(
    frame: Frame, target_prop: int, success_target: int | None = None
) -> AttestationProtocol:
    """Build a protocol solving coordinated attack for ``target_prop``.

    With an explicit success target the set must be a non-empty subset of the
    proposition that every agent can decide within tolerance; each agent's
    strategy is read off a witness chain for it (padded with empty sets so
    chain lengths are uniform). Without one, the common-knowledge set is
    chosen when feasible, otherwise its subsets are tried in decreasing size.
    """
    ctx = OperatorContext(frame)
    if success_target is None:
        success_target = _select_target(frame, ctx, target_prop)
    else:
        if success_target == 0:
            raise ProtocolError("success target must be non-empty")
        if success_target & ~target_prop:
            raise ProtocolError("success target must be a subset of the proposition")
        for spec in frame.agents:
            rank = open_rank(frame.topology(spec.name), success_target)
            if rank.rank > spec.tolerance + 1:
                raise ProtocolError(
                    f"target is not decidable for agent {spec.name!r}: "
                    f"needs a chain of {rank.rank} opens, "
                    f"tolerance allows {spec.tolerance + 1}"
                )

    protocol = AttestationProtocol(
        tuple(
            _strategy_for_success_set(frame, a.name, success_target)
            for a in frame.agents
        )
    )
    report = verify_protocol(frame, protocol, target_prop)
    assert report.solves and report.success_set == success_target
    return protocol


def _select_target(frame: Frame, ctx: OperatorContext, target_prop: int) -> int:
    common = ctx.common(target_prop)
    if common == 0:
        raise ProtocolError(
            "no non-empty feasible success set exists (common knowledge is empty)"
        )
    if all(
        a.tolerance >= ctx.min_tolerance(a.name, target_prop) for a in frame.agents
    ):
        return common
    candidates = sorted(submasks(common), key=lambda v: -v.bit_count())
    for v in candidates:
        if v and all(
            open_rank(frame.topology(a.name), v).rank <= a.tolerance + 1
            for a in frame.agents
        ):
            return v
    raise ProtocolError("no non-empty feasible success set exists at these tolerances")


# ---------------------------------------------------------------------------
# evidence streams and simulation


@dataclass(frozen=True)
class EvidenceStream:
    """A finite, strictly refining run of evidence an agent learns at a world,
    ending at the least evidence there (so limits are realized)."""

    agent: str
    world: int
    chain: tuple[int, ...]


def generate_stream(frame: Frame, agent: str, world: int | str, seed) -> EvidenceStream:
    """Random strictly descending walk through the agent's evidence at the
    world, from a random start down to the unique minimal element."""
    w = world if isinstance(world, int) else frame.index(world)
    at_w = sorted(frame.evidence_at(agent, w), key=lambda e: (e.bit_count(), e))
    least = frame.minimal_evidence_at(agent, w)[0]
    rng = random.Random(f"{seed}")
    cur = rng.choice(at_w)
    chain = [cur]
    while cur != least:
        cur = rng.choice([e for e in at_w if e != cur and e & ~cur == 0])
        chain.append(cur)
    return EvidenceStream(agent, w, tuple(chain))


@dataclass(frozen=True)
class ShameEvent:
    agent: str
    world: str
    cause: str  # "false-yes" | "disagreement"


@dataclass(frozen=True)
class SimulationReport:
    world: str
    traces: Mapping[str, tuple[str, ...]]
    limits: Mapping[str, str]
    aggregator_trace: tuple[str, ...]
    aggregator_limit: str
    shame: tuple[ShameEvent, ...]
    faults: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "world": self.world,
            "traces": {a: list(t) for a, t in self.traces.items()},
            "limits": dict(self.limits),
            "aggregator_trace": list(self.aggregator_trace),
            "aggregator_limit": self.aggregator_limit,
            "shame": [
                {"agent": s.agent, "world": s.world, "cause": s.cause}
                for s in self.shame
            ],
            "faults": list(self.faults),
        }


def simulate(
    frame: Frame,
    protocol: AttestationProtocol,
    world: int | str,
    streams: Mapping[str, EvidenceStream],
    faults: Sequence[str],
    target: int,
    seed,
    step_cap: int | None = None,
) -> SimulationReport:
    """Run every agent along its evidence stream at one world.

    Honest agents answer their strategy on each learned evidence; faulty
    agents emit seeded random verdicts. The aggregator attests at a step iff
    strictly more than half of that step's outputs attest; ties are defers
    (safety over liveness). Limits are the final outputs, which honest
    streams realize because they end at minimal evidence.
    """
    _check_protocol_shape(frame, protocol)
    w = world if isinstance(world, int) else frame.index(world)
    world_name = frame.worlds[w]
    fault_set = set(faults)
    agent_names = [a.name for a in frame.agents]
    if fault_set - set(agent_names):
        raise ProtocolError(f"unknown fault agents: {sorted(fault_set - set(agent_names))}")
    if set(streams) != set(agent_names):
        raise ProtocolError("streams must cover exactly the frame's agents")
    for name, stream in streams.items():
        if stream.agent != name or stream.world != w:
            raise ProtocolError(f"stream for {name!r} does not match agent and world")

    horizon = max(len(s.chain) for s in streams.values())
    if step_cap is not None:
        if step_cap < horizon:
            raise ProtocolError(
                f"step cap {step_cap} cannot realize streams of length {horizon}"
            )
        horizon = step_cap

    traces: dict[str, tuple[str, ...]] = {}
    for name in agent_names:
        if name in fault_set:
            rng = random.Random(f"{seed}:{name}")
            traces[name] = tuple(rng.choice((ATTEST, DEFER)) for _ in range(horizon))
        else:
            strategy = protocol.strategy(name)
            chain = streams[name].chain
            traces[name] = tuple(
                strategy.verdicts[chain[min(t, len(chain) - 1)]] for t in range(horizon)
            )

    majority = len(agent_names) / 2
    aggregator = tuple(
        ATTEST
        if sum(traces[n][t] == ATTEST for n in agent_names) > majority
        else DEFER
        for t in range(horizon)
    )

    limits = {name: traces[name][-1] for name in agent_names}
    honest = [n for n in agent_names if n not in fault_set]
    shame: list[ShameEvent] = []
    for name in honest:
        if limits[name] == ATTEST:
            if not (target >> w) & 1:
                shame.append(ShameEvent(name, world_name, "false-yes"))
            if any(limits[o] != ATTEST for o in honest):
                shame.append(ShameEvent(name, world_name, "disagreement"))

    if len(fault_set) < len(agent_names) / 2:
        report = verify_protocol(frame, protocol, target)
        if report.solves:
            in_success = bool((report.success_set >> w) & 1)
            assert (aggregator[-1] == ATTEST) == in_success

    return SimulationReport(
        world=world_name,
        traces=traces,
        limits=limits,
        aggregator_trace=aggregator,
        aggregator_limit=aggregator[-1],
        shame=tuple(shame),
        faults=tuple(sorted(fault_set)),
    )


# ---------------------------------------------------------------------------
# scenario files


@dataclass(frozen=True)
class Scenario:
    frame: Frame
    valuation: dict[str, int]
    target: int
    protocol: AttestationProtocol
    world: str
    faults: tuple[str, ...]
    seed: int
    step_cap: int | None


def _parse_world_set(frame: Frame, valuation: dict[str, int], spec) -> int:
    """A world set given either as a list of names, a comma string of names,
    or an ``@formula`` evaluated against the valuation."""
    if isinstance(spec, list):
        return frame.mask(spec)
    if isinstance(spec, str) and spec.startswith("@"):
        from .logic import Model, evaluate, parse

        return evaluate(Model(frame, valuation), parse(spec[1:]))
    if isinstance(spec, str):
        return frame.mask(n.strip() for n in spec.split(",") if n.strip())
    raise ProtocolError(f"cannot read world set from {spec!r}")


def load_scenario(path: str) -> Scenario:
    """Load a simulation scenario file::

        { "schema": 1,
          "frame": "model.json",
          "target": "x,z" | "@formula" | ["x","z"],
          "protocol": {"type": "synthesized", "success_target": "x,z"?}
                    | {"type": "explicit",
                       "strategies": {"a": [{"evidence": ["x"], "verdict": "yes"}]}},
          "world": "x",
          "faults": ["b"],
          "seed": 7,
          "step_cap": 12? }

    The frame path is relative to the scenario file.
    """
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ProtocolError(f"cannot read scenario {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ProtocolError(f"scenario {path} is not valid JSON: {exc}") from None

    try:
        frame_path = data["frame"]
        if not os.path.isabs(frame_path):
            frame_path = os.path.join(os.path.dirname(os.path.abspath(path)), frame_path)
        frame, valuation = load_frame_file(frame_path)
        target = _parse_world_set(frame, valuation, data["target"])
        world = data["world"]
        faults = tuple(data.get("faults", []))
        seed = data.get("seed", 0)
        step_cap = data.get("step_cap")
        proto_spec = data["protocol"]
        if proto_spec.get("type") == "synthesized":
            chosen = proto_spec.get("success_target")
            success = (
                None if chosen is None else _parse_world_set(frame, valuation, chosen)
            )
            protocol = synthesize(frame, target, success)
        elif proto_spec.get("type") == "explicit":
            strategies = []
            for agent, rows in proto_spec["strategies"].items():
                verdicts = {
                    frame.mask(row["evidence"]): row["verdict"] for row in rows
                }
                strategies.append(AttestationStrategy(agent, verdicts))
            protocol = AttestationProtocol(tuple(strategies))
            _check_protocol_shape(frame, protocol)
        else:
            raise ProtocolError("protocol type must be 'synthesized' or 'explicit'")
    except (KeyError, TypeError) as exc:
        raise ProtocolError(f"malformed scenario: {exc}") from None

    frame.index(world)
    return Scenario(frame, valuation, target, protocol, world, faults, seed, step_cap)


def run_scenario(scenario: Scenario) -> SimulationReport:
    streams = {
        a.name: generate_stream(
            scenario.frame, a.name, scenario.world, f"{scenario.seed}:stream:{a.name}"
        )
        for a in scenario.frame.agents
    }
    return simulate(
        scenario.frame,
        scenario.protocol,
        scenario.world,
        streams,
        scenario.faults,
        scenario.target,
        scenario.seed,
        scenario.step_cap,
    )
