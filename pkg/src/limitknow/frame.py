"""Finite frames: world tables, per-agent evidence bases, generated topologies.

World sets are plain ints used as bit vectors over a frame's world table
(bit k set = world at index k is a member). Every structure here is immutable
after construction; topologies and subspaces are cached on the frame and are
safe to share between threads.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence


class FrameError(ValueError):
    """A malformed frame, basis, world set, or model file."""


# ---------------------------------------------------------------------------
# bit-vector helpers


def bits(mask: int) -> Iterator[int]:
    """Iterate set bit positions, lowest first."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def submasks(mask: int) -> Iterator[int]:
    """Iterate every submask of ``mask``, starting at ``mask``, ending at 0."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def mask_of(indices: Iterable[int]) -> int:
    out = 0
    for i in indices:
        out |= 1 << i
    return out


# ---------------------------------------------------------------------------
# evidence basis validation


@dataclass(frozen=True)
class BasisViolation:
    """One violated basis condition plus its witness data."""

    kind: str  # empty-element | duplicate-element | outside-universe | uncovered-world | not-directed
    element: int | None = None
    other: int | None = None
    world: int | None = None

    def describe(self, world_names: Sequence[str] | None = None) -> str:
        def nm(mask: int) -> str:
            if world_names is None:
                return bin(mask)
            return "{" + ",".join(world_names[i] for i in bits(mask)) + "}"

        if self.kind == "empty-element":
            return "basis element is empty"
        if self.kind == "duplicate-element":
            return f"duplicate basis element {nm(self.element)}"
        if self.kind == "outside-universe":
            return f"basis element {nm(self.element)} is not a subset of the universe"
        if self.kind == "uncovered-world":
            w = self.world if world_names is None else world_names[self.world]
            return f"world {w} is in no basis element"
        w = self.world if world_names is None else world_names[self.world]
        return (
            f"no common refinement at world {w} for "
            f"{nm(self.element)} and {nm(self.other)}"
        )


@dataclass(frozen=True)
class BasisReport:
    ok: bool
    violations: tuple[BasisViolation, ...]


def validate_basis(elements: Sequence[int], universe: int) -> BasisReport:
    """Check the two basis conditions (cover, local directedness) plus the
    ingestion rules (non-empty, within universe, no duplicates).

    Violations are data, not faults: the report lists every failed condition
    with a witness.
    """
    found: list[BasisViolation] = []
    seen: set[int] = set()
    for e in elements:
        if e == 0:
            found.append(BasisViolation("empty-element", element=e))
        if e & ~universe:
            found.append(BasisViolation("outside-universe", element=e))
        if e in seen:
            found.append(BasisViolation("duplicate-element", element=e))
        seen.add(e)

    for w in bits(universe):
        at_w = [e for e in elements if (e >> w) & 1]
        if not at_w:
            found.append(BasisViolation("uncovered-world", world=w))
            continue
        for i, e1 in enumerate(at_w):
            for e2 in at_w[i + 1 :]:
                meet = e1 & e2
                if not any((e3 >> w) & 1 and e3 & ~meet == 0 for e3 in at_w):
                    found.append(
                        BasisViolation("not-directed", element=e1, other=e2, world=w)
                    )
    return BasisReport(not found, tuple(found))


def subspace_basis(basis: Sequence[int], evidence: int) -> tuple[int, ...]:
    """Restrict a basis to the elements contained in ``evidence``.

    ``evidence`` must itself be a basis element; the result is then a valid
    basis over ``evidence`` (cover follows from directedness).
    """
    if evidence not in basis:
        raise FrameError("subspace root is not a basis element")
    return tuple(e for e in basis if e & ~evidence == 0)


# ---------------------------------------------------------------------------
# topologies

_ENUMERATION_LIMIT = 20  # open-set materialization is 2^|universe|


@dataclass(frozen=True, eq=False)
class Topology:
    """A finite topology given by the minimal open neighborhood of each world.

    A set is open iff it contains the neighborhood of each of its members, so
    membership, hulls, and interiors never need the full open family; the
    ``opens`` tuple is materialized lazily for callers that enumerate it.
    """

    universe: int
    neighborhoods: tuple[int, ...]  # indexed by world position; 0 off-universe
    generators: tuple[int, ...]
    _opens: list = field(default_factory=list, repr=False)
    _rank_memo: dict = field(default_factory=dict, repr=False)

    def check_subset(self, s: int) -> None:
        if s & ~self.universe:
            raise FrameError("world set has members outside this universe")

    def is_open(self, s: int) -> bool:
        self.check_subset(s)
        return all(self.neighborhoods[w] & ~s == 0 for w in bits(s))

    def hull(self, s: int) -> int:
        """The least open superset of ``s``."""
        self.check_subset(s)
        out = 0
        for w in bits(s):
            out |= self.neighborhoods[w]
        return out

    def interior(self, s: int) -> int:
        """The greatest open subset of ``s``."""
        self.check_subset(s)
        out = 0
        for w in bits(self.universe & s):
            if self.neighborhoods[w] & ~s == 0:
                out |= self.neighborhoods[w]
        return out

    @property
    def opens(self) -> tuple[int, ...]:
        if not self._opens:
            n = self.universe.bit_count()
            if n > _ENUMERATION_LIMIT:
                raise FrameError(
                    f"refusing to enumerate opens over {n} worlds "
                    f"(limit {_ENUMERATION_LIMIT})"
                )
            self._opens.append(
                tuple(sorted(s for s in submasks(self.universe) if self.is_open(s)))
            )
        return self._opens[0]


def _topology_from_neighborhoods(
    universe: int, neighborhoods: Sequence[int], generators: Sequence[int]
) -> Topology:
    return Topology(universe, tuple(neighborhoods), tuple(generators))


def generate_topology(basis: Sequence[int], universe: int | None = None) -> Topology:
    """Close a valid evidence basis under arbitrary unions (plus the empty set).

    The minimal neighborhood of a world is the intersection of the basis
    elements containing it, which directedness makes a basis element itself.
    """
    if universe is None:
        universe = 0
        for e in basis:
            universe |= e
    report = validate_basis(basis, universe)
    if not report.ok:
        raise FrameError(
            "invalid basis: " + "; ".join(v.describe() for v in report.violations)
        )
    width = universe.bit_length()
    nbhd = [0] * width
    for w in bits(universe):
        acc = universe
        for e in basis:
            if (e >> w) & 1:
                acc &= e
        nbhd[w] = acc
    return _topology_from_neighborhoods(universe, nbhd, tuple(basis))


def topology_from_open_family(family: Sequence[int], universe: int) -> Topology:
    """Build the topology generated by an arbitrary family of sets that is
    closed under pairwise intersection at every point (so unions of members
    already form a topology). Used for derived topologies such as the one
    generated by an interior operator's open sets.
    """
    width = universe.bit_length()
    nbhd = [0] * width
    for w in bits(universe):
        acc = universe
        for g in family:
            if (g >> w) & 1:
                acc &= g
        nbhd[w] = acc
    topo = _topology_from_neighborhoods(universe, nbhd, tuple(family))
    for g in family:
        if not topo.is_open(g):
            raise FrameError("family is not point-refined; cannot generate topology")
    return topo


def open_hull(topology: Topology, s: int) -> int:
    """The inclusion-least open superset of ``s`` in ``topology``."""
    return topology.hull(s)


# ---------------------------------------------------------------------------
# frames


@dataclass(frozen=True)
class AgentSpec:
    """One agent: an evidence basis plus a switching tolerance."""

    name: str
    basis: tuple[int, ...]
    tolerance: int


class Frame:
    """A world table plus, per agent, an evidence basis and tolerance.

    Bases are validated at construction; duplicate elements are rejected
    rather than merged. Per-agent topologies and subspace topologies are
    built once and cached.
    """

    def __init__(self, worlds: Sequence[str], agents: Sequence[AgentSpec]):
        worlds = tuple(worlds)
        if not worlds:
            raise FrameError("frame needs at least one world")
        if len(set(worlds)) != len(worlds) or any(not w for w in worlds):
            raise FrameError("world names must be unique and non-empty")
        if not agents:
            raise FrameError("frame needs at least one agent")
        names = [a.name for a in agents]
        if len(set(names)) != len(names) or any(not n for n in names):
            raise FrameError("agent names must be unique and non-empty")

        self.worlds: tuple[str, ...] = worlds
        self.universe: int = (1 << len(worlds)) - 1
        self.agents: tuple[AgentSpec, ...] = tuple(agents)
        self._by_name: dict[str, AgentSpec] = {a.name: a for a in agents}
        self._index: dict[str, int] = {w: i for i, w in enumerate(worlds)}
        self._topologies: dict[str, Topology] = {}
        self._subspaces: dict[tuple[str, int], Topology] = {}

        for a in agents:
            if a.tolerance < 0:
                raise FrameError(f"agent {a.name}: tolerance must be >= 0")
            report = validate_basis(a.basis, self.universe)
            if not report.ok:
                detail = "; ".join(v.describe(worlds) for v in report.violations)
                raise FrameError(f"agent {a.name}: invalid basis: {detail}")

    # -- world-set conversions ------------------------------------------

    def index(self, world: str) -> int:
        try:
            return self._index[world]
        except KeyError:
            raise FrameError(f"unknown world {world!r}") from None

    def mask(self, names: Iterable[str]) -> int:
        out = 0
        for name in names:
            out |= 1 << self.index(name)
        return out

    def names(self, mask: int) -> tuple[str, ...]:
        if mask & ~self.universe:
            raise FrameError("world set has members outside this frame")
        return tuple(self.worlds[i] for i in bits(mask))

    # -- agents and topologies -------------------------------------------

    def agent(self, name: str) -> AgentSpec:
        try:
            return self._by_name[name]
        except KeyError:
            raise FrameError(f"unknown agent {name!r}") from None

    def topology(self, agent: str) -> Topology:
        topo = self._topologies.get(agent)
        if topo is None:
            topo = generate_topology(self.agent(agent).basis, self.universe)
            self._topologies[agent] = topo
        return topo

    def subspace(self, agent: str, evidence: int) -> Topology:
        """Subspace topology over a basis element, generated by the restricted
        basis. Cached per (agent, element)."""
        key = (agent, evidence)
        topo = self._subspaces.get(key)
        if topo is None:
            restricted = subspace_basis(self.agent(agent).basis, evidence)
            topo = generate_topology(restricted, evidence)
            self._subspaces[key] = topo
        return topo

    # -- evidence queries --------------------------------------------------

    def evidence_at(self, agent: str, world: int | str) -> tuple[int, ...]:
        """All basis elements of ``agent`` containing the world."""
        w = world if isinstance(world, int) else self.index(world)
        if not (self.universe >> w) & 1:
            raise FrameError(f"world index {w} out of range")
        return tuple(e for e in self.agent(agent).basis if (e >> w) & 1)

    def minimal_evidence_at(self, agent: str, world: int | str) -> tuple[int, ...]:
        """The inclusion-minimal elements of ``evidence_at``. For a valid
        finite basis this is a single least element (directedness)."""
        at_w = self.evidence_at(agent, world)
        minimal = tuple(
            e for e in at_w if not any(o != e and o & ~e == 0 for o in at_w)
        )
        assert len(minimal) == 1, "directed finite evidence has a least element"
        return minimal

    def with_tolerances(self, tolerances: Mapping[str, int]) -> "Frame":
        """A frame with the same worlds and bases but re-assigned tolerances.
        Topology caches are shared (tolerances do not affect topologies)."""
        agents = tuple(
            AgentSpec(a.name, a.basis, tolerances.get(a.name, a.tolerance))
            for a in self.agents
        )
        out = Frame(self.worlds, agents)
        out._topologies = self._topologies
        out._subspaces = self._subspaces
        return out

    def __repr__(self) -> str:
        return f"Frame(worlds={self.worlds!r}, agents={[a.name for a in self.agents]!r})"


# ---------------------------------------------------------------------------
# model files


def load_frame(data: Mapping) -> tuple[Frame, dict[str, int]]:
    """Build a frame (and optional valuation) from the JSON model schema:

        { "worlds": ["x","y","z"],
          "agents": [ { "name": "a", "tolerance": 1,
                        "basis": [["x","y","z"], ["y","z"], ["z"]] } ],
          "valuation": { "p": ["x","z"] } }

    Unknown world names anywhere are a load error listing the offenders.
    """
    try:
        world_list = list(data["worlds"])
        agent_list = list(data["agents"])
    except (KeyError, TypeError) as exc:
        raise FrameError(f"model file must define 'worlds' and 'agents': {exc}") from None

    index = {w: i for i, w in enumerate(world_list)}
    unknown: list[str] = []

    def to_mask(names: Iterable[str], where: str) -> int:
        out = 0
        for name in names:
            if name in index:
                out |= 1 << index[name]
            else:
                unknown.append(f"{name!r} in {where}")
        return out

    agents = []
    for spec in agent_list:
        try:
            name = spec["name"]
            tolerance = int(spec["tolerance"])
            basis = [
                to_mask(e, f"basis of agent {name!r}") for e in spec["basis"]
            ]
        except (KeyError, TypeError, ValueError) as exc:
            raise FrameError(f"malformed agent entry: {exc}") from None
        agents.append(AgentSpec(name, tuple(basis), tolerance))

    valuation = {
        str(p): to_mask(ws, f"valuation of {p!r}")
        for p, ws in dict(data.get("valuation", {})).items()
    }
    if unknown:
        raise FrameError("unknown world names: " + ", ".join(unknown))
    return Frame(world_list, agents), valuation


def load_frame_file(path: str) -> tuple[Frame, dict[str, int]]:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise FrameError(f"cannot read model file {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise FrameError(f"model file {path} is not valid JSON: {exc}") from None
    return load_frame(data)
