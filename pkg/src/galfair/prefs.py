"""Weak-order preferences, two-agent profiles, instance I/O and priority orders.

Objects are identified internally by their position ``0..m-1`` in the
instance's object list; labels are only used for display and I/O.
"""

from __future__ import annotations

import enum
import json
import random
import re
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field


class InstanceError(ValueError):
    """An instance is malformed or violates a profile invariant.

    ``location`` names the offending line or field when it is known.
    """

    def __init__(self, message: str, location: str | None = None):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


class Relation(enum.Enum):
    BETTER = "better"
    EQUAL = "equal"
    WORSE = "worse"


@dataclass(frozen=True)
class WeakOrder:
    """Ordered indifference classes, most preferred first.

    ``rank[o]`` is the index of the class holding object ``o``.
    """

    classes: tuple[frozenset[int], ...]
    rank: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        classes = tuple(frozenset(c) for c in self.classes)
        object.__setattr__(self, "classes", classes)
        m = sum(len(c) for c in classes)
        rank = [-1] * m
        for j, cls in enumerate(classes):
            if not cls:
                raise InstanceError(f"indifference class {j + 1} is empty")
            for o in cls:
                if not 0 <= o < m or rank[o] != -1:
                    raise InstanceError(f"object index {o} breaks the partition")
                rank[o] = j
        object.__setattr__(self, "rank", tuple(rank))

    @classmethod
    def from_ranking(cls, groups: Iterable[Iterable[int]]) -> WeakOrder:
        return cls(tuple(frozenset(g) for g in groups))

    @property
    def m(self) -> int:
        return len(self.rank)

    @property
    def k(self) -> int:
        return len(self.classes)

    @property
    def is_strict(self) -> bool:
        return self.k == self.m

    def prefers(self, a: int, b: int) -> bool:
        return self.rank[a] < self.rank[b]

    def weakly_prefers(self, a: int, b: int) -> bool:
        return self.rank[a] <= self.rank[b]


def compare(order: WeakOrder, a: int, b: int) -> Relation:
    """Compare two objects under ``order``."""
    m = order.m
    for o in (a, b):
        if not 0 <= o < m:
            raise InstanceError(f"object index {o} is not in this order (m={m})")
    ra, rb = order.rank[a], order.rank[b]
    if ra < rb:
        return Relation.BETTER
    if ra == rb:
        return Relation.EQUAL
    return Relation.WORSE


@dataclass(frozen=True)
class Profile:
    labels: tuple[str, ...]
    agent1: WeakOrder
    agent2: WeakOrder

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        if len(set(self.labels)) != len(self.labels):
            seen: set[str] = set()
            dup = next(x for x in self.labels if x in seen or seen.add(x))
            raise InstanceError(f"duplicate object label {dup!r}", "objects")
        m = len(self.labels)
        if m < 1:
            raise InstanceError("instance has no objects", "objects")
        for name, order in (("agent1", self.agent1), ("agent2", self.agent2)):
            if order.m != m:
                raise InstanceError(
                    f"ranks {order.m} objects but the instance has {m}", name
                )

    @classmethod
    def from_groups(
        cls,
        labels: Sequence[str],
        groups1: Sequence[Sequence[str]],
        groups2: Sequence[Sequence[str]],
    ) -> Profile:
        """Build a profile from label groups, validating each agent's partition."""
        labels = tuple(labels)
        if len(set(labels)) != len(labels):
            seen: set[str] = set()
            dup = next(x for x in labels if x in seen or seen.add(x))
            raise InstanceError(f"duplicate object label {dup!r}", "objects")
        index = {lab: i for i, lab in enumerate(labels)}
        orders = []
        for name, groups in (("agent1", groups1), ("agent2", groups2)):
            where: dict[int, int] = {}
            classes = []
            for j, group in enumerate(groups):
                if not group:
                    raise InstanceError(f"group {j + 1} is empty", name)
                cls_ = set()
                for lab in group:
                    if lab not in index:
                        raise InstanceError(f"unknown object {lab!r} in group {j + 1}", name)
                    o = index[lab]
                    if o in where:
                        raise InstanceError(
                            f"object {lab!r} appears in groups {where[o] + 1} and {j + 1}",
                            name,
                        )
                    where[o] = j
                    cls_.add(o)
                classes.append(frozenset(cls_))
            missing = [labels[o] for o in range(len(labels)) if o not in where]
            if missing:
                raise InstanceError(f"objects not ranked: {', '.join(missing)}", name)
            orders.append(WeakOrder(tuple(classes)))
        return cls(labels, orders[0], orders[1])

    @property
    def m(self) -> int:
        return len(self.labels)

    @property
    def is_strict(self) -> bool:
        return self.agent1.is_strict and self.agent2.is_strict

    def order(self, agent: int) -> WeakOrder:
        if agent == 1:
            return self.agent1
        if agent == 2:
            return self.agent2
        raise ValueError(f"agent must be 1 or 2, got {agent!r}")

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise InstanceError(f"unknown object {label!r}") from None

    def groups(self, agent: int) -> list[list[str]]:
        return [[self.labels[o] for o in sorted(c)] for c in self.order(agent).classes]


@dataclass(frozen=True)
class PriorityOrder:
    sequence: tuple[int, ...]
    owner: int

    def position(self) -> list[int]:
        pos = [0] * len(self.sequence)
        for i, o in enumerate(self.sequence):
            pos[o] = i
        return pos


def build_priority_order(profile: Profile, agent: int) -> PriorityOrder:
    """Strict refinement of ``agent``'s weak order used to pick candidates.

    Within an indifference class the object the other agent likes less comes
    first. Remaining ties go to the lower index for agent 1 and to the higher
    index for agent 2.
    """
    own = profile.order(agent).rank
    other = profile.order(3 - agent).rank
    sign = 1 if agent == 1 else -1
    seq = sorted(range(profile.m), key=lambda o: (own[o], -other[o], sign * o))
    return PriorityOrder(tuple(seq), agent)


# -- instance I/O ------------------------------------------------------------

_AGENT_LINE = re.compile(r"^\s*(agent\s*([12])|objects)\s*:(.*)$", re.IGNORECASE)
_TOKEN = re.compile(r"\[([^\[\]]*)\]|([^\s\[\]]+)|(\S)")


def _groups_from_text(body: str, location: str) -> list[list[str]]:
    groups = []
    for m in _TOKEN.finditer(body):
        inner, bare, stray = m.groups()
        if stray is not None:
            raise InstanceError(f"unexpected {stray!r}", location)
        if inner is not None:
            labels = inner.replace(",", " ").split()
            if not labels:
                raise InstanceError("empty group []", location)
            groups.append(labels)
        else:
            groups.append([bare.rstrip(",")])
    return groups


def _parse_text(text: str) -> Profile:
    objects: list[str] | None = None
    agents: dict[int, list[list[str]]] = {}
    first_seen: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        loc = f"line {lineno}"
        m = _AGENT_LINE.match(line)
        if m is None:
            raise InstanceError("expected 'objects:', 'agent1:' or 'agent2:'", loc)
        if m.group(2) is None:
            if objects is not None:
                raise InstanceError("duplicate 'objects:' line", loc)
            objects = m.group(3).replace(",", " ").split()
            continue
        agent = int(m.group(2))
        if agent in agents:
            raise InstanceError(f"duplicate line for agent{agent}", loc)
        agents[agent] = _groups_from_text(m.group(3), loc)
        for g in agents[agent]:
            for lab in g:
                if lab not in first_seen:
                    first_seen.append(lab)
    for a in (1, 2):
        if a not in agents:
            raise InstanceError(f"missing line for agent{a}")
    return Profile.from_groups(objects if objects is not None else first_seen, agents[1], agents[2])


def _parse_json(data: object) -> Profile:
    if not isinstance(data, dict):
        raise InstanceError("top level must be an object", "$")
    objects = data.get("objects")
    agents = data.get("agents")
    if not isinstance(objects, list) or not all(isinstance(x, str) for x in objects):
        raise InstanceError("must be a list of label strings", "objects")
    if not isinstance(agents, list) or len(agents) != 2:
        raise InstanceError("must list exactly two agents", "agents")
    for a, groups in enumerate(agents, start=1):
        ok = isinstance(groups, list) and all(
            isinstance(g, list) and all(isinstance(x, str) for x in g) for g in groups
        )
        if not ok:
            raise InstanceError("must be a list of label groups", f"agents[{a - 1}]")
    return Profile.from_groups(objects, agents[0], agents[1])


def parse_profile(text: str) -> Profile:
    """Parse an instance given as JSON or in the one-line-per-agent text form."""
    if text.lstrip().startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InstanceError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None
        return _parse_json(data)
    return _parse_text(text)


def serialize_profile(profile: Profile) -> str:
    data = {
        "objects": list(profile.labels),
        "agents": [profile.groups(1), profile.groups(2)],
    }
    return json.dumps(data) + "\n"


def random_profile(
    m: int,
    rng: random.Random,
    strict: bool = False,
    max_classes: int | None = None,
) -> Profile:
    """Draw a random profile over objects ``o1..om``.

    Each agent's weak order gives every object a uniform class id in
    ``1..max_classes`` and drops the empty classes; ``strict`` ranks a
    uniform random permutation instead.
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    k = m if max_classes is None else max_classes
    if not 1 <= k <= m:
        raise ValueError(f"max_classes must lie in 1..{m}")
    orders = []
    for _ in range(2):
        if strict:
            perm = list(range(m))
            rng.shuffle(perm)
            orders.append(WeakOrder(tuple(frozenset([o]) for o in perm)))
            continue
        ids = [rng.randrange(k) for _ in range(m)]
        buckets: list[set[int]] = [set() for _ in range(k)]
        for o, c in enumerate(ids):
            buckets[c].add(o)
        orders.append(WeakOrder(tuple(frozenset(b) for b in buckets if b)))
    return Profile(tuple(f"o{i + 1}" for i in range(m)), orders[0], orders[1])
