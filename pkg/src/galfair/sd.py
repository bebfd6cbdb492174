"""Stochastic-dominance comparisons and fairness/efficiency predicates.

All checks are stated for two agents. An allocation is any collection of
object indices; an :class:`Assignment` fixes both agents' allocations and the
leftover objects.
"""

from __future__ import annotations

import enum
from collections.abc import Collection, Iterable
from dataclasses import dataclass

from .prefs import Profile, WeakOrder


class SdOrdering(enum.Enum):
    STRICTLY_PREFERS = "strictly-prefers"
    EQUAL = "equal"
    STRICTLY_DISPREFERRED = "strictly-dispreferred"
    INCOMPARABLE = "incomparable"

    @property
    def weakly_prefers(self) -> bool:
        return self in (SdOrdering.STRICTLY_PREFERS, SdOrdering.EQUAL)


@dataclass(frozen=True)
class Assignment:
    p1: frozenset[int]
    p2: frozenset[int]
    unallocated: frozenset[int]

    def __post_init__(self):
        if self.p1 & self.p2:
            raise ValueError(f"allocations overlap on {sorted(self.p1 & self.p2)}")
        if self.unallocated & (self.p1 | self.p2):
            raise ValueError("unallocated objects overlap the allocations")

    @classmethod
    def of(cls, m: int, p1: Iterable[int] = (), p2: Iterable[int] = ()) -> Assignment:
        p1, p2 = frozenset(p1), frozenset(p2)
        for o in p1 | p2:
            if not 0 <= o < m:
                raise ValueError(f"object index {o} outside 0..{m - 1}")
        return cls(p1, p2, frozenset(range(m)) - p1 - p2)

    @property
    def m(self) -> int:
        return len(self.p1) + len(self.p2) + len(self.unallocated)

    @property
    def complete(self) -> bool:
        return not self.unallocated

    @property
    def allocated(self) -> frozenset[int]:
        return self.p1 | self.p2

    def allocation(self, agent: int) -> frozenset[int]:
        if agent == 1:
            return self.p1
        if agent == 2:
            return self.p2
        raise ValueError(f"agent must be 1 or 2, got {agent!r}")


def cumulative_counts(order: WeakOrder, allocation: Iterable[int]) -> list[int]:
    """Objects of ``allocation`` in the first ``j+1`` classes, for each ``j``."""
    counts = [0] * order.k
    rank = order.rank
    for o in allocation:
        counts[rank[o]] += 1
    total = 0
    for j, c in enumerate(counts):
        total += c
        counts[j] = total
    return counts


def sd_compare(order: WeakOrder, a: Iterable[int], b: Iterable[int]) -> SdOrdering:
    """SD-compare two allocations from the viewpoint of ``order``. O(m)."""
    s = cumulative_counts(order, a)
    t = cumulative_counts(order, b)
    a_ge = all(x >= y for x, y in zip(s, t))
    b_ge = all(y >= x for x, y in zip(s, t))
    if a_ge and b_ge:
        return SdOrdering.EQUAL
    if a_ge:
        return SdOrdering.STRICTLY_PREFERS
    if b_ge:
        return SdOrdering.STRICTLY_DISPREFERRED
    return SdOrdering.INCOMPARABLE


def sd_weakly_prefers(order: WeakOrder, a: Iterable[int], b: Iterable[int]) -> bool:
    s = cumulative_counts(order, a)
    t = cumulative_counts(order, b)
    return all(x >= y for x, y in zip(s, t))


def allocations_envy_free(profile: Profile, p1: Collection[int], p2: Collection[int]) -> bool:
    """EF test on a raw pair of disjoint allocations."""
    if len(p1) != len(p2):
        return False
    return sd_weakly_prefers(profile.agent1, p1, p2) and sd_weakly_prefers(
        profile.agent2, p2, p1
    )


def is_ef(profile: Profile, a: Assignment) -> bool:
    return allocations_envy_free(profile, a.p1, a.p2)


def envy_witness(profile: Profile, a: Assignment) -> tuple[int, int] | None:
    """First envious agent and the class prefix where its count falls short.

    Returns ``(agent, class_index)`` or ``None`` when ``a`` is EF. A length
    mismatch is reported at the last class of the agent holding fewer objects.
    """
    for agent in (1, 2):
        order = profile.order(agent)
        own = cumulative_counts(order, a.allocation(agent))
        theirs = cumulative_counts(order, a.allocation(3 - agent))
        for j, (x, y) in enumerate(zip(own, theirs)):
            if x < y:
                return agent, j
    return None


# -- injection / Hall's-theorem route --------------------------------------


def _perfect_matching(left: list[int], right: list[int], ok) -> dict[int, int] | None:
    """Kuhn's augmenting paths; ``ok(l, r)`` says whether edge ``l-r`` exists."""
    adj = {l: [r for r in right if ok(l, r)] for l in left}
    match_r: dict[int, int] = {}

    def augment(l: int, seen: set[int]) -> bool:
        for r in adj[l]:
            if r in seen:
                continue
            seen.add(r)
            if r not in match_r or augment(match_r[r], seen):
                match_r[r] = l
                return True
        return False

    for l in left:
        if not augment(l, set()):
            return None
    return {l: r for r, l in match_r.items()}


def ef_injections(profile: Profile, a: Assignment) -> tuple[dict[int, int], dict[int, int]] | None:
    """Witness injections ``(f1, f2)`` or ``None``.

    ``f1`` maps each object of ``p2`` to an object of ``p1`` that agent 1
    weakly prefers to it, and symmetrically for ``f2``.
    """
    if len(a.p1) != len(a.p2):
        return None
    result = []
    for agent in (1, 2):
        order = profile.order(agent)
        own = sorted(a.allocation(agent))
        other = sorted(a.allocation(3 - agent))
        matching = _perfect_matching(other, own, lambda o, mine: order.weakly_prefers(mine, o))
        if matching is None:
            return None
        result.append(matching)
    return result[0], result[1]


def is_ef_injection(profile: Profile, a: Assignment) -> bool:
    return ef_injections(profile, a) is not None


# -- halving characterization ----------------------------------------------


def is_ef_halving(profile: Profile, a: Assignment) -> bool:
    """Each agent holds at least half of the allocated objects it weakly prefers
    to any allocated object."""
    allocated = a.p1 | a.p2
    for agent in (1, 2):
        rank = profile.order(agent).rank
        mine = a.allocation(agent)
        for o in allocated:
            upper = [x for x in allocated if rank[x] <= rank[o]]
            held = sum(1 for x in upper if x in mine)
            if 2 * held < len(upper):
                return False
    return True


# -- efficiency ------------------------------------------------------------


def lpo_violation(profile: Profile, a: Assignment) -> tuple[int, int, int] | None:
    """A pair ``(agent, o, o_prime)`` blocking local Pareto optimality.

    ``o`` belongs to ``agent``, ``o_prime`` to the other agent, the agent
    strictly prefers ``o_prime`` and the other agent weakly prefers ``o``.
    """
    for agent in (1, 2):
        mine = profile.order(agent)
        theirs = profile.order(3 - agent)
        for o in sorted(a.allocation(agent)):
            for o2 in sorted(a.allocation(3 - agent)):
                if mine.prefers(o2, o) and theirs.weakly_prefers(o, o2):
                    return agent, o, o2
    return None


def is_lpo(profile: Profile, a: Assignment) -> bool:
    return lpo_violation(profile, a) is None


def pareto_dominates(profile: Profile, q: Assignment, p: Assignment) -> bool:
    """Whether ``q`` SD-improves one agent without SD-hurting the other."""
    strict = False
    for agent in (1, 2):
        rel = sd_compare(profile.order(agent), q.allocation(agent), p.allocation(agent))
        if not rel.weakly_prefers:
            return False
        strict = strict or rel is SdOrdering.STRICTLY_PREFERS
    return strict
