"""Generalized AL allocation for two agents with weak preferences."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .prefs import PriorityOrder, Profile, build_priority_order
from .sd import Assignment, allocations_envy_free


@dataclass(frozen=True)
class BothPick:
    to_agent1: int
    to_agent2: int


@dataclass(frozen=True)
class ContestedResolved:
    contested: int
    receiver: int
    other_object: int


@dataclass(frozen=True)
class ContestedToC:
    contested: int


@dataclass(frozen=True)
class LastToC:
    obj: int


Action = Union[BothPick, ContestedResolved, ContestedToC, LastToC]


@dataclass(frozen=True)
class RoundRecord:
    round: int
    action: Action
    assignment: Assignment
    contested: tuple[int, ...]


@dataclass(frozen=True)
class GalResult:
    assignment: Assignment
    contested: tuple[int, ...]
    trace: tuple[RoundRecord, ...]
    favor: int

    @property
    def complete(self) -> bool:
        return not self.contested

    def received(self, agent: int) -> list[int]:
        """Objects given to ``agent`` in the order they were allocated."""
        out = []
        for rec in self.trace:
            act = rec.action
            if isinstance(act, BothPick):
                out.append(act.to_agent1 if agent == 1 else act.to_agent2)
            elif isinstance(act, ContestedResolved):
                out.append(act.contested if act.receiver == agent else act.other_object)
        return out


class _Cursor:
    """Highest-priority remaining object of a priority order, amortized O(1)."""

    def __init__(self, order: PriorityOrder, remaining: list[bool]):
        self.seq = order.sequence
        self.remaining = remaining
        self.i = 0

    def top(self) -> int:
        seq, remaining = self.seq, self.remaining
        while not remaining[seq[self.i]]:
            self.i += 1
        return seq[self.i]


def _snapshot(m: int, p1: set[int], p2: set[int]) -> Assignment:
    return Assignment.of(m, p1, p2)


def _allocate(profile: Profile, orders: tuple[PriorityOrder, PriorityOrder], favor: int) -> GalResult:
    if favor not in (1, 2):
        raise ValueError(f"favor must be 1 or 2, got {favor!r}")
    m = profile.m
    remaining = [True] * m
    left = m
    cursors = {1: _Cursor(orders[0], remaining), 2: _Cursor(orders[1], remaining)}
    held: dict[int, set[int]] = {1: set(), 2: set()}
    contested: list[int] = []
    trace: list[RoundRecord] = []

    def take(o: int) -> None:
        nonlocal left
        remaining[o] = False
        left -= 1

    t = 0
    while left:
        t += 1
        if left == 1:
            o = cursors[1].top()
            take(o)
            contested.append(o)
            action: Action = LastToC(o)
        else:
            top1, top2 = cursors[1].top(), cursors[2].top()
            if top1 != top2:
                take(top1)
                take(top2)
                held[1].add(top1)
                held[2].add(top2)
                action = BothPick(top1, top2)
            else:
                star = top1
                take(star)
                assert left > 0
                action = ContestedToC(star)
                for receiver in (favor, 3 - favor):
                    other = 3 - receiver
                    alt = cursors[other].top()
                    trial = {receiver: held[receiver] | {star}, other: held[other] | {alt}}
                    if allocations_envy_free(profile, trial[1], trial[2]):
                        take(alt)
                        held[receiver].add(star)
                        held[other].add(alt)
                        action = ContestedResolved(star, receiver, alt)
                        break
                else:
                    contested.append(star)
        trace.append(RoundRecord(t, action, _snapshot(m, held[1], held[2]), tuple(contested)))
    final = _snapshot(m, held[1], held[2])
    return GalResult(final, tuple(contested), tuple(trace), favor)


def run_gal(profile: Profile, favor: int = 1) -> GalResult:
    """Allocate with GAL; ``favor`` is the agent tried first for a contested object."""
    orders = (build_priority_order(profile, 1), build_priority_order(profile, 2))
    return _allocate(profile, orders, favor)


def run_simplified_al(profile: Profile) -> GalResult:
    """AL for strict preferences: agents pick their favourite remaining object.

    On a conflict the shared favourite goes to agent 1 with agent 2 taking its
    next favourite, if that keeps the partial assignment envy-free; otherwise
    the mirrored split is tried, and failing both the object is set aside.
    """
    if not profile.is_strict:
        raise ValueError("simplified AL needs strict preferences")
    m = profile.m
    ranking = {a: [next(iter(c)) for c in profile.order(a).classes] for a in (1, 2)}
    free = set(range(m))
    held: dict[int, set[int]] = {1: set(), 2: set()}
    contested: list[int] = []
    trace: list[RoundRecord] = []

    def favourite(agent: int) -> int:
        return next(o for o in ranking[agent] if o in free)

    t = 0
    while free:
        t += 1
        if len(free) == 1:
            o = free.pop()
            contested.append(o)
            action: Action = LastToC(o)
        elif favourite(1) != favourite(2):
            o1, o2 = favourite(1), favourite(2)
            free -= {o1, o2}
            held[1].add(o1)
            held[2].add(o2)
            action = BothPick(o1, o2)
        else:
            o = favourite(1)
            free.discard(o)
            action = ContestedToC(o)
            for receiver in (1, 2):
                other = 3 - receiver
                nxt = favourite(other)
                trial = {receiver: held[receiver] | {o}, other: held[other] | {nxt}}
                if allocations_envy_free(profile, trial[1], trial[2]):
                    free.discard(nxt)
                    held[receiver].add(o)
                    held[other].add(nxt)
                    action = ContestedResolved(o, receiver, nxt)
                    break
            else:
                contested.append(o)
        trace.append(RoundRecord(t, action, Assignment.of(m, held[1], held[2]), tuple(contested)))
    return GalResult(Assignment.of(m, held[1], held[2]), tuple(contested), tuple(trace), 1)


def exists_complete_ef(profile: Profile) -> bool:
    """Whether some complete assignment is envy-free, decided by one GAL run."""
    return run_gal(profile).complete
