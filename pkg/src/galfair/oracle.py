"""Exhaustive ground truth for small instances.

Every assignment of ``m`` objects is encoded by a base-3 counter whose digit
``j`` (least significant first) sends object ``j`` to the pile (0), agent 1
(1) or agent 2 (2). Preference checks here work straight from the SD
definition: for every object ``o``, count the objects of an allocation that
the agent weakly prefers to ``o``.
"""

from __future__ import annotations

import functools
import itertools
from collections.abc import Iterator, Sequence
from dataclasses import dataclass

import numpy as np

from .prefs import Profile, WeakOrder
from .sd import Assignment


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class OracleBudget:
    max_objects: int = 12
    max_enumerations: int = 10**7

    def check(self, m: int, count: int) -> None:
        if m > self.max_objects:
            raise BudgetExceeded(f"{m} objects exceeds the oracle limit of {self.max_objects}")
        if count > self.max_enumerations:
            raise BudgetExceeded(
                f"{count} assignments exceeds the enumeration limit of {self.max_enumerations}"
            )


DEFAULT_BUDGET = OracleBudget()


def balanced_count(m: int) -> int:
    """Assignments with ``|p1| = |p2|``: sum over k of m!/(k! k! (m-2k)!)."""
    from math import comb

    return sum(comb(m, k) * comb(m - k, k) for k in range(m // 2 + 1))


@functools.lru_cache(maxsize=None)
def _table(n: int) -> np.ndarray:
    codes = np.arange(3**n, dtype=np.int64)
    out = np.empty((3**n, n), dtype=np.int8)
    for j in range(n):
        out[:, j] = codes % 3
        codes //= 3
    out.setflags(write=False)
    return out


@functools.lru_cache(maxsize=None)
def _balanced_table(n: int) -> np.ndarray:
    t = _table(n)
    keep = (t == 1).sum(axis=1) == (t == 2).sum(axis=1)
    out = t[keep]
    out.setflags(write=False)
    return out


def enumerate_assignments(
    objects: Sequence[int] | int,
    balanced_only: bool = False,
    budget: OracleBudget = DEFAULT_BUDGET,
    m: int | None = None,
) -> Iterator[Assignment]:
    """Yield every assignment of ``objects`` in base-3 counter order.

    ``objects`` is either a count (objects ``0..n-1``) or explicit indices;
    ``m`` is the instance size used for the pile and defaults to the largest
    index plus one.
    """
    objs = list(range(objects)) if isinstance(objects, int) else list(objects)
    size = m if m is not None else (max(objs) + 1 if objs else 0)
    budget.check(len(objs), 3 ** len(objs))
    for digits in itertools.product((0, 1, 2), repeat=len(objs)):
        digits = digits[::-1]  # object 0 varies fastest
        p1 = [o for o, d in zip(objs, digits) if d == 1]
        p2 = [o for o, d in zip(objs, digits) if d == 2]
        if balanced_only and len(p1) != len(p2):
            continue
        yield Assignment.of(size, p1, p2)


# -- vectorized definition-level predicates ---------------------------------


def _upper(order: WeakOrder) -> np.ndarray:
    """``U[o, x] = 1`` when ``x`` is weakly preferred to ``o``."""
    r = np.asarray(order.rank)
    return (r[None, :] <= r[:, None]).astype(np.float32)


def _counts(indicator: np.ndarray, order: WeakOrder) -> np.ndarray:
    return indicator.astype(np.float32) @ _upper(order).T


def _weakly_prefers(order: WeakOrder, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Row-wise SD test ``a`` weakly over ``b``; think of rows as allocations."""
    return np.all(_counts(a, order) >= _counts(b, order), axis=-1)


def _ef_rows(profile: Profile, rows: np.ndarray) -> np.ndarray:
    x1, x2 = rows == 1, rows == 2
    same = x1.sum(axis=1) == x2.sum(axis=1)
    return same & _weakly_prefers(profile.agent1, x1, x2) & _weakly_prefers(profile.agent2, x2, x1)


def _dominating_rows(profile: Profile, rows: np.ndarray, p: Assignment) -> np.ndarray:
    m = profile.m
    base = np.zeros((1, m), dtype=bool)
    weak = np.ones(len(rows), dtype=bool)
    strict = np.zeros(len(rows), dtype=bool)
    for agent in (1, 2):
        order = profile.order(agent)
        q = rows == agent
        pi = base.copy()
        pi[0, list(p.allocation(agent))] = True
        cq, cp = _counts(q, order), _counts(pi, order)
        ge = np.all(cq >= cp, axis=1)
        le = np.all(cq <= cp, axis=1)
        weak &= ge
        strict |= ge & ~le
    return weak & strict


def _row_to_assignment(row: np.ndarray) -> Assignment:
    m = len(row)
    return Assignment.of(m, np.flatnonzero(row == 1).tolist(), np.flatnonzero(row == 2).tolist())


def _destinations(p: Assignment, m: int) -> np.ndarray:
    row = np.zeros(m, dtype=np.int8)
    row[list(p.p1)] = 1
    row[list(p.p2)] = 2
    return row


def _oracle_ef(profile: Profile, p: Assignment) -> bool:
    return bool(_ef_rows(profile, _destinations(p, profile.m)[None, :])[0])


# -- oracles ---------------------------------------------------------------


def oracle_complete_ef_exists(profile: Profile, budget: OracleBudget = DEFAULT_BUDGET) -> bool:
    m = profile.m
    budget.check(m, balanced_count(m))
    if m % 2:
        return False
    rows = _balanced_table(m)
    rows = rows[np.all(rows != 0, axis=1)]
    return bool(_ef_rows(profile, rows).any())


def find_ef_extension(
    profile: Profile, p: Assignment, budget: OracleBudget = DEFAULT_BUDGET
) -> Assignment | None:
    """An EF assignment that strictly extends ``p`` componentwise, if any."""
    m = profile.m
    free = sorted(p.unallocated)
    budget.check(m, 3 ** len(free))
    if not free:
        return None
    rows = np.tile(_destinations(p, m), (3 ** len(free), 1))
    rows[:, free] = _table(len(free))
    rows = rows[1:]  # row 0 leaves every free object in the pile
    hits = np.flatnonzero(_ef_rows(profile, rows))
    return _row_to_assignment(rows[hits[0]]) if len(hits) else None


def oracle_is_maximal_ef(profile: Profile, p: Assignment, budget: OracleBudget = DEFAULT_BUDGET) -> bool:
    if not _oracle_ef(profile, p):
        raise ValueError("maximality is only defined for envy-free assignments")
    return find_ef_extension(profile, p, budget) is None


def find_ef_dominator(
    profile: Profile, p: Assignment, budget: OracleBudget = DEFAULT_BUDGET
) -> Assignment | None:
    """An EF assignment over any objects that Pareto-dominates ``p``, if any."""
    m = profile.m
    budget.check(m, 3**m)
    rows = _balanced_table(m)
    hits = np.flatnonzero(_ef_rows(profile, rows) & _dominating_rows(profile, rows, p))
    return _row_to_assignment(rows[hits[0]]) if len(hits) else None


def oracle_no_ef_dominator(profile: Profile, p: Assignment, budget: OracleBudget = DEFAULT_BUDGET) -> bool:
    return find_ef_dominator(profile, p, budget) is None


def find_local_improvement(
    profile: Profile, p: Assignment, budget: OracleBudget = DEFAULT_BUDGET
) -> Assignment | None:
    """A reallocation of exactly ``p``'s allocated objects that Pareto-dominates it."""
    m = profile.m
    support = sorted(p.allocated)
    budget.check(m, 2 ** len(support))
    if not support:
        return None
    rows = np.zeros((2 ** len(support), m), dtype=np.int8)
    rows[:, support] = _table_binary(len(support)) + 1
    hits = np.flatnonzero(_dominating_rows(profile, rows, p))
    return _row_to_assignment(rows[hits[0]]) if len(hits) else None


def oracle_is_lpo(profile: Profile, p: Assignment, budget: OracleBudget = DEFAULT_BUDGET) -> bool:
    return find_local_improvement(profile, p, budget) is None


@functools.lru_cache(maxsize=None)
def _table_binary(n: int) -> np.ndarray:
    codes = np.arange(2**n, dtype=np.int64)
    return ((codes[:, None] >> np.arange(n)) & 1).astype(np.int8)


# -- exhaustive profile space ------------------------------------------------


def ordered_partitions(m: int) -> Iterator[tuple[frozenset[int], ...]]:
    """All ordered set partitions of ``0..m-1`` (Fubini many)."""
    for blocks in range(1, m + 1):
        for ids in itertools.product(range(blocks), repeat=m):
            if len(set(ids)) != blocks:
                continue
            yield tuple(
                frozenset(o for o, c in enumerate(ids) if c == b) for b in range(blocks)
            )


def all_profiles(m: int, max_classes: int | None = None) -> Iterator[Profile]:
    """Every two-agent profile over ``o1..om``, optionally capping the class count."""
    parts = [WeakOrder(c) for c in ordered_partitions(m) if max_classes is None or len(c) <= max_classes]
    labels = tuple(f"o{i + 1}" for i in range(m))
    for w1 in parts:
        for w2 in parts:
            yield Profile(labels, w1, w2)
