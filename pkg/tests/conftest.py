from __future__ import annotations

import random
import time
from contextlib import contextmanager
from pathlib import Path

import pytest
from hypothesis import strategies as st

from galfair.prefs import Profile, WeakOrder, parse_profile
from galfair.sd import Assignment

INSTANCES = Path(__file__).resolve().parent.parent / "instances"

EXAMPLE1 = """\
objects: o1 o2 o3 o4 o5 o6
agent1: [o1 o2 o3] [o4 o5 o6]
agent2: [o2 o3 o4] [o6] [o1 o5]
"""

EXAMPLE2 = """\
objects: o1 o2 o3 o4 o5 o6 o7
agent1: [o7] [o1 o2 o3] [o4 o5 o6]
agent2: [o7] [o1] [o3] [o4 o5] [o2 o6]
"""


def ids(profile: Profile, *labels: str) -> frozenset[int]:
    return frozenset(profile.index(x) for x in labels)


def names(profile: Profile, objs) -> set[str]:
    return {profile.labels[o] for o in objs}


def assignment(profile: Profile, p1=(), p2=()) -> Assignment:
    return Assignment.of(profile.m, ids(profile, *p1), ids(profile, *p2))


def strict_profile(*rankings: str) -> Profile:
    """``strict_profile("abcd", "acbd")`` with single-letter labels in sorted order."""
    labels = sorted(set(rankings[0]))
    return Profile.from_groups(labels, [[x] for x in rankings[0]], [[x] for x in rankings[1]])


def random_assignment(m: int, rng: random.Random) -> Assignment:
    """Mostly balanced assignments, with some uniform destinations mixed in."""
    if rng.random() < 0.25:
        dest = [rng.randrange(3) for _ in range(m)]
        return Assignment.of(m, [o for o in range(m) if dest[o] == 1], [o for o in range(m) if dest[o] == 2])
    k = rng.randint(0, m // 2)
    chosen = rng.sample(range(m), 2 * k)
    return Assignment.of(m, chosen[:k], chosen[k:])


@pytest.fixture
def ex1() -> Profile:
    return parse_profile(EXAMPLE1)


@pytest.fixture
def ex2() -> Profile:
    return parse_profile(EXAMPLE2)


@st.composite
def weak_orders(draw, m: int) -> WeakOrder:
    ids_ = draw(st.lists(st.integers(0, m - 1), min_size=m, max_size=m))
    perm = draw(st.permutations(range(m)))
    buckets: dict[int, set[int]] = {}
    for o, c in zip(perm, ids_):
        buckets.setdefault(c, set()).add(o)
    return WeakOrder(tuple(frozenset(buckets[c]) for c in sorted(buckets)))


@st.composite
def profiles(draw, min_m: int = 1, max_m: int = 7) -> Profile:
    m = draw(st.integers(min_m, max_m))
    return Profile(tuple(f"o{i + 1}" for i in range(m)), draw(weak_orders(m)), draw(weak_orders(m)))


@st.composite
def profiles_with_assignment(draw, min_m: int = 1, max_m: int = 7):
    p = draw(profiles(min_m, max_m))
    dest = draw(st.lists(st.integers(0, 2), min_size=p.m, max_size=p.m))
    a = Assignment.of(p.m, [o for o, d in enumerate(dest) if d == 1], [o for o, d in enumerate(dest) if d == 2])
    return p, a


ACCEPTANCE_KEY = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[ACCEPTANCE_KEY] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPTANCE_KEY, [])
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for line in lines:
        terminalreporter.write_line(line)


@pytest.fixture
def acceptance(request):
    """Context-manager factory that records one PASS/FAIL line per criterion."""
    lines = request.config.stash[ACCEPTANCE_KEY]

    @contextmanager
    def criterion(number: int, title: str):
        t0 = time.perf_counter()
        try:
            yield
        except BaseException:
            lines.append(f"FAIL  AC{number}  {title}  ({time.perf_counter() - t0:.2f}s)")
            raise
        lines.append(f"PASS  AC{number}  {title}  ({time.perf_counter() - t0:.2f}s)")

    return criterion
