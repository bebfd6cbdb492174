import numpy as np
import pytest
from hypothesis import given, settings

from galfair.gal import run_gal
from galfair.oracle import (
    BudgetExceeded,
    OracleBudget,
    _ef_rows,
    _table,
    all_profiles,
    balanced_count,
    enumerate_assignments,
    find_ef_dominator,
    find_ef_extension,
    find_local_improvement,
    oracle_complete_ef_exists,
    oracle_is_lpo,
    oracle_is_maximal_ef,
    oracle_no_ef_dominator,
    ordered_partitions,
)
from galfair.prefs import parse_profile
from galfair.sd import Assignment, is_ef, is_lpo, pareto_dominates

from .conftest import assignment, profiles_with_assignment, strict_profile


class TestEnumeration:
    def test_one_object(self):
        got = list(enumerate_assignments(1))
        assert got == [Assignment.of(1), Assignment.of(1, [0]), Assignment.of(1, [], [0])]

    def test_three_objects(self):
        assert sum(1 for _ in enumerate_assignments(3)) == 27

    def test_two_objects_balanced(self):
        got = set(enumerate_assignments(2, balanced_only=True))
        assert got == {Assignment.of(2), Assignment.of(2, [0], [1]), Assignment.of(2, [1], [0])}

    @pytest.mark.parametrize("m", range(0, 8))
    def test_balanced_formula_matches_enumeration(self, m):
        direct = sum(1 for a in enumerate_assignments(m) if len(a.p1) == len(a.p2))
        assert direct == balanced_count(m)
        assert sum(1 for _ in enumerate_assignments(m, balanced_only=True)) == direct

    def test_stream_matches_table(self):
        rows = _table(4)
        for row, a in zip(rows, enumerate_assignments(4)):
            assert a.p1 == set(np.flatnonzero(row == 1)) and a.p2 == set(np.flatnonzero(row == 2))

    def test_deterministic(self):
        assert list(enumerate_assignments(4, True)) == list(enumerate_assignments(4, True))

    def test_explicit_objects(self):
        got = list(enumerate_assignments([2, 5], m=6))
        assert len(got) == 9 and all(a.m == 6 for a in got)
        assert all(a.allocated <= {2, 5} for a in got)

    def test_budget(self):
        with pytest.raises(BudgetExceeded):
            next(enumerate_assignments(13))
        with pytest.raises(BudgetExceeded):
            next(enumerate_assignments(5, budget=OracleBudget(max_enumerations=100)))


class TestVectorizedEfAgreesWithStream:
    def test_example1(self, ex1):
        rows = _table(ex1.m)
        flags = _ef_rows(ex1, rows)
        assert flags.tolist() == [is_ef(ex1, a) for a in enumerate_assignments(ex1.m)]


class TestCompleteEf:
    def test_example1(self, ex1):
        assert oracle_complete_ef_exists(ex1)

    def test_odd(self, ex2):
        assert not oracle_complete_ef_exists(ex2)

    def test_identical_strict_pair(self):
        assert not oracle_complete_ef_exists(strict_profile("ab", "ab"))

    def test_budget(self):
        group = "[" + " ".join(f"x{i}" for i in range(13)) + "]"
        p = parse_profile(f"agent1: {group}\nagent2: {group}\n")
        with pytest.raises(BudgetExceeded):
            oracle_complete_ef_exists(p)


class TestMaximal:
    def test_example2_gal_output(self, ex2):
        a = run_gal(ex2).assignment
        assert oracle_is_maximal_ef(ex2, a)
        # o7 is the only free object; none of its three placements besides the pile is EF
        o7 = ex2.index("o7")
        for extra in ([o7], []), ([], [o7]):
            q = Assignment.of(ex2.m, a.p1 | set(extra[0]), a.p2 | set(extra[1]))
            assert not is_ef(ex2, q)

    def test_complete(self, ex1):
        assert oracle_is_maximal_ef(ex1, run_gal(ex1).assignment)

    def test_empty_is_extendable(self, ex1):
        ext = find_ef_extension(ex1, Assignment.of(ex1.m))
        assert ext is not None and is_ef(ex1, ext) and ext.allocated
        assert is_ef(ex1, assignment(ex1, ["o1"], ["o4"]))
        assert not oracle_is_maximal_ef(ex1, Assignment.of(ex1.m))

    def test_requires_ef(self, ex1):
        with pytest.raises(ValueError):
            oracle_is_maximal_ef(ex1, assignment(ex1, ["o1"], []))


class TestNoEfDominator:
    def test_example1(self, ex1):
        assert oracle_no_ef_dominator(ex1, run_gal(ex1).assignment)

    def test_empty_dominated(self, ex1):
        q = find_ef_dominator(ex1, Assignment.of(ex1.m))
        assert q is not None and is_ef(ex1, q) and pareto_dominates(ex1, q, Assignment.of(ex1.m))
        assert not oracle_no_ef_dominator(ex1, Assignment.of(ex1.m))

    def test_single_object(self):
        p = parse_profile("agent1: [a]\nagent2: [a]\n")
        assert oracle_no_ef_dominator(p, run_gal(p).assignment)


class TestOracleLpo:
    def test_example2_swapped_round4(self, ex2):
        a = assignment(ex2, ["o2", "o3", "o4"], ["o1", "o5", "o6"])
        q = find_local_improvement(ex2, a)
        assert q is not None and pareto_dominates(ex2, q, a) and q.allocated == a.allocated
        swapped = assignment(ex2, ["o2", "o3", "o6"], ["o1", "o5", "o4"])
        assert pareto_dominates(ex2, swapped, a)

    def test_example1(self, ex1):
        assert oracle_is_lpo(ex1, run_gal(ex1).assignment)

    def test_empty(self, ex1):
        assert oracle_is_lpo(ex1, Assignment.of(ex1.m))

    @settings(max_examples=300)
    @given(profiles_with_assignment(max_m=8))
    def test_agrees_with_pair_condition(self, pa):
        p, a = pa
        assert is_lpo(p, a) == oracle_is_lpo(p, a)


class TestProfileSpace:
    @pytest.mark.parametrize("m,fubini", [(1, 1), (2, 3), (3, 13), (4, 75)])
    def test_fubini(self, m, fubini):
        parts = list(ordered_partitions(m))
        assert len(parts) == fubini == len(set(parts))

    def test_profile_count(self):
        assert sum(1 for _ in all_profiles(4)) == 75**2
        assert sum(1 for _ in all_profiles(3, max_classes=2)) == 7**2
