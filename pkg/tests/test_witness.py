import random

import pytest

from partlab.errors import DomainError, ThresholdError
from partlab.partitions import (
    SetPartition,
    enumerate_partitions,
    is_coarsening,
    meet_refine,
)
from partlab.prefixes import (
    PartitionPrefix,
    approx_r,
    induced_coarsening_h,
    mu_sequence,
)
from partlab.witness import (
    Adversarial,
    EMapTable,
    Exhaustive,
    Sampled,
    bad_pairs,
    find_witness,
    fusion_conditions_hold,
    fusion_step,
    min_threshold_comb,
    partition_space,
    verify_comb,
    witness_is_valid,
)


class TestEMapTable:
    def test_identity(self):
        e = EMapTable.identity(3)
        for t in enumerate_partitions(3, 0):
            assert e.apply(t) == t

    def test_constant(self):
        bottom = SetPartition((0, 0, 0))
        e = EMapTable.constant(3, bottom)
        for t in enumerate_partitions(3, 0):
            assert e.apply(t) == bottom

    def test_from_assignments(self):
        e = EMapTable.from_assignments(2, {(0, 0): (0, 1)})
        assert e.apply(SetPartition((0, 0))) == SetPartition((0, 1))
        assert e.apply(SetPartition((0, 1))) == SetPartition((0, 1))

    def test_value_range_checked(self):
        with pytest.raises(DomainError):
            EMapTable(2, (0, 5))


class TestBadPairs:
    def test_identity_has_none(self):
        for (k, m, N) in [(2, 2, 1), (2, 0, 2), (3, 2, 1)]:
            rep = bad_pairs(EMapTable.identity(k * N), k, m, N)
            assert rep.bad_pair_count == 0

    def test_single_bad_pair(self):
        e = EMapTable.from_assignments(2, {(0, 0): (0, 1)})
        rep = bad_pairs(e, 2, 2, 1)
        assert rep.bad_pair_count == 1
        assert rep.candidate_count == 1

    def test_constant_bottom_has_none(self):
        e = EMapTable.constant(4, SetPartition((0, 0, 0, 0)))
        rep = bad_pairs(e, 2, 2, 2)
        assert rep.bad_pair_count == 0

    def test_meet_characterization(self):
        # (s, t) is bad iff the common refinement of t and e(t) coarsens s,
        # for every t that is bad for at least one candidate
        rng = random.Random(5)
        n = 4
        space = [p.rgs for p in enumerate_partitions(n, 0)]
        for _ in range(20):
            e = EMapTable(n, tuple(rng.randrange(len(space)) for _ in space))
            for s in enumerate_partitions(n, 2):
                for t in enumerate_partitions(n, 0):
                    if not is_coarsening(t, s):
                        continue
                    et = e.apply(t)
                    bad = is_coarsening(et, s) and not is_coarsening(et, t)
                    if bad:
                        assert is_coarsening(meet_refine(t, et), s)


class TestFindWitness:
    def test_identity(self):
        assert find_witness(EMapTable.identity(2), 2, 2) == SetPartition((0, 1))

    def test_absent_on_forced_failure(self):
        e = EMapTable.from_assignments(2, {(0, 0): (0, 1), (0, 1): (0, 1)})
        assert find_witness(e, 2, 2) is None

    def test_constant_bottom(self):
        e = EMapTable.constant(3, SetPartition((0, 0, 0)))
        got = find_witness(e, 2, 3)
        assert got == SetPartition((0, 1, 0))  # lex-least element of the separated space

    def test_returned_witness_validates(self):
        rng = random.Random(9)
        size = len(partition_space(4))
        for _ in range(30):
            e = EMapTable(4, tuple(rng.randrange(size) for _ in range(size)))
            w = find_witness(e, 2, 4)
            if w is not None:
                assert witness_is_valid(e, w, 2)


class TestVerifyComb:
    def test_tiny_exhaustive_counterexample(self):
        rep = verify_comb(2, 2, 1, Exhaustive())
        assert not rep.details["all_witnessed"]
        shapes = {frozenset(shape) for shape in rep.details["counterexample_shapes"]}
        # the unique failing shape sends the one-block partition to the discrete one
        assert shapes == {frozenset({((0, 0), (0, 1))})}

    def test_single_point_space_all_pass(self):
        rep = verify_comb(1, 0, 1, Exhaustive())
        assert rep.details["all_witnessed"]

    def test_sampled_campaign_passes(self):
        rep = verify_comb(3, 2, 2, Sampled(100, seed=7))
        assert rep.details["all_witnessed"]
        assert rep.details["pigeonhole_ok"]

    def test_sampled_chunking_is_invisible(self):
        whole = verify_comb(2, 2, 2, Sampled(40, seed=3))
        first = verify_comb(2, 2, 2, Sampled(25, seed=3))
        rest = verify_comb(2, 2, 2, Sampled(15, seed=3, start=25))
        assert (
            whole.details["failures"]
            == first.details["failures"] + rest.details["failures"]
        )
        assert whole.ratio == max(first.ratio, rest.ratio)

    def test_deterministic_given_seed(self):
        a = verify_comb(2, 2, 2, Sampled(30, seed=11))
        b = verify_comb(2, 2, 2, Sampled(30, seed=11))
        assert a.to_json_dict()["details"] == b.to_json_dict()["details"]
        assert a.ratio == b.ratio

    def test_adversarial_first_map_is_deterministic_greedy(self):
        a = verify_comb(2, 2, 2, Adversarial(1, seed=0))
        b = verify_comb(2, 2, 2, Adversarial(1, seed=99))
        assert a.bad_pair_count == b.bad_pair_count
        assert a.ratio == b.ratio


class TestMinThreshold:
    def test_single_block_space(self):
        found, _ = min_threshold_comb(1, 0, Sampled(20, seed=1), 3)
        assert found == 1

    def test_separated_pair_needs_two(self):
        found, reports = min_threshold_comb(2, 2, Sampled(200, seed=1), 4)
        assert found == 2
        assert all(r.details["empirical"] for r in reports)


def random_f_table(B, mprime, seed):
    rng = random.Random(seed)
    space = partition_space(mprime)
    table = {}
    for t in space:
        key = induced_coarsening_h(SetPartition(t), B, mprime)
        value = induced_coarsening_h(SetPartition(rng.choice(space)), B, mprime)
        table[key.to_text()] = value
    return table


class TestFusionStep:
    def test_identity_table(self):
        B = PartitionPrefix.discrete(7)
        mprime = 3
        table = {}
        for t in enumerate_partitions(mprime, 0):
            h = induced_coarsening_h(t, B, mprime)
            table[h.to_text()] = h
        B_new = fusion_step(B, table, 0, 0, mprime)
        # witness space is Q^1(3); its lex-least element is the single block
        assert B_new == induced_coarsening_h(SetPartition((0, 0, 0)), B, mprime)

    def test_partial_table_is_an_error(self):
        B = PartitionPrefix.discrete(6)
        with pytest.raises(DomainError):
            fusion_step(B, {}, 0, 0, 3)

    def test_approximation_preserved(self):
        for seed in range(10):
            B = PartitionPrefix.discrete(8)
            table = random_f_table(B, 3, seed)
            B_new = fusion_step(B, table, 0, 1, 3)
            assert approx_r(B_new, 1) == approx_r(B, 1)

    def test_conditions_hold_on_random_tables(self):
        for seed in range(25):
            B = PartitionPrefix.discrete(8)
            table = random_f_table(B, 4, seed)
            try:
                B_new = fusion_step(B, table, 0, 1, 4)
            except ThresholdError:
                continue
            cond1, cond2 = fusion_conditions_hold(B, B_new, table, 0, 1)
            assert cond1 and cond2

    def test_embedded_counterexample_raises_threshold_error(self):
        # the forced failure at mprime = n0 + ell + 1 = 2 has no witness
        B = PartitionPrefix.discrete(5)
        mprime = 2
        bad = {(0, 0): (0, 1), (0, 1): (0, 1)}
        table = {}
        for t in enumerate_partitions(mprime, 0):
            h = induced_coarsening_h(t, B, mprime)
            target = SetPartition(bad[t.rgs])
            table[h.to_text()] = induced_coarsening_h(target, B, mprime)
        with pytest.raises(ThresholdError):
            fusion_step(B, table, 0, 1, mprime)

    def test_new_prefix_coarsens_old(self):
        B = PartitionPrefix((0, 1, 2, 0, 3, 4, 5, 1))
        table = random_f_table(B, 3, seed=2)
        B_new = fusion_step(B, table, 0, 0, 3)
        assert is_coarsening(B_new.as_partition(), B.as_partition())
        assert len(mu_sequence(B_new)) <= len(mu_sequence(B))
