import numpy as np
import pytest

from twlga import model, schedulers
from twlga.errors import SearchSpaceTooLargeError

from conftest import build_instance, enumerate_optimum, naive_makespan


class TestFifo:
    def test_example(self, two_by_two):
        # task 0 -> node 1 (both free, lowest id); node loads become (2, 0);
        # task 1 -> node 2 (earliest free)
        genes = schedulers.schedule_fifo(two_by_two)
        assert genes.tolist() == [1, 2]
        assert naive_makespan(genes, two_by_two.etc.entries) == 2.0

    def test_tie_breaks_lowest_node(self):
        inst = build_instance([[1.0, 1.0], [1.0, 1.0]])
        genes = schedulers.schedule_fifo(inst)
        assert genes[0] == 1

    def test_balances_load(self):
        inst = build_instance([[10.0, 10.0]] * 4)
        genes = schedulers.schedule_fifo(inst)
        assert sorted(genes.tolist()) == [1, 1, 2, 2]


class TestRoundRobin:
    def test_cycles_nodes(self):
        inst = model.generate_instance(7, 3, seed=0)
        genes = schedulers.schedule_round_robin(inst)
        assert genes.tolist() == [1, 2, 3, 1, 2, 3, 1]


class TestRandom:
    def test_deterministic_per_seed(self):
        inst = model.generate_instance(20, 4, seed=0)
        a = schedulers.schedule_random(inst, seed=5)
        b = schedulers.schedule_random(inst, seed=5)
        c = schedulers.schedule_random(inst, seed=6)
        assert np.array_equal(a, b)
        assert not np.array_equal(a, c)

    def test_valid_genes(self):
        inst = model.generate_instance(50, 3, seed=0)
        genes = schedulers.schedule_random(inst, seed=1)
        assert genes.min() >= 1 and genes.max() <= 3


class TestBruteForce:
    def test_matches_enumeration_oracle(self):
        rng = np.random.default_rng(11)
        for _ in range(25):
            n_tasks = int(rng.integers(1, 7))
            n_nodes = int(rng.integers(1, 4))
            inst = model.generate_instance(n_tasks, n_nodes,
                                           heterogeneity=6.0,
                                           seed=int(rng.integers(1 << 30)))
            genes, span = schedulers.brute_force_optimum(inst)
            want_genes, want_span = enumerate_optimum(inst.etc.entries)
            assert span == want_span  # exact, pruning preserves float sums
            assert tuple(genes.tolist()) == want_genes

    def test_returns_lexicographically_smallest(self):
        # both assignments [1, 2] and [2, 1] reach makespan 1
        inst = build_instance([[1.0, 1.0], [1.0, 1.0]])
        genes, span = schedulers.brute_force_optimum(inst)
        assert genes.tolist() == [1, 2]
        assert span == 1.0

    def test_single_node(self):
        inst = build_instance([[2.0], [3.0]])
        genes, span = schedulers.brute_force_optimum(inst)
        assert genes.tolist() == [1, 1]
        assert span == 5.0

    def test_guard_raises(self):
        inst = model.generate_instance(30, 3, seed=0)
        with pytest.raises(SearchSpaceTooLargeError, match="3\\^30"):
            schedulers.brute_force_optimum(inst)

    def test_custom_limit(self):
        inst = model.generate_instance(4, 2, seed=0)
        with pytest.raises(SearchSpaceTooLargeError):
            schedulers.brute_force_optimum(inst, limit=15)
        genes, _ = schedulers.brute_force_optimum(inst, limit=16)
        assert genes.shape == (4,)
