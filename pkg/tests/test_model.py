import numpy as np
import pytest

from twlga import model
from twlga.errors import InvalidArgumentError


class TestResourceUsage:
    def test_accepts_fractions(self):
        u = model.ResourceUsage(0.0, 0.5, 1.0, 0.25)
        assert u.mem == 0.5

    @pytest.mark.parametrize("bad", [-0.01, 1.01, float("nan"), float("inf")])
    def test_rejects_out_of_range(self, bad):
        with pytest.raises(InvalidArgumentError):
            model.ResourceUsage(bad, 0.0, 0.0, 0.0)

    def test_error_names_component(self):
        with pytest.raises(InvalidArgumentError, match="usage.disk"):
            model.ResourceUsage(0.0, 0.0, 2.0, 0.0)


class TestWorkloadWeights:
    def test_default_weights_sum_to_one(self):
        assert model.DEFAULT_WEIGHTS.as_array().sum() == pytest.approx(1.0)
        assert (model.DEFAULT_WEIGHTS.cpu, model.DEFAULT_WEIGHTS.mem,
                model.DEFAULT_WEIGHTS.disk, model.DEFAULT_WEIGHTS.net) \
            == (0.4, 0.3, 0.2, 0.1)

    def test_rejects_bad_sum(self):
        with pytest.raises(InvalidArgumentError, match="sum to 1"):
            model.WorkloadWeights(0.5, 0.5, 0.5, 0.5)

    def test_rejects_negative(self):
        with pytest.raises(InvalidArgumentError, match="nonnegative"):
            model.WorkloadWeights(-0.1, 0.5, 0.5, 0.1)

    def test_accepts_rounding_slack(self):
        model.WorkloadWeights(1 / 3, 1 / 3, 1 / 3, 0.0)


class TestNodeWorkload:
    def test_weighted_sum(self):
        usage = model.ResourceUsage(1.0, 0.5, 0.0, 1.0)
        got = model.node_workload(usage, model.DEFAULT_WEIGHTS)
        assert got == pytest.approx(0.4 * 1.0 + 0.3 * 0.5 + 0.1 * 1.0)

    def test_bounds(self):
        idle = model.ResourceUsage(0.0, 0.0, 0.0, 0.0)
        full = model.ResourceUsage(1.0, 1.0, 1.0, 1.0)
        assert model.node_workload(idle, model.DEFAULT_WEIGHTS) == 0.0
        assert model.node_workload(full, model.DEFAULT_WEIGHTS) \
            == pytest.approx(1.0)


class TestTaskSet:
    def test_rejects_zero_tasks(self):
        with pytest.raises(InvalidArgumentError):
            model.TaskSet(count=0)

    def test_sizes_must_match_count(self):
        with pytest.raises(InvalidArgumentError, match="length"):
            model.TaskSet(count=3, sizes=(1.0, 2.0))

    def test_sizes_must_be_positive(self):
        with pytest.raises(InvalidArgumentError, match="positive"):
            model.TaskSet(count=2, sizes=(1.0, 0.0))


class TestEtcMatrix:
    def test_shape_accessors(self):
        m = model.EtcMatrix(np.array([[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]]))
        assert (m.n_tasks, m.n_nodes) == (2, 3)
        assert m.time(1, 3) == 6.0  # task index 0-based, node id 1-based

    def test_entries_frozen(self):
        m = model.EtcMatrix(np.array([[1.0]]))
        with pytest.raises(ValueError):
            m.entries[0, 0] = 2.0

    @pytest.mark.parametrize("bad", [
        np.array([1.0, 2.0]),            # 1-D
        np.array([[0.0, 1.0]]),          # zero entry
        np.array([[-1.0, 1.0]]),         # negative entry
        np.array([[np.inf, 1.0]]),       # non-finite
    ])
    def test_rejects_invalid(self, bad):
        with pytest.raises(InvalidArgumentError):
            model.EtcMatrix(bad)


class TestInstance:
    def test_dimension_mismatch(self):
        with pytest.raises(InvalidArgumentError, match="task rows"):
            model.Instance(
                tasks=model.TaskSet(count=3),
                nodes=model.NodeSet(count=1,
                                    usage=(model.ResourceUsage(0, 0, 0, 0),)),
                etc=model.EtcMatrix(np.array([[1.0]])),
            )

    def test_node_workloads_order(self):
        inst = model.Instance(
            tasks=model.TaskSet(count=1),
            nodes=model.NodeSet(count=2, usage=(
                model.ResourceUsage(1.0, 1.0, 1.0, 1.0),
                model.ResourceUsage(0.0, 0.0, 0.0, 0.0),
            )),
            etc=model.EtcMatrix(np.array([[1.0, 1.0]])),
        )
        loads = inst.node_workloads()
        assert loads[0] == pytest.approx(1.0)
        assert loads[1] == 0.0


class TestGenerateInstance:
    def test_deterministic(self):
        a = model.generate_instance(5, 3, heterogeneity=4.0, seed=42)
        b = model.generate_instance(5, 3, heterogeneity=4.0, seed=42)
        assert np.array_equal(a.etc.entries, b.etc.entries)
        assert a.nodes.usage == b.nodes.usage

    def test_seed_changes_output(self):
        a = model.generate_instance(5, 3, seed=1)
        b = model.generate_instance(5, 3, seed=2)
        assert not np.array_equal(a.etc.entries, b.etc.entries)

    def test_entry_ranges(self):
        inst = model.generate_instance(50, 4, heterogeneity=3.0, seed=0)
        assert inst.etc.entries.min() >= 1.0
        assert inst.etc.entries.max() <= 300.0
        for u in inst.nodes.usage:
            for v in u.as_array():
                assert 0.0 <= v <= 1.0

    def test_homogeneous_when_heterogeneity_one(self):
        inst = model.generate_instance(4, 3, heterogeneity=1.0, seed=0)
        # speed factor is exactly 1 for every node
        col0 = inst.etc.entries[:, 0]
        for r in range(1, 3):
            assert np.array_equal(col0, inst.etc.entries[:, r])

    def test_rejects_bad_dimensions(self):
        with pytest.raises(InvalidArgumentError):
            model.generate_instance(0, 3)
        with pytest.raises(InvalidArgumentError):
            model.generate_instance(3, 3, heterogeneity=0.5)


class TestInstanceSerialization:
    def test_round_trip_exact(self):
        inst = model.generate_instance(4, 2, heterogeneity=2.0, seed=9)
        doc = model.instance_to_dict(inst)
        back = model.instance_from_dict(doc)
        assert np.array_equal(back.etc.entries, inst.etc.entries)
        assert back.nodes.usage == inst.nodes.usage
        assert back.weights == inst.weights
        assert back.tasks == inst.tasks

    def test_sizes_round_trip(self):
        inst = model.Instance(
            tasks=model.TaskSet(count=2, sizes=(10.0, 20.0)),
            nodes=model.NodeSet(count=1,
                                usage=(model.ResourceUsage(0, 0, 0, 0),)),
            etc=model.EtcMatrix(np.array([[1.0], [2.0]])),
        )
        back = model.instance_from_dict(model.instance_to_dict(inst))
        assert back.tasks.sizes == (10.0, 20.0)

    def test_missing_field_rejected(self):
        with pytest.raises(InvalidArgumentError, match="missing field"):
            model.instance_from_dict({"tasks": {"count": 1}})
