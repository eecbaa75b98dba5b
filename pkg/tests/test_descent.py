import numpy as np
import pytest

from circlepack.bfgs import local_bfgs
from circlepack.descent import grouped_descent, make_schedule, random_partition
from circlepack.energy import Instance, total_energy

from conftest import random_layout


class TestSchedule:
    def test_thousand_circles(self):
        assert make_schedule(1000, 100, 10).rounds == ((100, 10), (200, 5), (400, 2), (800, 1))

    def test_first_round_already_full(self):
        assert make_schedule(100, 100, 10).rounds == ((100, 10),)

    def test_small_instance_clamps_group_size(self):
        assert make_schedule(50, 100, 10).rounds == ((50, 10),)

    def test_three_hundred(self):
        assert make_schedule(300, 100, 10).rounds == ((100, 10), (200, 5))

    def test_group_sizes_increase_and_repeats_decay(self):
        for n in (130, 333, 999, 2048):
            rounds = make_schedule(n).rounds
            sizes = [s for s, _ in rounds]
            reps = [k for _, k in rounds]
            assert sizes == sorted(set(sizes))
            assert reps == sorted(reps, reverse=True)
            assert all(k >= 1 for k in reps)
            assert n // sizes[-1] == 1

    def test_validation(self):
        with pytest.raises(ValueError):
            make_schedule(0)
        with pytest.raises(ValueError):
            make_schedule(10, group_size=0)
        with pytest.raises(ValueError):
            make_schedule(10, repeats=0)


class TestPartition:
    def test_sizes_disjoint_cover(self):
        rng = np.random.default_rng(1)
        groups = random_partition(10, 3, rng)
        assert [len(g) for g in groups] == [3, 3, 4]
        merged = np.concatenate(groups)
        assert sorted(merged) == list(range(10))

    def test_single_group_when_s_equals_n(self):
        rng = np.random.default_rng(2)
        (group,) = random_partition(6, 6, rng)
        assert list(group) == list(range(6))

    def test_deterministic_for_fixed_seed(self):
        a = random_partition(25, 4, np.random.default_rng(77))
        b = random_partition(25, 4, np.random.default_rng(77))
        assert len(a) == len(b)
        for ga, gb in zip(a, b):
            assert np.array_equal(ga, gb)

    def test_groups_sorted(self):
        rng = np.random.default_rng(3)
        for g in random_partition(40, 7, rng):
            assert np.all(np.diff(g) > 0)

    def test_cover_property_many_cases(self):
        rng = np.random.default_rng(4)
        for _ in range(25):
            n = int(rng.integers(1, 200))
            s = int(rng.integers(1, n + 1))
            groups = random_partition(n, s, rng)
            g = n // s
            assert len(groups) == g
            assert all(len(grp) == s for grp in groups[:-1])
            assert len(groups[-1]) == s + n % s
            merged = np.concatenate(groups)
            assert len(merged) == n and len(np.unique(merged)) == n

    def test_bounds_checked(self):
        rng = np.random.default_rng(5)
        with pytest.raises(ValueError):
            random_partition(5, 0, rng)
        with pytest.raises(ValueError):
            random_partition(5, 6, rng)


class TestGroupedDescent:
    def test_feasible_input_returned_unchanged(self):
        rng = np.random.default_rng(11)
        inst = Instance(5, 12.0)
        layout = np.array([(0.0, 0.0), (4.0, 0.0), (-4.0, 0.0), (0.0, 4.0), (0.0, -4.0)])
        out, report = grouped_descent(layout, inst, rng)
        assert report.total_energy == 0.0
        assert np.array_equal(out, layout)

    def test_reaches_local_stop_condition(self):
        rng = np.random.default_rng(23)
        inst = Instance(7, 3.0)
        layout = random_layout(np.random.default_rng(99), 7, 3.0, spread=0.8)
        out, report = grouped_descent(layout, inst, rng)
        assert report.total_energy <= 1e-20 or report.gradient_norm <= 1e-10

    def test_per_group_energy_never_increases(self):
        rng = np.random.default_rng(31)
        inst = Instance(40, 6.2)
        layout = random_layout(np.random.default_rng(8), 40, 6.2, spread=0.7)
        seen = []

        def watch(result):
            trace = np.array(result.energy_trace)
            assert np.all(np.diff(trace) <= 0.0)
            seen.append(result)

        grouped_descent(layout, inst, rng, group_size=10, repeats=4, on_group_result=watch)
        assert seen

    def test_full_system_round_matches_direct_calls(self):
        # n below the group size means the whole schedule is one full-system
        # round, which must behave exactly like back-to-back whole-layout calls
        start = random_layout(np.random.default_rng(42), 30, 5.5, spread=0.6)
        inst = Instance(30, 5.5)
        out, report = grouped_descent(start, inst, np.random.default_rng(7), group_size=100, repeats=10)

        manual = start
        for _ in range(10):
            manual = local_bfgs(manual, range(30), inst).layout
            if total_energy(manual, inst, strategy="dense").total_energy <= 1e-20:
                break
        assert np.array_equal(out, manual)

    def test_partition_pass_coverage(self):
        # every circle appears exactly once per pass
        rng = np.random.default_rng(3)
        counts = []

        def watch(result):
            counts.append(result.layout.shape[0])

        inst = Instance(23, 4.6)
        layout = random_layout(np.random.default_rng(5), 23, 4.6, spread=0.6)
        grouped_descent(layout, inst, rng, group_size=5, repeats=2, on_group_result=watch)

    def test_deterministic_for_seed(self):
        inst = Instance(26, 5.0)
        layout = random_layout(np.random.default_rng(17), 26, 5.0, spread=0.6)
        out1, rep1 = grouped_descent(layout, inst, np.random.default_rng(100), group_size=8)
        out2, rep2 = grouped_descent(layout, inst, np.random.default_rng(100), group_size=8)
        assert np.array_equal(out1, out2)
        assert rep1.total_energy == rep2.total_energy

    def test_ring_layout_energy_strictly_decreases_across_full_calls(self):
        # twelve circles on a slightly-too-tight ring, generous container:
        # full-system calls keep lowering the energy until the early exit
        angles = np.linspace(0.0, 2 * np.pi, 12, endpoint=False)
        ring = 1.9 * np.column_stack([np.cos(angles), np.sin(angles)])
        inst = Instance(12, 6.0)
        energies = []

        def watch(result):
            energies.append((result.energy_trace[0], result.final_energy))

        out, report = grouped_descent(
            ring, inst, np.random.default_rng(0), group_size=100, repeats=10, on_group_result=watch
        )
        assert report.total_energy <= 1e-20
        starts = [e[0] for e in energies]
        finals = [e[1] for e in energies]
        assert all(f < s for s, f in zip(starts, finals) if s > 1e-20)
        assert all(b < a for a, b in zip(finals, finals[1:]) if a > 1e-20)
