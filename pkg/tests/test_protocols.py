import math

import numpy as np
import pytest

from qcf.errors import DomainError
from qcf.measure import Branch, enumerate_branches
from qcf.protocols import (
    ComputerModel,
    OutcomeClass,
    SwitchRotation,
    ZenoConfig,
    basic_counterfactual,
    choose_stage_count,
    classify_history,
    computation_ran,
    mach_zehnder,
    run_protocol_exact,
    run_protocol_sampled,
    zeno_counterfactual,
    zeno_keep_probability,
)
from qcf.state import zero_state


def keep_formula(stages: int) -> float:
    return math.cos(math.pi / (2 * stages)) ** (2 * stages)


def distribution(program):
    return {
        tuple(b.record.items()): b.probability for b in enumerate_branches(program).branches
    }


class TestMachZehnder:
    def test_no_detector_always_f(self):
        dist = distribution(mach_zehnder(detector_present=False))
        assert dist[(("photon", 0),)] == pytest.approx(1.0, abs=1e-12)
        assert dist.get((("photon", 1),), 0.0) == pytest.approx(0.0, abs=1e-12)

    def test_detector_gives_four_quarters(self):
        dist = distribution(mach_zehnder(detector_present=True))
        assert len(dist) == 4
        for p in dist.values():
            assert p == pytest.approx(0.25, abs=1e-12)

    def test_detector_marginal_is_even(self):
        dist = distribution(mach_zehnder(detector_present=True))
        p_f = sum(p for record, p in dist.items() if dict(record)["photon"] == 0)
        assert p_f == pytest.approx(0.5, abs=1e-12)

    def test_beamsplitter_twice_is_identity(self):
        from qcf.state import hadamard

        twice = hadamard().entries @ hadamard().entries
        phase = twice[0, 0] / abs(twice[0, 0])
        assert np.abs(twice / phase - np.eye(2)).max() < 1e-12


class TestBasicScheme:
    def test_answer_zero_is_deterministic(self):
        dist = distribution(basic_counterfactual(ComputerModel(0)))
        assert dist == {(("switch", 0), ("output", 0)): pytest.approx(1.0, abs=1e-12)}

    def test_answer_one_gives_four_quarters(self):
        dist = distribution(basic_counterfactual(ComputerModel(1)))
        assert len(dist) == 4
        for p in dist.values():
            assert p == pytest.approx(0.25, abs=1e-12)

    def test_answer_one_switch_on_probability_half(self):
        dist = distribution(basic_counterfactual(ComputerModel(1)))
        p_on = sum(p for record, p in dist.items() if dict(record)["switch"] == 1)
        assert p_on == pytest.approx(0.5, abs=1e-12)

    def test_answer_zero_never_shows_on(self):
        dist = distribution(basic_counterfactual(ComputerModel(0)))
        p_on = sum(p for record, p in dist.items() if dict(record)["switch"] == 1)
        assert p_on < 1e-15

    def test_invalid_answer_rejected(self):
        with pytest.raises(DomainError):
            ComputerModel(2)


class TestSwitchRotation:
    def test_action_on_off_state(self):
        alpha = 0.3
        gate = SwitchRotation(alpha).gate()
        out = gate.entries @ np.array([1.0, 0.0])
        assert out == pytest.approx([math.cos(alpha), math.sin(alpha)])

    def test_action_on_on_state(self):
        alpha = 0.3
        gate = SwitchRotation(alpha).gate()
        out = gate.entries @ np.array([0.0, 1.0])
        assert out == pytest.approx([-math.sin(alpha), math.cos(alpha)])

    def test_full_quarter_turn(self):
        gate = SwitchRotation(math.pi / 2).gate()
        out = gate.entries @ np.array([1.0, 0.0])
        assert abs(out[1] - 1.0) < 1e-12


class TestZenoConfig:
    def test_angle_times_stages_is_quarter_turn(self):
        for stages in range(1, 65):
            config = ZenoConfig(stages)
            assert abs(config.alpha * stages - math.pi / 2) < 1e-15

    def test_invalid_stage_count_rejected(self):
        with pytest.raises(DomainError):
            ZenoConfig(0)

    def test_from_failure_probability(self):
        config = ZenoConfig.for_failure_probability(0.1)
        assert config.stages == 24
        assert config.epsilon == 0.1


class TestZenoScheme:
    def test_answer_zero_single_certain_branch(self):
        dist = enumerate_branches(zeno_counterfactual(ComputerModel(0), ZenoConfig(10)))
        assert len(dist.branches) == 1
        branch = dist.branches[0]
        assert branch.probability == pytest.approx(1.0, abs=1e-12)
        assert not branch.discarded
        assert branch.record["switch"] == 1
        assert all(branch.record[f"out_{i}"] == 0 for i in range(1, 11))

    def test_answer_one_keep_probability_matches_formula(self):
        dist = enumerate_branches(zeno_counterfactual(ComputerModel(1), ZenoConfig(10)))
        assert dist.kept_probability() == pytest.approx(0.7805460697811408, abs=1e-12)

    def test_single_stage_never_kept(self):
        dist = enumerate_branches(zeno_counterfactual(ComputerModel(1), ZenoConfig(1)))
        assert dist.kept_probability() == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("stages", [2, 3, 7, 16])
    def test_kept_branches_certify_answer_one(self, stages):
        dist = enumerate_branches(zeno_counterfactual(ComputerModel(1), ZenoConfig(stages)))
        kept = dist.kept()
        assert len(kept) == 1
        assert kept[0].record["switch"] == 0
        assert all(bit == 0 for label, bit in kept[0].record.items() if label.startswith("out_"))
        assert kept[0].probability == pytest.approx(keep_formula(stages), abs=1e-12)


class TestKeepProbability:
    def test_single_stage_is_zero(self):
        assert zeno_keep_probability(1) == pytest.approx(0.0, abs=1e-12)

    def test_ten_stages(self):
        assert zeno_keep_probability(10) == pytest.approx(0.7805460697811408, abs=1e-15)

    def test_thousand_stages_nearly_one(self):
        keep = zeno_keep_probability(1000)
        assert keep >= 0.9975
        # small-angle estimate: failure ~ pi^2 / 4N
        assert 1.0 - keep == pytest.approx(math.pi**2 / 4000, rel=0.01)

    def test_agrees_with_enumeration(self):
        for stages in (1, 2, 5, 9, 17, 33):
            dist = enumerate_branches(zeno_counterfactual(ComputerModel(1), ZenoConfig(stages)))
            assert dist.kept_probability() == pytest.approx(
                zeno_keep_probability(stages), abs=1e-12
            )

    def test_monotone_in_stage_count(self):
        stages = np.arange(1, 10_001)
        keep = np.cos(np.pi / (2 * stages)) ** (2 * stages)
        assert np.all(np.diff(keep) > 0)

    def test_invalid_stage_count_rejected(self):
        with pytest.raises(DomainError):
            zeno_keep_probability(0)


class TestChooseStageCount:
    def test_ten_percent_failure_needs_24_stages(self):
        assert choose_stage_count(0.1) == 24

    def test_matches_linear_scan_oracle(self):
        for epsilon in (0.5, 0.25, 0.1, 0.05, 0.02):
            n = 1
            while zeno_keep_probability(n) < 1 - epsilon:
                n += 1
            assert choose_stage_count(epsilon) == n

    def test_nearly_certain_failure_allowed(self):
        # keep(1) ~ 0 never reaches 1e-6, keep(2) = 0.25 does
        assert choose_stage_count(0.999999) == 2

    @pytest.mark.parametrize("epsilon", [0.0, 1.0, -0.5, 2.0])
    def test_out_of_range_epsilon_rejected(self, epsilon):
        with pytest.raises(DomainError):
            choose_stage_count(epsilon)


class TestClassification:
    def _branch(self, record, discarded=False):
        return Branch(1.0, record, zero_state(1), discarded=discarded)

    def test_basic_on_with_clean_output_is_free(self):
        branch = self._branch({"switch": 1, "output": 0})
        assert classify_history(branch, "basic", 1) is OutcomeClass.LEARNED_R1_FREE

    def test_basic_off_with_clean_output_is_inconclusive(self):
        branch = self._branch({"switch": 0, "output": 0})
        assert classify_history(branch, "basic", 1) is OutcomeClass.INCONCLUSIVE

    def test_basic_output_one_means_it_ran(self):
        for switch in (0, 1):
            branch = self._branch({"switch": switch, "output": 1})
            assert classify_history(branch, "basic", 1) is OutcomeClass.LEARNED_R1_COMPUTED

    def test_zeno_kept_off_is_free(self):
        branch = self._branch({"out_1": 0, "out_2": 0, "switch": 0})
        assert classify_history(branch, "zeno", 1) is OutcomeClass.LEARNED_R1_FREE

    def test_zeno_kept_on_learned_zero_computed(self):
        branch = self._branch({"out_1": 0, "out_2": 0, "switch": 1})
        assert classify_history(branch, "zeno", 0) is OutcomeClass.LEARNED_R0_COMPUTED

    def test_discarded_branch(self):
        branch = self._branch({"out_1": 1}, discarded=True)
        assert classify_history(branch, "zeno", 1) is OutcomeClass.DISCARDED

    def test_interferometer_free_detection(self):
        branch = self._branch({"photon": 1, "detector": 0})
        assert classify_history(branch, "mz", 1) is OutcomeClass.LEARNED_R1_FREE

    def test_interferometer_detector_fired(self):
        branch = self._branch({"photon": 0, "detector": 1})
        assert classify_history(branch, "mz", 1) is OutcomeClass.LEARNED_R1_COMPUTED

    def test_unknown_protocol_rejected(self):
        with pytest.raises(DomainError):
            classify_history(self._branch({}), "teleport", 0)

    @pytest.mark.parametrize(
        "protocol,kwargs",
        [
            ("basic", {"r": 0}),
            ("zeno", {"r": 0, "config": ZenoConfig(8)}),
        ],
    )
    def test_soundness_answer_zero_never_certified_free(self, protocol, kwargs):
        report = run_protocol_exact(protocol, **kwargs)
        for outcome in report.outcomes:
            assert outcome.outcome_class is not OutcomeClass.LEARNED_R1_FREE

    def test_computation_ran_criterion(self):
        assert computation_ran(self._branch({"switch": 1, "output": 1}), "basic")
        assert not computation_ran(self._branch({"switch": 1, "output": 0}), "basic")
        assert computation_ran(self._branch({"out_1": 0, "switch": 1}), "zeno")
        assert not computation_ran(self._branch({"out_1": 0, "switch": 0}), "zeno")
        assert computation_ran(self._branch({"out_1": 1}, discarded=True), "zeno")


class TestReports:
    def test_exact_probabilities_sum_to_one(self):
        for report in (
            run_protocol_exact("mz", detector_present=True),
            run_protocol_exact("basic", r=1),
            run_protocol_exact("zeno", r=1, config=ZenoConfig(12)),
        ):
            assert sum(o.probability for o in report.outcomes) == pytest.approx(1.0, abs=1e-10)

    def test_basic_free_probability_quarter(self):
        report = run_protocol_exact("basic", r=1)
        assert report.counterfactual_free_probability == pytest.approx(0.25, abs=1e-12)
        assert report.would_have_exploded is True

    def test_basic_answer_zero_nothing_runs(self):
        report = run_protocol_exact("basic", r=0)
        assert report.counterfactual_free_probability == 0.0
        assert report.would_have_exploded is False

    def test_zeno_report_carries_keep_probability(self):
        report = run_protocol_exact("zeno", r=1, config=ZenoConfig(20))
        assert report.p_keep_all == pytest.approx(keep_formula(20), abs=1e-12)
        assert report.stages == 20

    def test_sampled_report_counts_sum_to_trials(self):
        report = run_protocol_sampled("basic", r=1, seed=11, trials=400)
        assert sum(o.count for o in report.outcomes) == 400
        assert report.mode == "sample"
        assert report.seed == 11

    def test_sampled_zeno_restarts_accounted(self):
        report = run_protocol_sampled("zeno", r=1, config=ZenoConfig(4), seed=3, trials=300)
        assert report.restarts > 0
        assert report.restart_computation_ran is True
        assert report.would_have_exploded is True
        # every surviving trial certifies the answer for free
        assert all(
            o.outcome_class is OutcomeClass.LEARNED_R1_FREE for o in report.outcomes
        )

    def test_sampled_zeno_zero_cap_keeps_discards(self):
        report = run_protocol_sampled(
            "zeno", r=1, config=ZenoConfig(1), seed=3, trials=50, restart_cap=0
        )
        assert all(o.outcome_class is OutcomeClass.DISCARDED for o in report.outcomes)
        assert report.restarts == 0

    def test_mz_report_has_no_answer_fields(self):
        report = run_protocol_exact("mz", detector_present=True)
        assert report.r is None
        assert report.would_have_exploded is None
        assert report.counterfactual_free_probability == pytest.approx(0.25, abs=1e-12)
