"""Premise rendering, query/evidence sampling, labeling, and dataset files."""

from __future__ import annotations

import numpy as np
import pytest

from bayesqa import generate_dataset, make_network
from bayesqa.dataset import (
    DatasetStats,
    classify_reasoning,
    dataset_stats,
    filter_premises,
    instance_from_dict,
    instance_program,
    instance_to_dict,
    load_dataset,
    premise_count,
    sample_qe,
    save_dataset,
    template_premises,
    _percent,
)
from bayesqa.errors import NetworkFormatError, UnsatisfiableEvidence
from bayesqa.inference import eliminate
from bayesqa.problog import evaluate

GALLSTONE_ROW0 = (
    "The probability of gallstones being true is 15.31%, and the probability "
    "of gallstones being false is 84.69%."
)
GALLSTONE_ROW1 = (
    "If gallstones is true, then the probability of amylase being 0-299 is "
    "93.46%, the probability of amylase being 300-499 is 4.67%, and the "
    "probability of amylase being 500-1400 is 1.87%."
)


class TestTemplatePremises:
    def test_one_premise_per_row_in_canonical_order(self, gallstone_net):
        numeric = template_premises(gallstone_net, "numeric")
        assert len(numeric) == 5
        assert [p.clause_ref for p in numeric] == [0, 1, 2, 3, 4]
        # topological order with ties broken alphabetically: amylase before flatulence
        assert [p.variable for p in numeric] == [
            "gallstones", "amylase", "amylase", "flatulence", "flatulence",
        ]
        assert numeric[1].parent_assignment == (("gallstones", "true"),)

    def test_numeric_text(self, gallstone_net):
        numeric = template_premises(gallstone_net, "numeric")
        assert numeric[0].text == GALLSTONE_ROW0
        assert numeric[1].text == GALLSTONE_ROW1

    def test_wep_text(self, gallstone_net):
        rng = np.random.default_rng(0)
        verbal = template_premises(gallstone_net, "wep", rng, second_closest_prob=0.0)
        assert verbal[0].text == (
            "It is unlikely that gallstones is true, and there is a very good "
            "chance that gallstones is false."
        )

    def test_both_kinds_share_clause_refs(self, gallstone_net):
        rng = np.random.default_rng(1)
        numeric = template_premises(gallstone_net, "numeric")
        verbal = template_premises(gallstone_net, "wep", rng)
        for a, b in zip(numeric, verbal):
            assert (a.clause_ref, a.variable, a.parent_assignment) == (
                b.clause_ref, b.variable, b.parent_assignment,
            )

    def test_equally_likely_row(self):
        net = make_network(
            "u",
            {"a": (("x", "y"), (), {(): (0.5, 0.5)}),
             "b": (("x", "y"), ("a",), {("x",): (0.3, 0.7), ("y",): (0.6, 0.4)})},
        )
        rng = np.random.default_rng(2)
        verbal = template_premises(net, "wep", rng)
        assert verbal[0].text == "The states of a are all equally likely."

    def test_argmax_note_when_all_phrases_read_low(self):
        net = make_network(
            "low",
            {"a": (("s0", "s1", "s2", "s3"), (), {(): (0.2, 0.2, 0.3, 0.3)}),
             "b": (("x", "y"), ("a",), {(s,): (0.5, 0.5) for s in ("s0", "s1", "s2", "s3")})},
        )
        rng = np.random.default_rng(3)
        verbal = template_premises(net, "wep", rng, second_closest_prob=0.0)
        assert verbal[0].text.endswith("The most likely state of a is s2 or s3.")

    def test_percent_rendering(self):
        assert _percent(0.1531) == "15.31%"
        assert _percent(0.5) == "50%"
        assert _percent(1.0) == "100%"
        assert _percent(0.000123456) == "0.0123%"
        assert _percent(0.0) == "0%"

    def test_bad_arguments(self, gallstone_net):
        with pytest.raises(ValueError, match="unknown premise kind"):
            template_premises(gallstone_net, "prose")
        with pytest.raises(ValueError, match="rng"):
            template_premises(gallstone_net, "wep")


class TestSampleQe:
    def test_bounds_and_gold(self, gallstone_net):
        rng = np.random.default_rng(4)
        for _ in range(50):
            qe = sample_qe(gallstone_net, rng)
            ev_vars = [v for v, _ in qe.evidence]
            assert 1 <= len(ev_vars) <= 2
            assert qe.query_var not in ev_vars
            assert ev_vars == sorted(ev_vars)
            want = eliminate(
                gallstone_net, qe.query_var, qe.query_state, dict(qe.evidence)
            ).probability
            assert qe.gold == want

    def test_zero_probability_evidence_is_redrawn(self):
        net = make_network(
            "det",
            {"k": (("t", "f"), (), {(): (1.0, 0.0)}),
             "b": (("t", "f"), ("k",), {("t",): (0.4, 0.6), ("f",): (0.5, 0.5)})},
        )
        rng = np.random.default_rng(5)
        for _ in range(100):
            qe = sample_qe(net, rng)
            assert dict(qe.evidence).get("k") != "f"

    def test_retry_budget_exhausted(self, gallstone_net):
        rng = np.random.default_rng(6)
        with pytest.raises(UnsatisfiableEvidence):
            sample_qe(gallstone_net, rng, max_retries=0)

    def test_single_variable_rejected(self):
        net = make_network("one", {"a": (("t", "f"), (), {(): (0.5, 0.5)})})
        with pytest.raises(ValueError, match="at least 2"):
            sample_qe(net, np.random.default_rng(7))


class TestClassifyReasoning:
    def test_three_patterns(self, sprinkler_net):
        # rain -> grass_wet <- sprinkler
        assert classify_reasoning(sprinkler_net, ["rain"], "grass_wet") == (
            ("causal",), "causal",
        )
        assert classify_reasoning(sprinkler_net, ["grass_wet"], "rain") == (
            ("evidential",), "evidential",
        )
        assert classify_reasoning(sprinkler_net, ["grass_wet", "sprinkler"], "rain") == (
            ("evidential", "explaining_away"), "explaining_away",
        )

    def test_indirect_relation_is_none(self):
        net = make_network(
            "chain",
            {"a": (("t", "f"), (), {(): (0.5, 0.5)}),
             "b": (("t", "f"), ("a",), {("t",): (0.4, 0.6), ("f",): (0.5, 0.5)}),
             "c": (("t", "f"), ("b",), {("t",): (0.3, 0.7), ("f",): (0.8, 0.2)})},
        )
        assert classify_reasoning(net, ["a"], "c") == ((), "none")

    def test_mixed_direct_edges(self, sprinkler_net):
        types, primary = classify_reasoning(
            sprinkler_net, ["rain", "sprinkler"], "grass_wet"
        )
        assert types == ("causal",) and primary == "causal"


class TestGenerateDataset:
    def test_instances_are_reproducible_and_worker_independent(self, gallstone_net):
        one = generate_dataset(gallstone_net, 8, seed=11)
        two = generate_dataset(gallstone_net, 8, seed=11, workers=4)
        assert one == two
        assert [inst.id for inst in one] == [f"gallstone-{i:04d}" for i in range(8)]

    def test_premises_attached_to_every_instance(self, gallstone_net):
        inst = generate_dataset(gallstone_net, 1, seed=3)[0]
        kinds = [p.kind for p in inst.premises]
        assert kinds == ["numeric"] * 5 + ["wep"] * 5

    def test_gold_and_labels_recomputable(self, gallstone_net):
        for inst in generate_dataset(gallstone_net, 10, seed=21):
            ev = {b.variable: b.state for b in inst.evidence}
            want = eliminate(
                gallstone_net, inst.question.variable, inst.question.state, ev
            ).probability
            assert inst.gold == want
            types, primary = classify_reasoning(gallstone_net, ev, inst.question.variable)
            assert (inst.reasoning_types, inst.primary_type) == (types, primary)

    def test_question_wording(self, gallstone_net):
        inst = generate_dataset(gallstone_net, 1, seed=8)[0]
        assert inst.question.text == (
            f"What is the probability that {inst.question.variable} "
            f"is {inst.question.state}?"
        )

    def test_invalid_network_rejected(self, gallstone_net):
        broken = make_network(
            "broken", {"a": (("t", "f"), (), {(): (0.9, 0.2)}),
                       "b": (("t", "f"), ("a",), {("t",): (0.5, 0.5), ("f",): (0.5, 0.5)})},
        )
        with pytest.raises(NetworkFormatError, match="invalid"):
            generate_dataset(broken, 1, seed=0)
        with pytest.raises(ValueError, match="positive"):
            generate_dataset(gallstone_net, 0, seed=0)

    def test_instance_program_reproduces_gold(self, gallstone_net):
        for inst in generate_dataset(gallstone_net, 6, seed=13):
            program = instance_program(gallstone_net, inst)
            (answer,) = evaluate(program).values()
            assert abs(answer - inst.gold) <= 1e-10


class TestDatasetFiles:
    def test_dict_round_trip(self, gallstone_net):
        inst = generate_dataset(gallstone_net, 1, seed=17)[0]
        assert instance_from_dict(instance_to_dict(inst)) == inst

    def test_save_load_and_byte_stability(self, gallstone_net, tmp_path):
        insts = generate_dataset(gallstone_net, 5, seed=19)
        a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        save_dataset(insts, a)
        save_dataset(insts, b)
        assert a.read_bytes() == b.read_bytes()
        assert load_dataset(a) == insts

    def test_load_rejects_bad_records(self, tmp_path):
        bad = tmp_path / "bad.jsonl"
        bad.write_text('{"id": "x"}\n', encoding="utf-8")
        with pytest.raises(NetworkFormatError, match="bad.jsonl:1"):
            load_dataset(bad)

    def test_filter_premises(self, gallstone_net):
        inst = generate_dataset(gallstone_net, 1, seed=23)[0]
        numeric_only = filter_premises(inst, ["numeric"])
        assert [p.kind for p in numeric_only.premises] == ["numeric"] * 5
        assert numeric_only.id == inst.id


class TestStats:
    def test_premise_count(self, gallstone_net):
        assert premise_count(gallstone_net) == 5

    def test_reference_network_stats(self, gallstone_net):
        insts = generate_dataset(gallstone_net, 4, seed=29)
        stats = dataset_stats([gallstone_net], insts)
        assert stats.networks == 1
        assert stats.variables_total == 3
        assert stats.numeric_premises == 5
        assert stats.wep_premises == 5
        assert stats.queries == 4
        assert stats.evidence_statements == sum(len(i.evidence) for i in insts)
        assert abs(stats.states_per_variable_mean - 7 / 3) <= 1e-9
        assert stats.states_per_variable_std == pytest.approx((2 / 9) ** 0.5, abs=1e-12)
        assert stats.variables_per_network_std == 0.0
        assert stats.premises_per_network_mean == 5.0

    def test_multiple_networks(self, gallstone_net, sprinkler_net):
        stats = dataset_stats([gallstone_net, sprinkler_net])
        assert stats.networks == 2
        assert stats.variables_total == 6
        assert isinstance(stats, DatasetStats)

    def test_empty_corpus_rejected(self):
        with pytest.raises(ValueError):
            dataset_stats([])
