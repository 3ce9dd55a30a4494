import json

import pytest

from checkers import (
    CHECKERS,
    IMPLICATIONS,
    check_implication,
    check_implications,
    implication_rule,
    implications_table,
    replay_options,
    replay_verdict,
    run_check,
)
from cones import parse_cone
from convexity_checks import SINGLE_MAP_KINDS
from fixture_config import fixture_from_dict
from verdicts import CheckError, PropertyKind, Status, Verdict

CONVEXITY_KINDS = sorted(k.value for k in SINGLE_MAP_KINDS - {PropertyKind.NATURAL_QC_SCALAR}) + ["wcg"]

# {0} at 0, {1} at 1 and {-10} in between
DIP = {
    "name": "dip",
    "domain": {"lower": 0, "upper": 1},
    "codomain_dim": 1,
    "cone": "Rplus",
    "unary": True,
    "branches": [
        {"when": "Eq(x, 0)", "value": "point(0)"},
        {"when": "Eq(x, 1)", "value": "point(1)"},
        {"when": "(0 < x) & (x < 1)", "value": "point(-10)"},
    ],
}


def test_every_kind_has_a_checker():
    assert set(CHECKERS) == set(PropertyKind)


class TestRejectedInput:
    def test_unknown_kind(self, make, cfg):
        fx, cone = make("ex3_1")
        with pytest.raises(CheckError, match="unknown property"):
            run_check(fx, cone, "convex_enough", cfg)

    def test_scalar_kind_on_a_set_valued_map(self, make, cfg):
        fx, cone = make("ex3_1")
        with pytest.raises(CheckError, match="single-valued"):
            run_check(fx, cone, "natural_qc_scalar", cfg)

    def test_two_argument_kind_on_a_unary_map(self, make, cfg):
        fx, cone = make("ex2_1")
        with pytest.raises(CheckError, match="two arguments"):
            run_check(fx, cone, "alpha", cfg)

    def test_cone_dimension_mismatch(self, make, cfg):
        fx, _ = make("ex3_2")
        with pytest.raises(CheckError, match="R\\^1"):
            run_check(fx, parse_cone("Rplus"), "qc", cfg)

    def test_bad_polarity(self, make, cfg):
        fx, cone = make("ex3_1")
        with pytest.raises(CheckError):
            run_check(fx, cone, "qc", cfg, polarity="flat")


class TestVerdicts:
    def test_ex2_1_jump_breaks_the_convex_graph(self, make, cfg):
        fx, cone = make("ex2_1")
        verdict = run_check(fx, cone, "wcg", cfg, tuples=[[1.0, 3.0]])
        assert verdict.status is Status.REFUTED
        assert verdict.witness["case"]["points"] == [[1.0], [3.0]]
        assert verdict.witness["failures"]

    def test_ex2_1_gate_curve_rescues_the_graph(self, make, cfg):
        fx, cone = make("ex2_1")
        verdict = run_check(fx, cone, "wnq", cfg, tuples=[[1.0, 3.0]])
        assert verdict.status is Status.CONFIRMED
        assert verdict.witness["cases"][0]["curve"]

    def test_ex3_1_alpha(self, make, cfg):
        fx, cone = make("ex3_1")
        verdict = run_check(fx, cone, "alpha", cfg)
        assert verdict.status is Status.CONFIRMED
        assert len(verdict.witness["cases"]) == len(fx.domain)
        assert verdict.coverage["points"] == len(fx.domain)

    @pytest.mark.parametrize("kind", CONVEXITY_KINDS)
    def test_constant_interval_passes_the_convexity_kinds(self, make, cfg, kind):
        fx, cone = make("const_A0")
        verdict = run_check(fx, cone, kind, cfg)
        assert verdict.status is Status.NOT_REFUTED
        assert verdict.witness is None
        assert sum(verdict.coverage.values()) > 0

    @pytest.mark.parametrize("polarity", ["convex", "concave"])
    def test_linear_map_is_both_convex_and_concave(self, make, cfg, polarity):
        fx, cone = make("linear_x")
        assert run_check(fx, cone, "wcg", cfg, polarity=polarity).status is Status.NOT_REFUTED

    def test_linear_map_is_naturally_quasiconvex(self, make, cfg):
        fx, cone = make("linear_x")
        assert run_check(fx, cone, "natural_qc_scalar", cfg).status is Status.NOT_REFUTED

    def test_naturally_iii_checks_the_endpoints(self, cfg):
        fx = fixture_from_dict(DIP, cfg.grid_resolution, cfg.sampling())
        verdict = run_check(fx, parse_cone("Rplus"), "naturally_qc_iii", cfg, tuples=[[0.0, 1.0]])
        # [0, 1] is not inside F(1) + S = [1, inf)
        assert verdict.status is Status.REFUTED
        assert verdict.witness["combined"] == [1.0]

    def test_naturally_v_only_looks_between_the_endpoints(self, cfg):
        fx = fixture_from_dict(DIP, cfg.grid_resolution, cfg.sampling())
        verdict = run_check(fx, parse_cone("Rplus"), "naturally_qc_v", cfg, tuples=[[0.0, 1.0]])
        assert verdict.status is Status.NOT_REFUTED
        assert verdict.coverage["lambdas"] == cfg.lambda_steps - 2

    def test_second_argument_of_linear_x_is_constant(self, make, cfg):
        fx, cone = make("linear_x")
        verdict = run_check(fx, cone, "qc", cfg, arg="second", polarity="concave")
        assert verdict.status is Status.NOT_REFUTED
        assert verdict.arg.value == "second"

    def test_existential_kinds_never_answer_not_refuted(self, make, cfg):
        fx, cone = make("ex3_1")
        verdict = run_check(fx, cone, "alpha", cfg)
        assert PropertyKind.ALPHA.existential
        assert verdict.status in (Status.CONFIRMED, Status.NOT_CONFIRMED)

    def test_seed_fixes_sampled_sweeps(self, make, cfg):
        fx, cone = make("ex3_1")
        small = cfg.with_overrides(max_tuples=20, n_max=3)
        first = run_check(fx, cone, "transfer_mu_v", small)
        second = run_check(fx, cone, "transfer_mu_v", small)
        assert first.to_dict() == second.to_dict()


class TestPolarityDuality:
    @pytest.mark.parametrize("name,kind", [("const_A0", "qc"), ("linear_x", "wcg"), ("ex3_1", "naturally_qc_iii")])
    def test_concave_flag_matches_the_negated_map(self, make, cfg, name, kind):
        fx, cone = make(name)
        concave = run_check(fx, cone, kind, cfg, polarity="concave")
        negated = run_check(fx.negated(), cone, kind, cfg)
        assert concave.status is negated.status

    def test_refutation_on_the_negated_jump(self, make, cfg):
        fx, cone = make("ex2_1")
        concave = run_check(fx, cone, "wcg", cfg, polarity="concave", tuples=[[1.0, 3.0]])
        negated = run_check(fx.negated(), cone, "wcg", cfg, tuples=[[1.0, 3.0]])
        assert concave.status is negated.status


class TestReplay:
    def test_refutation_replays(self, make, cfg):
        fx, cone = make("ex2_1")
        verdict = run_check(fx, cone, "wcg", cfg, tuples=[[1.0, 3.0]])
        options = replay_options(verdict)
        assert "tuples" not in options
        assert len(options["cases"]) == 1
        assert replay_verdict(verdict, fx, cone, cfg).status is Status.REFUTED

    def test_confirmation_replays(self, make, cfg):
        fx, cone = make("ex3_1")
        verdict = run_check(fx, cone, "alpha", cfg)
        replayed = replay_verdict(verdict, fx, cone, cfg)
        assert replayed.status is Status.CONFIRMED
        assert replayed.witness == verdict.witness

    def test_replay_from_a_json_document(self, make, cfg):
        fx, cone = make("ex2_1")
        verdict = run_check(fx, cone, "wcg", cfg, tuples=[[1.0, 3.0]])
        restored = Verdict.from_dict(json.loads(json.dumps(verdict.to_dict())))
        assert restored.to_dict() == verdict.to_dict()
        assert replay_verdict(restored, fx, cone, cfg).status is Status.REFUTED

    def test_refutation_persists_on_a_finer_grid(self, make, cfg):
        coarse, cone = make("ex2_1")
        fine, _ = make("ex2_1", resolution=40)
        verdict = run_check(coarse, cone, "wcg", cfg, tuples=[[1.0, 3.0]])
        assert replay_verdict(verdict, fine, cone, cfg).status is Status.REFUTED

    def test_nothing_to_replay(self, make, cfg):
        fx, cone = make("const_A0")
        verdict = run_check(fx, cone, "qc", cfg)
        with pytest.raises(CheckError, match="no witness"):
            replay_options(verdict)

    def test_conclusive_verdict_needs_a_witness(self):
        with pytest.raises(CheckError):
            Verdict(PropertyKind.QC, Status.REFUTED, "f", "Rplus")

    def test_malformed_document(self):
        with pytest.raises(CheckError, match="not a verdict"):
            Verdict.from_dict({"status": "Refuted"})
        with pytest.raises(CheckError):
            Verdict.from_dict({"property": "qc", "status": "Maybe"})


class TestImplications:
    def test_constant_map_is_consistent(self, make, cfg):
        fx, cone = make("const_A0")
        results = check_implications(fx, cone, cfg)
        assert len(results) == len(IMPLICATIONS)
        assert all(r.consistent for r in results)
        table = implications_table(results)
        assert list(table.columns) == ["rule", "applicable", "premise", "conclusion", "consistent"]

    def test_structural_premise_skips_vector_maps(self, make, cfg):
        fx, cone = make("ex3_2")
        result = check_implication(fx, cone, implication_rule("real_valued_implies_transfer_mu_v"), cfg)
        assert not result.applicable
        assert result.consistent

    def test_premise_that_does_not_apply_is_skipped(self, make, cfg):
        fx, cone = make("ex2_1")
        result = check_implication(fx, cone, implication_rule("pair_properly_v_implies_transfer_weak_mu_v"), cfg)
        assert not result.applicable

    def test_unknown_rule(self):
        with pytest.raises(CheckError, match="unknown implication"):
            implication_rule("everything_implies_everything")
