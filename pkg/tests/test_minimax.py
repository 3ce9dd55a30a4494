import numpy as np
import pytest

from minimax import (
    CONSISTENT,
    HYPOTHESES_NOT_MET,
    NO_CERTIFICATE,
    THEOREMS,
    TheoremError,
    find_diagonal_witness,
    run_theorem_suite,
    theorem_spec,
    verify_minimax,
)
from paper_examples import fixture_names


def test_theorem_registry():
    assert len(THEOREMS) == 18
    for side in ("i", "ii"):
        for stem in ("thm41", "thm42", "cor41", "cor42", "thm43", "thm44", "cor43"):
            assert f"{stem}_{side}" in THEOREMS
    assert {"thm45", "cor44", "thm46", "cor45"} <= set(THEOREMS)
    assert theorem_spec("thm46").conclusion == "thm46"
    assert all(not h.required for h in theorem_spec("thm41_i").hypotheses if h.kind.value == "transfer_weak_mu_v")


class TestDiagonal:
    def test_ex4_2_diagonal_reaches_the_weak_max(self, make, cfg):
        fx, cone = make("ex4_2")
        witness = find_diagonal_witness(fx, cone, "max_w_side", cfg)
        assert witness is not None
        assert np.allclose(witness["point"], [0.0])
        assert np.allclose(witness["meeting"], [[1.0]])

    def test_rem4_2_has_no_diagonal_witness(self, make, cfg):
        fx, cone = make("rem4_2")
        assert find_diagonal_witness(fx, cone, "max_w_side", cfg) is None

    def test_unknown_mode(self, make, cfg):
        fx, cone = make("ex4_2")
        with pytest.raises(TheoremError, match="diagonal mode"):
            find_diagonal_witness(fx, cone, "sideways", cfg)

    def test_different_grids_are_rejected(self, make, cfg):
        fx, cone = make("ex3_6")
        with pytest.raises(TheoremError, match="different grids"):
            find_diagonal_witness(fx, cone, "max_w_side", cfg)


class TestConclusions:
    def test_ex4_2_certificate(self, make, cfg):
        fx, cone = make("ex4_2")
        result = verify_minimax(fx, cone, "thm41_i", cfg)
        assert result.found
        cert = result.certificate
        assert cert.valid
        assert np.allclose(cert.z1, [1.0]) and np.allclose(cert.z2, [1.0])
        assert result.to_dict()["certificate"]["relation"]

    def test_diag_gap_has_no_certificate(self, make, cfg):
        fx, cone = make("diag_gap")
        result = verify_minimax(fx, cone, "thm41_i", cfg)
        assert not result.found
        assert "no pair" in result.failure
        assert np.allclose(result.sets["z1_candidates"], [[0.0]])
        assert np.allclose(result.sets["z2_candidates"], [[1.0]])

    def test_inclusion_form_on_ex4_6(self, make, cfg):
        fx, cone = make("ex4_6")
        result = verify_minimax(fx, cone, "thm45", cfg)
        assert result.found
        assert result.certificate.relation.kind == "subset_minus"

    @pytest.mark.parametrize("name,theorem", [("ex4_1", "thm41_i"), ("ex4_1", "thm42_i")])
    def test_ex4_1_pairs_the_origin_with_an_axis_end(self, make, cfg, name, theorem):
        fx, cone = make(name)
        result = verify_minimax(fx, cone, theorem_spec(theorem).conclusion, cfg)
        assert np.allclose(result.sets["z1_candidates"], [[0.0, 0.0]])
        # the axis edges of each quarter disc are weakly maximal under -R2+
        assert np.allclose(result.sets["z2_candidates"], [[0.0, 1.0], [1.0, 0.0]])
        assert np.allclose(result.certificate.z1, [0.0, 0.0])
        assert np.allclose(result.certificate.z2, [0.0, 1.0])

    @pytest.mark.parametrize("theorem", ["thm41_i", "cor43_i"])
    def test_ex4_3_certificate(self, make, cfg, theorem):
        fx, cone = make("ex4_3")
        result = verify_minimax(fx, cone, theorem_spec(theorem).conclusion, cfg)
        assert np.allclose(result.certificate.z1, [1.0]) and np.allclose(result.certificate.z2, [1.0])

    @pytest.mark.parametrize("name,targets,top", [
        ("ex4_6", [[0.0]], [[1.0]]),
        ("ex4_7", [[0.0, 0.0]], [[1.0, 1.0]]),
    ])
    def test_inclusion_sets(self, make, cfg, name, targets, top):
        # F(0, X) is {0} on ex4_6 and the segment {0} x [0, 1] on ex4_7
        fx, cone = make(name)
        result = verify_minimax(fx, cone, "thm45", cfg)
        assert result.found
        assert np.allclose(result.sets["targets"], targets)
        assert np.allclose(result.sets["diagonal_extremal"], top)

    @pytest.mark.parametrize("name", ["ex4_1", "ex4_2", "ex4_3", "ex3_1", "diag_gap"])
    def test_mirrored_pair_is_the_plain_pair_of_the_transpose(self, make, cfg, name):
        fx, cone = make(name)
        mirrored = verify_minimax(fx, cone, "thm41_ii", cfg)
        plain = verify_minimax(fx.transposed(), cone.negated(), "thm41_i", cfg)
        assert mirrored.found == plain.found
        assert mirrored.sets.keys() == plain.sets.keys()
        for key, points in mirrored.sets.items():
            assert np.allclose(points, plain.sets[key])
        if mirrored.found:
            assert np.allclose(mirrored.certificate.z1, plain.certificate.z1)
            assert np.allclose(mirrored.certificate.z2, plain.certificate.z2)
            assert mirrored.certificate.relation.kind == "in_minus"
            assert plain.certificate.relation.kind == "in_plus"

    @pytest.mark.parametrize("name", fixture_names(include_auxiliary=True))
    def test_diagonal_witness_yields_a_certificate(self, make, cfg, name):
        fx, cone = make(name)
        if not fx.is_square:
            pytest.skip(f"{name} has different grids for its two arguments")
        if find_diagonal_witness(fx, cone, "max_w_side", cfg) is not None:
            assert verify_minimax(fx, cone, "thm41_i", cfg).found

    def test_unknown_conclusion(self, make, cfg):
        fx, cone = make("ex4_2")
        with pytest.raises(TheoremError, match="unknown conclusion"):
            verify_minimax(fx, cone, "thm99", cfg)


class TestTheoremSuite:
    def test_thm45_on_ex4_6(self, make, cfg):
        fx, cone = make("ex4_6")
        report = run_theorem_suite(fx, cone, "thm45", cfg)
        assert [v.kind.value for v in report.hypotheses] == ["weakly_z", "row_domination"]
        assert report.hypotheses_hold
        assert report.status == CONSISTENT
        assert not report.diagonal_checked
        assert report.to_dict()["diagonal"] is None

    def test_diag_gap_reports_no_certificate(self, make, cfg):
        fx, cone = make("diag_gap")
        report = run_theorem_suite(fx, cone, "cor42_i", cfg)
        assert report.status == NO_CERTIFICATE
        assert report.diagonal_checked and report.diagonal is None

    def test_statuses_are_distinct(self):
        assert len({CONSISTENT, HYPOTHESES_NOT_MET, NO_CERTIFICATE}) == 3

    def test_unknown_theorem(self, make, cfg):
        fx, cone = make("ex4_2")
        with pytest.raises(TheoremError, match="unknown theorem"):
            run_theorem_suite(fx, cone, "thm99", cfg)

    def test_real_valued_statement_on_a_vector_map(self, make, cfg):
        fx, cone = make("ex3_2")
        with pytest.raises(TheoremError, match="real values"):
            run_theorem_suite(fx, cone, "cor41_i", cfg)

    def test_single_valued_statement_on_a_set_valued_map(self, make, cfg):
        fx, cone = make("ex4_6")
        with pytest.raises(TheoremError, match="single-valued"):
            run_theorem_suite(fx, cone, "cor44", cfg)
