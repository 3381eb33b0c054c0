import numpy as np
import pytest

from spacelike.core import (Behavior, Context, JointBehavior, Verdict, condition,
                            conditioned_family, detector_weight, diagnose_extension,
                            marginal_local, mixture,
                            total_probability_check, total_probability_error)
from spacelike.errors import ConditioningError, ShapeError, SignalingError
from spacelike.fixtures import copy_box, pr_box, singlet_setup, uniform_reference
from spacelike.quantum import bipartite_behavior, reference_behavior

from conftest import random_joint
from test_signaling import product_joint


class TestCondition:
    def test_product_table_unchanged(self):
        p, q = np.array([0.2, 0.3, 0.5]), np.array([0.6, 0.4])
        jb = product_joint(p, q)
        for j in range(2):
            c, beh = condition(jb, "W", "D", j)
            assert c == pytest.approx(q[j], abs=1e-15)
            np.testing.assert_allclose(beh.row(0, "E"), p, atol=1e-15)

    def test_perfect_correlation(self):
        jb = JointBehavior(["W"], [Context.numbered("E", 2)], [Context.numbered("D", 2)],
                           [[[[[0.5, 0.0], [0.0, 0.5]]]]])
        c, beh = condition(jb, "W", "D", "0")
        assert c == 0.5
        np.testing.assert_array_equal(beh.row(0, 0), [1.0, 0.0])
        assert beh.preparations == ("W|D=0",)

    def test_singlet_collapse_to_orthogonal_state(self):
        jb = bipartite_behavior(singlet_setup())
        c, beh = condition(jb, "singlet", "z", "0")
        assert c == pytest.approx(0.5, abs=1e-12)
        # |1><1|: z gives outcome 1 surely, x is uniform
        np.testing.assert_allclose(beh.row(0, "z"), [0.0, 1.0], atol=1e-12)
        np.testing.assert_allclose(beh.row(0, "x"), [0.5, 0.5], atol=1e-12)

    def test_zero_probability(self):
        with pytest.raises(ConditioningError):
            condition(copy_box().with_data(np.tile([1.0, 0, 0, 0], 4)), "W", "y0", "1")

    def test_signaling_error_carries_report(self):
        with pytest.raises(SignalingError) as exc:
            condition(copy_box(), "W", "y0", "0")
        assert exc.value.report.sig_to_remote == 1.0

    def test_rows_normalized(self):
        rng = np.random.default_rng(3)
        # no-signaling random table: product of independent marginals per block
        q = rng.dirichlet(np.ones(3))
        table = [[[np.outer(rng.dirichlet(np.ones(2)), q)] for _ in range(3)]]
        jb = JointBehavior(["W"], [Context.numbered(f"E{k}", 2) for k in range(3)],
                           [Context.numbered("D", 3)], table)
        for j in range(3):
            _, beh = condition(jb, 0, 0, j)
            for e in range(3):
                assert abs(beh.row(0, e).sum() - 1) <= 1e-9

    def test_family_skips_zero_outcomes(self):
        jb = product_joint(np.array([0.5, 0.5]), np.array([1.0, 0.0, 0.0]))
        fam = conditioned_family(jb, "W", "D")
        assert list(fam) == ["0"]

    def test_detector_weight_is_weight_iff_no_signaling(self):
        assert detector_weight(pr_box(), "W", "y0", "0").is_weight()
        assert not detector_weight(copy_box(), "W", "y0", "0").is_weight()


class TestTotalProbability:
    def test_product_exact(self):
        jb = product_joint(np.array([0.25, 0.75]), np.array([0.5, 0.25, 0.25]))
        assert total_probability_check(jb, 0, 0, 0) == 0.0

    @pytest.mark.parametrize("seed", range(5))
    def test_random_with_zero_columns(self, seed):
        jb = random_joint(np.random.default_rng(seed), preps=2, n_local=(3, 4), n_remote=(4, 2),
                          zeros=0.5)
        assert total_probability_error(jb) <= 1e-12

    def test_signaling_table_still_holds(self):
        assert total_probability_error(copy_box()) <= 1e-12

    def test_condition_then_mixture_reconstructs_marginal(self):
        jb = bipartite_behavior(singlet_setup())
        for d in ("z", "x"):
            fam = conditioned_family(jb, "singlet", d)
            mixed = mixture([beh for _, beh in fam.values()], [c for c, _ in fam.values()])
            for e in ("z", "x"):
                np.testing.assert_allclose(mixed.row(0, e), marginal_local(jb, 0, e, d), atol=1e-12)

    def test_mixture_shape_checks(self):
        with pytest.raises(ShapeError):
            mixture([uniform_reference()], [0.5, 0.5])


class TestDiagnosis:
    def test_singlet(self):
        setup = singlet_setup()
        diag = diagnose_extension(bipartite_behavior(setup), reference_behavior(setup))
        assert diag.verdict is Verdict.NO_SIGNALING_COLLAPSE
        assert str(diag.verdict.value) == "NoSignaling+Collapse"
        assert len(diag.conditioned) == 4
        # nontrivial: the collapsed local behaviors are not the reduced state's I/2
        assert all(np.abs(c.behavior.data - 0.5).max() > 0.4 for c in diag.conditioned.values())
        c, beh = diag.conditioned[("singlet", "x", "1")]
        assert c == pytest.approx(0.5, abs=1e-12)
        np.testing.assert_allclose(beh.row(0, "x"), [1.0, 0.0], atol=1e-12)

    def test_copy_box(self):
        diag = diagnose_extension(copy_box(), uniform_reference())
        assert diag.verdict is Verdict.SIGNALS_LOCAL_TO_REMOTE
        assert diag.conditioned is None

    def test_pr_box_wrong_reference(self):
        ref = Behavior(["W"], uniform_reference().contexts, [[[0.6, 0.4], [0.6, 0.4]]])
        diag = diagnose_extension(pr_box(), ref)
        assert diag.verdict is Verdict.SIGNALS_REMOTE_TO_LOCAL
        assert diag.report.sig_to_local == pytest.approx(0.1)

    def test_both(self):
        ref = Behavior(["W"], uniform_reference().contexts, [[[0.6, 0.4], [0.6, 0.4]]])
        assert diagnose_extension(copy_box(), ref).verdict is Verdict.BOTH

    def test_shape_mismatch(self):
        with pytest.raises(ShapeError):
            diagnose_extension(pr_box(), Behavior(["W"], [Context("q", "01")], [[[0.5, 0.5]]]))

    def test_to_dict(self):
        d = diagnose_extension(pr_box(), uniform_reference()).to_dict()
        assert d["verdict"] == "NoSignaling+Collapse"
        assert "report" in d and "conditioned" in d
