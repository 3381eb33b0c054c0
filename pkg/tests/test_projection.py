import numpy as np
import pytest

from spacelike.errors import ConvergenceError
from spacelike.fixtures import copy_box, pr_box
from spacelike.space import (affine_projector, no_signaling_constraints, project_no_signaling,
                             project_no_signaling_detailed, sample_theory, signaling,
                             simplex_violation, sup_distance)


def _check_optimality(P, N, n_dirs=200, seed=0):
    """Variational inequality <P - N, Z - N> <= 0 for feasible Z.

    Feasible points are generated as convex combinations of N with other
    projected samples, so they lie in the (convex) no-signaling set.
    """
    rng = np.random.default_rng(seed)
    worst = -np.inf
    for k in range(n_dirs):
        Z = project_no_signaling(sample_theory(P, [seed, k])).data
        worst = max(worst, float(np.dot(P.data - N.data, Z - N.data)))
    return worst


class TestProjection:
    def test_copy_box(self):
        res = project_no_signaling_detailed(copy_box())
        assert res.iterations <= 10_000
        assert res.sig <= 1e-9
        assert res.simplex_violation <= 1e-12
        np.testing.assert_allclose(res.point.data, 0.25, atol=1e-12)

    def test_fixed_point(self):
        P = pr_box()
        np.testing.assert_allclose(project_no_signaling(P).data, P.data, atol=1e-12)

    @pytest.mark.parametrize("structure", ["2x2x2x2", "1x3x2x3", "2x2x3x2x3"])
    def test_idempotent_and_feasible(self, structure):
        for seed in range(5):
            P = sample_theory(structure, seed)
            N = project_no_signaling(P)
            assert signaling(N) <= 1e-9
            assert simplex_violation(N) <= 1e-12
            assert sup_distance(project_no_signaling(N), N) <= 1e-9

    @pytest.mark.parametrize("seed", range(5))
    def test_residuals_non_increasing(self, seed):
        res = project_no_signaling_detailed(sample_theory("2x3x3x3", seed))
        r = np.asarray(res.residuals)
        assert np.all(np.diff(r) <= 1e-12)

    @pytest.mark.parametrize("seed", range(3))
    def test_variational_inequality(self, seed):
        P = sample_theory("2x2x2x2", 100 + seed)
        N = project_no_signaling(P)
        assert _check_optimality(P, N, seed=seed) <= 1e-9

    @pytest.mark.parametrize("seed", range(3))
    def test_against_qp_oracle(self, seed):
        cp = pytest.importorskip("cvxpy")
        P = sample_theory("2x2x2x3", 200 + seed)
        A = no_signaling_constraints(P)
        bptr = P.block_ptr()
        x = cp.Variable(P.size)
        cons = [A @ x == 0, x >= 0]
        cons += [cp.sum(x[bptr[b]:bptr[b + 1]]) == 1 for b in range(len(bptr) - 1)]
        cp.Problem(cp.Minimize(cp.sum_squares(x - P.data)), cons).solve()
        N = project_no_signaling(P)
        assert np.max(np.abs(N.data - x.value)) <= 1e-5
        assert np.sum((N.data - P.data) ** 2) <= np.sum((x.value - P.data) ** 2) + 1e-9

    def test_affine_projector_is_orthogonal_projector(self):
        M = affine_projector(pr_box())
        np.testing.assert_allclose(M @ M, M, atol=1e-12)
        np.testing.assert_allclose(M, M.T, atol=1e-12)
        A = no_signaling_constraints(pr_box())
        np.testing.assert_allclose(A @ M, 0.0, atol=1e-12)

    def test_iteration_cap(self):
        with pytest.raises(ConvergenceError) as exc:
            project_no_signaling(sample_theory("2x3x3x3", 1), max_iter=1)
        assert len(exc.value.residuals) == 1
