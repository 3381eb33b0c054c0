"""Compiled and numpy kernels must agree."""

import os
import subprocess
import sys

import numpy as np
import pytest

from spacelike import _kernels
from spacelike._kernels import _pykernels
from spacelike.core import equality_families
from spacelike.space import affine_projector, sample_flat, sample_theory

ck = _kernels.compiled_backend()
needs_compiled = pytest.mark.skipif(ck is None, reason="compiled extension not built")


def test_backend_name():
    assert _kernels.BACKEND in ("cython", "python")
    if ck is not None and _kernels.BACKEND == "python":
        pytest.skip("compiled extension available but disabled via SPACELIKE_PURE_PYTHON")


class TestPureKernels:
    def test_simplex_projection_known(self):
        x = np.array([0.5, 0.5, 0.5, 2.0, -1.0])
        bptr = np.array([0, 3, 5])
        np.testing.assert_allclose(_pykernels.project_simplex_blocks(x, bptr),
                                   [1 / 3, 1 / 3, 1 / 3, 1.0, 0.0], atol=1e-15)

    def test_simplex_projection_is_nearest(self):
        rng = np.random.default_rng(0)
        bptr = np.array([0, 4])
        for _ in range(50):
            x = rng.normal(size=4)
            p = _pykernels.project_simplex_blocks(x, bptr)
            assert abs(p.sum() - 1) <= 1e-12 and p.min() >= 0
            for _ in range(20):
                z = rng.dirichlet(np.ones(4))
                assert np.dot(x - p, z - p) <= 1e-12

    def test_family_spread_empty(self):
        fam_r, _ = equality_families(sample_theory("1x1x2x2", 0))
        assert fam_r.n_groups == 0
        assert _pykernels.family_spread(np.zeros(8), fam_r.ptr, fam_r.idx, fam_r.group_ptr)[1] == -1


@needs_compiled
class TestParity:
    @pytest.mark.parametrize("structure", ["2x2x2x2", "3x3x2x4", "1x4x3x2x3"])
    def test_family_spread(self, structure):
        P = sample_theory(structure, 1)
        for fam in equality_families(P):
            X = sample_flat(np.random.default_rng(2), P.block_ptr(), 50)
            a = _pykernels.family_spread_batch(X, fam.ptr, fam.idx, fam.group_ptr)
            b = ck.family_spread_batch(X, fam.ptr, fam.idx, fam.group_ptr)
            np.testing.assert_allclose(a, b, rtol=0, atol=1e-15)
            for x in X[:5]:
                ra = _pykernels.family_spread(x, fam.ptr, fam.idx, fam.group_ptr)
                rb = ck.family_spread(x, fam.ptr, fam.idx, fam.group_ptr)
                assert ra[0] == pytest.approx(rb[0], abs=1e-15)
                # exact ties (e.g. two-outcome groups mirror each other) may be
                # broken differently by rounding; both witnesses must attain the max
                m = _pykernels.marginals(x, fam.ptr, fam.idx)
                for _, kmax, kmin in (ra[1:], rb[1:]):
                    assert m[kmax] - m[kmin] == pytest.approx(ra[0], abs=1e-15)

    def test_marginals(self):
        P = sample_theory("2x2x3x3", 4)
        fam, _ = equality_families(P)
        np.testing.assert_allclose(_pykernels.marginals(P.data, fam.ptr, fam.idx),
                                   ck.marginals(P.data, fam.ptr, fam.idx), atol=1e-15)

    def test_simplex_projection(self):
        rng = np.random.default_rng(3)
        bptr = np.array([0, 1, 4, 9, 10, 16])
        for _ in range(50):
            x = rng.normal(scale=2, size=16)
            np.testing.assert_allclose(_pykernels.project_simplex_blocks(x, bptr),
                                       ck.project_simplex_blocks(x, bptr), atol=1e-14)

    @pytest.mark.parametrize("seed", range(5))
    def test_dykstra(self, seed):
        P = sample_theory("2x2x3x3", seed)
        M = affine_projector(P)
        args = (P.data, M, np.zeros(P.size), P.block_ptr(), 10_000, 1e-12)
        xa, _, ka, ca, ra = _pykernels.dykstra(*args)
        xb, _, kb, cb, rb = ck.dykstra(*args)
        assert ca and cb
        np.testing.assert_allclose(xa, xb, atol=1e-10)
        assert abs(ka - kb) <= 2
        np.testing.assert_allclose(ra[:min(ka, kb) - 2], rb[:min(ka, kb) - 2], atol=1e-10)


def test_pure_python_fallback_selected_by_env():
    code = ("import spacelike, numpy as np\n"
            "from spacelike.fixtures import copy_box\n"
            "from spacelike.space import project_no_signaling\n"
            "print(spacelike.BACKEND, float(np.abs(project_no_signaling(copy_box()).data - 0.25).max()))")
    env = dict(os.environ, SPACELIKE_PURE_PYTHON="1")
    proc = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, env=env)
    assert proc.returncode == 0, proc.stderr
    backend, dev = proc.stdout.split()
    assert backend == "python"
    assert float(dev) <= 1e-12
