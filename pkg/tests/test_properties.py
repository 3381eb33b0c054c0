"""Randomized invariants over generated behaviors."""

import json

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from spacelike import io
from spacelike.core import (Context, JointBehavior, equivalent_observations, signaling_measure,
                            total_probability_error, validate)
from spacelike.core.types import Behavior
from spacelike.space import (lipschitz_constant, openness_radius, perturb_in_ball,
                             project_no_signaling, signaling, sup_distance)

from conftest import naive_signaling


@st.composite
def joint_behaviors(draw, max_preps=2, max_ctx=3, max_out=3):
    preps = draw(st.integers(1, max_preps))
    n_local = draw(st.lists(st.integers(1, max_out), min_size=1, max_size=max_ctx))
    n_remote = draw(st.lists(st.integers(1, max_out), min_size=1, max_size=max_ctx))
    seed = draw(st.integers(0, 2**32 - 1))
    sparsity = draw(st.sampled_from([0.0, 0.3, 0.7]))
    rng = np.random.default_rng(seed)
    table = []
    for _ in range(preps):
        tw = []
        for n in n_local:
            te = []
            for m in n_remote:
                b = rng.random((n, m)) * (rng.random((n, m)) >= sparsity)
                b.flat[rng.integers(n * m)] += 0.5
                te.append(b / b.sum())
            tw.append(te)
        table.append(tw)
    return JointBehavior([f"W{k}" for k in range(preps)],
                         [Context.numbered(f"E{k}", n) for k, n in enumerate(n_local)],
                         [Context.numbered(f"D{k}", m) for k, m in enumerate(n_remote)], table)


@settings(max_examples=150, deadline=None)
@given(joint_behaviors())
def test_measure_matches_bruteforce(jb):
    rep = signaling_measure(jb)
    r, l = naive_signaling(jb)
    assert abs(rep.sig_to_remote - r) <= 1e-15
    assert abs(rep.sig_to_local - l) <= 1e-15


@settings(max_examples=150, deadline=None)
@given(joint_behaviors())
def test_total_probability(jb):
    assert total_probability_error(jb) <= 1e-12


@settings(max_examples=100, deadline=None)
@given(joint_behaviors())
def test_json_round_trip(jb):
    back = io.behavior_from_dict(io.behavior_to_dict(jb))
    assert back == jb
    text = io.dumps(io.behavior_to_dict(jb))
    assert io.dumps(io.behavior_to_dict(io.behavior_from_dict(json.loads(text)))) == text


@settings(max_examples=60, deadline=None)
@given(joint_behaviors(), st.integers(0, 2**32 - 1), st.sampled_from([1e-1, 1e-3, 1e-6]))
def test_lipschitz(jb, seed, eps):
    Q = perturb_in_ball(jb, eps, seed)
    assert sup_distance(jb, Q) <= eps
    assert validate(Q, 1e-12) == []
    assert abs(signaling(jb) - signaling(Q)) <= lipschitz_constant(jb) * sup_distance(jb, Q) + 1e-15


@settings(max_examples=60, deadline=None)
@given(joint_behaviors(), st.integers(0, 2**32 - 1))
def test_openness(jb, seed):
    r = openness_radius(jb)
    if r > 0:
        Q = perturb_in_ball(jb, 0.99 * r, seed, on_sphere=True)
        assert signaling(Q) > 0


@settings(max_examples=40, deadline=None)
@given(joint_behaviors(max_out=3))
def test_projection_feasible_and_idempotent(jb):
    N = project_no_signaling(jb)
    assert signaling(N) <= 1e-9
    assert validate(N, 1e-12) == []
    assert N.data.min() >= 0
    assert sup_distance(project_no_signaling(N), N) <= 1e-9


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 6), st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_observation_relabeling(n, preps, seed):
    rng = np.random.default_rng(seed)
    perm = rng.permutation(n)
    rows = rng.dirichlet(np.ones(n), size=preps)
    b = Behavior([f"W{k}" for k in range(preps)],
                 [Context.numbered("E", n), Context("F", [f"o{k}" for k in perm])],
                 [[r, r[perm]] for r in rows])
    pi = equivalent_observations(b, "E", "F", 1e-12)
    assert pi == {str(k): f"o{k}" for k in range(n)}
