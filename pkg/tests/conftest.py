import itertools
import os
import sys

import numpy as np
import pytest

from spacelike.core import Behavior, Context, JointBehavior

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
FIXTURES = os.path.join(ROOT, "fixtures")


def random_joint(rng, preps=2, n_local=(2, 2), n_remote=(2, 2), zeros=0.0):
    """Joint behavior with independently random blocks.

    ``n_local`` / ``n_remote`` give the outcome count of each context; with
    ``zeros`` > 0 that fraction of entries is set to exactly zero before
    renormalizing (each block keeps at least one positive entry).
    """
    loc = [Context.numbered(f"E{k}", n) for k, n in enumerate(n_local)]
    rem = [Context.numbered(f"D{k}", m) for k, m in enumerate(n_remote)]
    table = []
    for _ in range(preps):
        tw = []
        for n in n_local:
            te = []
            for m in n_remote:
                b = rng.random((n, m))
                if zeros:
                    mask = rng.random((n, m)) < zeros
                    mask.flat[rng.integers(n * m)] = False
                    b[mask] = 0.0
                te.append(b / b.sum())
            tw.append(te)
        table.append(tw)
    return JointBehavior([f"W{k}" for k in range(preps)], loc, rem, table)


def random_behavior(rng, preps=2, outcomes=(2, 3)):
    ctx = [Context.numbered(f"E{k}", n) for k, n in enumerate(outcomes)]
    table = [[(lambda r: r / r.sum())(rng.random(n)) for n in outcomes] for _ in range(preps)]
    return Behavior([f"W{k}" for k in range(preps)], ctx, table)


def naive_signaling(jb):
    """Loop-based oracle: (sig_to_remote, sig_to_local) from nested lists."""
    t = jb.to_nested()
    L, R = jb.local_contexts, jb.remote_contexts
    to_remote = to_local = 0.0
    for w in range(len(jb.preparations)):
        for d, dc in enumerate(R):
            for j in range(dc.n):
                vals = [sum(t[w][e][d][i][j] for i in range(L[e].n)) for e in range(len(L))]
                to_remote = max(to_remote, max(vals) - min(vals))
        for e, ec in enumerate(L):
            for i in range(ec.n):
                vals = [sum(t[w][e][d][i][j] for j in range(R[d].n)) for d in range(len(R))]
                to_local = max(to_local, max(vals) - min(vals))
    return to_remote, to_local


def naive_reference_deviation(jb, ref):
    t = jb.to_nested()
    dev = 0.0
    for w, e, d in itertools.product(range(len(jb.preparations)), range(len(jb.local_contexts)),
                                     range(len(jb.remote_contexts))):
        for i in range(jb.local_contexts[e].n):
            s = sum(t[w][e][d][i])
            dev = max(dev, abs(s - ref.row(w, e)[i]))
    return dev


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def fixtures_dir():
    return FIXTURES


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is not None and module.RESULTS:
        RESULTS = module.RESULTS
        terminalreporter.section("acceptance criteria")
        for k in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[k])
