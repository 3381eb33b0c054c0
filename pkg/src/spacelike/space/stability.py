"""Monte Carlo evidence that signaling theories are open and dense.

Each trial ``k`` draws from its own generator seeded by ``(seed, k)``, so
results do not depend on chunking or evaluation order.
"""

import csv
from dataclasses import dataclass, field

import numpy as np

from ..core.signaling import signaling_values
from ..errors import SpacelikeError
from .projection import project_no_signaling
from .theory import (Structure, _template, construct_signaling_perturbation, openness_radius,
                     perturb_flat, sample_flat, signaling, sup_distance)

HIST_EDGES = (0.0, 1e-12, 1e-10, 1e-8, 1e-6, 1e-4, 1e-3, 1e-2, 1e-1, 1.0)
DENSITY_EPS = (1e-2, 1e-4)
CHUNK = 10_000


@dataclass
class StabilityResult:
    structure: str
    trials: int
    tol: float
    seed: int
    signaling_fraction: float
    min_sig: float
    max_sig: float
    histogram: dict
    density_check: dict
    openness_check: dict
    sig_to_remote: np.ndarray = field(repr=False, default=None)
    sig_to_local: np.ndarray = field(repr=False, default=None)

    def to_dict(self):
        return {
            "structure": self.structure, "trials": self.trials, "tol": self.tol,
            "seed": self.seed, "signaling_fraction": self.signaling_fraction,
            "min_sig": self.min_sig, "max_sig": self.max_sig, "histogram": self.histogram,
            "density_check": self.density_check, "openness_check": self.openness_check,
        }

    def write_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["index", "sig_to_remote", "sig_to_local"])
            for k, (a, b) in enumerate(zip(self.sig_to_remote, self.sig_to_local)):
                w.writerow([k, repr(float(a)), repr(float(b))])


def trial_rng(seed, *path):
    return np.random.default_rng([int(seed), *path])


def trial_point(tpl, seed, k):
    """The ``k``-th sampled theory of an experiment."""
    return tpl.with_data(sample_flat(trial_rng(seed, k), tpl.block_ptr()))


def density_check(points, eps_values=DENSITY_EPS):
    """Project each point to no-signaling, then break it at every eps.

    Success means the perturbed theory is within ``eps`` and signals.
    """
    attempted = succeeded = 0
    failures = []
    for k, P in points:
        try:
            N = project_no_signaling(P)
        except SpacelikeError as exc:
            attempted += len(eps_values)
            failures.append({"point": k, "error": str(exc)})
            continue
        for eps in eps_values:
            attempted += 1
            try:
                Q = construct_signaling_perturbation(N, eps)
            except SpacelikeError as exc:
                failures.append({"point": k, "eps": eps, "error": str(exc)})
                continue
            if sup_distance(N, Q) <= eps and signaling(Q) > 0:
                succeeded += 1
            else:
                failures.append({"point": k, "eps": eps, "error": "check failed"})
    return {"eps": list(eps_values), "attempted": attempted, "succeeded": succeeded,
            "failures": failures}


def openness_check(points, probes, seed, factor=0.9):
    """Probe each signaling point at ``factor * openness_radius``; count
    probes that stopped signaling."""
    counterexamples = 0
    min_probe_sig = np.inf
    used = 0
    for k, P in points:
        r = openness_radius(P)
        if r <= 0:
            continue
        used += 1
        X = perturb_flat(P.data, P.block_ptr(), factor * r, trial_rng(seed, k, 1), probes,
                         on_sphere=True)
        sr, sl = signaling_values(P, X)
        sig = np.maximum(sr, sl)
        counterexamples += int(np.sum(sig <= 0))
        min_probe_sig = min(min_probe_sig, float(sig.min()))
    return {"points": used, "probes_per_point": probes, "radius_factor": factor,
            "counterexamples": counterexamples,
            "min_probe_sig": None if used == 0 else min_probe_sig}


def stability_experiment(structure, trials, tol=1e-6, seed=0, *, density_points=10,
                         openness_points=10, probes=100, eps_values=DENSITY_EPS):
    """Sample ``trials`` uniform theories and measure how many signal.

    Also runs the density check on the first ``density_points`` samples and
    the openness check on the first ``openness_points``.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    tpl = _template(structure)
    bptr = tpl.block_ptr()
    sr = np.empty(trials)
    sl = np.empty(trials)
    for start in range(0, trials, CHUNK):
        stop = min(trials, start + CHUNK)
        X = np.stack([sample_flat(trial_rng(seed, k), bptr) for k in range(start, stop)])
        sr[start:stop], sl[start:stop] = signaling_values(tpl, X)
    sig = np.maximum(sr, sl)
    counts, _ = np.histogram(np.clip(sig, 0.0, 1.0), bins=HIST_EDGES)
    n_dense = min(density_points, trials)
    n_open = min(openness_points, trials)
    return StabilityResult(
        structure=str(Structure.of(tpl)), trials=trials, tol=tol, seed=seed,
        signaling_fraction=float(np.mean(sig > tol)),
        min_sig=float(sig.min()), max_sig=float(sig.max()),
        histogram={"edges": list(HIST_EDGES), "counts": counts.tolist()},
        density_check=density_check([(k, trial_point(tpl, seed, k)) for k in range(n_dense)],
                                    eps_values),
        openness_check=openness_check([(k, trial_point(tpl, seed, k)) for k in range(n_open)],
                                      probes, seed),
        sig_to_remote=sr, sig_to_local=sl)
