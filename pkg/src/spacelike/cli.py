"""spacelike: no-signaling, conditioning and theory-space tools for two-region behaviors.

All results are JSON on stdout (or the ``-o`` path).  Exit status: 0 success,
1 invalid input or failed validation, 2 usage error.
"""

import argparse
import sys

import numpy as np

from . import __version__, io
from ._kernels import BACKEND
from .core import (Behavior, JointBehavior, condition, diagnose_extension,
                   equivalent_observations, equivalent_preparations, marginal_local,
                   marginal_remote, permutation_deviation, signaling_measure, validate)
from .errors import InvalidInputError, SpacelikeError
from .quantum import (BipartiteSetup, DensityMatrix, bipartite_behavior, joint_probability,
                      post_condition_table, post_condition_witness, pre_condition,
                      reference_behavior, sequential_behavior, validate_measurement,
                      validate_state)
from .space import (Structure, WeakProbe, construct_signaling_perturbation, openness_radius,
                    perturb_in_ball, project_no_signaling_detailed, sample_theory, signaling,
                    stability_experiment, sup_distance, weak_distance)
from .tolerances import TAU_NORM, TAU_SIG

DEFAULT_SEED = 1729

EPILOG = f"""\
Default random seed: {DEFAULT_SEED} (override with --seed).
Tolerance defaults come from the environment: SPACELIKE_TAU_NORM (normalization,
default 1e-9), SPACELIKE_TAU_SIG (no-signaling equalities, 1e-9), SPACELIKE_TAU_ZERO
(smallest conditioning probability, 1e-12), SPACELIKE_TAU_QUANTUM (quantum
validation, 1e-10).  Kernel backend: {BACKEND} (SPACELIKE_PURE_PYTHON=1 forces numpy).
"""


class _Failure(Exception):
    """Exit with status 1 after printing a JSON payload."""

    def __init__(self, payload):
        super().__init__()
        self.payload = payload


def _emit(obj, out=None):
    text = io.dumps(obj)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_behavior(b, out, summary=None):
    """Behavior to ``out`` (summary to stdout), or the behavior to stdout."""
    if out:
        io.save_behavior(b, out)
        _emit(dict(summary or {}, output=out))
    else:
        _emit(io.behavior_to_dict(b))


def _joint(path):
    b = io.load_behavior(path)
    if not isinstance(b, JointBehavior):
        raise InvalidInputError(f"{path}: expected a joint behavior (with remote_contexts)")
    return b


def _joint_or_setup(path):
    """Joint behavior and its default reference (the reduced-state local
    theory for bipartite setup files, otherwise None)."""
    data = io.load_json(path)
    if isinstance(data, dict) and "dims" in data:
        setup = io.setup_from_dict(data)
        if isinstance(setup, BipartiteSetup):
            return bipartite_behavior(setup), reference_behavior(setup)
        return sequential_behavior(setup), None
    b = io.behavior_from_dict(data)
    if not isinstance(b, JointBehavior):
        raise InvalidInputError(f"{path}: expected a joint behavior (with remote_contexts)")
    return b, None


def _single(path):
    b = io.load_behavior(path)
    if not isinstance(b, Behavior):
        raise InvalidInputError(f"{path}: expected a single-region behavior")
    return b


def _pair(text, flag):
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 2 or not all(parts):
        raise argparse.ArgumentTypeError(f"{flag} expects two comma-separated names")
    return parts


# -- behavior commands ------------------------------------------------------

def _setup_violations(data):
    out = []
    state = DensityMatrix(io.decode_matrix(data["state"], "state"))
    out += [dict(v.to_dict(), object="state") for v in validate_state(state)]
    dims = [int(x) for x in data["dims"]]
    sides = (("local_measurements", dims[0]),
             ("remote_measurements", dims[-1]))
    for key, d in sides:
        for m in data.get(key, []):
            meas = io._measurement_from_dict(m)
            if meas.dim != d:
                out.append({"kind": "dimension", "index": [meas.name], "magnitude": abs(meas.dim - d),
                            "object": key})
            out += [dict(v.to_dict(), object=key) for v in validate_measurement(meas)]
    if len(dims) == 2 and state.dim != dims[0] * dims[1]:
        out.append({"kind": "dimension", "index": [], "magnitude": abs(state.dim - dims[0] * dims[1]),
                    "object": "state"})
    return out


def cmd_validate(args):
    data = io.load_json(args.file)
    if isinstance(data, dict) and "dims" in data:
        violations = _setup_violations(data)
        kind = "setup"
    else:
        b = io.behavior_from_dict(data)
        violations = [v.to_dict() for v in validate(b, args.tol)]
        kind = "joint_behavior" if isinstance(b, JointBehavior) else "behavior"
    result = {"type": kind, "valid": not violations, "violations": violations}
    if violations:
        raise _Failure(result)
    _emit(result, args.output)


def cmd_marginal(args):
    jb = _joint(args.file)
    fn = marginal_local if args.region == "local" else marginal_remote
    rows = []
    for (w, e, d), _ in jb.blocks():
        ec, dc = jb.local_contexts[e], jb.remote_contexts[d]
        outcomes = ec.outcomes if args.region == "local" else dc.outcomes
        rows.append({"preparation": jb.preparations[w], "local_context": ec.name,
                     "remote_context": dc.name, "outcomes": list(outcomes),
                     "marginal": fn(jb, w, e, d)})
    _emit({"region": args.region, "marginals": rows}, args.output)


def cmd_condition(args):
    jb = _joint(args.file)
    c, beh = condition(jb, args.prep, args.detector, args.outcome, tau_sig=args.tol)
    _emit({"probability": c, "preparation": beh.preparations[0],
           "behavior": io.behavior_to_dict(beh)}, args.output)


def cmd_sig(args):
    jb, _ = _joint_or_setup(args.file)
    ref = _single(args.reference) if args.reference else None
    rep = signaling_measure(jb, ref)
    _emit(dict(rep.to_dict(), tol=args.tol, signaling=rep.value > args.tol), args.output)


def cmd_diagnose(args):
    jb, ref = _joint_or_setup(args.file)
    if args.reference:
        ref = _single(args.reference)
    if ref is None:
        raise InvalidInputError("diagnose needs --reference unless given a bipartite setup")
    diag = diagnose_extension(jb, ref, tau_sig=args.tol)
    _emit(diag.to_dict(), args.output)


def cmd_equiv(args):
    b = io.load_behavior(args.file)
    if isinstance(b, JointBehavior):
        raise InvalidInputError("equiv works on single-region behaviors")
    if args.preps:
        w1, w2 = args.preps
        res = equivalent_preparations(b, w1, w2, args.tol)
        out = {"preparations": [w1, w2], "equivalent": res.equivalent,
               "deviation": res.deviation, "tol": args.tol}
    else:
        e1, e2 = args.contexts
        pi = equivalent_observations(b, e1, e2, args.tol)
        out = {"contexts": [e1, e2], "equivalent": pi is not None, "permutation": pi,
               "deviation": None if pi is None else permutation_deviation(b, e1, e2, pi),
               "tol": args.tol}
    _emit(out, args.output)


# -- quantum commands -------------------------------------------------------

def _sequential_pair(setup, first, second):
    """(rho, A, B) on one space; bipartite setups are lifted to d_A * d_B."""
    if isinstance(setup, BipartiteSetup):
        da, db = setup.dims
        A = setup.local(first).lifted(right=db)
        B = setup.remote(second).lifted(left=da) if second is not None else None
        return setup.state, A, B
    return setup.state, setup.first(first), (setup.second(second) if second is not None else None)


def cmd_qm_behavior(args):
    setup = io.load_setup(args.setup)
    if args.reference:
        if not isinstance(setup, BipartiteSetup):
            raise InvalidInputError("--reference needs a bipartite setup")
        b = reference_behavior(setup)
    elif isinstance(setup, BipartiteSetup):
        b = bipartite_behavior(setup)
    else:
        b = sequential_behavior(setup)
    _emit_behavior(b, args.output, {"type": type(b).__name__})


def cmd_qm_joint(args):
    setup = io.load_setup(args.setup)
    rho, A, B = _sequential_pair(setup, args.first, args.second)
    _emit({"first": A.name, "second": B.name, "first_outcomes": list(A.outcomes),
           "second_outcomes": list(B.outcomes), "table": joint_probability(rho, A, B)},
          args.output)


def cmd_qm_precondition(args):
    setup = io.load_setup(args.setup)
    rho, A, B = _sequential_pair(setup, args.first, args.second)
    p, rho_i = pre_condition(rho, (A, args.outcome))
    out = {"first": A.name, "outcome": A.outcomes[A.index(args.outcome)], "probability": p,
           "state": io.encode_matrix(rho_i.matrix)}
    if B is not None:
        out["second"] = B.name
        out["conditional"] = [rho_i.expectation(q) for q in B.projectors]
    _emit(out, args.output)


def cmd_qm_postcondition(args):
    setup = io.load_setup(args.setup)
    rho, A, B = _sequential_pair(setup, args.first, args.second)
    table = post_condition_table(rho, A, B)
    out = {"first": A.name, "second": B.name, "first_outcomes": list(A.outcomes),
           "second_outcomes": list(B.outcomes)}
    if args.outcome is not None:
        j = B.index(args.outcome)
        out["outcome"] = B.outcomes[j]
        out["posterior"] = table[:, j]
    else:
        out["table"] = table
    _emit(out, args.output)


def cmd_qm_witness(args):
    data = io.load_json(args.setup)
    setup = io.setup_from_dict(data)
    meta = data.get("witness", {})
    first = args.first or meta.get("first")
    alt = args.alt or meta.get("first_alt")
    detector = args.detector or meta.get("detector")
    shared = meta.get("shared", {})
    shared_outcome = args.shared_outcome if args.shared_outcome is not None else shared.get("outcome")
    if None in (first, alt, detector, shared_outcome):
        raise InvalidInputError("witness needs --first, --alt, --detector and --shared-outcome "
                                "(or a 'witness' block in the setup file)")
    rho, A, B = _sequential_pair(setup, first, detector)
    _, A2, _ = _sequential_pair(setup, alt, None)
    P = A.projectors[A.index(shared_outcome)]
    out = {"first": A.name, "alt": A2.name, "detector": B.name, "shared_outcome": shared_outcome,
           "deviation": post_condition_witness(rho, B, P, A, A2)}
    control = args.control or meta.get("control_detector")
    if control:
        _, _, C = _sequential_pair(setup, first, control)
        out["control_detector"] = C.name
        out["control_deviation"] = post_condition_witness(rho, C, P, A, A2)
    _emit(out, args.output)


# -- theory-space commands --------------------------------------------------

def cmd_space_sample(args):
    P = sample_theory(Structure.parse(args.structure), args.seed)
    _emit_behavior(P, args.output, {"structure": args.structure, "seed": args.seed,
                                    "sig": signaling(P)})


def cmd_space_perturb(args):
    P = _joint(args.file)
    if args.signaling:
        Q = construct_signaling_perturbation(P, args.eps, direction=args.direction, tau_sig=args.tol)
    else:
        Q = perturb_in_ball(P, args.eps, args.seed, on_sphere=args.sphere)
    _emit_behavior(Q, args.output, {"eps": args.eps, "distance": sup_distance(P, Q),
                                    "sig": signaling(Q)})


def cmd_space_project(args):
    P = _joint(args.file)
    res = project_no_signaling_detailed(P, max_iter=args.max_iter)
    _emit_behavior(res.point, args.output,
                   {"iterations": res.iterations, "sig": res.sig,
                    "simplex_violation": res.simplex_violation,
                    "distance": sup_distance(P, res.point)})


def cmd_space_radius(args):
    P = _joint(args.file)
    _emit({"sig": signaling(P), "openness_radius": openness_radius(P)}, args.output)


def cmd_space_distance(args):
    P, Q = _joint(args.file), _joint(args.other)
    if args.preps or args.pairs:
        preps = args.preps.split(",") if args.preps else P.preparations
        pairs = ([tuple(p.split(":")) for p in args.pairs.split(",")] if args.pairs else
                 [(e.name, d.name) for e in P.local_contexts for d in P.remote_contexts])
        probe = WeakProbe(preps, pairs, 1.0)
    else:
        probe = WeakProbe.full(P, 1.0)
    _emit({"weak_distance": weak_distance(P, Q, probe)}, args.output)


def cmd_space_stability(args):
    res = stability_experiment(Structure.parse(args.structure), args.trials, args.tol, args.seed,
                               density_points=args.density_points,
                               openness_points=args.openness_points, probes=args.probes)
    if args.csv:
        res.write_csv(args.csv)
    _emit(res.to_dict(), args.output)


def cmd_fixtures(args):
    from .fixtures import write_fixtures
    _emit({"written": write_fixtures(args.directory)})


# -- parser -----------------------------------------------------------------

def _add_output(p):
    p.add_argument("-o", "--output", help="write result here instead of stdout")


def build_parser():
    fmt = argparse.RawDescriptionHelpFormatter
    parser = argparse.ArgumentParser(prog="spacelike", description=__doc__.splitlines()[0],
                                     epilog=EPILOG, formatter_class=fmt)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("validate", help="check normalization / quantum invariants")
    p.add_argument("file")
    p.add_argument("--tol", type=float, default=TAU_NORM)
    _add_output(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("marginal", help="local or remote marginals of every block")
    p.add_argument("file")
    p.add_argument("--region", choices=["local", "remote"], required=True)
    _add_output(p)
    p.set_defaults(func=cmd_marginal)

    p = sub.add_parser("condition", help="conditioned (collapsed) behavior W|j")
    p.add_argument("file")
    p.add_argument("--prep", required=True)
    p.add_argument("--detector", required=True)
    p.add_argument("--outcome", required=True)
    p.add_argument("--tol", type=float, default=TAU_SIG)
    _add_output(p)
    p.set_defaults(func=cmd_condition)

    p = sub.add_parser("sig", help="signaling measure")
    p.add_argument("file")
    p.add_argument("--reference")
    p.add_argument("--tol", type=float, default=TAU_SIG)
    _add_output(p)
    p.set_defaults(func=cmd_sig)

    p = sub.add_parser("diagnose", help="classify an extension against a local theory")
    p.add_argument("file", help="joint behavior, or a bipartite setup (reference defaults "
                                "to its reduced-state local theory)")
    p.add_argument("--reference")
    p.add_argument("--tol", type=float, default=TAU_SIG)
    _add_output(p)
    p.set_defaults(func=cmd_diagnose)

    p = sub.add_parser("equiv", help="statistical equivalence of preparations or contexts")
    p.add_argument("file")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--preps", type=lambda s: _pair(s, "--preps"), metavar="W,W'")
    g.add_argument("--contexts", type=lambda s: _pair(s, "--contexts"), metavar="E,E'")
    p.add_argument("--tol", type=float, default=1e-9)
    _add_output(p)
    p.set_defaults(func=cmd_equiv)

    qm = sub.add_parser("qm", help="quantum backend").add_subparsers(
        dest="qm_command", required=True, metavar="QM_COMMAND")
    p = qm.add_parser("behavior", help="setup file -> behavior file")
    p.add_argument("setup")
    p.add_argument("--reference", action="store_true",
                   help="emit the reduced-state local theory instead of the joint behavior")
    _add_output(p)
    p.set_defaults(func=cmd_qm_behavior)
    for name, func, help_ in (("joint", cmd_qm_joint, "P(i, j) for A then B"),
                              ("precondition", cmd_qm_precondition, "state after A = i"),
                              ("postcondition", cmd_qm_postcondition, "P(i | j)")):
        p = qm.add_parser(name, help=help_)
        p.add_argument("setup")
        p.add_argument("--first", "--local", dest="first", required=True)
        p.add_argument("--second", "--remote", dest="second", required=(name != "precondition"))
        if name == "precondition":
            p.add_argument("--outcome", required=True)
        if name == "postcondition":
            p.add_argument("--outcome")
        _add_output(p)
        p.set_defaults(func=func)
    p = qm.add_parser("witness", help="post-conditioning dependence on co-measured projectors")
    p.add_argument("setup")
    p.add_argument("--first")
    p.add_argument("--alt")
    p.add_argument("--detector")
    p.add_argument("--control")
    p.add_argument("--shared-outcome")
    _add_output(p)
    p.set_defaults(func=cmd_qm_witness)

    sp = sub.add_parser("space", help="theory-space experiments").add_subparsers(
        dest="space_command", required=True, metavar="SPACE_COMMAND")
    p = sp.add_parser("sample", help="uniform random theory")
    p.add_argument("--structure", required=True, help="PxLxRxN or PxLxRxNxM")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    _add_output(p)
    p.set_defaults(func=cmd_space_sample)
    p = sp.add_parser("perturb", help="random or signaling perturbation")
    p.add_argument("file")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--sphere", action="store_true", help="displacement exactly eps")
    p.add_argument("--signaling", action="store_true",
                   help="deterministic signaling perturbation of a no-signaling theory")
    p.add_argument("--direction", choices=["to_remote", "to_local", "any"], default="to_remote")
    p.add_argument("--tol", type=float, default=TAU_SIG)
    _add_output(p)
    p.set_defaults(func=cmd_space_perturb)
    p = sp.add_parser("project", help="nearest no-signaling theory")
    p.add_argument("file")
    p.add_argument("--max-iter", type=int, default=10_000)
    _add_output(p)
    p.set_defaults(func=cmd_space_project)
    p = sp.add_parser("radius", help="openness radius")
    p.add_argument("file")
    _add_output(p)
    p.set_defaults(func=cmd_space_radius)
    p = sp.add_parser("distance", help="weak (probe) distance between two theories")
    p.add_argument("file")
    p.add_argument("other")
    p.add_argument("--preps", help="comma-separated preparations to probe")
    p.add_argument("--pairs", help="comma-separated E:D context pairs to probe")
    _add_output(p)
    p.set_defaults(func=cmd_space_distance)
    p = sp.add_parser("stability", help="open/dense Monte Carlo experiment")
    p.add_argument("--structure", default="2x2x2x2")
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--density-points", type=int, default=10)
    p.add_argument("--openness-points", type=int, default=10)
    p.add_argument("--probes", type=int, default=100)
    p.add_argument("--csv", help="per-trial sig_to_remote / sig_to_local")
    _add_output(p)
    p.set_defaults(func=cmd_space_stability)

    p = sub.add_parser("fixtures", help="write the shipped scenario files")
    p.add_argument("directory", nargs="?", default="fixtures")
    p.set_defaults(func=cmd_fixtures)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.func(args)
    except _Failure as f:
        sys.stdout.write(io.dumps(f.payload))
        return 1
    except (SpacelikeError, ValueError) as exc:
        print(f"spacelike: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
