"""Classify an extension of a local theory by a remote detector.

Any such extension either admits context-independent conditioning on the
detector outcomes, or lets one region signal to the other, or disagrees with
the local theory it was meant to extend.  Disagreement with the reference is
reported as signaling towards the local region, since running the detector
then changes local statistics.
"""

import enum
from dataclasses import dataclass

from ..tolerances import TAU_SIG, TAU_ZERO
from .conditioning import Conditioned, conditioned_family
from .signaling import SignalingReport, signaling_measure
from .types import Behavior, JointBehavior


class Verdict(str, enum.Enum):
    NO_SIGNALING_COLLAPSE = "NoSignaling+Collapse"
    SIGNALS_REMOTE_TO_LOCAL = "SignalsRemoteToLocal"
    SIGNALS_LOCAL_TO_REMOTE = "SignalsLocalToRemote"
    BOTH = "Both"


@dataclass(frozen=True)
class ExtensionDiagnosis:
    verdict: Verdict
    report: SignalingReport
    # {(preparation, detector, outcome): (c_j, behavior)}; None when the
    # detector statistics depend on the local context.
    conditioned: dict = None

    def to_dict(self):
        out = {"verdict": self.verdict.value, "report": self.report.to_dict(), "conditioned": None}
        if self.conditioned is not None:
            out["conditioned"] = [
                {"preparation": w, "detector": d, "outcome": j, "probability": c.probability,
                 "behavior": [[float(x) for x in c.behavior.row(0, k)]
                              for k in range(len(c.behavior.contexts))]}
                for (w, d, j), c in self.conditioned.items()]
        return out


def diagnose_extension(jb: JointBehavior, reference: Behavior, *, tau_sig=TAU_SIG,
                       tau_zero=TAU_ZERO) -> ExtensionDiagnosis:
    """Verdict plus, when detector statistics are context independent, every
    conditioned state ``W|j`` with ``c_j > tau_zero``."""
    report = signaling_measure(jb, reference)
    to_remote = report.sig_to_remote > tau_sig
    to_local = report.sig_to_local > tau_sig
    if to_remote and to_local:
        verdict = Verdict.BOTH
    elif to_remote:
        verdict = Verdict.SIGNALS_LOCAL_TO_REMOTE
    elif to_local:
        verdict = Verdict.SIGNALS_REMOTE_TO_LOCAL
    else:
        verdict = Verdict.NO_SIGNALING_COLLAPSE
    conditioned = None
    if not to_remote:
        conditioned = {}
        for w in jb.preparations:
            for dc in jb.remote_contexts:
                fam = conditioned_family(jb, w, dc.name, tau_sig=tau_sig, tau_zero=tau_zero)
                for label, cond in fam.items():
                    conditioned[(w, dc.name, label)] = Conditioned(*cond)
    return ExtensionDiagnosis(verdict, report, conditioned)
