"""Self-testing: run every disease's own positive indicator set through the engine.

Feeding a disease its full positive-weight indicator set drives that disease's
agreement to exactly 1, so the resulting likelihood is the best value the
knowledge base can ever produce for it. The per-disease optimal likelihoods
form a profile that characterizes how separable the diseases are.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .engine import DiagnosisResult, ResponseMatrix, diagnose
from .kb import KnowledgeBase, UnknownDiseaseError


@dataclass(frozen=True)
class FormalResponseSet:
    """Every positive-weight (symptom, indicator) pair of one disease."""

    disease_index: int
    responses: ResponseMatrix


@dataclass(frozen=True)
class OptimalProfile:
    kb_version: int
    lo_percent: dict[int, int]       # optimal likelihood, rounded to whole percent
    lo_exact: dict[int, float]       # optimal likelihood, unrounded percent
    delta_sigma: dict[int, float]    # each disease's deviation in its own run
    mean_percent: float
    sigma_percent: float             # population spread of the unrounded profile
    max_percent: int
    max_diseases: tuple[int, ...]
    min_percent: int
    min_diseases: tuple[int, ...]

    def to_payload(self) -> dict:
        return {
            "kb_version": self.kb_version,
            "entries": [
                {
                    "d": d,
                    "lo_percent": self.lo_percent[d],
                    "lo_exact_percent": self.lo_exact[d],
                    "delta_sigma": self.delta_sigma[d],
                }
                for d in sorted(self.lo_percent)
            ],
            "mean_percent": self.mean_percent,
            "sigma_percent": self.sigma_percent,
            "max": {"percent": self.max_percent, "diseases": list(self.max_diseases)},
            "min": {"percent": self.min_percent, "diseases": list(self.min_diseases)},
        }


def round_half_up(value: float) -> int:
    return math.floor(value + 0.5)


def formal_responses(kb: KnowledgeBase, d: int) -> FormalResponseSet:
    """The confirmed-pair set {(s,i) : weight(d,s,i) > 0}."""
    if d not in kb.diseases:
        raise UnknownDiseaseError(d)
    pairs = {(s, i) for (dd, s, i), w in kb.weights.items() if dd == d and w > 0}
    return FormalResponseSet(disease_index=d,
                             responses=ResponseMatrix(confirmed=frozenset(pairs)))


def self_test(kb: KnowledgeBase, d: int) -> DiagnosisResult:
    """Diagnose the disease's own formal responses; its agreement comes out 1."""
    formal = formal_responses(kb, d)
    return diagnose(kb, formal.responses)


def optimal_likelihood_profile(kb: KnowledgeBase) -> OptimalProfile:
    """Self-test every disease and collect the optimal likelihood statistics."""
    lo_exact: dict[int, float] = {}
    delta_sigma: dict[int, float] = {}
    for d in sorted(kb.diseases):
        result = self_test(kb, d)
        lo = Fraction(0) if result.likelihood is None else result.likelihood[d]
        lo_exact[d] = float(lo) * 100.0
        delta_sigma[d] = (0.0 if result.stats.deltas is None
                          else result.stats.deltas[d])
    lo_percent = {d: round_half_up(v) for d, v in lo_exact.items()}
    n = len(lo_exact)
    mean = sum(lo_exact.values()) / n
    sigma = math.sqrt(sum((v - mean) ** 2 for v in lo_exact.values()) / n)
    max_pct = max(lo_percent.values())
    min_pct = min(lo_percent.values())
    return OptimalProfile(
        kb_version=kb.version,
        lo_percent=lo_percent,
        lo_exact=lo_exact,
        delta_sigma=delta_sigma,
        mean_percent=mean,
        sigma_percent=sigma,
        max_percent=max_pct,
        max_diseases=tuple(d for d in sorted(lo_percent) if lo_percent[d] == max_pct),
        min_percent=min_pct,
        min_diseases=tuple(d for d in sorted(lo_percent) if lo_percent[d] == min_pct),
    )
