"""Plain-text rendering of diagnosis results, self-test profiles, and reports.

All percentages are printed with one decimal; relative deviations with two.
"""

from __future__ import annotations

from .engine import DiagnosisResult
from .selftest import OptimalProfile


def _pct(value: float | None) -> str:
    return "-" if value is None else f"{value:.1f}"


def _delta(value: float | None) -> str:
    return "-" if value is None else f"{value:+.2f}"


def result_table(result: DiagnosisResult) -> str:
    width = max(len(name) for name in result.disease_names.values())
    lines = [f"  d  {'disease'.ljust(width)}      A%      L%   delta"]
    for d in sorted(result.agreement):
        a = float(result.agreement[d]) * 100.0
        l = None if result.likelihood is None else float(result.likelihood[d]) * 100.0
        delta = None if result.stats.deltas is None else result.stats.deltas[d]
        marker = "*" if d == result.selected else " "
        lines.append(f"{marker}{d:3d}  {result.disease_names[d].ljust(width)}  "
                     f"{_pct(a):>6}  {_pct(l):>6}  {_delta(delta):>6}")
    return "\n".join(lines)


def result_block(result: DiagnosisResult) -> str:
    lines = [result_table(result)]
    if result.stats.sigma > 0:
        mean = float(result.stats.mean) * 100.0
        sigma = result.stats.sigma * 100.0
        lines.append(f"reference levels: mean {mean:.1f}%, "
                     f"+1 sigma {mean + sigma:.1f}%, +2 sigma {mean + 2 * sigma:.1f}%")
    lines.append(f"selected: {result.selected} {result.selected_name} "
                 f"(reliability: {result.reliability})")
    return "\n".join(lines)


def profile_table(profile: OptimalProfile, disease_names: dict[int, str]) -> str:
    width = max(len(name) for name in disease_names.values())
    lines = [f"  d  {'disease'.ljust(width)}    L_o%   delta"]
    for d in sorted(profile.lo_percent):
        lines.append(f"{d:3d}  {disease_names[d].ljust(width)}  "
                     f"{profile.lo_percent[d]:5d}  {_delta(profile.delta_sigma[d]):>6}")
    return "\n".join(lines)


def profile_block(profile: OptimalProfile, disease_names: dict[int, str]) -> str:
    vector = ", ".join(str(profile.lo_percent[d]) for d in sorted(profile.lo_percent))
    return "\n".join([
        profile_table(profile, disease_names),
        f"L_o = ({vector})%",
        f"mean {profile.mean_percent:.1f}%  sigma {profile.sigma_percent:.1f}%",
        f"max {profile.max_percent}% at d in {list(profile.max_diseases)}  "
        f"min {profile.min_percent}% at d in {list(profile.min_diseases)}",
    ])


def report_summary(session, status: str, result: DiagnosisResult | None) -> str:
    confirmed = sum(1 for a in session.answers if a is not None)
    skipped = len(session.answers) - confirmed
    lines = [
        f"diagnosis report {session.session_id}",
        f"patient: {session.patient_label}",
        f"created: {session.finalized_at}",
        f"knowledge base version: {session.kb_version}",
        f"answers: {confirmed} confirmed, {skipped} skipped",
    ]
    if status == "no_signal":
        lines.append("status: no signal (no disease received positive excitation)")
    else:
        lines.append("")
        lines.append(result_block(result))
    return "\n".join(lines)
