"""Report dictionaries and their serializations.

Every command produces one report: a plain dict with a fixed "schema" tag
and a "kind" discriminator, all values rendered through the shared literal
grammar so reports parse back.  Serialization is canonical (sorted keys,
fixed indentation, no timestamps), so identical inputs give byte-identical
output.
"""

from __future__ import annotations

import json

from .fields import FieldExtension, Subspace, fmt_element, fmt_field, fmt_subspace
from .group_matching import (
    ConditionEntry,
    HallViolator,
    MatchingCertificate,
    ScanOutcome,
    StructureWitness,
)
from .groups import Group, ProgressionWitness, QuasiPeriodicWitness, Subset
from .linear_matching import (
    LinearConditionEntry,
    MatchedBasisCertificate,
    SpaceMatchVerdict,
    SubfieldAtomWitness,
)
from .literals import fmt_group, fmt_group_element, fmt_group_subset
from .search import MaxChowlaResult, ScanReport

SCHEMA = "matchkit/1"


def _instance_str(structure: str, parts: dict[str, str]) -> str:
    return " ".join([structure] + [f"{k}={v}" for k, v in sorted(parts.items())])


def group_report(group: Group, a: Subset, b: Subset, *,
                 matched: bool | None = None,
                 certificate: MatchingCertificate | None = None,
                 violator: HallViolator | None = None,
                 conditions: list[ConditionEntry] | None = None,
                 witness: StructureWitness | None = None) -> dict:
    out: dict = {
        "schema": SCHEMA,
        "kind": "group",
        "instance": _instance_str(fmt_group(group), {
            "A": fmt_group_subset(a), "B": fmt_group_subset(b)}),
    }
    if matched is not None:
        out["verdict"] = "matched" if matched else "unmatched"
    if certificate is not None:
        out["certificate"] = [[fmt_group_element(x), fmt_group_element(y)]
                              for x, y in certificate.pairs]
    if violator is not None:
        out["violator"] = {"S": fmt_group_subset(violator.s_set),
                           "V": fmt_group_subset(violator.v_set)}
    if conditions is not None:
        out["conditions"] = [{"part": c.part, "holds": c.holds,
                              "evidence": c.evidence} for c in conditions]
    if witness is not None:
        w: dict = {
            "S": fmt_group_subset(witness.s_set),
            "W": fmt_group_subset(witness.w_set),
            "SW": fmt_group_subset(witness.product_sw),
            "classification": witness.kind,
        }
        c = witness.classification
        if isinstance(c, QuasiPeriodicWitness):
            w["period"] = fmt_group_subset(tuple(sorted(c.period.elements)))
        elif isinstance(c, ProgressionWitness):
            w["initial"] = fmt_group_element(c.initial)
            w["difference"] = fmt_group_element(c.difference)
            w["length"] = c.length
        out["witness"] = w
    return out


def scan_outcome_report(group: Group, max_size: int, outcome: ScanOutcome) -> dict:
    out: dict = {
        "schema": SCHEMA,
        "kind": "group",
        "instance": fmt_group(group),
        "max_size": max_size,
        "verdict": "matched" if outcome.holds else "unmatched",
        "pairs_checked": outcome.pairs_checked,
    }
    if outcome.counterexample is not None:
        ca, cb = outcome.counterexample
        out["counterexample"] = {"A": fmt_group_subset(ca),
                                 "B": fmt_group_subset(cb)}
    return out


def linear_report(E: FieldExtension, a_space: Subspace, b_space: Subspace, *,
                  verdict: SpaceMatchVerdict | None = None,
                  certificate: MatchedBasisCertificate | None = None,
                  conditions: list[LinearConditionEntry] | None = None,
                  witness: SubfieldAtomWitness | None = None) -> dict:
    out: dict = {
        "schema": SCHEMA,
        "kind": "linear",
        "instance": _instance_str(fmt_field(E), {
            "A": fmt_subspace(a_space), "B": fmt_subspace(b_space)}),
    }
    if verdict is not None:
        out["verdict"] = verdict.verdict
        out["bases_checked"] = verdict.bases_checked
        if verdict.failing_basis is not None:
            out["failing_basis"] = [fmt_element(E, v)
                                    for v in verdict.failing_basis]
    if certificate is not None:
        out["certificate"] = {
            "basis_a": [fmt_element(E, v) for v in certificate.basis_a],
            "basis_b": [fmt_element(E, v) for v in certificate.basis_b],
        }
    if conditions is not None:
        out["conditions"] = [{"part": c.part, "holds": c.holds,
                              "evidence": c.evidence} for c in conditions]
    if witness is not None:
        out["witness"] = {
            "W_J": fmt_subspace(witness.w_j),
            "atom": fmt_subspace(witness.atom.subspace),
            "atom_degree": witness.atom.degree,
        }
    return out


def atom_report_dict(E: FieldExtension, a_space: Subspace, rep) -> dict:
    return {
        "schema": SCHEMA,
        "kind": "atom",
        "instance": _instance_str(fmt_field(E), {"A": fmt_subspace(a_space)}),
        "kappa": rep.kappa,
        "fragment": None if rep.fragment is None else fmt_subspace(rep.fragment),
        "atom": None if rep.atom is None else fmt_subspace(rep.atom),
        "psi_nonempty": rep.psi_nonempty,
    }


def chowla_report(E: FieldExtension, result: MaxChowlaResult) -> dict:
    return {
        "schema": SCHEMA,
        "kind": "chowla_max",
        "instance": fmt_field(E),
        "value": result.value,
        "witness": None if result.witness is None else fmt_subspace(result.witness),
        "lower_bound": result.lower_bound,
        "exhausted": result.exhausted,
    }


def scan_report_dict(op: str, report: ScanReport) -> dict:
    return {
        "schema": SCHEMA,
        "kind": "scan",
        "op": op,
        "parameters": report.parameters,
        "instances_checked": report.instances_checked,
        "counterexamples": list(report.counterexamples),
        "exhausted": report.exhausted,
    }


def error_report(exc: BaseException) -> dict:
    return {
        "schema": SCHEMA,
        "kind": "error",
        "error": type(exc).__name__,
        "message": str(exc),
    }


def to_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def to_jsonl(report: dict) -> str:
    """Scans stream one counterexample per line, then a summary object;
    other kinds collapse to a single line."""
    line = lambda obj: json.dumps(obj, sort_keys=True)
    if report.get("kind") != "scan":
        return line(report) + "\n"
    rows = [line({"counterexample": ce}) for ce in report["counterexamples"]]
    summary = {k: v for k, v in report.items() if k != "counterexamples"}
    summary["counterexample_count"] = len(report["counterexamples"])
    rows.append(line(summary))
    return "\n".join(rows) + "\n"


def render_text(report: dict) -> str:
    kind = report.get("kind")
    lines: list[str] = []
    if kind == "error":
        return f"error: {report['message']}"
    head = report.get("instance", "")
    if "verdict" in report:
        lines.append(f"{head}: {report['verdict']}")
    elif head:
        lines.append(head)
    if "certificate" in report:
        cert = report["certificate"]
        if isinstance(cert, dict):
            lines.append("  basis_a: " + ", ".join(cert["basis_a"]))
            lines.append("  basis_b: " + ", ".join(cert["basis_b"]))
        else:
            lines.append("  matching: " +
                         ", ".join(f"{x}->{y}" for x, y in cert))
    if "violator" in report:
        v = report["violator"]
        lines.append(f"  violator: S={v['S']} V={v['V']}")
    if "failing_basis" in report:
        lines.append("  failing basis: " + ", ".join(report["failing_basis"]))
    if "counterexample" in report:
        ce = report["counterexample"]
        lines.append(f"  counterexample: A={ce['A']} B={ce['B']}"
                     f" after {report['pairs_checked']} pairs")
    for c in report.get("conditions", ()):
        mark = "holds" if c["holds"] else "fails"
        lines.append(f"  part {c['part']}: {mark} ({c['evidence']})")
    w = report.get("witness")
    if isinstance(w, dict):
        if "classification" in w:
            lines.append(f"  witness: S={w['S']} W={w['W']} SW={w['SW']}"
                         f" [{w['classification']}]")
        else:
            lines.append(f"  witness: W_J={w['W_J']} atom={w['atom']}"
                         f" (degree {w['atom_degree']})")
    if kind == "atom":
        lines.append(f"  kappa: {report['kappa']}  fragment:"
                     f" {report['fragment']}  atom: {report['atom']}")
    if kind == "chowla_max":
        lines.append(f"  max Chowla dimension: {report['value']}"
                     f" (lower bound {report['lower_bound']},"
                     f" witness {report['witness']},"
                     f" exhausted {report['exhausted']})")
    if kind == "scan":
        lines.append(f"{report['op']}: {report['instances_checked']} checked,"
                     f" {len(report['counterexamples'])} counterexamples,"
                     f" exhausted {report['exhausted']}")
        for ce in report["counterexamples"]:
            lines.append("  " + json.dumps(ce, sort_keys=True))
    return "\n".join(lines)
