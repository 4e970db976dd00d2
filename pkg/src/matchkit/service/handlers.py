"""One pure handler per command, shared by the CLI and the HTTP service.

Handlers take plain keyword payloads (strings and scalars), return
(report dict, exit code) and never touch stdout or the filesystem.  Exit
codes: 0 decided/completed, 1 counterexample or unmatched pair found,
2 domain error (wrapped into an error report by dispatch)."""

from __future__ import annotations

from ..errors import MatchkitError
from ..fields import atom_report
from ..group_matching import (
    check_condition,
    find_matching,
    hall_violator,
    has_matching,
    matching_property_scan,
    structure_witness,
)
from ..linear_matching import (
    SpaceMatchVerdict,
    check_all_linear_conditions,
    check_linear_condition,
    find_matched_basis,
    space_matchable,
    subfield_atom_witness,
)
from ..literals import parse_field, parse_group, parse_group_range, parse_instance
from ..reports import (
    atom_report_dict,
    chowla_report,
    error_report,
    group_report,
    linear_report,
    scan_outcome_report,
    scan_report_dict,
)
from ..search import (
    FieldDomain,
    GroupDomain,
    SearchBudget,
    conjecture_5_1_scan,
    conjecture_5_2_scan,
    max_chowla_dimension,
    unmatchable_pair_search,
)


def _group_pair(instance: str):
    inst = parse_instance(instance)
    if inst.kind != "group":
        raise ValueError("expected a group instance like 'Z15 A={5,6,7} B={1,2,3}'")
    return inst.group, inst.subset("A"), inst.subset("B")


def _field_pair(instance: str):
    inst = parse_instance(instance)
    if inst.kind != "field":
        raise ValueError("expected a field instance like 'GF(2^4) A=<g,g^2> B=<1,g^5>'")
    return inst.field, inst.subspace("A"), inst.subspace("B")


def _budget(budget=None, seed=0, time_limit=None, exhaustive=True) -> SearchBudget:
    return SearchBudget(max_instances=budget, seed=seed,
                        time_limit=time_limit, exhaustive=exhaustive)


def handle_match(instance: str):
    group, a, b = _group_pair(instance)
    matched = has_matching(group, a, b)
    violator = None if matched else hall_violator(group, a, b)
    return group_report(group, a, b, matched=matched, violator=violator), \
        0 if matched else 1


def handle_certify(instance: str):
    group, a, b = _group_pair(instance)
    cert = find_matching(group, a, b)
    if cert is not None:
        return group_report(group, a, b, matched=True, certificate=cert), 0
    return group_report(group, a, b, matched=False,
                        violator=hall_violator(group, a, b)), 1


def handle_conditions(instance: str, part: int | None = None):
    group, a, b = _group_pair(instance)
    parts = range(1, 8) if part is None else (part,)
    entries = [check_condition(group, a, b, k) for k in parts]
    return group_report(group, a, b, conditions=entries), 0


def handle_witness(instance: str, min_progression_length: int = 2):
    group, a, b = _group_pair(instance)
    w = structure_witness(group, a, b, min_length=min_progression_length)
    return group_report(group, a, b, matched=False, witness=w), 0


def handle_scan_property(group: str, max_size: int = 3):
    g = parse_group(group)
    outcome = matching_property_scan(g, max_size)
    return scan_outcome_report(g, max_size, outcome), 0 if outcome.holds else 1


def handle_linear_match(instance: str, exhaustive: bool = True,
                        budget: int | None = None, seed: int = 0):
    E, a_space, b_space = _field_pair(instance)
    kwargs: dict = {"exhaustive": exhaustive, "seed": seed}
    if budget is not None:
        kwargs["budget" if exhaustive else "samples"] = budget
    verdict = space_matchable(E, a_space, b_space, **kwargs)
    cert = witness = None
    if verdict.verdict == "unmatched":
        witness = subfield_atom_witness(E, a_space, b_space,
                                        failing_basis=verdict.failing_basis)
    else:
        cert = find_matched_basis(E, a_space.rows, b_space)
        if cert is None:  # sampling missed the canonical basis; correct it
            verdict = SpaceMatchVerdict("unmatched", a_space.rows,
                                        verdict.bases_checked)
            witness = subfield_atom_witness(E, a_space, b_space,
                                            failing_basis=a_space.rows)
    report = linear_report(E, a_space, b_space, verdict=verdict,
                           certificate=cert, witness=witness)
    return report, 1 if verdict.verdict == "unmatched" else 0


def handle_linear_conditions(instance: str, part: int | None = None):
    E, a_space, b_space = _field_pair(instance)
    if part is None:
        entries = check_all_linear_conditions(E, a_space, b_space)
    else:
        entries = [check_linear_condition(E, a_space, b_space, part)]
    return linear_report(E, a_space, b_space, conditions=entries), 0


def handle_atom(instance: str):
    inst = parse_instance(instance)
    if inst.kind != "field":
        raise ValueError("expected a field instance like 'GF(2^4) A=<1,g^5>'")
    a_space = inst.subspace("A")
    rep = atom_report(inst.field, a_space)
    return atom_report_dict(inst.field, a_space, rep), 0


def handle_conjecture1(field: str, dims: int = 2, exhaustive: bool = True,
                       budget: int | None = None, seed: int = 0,
                       time_limit: float | None = None):
    E = parse_field(field)
    report = conjecture_5_1_scan(E, dims,
                                 _budget(budget, seed, time_limit, exhaustive))
    return scan_report_dict("conjecture1", report), \
        1 if report.counterexamples else 0


def handle_conjecture2(field: str, n: int = 2, exhaustive: bool = True,
                       budget: int | None = None, seed: int = 0,
                       time_limit: float | None = None):
    E = parse_field(field)
    report = conjecture_5_2_scan(E, n,
                                 _budget(budget, seed, time_limit, exhaustive))
    return scan_report_dict("conjecture2", report), \
        1 if report.counterexamples else 0


def handle_chowla_max(field: str, budget: int | None = None, seed: int = 0,
                      time_limit: float | None = None):
    E = parse_field(field)
    result = max_chowla_dimension(E, _budget(budget, seed, time_limit))
    return chowla_report(E, result), 0


def handle_search_unmatchable(domain: str, max_size: int = 3, dim: int = 2,
                              exhaustive: bool = True, budget: int | None = None,
                              seed: int = 0, time_limit: float | None = None):
    if domain.strip().upper().startswith("GF"):
        dom: GroupDomain | FieldDomain = FieldDomain(parse_field(domain), dim)
    else:
        dom = GroupDomain(parse_group_range(domain), max_size)
    report = unmatchable_pair_search(
        dom, _budget(budget, seed, time_limit, exhaustive))
    return scan_report_dict("search-unmatchable", report), \
        1 if report.counterexamples else 0


COMMANDS = {
    "match": handle_match,
    "certify": handle_certify,
    "conditions": handle_conditions,
    "witness": handle_witness,
    "scan-property": handle_scan_property,
    "linear-match": handle_linear_match,
    "linear-conditions": handle_linear_conditions,
    "atom": handle_atom,
    "conjecture1": handle_conjecture1,
    "conjecture2": handle_conjecture2,
    "chowla-max": handle_chowla_max,
    "search-unmatchable": handle_search_unmatchable,
}


def dispatch(command: str, payload: dict) -> tuple[dict, int]:
    """Run a command on a plain payload; domain errors become error
    reports with exit code 2, internal invariant failures propagate."""
    handler = COMMANDS.get(command)
    if handler is None:
        return error_report(ValueError(f"unknown command {command!r}")), 2
    try:
        return handler(**payload)
    except (MatchkitError, ValueError) as exc:
        return error_report(exc), 2
