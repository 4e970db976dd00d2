"""Command line front end.

Every command builds a plain payload, runs it through the shared dispatch
(in process by default, or POSTed to a running service with --server) and
renders the one report it gets back.  Exit codes: 0 decided/completed,
1 counterexample or unmatched pair, 2 error.
"""

from __future__ import annotations

import json
import sys
import urllib.error
import urllib.request

import click

from .reports import error_report, render_text, to_json, to_jsonl
from .service.handlers import dispatch


def _post(server: str, command: str, payload: dict) -> tuple[dict, int]:
    url = server.rstrip("/") + "/v1/" + command
    req = urllib.request.Request(
        url,
        data=json.dumps(payload).encode(),
        headers={"Content-Type": "application/json"},
        method="POST",
    )
    try:
        with urllib.request.urlopen(req) as resp:
            body = json.load(resp)
    except (urllib.error.URLError, OSError, ValueError) as exc:
        return error_report(exc), 2
    return body["report"], body["exit_code"]


def _run(command: str, payload: dict, server: str | None,
         out: str | None, as_json: bool) -> None:
    if server:
        report, code = _post(server, command, payload)
    else:
        report, code = dispatch(command, payload)
    rendered = to_json(report) if as_json else render_text(report) + "\n"
    click.echo(rendered, nl=False, err=report.get("kind") == "error")
    if out:
        # scans stream JSON lines; single verdicts one canonical document
        data = to_jsonl(report) if report.get("kind") == "scan" else to_json(report)
        with open(out, "w") as fh:
            fh.write(data)
    sys.exit(code)


def _common(f):
    f = click.option("--server", metavar="URL", default=None,
                     help="POST to a running matchkit service instead of "
                          "computing in process.")(f)
    f = click.option("--json/--text", "as_json", default=False,
                     help="Canonical JSON on stdout instead of text.")(f)
    f = click.option("--out", type=click.Path(dir_okay=False), default=None,
                     help="Also write the report to this path (scans as "
                          "JSON lines, otherwise one JSON document).")(f)
    return f


def _budgeted(f):
    f = click.option("--exhaustive/--sampled", "exhaustive", default=True,
                     help="Enumerate the full instance space or sample it.")(f)
    f = click.option("--time-limit", type=float, default=None, metavar="SECONDS",
                     help="Stop between instances once this much time passed.")(f)
    f = click.option("--seed", type=int, default=0, show_default=True,
                     help="Seed for sampled instance streams.")(f)
    f = click.option("--budget", type=int, default=None, metavar="N",
                     help="Maximum number of instances to check.")(f)
    return f


@click.group()
@click.version_option(package_name="matchkit")
def main() -> None:
    """Exact matchability toolkit for finite abelian groups and finite
    field extensions."""


@main.command()
@click.argument("instance")
@_common
def match(instance, server, as_json, out):
    """Decide whether A is matched to B; on failure report a violator.

    INSTANCE is e.g. 'Z15 A={5,6,7} B={1,2,3}'."""
    _run("match", {"instance": instance}, server, out, as_json)


@main.command()
@click.argument("instance")
@_common
def certify(instance, server, as_json, out):
    """Produce the lexicographically smallest matching, or a violator."""
    _run("certify", {"instance": instance}, server, out, as_json)


@main.command()
@click.argument("instance")
@click.option("--part", type=click.IntRange(1, 7), default=None,
              help="Check a single sufficient condition instead of all seven.")
@_common
def conditions(instance, part, server, as_json, out):
    """Evaluate the sufficient matchability conditions with evidence."""
    _run("conditions", {"instance": instance, "part": part},
         server, out, as_json)


@main.command()
@click.argument("instance")
@click.option("--min-progression-length", type=int, default=2, show_default=True,
              help="Shortest progression accepted as a classification.")
@_common
def witness(instance, min_progression_length, server, as_json, out):
    """Explain an unmatched pair by its small-sumset structure witness."""
    _run("witness", {"instance": instance,
                     "min_progression_length": min_progression_length},
         server, out, as_json)


@main.command(name="scan-property")
@click.argument("group")
@click.option("--max-size", type=int, default=3, show_default=True,
              help="Largest |A| = |B| to scan.")
@_common
def scan_property(group, max_size, server, as_json, out):
    """Test the matching property of a group up to a size bound.

    GROUP is e.g. 'Z5' or 'Z2xZ4'."""
    _run("scan-property", {"group": group, "max_size": max_size},
         server, out, as_json)


@main.command(name="linear-match")
@click.argument("instance")
@click.option("--budget", type=int, default=None, metavar="N",
              help="Basis-set cap when exhaustive, sample count when sampled.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--exhaustive/--sampled", "exhaustive", default=True)
@_common
def linear_match(instance, budget, seed, exhaustive, server, as_json, out):
    """Decide whether subspace A is matched to B; certify or explain.

    INSTANCE is e.g. 'GF(2^4) A=<g,g^2> B=<1,g^5>'."""
    _run("linear-match", {"instance": instance, "exhaustive": exhaustive,
                          "budget": budget, "seed": seed},
         server, out, as_json)


@main.command(name="linear-conditions")
@click.argument("instance")
@click.option("--part", type=click.IntRange(1, 3), default=None,
              help="Check a single sufficient condition instead of all three.")
@_common
def linear_conditions(instance, part, server, as_json, out):
    """Evaluate the sufficient subspace matchability conditions."""
    _run("linear-conditions", {"instance": instance, "part": part},
         server, out, as_json)


@main.command()
@click.argument("instance")
@_common
def atom(instance, server, as_json, out):
    """Connectivity data of a subspace: kappa, a fragment and a 1-atom.

    INSTANCE is e.g. 'GF(2^4) A=<1,g^5>'."""
    _run("atom", {"instance": instance}, server, out, as_json)


@main.command()
@click.argument("field")
@click.option("--dims", type=int, default=2, show_default=True,
              help="Largest dimension of the scanned pairs.")
@_budgeted
@_common
def conjecture1(field, dims, budget, seed, time_limit, exhaustive,
                server, as_json, out):
    """Scan a field for small product spans under the subfield hypothesis."""
    _run("conjecture1", {"field": field, "dims": dims, "budget": budget,
                         "seed": seed, "time_limit": time_limit,
                         "exhaustive": exhaustive},
         server, out, as_json)


@main.command()
@click.argument("field")
@click.option("--n", type=int, default=2, show_default=True,
              help="Dimension of the scanned pairs.")
@_budgeted
@_common
def conjecture2(field, n, budget, seed, time_limit, exhaustive,
                server, as_json, out):
    """Scan for unmatched pairs whose right side is a Chowla subspace."""
    _run("conjecture2", {"field": field, "n": n, "budget": budget,
                         "seed": seed, "time_limit": time_limit,
                         "exhaustive": exhaustive},
         server, out, as_json)


@main.command(name="chowla-max")
@click.argument("field")
@click.option("--budget", type=int, default=None, metavar="N")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--time-limit", type=float, default=None, metavar="SECONDS")
@_common
def chowla_max(field, budget, seed, time_limit, server, as_json, out):
    """Largest dimension of a Chowla subspace, scanned top down."""
    _run("chowla-max", {"field": field, "budget": budget, "seed": seed,
                        "time_limit": time_limit},
         server, out, as_json)


@main.command(name="search-unmatchable")
@click.argument("domain")
@click.option("--max-size", type=int, default=3, show_default=True,
              help="Largest subset size for group domains.")
@click.option("--dim", type=int, default=2, show_default=True,
              help="Subspace dimension for field domains.")
@_budgeted
@_common
def search_unmatchable(domain, max_size, dim, budget, seed, time_limit,
                       exhaustive, server, as_json, out):
    """Stream verified unmatchable pairs with witnesses attached.

    DOMAIN is a group range like 'Z4..Z10', one group, or a field."""
    _run("search-unmatchable", {"domain": domain, "max_size": max_size,
                                "dim": dim, "budget": budget, "seed": seed,
                                "time_limit": time_limit,
                                "exhaustive": exhaustive},
         server, out, as_json)


if __name__ == "__main__":
    main()
