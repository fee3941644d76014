"""Command-line front end.

Exit codes: 0 success, 1 usage error (bad flags, unknown names, malformed
input), 2 computation error (impossible evidence, search-space guard).
``--format json`` emits the canonical envelope (sorted keys, 12
significant digits) so identical invocations are byte-identical and match
the HTTP service's responses; ``--format table`` prints tab-delimited
rows carrying the same numbers rounded to four decimals.
"""

from __future__ import annotations

import logging
import os
import sys
from pathlib import Path

import click

from .errors import (
    BifParseError,
    ImpossibleEvidenceError,
    ImpossibleExplanationError,
    JsonSchemaError,
    NetworkValidationError,
    QueryError,
    SearchSpaceError,
    VacuousExplanationError,
    XbnError,
)
from .formats import builtin_asia, parse_bif, parse_network_json
from .formats.bif import ParseDiagnostic
from .jsonio import canonical_json, display_number
from .model import BayesianNetwork
from .operations import run_operation

_USAGE_ERRORS = (
    QueryError,
    NetworkValidationError,
    BifParseError,
    JsonSchemaError,
    ImpossibleExplanationError,
    VacuousExplanationError,
)
_COMPUTATION_ERRORS = (ImpossibleEvidenceError, SearchSpaceError)


def load_network(source: str, warnings: list[ParseDiagnostic] | None = None) -> BayesianNetwork:
    """Load ``builtin:asia`` or a .bif / .json file path."""
    if source == "builtin:asia":
        return builtin_asia()
    path = Path(source)
    if not path.exists():
        raise QueryError(f"network source not found: {source}")
    text = path.read_text()
    if path.suffix.lower() == ".json":
        return parse_network_json(text)
    return parse_bif(text, warnings)


def _parse_evidence(items: tuple[str, ...]) -> dict[str, str]:
    ev: dict[str, str] = {}
    for item in items:
        for part in item.split(","):
            part = part.strip()
            if not part:
                continue
            if "=" not in part:
                raise QueryError(
                    f"evidence must be Var=State, got {part!r}"
                )
            var, state = part.split("=", 1)
            var, state = var.strip(), state.strip()
            if var in ev:
                raise QueryError(f"variable '{var}' observed twice")
            ev[var] = state
    return ev


def _parse_pair(text: str, flag: str) -> list[str]:
    if "=" not in text:
        raise QueryError(f"{flag} must be Var=State, got {text!r}")
    var, state = text.split("=", 1)
    return [var.strip(), state.strip()]


def _parse_names(items: tuple[str, ...]) -> list[str]:
    names: list[str] = []
    for item in items:
        for part in item.split(","):
            part = part.strip()
            if part:
                names.append(part)
    return names


_net_option = click.option(
    "--net",
    "net_source",
    default="builtin:asia",
    show_default=True,
    help="Network file (.bif or .json) or 'builtin:asia'.",
)
_evidence_option = click.option(
    "--evidence",
    "evidence_items",
    multiple=True,
    help="Observed states, Var=State (repeatable or comma-separated).",
)
_format_option = click.option(
    "--format",
    "out_format",
    type=click.Choice(["table", "json"]),
    default="table",
    show_default=True,
    help="Output rendering.",
)


@click.group()
def cli():
    """Explainable Bayesian network toolkit."""
    level = os.environ.get("XBN_LOG")
    if level:
        logging.basicConfig(level=getattr(logging, level.upper(), logging.INFO))


def _emit(envelope: dict, out_format: str) -> None:
    if out_format == "json":
        click.echo(canonical_json(envelope))
    else:
        for line in _tabulate(envelope):
            click.echo(line)


def _tabulate(envelope: dict) -> list[str]:
    """Tab-delimited rendering carrying the same numbers as the JSON."""
    result = envelope["result"]
    op = envelope["operation"]
    lines = [f"# {op} on {envelope['network']}"]
    if op in ("infer", "oracle"):
        if "evidence_probability" in result:
            lines.append(
                "evidence_probability\t"
                + display_number(result["evidence_probability"])
            )
        for var, dist in result["posterior"].items():
            for state, p in dist.items():
                lines.append(f"{var}\t{state}\t{display_number(p)}")
    elif op == "classify":
        lines.append(f"kind\t{result['kind']}")
    elif op in ("mpe", "map"):
        lines.append(f"score\t{display_number(result['score'])}")
        for var, state in result["assignment"].items():
            lines.append(f"{var}\t{state}")
    elif op == "mre":
        for i, entry in enumerate(result["entries"], start=1):
            expl = ", ".join(
                f"{v}={s}" for v, s in entry["assignment"].items()
            )
            lines.append(f"{i}\t{expl}\t{display_number(entry['score'])}")
    elif op == "gbf":
        lines.append(f"gbf\t{display_number(result['gbf'])}")
    elif op == "decide":
        lines.append(f"posterior\t{display_number(result['posterior'])}")
        lines.append(f"threshold\t{display_number(result['threshold'])}")
        lines.append(f"decision\t{result['decision']}")
    elif op == "sdp":
        lines.append(f"sdp\t{display_number(result['sdp'])}")
        base = result["baseline"]
        lines.append(
            "baseline\t"
            + display_number(base["posterior"])
            + f"\t{base['decision']}"
        )
        lines.append("branch\tweight\tposterior\tsame_decision")
        for b in result["branches"]:
            branch = ", ".join(f"{v}={s}" for v, s in b["assignment"].items())
            post = (
                "-" if b["posterior"] is None else display_number(b["posterior"])
            )
            lines.append(
                f"{branch or '(none)'}\t{display_number(b['weight'])}\t{post}"
                f"\t{'yes' if b['same_decision'] else 'no'}"
            )
    elif op == "explain":
        lines = [result["narrative"].rstrip("\n")]
    else:
        lines.append(canonical_json(result))
    return lines


def _run(net_source: str, operation: str, params: dict, out_format: str) -> None:
    net = load_network(net_source)
    envelope = run_operation(net, net_source, operation, params)
    _emit(envelope, out_format)


@cli.command()
@_net_option
def validate(net_source):
    """Parse and validate a network, reporting warnings."""
    warnings: list[ParseDiagnostic] = []
    net = load_network(net_source, warnings)
    for w in warnings:
        click.echo(f"warning {w.line}:{w.column}: {w.message}", err=True)
    click.echo(
        f"ok: {net.name} ({len(net.variables)} variables, "
        f"{len(net.arcs())} arcs)"
    )


@cli.command()
@_net_option
@click.option("--target", "targets", multiple=True, required=True,
              help="Target variable (repeatable).")
@_evidence_option
@_format_option
def query(net_source, targets, evidence_items, out_format):
    """Posterior distribution of target variables given evidence."""
    _run(
        net_source,
        "infer",
        {
            "targets": _parse_names(targets),
            "evidence": _parse_evidence(evidence_items),
        },
        out_format,
    )


@cli.command()
@_net_option
@click.option("--target", required=True, help="Unobserved query variable.")
@_evidence_option
@_format_option
def classify(net_source, target, evidence_items, out_format):
    """Classify the reasoning direction of a query."""
    _run(
        net_source,
        "classify",
        {"target": target, "evidence": _parse_evidence(evidence_items)},
        out_format,
    )


@cli.command()
@_net_option
@_evidence_option
@_format_option
def mpe(net_source, evidence_items, out_format):
    """Most probable complete explanation of the evidence."""
    _run(
        net_source,
        "mpe",
        {"evidence": _parse_evidence(evidence_items)},
        out_format,
    )


@cli.command("map")
@_net_option
@click.option("--targets", "targets", multiple=True, required=True,
              help="Target variables (comma-separated or repeatable), or ALL.")
@_evidence_option
@_format_option
def map_cmd(net_source, targets, evidence_items, out_format):
    """Most probable assignment of a target subset."""
    names = _parse_names(targets)
    _run(
        net_source,
        "map",
        {
            "targets": "ALL" if names == ["ALL"] else names,
            "evidence": _parse_evidence(evidence_items),
        },
        out_format,
    )


@cli.command()
@_net_option
@click.option("--explanation", required=True,
              help="Partial instantiation, Var=State[,Var=State...].")
@_evidence_option
@_format_option
def gbf(net_source, explanation, evidence_items, out_format):
    """Generalised Bayes factor of an explanation for the evidence."""
    _run(
        net_source,
        "gbf",
        {
            "explanation": _parse_evidence((explanation,)),
            "evidence": _parse_evidence(evidence_items),
        },
        out_format,
    )


@cli.command()
@_net_option
@click.option("--targets", "targets", multiple=True, required=True,
              help="Target variables, or ALL for all unobserved.")
@_evidence_option
@click.option("--top-k", "k", default=10, show_default=True)
@click.option("--include-dominated", is_flag=True,
              help="Keep explanations beaten by one of their own subsets.")
@_format_option
def mre(net_source, targets, evidence_items, k, include_dominated, out_format):
    """Most relevant explanations ranked by generalised Bayes factor."""
    names = _parse_names(targets)
    _run(
        net_source,
        "mre",
        {
            "targets": "ALL" if names == ["ALL"] else names,
            "evidence": _parse_evidence(evidence_items),
            "k": k,
            "include_dominated": include_dominated,
        },
        out_format,
    )


@cli.command()
@_net_option
@click.option("--hypothesis", required=True, help="Var=State under decision.")
@click.option("--threshold", type=float, required=True)
@_evidence_option
@click.option("--hidden", "hidden_items", multiple=True,
              help="Hidden variables (comma-separated or repeatable).")
@_format_option
def sdp(net_source, hypothesis, threshold, evidence_items, hidden_items,
        out_format):
    """Same-decision probability over a hidden variable set."""
    _run(
        net_source,
        "sdp",
        {
            "hypothesis": _parse_pair(hypothesis, "--hypothesis"),
            "threshold": threshold,
            "evidence": _parse_evidence(evidence_items),
            "hidden": _parse_names(hidden_items),
        },
        out_format,
    )


@cli.command()
@_net_option
@click.option("--hypothesis", required=True, help="Var=State under decision.")
@click.option("--threshold", type=float, required=True)
@_evidence_option
@_format_option
def decide(net_source, hypothesis, threshold, evidence_items, out_format):
    """Threshold decision on a hypothesis state."""
    _run(
        net_source,
        "decide",
        {
            "hypothesis": _parse_pair(hypothesis, "--hypothesis"),
            "threshold": threshold,
            "evidence": _parse_evidence(evidence_items),
        },
        out_format,
    )


@cli.command()
@_net_option
@click.option("--question", required=True,
              help="WhatWillHappen, WhatWentWrong, MutualCauses, "
                   "MostProbableScenario, MostRelevantExplanation, "
                   "ReadyToDecide or WhatMoreInfo.")
@click.option("--target", default=None)
@click.option("--target-state", default=None)
@click.option("--cause", default=None, help="Var=State.")
@click.option("--competing", default=None, help="Var=State.")
@click.option("--targets", "targets", multiple=True)
@click.option("--top-k", "k", default=10, show_default=True)
@click.option("--hypothesis", default=None, help="Var=State.")
@click.option("--threshold", type=float, default=None)
@click.option("--hidden", "hidden_items", multiple=True)
@_evidence_option
@click.option("--figures-dir", default=None,
              help="Directory for rendered report figures (PNG).")
@_format_option
def explain(net_source, question, target, target_state, cause, competing,
            targets, k, hypothesis, threshold, hidden_items, evidence_items,
            figures_dir, out_format):
    """Answer a taxonomy question with a narrative report."""
    params: dict = {
        "question": question,
        "evidence": _parse_evidence(evidence_items),
        "k": k,
    }
    if target:
        params["target"] = target
    if target_state:
        params["target_state"] = target_state
    if cause:
        params["cause"] = _parse_pair(cause, "--cause")
    if competing:
        params["competing"] = _parse_pair(competing, "--competing")
    if targets:
        names = _parse_names(targets)
        params["targets"] = None if names == ["ALL"] else names
    if hypothesis:
        params["hypothesis"] = _parse_pair(hypothesis, "--hypothesis")
    if threshold is not None:
        params["threshold"] = threshold
    if hidden_items:
        params["hidden"] = _parse_names(hidden_items)

    net = load_network(net_source)
    envelope = run_operation(net, net_source, "explain", params)
    _emit(envelope, out_format)
    if figures_dir:
        from .viz import render_report_figures

        paths = render_report_figures(envelope["result"], figures_dir)
        for p in paths:
            click.echo(f"figure written: {p}", err=True)


@cli.command()
@_net_option
@_evidence_option
@_format_option
def oracle(net_source, evidence_items, out_format):
    """Brute-force enumeration cross-check of posterior probabilities."""
    _run(
        net_source,
        "oracle",
        {"evidence": _parse_evidence(evidence_items)},
        out_format,
    )


@cli.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8080, show_default=True)
@click.option("--ui-dir", default=None,
              help="Directory with the built frontend; mounted at /ui.")
def serve(host, port, ui_dir):
    """Start the HTTP service."""
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(ui_dir=ui_dir), host=host, port=port)


def main(argv: list[str] | None = None) -> int:
    """Entry point returning an exit code instead of raising SystemExit."""
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.ClickException as exc:
        exc.show()
        return 1
    except click.Abort:
        click.echo("aborted", err=True)
        return 1
    except _COMPUTATION_ERRORS as exc:
        click.echo(f"error: {exc}", err=True)
        return 2
    except _USAGE_ERRORS as exc:
        click.echo(f"error: {exc}", err=True)
        return 1
    except XbnError as exc:
        click.echo(f"error: {exc}", err=True)
        return 2
    return 0


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
