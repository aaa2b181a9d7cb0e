"""`metaforge` command line: validate, render, report, search, serve.

Exit codes: 0 success/valid, 1 validation findings, 2 usage or I/O errors.
stdout carries only payload; diagnostics go to stderr so pipelines stay
clean. JSON output is byte-stable (sorted keys).
"""

from __future__ import annotations

import json
import socket
import sys
from pathlib import Path

import click

from metaforge.errors import GatewayError, MetaforgeError
from metaforge.gateway import build_gateway, offline_from_env
from metaforge.instance import (
    new_instance,
    parse_instance,
    render_plan,
    validate_instance,
)
from metaforge.report import generate_report, render_report_figure, render_report_text
from metaforge.template import parse_template, validate_template

EXIT_OK = 0
EXIT_FINDINGS = 1
EXIT_USAGE = 2


def _fail(message: str) -> "click.exceptions.Exit":
    click.echo(f"error: {message}", err=True)
    return click.exceptions.Exit(EXIT_USAGE)


def _load_template(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _fail(f"cannot read template {path!r}: {exc}") from exc
    try:
        return parse_template(text)
    except MetaforgeError as exc:
        raise _fail(f"{exc.code}: {exc.message}") from exc


def _load_json(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _fail(f"cannot read {path!r}: {exc}") from exc
    return text


def _print_issues(issues, fmt: str) -> None:
    if fmt == "json":
        click.echo(json.dumps([x.to_dict() for x in issues], sort_keys=True,
                              indent=2, ensure_ascii=False))
    else:
        for issue in issues:
            location = issue.path or "<template>"
            click.echo(f"{issue.severity}\t{location}\t{issue.code}\t{issue.message}")


def _findings_exit(issues, strict_warnings: bool) -> int:
    has_errors = any(x.severity == "error" for x in issues)
    has_warnings = any(x.severity == "warning" for x in issues)
    if has_errors or (strict_warnings and has_warnings):
        return EXIT_FINDINGS
    return EXIT_OK


@click.group()
def main():
    """Metadata template engine: validation, form plans, reports, lookups."""


@main.command("validate-template")
@click.argument("template_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text")
@click.option("--strict-warnings", is_flag=True, help="Warnings also exit 1.")
def cmd_validate_template(template_file, fmt, strict_warnings):
    """Check a template file against the format's invariants."""
    template = _load_template(template_file)
    issues = validate_template(template)
    if issues or fmt == "json":
        _print_issues(issues, fmt)
    sys.exit(_findings_exit(issues, strict_warnings))


@main.command("validate-instance")
@click.option("--template", "template_file", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--instance", "instance_file", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--strict/--draft", default=True,
              help="Strict treats missing required values as errors.")
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text")
@click.option("--strict-warnings", is_flag=True)
def cmd_validate_instance(template_file, instance_file, strict, fmt, strict_warnings):
    """Validate a JSON-LD instance against its template."""
    template = _load_template(template_file)
    try:
        instance = parse_instance(template, _load_json(instance_file))
        issues = validate_instance(template, instance, strict=strict)
    except MetaforgeError as exc:
        raise _fail(f"{exc.code}: {exc.message}") from exc
    if issues or fmt == "json":
        _print_issues(issues, fmt)
    sys.exit(_findings_exit(issues, strict_warnings))


@main.command("render-plan")
@click.option("--template", "template_file", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--instance", "instance_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--mode", default="entry")
@click.option("--language", default="en", help="Language tag or comma-separated chain.")
def cmd_render_plan(template_file, instance_file, mode, language):
    """Print the deterministic render plan JSON for a template (+ optional instance)."""
    template = _load_template(template_file)
    try:
        if instance_file:
            instance = parse_instance(template, _load_json(instance_file))
        else:
            instance = new_instance(template)
        chain = [tag.strip() for tag in language.split(",") if tag.strip()]
        plan = render_plan(template, instance, mode, chain)
    except MetaforgeError as exc:
        raise _fail(f"{exc.code}: {exc.message}") from exc
    click.echo(plan.to_json(), nl=False)
    sys.exit(EXIT_OK)


@main.command("quality-report")
@click.option("--template", "template_file", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--instance", "instance_file", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text")
@click.option("--figure", "figure_file", type=click.Path(dir_okay=False),
              help="Also render a status chart to this file (png/svg by extension).")
def cmd_quality_report(template_file, instance_file, fmt, figure_file):
    """Completeness and field-status report for an instance."""
    template = _load_template(template_file)
    try:
        instance = parse_instance(template, _load_json(instance_file))
        report = generate_report(template, instance)
    except MetaforgeError as exc:
        raise _fail(f"{exc.code}: {exc.message}") from exc
    if fmt == "json":
        click.echo(report.to_json(), nl=False)
    else:
        click.echo(render_report_text(report), nl=False)
    if figure_file:
        render_report_figure(report, figure_file)
        click.echo(f"figure written to {figure_file}", err=True)
    sys.exit(EXIT_OK)


@main.command("search")
@click.option("--source", required=True, help="orcid | ror | comptox")
@click.option("--query", required=True)
@click.option("--limit", default=10, show_default=True)
@click.option("--offline/--online", default=None,
              help="Defaults to offline when GATEWAY_OFFLINE=1.")
@click.option("--fail-empty", is_flag=True, help="Exit 1 when nothing matches.")
def cmd_search(source, query, limit, offline, fail_empty):
    """Search an external authority; prints `label<TAB>id` per suggestion."""
    gateway = build_gateway(offline=offline_from_env() if offline is None else offline)
    try:
        suggestions = gateway.search_authority(source, query, limit)
    except GatewayError as exc:
        raise _fail(f"{exc.code}: {exc.message}") from exc
    for s in suggestions:
        click.echo(f"{s.label}\t{s.id}")
    sys.exit(EXIT_FINDINGS if fail_empty and not suggestions else EXIT_OK)


@main.command("resolve")
@click.option("--source", required=True)
@click.option("--id", "identifier", required=True)
@click.option("--offline/--online", default=None)
def cmd_resolve(source, identifier, offline):
    """Canonicalize and resolve a persistent identifier."""
    gateway = build_gateway(offline=offline_from_env() if offline is None else offline)
    try:
        suggestion = gateway.resolve_identifier(source, identifier)
    except GatewayError as exc:
        raise _fail(f"{exc.code}: {exc.message}") from exc
    click.echo(f"{suggestion.label}\t{suggestion.id}")
    sys.exit(EXIT_OK)


@main.command("serve")
@click.option("--port", default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--data-dir", default=None, help="Defaults to $METAFORGE_DATA_DIR.")
@click.option("--offline/--online", default=None)
def cmd_serve(port, host, data_dir, offline):
    """Run the HTTP service until interrupted; logs one line per request."""
    import uvicorn

    from metaforge.service import create_app

    app = create_app(data_dir=data_dir,
                     offline=offline_from_env() if offline is None else offline)
    sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    try:
        sock.bind((host, port))
    except OSError as exc:
        raise _fail(f"cannot bind {host}:{port}: {exc}") from exc
    bound_port = sock.getsockname()[1]
    click.echo(f"listening on http://{host}:{bound_port}")
    sys.stdout.flush()
    server = uvicorn.Server(uvicorn.Config(app, log_level="info", access_log=True))
    server.run(sockets=[sock])


if __name__ == "__main__":
    main()
