"""Command-line entry point: parse, map, generate, transform, plan, deploy and serve."""

import json
import logging
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional

import typer
import yaml
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from src.application.container import Container
from src.domain.models.configuration import OcciConfiguration, ValidationReport
from src.domain.models.mapping import MappingReport
from src.domain.models.tosca import ToscaTopology
from src.domain.repositories.runtime_client import RuntimeClient
from src.domain.services.extension_set import ExtensionSet
from src.domain.services.validation import validate_configuration
from src.infrastructure.config.settings import LogLevel, Settings, reload_settings
from src.infrastructure.serialization.files import (
    dump_configuration,
    dump_extension,
    dump_plan,
    dump_report,
    dumps,
    load_configuration,
    load_extension,
    load_extension_dir,
    load_profile,
    parse_extension,
    write_text,
)
from src.shared.exceptions import BaseException as AppException, ExecutionError


app = typer.Typer(
    name="tosca2occi",
    add_completion=False,
    help="""
TOSCA to OCCI toolchain: type mapping, configuration generation,
PIM to PSM transformation and models@run.time deployment.

Examples:
  tosca2occi gen-extension --out tosca.json
  tosca2occi gen-config --topology fixtures/topologies/wordpress.yaml --out wordpress.json
  tosca2occi --deterministic deploy --desired wordpress-psm.json --runtime mock
""",
)

err_console = Console(stderr=True)
logger = logging.getLogger("tosca2occi")

EXIT_OK = 0
EXIT_VIOLATIONS = 1
EXIT_ERROR = 2

MOCK_RUNTIME = "mock"


class _JsonFormatter(logging.Formatter):
    """One JSON object per log record."""

    def format(self, record: logging.LogRecord) -> str:
        return json.dumps(
            {"level": record.levelname, "logger": record.name, "message": record.getMessage()},
            sort_keys=True,
        )


def _configure_logging(settings: Settings) -> None:
    root = logging.getLogger()
    for handler in list(root.handlers):
        root.removeHandler(handler)
    if settings.log_format == "json":
        handler: logging.Handler = logging.StreamHandler(err_console.file)
        handler.setFormatter(_JsonFormatter())
    else:
        handler = RichHandler(console=err_console, show_path=False, markup=False)
        handler.setFormatter(logging.Formatter("%(message)s"))
    root.addHandler(handler)
    root.setLevel(settings.log_level.value)


@contextmanager
def _cli_errors() -> Iterator[None]:
    """Report toolchain errors on stderr and exit with the error code."""
    try:
        yield
    except AppException as e:
        logger.debug(f"Command failed: {e!r}", exc_info=True)
        err_console.print(f"[red]Error:[/red] {e}", markup=True, highlight=False)
        raise typer.Exit(EXIT_ERROR)


def _emit(text: str, out: Optional[Path]) -> None:
    if out is None or str(out) == "-":
        typer.echo(text, nl=False)
    else:
        write_text(out, text)
        err_console.print(f"[green]Wrote[/green] {out}")


def _parse_inputs(values: Optional[List[str]]) -> Dict[str, Any]:
    inputs: Dict[str, Any] = {}
    for item in values or []:
        if "=" not in item:
            raise typer.BadParameter(f"Expected key=value, got '{item}'", param_hint="--input")
        key, raw = item.split("=", 1)
        inputs[key.strip()] = yaml.safe_load(raw) if raw else ""
    return inputs


def _container(ctx: typer.Context) -> Container:
    return ctx.ensure_object(Container)


def _extension_set(
    container: Container, directory: Optional[Path], extra: Optional[List[Path]]
) -> ExtensionSet:
    """Base extensions of a directory (fixtures by default) plus extra extension files."""
    extensions = load_extension_dir(directory) if directory is not None else container.extensions
    for path in extra or []:
        load_extension(path, extensions)
    return extensions


def _with_tosca_extension(container: Container, extensions: ExtensionSet, cfg: OcciConfiguration) -> None:
    """Generate the TOSCA extension from the fixture types when a configuration uses it and none is loaded."""
    name = container.settings.tosca_extension_name
    if name not in cfg.use or name in extensions:
        return
    if extensions is container.extensions:
        _ = container.tosca_extension
    else:
        extensions.add(container.type_mapper.generate_extension(container.registry, extensions))


def _runtime_client(container: Container, runtime: str) -> RuntimeClient:
    from src.infrastructure.runtime.clients import HttpRuntimeClient, InProcessRuntimeClient

    if runtime == MOCK_RUNTIME:
        client: RuntimeClient = InProcessRuntimeClient(container.runtime)
    else:
        client = HttpRuntimeClient(runtime, timeout=container.settings.runtime_request_timeout)
    container.use_runtime_client(client)
    return client


def _topology_summary(topo: ToscaTopology) -> Dict[str, Any]:
    return {
        "name": topo.name,
        "inputs": sorted(topo.inputs),
        "nodeTemplates": [
            {
                "name": t.name,
                "type": t.type_name,
                "properties": t.property_values,
                "capabilities": t.capability_property_values,
                "requirements": [
                    {
                        "requirement": b.requirement,
                        "target": b.target,
                        "relationship": b.relationship,
                        "relationshipTemplate": b.relationship_template,
                    }
                    for b in t.requirement_bindings
                ],
            }
            for t in topo.node_templates
        ],
        "relationshipTemplates": [
            {
                "name": r.name,
                "type": r.type_name,
                "source": r.source_template,
                "target": r.target_template,
                "properties": r.property_values,
            }
            for r in topo.relationship_templates
        ],
        "groups": len(topo.groups),
    }


def _print_violations(report: ValidationReport) -> None:
    table = Table(title="Violations", show_lines=False)
    table.add_column("Entity", style="bold cyan")
    table.add_column("Name", style="red")
    table.add_column("Message", style="white")
    for violation in report.violations:
        table.add_row(violation.entity_id or "-", violation.name, violation.message)
    err_console.print(table)


@app.callback(invoke_without_command=True)
def main(
    ctx: typer.Context,
    deterministic: bool = typer.Option(False, "--deterministic", help="Zero-delay mock runtime and stable ordering"),
    log_level: Optional[LogLevel] = typer.Option(None, "--log-level", case_sensitive=False, help="Log level"),
    fixtures: Optional[Path] = typer.Option(
        None, "--fixtures", file_okay=False, help="Fixture directory (overrides TOSCA2OCCI_FIXTURES)"
    ),
) -> None:
    """TOSCA to OCCI toolchain."""
    if ctx.invoked_subcommand is None:
        typer.echo(ctx.get_help())
        raise typer.Exit(EXIT_ERROR)
    overrides: Dict[str, Any] = {}
    if deterministic:
        overrides["deterministic"] = True
    if log_level is not None:
        overrides["log_level"] = log_level
    if fixtures is not None:
        overrides["fixtures_dir"] = fixtures
    settings = reload_settings(**overrides)
    _configure_logging(settings)
    container = Container(settings)
    ctx.obj = container
    ctx.call_on_close(container.close)


@app.command("parse-types")
def parse_types(
    ctx: typer.Context,
    files: List[Path] = typer.Argument(..., exists=True, dir_okay=False, readable=True, help="TOSCA type files"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Output file or '-' for stdout"),
) -> None:
    """Parse TOSCA type definition files and list the declared types."""
    container = _container(ctx)
    with _cli_errors():
        types = container.parser.parse_type_files(files)
        summary = [
            {
                "name": t.name,
                "typeClass": t.type_class.value,
                "derivedFrom": t.derived_from,
                "properties": [p.name for p in t.properties],
                "requirements": [r.name for r in t.requirements],
                "capabilities": dict(t.capabilities),
            }
            for t in types
        ]
        _emit(dumps(summary), out)


@app.command("parse-topology")
def parse_topology(
    ctx: typer.Context,
    file: Path = typer.Argument(..., exists=True, dir_okay=False, readable=True, help="TOSCA topology file"),
    inputs: Optional[List[str]] = typer.Option(None, "--input", "-i", help="Input value as key=value"),
    name: Optional[str] = typer.Option(None, "--name", help="Topology name"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Output file or '-' for stdout"),
) -> None:
    """Parse a topology template into templates and bindings."""
    container = _container(ctx)
    values = _parse_inputs(inputs)
    with _cli_errors():
        topo = container.parser.parse_topology(file.read_text(encoding="utf-8"), name=name, inputs=values)
        _emit(dumps(_topology_summary(topo)), out)


@app.command("gen-extension")
def gen_extension(
    ctx: typer.Context,
    types: Optional[Path] = typer.Option(None, "--types", file_okay=False, help="TOSCA type directory"),
    extensions: Optional[Path] = typer.Option(None, "--extensions", file_okay=False, help="Base extension directory"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Output file or '-' for stdout"),
) -> None:
    """Generate the TOSCA extension from a type directory (mapping report on stderr)."""
    container = _container(ctx)
    with _cli_errors():
        base = _extension_set(container, extensions, None)
        directory = types or container.fixtures_dir / "types"
        registry = container.parser.resolve_registry(container.parser.parse_type_dir(directory))
        report = MappingReport()
        extension = container.type_mapper.generate_extension(registry, base, report)
        container.type_mapper.log_report(report)
        _emit(dump_extension(extension), out)


@app.command("census")
def census(
    ctx: typer.Context,
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Output file or '-' for stdout"),
) -> None:
    """Count generated mixins per base extension."""
    container = _container(ctx)
    with _cli_errors():
        result = container.type_mapper.census(container.tosca_extension, container.extensions)
        _emit(dumps(result.to_dict()), out)


@app.command("gen-config")
def gen_config(
    ctx: typer.Context,
    topology: Path = typer.Option(..., "--topology", exists=True, dir_okay=False, help="TOSCA topology file"),
    extension: Optional[Path] = typer.Option(
        None, "--extension", exists=True, dir_okay=False, help="Generated TOSCA extension (generated if omitted)"
    ),
    inputs: Optional[List[str]] = typer.Option(None, "--input", "-i", help="Input value as key=value"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Output file or '-' for stdout"),
) -> None:
    """Generate the OCCI configuration of a topology."""
    container = _container(ctx)
    values = _parse_inputs(inputs)
    with _cli_errors():
        ext = parse_extension(extension) if extension is not None else container.tosca_extension
        topo = container.parser.parse_topology(topology.read_text(encoding="utf-8"), inputs=values)
        cfg = container.config_generator.generate_configuration(topo, ext, container.registry)
        _emit(dump_configuration(cfg), out)


@app.command("validate")
def validate(
    ctx: typer.Context,
    config: Path = typer.Option(..., "--config", exists=True, dir_okay=False, help="Configuration file"),
    extensions: Optional[Path] = typer.Option(None, "--extensions", file_okay=False, help="Extension directory"),
    extra: Optional[List[Path]] = typer.Option(None, "--extension", exists=True, dir_okay=False, help="Extra extension file"),
) -> None:
    """Validate a configuration; exit 1 when it has violations."""
    container = _container(ctx)
    with _cli_errors():
        cfg = load_configuration(config)
        extension_set = _extension_set(container, extensions, extra)
        _with_tosca_extension(container, extension_set, cfg)
        report = validate_configuration(cfg, extension_set)
    typer.echo(
        dumps(
            {
                "valid": report.is_valid,
                "violations": [
                    {"entityId": v.entity_id, "name": v.name, "message": v.message} for v in report.violations
                ],
            }
        ),
        nl=False,
    )
    if not report.is_valid:
        _print_violations(report)
        raise typer.Exit(EXIT_VIOLATIONS)


@app.command("pim2psm")
def pim2psm(
    ctx: typer.Context,
    config: Path = typer.Option(..., "--config", exists=True, dir_okay=False, help="PIM configuration file"),
    profile: Optional[Path] = typer.Option(None, "--profile", exists=True, dir_okay=False, help="PSM profile file"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Output file or '-' for stdout"),
) -> None:
    """Add provider specifics to a configuration."""
    container = _container(ctx)
    with _cli_errors():
        psm_profile = load_profile(profile or container.fixtures_dir / "profiles" / "default.json")
        psm = container.psm_transformer.transform(load_configuration(config), psm_profile)
        _emit(dump_configuration(psm), out)


@app.command("plan")
def plan(
    ctx: typer.Context,
    desired: Path = typer.Option(..., "--desired", exists=True, dir_okay=False, help="Desired configuration"),
    runtime: str = typer.Option(MOCK_RUNTIME, "--runtime", help="Runtime URL, or 'mock' for a fresh in-process runtime"),
    current: Optional[Path] = typer.Option(
        None, "--current", exists=True, dir_okay=False, help="Current configuration instead of extracting one"
    ),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Output file or '-' for stdout"),
) -> None:
    """Plan the requests that bring a runtime to the desired configuration."""
    container = _container(ctx)
    with _cli_errors():
        cfg = load_configuration(desired)
        _with_tosca_extension(container, container.extensions, cfg)
        orchestrator = container.orchestrator
        actual = load_configuration(current) if current is not None else orchestrator.extract(
            _runtime_client(container, runtime)
        )
        _emit(dump_plan(orchestrator.plan_for(cfg, actual)), out)


@app.command("deploy")
def deploy(
    ctx: typer.Context,
    desired: Path = typer.Option(..., "--desired", exists=True, dir_okay=False, help="Desired configuration"),
    runtime: str = typer.Option(MOCK_RUNTIME, "--runtime", help="Runtime URL, or 'mock' for an in-process runtime"),
    snapshot: Optional[Path] = typer.Option(None, "--snapshot", help="Write the runtime configuration after deployment"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Execution report file or '-' for stdout"),
) -> None:
    """Reconcile a runtime with the desired configuration; exit 1 when it does not conform."""
    container = _container(ctx)
    with _cli_errors():
        cfg = load_configuration(desired)
        _with_tosca_extension(container, container.extensions, cfg)
        client = _runtime_client(container, runtime)
        try:
            report = container.orchestrator.reconcile(cfg, client)
        except ExecutionError as e:
            partial = getattr(e, "report", None)
            if partial is not None:
                _emit(dump_report(partial), out)
            raise
        _emit(dump_report(report), out)
        if snapshot is not None:
            write_text(snapshot, dump_configuration(container.orchestrator.extract(client)))
    if not report.conformant:
        err_console.print("[yellow]Runtime does not conform to the desired configuration[/yellow]")
        raise typer.Exit(EXIT_VIOLATIONS)


@app.command("extract")
def extract(
    ctx: typer.Context,
    runtime: str = typer.Option(..., "--runtime", help="Runtime URL, or 'mock' for an in-process runtime"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Output file or '-' for stdout"),
) -> None:
    """Extract the current configuration of a runtime."""
    container = _container(ctx)
    with _cli_errors():
        cfg = container.orchestrator.extract(_runtime_client(container, runtime))
        _emit(dump_configuration(cfg), out)


@app.command("serve")
def serve(
    ctx: typer.Context,
    host: Optional[str] = typer.Option(None, "--host", help="Bind host"),
    port: Optional[int] = typer.Option(None, "--port", help="Bind port"),
) -> None:
    """Serve the mock runtime over HTTP."""
    import uvicorn

    from src.presentation.api.app import create_app

    container = _container(ctx)
    settings = container.settings
    with _cli_errors():
        api = create_app(settings, runtime=container.runtime)
        err_console.print(
            f"Serving mock runtime on http://{host or settings.runtime_host}:{port or settings.runtime_port}"
        )
        uvicorn.run(
            api,
            host=host or settings.runtime_host,
            port=port or settings.runtime_port,
            log_level=settings.log_level.value.lower(),
        )


def run() -> None:
    """Console script entry point."""
    app()


if __name__ == "__main__":
    run()
