import logging
import math
from collections.abc import Sequence
from typing import Any, Callable, NamedTuple, Optional

import click
import numpy as np
import typer
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from strauss import env
from strauss.cli._check import run_checks
from strauss.cli._config import OutputFormat, RunConfig
from strauss.cli._svg import PlotSpec, emit_svg
from strauss.core._logger import logger
from strauss.core.domain.errors import ParameterError, StraussError
from strauss.core.domain.params import NewtonOptions
from strauss.core.domain.phase import BranchLabel, DMode
from strauss.core.domain.sweep import SweepTable
from strauss.core.explorer.boundary import boundary_curve, trace_vs_delta
from strauss.core.explorer.f_max import fm_curve, scaling_fit
from strauss.core.explorer.small_e import classify_point, small_e_table

EXIT_OK = 0
EXIT_NUMERICAL = 3
EXIT_IO = 4

DEFAULT_E_STEP = 0.001

SCALING_COLUMNS = ["e_lo", "e_hi", "slope_A", "slope_B", "slope_gap"]
CLASSIFY_COLUMNS = ["e", "t", "delta", "entropy", "S_bipodal", "S_oe", "S_theta", "A", "B", "c", "D"]
CHECK_COLUMNS = ["index", "worst", "tolerance", "samples", "passed"]

app = typer.Typer(
    name="strauss",
    help="Entropy-maximizing graphons just below the Erdős–Rényi curve of the edge/triangle model.",
    no_args_is_help=True,
    add_completion=False,
    pretty_exceptions_enable=False,
)


def configure_logging(verbose: int = 0) -> None:
    """Send the package logs to standard error through rich"""
    if verbose == 0:
        level = env.STRAUSS_LOG_LEVEL
    else:
        level = "INFO" if verbose == 1 else "DEBUG"
    if not isinstance(logging.getLevelName(level), int):
        level = "WARNING"
    handler = RichHandler(console=Console(stderr=True), show_path=False, show_time=False)
    logger.handlers = [handler]
    logger.setLevel(level)


class _Output(NamedTuple):
    table: SweepTable
    plot: Optional[PlotSpec] = None


def _metadata_float(table: SweepTable, key: str) -> Optional[float]:
    raw = table.metadata.get(key)
    return float(raw) if raw is not None else None


def _run_fm_curve(config: RunConfig) -> _Output:
    table = fm_curve(config.e_range, config.e_step or DEFAULT_E_STEP, opts=config.newton)
    return _Output(table, PlotSpec(x="e", series=["A", "B", "gap"], marker=_metadata_float(table, "gap_crossing")))


def _read_text(path: str) -> str:
    with open(path) as f:
        return f.read()


def _run_scaling(config: RunConfig) -> _Output:
    window = config.e_range
    if config.table:
        source = SweepTable.from_csv(_read_text(config.table))
    else:
        source = fm_curve(window, config.e_step or DEFAULT_E_STEP, opts=config.newton)
    slopes = scaling_fit(source, window)
    table = SweepTable.create("scaling", SCALING_COLUMNS, {"window": list(window), "source": config.table or "sweep"})
    table.append(e_lo=window[0], e_hi=window[1], **slopes._asdict())
    return _Output(table)


def _run_boundary(config: RunConfig) -> _Output:
    table = boundary_curve(config.e_range, config.e_step or DEFAULT_E_STEP, config.d_mode, opts=config.newton)
    return _Output(table, PlotSpec(x="e", series=["delta_m"], title=f"δ_m(e), {config.d_mode.value}"))


def _require(value: Optional[float], flag: str) -> float:
    if value is None:
        raise ParameterError(f"Missing option {flag}", flag=flag)
    return value


def _run_trace(config: RunConfig) -> _Output:
    e = _require(config.e, "--e")
    table = trace_vs_delta(
        e,
        config.d_mode,
        _require(config.delta_step, "--delta-step"),
        _require(config.delta_stop, "--delta-stop"),
        opts=config.newton,
    )
    # Each parameter is scaled to a unit maximum so that all four fit in one plot
    scales: dict[str, float] = {}
    for name in ("A", "B", "c", "D"):
        peak = float(np.nanmax(np.abs(table.column(name)))) if len(table) else 0.0
        scales[name] = 1 / peak if peak > 0 and math.isfinite(peak) else 1.0
    plot = PlotSpec(
        x="delta",
        series=["A", "B", "c", "D"],
        scales=scales,
        marker=_metadata_float(table, "crossing_delta"),
        title=f"e = {e:g}, {config.d_mode.value}",
    )
    return _Output(table, plot)


def _run_small_e(config: RunConfig) -> _Output:
    e_min, e_max = config.e_range
    table = small_e_table((e_min, e_max, config.e_step or DEFAULT_E_STEP), opts=config.newton)
    return _Output(table, PlotSpec(x="e", series=["delta_cross"], marker=_metadata_float(table, "dominance_crossing")))


def _run_classify(config: RunConfig) -> _Output:
    e, t = _require(config.e, "--e"), _require(config.t, "--t")
    point = classify_point(e, t, config.d_mode, opts=config.newton)
    table = SweepTable.create("classify", CLASSIFY_COLUMNS, {"e": e, "t": t, "d_mode": config.d_mode.value})
    table.metadata["label"] = point.label.value
    table.metadata["tie"] = str(point.tie).lower()
    p = point.params
    table.append(
        e=e,
        t=t,
        delta=point.delta,
        entropy=point.entropy,
        S_bipodal=point.candidates.get(BranchLabel.BIPODAL, math.nan),
        S_oe=point.candidates.get(BranchLabel.O_E, math.nan),
        S_theta=point.candidates.get(BranchLabel.THETA_1, math.nan),
        A=p.A if p else math.nan,
        B=p.B if p else math.nan,
        c=p.c if p else math.nan,
        D=p.D if p else math.nan,
    )
    return _Output(table)


def _run_check(config: RunConfig) -> _Output:
    results = run_checks(config.draws, config.n_grid)
    report = Table(title="Identity suite")
    for column in ("identity", "worst", "tolerance", "samples", "result"):
        report.add_column(column)
    table = SweepTable.create("check", CHECK_COLUMNS, {"draws": config.draws, "n_grid": config.n_grid})
    for i, r in enumerate(results):
        verdict = "[green]pass[/green]" if r.passed else "[red]FAIL[/red]"
        report.add_row(r.name, f"{r.worst:.3g}", f"{r.tolerance:.0e}", str(r.samples), verdict)
        table.metadata[f"identity_{i}"] = r.name
        table.append(index=i, worst=r.worst, tolerance=r.tolerance, samples=r.samples, passed=float(r.passed))
    Console(stderr=True).print(report)

    failed = [str(i) for i, r in enumerate(results) if not r.passed]
    if failed:
        table.metadata["failed"] = ",".join(failed)
    return _Output(table)


_RUNNERS: dict[str, Callable[[RunConfig], _Output]] = {
    "check": _run_check,
    "fm-curve": _run_fm_curve,
    "scaling": _run_scaling,
    "boundary": _run_boundary,
    "trace": _run_trace,
    "small-e": _run_small_e,
    "classify": _run_classify,
}


def _write(text: str, out: str) -> None:
    if out == "-":
        typer.echo(text, nl=False)
        return
    with open(out, "w") as f:
        f.write(text)


def _incomplete(table: SweepTable) -> bool:
    return table.gap_count() > 0 or any(k.startswith("truncated") for k in table.metadata)


def execute(config: RunConfig) -> int:
    """Run the command, write its table (and plot) and return the exit status.

    0 on success, 2 on invalid input, 3 on numerical failure, 4 when an output cannot be written.
    Tables with gap rows or a truncated sweep are still written, with status 3."""
    try:
        output = _RUNNERS[config.command](config)
    except StraussError as err:
        logger.error("%s failed [%s]: %s %s", config.command, err.code, err.message, err.details or "")
        return err.exit_code
    except OSError as err:
        logger.error("Cannot read %s: %s", config.table, err)
        return EXIT_IO

    table = output.table
    text = table.to_json() if config.output_format == OutputFormat.JSON else table.to_csv()
    try:
        _write(text, config.out)
        if config.svg:
            if output.plot is None:
                logger.warning("%s has no plot, --svg ignored", config.command)
            else:
                _write(emit_svg(table, output.plot), config.svg)
    except OSError as err:
        logger.error("Cannot write output: %s", err)
        return EXIT_IO
    except StraussError as err:
        logger.error("Plot failed [%s]: %s", err.code, err.message)
        return err.exit_code

    if "failed" in table.metadata:
        logger.warning("%s failed on identities %s", config.command, table.metadata["failed"])
        return EXIT_NUMERICAL
    if _incomplete(table):
        truncated = {k: v for k, v in table.metadata.items() if k.startswith("truncated")}
        logger.warning("%s is incomplete: %d gap rows %s", config.command, table.gap_count(), truncated)
        return EXIT_NUMERICAL
    return EXIT_OK


# Options shared by the sweep commands
_OUT = typer.Option("-", "--out", help="Output path, '-' for standard output")
_FORMAT = typer.Option(OutputFormat.CSV, "--format", help="Table format")
_SVG = typer.Option(None, "--svg", help="Also write a line plot to this path")
_STEP_TOL = typer.Option(None, "--step-tol", help="Newton step tolerance")
_GRAD_TOL = typer.Option(None, "--grad-tol", help="Newton gradient tolerance")
_MAX_ITER = typer.Option(None, "--max-iter", help="Newton iteration cap")
_E_MIN = typer.Option(..., "--e-min", help="Smallest edge density")
_E_MAX = typer.Option(..., "--e-max", help="Largest edge density")
_E_STEP = typer.Option(..., "--e-step", help="Edge density step")
_E_STEP_DEFAULT = typer.Option(DEFAULT_E_STEP, "--e-step", help="Edge density step")
_D_MODE_FREE = typer.Option(DMode.FREE_D, "--d-mode", help="ansatz pins D = 0, free optimizes D")
_D_MODE_ANSATZ = typer.Option(DMode.ANSATZ, "--d-mode", help="ansatz pins D = 0, free optimizes D")
_E = typer.Option(..., "--e", help="Edge density")
_T = typer.Option(..., "--t", help="Triangle density, at most e³")
_DELTA_STEP = typer.Option(..., "--delta-step", help="δ step, also the first δ")
_DELTA_STOP = typer.Option(..., "--delta-stop", help="Last δ")
_TABLE = typer.Option(None, "--table", help="Fit an fm-curve CSV instead of sweeping")
_N_GRID = typer.Option(2000, "--n-grid", help="Riemann oracle grid size")
_DRAWS = typer.Option(1000, "--draws", help="Random parameter draws per identity")
_VERBOSE = typer.Option(0, "--verbose", "-v", count=True, help="INFO logs, DEBUG when repeated")


def _newton(step_tol: Optional[float], grad_tol: Optional[float], max_iter: Optional[int]) -> NewtonOptions:
    overrides = {"step_tol": step_tol, "grad_tol": grad_tol, "max_iter": max_iter}
    return NewtonOptions(**{k: v for k, v in overrides.items() if v is not None})


def _submit(ctx: typer.Context, newton: tuple[Optional[float], Optional[float], Optional[int]], **fields: Any) -> None:
    try:
        config = RunConfig(command=ctx.info_name, newton=_newton(*newton), **fields)  # pyright: ignore
    except StraussError as err:
        raise typer.BadParameter(err.message, param_hint=(err.details or {}).get("flag")) from err

    # parse_args collects the config instead of running it
    if callable(ctx.obj):
        ctx.obj(config)
        return
    code = execute(config)
    if code != EXIT_OK:
        raise typer.Exit(code)


@app.callback()
def _root(
    verbose: int = _VERBOSE,
):
    configure_logging(verbose)


@app.command("fm-curve")
def fm_curve_command(
    ctx: typer.Context,
    e_min: float = _E_MIN,
    e_max: float = _E_MAX,
    e_step: float = _E_STEP,
    out: str = _OUT,
    output_format: OutputFormat = _FORMAT,
    svg: Optional[str] = _SVG,
    step_tol: Optional[float] = _STEP_TOL,
    grad_tol: Optional[float] = _GRAD_TOL,
    max_iter: Optional[int] = _MAX_ITER,
):
    """F_m(e), its maximizer and the advantage over H″(e)"""
    _submit(
        ctx,
        (step_tol, grad_tol, max_iter),
        e_min=e_min,
        e_max=e_max,
        e_step=e_step,
        out=out,
        output_format=output_format,
        svg=svg,
    )


@app.command("scaling")
def scaling_command(
    ctx: typer.Context,
    e_min: float = _E_MIN,
    e_max: float = _E_MAX,
    e_step: float = _E_STEP_DEFAULT,
    table: Optional[str] = _TABLE,
    out: str = _OUT,
    output_format: OutputFormat = _FORMAT,
    step_tol: Optional[float] = _STEP_TOL,
    grad_tol: Optional[float] = _GRAD_TOL,
    max_iter: Optional[int] = _MAX_ITER,
):
    """Log-log slopes of A, B and F_m − H″ against e₀ − e over [e-min, e-max]"""
    _submit(
        ctx,
        (step_tol, grad_tol, max_iter),
        e_min=e_min,
        e_max=e_max,
        e_step=e_step,
        table=table,
        out=out,
        output_format=output_format,
    )


@app.command("boundary")
def boundary_command(
    ctx: typer.Context,
    e_min: float = _E_MIN,
    e_max: float = _E_MAX,
    e_step: float = _E_STEP_DEFAULT,
    d_mode: DMode = _D_MODE_FREE,
    out: str = _OUT,
    output_format: OutputFormat = _FORMAT,
    svg: Optional[str] = _SVG,
    step_tol: Optional[float] = _STEP_TOL,
    grad_tol: Optional[float] = _GRAD_TOL,
    max_iter: Optional[int] = _MAX_ITER,
):
    """δ_m(e), the edge of the tripodal phase, continued outwards from e = 0.1"""
    _submit(
        ctx,
        (step_tol, grad_tol, max_iter),
        e_min=e_min,
        e_max=e_max,
        e_step=e_step,
        d_mode=d_mode,
        out=out,
        output_format=output_format,
        svg=svg,
    )


@app.command("trace")
def trace_command(
    ctx: typer.Context,
    e: float = _E,
    delta_step: float = _DELTA_STEP,
    delta_stop: float = _DELTA_STOP,
    d_mode: DMode = _D_MODE_FREE,
    out: str = _OUT,
    output_format: OutputFormat = _FORMAT,
    svg: Optional[str] = _SVG,
    step_tol: Optional[float] = _STEP_TOL,
    grad_tol: Optional[float] = _GRAD_TOL,
    max_iter: Optional[int] = _MAX_ITER,
):
    """Best tripodal parameters and entropies along δ at fixed e"""
    _submit(
        ctx,
        (step_tol, grad_tol, max_iter),
        e=e,
        delta_step=delta_step,
        delta_stop=delta_stop,
        d_mode=d_mode,
        out=out,
        output_format=output_format,
        svg=svg,
    )


@app.command("small-e")
def small_e_command(
    ctx: typer.Context,
    e_min: float = _E_MIN,
    e_max: float = _E_MAX,
    e_step: float = _E_STEP,
    out: str = _OUT,
    output_format: OutputFormat = _FORMAT,
    svg: Optional[str] = _SVG,
    step_tol: Optional[float] = _STEP_TOL,
    grad_tol: Optional[float] = _GRAD_TOL,
    max_iter: Optional[int] = _MAX_ITER,
):
    """Both F branches and the Θ(1)/O(e) crossing δ at small e"""
    _submit(
        ctx,
        (step_tol, grad_tol, max_iter),
        e_min=e_min,
        e_max=e_max,
        e_step=e_step,
        out=out,
        output_format=output_format,
        svg=svg,
    )


@app.command("classify")
def classify_command(
    ctx: typer.Context,
    e: float = _E,
    t: float = _T,
    d_mode: DMode = _D_MODE_ANSATZ,
    out: str = _OUT,
    output_format: OutputFormat = _FORMAT,
    step_tol: Optional[float] = _STEP_TOL,
    grad_tol: Optional[float] = _GRAD_TOL,
    max_iter: Optional[int] = _MAX_ITER,
):
    """The best of the bipodal and tripodal candidates at (e, t)"""
    _submit(
        ctx,
        (step_tol, grad_tol, max_iter),
        e=e,
        t=t,
        d_mode=d_mode,
        out=out,
        output_format=output_format,
    )


@app.command("check")
def check_command(
    ctx: typer.Context,
    n_grid: int = _N_GRID,
    draws: int = _DRAWS,
    out: str = _OUT,
    output_format: OutputFormat = _FORMAT,
):
    """Cross-check the closed forms against the generic functionals"""
    _submit(ctx, (None, None, None), n_grid=n_grid, draws=draws, out=out, output_format=output_format)


def parse_args(argv: Sequence[str]) -> RunConfig:
    """The validated configuration of a command line, without running it.

    Raises ParameterError on any usage error."""
    captured: list[RunConfig] = []
    command = typer.main.get_command(app)
    try:
        command.main(args=list(argv), prog_name="strauss", standalone_mode=False, obj=captured.append)
    except click.ClickException as err:
        raise ParameterError(err.format_message()) from err
    if not captured:
        raise ParameterError("No command given")
    return captured[0]


def main() -> None:
    app()
