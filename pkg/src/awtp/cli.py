from __future__ import annotations

import platform
from pathlib import Path
from typing import List, Optional

import numpy as np
import typer
import yaml
from rich import box
from rich.panel import Panel
from rich.table import Table

from . import __version__
from .channel import ChannelBudget, build_strategy, channel_run
from .codes import AwtpParams, EncodingCoins, awtp_decode_verbose, awtp_derive_params, awtp_encode
from .codes.bounds import awtp_failure_bound, awtp_rate_condition
from .codes.frs import frs_agreement_threshold
from .config import ExperimentConfig, Settings
from .errors import AwtpError, ConfigError, ParamError
from .harness import MODES, render_report, run_experiment, write_report
from .utils import configure_logging, console
from .utils.console import err_console
from .utils.formats import (
    dump_codeword,
    dump_message,
    dump_params,
    dump_transcript,
    load_codeword,
    load_message,
    load_params,
)

app = typer.Typer(help="Adversarial wiretap codes: encode, corrupt, decode and run experiments")
params_app = typer.Typer(help="Derive and check parameter sets")
app.add_typer(params_app, name="params")

EXIT_BOTTOM = 1
EXIT_USAGE = 2


class _State:
    settings: Settings = Settings()


state = _State()


def _usage_error(exc: Exception) -> typer.Exit:
    err_console.print(Panel(str(exc), title=type(exc).__name__, style="red"))
    return typer.Exit(EXIT_USAGE)


def _parse_args(pairs: List[str]) -> dict:
    args = {}
    for pair in pairs:
        key, sep, value = pair.partition("=")
        if not sep or not key:
            raise ConfigError(f"strategy argument {pair!r} must look like key=value")
        args[key] = yaml.safe_load(value)
    return args


def _resolve_params(path: Path) -> AwtpParams:
    return load_params(path, strict=state.settings.strict_rate)


def render_params(P: AwtpParams) -> None:
    table = Table(title="Parameter set", box=box.SIMPLE_HEAVY)
    table.add_column("Quantity", style="cyan", no_wrap=True)
    table.add_column("Value", style="white")
    for key, value in {**P.as_dict(), **P.derived()}.items():
        table.add_row(key, str(value))
    threshold = frs_agreement_threshold(P.frs)
    table.add_row("agreement threshold", f"{threshold} ({float(threshold):.3f})")
    table.add_row("list bound", str(P.ses.list_bound))
    table.add_row("failure bound", f"{float(awtp_failure_bound(P)):.3e}")
    if P.u > P.v:
        limit = awtp_rate_condition(P.u, P.v, P.R, P.rho_r)
        table.add_row("max rho_w (rate condition)", f"{limit} ({float(limit):.4f})")
    console.print(table)


@app.callback()
def configure(
    log_level: Optional[str] = typer.Option(None, "--log-level", help="Override AWTP_LOG_LEVEL"),
    env_file: Path = typer.Option(Path(".env"), "--env-file", help="Optional dotenv file"),
):
    settings = Settings.load(env_file)
    if log_level:
        settings.update_from_dict({"log_level": log_level})
    issues = settings.validate()
    if issues:
        raise _usage_error(ConfigError("; ".join(issues)))
    state.settings = settings
    configure_logging(settings.log_level)


@params_app.command("derive")
def params_derive(
    q: int = typer.Option(..., help="Field size (prime)"),
    u: int = typer.Option(..., help="Folding parameter"),
    v: int = typer.Option(..., help="Interpolation variables"),
    N: int = typer.Option(..., "--N", "-N", help="Codeword length in symbols"),
    R: str = typer.Option(..., "--R", "-R", help="Information rate, e.g. 1/30"),
    rho_r: str = typer.Option(..., help="Read fraction"),
    rho_w: str = typer.Option(..., help="Write fraction"),
    strict: bool = typer.Option(False, help="Require the asymptotic rate condition"),
    out: Optional[Path] = typer.Option(None, help="Write the parameter set as JSON"),
):
    """Validate a parameter set and print every derived quantity."""
    try:
        mode = "strict" if strict or state.settings.strict_rate else "permissive"
        P = awtp_derive_params(q, u, v, N, R, rho_r, rho_w, mode=mode)
    except (ParamError, ValueError, ZeroDivisionError) as exc:
        raise _usage_error(exc)
    render_params(P)
    if out:
        dump_params(P, out)
        console.print(f"[green]Wrote {out}[/green]")


@params_app.command("check")
def params_check(path: Path = typer.Argument(..., help="Parameter JSON file")):
    """Load a parameter file and report whether it is usable."""
    try:
        P = _resolve_params(path)
    except AwtpError as exc:
        raise _usage_error(exc)
    render_params(P)
    console.print(Panel.fit("Parameter set is valid", style="bold green"))


@app.command()
def encode(
    params: Path = typer.Option(..., help="Parameter JSON file"),
    out: Path = typer.Option(..., help="Codeword output (.json or .bin)"),
    message: Optional[Path] = typer.Option(None, help="Message JSON; random if omitted"),
    message_out: Optional[Path] = typer.Option(None, help="Where to save a random message"),
    seed: Optional[int] = typer.Option(None, help="Seed for the coins"),
):
    """Encode a message with fresh coins."""
    try:
        P = _resolve_params(params)
        rng = np.random.default_rng(state.settings.default_seed if seed is None else seed)
        m = load_message(message, P) if message else P.F.random(P.message_length, rng)
        codeword = awtp_encode(m, EncodingCoins.draw(P, rng), P)
    except AwtpError as exc:
        raise _usage_error(exc)
    dump_codeword(codeword, out)
    if message is None and message_out:
        dump_message(m, message_out)
    console.print(f"[green]Encoded {P.message_length} symbols into {P.N} x {P.u} -> {out}[/green]")


@app.command()
def corrupt(
    params: Path = typer.Option(..., help="Parameter JSON file"),
    codeword: Path = typer.Option(..., help="Codeword file"),
    out: Path = typer.Option(..., help="Received word output"),
    strategy: str = typer.Option("random", help="Adversary strategy"),
    arg: List[str] = typer.Option([], "--arg", help="Strategy argument key=value (repeatable)"),
    transcript: Optional[Path] = typer.Option(None, help="Write the channel transcript as JSON"),
    seed: Optional[int] = typer.Option(None, help="Seed for the adversary"),
):
    """Run one adversary over a codeword within the (ρ_r, ρ_w) budget."""
    try:
        P = _resolve_params(params)
        c = load_codeword(codeword, P)
        adversary = build_strategy(strategy, **_parse_args(arg))
        rng = np.random.default_rng(state.settings.default_seed if seed is None else seed)
        received, log = channel_run(c, adversary, ChannelBudget.for_params(P), rng)
    except AwtpError as exc:
        raise _usage_error(exc)
    dump_codeword(received, out)
    if transcript:
        dump_transcript(log, transcript)
    console.print(f"[green]{strategy}: read {log.S_r}, wrote {log.S_w} -> {out}[/green]")


@app.command()
def decode(
    params: Path = typer.Option(..., help="Parameter JSON file"),
    received: Path = typer.Option(..., help="Received word file"),
    out: Optional[Path] = typer.Option(None, help="Write the decoded message as JSON"),
):
    """Decode a received word; exits with status 1 on ⊥."""
    try:
        P = _resolve_params(params)
        y = load_codeword(received, P)
    except AwtpError as exc:
        raise _usage_error(exc)
    result = awtp_decode_verbose(y, P)
    if not result.ok:
        err_console.print(Panel(result.reason or "no unique candidate", title="⊥", style="yellow"))
        raise typer.Exit(EXIT_BOTTOM)
    if out:
        dump_message(result.message, out)
    console.print(Panel.fit(f"Decoded {result.message.size} symbols from {len(result.candidates)} candidates", style="green"))


@app.command()
def experiment(
    mode: str = typer.Argument(..., help=f"One of: {', '.join(MODES)}"),
    config: Optional[Path] = typer.Option(None, help="Experiment YAML or JSON"),
    seed: Optional[int] = typer.Option(None, help="Master seed"),
    trials: Optional[int] = typer.Option(None, help="Number of trials"),
    out: Optional[Path] = typer.Option(None, help="Report path; format follows --format"),
    fmt: str = typer.Option("json", "--format", help="json or csv"),
):
    """Run an experiment suite and print its report; exits with status 1 if any check fails."""
    settings = state.settings
    try:
        if mode not in MODES:
            raise ConfigError(f"unknown mode {mode!r}; expected one of {', '.join(MODES)}")
        if fmt not in ("json", "csv"):
            raise ConfigError(f"unknown report format {fmt!r}")
        if seed is None and config is None:
            seed = settings.default_seed
        overrides = {"mode": mode, "seed": seed, "trials": trials}
        cfg = ExperimentConfig.load(config, **overrides) if config else ExperimentConfig.from_dict({}, **overrides)
        report = run_experiment(cfg, settings)
    except AwtpError as exc:
        raise _usage_error(exc)
    render_report(report, console)
    target = out or Path(settings.results_dir) / f"{mode}-{cfg.seed}.{fmt}"
    write_report(report, target, fmt)
    console.print(f"Report written to {target}")
    if not report.passed:
        raise typer.Exit(EXIT_BOTTOM)


@app.command()
def doctor():
    """Show library versions and effective settings."""
    import galois

    table = Table(title="Environment", box=box.SIMPLE_HEAVY)
    table.add_column("Item", style="cyan", no_wrap=True)
    table.add_column("Value", style="white")
    table.add_row("awtp", __version__)
    table.add_row("python", platform.python_version())
    table.add_row("numpy", np.__version__)
    table.add_row("galois", galois.__version__)
    for key, value in state.settings.as_dict().items():
        table.add_row(key, str(value))
    console.print(table)

    issues = state.settings.validate()
    if issues:
        console.print(Panel("\n".join(issues), title="Settings issues", style="yellow"))
    else:
        console.print(Panel.fit("Settings look good", style="green"))


def main():
    app()


if __name__ == "__main__":
    main()
