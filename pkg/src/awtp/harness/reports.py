"""Experiment report models and writers."""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Any, Dict, Literal, Optional

from pydantic import BaseModel, Field
from rich import box
from rich.console import Console
from rich.panel import Panel
from rich.table import Table

SEED_SCHEME = "numpy.random.SeedSequence(seed).spawn(trials)[i] -> numpy.random.default_rng"

Outcome = Literal["ok", "bottom", "incorrect", "fault", "pass", "fail", "skipped"]


class TrialOutcome(BaseModel):
    index: int
    outcome: Outcome
    strategy: Optional[str] = None
    detail: str = ""
    extra: Dict[str, Any] = Field(default_factory=dict)


class ExperimentReport(BaseModel):
    mode: str
    seed: int
    trials: int
    seed_scheme: str = SEED_SCHEME
    params: Optional[Dict[str, str]] = None
    derived: Optional[Dict[str, int]] = None
    outcomes: list[TrialOutcome] = Field(default_factory=list)
    ok_count: int = 0
    bottom_count: int = 0
    incorrect_count: int = 0
    fault_count: int = 0
    aggregates: Dict[str, Any] = Field(default_factory=dict)
    failures: list[str] = Field(default_factory=list)
    wall_clock: float = 0.0
    passed: bool = True

    def tally(self) -> None:
        """Recount outcome totals; ``passed`` requires no incorrect output and no recorded failure."""
        counts = {kind: 0 for kind in ("ok", "bottom", "incorrect", "fault")}
        for item in self.outcomes:
            if item.outcome in counts:
                counts[item.outcome] += 1
        self.ok_count = counts["ok"]
        self.bottom_count = counts["bottom"]
        self.incorrect_count = counts["incorrect"]
        self.fault_count = counts["fault"]
        if self.incorrect_count and not any("incorrect" in f for f in self.failures):
            self.failures.append(f"{self.incorrect_count} trials decoded to an incorrect message")
        self.passed = not self.failures


def write_report(report: ExperimentReport, path: Path | str, fmt: str = "json") -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "json":
        path.write_text(report.model_dump_json(indent=2) + "\n")
    elif fmt == "csv":
        with open(path, "w", newline="") as f:
            writer = csv.writer(f)
            writer.writerow(["index", "outcome", "strategy", "detail", "extra"])
            for item in report.outcomes:
                writer.writerow([item.index, item.outcome, item.strategy or "", item.detail, json.dumps(item.extra)])
            writer.writerow([])
            writer.writerow(["summary", "value"])
            header = report.model_dump(exclude={"outcomes"})
            for key, value in header.items():
                writer.writerow([key, json.dumps(value) if isinstance(value, (dict, list)) else value])
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    return path


def render_report(report: ExperimentReport, console: Console) -> None:
    table = Table(title=f"Experiment: {report.mode}", box=box.SIMPLE_HEAVY)
    table.add_column("Metric", style="cyan", no_wrap=True)
    table.add_column("Value", style="white")

    table.add_row("trials", str(report.trials))
    table.add_row("seed", str(report.seed))
    table.add_row("ok / bottom / incorrect / fault", f"{report.ok_count} / {report.bottom_count} / {report.incorrect_count} / {report.fault_count}")
    for key, value in report.aggregates.items():
        if isinstance(value, (dict, list)):
            continue
        table.add_row(key, str(value))
    table.add_row("wall clock", f"{report.wall_clock:.2f}s")
    console.print(table)

    if report.passed:
        console.print(Panel.fit("All checks passed", style="bold green"))
    else:
        console.print(Panel("\n".join(report.failures), title="Failed checks", style="red"))
