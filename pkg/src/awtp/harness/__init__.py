from .experiments import MODES, run_experiment, trial_generators
from .reports import ExperimentReport, TrialOutcome, render_report, write_report

__all__ = [
    "ExperimentReport",
    "MODES",
    "TrialOutcome",
    "render_report",
    "run_experiment",
    "trial_generators",
    "write_report",
]
