"""Experiment suites: end-to-end round trips, exact secrecy, AMD, evasive-set and bound checks."""

from __future__ import annotations

import logging
import time
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from ..channel.adversary import ChannelBudget, channel_run
from ..codes.amd import amd_params, amd_pass_statistics
from ..codes.bounds import (
    alphabet_size,
    awtp_capacity_bound,
    awtp_failure_bound,
    awtp_information_rate,
    awtp_rate_condition,
    schedule_check,
)
from ..codes.codec import AwtpParams, EncodingCoins, awtp_decode_verbose, awtp_encode_word, awtp_inner_word
from ..codes.evasive import (
    ses_contains_many,
    ses_encode_many,
    ses_intersect,
    ses_inverse,
    ses_points,
    ses_setup,
)
from ..codes.field import AffineSpace, FieldArray, as_ints, coefficient_grid, prime_field
from ..codes.frs import FrsParams, frs_agreement, frs_agreement_threshold, frs_encode, frs_list_decode
from ..config import ExperimentConfig, Settings
from ..errors import AwtpError, ChannelError, ConfigError, ScaleError
from .reports import ExperimentReport, TrialOutcome

logger = logging.getLogger(__name__)

TrialFn = Callable[[int, np.random.Generator], TrialOutcome]


def trial_generators(seed: int, trials: int) -> list[np.random.Generator]:
    """Independent per-trial generators split from one master seed."""
    return [np.random.default_rng(child) for child in np.random.SeedSequence(seed).spawn(trials)]


def _run_trials(trial: TrialFn, config: ExperimentConfig, workers: int) -> list[TrialOutcome]:
    generators = trial_generators(config.seed, config.trials)
    if workers <= 1:
        return [trial(i, rng) for i, rng in enumerate(generators)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(trial, range(config.trials), generators))


def _report(config: ExperimentConfig, P: Optional[AwtpParams] = None) -> ExperimentReport:
    return ExperimentReport(
        mode=config.mode,
        seed=config.seed,
        trials=config.trials,
        params=P.as_dict() if P else None,
        derived=P.derived() if P else None,
    )


def _same(a: FieldArray, b: FieldArray) -> bool:
    return a.shape == b.shape and bool(np.array_equal(as_ints(a), as_ints(b)))


def cmd_roundtrip(config: ExperimentConfig, settings: Settings) -> ExperimentReport:
    """Encode, pass through the adversary channel and decode, once per trial."""
    P = config.params.resolve(strict=settings.strict_rate)
    budget = ChannelBudget.for_params(P)
    report = _report(config, P)
    decodable = P.N - P.writes_max > frs_agreement_threshold(P.frs)

    def trial(index: int, rng: np.random.Generator) -> TrialOutcome:
        spec = config.strategy_for(index)
        message = P.F.random(P.message_length, rng)
        coins = EncodingCoins.draw(P, rng)
        s = awtp_inner_word(message, coins.r_amd, P)
        codeword = awtp_encode_word(s, coins, P)
        try:
            received, transcript = channel_run(codeword, spec.build(), budget, rng)
        except ChannelError as exc:
            return TrialOutcome(index=index, outcome="fault", strategy=spec.name, detail=f"{type(exc).__name__}: {exc}")

        result = awtp_decode_verbose(received, P)
        extra = {
            "reads": len(transcript.S_r),
            "writes": len(transcript.S_w),
            "frs_dim": result.frs_dim,
            "candidates": len(result.candidates),
            "s_listed": any(_same(s, candidate) for candidate in result.candidates),
        }
        if result.message is None:
            return TrialOutcome(index=index, outcome="bottom", strategy=spec.name, detail=result.reason, extra=extra)
        outcome = "ok" if _same(result.message, message) else "incorrect"
        return TrialOutcome(index=index, outcome=outcome, strategy=spec.name, extra=extra)

    report.outcomes = _run_trials(trial, config, config.workers or settings.workers)
    completed = [o for o in report.outcomes if o.outcome != "fault"]
    if decodable:
        bottoms = sum(o.outcome == "bottom" for o in completed)
        if bottoms:
            report.failures.append(f"{bottoms} trials returned ⊥ under budget-respecting adversaries")
        missing = sum(not o.extra.get("s_listed", True) for o in completed)
        if missing:
            report.failures.append(f"{missing} trials lost the transmitted word from the candidate list")
    report.aggregates = {
        "decodable_regime": decodable,
        "agreement_threshold": str(frs_agreement_threshold(P.frs)),
        "failure_bound": str(awtp_failure_bound(P)),
        "max_candidates": max((o.extra.get("candidates", 0) for o in completed), default=0),
    }
    return report


def exact_view_distribution(
    frs: FrsParams, s: FieldArray, read_set: list[int], cap: int
) -> Counter:
    """Multiset of adversary views over every coin vector, with the first |s| coefficients fixed to s."""
    q, u = frs.F.q, frs.u
    coin_length = frs.k - s.size
    total = q**coin_length
    if total > cap:
        raise ScaleError(f"{total} coin vectors exceed the enumeration cap {cap}")
    rows = [j * u + t for j in read_set for t in range(u)]
    if not rows:
        return Counter({(): total})
    V = frs.generator_matrix[rows]
    base = V[:, : s.size] @ s if s.size else frs.F.GF.Zeros(len(rows))
    if coin_length == 0:
        return Counter({tuple(as_ints(base).tolist()): 1})
    coins = V[:, s.size :].T
    views: Counter = Counter()
    for chunk in coefficient_grid(q, coin_length):
        block = as_ints(frs.F.GF(chunk) @ coins + base)
        views.update(map(tuple, block.tolist()))
    return views


def statistical_distance(first: Counter, second: Counter) -> Fraction:
    total_a, total_b = sum(first.values()), sum(second.values())
    keys = set(first) | set(second)
    return sum(
        (abs(Fraction(first.get(k, 0), total_a) - Fraction(second.get(k, 0), total_b)) for k in keys),
        Fraction(0),
    ) / 2


def _distinct_pair(rng: np.random.Generator, F, length: int) -> list[FieldArray]:
    first = F.random(length, rng)
    second = F.random(length, rng)
    if length and _same(first, second):
        second[0] = second[0] + F.GF(1)
    return [first, second]


def cmd_secrecy_exact(config: ExperimentConfig, settings: Settings) -> ExperimentReport:
    """Exact view distributions for two fixed words; perfect secrecy means distance 0."""
    section = config.secrecy
    rng = trial_generators(config.seed, 1)[0]
    cap = settings.enumeration_cap
    P = config.params.resolve(strict=settings.strict_rate) if config.params else None
    report = _report(config, P)

    if P is not None and P.q**P.coin_length <= cap:
        level = "message"
        frs = P.frs
        messages = (
            [P.F(m) for m in section.messages] if section.messages else _distinct_pair(rng, P.F, P.message_length)
        )
        words = [awtp_inner_word(m, P.F.random(P.N, rng), P) for m in messages]
        read_set = section.read_set if section.read_set is not None else list(range(P.reads_max))
        reads_max = P.reads_max
    else:
        if P is not None:
            logger.warning("coin space q^%d is too large to enumerate; using the micro FRS code", P.coin_length)
        level = "inner-word"
        micro = section.micro
        frs = FrsParams(prime_field(micro.q), micro.u, micro.N, micro.s_length + micro.u * micro.reads, 1)
        words = (
            [frs.F(s) for s in section.s_vectors] if section.s_vectors else _distinct_pair(rng, frs.F, micro.s_length)
        )
        read_set = section.read_set if section.read_set is not None else list(range(micro.reads))
        reads_max = micro.reads

    if len(set(read_set)) > reads_max or any(not 0 <= p < frs.N for p in read_set):
        raise ConfigError(f"read set {read_set} must hold at most {reads_max} distinct positions in [0, {frs.N})")
    read_set = sorted(set(read_set))
    coin_length = frs.k - words[0].size
    observed = len(read_set) * frs.u

    distributions = [exact_view_distribution(frs, s, read_set, cap) for s in words]
    sd = statistical_distance(distributions[0], distributions[-1])
    square = observed == coin_length
    for index, views in enumerate(distributions):
        counts = set(views.values())
        uniform = len(counts) == 1 and (observed > coin_length or len(views) == frs.F.q**observed)
        bijective = square and len(views) == frs.F.q**coin_length
        outcome = "pass" if uniform and (bijective or not square) else "fail"
        report.outcomes.append(
            TrialOutcome(
                index=index,
                outcome=outcome,
                extra={"distinct_views": len(views), "uniform": uniform, "bijective": bijective},
            )
        )
        if outcome == "fail":
            report.failures.append(f"view map for word {index} is not uniform")

    if sd != 0:
        report.failures.append(f"statistical distance between views is {sd}, expected 0")
    report.aggregates = {
        "level": level,
        "read_set": read_set,
        "coin_space": frs.F.q**coin_length,
        "statistical_distance": str(sd),
        "square_view_map": square,
    }
    return report


def cmd_amd_exhaustive(config: ExperimentConfig, settings: Settings) -> ExperimentReport:
    """Worst-case pass probability of a nonzero offset, over every message and offset."""
    section = config.amd
    params = amd_params(section.q, section.m, section.ell)
    stats = amd_pass_statistics(params)
    report = _report(config)
    report.outcomes.append(
        TrialOutcome(
            index=0,
            outcome="pass" if stats.within_bound else "fail",
            extra={"witness_x": list(stats.witness_x), "witness_offset": list(stats.witness_offset)},
        )
    )
    if not stats.within_bound:
        report.failures.append(f"offset passes with probability {stats.probability} > {stats.bound}")
    report.aggregates = {
        "field_size": stats.field_size,
        "max_pass": stats.max_pass,
        "max_pass_probability": str(stats.probability),
        "bound": str(stats.bound),
        "checks": stats.checks,
    }
    return report


def cmd_ses_check(config: ExperimentConfig, settings: Settings) -> ExperimentReport:
    """Round trip over the whole evasive set and intersection against brute force on random subspaces."""
    section = config.ses
    w = section.v * section.v
    P = ses_setup(section.q, section.v, (w - section.v) * section.blocks)
    inputs, points = ses_points(P, settings.enumeration_cap)
    report = _report(config)

    recovered = np.stack([as_ints(ses_inverse(p, P)) for p in points])
    unique = np.unique(as_ints(points), axis=0).shape[0]
    roundtrip = (
        np.array_equal(recovered, as_ints(inputs))
        and np.array_equal(as_ints(ses_encode_many(recovered, P)), as_ints(points))
        and bool(ses_contains_many(P, points).all())
        and unique == points.shape[0]
    )
    if not roundtrip:
        report.failures.append("encode/inverse is not a bijection onto the variety")

    max_dim = min(section.max_dim, P.v)

    def trial(index: int, rng: np.random.Generator) -> TrialOutcome:
        d = int(rng.integers(0, max_dim + 1))
        M = P.F.random((P.n, d), rng)
        z = points[int(rng.integers(points.shape[0]))] if index % 2 == 0 else P.F.random(P.n, rng)
        H = AffineSpace(M, z).reduced()
        fast = {tuple(as_ints(x).tolist()) for x in ses_intersect(P, H)}
        oracle = {tuple(row) for row in as_ints(points[H.contains_many(points)]).tolist()}
        matches = fast == oracle
        within = len(oracle) <= P.list_bound
        return TrialOutcome(
            index=index,
            outcome="pass" if matches and within else "fail",
            detail="" if matches else f"intersection {len(fast)} points, oracle {len(oracle)}",
            extra={"dim": H.dim, "size": len(oracle)},
        )

    report.outcomes = _run_trials(trial, config, config.workers or settings.workers)
    mismatches = sum(o.outcome == "fail" for o in report.outcomes)
    if mismatches:
        report.failures.append(f"{mismatches} subspaces disagree with the oracle or exceed {P.list_bound} points")
    report.aggregates = {
        "degrees": list(P.degrees),
        "determined_coordinates": list(P.J),
        "set_size": int(points.shape[0]),
        "list_bound": P.list_bound,
        "max_intersection": max((o.extra["size"] for o in report.outcomes), default=0),
        "roundtrip_bijective": roundtrip,
    }
    return report


def cmd_bounds(config: ExperimentConfig, settings: Settings) -> ExperimentReport:
    """Tabulate capacity bounds, the rate condition and the family schedule in exact arithmetic."""
    section = config.bounds
    P = config.params.resolve(strict=settings.strict_rate) if config.params else None
    report = _report(config, P)
    N = P.N if P else 1
    index = 0

    for rho_r in map(Fraction, section.rho_r):
        for rho_w in map(Fraction, section.rho_w):
            for eps in map(Fraction, section.eps):
                bound = awtp_capacity_bound(rho_r, rho_w, eps, N, Fraction(section.alphabet_bits))
                exact = eps != 0 or bound == 1 - rho_r - rho_w
                report.outcomes.append(
                    TrialOutcome(
                        index=index,
                        outcome="pass" if exact else "fail",
                        detail="infeasible" if rho_r + rho_w >= 1 else "",
                        extra={
                            "rho_r": str(rho_r),
                            "rho_w": str(rho_w),
                            "eps": str(eps),
                            "capacity_bound": str(bound),
                            "capacity_bound_float": float(bound),
                        },
                    )
                )
                index += 1

    schedules = []
    for xi1 in section.xi1:
        check = schedule_check(xi1, section.schedule_rho_r, section.schedule_rho_w)
        schedules.append(
            {
                "xi1": str(check.schedule.xi1),
                "u": check.schedule.u,
                "v": check.schedule.v,
                "R": str(check.R),
                "max_rho_w": str(check.max_rho_w),
                "max_rho_w_float": float(check.max_rho_w),
                "holds": check.holds,
            }
        )
        if not check.holds:
            report.failures.append(f"schedule at xi1={xi1} gives max rho_w {float(check.max_rho_w):.4f} <= rho_w")

    report.aggregates = {"schedules": schedules}
    if P is not None:
        rate = awtp_information_rate(P)
        if rate != P.R:
            report.failures.append(f"information rate {rate} differs from R={P.R}")
        report.aggregates.update(
            {
                "information_rate": str(rate),
                "max_rho_w": str(awtp_rate_condition(P.u, P.v, P.R, P.rho_r)) if P.u > P.v else None,
                "agreement_threshold": str(frs_agreement_threshold(P.frs)),
                "failure_bound": str(awtp_failure_bound(P)),
                "failure_bound_float": float(awtp_failure_bound(P)),
                "alphabet_size": str(alphabet_size(P)),
            }
        )
    return report


def cmd_reliability(config: ExperimentConfig, settings: Settings) -> ExperimentReport:
    """FRS list decoding: above the agreement threshold the sent polynomial must be in the output space."""
    P = config.params.resolve(strict=settings.strict_rate)
    frs = P.frs
    threshold = frs_agreement_threshold(frs)
    writes = config.reliability.errors if config.reliability.errors is not None else P.writes_max
    budget = ChannelBudget(P.reads_max, writes, P.N)
    report = _report(config, P)

    def trial(index: int, rng: np.random.Generator) -> TrialOutcome:
        spec = config.strategy_for(index)
        f = P.F.random(frs.k, rng)
        codeword = frs_encode(f, frs)
        try:
            received, _ = channel_run(codeword, spec.build(), budget, rng)
        except ChannelError as exc:
            return TrialOutcome(index=index, outcome="fault", strategy=spec.name, detail=str(exc))
        try:
            space = frs_list_decode(received, frs)
        except AwtpError as exc:
            space = None
            logger.warning("list decoding failed on trial %d: %s", index, exc)
        agreement = frs_agreement(codeword, received)
        contained = space is not None and space.contains(f)
        dim = space.dim if space is not None else None
        extra = {"agreement": agreement, "dim": dim, "contained": contained}
        if agreement <= threshold:
            return TrialOutcome(index=index, outcome="skipped", strategy=spec.name, detail="below threshold", extra=extra)
        good = contained and dim is not None and dim <= frs.v - 1
        return TrialOutcome(index=index, outcome="pass" if good else "fail", strategy=spec.name, extra=extra)

    report.outcomes = _run_trials(trial, config, config.workers or settings.workers)
    failed = sum(o.outcome == "fail" for o in report.outcomes)
    if failed:
        report.failures.append(f"{failed} trials above the threshold lost the sent polynomial")
    report.aggregates = {
        "agreement_threshold": str(threshold),
        "checked": sum(o.outcome in ("pass", "fail") for o in report.outcomes),
        "max_dim": max((o.extra["dim"] for o in report.outcomes if o.extra.get("dim") is not None), default=0),
    }
    return report


MODES: dict[str, Callable[[ExperimentConfig, Settings], ExperimentReport]] = {
    "roundtrip": cmd_roundtrip,
    "secrecy": cmd_secrecy_exact,
    "amd": cmd_amd_exhaustive,
    "ses": cmd_ses_check,
    "bounds": cmd_bounds,
    "reliability": cmd_reliability,
}


def run_experiment(config: ExperimentConfig, settings: Optional[Settings] = None) -> ExperimentReport:
    settings = settings or Settings()
    logger.info("experiment %s: %d trials, seed %d", config.mode, config.trials, config.seed)
    started = time.perf_counter()
    report = MODES[config.mode](config, settings)
    report.wall_clock = time.perf_counter() - started
    report.tally()
    logger.info(
        "experiment %s finished in %.2fs: %s",
        config.mode,
        report.wall_clock,
        "passed" if report.passed else f"{len(report.failures)} failed checks",
    )
    return report
