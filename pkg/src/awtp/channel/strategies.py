"""Built-in adversary strategies."""

from __future__ import annotations

from typing import Any, Callable, Optional, Union

from ..errors import ConfigError
from .adversary import Action, AdversaryStrategy, ChannelBudget, Done, Read, View, Write

DeltaRule = Callable[[View, int, int, int], list[int]]


class _Planned(AdversaryStrategy):
    """Runs a fixed list of reads, then a list of writes whose deltas may depend on the reads."""

    def reset(self, budget: ChannelBudget, q: int, u: int, rng) -> None:
        super().reset(budget, q, u, rng)
        self.reads, self.writes = self.plan()
        self.step = 0

    def plan(self) -> tuple[list[int], list[int]]:
        raise NotImplementedError

    def delta(self, view: View, pos: int) -> Optional[list[int]]:
        return self.random_delta()

    def act(self, view: View) -> Action:
        while self.step < len(self.reads) + len(self.writes):
            index = self.step
            self.step += 1
            if index < len(self.reads):
                return Read(pos=self.reads[index])
            pos = self.writes[index - len(self.reads)]
            delta = self.delta(view, pos)
            if delta is not None:
                return Write(pos=pos, delta=delta)
        return Done()


class NoopStrategy(AdversaryStrategy):
    name = "noop"

    def act(self, view: View) -> Action:
        return Done()


class RandomStrategy(_Planned):
    """Reads and writes uniformly random positions, using the whole budget by default."""

    name = "random"

    def __init__(self, reads: Optional[int] = None, writes: Optional[int] = None):
        self.read_count = reads
        self.write_count = writes

    def plan(self) -> tuple[list[int], list[int]]:
        N = self.budget.N
        reads = self.budget.reads_max if self.read_count is None else self.read_count
        writes = self.budget.writes_max if self.write_count is None else self.write_count
        for label, count in (("reads", reads), ("writes", writes)):
            if not 0 <= count <= N:
                raise ConfigError(f"random strategy asked for {count} {label} on N={N} positions")
        return (
            [int(p) for p in self.rng.choice(N, size=reads, replace=False)],
            [int(p) for p in self.rng.choice(N, size=writes, replace=False)],
        )


class BurstStrategy(_Planned):
    """Reads and then corrupts a contiguous (cyclic) window starting at ``start``."""

    name = "burst"

    def __init__(self, start: int = 0):
        self.start = start

    def plan(self) -> tuple[list[int], list[int]]:
        N = self.budget.N
        reads = [(self.start + i) % N for i in range(self.budget.reads_max)]
        writes = [(self.start + i) % N for i in range(self.budget.writes_max)]
        return reads, writes


def offset_rule(view: View, pos: int, q: int, u: int) -> list[int]:
    """delta_t = (first read symbol)_t + pos + t + 1; the unit vector if that vanishes."""
    if not view:
        return [1] + [0] * (u - 1)
    symbol = view[0][1]
    delta = [(symbol[t] + pos + t + 1) % q for t in range(u)]
    return delta if any(delta) else [1] + [0] * (u - 1)


def sum_rule(view: View, pos: int, q: int, u: int) -> list[int]:
    """Every coordinate is the sum of everything read so far, plus the position."""
    total = sum(sum(symbol) for _, symbol in view) + pos
    value = total % q or 1
    return [value] * u


RULES: dict[str, DeltaRule] = {"offset": offset_rule, "sum": sum_rule}


class InformedStrategy(_Planned):
    """Reads first, then writes deltas computed deterministically from what it read."""

    name = "informed"

    def __init__(self, rule: Union[str, DeltaRule] = "offset", start: int = 0):
        if isinstance(rule, str):
            if rule not in RULES:
                raise ConfigError(f"unknown delta rule {rule!r}; choose from {sorted(RULES)}")
            rule = RULES[rule]
        self.rule = rule
        self.start = start

    def plan(self) -> tuple[list[int], list[int]]:
        N = self.budget.N
        reads = [(self.start + i) % N for i in range(self.budget.reads_max)]
        writes = [(self.start + N - 1 - i) % N for i in range(self.budget.writes_max)]
        return reads, writes

    def delta(self, view: View, pos: int) -> Optional[list[int]]:
        return self.rule(view, pos, self.q, self.u)


class ReplaceStrategy(_Planned):
    """Overwrites symbols with chosen targets: read c_i, then add target - c_i."""

    name = "replace"

    def __init__(self, targets: dict[int, list[int]]):
        self.targets = {int(pos): [int(x) for x in value] for pos, value in targets.items()}

    def plan(self) -> tuple[list[int], list[int]]:
        positions = sorted(self.targets)
        return positions, positions

    def delta(self, view: View, pos: int) -> Optional[list[int]]:
        current = dict(view)[pos]
        delta = [(t - c) % self.q for t, c in zip(self.targets[pos], current)]
        return delta if any(delta) else None


class GreedyStrategy(_Planned):
    """Tries to read every position, so it breaks the read budget whenever reads_max < N."""

    name = "greedy"

    def plan(self) -> tuple[list[int], list[int]]:
        return list(range(self.budget.N)), []


STRATEGIES: dict[str, type[AdversaryStrategy]] = {
    cls.name: cls
    for cls in (NoopStrategy, RandomStrategy, BurstStrategy, InformedStrategy, ReplaceStrategy, GreedyStrategy)
}


def build_strategy(name: str, **args: Any) -> AdversaryStrategy:
    if name not in STRATEGIES:
        raise ConfigError(f"unknown strategy {name!r}; choose from {sorted(STRATEGIES)}")
    try:
        return STRATEGIES[name](**args)
    except TypeError as exc:
        raise ConfigError(f"bad arguments for strategy {name!r}: {exc}") from exc
