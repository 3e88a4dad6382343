"""Budgeted read/write channel driven by an adaptive adversary."""

from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import ClassVar, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, Field

from ..codes.field import FieldArray, as_ints
from ..errors import BudgetViolation, ChannelError, DuplicateWrite, ParamError, ZeroDelta

logger = logging.getLogger(__name__)

Symbol = tuple[int, ...]
View = tuple[tuple[int, Symbol], ...]


@dataclass(frozen=True)
class ChannelBudget:
    reads_max: int
    writes_max: int
    N: int

    def __post_init__(self) -> None:
        for name in ("reads_max", "writes_max"):
            value = getattr(self, name)
            if not 0 <= value <= self.N:
                raise ParamError(f"{name}={value} must lie in [0, N={self.N}]")

    @classmethod
    def for_params(cls, P) -> "ChannelBudget":
        """Budget of an AwtpParams set: ρ_r N reads and ρ_w N writes."""
        return cls(P.reads_max, P.writes_max, P.N)


class Read(BaseModel):
    kind: Literal["read"] = "read"
    pos: int


class Write(BaseModel):
    kind: Literal["write"] = "write"
    pos: int
    delta: list[int]


class Done(BaseModel):
    kind: Literal["done"] = "done"


Action = Union[Read, Write, Done]


class TranscriptEntry(BaseModel):
    kind: Literal["read", "write"]
    pos: int
    symbol: Optional[list[int]] = None
    delta: Optional[list[int]] = None


class ChannelTranscript(BaseModel):
    """Ordered log of one channel run."""

    N: int
    u: int
    reads_max: int
    writes_max: int
    entries: list[TranscriptEntry] = Field(default_factory=list)
    S_r: list[int] = Field(default_factory=list)
    S_w: list[int] = Field(default_factory=list)
    e: list[list[int]] = Field(default_factory=list)
    fault: Optional[str] = None


class AdversaryStrategy(ABC):
    """An adaptive adversary.

    ``act`` sees only the symbols read so far; any randomness comes from the
    generator handed to ``reset``.
    """

    name: ClassVar[str] = "abstract"

    def reset(self, budget: ChannelBudget, q: int, u: int, rng: np.random.Generator) -> None:
        self.budget = budget
        self.q = q
        self.u = u
        self.rng = rng

    @abstractmethod
    def act(self, view: View) -> Action:
        ...

    def random_delta(self) -> list[int]:
        delta = self.rng.integers(0, self.q, size=self.u)
        if not delta.any():
            delta[self.rng.integers(0, self.u)] = self.rng.integers(1, self.q)
        return [int(x) for x in delta]


def transcript_view(transcript: ChannelTranscript) -> View:
    """(position, symbol) pairs in the order they were read."""
    return tuple((entry.pos, tuple(entry.symbol or ())) for entry in transcript.entries if entry.kind == "read")


def _fail(kind: type[ChannelError], message: str, transcript: ChannelTranscript) -> None:
    transcript.fault = f"{kind.__name__}: {message}"
    logger.debug("channel fault: %s", transcript.fault)
    raise kind(message, transcript)


def channel_run(
    c: FieldArray,
    strategy: AdversaryStrategy,
    budget: ChannelBudget,
    rng: np.random.Generator,
    max_actions: Optional[int] = None,
) -> tuple[FieldArray, ChannelTranscript]:
    """Let ``strategy`` read and corrupt codeword ``c`` (shape (N, u)); return y = c + e.

    Reads observe the transmitted symbol c_i. Re-reading a position is free; each
    position may be written once with a nonzero delta.
    """
    GF = type(c)
    q = GF.order
    sent = as_ints(c)
    N, u = sent.shape
    if N != budget.N:
        raise ParamError(f"codeword has {N} symbols but the budget is for N={budget.N}")

    transcript = ChannelTranscript(N=N, u=u, reads_max=budget.reads_max, writes_max=budget.writes_max)
    e = np.zeros((N, u), dtype=np.int64)
    view: list[tuple[int, Symbol]] = []
    limit = max_actions if max_actions is not None else 4 * N + 16

    strategy.reset(budget, q, u, rng)
    for _ in range(limit):
        action = strategy.act(tuple(view))
        if isinstance(action, Done):
            break
        if not 0 <= action.pos < N:
            _fail(ChannelError, f"position {action.pos} outside [0, {N})", transcript)
        if isinstance(action, Read):
            if action.pos not in transcript.S_r:
                if len(transcript.S_r) >= budget.reads_max:
                    _fail(BudgetViolation, f"read of position {action.pos} exceeds {budget.reads_max} reads", transcript)
                transcript.S_r.append(action.pos)
            symbol = tuple(int(x) for x in sent[action.pos])
            view.append((action.pos, symbol))
            transcript.entries.append(TranscriptEntry(kind="read", pos=action.pos, symbol=list(symbol)))
        else:
            delta = np.mod(np.asarray(action.delta, dtype=np.int64), q)
            if delta.shape != (u,):
                _fail(ChannelError, f"delta has {delta.size} entries, expected {u}", transcript)
            if not delta.any():
                _fail(ZeroDelta, f"zero delta written to position {action.pos}", transcript)
            if action.pos in transcript.S_w:
                _fail(DuplicateWrite, f"position {action.pos} written twice", transcript)
            if len(transcript.S_w) >= budget.writes_max:
                _fail(BudgetViolation, f"write to position {action.pos} exceeds {budget.writes_max} writes", transcript)
            transcript.S_w.append(action.pos)
            e[action.pos] = delta
            transcript.entries.append(TranscriptEntry(kind="write", pos=action.pos, delta=delta.tolist()))
    else:
        _fail(BudgetViolation, f"strategy did not finish within {limit} actions", transcript)

    transcript.e = e.tolist()
    return GF((sent + e) % q), transcript
