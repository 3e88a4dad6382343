"""Tests for the budgeted adversary channel."""

import numpy as np
import pytest

from awtp.channel import (
    AdversaryStrategy,
    ChannelBudget,
    ChannelTranscript,
    Done,
    Read,
    Write,
    channel_run,
    transcript_view,
)
from awtp.codes.field import as_ints, prime_field
from awtp.errors import BudgetViolation, ChannelError, DuplicateWrite, ParamError, ZeroDelta


class Scripted(AdversaryStrategy):
    """Plays a fixed list of actions, then stops."""

    name = "scripted"

    def __init__(self, actions):
        self.actions = list(actions)

    def reset(self, budget, q, u, rng):
        super().reset(budget, q, u, rng)
        self.queue = list(self.actions)
        self.views = []

    def act(self, view):
        self.views.append(view)
        return self.queue.pop(0) if self.queue else Done()


class Stubborn(AdversaryStrategy):
    name = "stubborn"

    def act(self, view):
        return Read(pos=0)


@pytest.fixture
def codeword():
    F = prime_field(13)
    return F(np.arange(12).reshape(4, 3))


@pytest.fixture
def budget():
    return ChannelBudget(reads_max=2, writes_max=2, N=4)


class TestBudget:
    def test_bounds(self):
        with pytest.raises(ParamError):
            ChannelBudget(reads_max=5, writes_max=0, N=4)
        with pytest.raises(ParamError):
            ChannelBudget(reads_max=0, writes_max=-1, N=4)

    def test_for_params(self, desk_params):
        budget = ChannelBudget.for_params(desk_params)
        assert (budget.reads_max, budget.writes_max, budget.N) == (1, 4, 8)


class TestChannelRun:
    def test_noop_leaves_codeword_intact(self, codeword, budget, rng):
        y, transcript = channel_run(codeword, Scripted([]), budget, rng)
        assert np.array_equal(as_ints(y), as_ints(codeword))
        assert transcript.S_r == [] and transcript.S_w == []
        assert transcript.fault is None

    def test_reads_and_writes(self, codeword, budget, rng):
        strategy = Scripted([Read(pos=1), Write(pos=2, delta=[1, 0, 12])])
        y, transcript = channel_run(codeword, strategy, budget, rng)
        assert transcript.S_r == [1]
        assert transcript.S_w == [2]
        assert as_ints(y[2]).tolist() == [7, 7, 7]
        assert np.array_equal((as_ints(codeword) + np.array(transcript.e)) % 13, as_ints(y))

    @pytest.mark.property
    def test_only_written_symbols_change(self, codeword, budget):
        rng = np.random.default_rng(2024)
        sent = as_ints(codeword)
        for _ in range(10_000):
            reads = rng.choice(4, size=rng.integers(0, 3), replace=False)
            writes = rng.choice(4, size=rng.integers(0, 3), replace=False)
            actions = [Read(pos=int(p)) for p in reads]
            for p in writes:
                delta = rng.integers(0, 13, size=3)
                delta[rng.integers(0, 3)] = rng.integers(1, 13)
                actions.append(Write(pos=int(p), delta=delta.tolist()))
            order = rng.permutation(len(actions))
            y, transcript = channel_run(codeword, Scripted([actions[i] for i in order]), budget, rng)
            changed = np.flatnonzero(np.any(as_ints(y) != sent, axis=1))
            assert set(changed.tolist()) == set(transcript.S_w) == set(writes.tolist())
            assert np.array_equal((sent + np.array(transcript.e)) % 13, as_ints(y))

    def test_view_holds_the_sent_symbols(self, codeword, budget, rng):
        strategy = Scripted([Write(pos=0, delta=[1, 1, 1]), Read(pos=0)])
        channel_run(codeword, strategy, budget, rng)
        assert strategy.views[-1] == ((0, (0, 1, 2)),)

    def test_rereads_are_free(self, codeword, budget, rng):
        strategy = Scripted([Read(pos=3), Read(pos=3), Read(pos=3), Read(pos=1)])
        _, transcript = channel_run(codeword, strategy, budget, rng)
        assert transcript.S_r == [3, 1]
        assert len(transcript_view(transcript)) == 4

    def test_read_budget(self, codeword, budget, rng):
        strategy = Scripted([Read(pos=0), Read(pos=1), Read(pos=2)])
        with pytest.raises(BudgetViolation) as info:
            channel_run(codeword, strategy, budget, rng)
        assert info.value.transcript.fault.startswith("BudgetViolation")

    def test_write_budget(self, codeword, budget, rng):
        writes = [Write(pos=p, delta=[1, 0, 0]) for p in range(3)]
        with pytest.raises(BudgetViolation):
            channel_run(codeword, Scripted(writes), budget, rng)

    def test_zero_delta(self, codeword, budget, rng):
        with pytest.raises(ZeroDelta):
            channel_run(codeword, Scripted([Write(pos=0, delta=[0, 13, 26])]), budget, rng)

    def test_duplicate_write(self, codeword, budget, rng):
        writes = [Write(pos=1, delta=[1, 0, 0]), Write(pos=1, delta=[2, 0, 0])]
        with pytest.raises(DuplicateWrite):
            channel_run(codeword, Scripted(writes), budget, rng)

    def test_position_out_of_range(self, codeword, budget, rng):
        with pytest.raises(ChannelError):
            channel_run(codeword, Scripted([Read(pos=4)]), budget, rng)

    def test_delta_length(self, codeword, budget, rng):
        with pytest.raises(ChannelError):
            channel_run(codeword, Scripted([Write(pos=0, delta=[1, 2])]), budget, rng)

    def test_strategy_must_finish(self, codeword, budget, rng):
        with pytest.raises(BudgetViolation):
            channel_run(codeword, Stubborn(), budget, rng, max_actions=20)

    def test_budget_must_match_length(self, codeword, rng):
        with pytest.raises(ParamError):
            channel_run(codeword, Scripted([]), ChannelBudget(1, 1, 5), rng)


class TestTranscript:
    def test_round_trips_through_json(self, codeword, budget, rng):
        strategy = Scripted([Read(pos=1), Write(pos=3, delta=[0, 5, 0])])
        _, transcript = channel_run(codeword, strategy, budget, rng)
        restored = ChannelTranscript.model_validate_json(transcript.model_dump_json())
        assert restored == transcript
        assert [entry.kind for entry in restored.entries] == ["read", "write"]
        assert restored.entries[0].symbol == [3, 4, 5]
        assert restored.entries[1].delta == [0, 5, 0]
