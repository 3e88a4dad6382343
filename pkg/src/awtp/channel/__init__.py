from .adversary import (
    Action,
    AdversaryStrategy,
    ChannelBudget,
    ChannelTranscript,
    Done,
    Read,
    TranscriptEntry,
    View,
    Write,
    channel_run,
    transcript_view,
)
from .strategies import STRATEGIES, build_strategy

__all__ = [
    "Action",
    "AdversaryStrategy",
    "ChannelBudget",
    "ChannelTranscript",
    "Done",
    "Read",
    "STRATEGIES",
    "TranscriptEntry",
    "View",
    "Write",
    "build_strategy",
    "channel_run",
    "transcript_view",
]
