"""Scripted headless clients: the end-to-end driver and determinism tool."""

from .client import BotClient, LatencyProfile
from .mirror import ClientMirror
from .policy import BATCH_PREPARE, CANONICAL, BotScript, FetcherBot, InstallerBot, build_plan
from .runner import Transcript, configs_from_header, replay, run_pair_async, run_pair_local, run_pair_local_async

__all__ = [
    "BATCH_PREPARE",
    "BotClient",
    "BotScript",
    "CANONICAL",
    "ClientMirror",
    "FetcherBot",
    "InstallerBot",
    "LatencyProfile",
    "Transcript",
    "build_plan",
    "configs_from_header",
    "replay",
    "run_pair_async",
    "run_pair_local",
    "run_pair_local_async",
]
