"""Out-of-band cues sent alongside state deltas: warnings and haptics."""

from __future__ import annotations

from dataclasses import dataclass

WARNING = "warning"
HAPTIC = "haptic"


@dataclass(frozen=True)
class Signal:
    kind: str
    value: str
    to_role: str | None = None  # None broadcasts to both participants

    def to_wire(self) -> dict:
        return {"signal": self.kind, "value": self.value}


def warning_signal(text: str) -> Signal:
    return Signal(kind=WARNING, value=text)


def haptic_signal(value: str, role: str) -> Signal:
    return Signal(kind=HAPTIC, value=value, to_role=role)
