"""Soundness counters: every emitted coboundary/descent passes verification
first, and the counts can be audited after a run."""

from __future__ import annotations

COUNTERS = {
    "coboundary_emitted": 0,
    "coboundary_verified": 0,
    "descent_emitted": 0,
    "descent_verified": 0,
}


def bump(key: str):
    COUNTERS[key] += 1


def snapshot() -> dict:
    return dict(COUNTERS)


def reset():
    for k in COUNTERS:
        COUNTERS[k] = 0


def consistent() -> bool:
    return (COUNTERS["coboundary_emitted"] == COUNTERS["coboundary_verified"]
            and COUNTERS["descent_emitted"] == COUNTERS["descent_verified"])
