from __future__ import annotations

import struct
from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("ci", max_examples=60, deadline=None)
settings.load_profile("ci")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def riff_bytes(fmt_tag: int, channels: int, sample_rate: int, bits: int, data: bytes) -> bytes:
    """Minimal RIFF/WAVE container around raw frame bytes."""
    block = channels * bits // 8
    fmt = struct.pack("<HHIIHH", fmt_tag, channels, sample_rate, sample_rate * block, block, bits)
    body = b"WAVE" + b"fmt " + struct.pack("<I", len(fmt)) + fmt
    body += b"data" + struct.pack("<I", len(data)) + data
    if len(data) % 2:
        body += b"\x00"
    return b"RIFF" + struct.pack("<I", len(body)) + body


@pytest.fixture
def wav_factory(tmp_path: Path):
    def make(name: str, fmt_tag: int, channels: int, sample_rate: int, bits: int, data: bytes) -> Path:
        path = tmp_path / name
        path.write_bytes(riff_bytes(fmt_tag, channels, sample_rate, bits, data))
        return path

    return make


class _Criterion:
    def __init__(self, lines: list, number: int, title: str):
        self.lines, self.number, self.title = lines, number, title
        self.detail = ""

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        status = "PASS" if exc_type is None else "FAIL"
        detail = self.detail if exc is None else (str(exc).splitlines() or [exc_type.__name__])[0]
        line = f"criterion {self.number} [{self.title}]: {status}" + (f" - {detail}" if detail else "")
        self.lines.append(line)
        print(line)
        return False


@pytest.fixture
def criterion(request):
    """Context manager that records one pass/fail line per acceptance criterion."""
    lines = request.config.stash.setdefault(_CRITERIA_KEY, [])

    def make(number: int, title: str) -> _Criterion:
        return _Criterion(lines, number, title)

    return make


_CRITERIA_KEY = pytest.StashKey[list]()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_CRITERIA_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
