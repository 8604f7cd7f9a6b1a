"""Shared sink for acceptance verdict lines, flushed by conftest."""

lines = []


def record(line: str):
    lines.append(line)
