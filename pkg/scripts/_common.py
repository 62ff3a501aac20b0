"""Shared helpers for the experiment scripts."""

from __future__ import annotations

import csv
import sys
from contextlib import contextmanager


@contextmanager
def csv_writer(path: str | None, header):
    fh = open(path, "w", newline="") if path and path != "-" else sys.stdout
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        yield w
        fh.flush()
    finally:
        if fh is not sys.stdout:
            fh.close()


def levels(text: str) -> list[int]:
    return [int(v) for v in text.split(",") if v.strip()]
