# =========================
# FILE: burnkit/console.py
# =========================
"""
Console output coordination.

Solvers report progress and warnings from worker threads while the CLI is in
the middle of timing a probe. Printing inside a timed section skews the
reported time (a terminal write can cost more than a whole Gr run on a small
graph), and interleaved lines from the GrP pool garble CSV output.

So while a timed section is open, background chatter is held back: progress
messages are dropped and warnings are deferred until the section closes.
"""

import sys
import threading
from contextlib import contextmanager
from typing import Iterator, List, TextIO


class Console:
    """Serializes output so timing and CSV rows stay clean."""

    MAX_PENDING = 32

    def __init__(self) -> None:
        self._lock = threading.RLock()
        self._timed_depth = 0
        self._pending: List[str] = []
        self._dropped = 0
        self.quiet = False

    # -- timed sections ---------------------------------------------------
    def begin_timed(self) -> None:
        with self._lock:
            self._timed_depth += 1

    def end_timed(self) -> None:
        """Leave the section and release anything held back."""
        with self._lock:
            self._timed_depth = max(0, self._timed_depth - 1)
            if self._timed_depth:
                return
            pending, self._pending = self._pending, []
            self._dropped = 0
        for line in pending:
            self._write(line, sys.stderr)

    @contextmanager
    def timed(self) -> Iterator[None]:
        self.begin_timed()
        try:
            yield
        finally:
            self.end_timed()

    # -- output -----------------------------------------------------------
    def status(self, message: str) -> None:
        """Progress chatter, dropped outright when quiet or while timing."""
        with self._lock:
            if self.quiet or self._timed_depth:
                self._dropped += 1
                return
        self._write(message, sys.stderr)

    def notice(self, message: str) -> None:
        """Worth seeing, deferred rather than dropped while timing."""
        with self._lock:
            if self._timed_depth:
                if (message not in self._pending
                        and len(self._pending) < self.MAX_PENDING):
                    self._pending.append(message)
                return
        self._write(message, sys.stderr)

    def result(self, message: str) -> None:
        """Primary output (reports, CSV rows). Never suppressed."""
        with self._lock:
            self._write(message, sys.stdout)

    @property
    def dropped(self) -> int:
        return self._dropped

    @staticmethod
    def _write(message: str, stream: TextIO) -> None:
        try:
            print(message, file=stream, flush=True)
        except UnicodeEncodeError:
            # Non-UTF-8 consoles choke on the emoji.
            print(message.encode("ascii", "replace").decode("ascii"), file=stream, flush=True)


CONSOLE = Console()
