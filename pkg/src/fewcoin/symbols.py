"""Reserved symbols and head movement modes shared across the toolkit.

All symbols are plain strings so that the in-memory spelling matches the
file formats exactly (no translation layer).
"""

from __future__ import annotations

import enum

# End-marker flanking every input tape.  Both ends use the same symbol;
# machines distinguish the two ends by position, not by content.
ENDMARKER = "CENT"

# The null communication symbol: a state carrying it does not communicate.
NULL_SYM = "NULL"

# Response delivered when a one-way certificate has been exhausted.
PAD_SYM = "PAD"

# Multi-track certificate marks: early halt / communication-free loop.
HALT_MARK = "O"
LOOP_MARK = "INF"

# Canonical request symbol sent by generated verifiers when they want the
# next certificate symbol (the sent side of a communication step).
REQUEST_SYM = "REQ"

RESERVED_SYMBOLS = frozenset({ENDMARKER, NULL_SYM, PAD_SYM, HALT_MARK, LOOP_MARK})


class HeadMode(enum.Enum):
    """Movement discipline of a tape head."""

    TWO_WAY = "two-way"
    ONE_WAY = "one-way"
    REAL_TIME = "real-time"

    @property
    def moves(self) -> frozenset:
        return _ALLOWED_MOVES[self]

    def allows(self, move: int) -> bool:
        return move in _ALLOWED_MOVES[self]


_ALLOWED_MOVES = {
    HeadMode.TWO_WAY: frozenset({-1, 0, 1}),
    HeadMode.ONE_WAY: frozenset({0, 1}),
    HeadMode.REAL_TIME: frozenset({1}),
}
