# =========================
# FILE: burnkit/schema.py
# =========================
"""
Types shared across the solver modules.

Module-specific records (Graph, Selection, SolveReport, ...) live next to the
code that builds them; what sits here is what more than one module passes
around: the sequence itself, the tie-break policy and the literal tags.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Hashable, Iterator, List, Literal, Optional, Sequence, Tuple

import numpy as np

Strategy = Literal["BFF", "Gr", "GrP"]

ModelKind = Literal["PROP", "CMCP", "COV"]

TiePolicy = Literal["smallest", "seeded", "adversarial"]


@dataclass(frozen=True)
class BurningSequence:
    """Ordered vertices (u1, ..., up); position i burns with radius p - i."""

    vertices: Tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertices", tuple(int(v) for v in self.vertices))

    def __len__(self) -> int:
        return len(self.vertices)

    def __iter__(self) -> Iterator[int]:
        return iter(self.vertices)

    def __getitem__(self, i: int) -> int:
        return self.vertices[i]

    @property
    def length(self) -> int:
        return len(self.vertices)

    def radii(self) -> List[int]:
        p = len(self.vertices)
        return [p - i for i in range(1, p + 1)]

    def is_distinct(self) -> bool:
        return len(set(self.vertices)) == len(self.vertices)

    def prepend(self, v: int) -> "BurningSequence":
        return BurningSequence((v,) + self.vertices)

    def format(self, labels: Optional[Sequence[int]] = None) -> str:
        if labels is None:
            return ",".join(str(v) for v in self.vertices)
        return ",".join(str(labels[v]) for v in self.vertices)


@dataclass(frozen=True)
class TieBreak:
    """
    How equal-coverage candidates are resolved.

    smallest     first candidate in natural order (cluster, then subset/vertex)
    seeded       uniform among the tied candidates, reproducible from `seed`
    adversarial  earliest candidate in `order`; unlisted ones rank after,
                 in natural order
    """

    policy: TiePolicy = "smallest"
    seed: int = 0
    order: Tuple[Hashable, ...] = ()

    @classmethod
    def smallest(cls) -> "TieBreak":
        return cls("smallest")

    @classmethod
    def seeded(cls, seed: int) -> "TieBreak":
        return cls("seeded", seed=int(seed))

    @classmethod
    def adversarial(cls, order: Sequence[Hashable]) -> "TieBreak":
        return cls("adversarial", order=tuple(order))

    @classmethod
    def parse(cls, text: str) -> "TieBreak":
        """`smallest` or `seed:N` (the CLI grammar)."""
        t = (text or "").strip().lower()
        if t in ("", "smallest"):
            return cls.smallest()
        if t.startswith("seed:"):
            try:
                return cls.seeded(int(t.split(":", 1)[1]))
            except ValueError:
                pass
        raise ValueError(f"Unknown tie policy: {text!r} (expected 'smallest' or 'seed:N')")

    def picker(self, salt: int = 0) -> "TiePicker":
        """A fresh picker. Same policy + same salt always picks the same way."""
        return TiePicker(self, salt)

    def describe(self) -> str:
        if self.policy == "seeded":
            return f"seed:{self.seed}"
        if self.policy == "adversarial":
            return f"adversarial({len(self.order)})"
        return "smallest"


@dataclass
class TiePicker:
    """Stateful side of a TieBreak for one solver run."""

    tie: TieBreak
    salt: int = 0
    _rng: Any = field(default=None, init=False, repr=False)
    _rank: dict = field(default_factory=dict, init=False, repr=False)

    def __post_init__(self) -> None:
        if self.tie.policy == "seeded":
            self._rng = np.random.default_rng([self.tie.seed, self.salt])
        elif self.tie.policy == "adversarial":
            self._rank = {key: i for i, key in enumerate(self.tie.order)}

    def pick(self, candidates: Sequence[Hashable]) -> Hashable:
        """Choose one of `candidates`, which arrive in natural order."""
        if not candidates:
            raise ValueError("No candidates to break a tie between")
        if len(candidates) == 1 or self.tie.policy == "smallest":
            return candidates[0]
        if self.tie.policy == "seeded":
            return candidates[int(self._rng.integers(len(candidates)))]
        unlisted = len(self._rank)
        best = min(
            range(len(candidates)),
            key=lambda i: (self._rank.get(_plain(candidates[i]), unlisted), i),
        )
        return candidates[best]


def _plain(key: Hashable) -> Hashable:
    # numpy scalars and tuples of them must match plain-int keys in `order`
    if isinstance(key, tuple):
        return tuple(int(k) for k in key)
    if isinstance(key, np.integer):
        return int(key)
    return key
