"""Monotone right-continuous step functions on the real line.

These are the two curve shapes the risk measures are parameterized by: an
increasing benchmark curve on [0, 1] that diverges at 1, and a decreasing
probability level curve with values in [0, 1].  Both are stored the same
way, as a finite list of jump points plus one value per piece, with the
value at a jump taken from the piece starting there (right-continuous).
For an increasing step that stored value is also the upper one-sided limit
at the jump, which is the evaluation convention the supremum formulas need.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass

INC = "inc"
DEC = "dec"


@dataclass(frozen=True)
class MonotoneStep:
    """Piecewise-constant monotone function.

    ``values`` has one entry more than ``breakpoints``: ``values[0]`` holds
    on ``(-inf, breakpoints[0])``, ``values[i]`` on
    ``[breakpoints[i-1], breakpoints[i])`` and ``values[-1]`` on
    ``[breakpoints[-1], inf)``.  ``at_one`` overrides the value at
    arguments >= 1.0; benchmark curves use it to pin the value at level 1
    (typically ``inf``) without carrying a breakpoint there.
    """

    breakpoints: tuple[float, ...]
    values: tuple[float, ...]
    direction: str = INC
    at_one: float | None = None

    def __post_init__(self):
        if self.direction not in (INC, DEC):
            raise ValueError(f"direction must be {INC!r} or {DEC!r}, got {self.direction!r}")
        bps = tuple(float(b) for b in self.breakpoints)
        vals = tuple(float(v) for v in self.values)
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "values", vals)
        if len(vals) != len(bps) + 1:
            raise ValueError("need exactly one value per piece (len(values) == len(breakpoints) + 1)")
        for b in bps:
            if not math.isfinite(b):
                raise ValueError(f"breakpoints must be finite, got {b}")
        if any(bps[i] >= bps[i + 1] for i in range(len(bps) - 1)):
            raise ValueError("breakpoints must be strictly increasing")
        for v in vals:
            if math.isnan(v):
                raise ValueError("step values must not be NaN")
        if self.direction == INC:
            ok = all(vals[i] <= vals[i + 1] for i in range(len(vals) - 1))
        else:
            ok = all(vals[i] >= vals[i + 1] for i in range(len(vals) - 1))
        if not ok:
            raise ValueError(f"values are not monotone for direction {self.direction!r}")
        if self.at_one is not None:
            a1 = float(self.at_one)
            if math.isnan(a1):
                raise ValueError("at_one must not be NaN")
            if self.direction == INC and a1 < vals[-1]:
                raise ValueError("at_one below the last piece breaks monotonicity")
            if self.direction == DEC and a1 > vals[-1]:
                raise ValueError("at_one above the last piece breaks monotonicity")
            object.__setattr__(self, "at_one", a1)

    @classmethod
    def constant(cls, value: float, direction: str = INC, at_one: float | None = None) -> "MonotoneStep":
        return cls((), (value,), direction, at_one)

    def __call__(self, t: float) -> float:
        if self.at_one is not None and t >= 1.0:
            return self.at_one
        return self.values[bisect_right(self.breakpoints, t)]

    def level_crossing(self, p: float) -> float:
        """Where a decreasing step crosses below level ``p``.

        Returns ``sup{t: f(t) > p}``, which for a right-continuous
        decreasing step equals ``inf{t: f(t) <= p}``.  ``-inf`` when the
        whole function sits at or below ``p``, ``inf`` when it never does.
        """
        if self.direction != DEC:
            raise ValueError("level_crossing is defined for decreasing steps")
        above = 0
        while above < len(self.values) and self.values[above] > p:
            above += 1
        if above == 0:
            return -math.inf
        if above == len(self.values):
            return math.inf
        return self.breakpoints[above - 1]
