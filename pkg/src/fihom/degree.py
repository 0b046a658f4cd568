"""Degree values with certification flags.

``-inf`` is represented by ``math.-inf`` so that ``max``, ``+`` and ``<=``
behave as on the extended integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import inf, isinf

NEG_INF = -inf


@dataclass(frozen=True)
class DegreeValue:
    value: float | int
    certified: bool = True

    def __post_init__(self):
        if not isinf(self.value):
            object.__setattr__(self, "value", int(self.value))

    @property
    def is_neg_inf(self):
        return self.value == NEG_INF

    def to_json(self):
        return {"value": encode(self.value), "certified": self.certified}

    def __str__(self):
        return str(encode(self.value)) + ("" if self.certified else "?")


def encode(x):
    if x == NEG_INF:
        return "-inf"
    return int(x)


def decode(x):
    if x == "-inf":
        return NEG_INF
    return int(x)


def top_degree(dims):
    """Largest index with a nonzero entry, or -inf."""
    for n in range(len(dims) - 1, -1, -1):
        if dims[n]:
            return n
    return NEG_INF


def leq(a, b):
    """``a <= b`` on the extended integers (``-inf`` below everything)."""
    return a <= b
