"""The weight domain for the policy-generation pushdown system.

A weight is a finite set of *path digests*.  One digest summarizes a set of
execution paths that agree on four facts:

* ``gen``      methods entered on the path that a stack walk would still
               reach, i.e. candidates for a permission grant,
* ``kill``     methods whose candidacy was cancelled because the path ran
               through a privilege-asserting call later on; the ``ALL``
               marker cancels every earlier candidate at once,
* ``finished`` methods whose activation already returned; they were entered
               but are no longer on the stack at the path's end,
* ``history``  the call sites the path traversed, as a set.

Sequencing digests is asymmetric: when the right-hand digest carries a
blanket ``ALL`` kill, the left-hand candidates are discarded wholesale and
only the right-hand ones survive.  Otherwise the right-hand kills prune the
left-hand candidates pointwise.  ``finished`` and ``history`` always union.

Weights form a bounded idempotent semiring: ``combine`` is set union (the
meet), ``extend`` is the pairwise digest product.  ``ZERO`` (no digests) is
the unit of ``combine`` and annihilates ``extend``; ``ONE`` (the single
empty digest) is the unit of ``extend``.  The natural order is reverse
inclusion of digest sets: lower means more digests, i.e. less precise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .contexts import CallSite
from .errors import CapacityError


class _AllFrames:
    """Singleton kill marker: cancels every candidate accumulated so far."""

    __slots__ = ()

    def __repr__(self) -> str:
        return "ALL"

    def __str__(self) -> str:
        return "*"


ALL = _AllFrames()

KillSet = frozenset  # method names and/or the ALL marker

DEFAULT_TUPLE_CAP = 10_000


def _canon_kill(kill: frozenset) -> frozenset:
    # ALL subsumes any named kill
    if ALL in kill:
        return frozenset({ALL})
    return kill


@dataclass(frozen=True, slots=True)
class WeightTuple:
    """One path digest; see module docstring for field meaning."""

    kill: frozenset = frozenset()
    gen: frozenset[str] = frozenset()
    finished: frozenset[str] = frozenset()
    history: frozenset[CallSite] = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(self, "kill", _canon_kill(frozenset(self.kill)))
        object.__setattr__(self, "gen", frozenset(self.gen))
        object.__setattr__(self, "finished", frozenset(self.finished))
        object.__setattr__(self, "history", frozenset(self.history))

    def seq(self, after: "WeightTuple") -> "WeightTuple":
        """Digest of running ``self``'s paths, then ``after``'s."""
        if ALL in after.kill:
            gen = after.gen
            kill = frozenset({ALL})
        else:
            gen = (self.gen - after.kill) | after.gen
            kill = _canon_kill(self.kill | after.kill)
        return WeightTuple(
            kill=kill,
            gen=gen,
            finished=self.finished | after.finished,
            history=self.history | after.history,
        )

    def _sort_key(self):
        return (
            sorted(str(k) for k in self.kill),
            sorted(self.gen),
            sorted(self.finished),
            sorted((s.method, s.line) for s in self.history),
        )

    def __str__(self) -> str:
        def braces(items: Iterable[str]) -> str:
            return "{" + ",".join(items) + "}"

        return "(%s|%s|%s|%s)" % (
            braces(sorted(str(k) for k in self.kill)),
            braces(sorted(self.gen)),
            braces(sorted(self.finished)),
            braces(str(s) for s in sorted(self.history)),
        )


@dataclass(frozen=True, slots=True)
class Weight:
    """A set of path digests; the semiring element."""

    tuples: frozenset[WeightTuple] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        object.__setattr__(self, "tuples", frozenset(self.tuples))

    def combine(self, other: "Weight") -> "Weight":
        """Meet: keep every digest from either side."""
        if not other.tuples:
            return self
        if not self.tuples:
            return other
        return Weight(self.tuples | other.tuples)

    def extend(self, other: "Weight") -> "Weight":
        """Sequencing: pairwise digest product."""
        if not self.tuples or not other.tuples:
            return ZERO
        return Weight(
            frozenset(t.seq(u) for t in self.tuples for u in other.tuples)
        )

    def leq(self, other: "Weight") -> bool:
        """Natural order: ``self`` is below iff it absorbs ``other``."""
        return other.tuples <= self.tuples

    @property
    def is_zero(self) -> bool:
        return not self.tuples

    def width(self) -> int:
        return len(self.tuples)

    def __str__(self) -> str:
        if not self.tuples:
            return "0"
        if self == ONE:
            return "1"
        return " + ".join(
            str(t) for t in sorted(self.tuples, key=WeightTuple._sort_key)
        )


ZERO = Weight(frozenset())
ONE = Weight(frozenset({WeightTuple()}))


def check_width(weight: Weight, cap: int = DEFAULT_TUPLE_CAP) -> Weight:
    """Guard against digest-set blowup; raises ``CapacityError`` past the cap."""
    if weight.width() > cap:
        raise CapacityError(
            f"weight grew to {weight.width()} digests (cap {cap}); "
            "the model's branching is too rich for exhaustive tracking"
        )
    return weight
