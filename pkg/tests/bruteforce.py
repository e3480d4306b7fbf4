"""Reference solvers that share no code with the saturation engine.

``movp_by_stepping`` interprets a conditional system configuration by
configuration with the direct ``successors`` semantics and folds rule
weights along every run.  It is exponential and only usable on desk
scale systems, which is the point: it is too simple to be wrong in the
same way as the automaton construction.

``fold_weights`` composes a rule-weight sequence left to right, giving
an independent path-digest reference for single runs.
"""

from __future__ import annotations

from stackpol.pushdown import ConditionalWPDS, Stack, StackSymbol
from stackpol.weights import ONE, ZERO, Weight


def fold_weights(weights) -> Weight:
    total = ONE
    for w in weights:
        total = total.extend(w)
    return total


def movp_by_stepping(
    system: ConditionalWPDS,
    targets,
    depth: int,
    *,
    start: StackSymbol | None = None,
    require_drained: bool = True,
) -> Weight:
    """Combine over every run of at most ``depth`` rule firings.

    With ``require_drained`` the frontier must be empty at the end, so
    the result provably covers all runs.  Cyclic systems never drain;
    callers must instead pick a depth at which the total has saturated.
    """
    if callable(targets):
        pred = targets
    else:
        wanted = set(targets)
        pred = lambda sym: sym in wanted

    top = system.start if start is None else start
    total = ONE if pred(top) else ZERO
    frontier: dict[Stack, Weight] = {(top,): ONE}
    for _ in range(depth):
        if not frontier:
            break
        level: dict[Stack, Weight] = {}
        for stack, w in frontier.items():
            for rule, succ in system.successors(stack):
                nw = w.extend(rule.weight)
                if succ and pred(succ[0]):
                    total = total.combine(nw)
                if succ:
                    prev = level.get(succ)
                    level[succ] = nw if prev is None else prev.combine(nw)
        frontier = level
    if require_drained and frontier:
        raise RuntimeError(f"runs outlived depth {depth}")
    return total
