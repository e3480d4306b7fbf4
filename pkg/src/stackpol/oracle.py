"""Reference policy construction by explicit path enumeration.

This module recomputes policies without touching the pushdown encoding or
the weight domain, so the two pipelines can be diffed against each other.
Everything here is bounded brute force over the model's graphs:

* a *call path* is an incident edge sequence; it stands for a call stack,
  so edges that have already returned do not appear on it.  A path is
  *valid* when some choice of per-edge context alternatives is covered by
  the sites the path itself traverses (the route can self-support its
  contexts) and no edge is a call made by the privilege-asserting method.
  A *truncated* path starts at the privilege asserter instead of the
  entry: it stands for the stack segment above an asserted privilege, and
  it is valid when some full path from the entry reaches the asserter and
  extends it to a route-supported whole.  Those witnesses ride along as
  the path's ``extensions``.
* a *flow path* walks the dependency graph from an allocation to a
  checkpoint, tracking how the permission object travels.  Call- and
  return-crossings are matched like brackets against the call stack that
  an allocating path would have built: an interprocedural return may only
  pop the call site it actually returns to.

A permission relates to a call path reaching the check method when some
flow path carries it from one of its allocations to the demanding
checkpoint, some valid path reaches the allocation such that the bracket
word is well matched, the demand path stays within the methods those
witnesses put on the stack, and one of the permission's demand contexts
is covered by the witnessing route.  The reference policy grants the
permission to every method on each related path, minus the two system
methods.

Enumeration counts each edge at most ``bound`` times per path, which
makes every enumeration finite while still letting paths wind through
cycles; a global cap guards against combinatorial blowups.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass

from .contexts import CallSite
from .errors import EnumerationLimitError
from .model import (
    ALLOC,
    INTER_CALL,
    INTER_RETURN,
    CallEdge,
    DepEdge,
    ProgramModel,
    phi_route_along,
)
from .permissions import PermissionUniverse, checkpoints
from .policy import Frame, Policy, _method_domains

DEFAULT_PATH_BOUND = 2
MAX_ENUMERATED_PATHS = 200_000

OPEN = "open"
CLOSE = "close"


@dataclass(frozen=True, slots=True)
class CallPath:
    """A call stack as an edge sequence from ``start``.

    ``edges`` may be empty only for the degenerate stack holding just the
    start method.  For truncated paths, ``extensions`` holds the full
    entry-rooted sequences that validate this segment.
    """

    start: str
    edges: tuple[CallEdge, ...]
    truncated: bool = False
    extensions: tuple[tuple[CallEdge, ...], ...] = ()

    def methods(self) -> frozenset[str]:
        out = {self.start}
        for e in self.edges:
            out.add(e.caller)
            out.add(e.callee)
        return frozenset(out)

    def sites(self) -> frozenset[CallSite]:
        return frozenset(e.site for e in self.edges)

    def full_variants(self) -> tuple[tuple[CallEdge, ...], ...]:
        """Entry-rooted edge sequences this path stands for."""
        if self.truncated:
            return self.extensions
        return (self.edges,)


@dataclass(frozen=True, slots=True)
class DepPath:
    """A dependency-graph walk; never empty."""

    edges: tuple[DepEdge, ...]

    @property
    def start(self) -> str:
        return self.edges[0].src

    @property
    def end(self) -> str:
        return self.edges[-1].dst

    def methods(self, model: ProgramModel) -> frozenset[str]:
        out = set()
        for e in self.edges:
            out.add(model.dep_nodes[e.src].method)
            out.add(model.dep_nodes[e.dst].method)
        return frozenset(out)


@dataclass(frozen=True, slots=True)
class Bracket:
    polarity: str
    site: CallSite


def well_matched(word) -> bool:
    """Every close must pop a matching open; unmatched opens are fine."""
    stack: list[CallSite] = []
    for b in word:
        if b.polarity == OPEN:
            stack.append(b.site)
        else:
            if not stack or stack.pop() != b.site:
                return False
    return True


def extract(model: ProgramModel, path: DepPath) -> tuple[Bracket, ...]:
    """Bracket word of a flow path: interprocedural crossings only."""
    word = []
    for e in path.edges:
        if e.inter == INTER_CALL:
            word.append(Bracket(OPEN, model.dep_nodes[e.src].site))
        elif e.inter == INTER_RETURN:
            word.append(Bracket(CLOSE, model.dep_nodes[e.dst].site))
    return tuple(word)


def _opens(edges) -> list[Bracket]:
    return [Bracket(OPEN, e.site) for e in edges]


def _bounded_sequences(
    model: ProgramModel, start: str, target: str, bound: int
) -> list[tuple[CallEdge, ...]]:
    """All edge sequences start -> target using each edge at most ``bound``
    times; includes the empty sequence when start == target."""
    out_edges: dict[str, list[CallEdge]] = defaultdict(list)
    for e in model.call_edges:
        out_edges[e.caller].append(e)
    results: list[tuple[CallEdge, ...]] = []
    path: list[CallEdge] = []
    counts: Counter[str] = Counter()

    def dfs(method: str) -> None:
        if method == target:
            results.append(tuple(path))
            if len(results) > MAX_ENUMERATED_PATHS:
                raise EnumerationLimitError(
                    f"more than {MAX_ENUMERATED_PATHS} paths from "
                    f"{start} to {target} at bound {bound}"
                )
        for e in out_edges[method]:
            if counts[e.ident] < bound:
                counts[e.ident] += 1
                path.append(e)
                dfs(e.callee)
                path.pop()
                counts[e.ident] -= 1

    dfs(start)
    return results


def _route_valid(edges) -> bool:
    sites = frozenset(e.site for e in edges)
    return any(c <= sites for c in phi_route_along(edges))


def _ident_key(edges) -> tuple[str, ...]:
    return tuple(e.ident for e in edges)


def enum_vpaths(
    model: ProgramModel, target: str, bound: int = DEFAULT_PATH_BOUND
) -> list[CallPath]:
    """All valid call paths ending at ``target``, full and truncated."""
    if bound < 1:
        raise ValueError("path bound must be at least 1")
    priv = model.priv_method
    full = []
    for edges in _bounded_sequences(model, model.entry_method, target, bound):
        if not edges or any(e.caller == priv for e in edges):
            continue
        if _route_valid(edges):
            full.append(CallPath(model.entry_method, edges))

    truncated = []
    prefixes = _bounded_sequences(model, model.entry_method, priv, bound)
    for edges in _bounded_sequences(model, priv, target, bound):
        if not edges or edges[0].caller != priv:
            continue
        if any(e.caller == priv for e in edges[1:]):
            continue
        counts = Counter(e.ident for e in edges)
        extensions = []
        for prefix in prefixes:
            combined = counts + Counter(e.ident for e in prefix)
            if any(n > bound for n in combined.values()):
                continue
            whole = prefix + edges
            if _route_valid(whole):
                extensions.append(whole)
        if extensions:
            extensions.sort(key=_ident_key)
            truncated.append(
                CallPath(priv, edges, truncated=True, extensions=tuple(extensions))
            )

    full.sort(key=lambda p: _ident_key(p.edges))
    truncated.sort(key=lambda p: _ident_key(p.edges))
    return full + truncated


def dep_paths(
    model: ProgramModel, bound: int = DEFAULT_PATH_BOUND
) -> list[DepPath]:
    """All flow paths from an allocation to a checkpoint-co-located node."""
    targets = checkpoints(model)
    successors: dict[str, list[DepEdge]] = defaultdict(list)
    for e in model.dep_edges:
        successors[e.src].append(e)
    allocs = sorted(
        ident for ident, n in model.dep_nodes.items() if n.kind == ALLOC
    )
    results: list[DepPath] = []
    path: list[DepEdge] = []
    counts: Counter[DepEdge] = Counter()

    def dfs(node: str) -> None:
        if path and model.dep_nodes[node].site in targets:
            results.append(DepPath(tuple(path)))
            if len(results) > MAX_ENUMERATED_PATHS:
                raise EnumerationLimitError(
                    f"more than {MAX_ENUMERATED_PATHS} flow paths at bound {bound}"
                )
        for e in successors[node]:
            if counts[e] < bound:
                counts[e] += 1
                path.append(e)
                dfs(e.dst)
                path.pop()
                counts[e] -= 1

    for alloc in allocs:
        dfs(alloc)
    return results


def match_paths(
    model: ProgramModel, pi: DepPath, bound: int = DEFAULT_PATH_BOUND
) -> list[CallPath]:
    """Valid paths to the flow's origin method that can host the flow.

    A path hosts ``pi`` when the bracket word of its opened frames
    followed by the flow's crossings is well matched: every value
    returned across a call boundary must return into a frame the path
    actually opened.
    """
    word_tail = list(extract(model, pi))
    origin = model.dep_nodes[pi.start].method
    out = []
    for sigma in enum_vpaths(model, origin, bound):
        if any(
            well_matched(_opens(v) + word_tail)
            for v in sigma.full_variants()
        ):
            out.append(sigma)
    return out


def relates(
    model: ProgramModel,
    sigma: CallPath,
    perm,
    universe: PermissionUniverse,
    flow_paths: list[DepPath],
    vpath_cache: dict[str, list[CallPath]],
    bound: int = DEFAULT_PATH_BOUND,
) -> bool:
    """Does ``perm`` get demanded while ``sigma`` is the inspected stack?"""
    pairs = universe.sources.get(perm, frozenset())
    if not pairs or not sigma.edges:
        return False
    checkpoint = sigma.edges[-1].site
    sigma_methods = sigma.methods()
    for pi in flow_paths:
        # the flow must deliver the permission to the checkpoint this very
        # path invokes, not to some other checkpoint of the same method set
        end_site = model.dep_nodes[pi.end].site
        if end_site != checkpoint or (end_site, pi.start) not in pairs:
            continue
        alloc_method = model.dep_nodes[pi.start].method
        if alloc_method not in vpath_cache:
            paths = enum_vpaths(model, alloc_method, bound)
            if alloc_method == model.entry_method:
                # code in the entry method runs on the one-frame stack,
                # which no edge sequence denotes; synthesize it
                paths = paths + [CallPath(alloc_method, ())]
            vpath_cache[alloc_method] = paths
        word_tail = extract(model, pi)
        pi_methods = pi.methods(model)
        for sigma_p in vpath_cache[alloc_method]:
            allowed = pi_methods | sigma_p.methods() | {model.check_method}
            if not sigma_methods <= allowed:
                continue
            for variant in sigma_p.full_variants():
                if not well_matched(_opens(variant) + list(word_tail)):
                    continue
                variant_sites = frozenset(e.site for e in variant)
                if any(
                    c <= variant_sites for c in universe.contexts[perm]
                ):
                    return True
    return False


def oracle_policy(
    model: ProgramModel,
    universe: PermissionUniverse,
    bound: int = DEFAULT_PATH_BOUND,
) -> Policy:
    """Reference policy: enumerate stacks, relate demands, union grants."""
    flow = dep_paths(model, bound)
    cache: dict[str, list[CallPath]] = {}
    hidden = frozenset({model.check_method, model.priv_method})
    grants: dict[str, set] = {}
    for sigma in enum_vpaths(model, model.check_method, bound):
        for perm in universe.sorted_perms():
            if relates(model, sigma, perm, universe, flow, cache, bound):
                for method in sigma.methods() - hidden:
                    grants.setdefault(method, set()).add(perm)
    return Policy(
        grants={m: frozenset(ps) for m, ps in grants.items()},
        method_domains=_method_domains(model),
        system_methods=hidden,
    )


def concrete_stacks(model: ProgramModel, path: CallPath) -> list[tuple[Frame, ...]]:
    """Runtime stacks (top first) that ``path`` stands for.

    The frame of a method that called into the privilege asserter carries
    the privileged flag.  A truncated path yields its bare segment plus
    one stack per validating extension.
    """

    def stack_of(edges) -> tuple[Frame, ...]:
        return tuple(
            Frame(e.caller, privileged=(e.callee == model.priv_method))
            for e in reversed(edges)
        )

    stacks = [stack_of(path.edges)]
    if path.truncated:
        stacks.extend(stack_of(ext) for ext in path.extensions)
    return stacks
