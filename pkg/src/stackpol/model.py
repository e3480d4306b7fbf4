"""Program model: context-sensitive call graph, dependency graph, facts.

The model is the analysis input.  It is parsed from a line-oriented text
format (one directive per line, ``#`` starts a comment outside quotes,
directives may appear in any order):

    method <name> [entry] [check] [priv] [domain=<name>]
    calledge <id> <caller> <line> <callee> ctx=any
    calledge <id> <caller> <line> <callee> ctx={<m>:<l>,<m>:<l>;<m>:<l>,...}
    depnode <id> <method> <line> kind=alloc form=<1|2|3> type=<T>
            [target=<var>] [action=<var>]
    depnode <id> <method> <line> kind=plain|callsite|return
    depedge <from-id> <to-id> [inter=call|return]
    checkarg <method>:<line> var=<name>
    pta <var>@<method> = {(<Type>, <depnode-id>, {<sites>}); ...}
    sa <var>@<method> = {("<literal>", {<sites>}); ...}

A call edge's context family (``ctx=``) lists the abstract calling contexts
under which the edge is feasible: alternatives are separated by ``;``, the
sites of one alternative by ``,``.  ``ctx=any`` means unconditional.
Exactly one method must carry each of the ``entry``, ``check`` (the
permission-checking primitive) and ``priv`` (the privilege-asserting
primitive) markers, and they must be three different methods.

Everything is resolved and cross-checked at parse time; semantic queries
(route context families, per-path context folds, the cloned graph for
external tools, consistency lints) live here too.
"""

from __future__ import annotations

import re
from collections import defaultdict, deque
from dataclasses import dataclass
from typing import Sequence

from .contexts import (
    ANY_FAMILY,
    CallSite,
    CtxFamily,
    CtxSet,
    format_ctx,
    format_family,
    normalize_family,
)
from .errors import ModelError

ALLOC = "alloc"
PLAIN = "plain"
CALLSITE = "callsite"
RETURN = "return"

INTER_CALL = "call"
INTER_RETURN = "return"

_NAME_RE = re.compile(r"^[A-Za-z_$][A-Za-z0-9_$.]*$")
_ID_RE = re.compile(r"^[A-Za-z0-9_.-]+$")


@dataclass(frozen=True, slots=True)
class Method:
    name: str
    is_entry: bool = False
    is_check: bool = False
    is_priv: bool = False
    domain: str | None = None


@dataclass(frozen=True, slots=True)
class CallEdge:
    ident: str
    caller: str
    line: int
    callee: str
    ctx: CtxFamily = ANY_FAMILY

    def __post_init__(self) -> None:
        object.__setattr__(self, "ctx", normalize_family(self.ctx))

    @property
    def site(self) -> CallSite:
        return CallSite(self.caller, self.line)

    @property
    def unconditional(self) -> bool:
        return self.ctx == ANY_FAMILY


@dataclass(frozen=True, slots=True)
class DepNode:
    ident: str
    method: str
    line: int
    kind: str
    form: int | None = None
    perm_type: str | None = None
    target_var: str | None = None
    action_var: str | None = None

    @property
    def site(self) -> CallSite:
        return CallSite(self.method, self.line)


@dataclass(frozen=True, slots=True)
class DepEdge:
    src: str
    dst: str
    inter: str | None = None


@dataclass(frozen=True, slots=True)
class PtaTriple:
    """One points-to alternative: type, allocation node, calling context."""

    perm_type: str
    node: str
    ctx: CtxSet


@dataclass(frozen=True, slots=True)
class StringFact:
    """One string-analysis alternative: literal value, calling context."""

    value: str
    ctx: CtxSet


@dataclass(frozen=True)
class ProgramModel:
    methods: dict[str, Method]
    call_edges: tuple[CallEdge, ...]
    dep_nodes: dict[str, DepNode]
    dep_edges: tuple[DepEdge, ...]
    checkargs: dict[CallSite, str]
    pta: dict[tuple[str, str], tuple[PtaTriple, ...]]
    sa: dict[tuple[str, str], tuple[StringFact, ...]]
    entry_method: str = ""
    check_method: str = ""
    priv_method: str = ""

    @property
    def call_sites(self) -> frozenset[CallSite]:
        return frozenset(e.site for e in self.call_edges)

    def edges_from(self, method: str) -> list[CallEdge]:
        return [e for e in self.call_edges if e.caller == method]

    def edges_into(self, method: str) -> list[CallEdge]:
        return [e for e in self.call_edges if e.callee == method]

    def dep_successors(self, node_id: str) -> list[DepEdge]:
        return [e for e in self.dep_edges if e.src == node_id]

    def is_call_site(self, method: str, line: int) -> bool:
        return CallSite(method, line) in self.call_sites


# ---------------------------------------------------------------------------
# parsing


def _strip_comment(line: str) -> str:
    out = []
    in_quotes = False
    for ch in line:
        if ch == '"':
            in_quotes = not in_quotes
        elif ch == "#" and not in_quotes:
            break
        out.append(ch)
    return "".join(out)


def _parse_int(text: str, what: str, lineno: int) -> int:
    try:
        value = int(text)
    except ValueError:
        raise ModelError(f"{what} must be an integer, got {text!r}", lineno)
    if value < 0:
        raise ModelError(f"{what} must be non-negative, got {value}", lineno)
    return value


def _parse_site(text: str, lineno: int) -> CallSite:
    text = text.strip()
    if ":" not in text:
        raise ModelError(f"call site must look like method:line, got {text!r}", lineno)
    method, _, line = text.rpartition(":")
    if not method:
        raise ModelError(f"call site {text!r} has an empty method name", lineno)
    return CallSite(method, _parse_int(line, "site line", lineno))


def _parse_sites(text: str, lineno: int) -> CtxSet:
    text = text.strip()
    if not text:
        return frozenset()
    return frozenset(_parse_site(part, lineno) for part in text.split(","))


def _parse_family(text: str, lineno: int) -> CtxFamily:
    text = text.strip()
    if text == "any":
        return ANY_FAMILY
    if not (text.startswith("{") and text.endswith("}")):
        raise ModelError(f"context family must be `any` or braced, got {text!r}", lineno)
    body = text[1:-1].strip()
    if not body:
        raise ModelError(
            "empty context family; use ctx=any for an unconditional edge", lineno
        )
    members = []
    for member in body.split(";"):
        sites = _parse_sites(member, lineno)
        if not sites:
            raise ModelError("context family member is empty", lineno)
        members.append(sites)
    return normalize_family(members)


_PTA_TRIPLE_RE = re.compile(
    r"\(\s*([^\s,()]+)\s*,\s*([^\s,()]+)\s*,\s*\{([^{}]*)\}\s*\)"
)
_SA_PAIR_RE = re.compile(r'\(\s*"([^"]*)"\s*,\s*\{([^{}]*)\}\s*\)')


def _parse_fact_set(rhs: str, item_re: re.Pattern, lineno: int) -> list:
    rhs = rhs.strip()
    if not (rhs.startswith("{") and rhs.endswith("}")):
        raise ModelError("fact set must be braced", lineno)
    body = rhs[1:-1]
    items = item_re.findall(body)
    # every parenthesized group must have matched; leftovers mean a typo
    leftover = item_re.sub("", body).replace(";", "").strip()
    if leftover or body.count("(") != len(items):
        raise ModelError(f"malformed fact set: {rhs!r}", lineno)
    if not items:
        raise ModelError("fact set is empty", lineno)
    return items


class _Parser:
    def __init__(self) -> None:
        self.methods: dict[str, Method] = {}
        self.method_lines: dict[str, int] = {}
        self.call_edges: dict[str, CallEdge] = {}
        self.edge_lines: dict[str, int] = {}
        self.dep_nodes: dict[str, DepNode] = {}
        self.node_lines: dict[str, int] = {}
        self.dep_edges: list[tuple[DepEdge, int]] = []
        self.checkargs: dict[CallSite, tuple[str, int]] = {}
        self.pta: dict[tuple[str, str], tuple[list[PtaTriple], int]] = {}
        self.sa: dict[tuple[str, str], tuple[list[StringFact], int]] = {}

    # -- first pass: method declarations only

    def method(self, body: str, lineno: int) -> None:
        tokens = body.split()
        if not tokens:
            raise ModelError("method directive needs a name", lineno)
        name = tokens[0]
        if not _NAME_RE.match(name):
            raise ModelError(f"bad method name {name!r}", lineno)
        if name in self.methods:
            raise ModelError(f"duplicate method {name!r}", lineno)
        flags = {"entry": False, "check": False, "priv": False}
        domain = None
        for tok in tokens[1:]:
            if tok in flags:
                flags[tok] = True
            elif tok.startswith("domain="):
                domain = tok[len("domain=") :]
                if not domain:
                    raise ModelError("empty domain name", lineno)
            else:
                raise ModelError(f"unknown method attribute {tok!r}", lineno)
        self.methods[name] = Method(
            name,
            is_entry=flags["entry"],
            is_check=flags["check"],
            is_priv=flags["priv"],
            domain=domain,
        )
        self.method_lines[name] = lineno

    # -- second pass: everything else

    def calledge(self, body: str, lineno: int) -> None:
        parts = body.split(None, 4)
        if len(parts) != 5 or not parts[4].startswith("ctx="):
            raise ModelError(
                "calledge needs: <id> <caller> <line> <callee> ctx=...", lineno
            )
        ident, caller, line_txt, callee, ctx_txt = parts
        if not _ID_RE.match(ident):
            raise ModelError(f"bad edge id {ident!r}", lineno)
        if ident in self.call_edges:
            raise ModelError(f"duplicate call edge id {ident!r}", lineno)
        for name in (caller, callee):
            if name not in self.methods:
                raise ModelError(f"unknown method {name!r}", lineno)
        edge = CallEdge(
            ident=ident,
            caller=caller,
            line=_parse_int(line_txt, "call line", lineno),
            callee=callee,
            ctx=_parse_family(ctx_txt[len("ctx=") :], lineno),
        )
        self.call_edges[ident] = edge
        self.edge_lines[ident] = lineno

    def depnode(self, body: str, lineno: int) -> None:
        tokens = body.split()
        if len(tokens) < 4:
            raise ModelError(
                "depnode needs: <id> <method> <line> kind=... [attrs]", lineno
            )
        ident, method, line_txt = tokens[0], tokens[1], tokens[2]
        if not _ID_RE.match(ident):
            raise ModelError(f"bad node id {ident!r}", lineno)
        if ident in self.dep_nodes:
            raise ModelError(f"duplicate dep node id {ident!r}", lineno)
        if method not in self.methods:
            raise ModelError(f"unknown method {method!r}", lineno)
        attrs = {}
        for tok in tokens[3:]:
            if "=" not in tok:
                raise ModelError(f"expected key=value, got {tok!r}", lineno)
            key, _, value = tok.partition("=")
            if key in attrs:
                raise ModelError(f"duplicate attribute {key!r}", lineno)
            attrs[key] = value
        kind = attrs.pop("kind", None)
        if kind not in (ALLOC, PLAIN, CALLSITE, RETURN):
            raise ModelError(f"bad or missing node kind {kind!r}", lineno)
        form = perm_type = target_var = action_var = None
        if kind == ALLOC:
            form = _parse_int(attrs.pop("form", ""), "alloc form", lineno)
            if form not in (1, 2, 3):
                raise ModelError(f"alloc form must be 1, 2 or 3, got {form}", lineno)
            perm_type = attrs.pop("type", None)
            if not perm_type:
                raise ModelError("alloc node needs type=<PermType>", lineno)
            target_var = attrs.pop("target", None)
            action_var = attrs.pop("action", None)
            if form == 1 and not (target_var and action_var):
                raise ModelError("form-1 alloc needs target= and action=", lineno)
            if form == 2 and not (target_var and not action_var):
                raise ModelError("form-2 alloc needs target= and no action=", lineno)
            if form == 3 and (target_var or action_var):
                raise ModelError("form-3 alloc takes neither target= nor action=", lineno)
        if attrs:
            raise ModelError(f"unknown depnode attributes {sorted(attrs)}", lineno)
        self.dep_nodes[ident] = DepNode(
            ident=ident,
            method=method,
            line=_parse_int(line_txt, "node line", lineno),
            kind=kind,
            form=form,
            perm_type=perm_type,
            target_var=target_var,
            action_var=action_var,
        )
        self.node_lines[ident] = lineno

    def depedge(self, body: str, lineno: int) -> None:
        tokens = body.split()
        if len(tokens) not in (2, 3):
            raise ModelError("depedge needs: <from-id> <to-id> [inter=call|return]", lineno)
        src, dst = tokens[0], tokens[1]
        inter = None
        if len(tokens) == 3:
            if not tokens[2].startswith("inter="):
                raise ModelError(f"expected inter=..., got {tokens[2]!r}", lineno)
            inter = tokens[2][len("inter=") :]
            if inter not in (INTER_CALL, INTER_RETURN):
                raise ModelError(f"inter must be call or return, got {inter!r}", lineno)
        for ident in (src, dst):
            if ident not in self.dep_nodes:
                raise ModelError(f"unknown dep node {ident!r}", lineno)
        self.dep_edges.append((DepEdge(src, dst, inter), lineno))

    def checkarg(self, body: str, lineno: int) -> None:
        tokens = body.split()
        if len(tokens) != 2 or not tokens[1].startswith("var="):
            raise ModelError("checkarg needs: <method>:<line> var=<name>", lineno)
        site = _parse_site(tokens[0], lineno)
        var = tokens[1][len("var=") :]
        if not var:
            raise ModelError("empty checkarg variable", lineno)
        if site in self.checkargs:
            raise ModelError(f"duplicate checkarg for site {site}", lineno)
        self.checkargs[site] = (var, lineno)

    def _fact_key(self, lhs: str, lineno: int) -> tuple[str, str]:
        lhs = lhs.strip()
        if "@" not in lhs:
            raise ModelError(f"fact key must look like var@method, got {lhs!r}", lineno)
        var, _, method = lhs.partition("@")
        var, method = var.strip(), method.strip()
        if not var or method not in self.methods:
            raise ModelError(f"bad fact key {lhs!r}", lineno)
        return var, method

    def pta_fact(self, body: str, lineno: int) -> None:
        lhs, eq, rhs = body.partition("=")
        if not eq:
            raise ModelError("pta needs: <var>@<method> = {...}", lineno)
        key = self._fact_key(lhs, lineno)
        if key in self.pta:
            raise ModelError(f"duplicate pta fact for {key[0]}@{key[1]}", lineno)
        triples = [
            PtaTriple(ptype, node, _parse_sites(sites, lineno))
            for ptype, node, sites in _parse_fact_set(rhs, _PTA_TRIPLE_RE, lineno)
        ]
        self.pta[key] = (triples, lineno)

    def sa_fact(self, body: str, lineno: int) -> None:
        lhs, eq, rhs = body.partition("=")
        if not eq:
            raise ModelError("sa needs: <var>@<method> = {...}", lineno)
        key = self._fact_key(lhs, lineno)
        if key in self.sa:
            raise ModelError(f"duplicate sa fact for {key[0]}@{key[1]}", lineno)
        facts = [
            StringFact(value, _parse_sites(sites, lineno))
            for value, sites in _parse_fact_set(rhs, _SA_PAIR_RE, lineno)
        ]
        self.sa[key] = (facts, lineno)


def parse_model(text: str) -> ProgramModel:
    """Parse and fully validate a model; raises ``ModelError`` on any flaw."""
    parser = _Parser()
    lines = text.splitlines()
    directives: list[tuple[str, str, int]] = []
    for lineno, raw in enumerate(lines, start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        word, _, body = line.partition(" ")
        directives.append((word, body.strip(), lineno))

    # methods first so every later directive can resolve names
    handlers = {
        "calledge": parser.calledge,
        "depnode": parser.depnode,
        "depedge": parser.depedge,
        "checkarg": parser.checkarg,
        "pta": parser.pta_fact,
        "sa": parser.sa_fact,
    }
    for word, body, lineno in directives:
        if word == "method":
            parser.method(body, lineno)
        elif word not in handlers:
            raise ModelError(f"unknown directive {word!r}", lineno)
    for word, body, lineno in directives:
        if word != "method":
            handlers[word](body, lineno)

    return _finish(parser)


def _finish(p: _Parser) -> ProgramModel:
    entries = [m for m in p.methods.values() if m.is_entry]
    checks = [m for m in p.methods.values() if m.is_check]
    privs = [m for m in p.methods.values() if m.is_priv]
    for role, found in (("entry", entries), ("check", checks), ("priv", privs)):
        if len(found) != 1:
            raise ModelError(
                f"exactly one {role} method required, found {len(found)}"
            )
    entry, check, priv = entries[0].name, checks[0].name, privs[0].name
    if len({entry, check, priv}) != 3:
        raise ModelError("entry, check and priv must be three distinct methods")

    edges = tuple(sorted(p.call_edges.values(), key=lambda e: e.ident))
    sites = frozenset(e.site for e in edges)

    for e in edges:
        if e.callee == entry:
            raise ModelError(
                f"entry method has an incoming call edge {e.ident!r}",
                p.edge_lines[e.ident],
            )
        if e.ctx != ANY_FAMILY:
            for member in e.ctx:
                for s in member:
                    if s not in sites:
                        raise ModelError(
                            f"edge {e.ident!r} context mentions unknown site {s}",
                            p.edge_lines[e.ident],
                        )

    node_ids = set(p.dep_nodes)
    incoming: dict[str, int] = defaultdict(int)
    seen_pairs: set[tuple[str, str, str | None]] = set()
    for edge, lineno in p.dep_edges:
        key = (edge.src, edge.dst, edge.inter)
        if key in seen_pairs:
            raise ModelError(f"duplicate dep edge {edge.src} -> {edge.dst}", lineno)
        seen_pairs.add(key)
        incoming[edge.dst] += 1
        src, dst = p.dep_nodes[edge.src], p.dep_nodes[edge.dst]
        if edge.inter == INTER_RETURN and dst.site not in sites:
            raise ModelError(
                f"return dep edge target {edge.dst!r} is not at a call site", lineno
            )
        if edge.inter == INTER_CALL and src.site not in sites:
            raise ModelError(
                f"call dep edge source {edge.src!r} is not at a call site", lineno
            )
    for node in p.dep_nodes.values():
        if node.kind == ALLOC and incoming[node.ident]:
            raise ModelError(
                f"alloc node {node.ident!r} has incoming dep edges",
                p.node_lines[node.ident],
            )
        if node.kind == CALLSITE and node.site not in sites:
            raise ModelError(
                f"callsite node {node.ident!r} is not at a call site",
                p.node_lines[node.ident],
            )

    check_sites = frozenset(e.site for e in edges if e.callee == check)
    checkargs: dict[CallSite, str] = {}
    for site, (var, lineno) in p.checkargs.items():
        if site not in check_sites:
            raise ModelError(
                f"checkarg site {site} does not call the check method", lineno
            )
        checkargs[site] = var

    pta: dict[tuple[str, str], tuple[PtaTriple, ...]] = {}
    for key, (triples, lineno) in p.pta.items():
        for t in triples:
            if t.node not in node_ids:
                raise ModelError(f"pta fact points to unknown node {t.node!r}", lineno)
            if p.dep_nodes[t.node].kind != ALLOC:
                raise ModelError(
                    f"pta fact points to non-alloc node {t.node!r}", lineno
                )
            for s in t.ctx:
                if s not in sites:
                    raise ModelError(f"pta context mentions unknown site {s}", lineno)
        pta[key] = tuple(sorted(triples, key=lambda t: (t.perm_type, t.node, sorted(t.ctx))))

    sa: dict[tuple[str, str], tuple[StringFact, ...]] = {}
    for key, (facts, lineno) in p.sa.items():
        for f in facts:
            for s in f.ctx:
                if s not in sites:
                    raise ModelError(f"sa context mentions unknown site {s}", lineno)
        sa[key] = tuple(sorted(facts, key=lambda f: (f.value, sorted(f.ctx))))

    return ProgramModel(
        methods={name: p.methods[name] for name in sorted(p.methods)},
        call_edges=edges,
        dep_nodes={ident: p.dep_nodes[ident] for ident in sorted(p.dep_nodes)},
        dep_edges=tuple(
            DepEdge(src, dst, inter)
            for src, dst, inter in sorted(
                seen_pairs, key=lambda t: (t[0], t[1], t[2] or "")
            )
        ),
        checkargs={site: checkargs[site] for site in sorted(checkargs)},
        pta={key: pta[key] for key in sorted(pta)},
        sa={key: sa[key] for key in sorted(sa)},
        entry_method=entry,
        check_method=check,
        priv_method=priv,
    )


def serialize_model(model: ProgramModel) -> str:
    """Canonical text form; ``parse_model`` of the output reproduces the model."""
    out: list[str] = []
    for name in sorted(model.methods):
        m = model.methods[name]
        parts = [f"method {name}"]
        if m.is_entry:
            parts.append("entry")
        if m.is_check:
            parts.append("check")
        if m.is_priv:
            parts.append("priv")
        if m.domain:
            parts.append(f"domain={m.domain}")
        out.append(" ".join(parts))
    for e in model.call_edges:
        out.append(
            f"calledge {e.ident} {e.caller} {e.line} {e.callee} "
            f"ctx={format_family(e.ctx)}"
        )
    for ident in sorted(model.dep_nodes):
        n = model.dep_nodes[ident]
        parts = [f"depnode {n.ident} {n.method} {n.line} kind={n.kind}"]
        if n.kind == ALLOC:
            parts.append(f"form={n.form} type={n.perm_type}")
            if n.target_var:
                parts.append(f"target={n.target_var}")
            if n.action_var:
                parts.append(f"action={n.action_var}")
        out.append(" ".join(parts))
    for e in model.dep_edges:
        suffix = f" inter={e.inter}" if e.inter else ""
        out.append(f"depedge {e.src} {e.dst}{suffix}")
    for site in sorted(model.checkargs):
        out.append(f"checkarg {site} var={model.checkargs[site]}")
    for (var, method), triples in model.pta.items():
        body = "; ".join(
            f"({t.perm_type}, {t.node}, {{{format_ctx(t.ctx)}}})" for t in triples
        )
        out.append(f"pta {var}@{method} = {{{body}}}")
    for (var, method), facts in model.sa.items():
        body = "; ".join(f'("{f.value}", {{{format_ctx(f.ctx)}}})' for f in facts)
        out.append(f"sa {var}@{method} = {{{body}}}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# semantic queries


def compute_phi_meth(model: ProgramModel) -> dict[str, CtxFamily]:
    """Abstract route contexts per method: least fixpoint over the call graph.

    Starts from the empty context at the entry and pushes each edge's site
    into every context reaching the caller.  No member is pruned even when
    another member is a subset: distinct members record distinct routes.
    """
    out_edges: dict[str, list[CallEdge]] = defaultdict(list)
    for e in model.call_edges:
        out_edges[e.caller].append(e)
    fam: dict[str, set[CtxSet]] = {name: set() for name in model.methods}
    start: CtxSet = frozenset()
    fam[model.entry_method].add(start)
    worklist: deque[tuple[str, CtxSet]] = deque([(model.entry_method, start)])
    while worklist:
        method, ctx = worklist.popleft()
        for e in out_edges[method]:
            grown = ctx | {e.site}
            if grown not in fam[e.callee]:
                fam[e.callee].add(grown)
                worklist.append((e.callee, grown))
    return {name: frozenset(members) for name, members in fam.items()}


def phi_route_along(path: Sequence[CallEdge]) -> CtxFamily:
    """Context family of one call path: unions of one choice per edge."""
    for left, right in zip(path, path[1:]):
        if left.callee != right.caller:
            raise ValueError(
                f"path edges are not incident: {left.ident} then {right.ident}"
            )
    family: set[CtxSet] = {frozenset()}
    for e in path:
        family = {c | choice for c in family for choice in e.ctx}
    return frozenset(family)


@dataclass(frozen=True, slots=True)
class CloneGraph:
    """Context-expanded call graph for tools that need explicit clones."""

    nodes: frozenset[tuple[CtxSet, str]]
    edges: frozenset[tuple[tuple[CtxSet, str], tuple[CtxSet, str]]]


def clone_graph(
    model: ProgramModel, phi: dict[str, CtxFamily] | None = None
) -> CloneGraph:
    """One node per (route context, method); edges follow context growth."""
    if phi is None:
        phi = compute_phi_meth(model)
    nodes = frozenset(
        (ctx, method) for method, fam in phi.items() for ctx in fam
    )
    has_edge = {(e.caller, e.callee) for e in model.call_edges}
    edges = set()
    for c, n in nodes:
        for c2, n2 in nodes:
            if (n, n2) in has_edge and c <= c2:
                edges.add(((c, n), (c2, n2)))
    return CloneGraph(nodes=nodes, edges=frozenset(edges))


def lint_model(model: ProgramModel, phi: dict[str, CtxFamily] | None = None) -> list[str]:
    """Non-fatal consistency warnings.

    * edge-context: every member of an edge's family should be one of the
      caller's route contexts (unconditional edges rarely satisfy this
      literally, since their family is the bare empty context);
    * coverage: per method with outgoing edges, the union of the out-edge
      families should equal the method's route context family;
    * fact-context: each points-to / string fact context should be one of
      its method's route contexts.
    """
    if phi is None:
        phi = compute_phi_meth(model)
    warnings: list[str] = []
    for e in model.call_edges:
        bad = [c for c in e.ctx if c not in phi[e.caller]]
        if bad:
            shown = "any" if e.unconditional else format_family(frozenset(bad))
            warnings.append(
                f"edge-context: calledge {e.ident}: context {shown} is not a "
                f"route context of caller {e.caller}"
            )
    by_caller: dict[str, set[CtxSet]] = defaultdict(set)
    for e in model.call_edges:
        by_caller[e.caller].update(e.ctx)
    for method in sorted(by_caller):
        if by_caller[method] != set(phi[method]):
            warnings.append(
                f"coverage: method {method}: union of out-edge contexts differs "
                f"from its route context family"
            )
    for label, facts in (("pta", model.pta), ("sa", model.sa)):
        for (var, method), entries in facts.items():
            for entry in entries:
                if entry.ctx not in phi[method]:
                    warnings.append(
                        f"fact-context: {label} {var}@{method}: context "
                        f"{{{format_ctx(entry.ctx)}}} is not a route context of {method}"
                    )
    return warnings
