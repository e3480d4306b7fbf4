"""Permission generation from checkpoint arguments and value facts.

A *checkpoint* is a call site whose edge targets the designated check
method.  The argument passed at a checkpoint is resolved through the
points-to facts to the allocation nodes it may denote; each allocation's
form says how much of the permission's content is statically known:

* form 1 allocates from a target and an action string variable,
* form 2 from a target variable only,
* form 3 from neither (the bare permission type is all we learn).

String facts pair a possible constant value with the calling context in
which the variable holds it.  Forms 1 and 2 read those facts; form 3
falls back to the allocating method's route contexts, since any route
that reaches the allocation can produce the (opaque) permission.

Alongside the permission set, generation records per permission the
family of contexts under which it can be demanded (used to gate policy
extraction) and the checkpoint sites it originated from.
"""

from __future__ import annotations

from dataclasses import dataclass

from .contexts import CallSite, CtxFamily, CtxSet, format_ctx
from .errors import ModelError
from .model import ALLOC, ProgramModel, compute_phi_meth


@dataclass(frozen=True, slots=True)
class Permission:
    """A permission demand: type name plus optional target and action."""

    ptype: str
    target: str | None = None
    action: str | None = None

    def _key(self) -> tuple[str, str, str]:
        return (self.ptype, self.target or "", self.action or "")

    def __lt__(self, other: "Permission") -> bool:
        return self._key() < other._key()

    def __str__(self) -> str:
        if self.target is None:
            return self.ptype
        if self.action is None:
            return f'{self.ptype}("{self.target}")'
        return f'{self.ptype}("{self.target}","{self.action}")'


@dataclass(frozen=True, slots=True)
class PermissionUniverse:
    """Generated permissions with their demand contexts and provenance.

    ``sources`` maps each permission to the (checkpoint site, allocation
    node) pairs it was generated from: the checkpoint demanded it, and the
    allocation created it.  ``origins`` projects the checkpoint sites out.
    """

    perms: frozenset[Permission]
    contexts: dict[Permission, CtxFamily]
    sources: dict[Permission, frozenset[tuple[CallSite, str]]]
    diagnostics: tuple[str, ...] = ()

    @property
    def origins(self) -> dict[Permission, frozenset[CallSite]]:
        return {
            p: frozenset(site for site, _node in pairs)
            for p, pairs in self.sources.items()
        }

    def sorted_perms(self) -> list[Permission]:
        return sorted(self.perms)


def checkpoints(model: ProgramModel) -> frozenset[CallSite]:
    """Call sites of edges that invoke the check method."""
    return frozenset(
        e.site for e in model.call_edges if e.callee == model.check_method
    )


def _sa_facts(model: ProgramModel, var: str, method: str, node_id: str):
    facts = model.sa.get((var, method))
    if facts is None:
        raise ModelError(
            f"allocation node {node_id} reads string variable {var} in "
            f"{method}, but the model has no sa facts for it"
        )
    return facts


def generate_permissions(
    model: ProgramModel,
    phi_meth: dict[str, CtxFamily] | None = None,
) -> PermissionUniverse:
    """Derive the permission universe demanded at the model's checkpoints."""
    if phi_meth is None:
        phi_meth = compute_phi_meth(model)

    contexts: dict[Permission, set[CtxSet]] = {}
    sources: dict[Permission, set[tuple[CallSite, str]]] = {}
    diagnostics: list[str] = []

    def add(
        perm: Permission, ctxs: set[CtxSet], site: CallSite, node_id: str
    ) -> None:
        contexts.setdefault(perm, set()).update(ctxs)
        sources.setdefault(perm, set()).add((site, node_id))

    for site in sorted(checkpoints(model)):
        var = model.checkargs.get(site)
        if var is None:
            raise ModelError(
                f"checkpoint {site} has no checkarg binding for the "
                "permission argument"
            )
        triples = model.pta.get((var, site.method))
        if triples is None:
            raise ModelError(
                f"no pta facts for checkpoint argument {var} at {site}"
            )
        for triple in triples:
            node = model.dep_nodes[triple.node]
            if node.kind != ALLOC:
                raise ModelError(
                    f"pta fact at {site} names {triple.node}, which is not "
                    "an allocation node"
                )
            if node.form == 1:
                targets = _sa_facts(model, node.target_var, node.method, node.ident)
                actions = _sa_facts(model, node.action_var, node.method, node.ident)
                for tv in targets:
                    for av in actions:
                        if tv.ctx == av.ctx:
                            add(
                                Permission(triple.perm_type, tv.value, av.value),
                                {tv.ctx},
                                site,
                                node.ident,
                            )
                        else:
                            diagnostics.append(
                                f"skipped pairing at {node.ident}: target "
                                f'"{tv.value}" under {{{format_ctx(tv.ctx)}}} '
                                f'vs action "{av.value}" under '
                                f"{{{format_ctx(av.ctx)}}} (contexts differ)"
                            )
            elif node.form == 2:
                targets = _sa_facts(model, node.target_var, node.method, node.ident)
                for tv in targets:
                    add(
                        Permission(triple.perm_type, tv.value),
                        {tv.ctx},
                        site,
                        node.ident,
                    )
            else:
                add(
                    Permission(triple.perm_type),
                    set(phi_meth.get(node.method, frozenset())),
                    site,
                    node.ident,
                )

    return PermissionUniverse(
        perms=frozenset(contexts),
        contexts={p: frozenset(cs) for p, cs in contexts.items()},
        sources={p: frozenset(ss) for p, ss in sources.items()},
        diagnostics=tuple(dict.fromkeys(diagnostics)),
    )
