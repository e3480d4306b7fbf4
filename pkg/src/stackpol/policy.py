"""Policy generation, emission, checking, and stack-inspection simulation.

``encode`` turns a program model into a conditional weighted pushdown
system whose runs are exactly the valid stacks of the program:

* every call edge becomes a push rule guarded by the edge's context
  family, generating the caller into the weight and recording the call
  site in the history; a call made by the privilege-asserting method
  additionally kills everything below it, because stack inspection stops
  at an asserted privilege;
* every interprocedural *return* edge of the dependency graph witnesses
  that its source method can finish and hand a value back to a call site:
  the source method gains a pop rule (marking it finished in the weight),
  and the receiving call site a swap rule resuming the caller.

Solving meet-over-all-paths from the entry to the check method yields a
set of digests, one per equivalence class of inspectable stacks: which
methods are live on the stack (generated minus finished, minus anything
shadowed by a privilege assertion), and which call sites were traversed
(the history).  ``generate_policy`` grants a permission to the live
methods of every digest that both traversed a checkpoint where the
permission originates and matches one of the permission's demand
contexts; the history carries enough of the route to decide both.

The rest of the module closes the loop: render and parse policies, diff
a given policy against a generated one, and simulate the runtime
stack-inspection walk against a policy.
"""

from __future__ import annotations

import re
from collections import defaultdict
from dataclasses import dataclass, field

from .contexts import ANY, CallSite, Condition
from .errors import PolicyError
from .model import INTER_RETURN, ProgramModel
from .permissions import Permission, PermissionUniverse
from .pushdown import DEFAULT_MAX_STEPS, ConditionalWPDS, Rule, movp
from .weights import ALL, DEFAULT_TUPLE_CAP, ONE, Weight, WeightTuple


def encode(model: ProgramModel) -> ConditionalWPDS:
    """Build the conditional weighted pushdown system for a model."""
    rules: list[Rule] = []
    for e in model.call_edges:
        if e.caller == model.priv_method:
            w = Weight(
                frozenset(
                    {
                        WeightTuple(
                            kill=frozenset({ALL}),
                            gen=frozenset({e.caller}),
                            history=frozenset({e.site}),
                        )
                    }
                )
            )
        else:
            w = Weight(
                frozenset(
                    {
                        WeightTuple(
                            gen=frozenset({e.caller}),
                            history=frozenset({e.site}),
                        )
                    }
                )
            )
        rules.append(
            Rule(lhs=e.caller, rhs=(e.callee, e.site), cond=Condition(e.ctx), weight=w)
        )
    seen: set[tuple] = set()
    for d in model.dep_edges:
        if d.inter != INTER_RETURN:
            continue
        src = model.dep_nodes[d.src]
        dst = model.dep_nodes[d.dst]
        pop = Rule(
            lhs=src.method,
            rhs=(),
            weight=Weight(
                frozenset({WeightTuple(finished=frozenset({src.method}))})
            ),
        )
        swap = Rule(lhs=dst.site, rhs=(dst.method,), weight=ONE)
        for r in (pop, swap):
            key = (r.lhs, r.rhs)
            if key not in seen:
                seen.add(key)
                rules.append(r)
    return ConditionalWPDS(rules=rules, start=model.entry_method)


@dataclass(frozen=True, slots=True)
class Policy:
    """Per-method permission grants, plus enough model context to use them."""

    grants: dict[str, frozenset[Permission]]
    method_domains: dict[str, str] = field(default_factory=dict)
    system_methods: frozenset[str] = frozenset()

    def granted(self, method: str) -> frozenset[Permission]:
        return self.grants.get(method, frozenset())

    def domains(self) -> dict[str, frozenset[Permission]]:
        """Grants unioned per protection domain (default: one per method)."""
        out: dict[str, set[Permission]] = defaultdict(set)
        for method, perms in self.grants.items():
            out[self.method_domains.get(method, method)].update(perms)
        return {d: frozenset(ps) for d, ps in out.items()}


@dataclass(frozen=True, slots=True)
class PolicyResult:
    policy: Policy
    weight: Weight


def _method_domains(model: ProgramModel) -> dict[str, str]:
    return {
        name: (m.domain or name) for name, m in model.methods.items()
    }


def generate_policy(
    model: ProgramModel,
    universe: PermissionUniverse,
    *,
    tuple_cap: int = DEFAULT_TUPLE_CAP,
    max_steps: int = DEFAULT_MAX_STEPS,
) -> PolicyResult:
    """Solve the encoded system and extract minimal per-method grants.

    A digest requires a permission when its history contains a checkpoint
    the permission originates from *and* covers one of the permission's
    demand contexts.  The first clause keeps a permission demanded only
    behind a privilege boundary from leaking to stacks that never cross
    that boundary; the second keeps context-separated demands apart.
    """
    system = encode(model)
    weight = movp(
        system,
        targets={model.check_method},
        tuple_cap=tuple_cap,
        max_steps=max_steps,
    )
    grants: dict[str, set[Permission]] = {}
    hidden = {model.check_method, model.priv_method}
    origins = universe.origins
    for digest in weight.tuples:
        required = [
            p
            for p in universe.perms
            if origins[p] & digest.history
            and any(c <= digest.history for c in universe.contexts[p])
        ]
        if not required:
            continue
        for method in (digest.gen - digest.finished) - hidden:
            grants.setdefault(method, set()).update(required)
    policy = Policy(
        grants={m: frozenset(ps) for m, ps in grants.items()},
        method_domains=_method_domains(model),
        system_methods=frozenset(hidden),
    )
    return PolicyResult(policy=policy, weight=weight)


# ---------------------------------------------------------------------------
# rendering and parsing


def emit_policy(policy: Policy, fmt: str = "table") -> str:
    """Render a policy as a sorted table or as Java-style grant blocks."""
    if fmt == "table":
        lines = []
        for method in sorted(policy.grants):
            for perm in sorted(policy.grants[method]):
                lines.append(f"method {method}: {perm}")
        return "\n".join(lines) + ("\n" if lines else "")
    if fmt == "java":
        lines = []
        domains = policy.domains()
        for domain in sorted(domains):
            perms = domains[domain]
            if not perms:
                continue
            lines.append(f'grant codeBase "{domain}" {{')
            for perm in sorted(perms):
                if perm.target is None:
                    lines.append(f"  permission {perm.ptype};")
                elif perm.action is None:
                    lines.append(f'  permission {perm.ptype} "{perm.target}";')
                else:
                    lines.append(
                        f'  permission {perm.ptype} "{perm.target}", "{perm.action}";'
                    )
            lines.append("};")
        return "\n".join(lines) + ("\n" if lines else "")
    raise PolicyError(f"unknown policy format {fmt!r}")


_TABLE_LINE_RE = re.compile(r"^method\s+(\S+)\s*:\s*(.+)$")
_PERM_RE = re.compile(
    r'^([A-Za-z_$][A-Za-z0-9_$.]*)'
    r'(?:\(\s*"([^"]*)"\s*(?:,\s*"([^"]*)"\s*)?\))?$'
)


def parse_permission(text: str) -> Permission:
    m = _PERM_RE.match(text.strip())
    if not m:
        raise PolicyError(f"malformed permission {text.strip()!r}")
    ptype, target, action = m.groups()
    return Permission(ptype, target, action)


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


def parse_policy_table(text: str) -> Policy:
    """Parse the table format back into a policy (inverse of ``emit_policy``)."""
    grants: dict[str, set[Permission]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        m = _TABLE_LINE_RE.match(line)
        if not m:
            raise PolicyError(f"line {lineno}: expected `method <name>: <perm>`")
        method, perm_txt = m.groups()
        try:
            perm = parse_permission(perm_txt)
        except PolicyError as exc:
            raise PolicyError(f"line {lineno}: {exc}") from None
        grants.setdefault(method, set()).add(perm)
    return Policy(grants={m: frozenset(ps) for m, ps in grants.items()})


# ---------------------------------------------------------------------------
# checking


@dataclass(frozen=True, slots=True)
class CheckReport:
    """Outcome of comparing a given policy against a generated one."""

    passed: bool
    deficits: dict[str, frozenset[Permission]]
    overgrants: dict[str, frozenset[Permission]]

    def lines(self) -> list[str]:
        out = []
        for method in sorted(self.deficits):
            for perm in sorted(self.deficits[method]):
                out.append(f"missing grant: method {method}: {perm}")
        return out


def check_policy(given: Policy, generated: Policy) -> CheckReport:
    """Pass iff every generated grant is covered by the given policy.

    Grants present in the given policy but never needed are reported as
    over-grants; they are informational (least-privilege hints), never a
    failure.
    """
    deficits: dict[str, frozenset[Permission]] = {}
    for method, needed in generated.grants.items():
        missing = needed - given.granted(method)
        if missing:
            deficits[method] = frozenset(missing)
    overgrants: dict[str, frozenset[Permission]] = {}
    for method, have in given.grants.items():
        extra = have - generated.granted(method)
        if extra:
            overgrants[method] = frozenset(extra)
    return CheckReport(
        passed=not deficits, deficits=deficits, overgrants=overgrants
    )


# ---------------------------------------------------------------------------
# stack-inspection simulation


@dataclass(frozen=True, slots=True)
class Frame:
    """One stack frame: the executing method, and whether it asserted
    privilege for the call it made."""

    method: str
    privileged: bool = False


@dataclass(frozen=True, slots=True)
class InspectionResult:
    passed: bool
    failed_at: str | None = None


def simulate_inspection(
    stack, perm: Permission, policy: Policy
) -> InspectionResult:
    """Walk a stack top-first the way the runtime access controller does.

    Frames of system methods (the check and privilege primitives) always
    pass.  A frame that asserted privilege ends the walk with success:
    the assertion vouches for everything beneath it, so neither that
    frame nor anything below is consulted.  Any other frame must hold the
    permission in the policy; the first one that does not fails the walk.
    An empty stack passes vacuously.
    """
    for raw in stack:
        frame = raw if isinstance(raw, Frame) else Frame(*raw)
        if frame.privileged:
            return InspectionResult(True)
        if frame.method in policy.system_methods:
            continue
        if perm not in policy.granted(frame.method):
            return InspectionResult(False, failed_at=frame.method)
    return InspectionResult(True)
