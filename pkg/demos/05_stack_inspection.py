"""
Replaying stack inspection against the generated policy
=======================================================

The point of the whole exercise: with the inferred grants in place,
every stack the program can actually build passes the runtime walk, and
nothing weaker does.
"""

import stackpol as sp
from stackpol import Frame, Policy

model = sp.running_example()
universe = sp.generate_permissions(model)
policy = sp.generate_policy(model, universe).policy
perm_a = next(p for p in universe.sorted_perms() if p.ptype == "FilePermission")

# take the privileged path into the file-permission check and turn it
# into the runtime stacks it stands for (top frame first)
privileged_path = sp.enum_vpaths(model, model.check_method)[-1]
for stack in sp.concrete_stacks(model, privileged_path):
    shown = ", ".join(
        f.method + ("*" if f.privileged else "") for f in stack
    )
    verdict = sp.simulate_inspection(stack, perm_a, policy)
    print(f"[{shown}] -> {'pass' if verdict.passed else 'FAIL at ' + verdict.failed_at}")
print()

# the starred frame asserted privilege: the walk stops there, so the
# user-code frames beneath it never need the file permission.  Watch it
# fail once the privilege marker is dropped:
unprivileged = tuple(Frame(f.method) for f in sp.concrete_stacks(model, privileged_path)[1])
verdict = sp.simulate_inspection(unprivileged, perm_a, policy)
print(f"without the assertion: fails at {verdict.failed_at}")
print()

# checking a policy file someone handed you
given = sp.parse_policy_table(sp.emit_policy(policy, "table"))
print("self check:", "PASS" if sp.check_policy(given, policy).passed else "FAIL")

# drop one grant and the checker names it
weaker = Policy(
    grants={
        m: (ps - {perm_a} if m == "Priv.run" else ps)
        for m, ps in policy.grants.items()
    }
)
report = sp.check_policy(weaker, policy)
for line in report.lines():
    print(line)
