"""
Generating a least-privilege policy from a program model
========================================================

The bundled model is a small network client: main connects either as
faculty or as student, each route builds a SocketPermission and has it
checked, and a privileged file write inside the checking code demands a
FilePermission of its own.
"""

import stackpol as sp

model = sp.running_example()
print(f"methods: {len(model.methods)}, call edges: {len(model.call_edges)}")
print(f"entry={model.entry_method} check={model.check_method} priv={model.priv_method}")
print()

# Step 1: find the checkpoints and work out which permission objects can
# reach them, with the calling contexts under which each one is built.
universe = sp.generate_permissions(model)
print("permissions demanded at checkpoints:")
for perm in universe.sorted_perms():
    print(f"  {perm}")
    for ctx in sorted(universe.contexts[perm], key=sorted):
        print(f"    under {{{','.join(str(s) for s in sorted(ctx))}}}")
print()

# Near misses are reported, not silently dropped: a target string and an
# action string that never share a calling context cannot pair up.
for note in universe.diagnostics:
    print(f"note: {note}")
print()

# Step 2: solve for every stack shape that can reach the check method and
# grant each on-stack method exactly the permissions demanded across it.
result = sp.generate_policy(model, universe)
print("inferred policy:")
print(sp.emit_policy(result.policy, "table"))

# the same grants in Java policy-file syntax
print(sp.emit_policy(result.policy, "java"))
