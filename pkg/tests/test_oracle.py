"""Reference enumeration: valid paths, flow paths, bracket matching."""

import pytest

from stackpol import (
    Bracket,
    CallPath,
    EnumerationLimitError,
    Frame,
    Permission,
    concrete_stacks,
    dep_paths,
    enum_vpaths,
    extract,
    generate_permissions,
    generate_policy,
    match_paths,
    oracle_policy,
    parse_model,
    relates,
    well_matched,
)
from stackpol.contexts import CallSite
from stackpol.oracle import CLOSE, OPEN

S = CallSite

PERM_F = Permission("SocketPermission", "jaist.ac.jp/faculty:8080", "connect")
PERM_S = Permission("SocketPermission", "jaist.ac.jp/student:8080", "connect")
PERM_A = Permission("FilePermission", "C:/log.txt", "write")

MINIMAL = """\
method main entry
method doPriv priv
method check check
"""


def build(*lines: str):
    return parse_model(MINIMAL + "\n".join(lines) + "\n")


def idents(path: CallPath) -> tuple[str, ...]:
    return tuple(e.ident for e in path.edges)


def ext_idents(path: CallPath) -> tuple[tuple[str, ...], ...]:
    return tuple(tuple(e.ident for e in ext) for ext in path.extensions)


# ------------------------------------------------------------ path enumeration


def test_bundled_paths_to_the_check_method(example_model):
    paths = enum_vpaths(example_model, "checkPermission")
    assert [idents(p) for p in paths] == [
        ("1", "3", "6"),
        ("2", "4", "6"),
        ("8", "9", "10"),
    ]
    full_f, full_s, trunc = paths
    assert not full_f.truncated and not full_s.truncated
    assert full_f.full_variants() == (full_f.edges,)

    # the privileged segment stands for two entry-rooted stacks
    assert trunc.truncated and trunc.start == "doPrivileged"
    assert ext_idents(trunc) == (
        ("1", "3", "7", "8", "9", "10"),
        ("2", "4", "7", "8", "9", "10"),
    )


def test_paths_to_the_entry_method_are_none(example_model):
    # the one-frame stack of the entry method is not an edge sequence
    assert enum_vpaths(example_model, "main") == []


def test_path_accessors(example_model):
    full = enum_vpaths(example_model, "checkPermission")[0]
    assert full.methods() == frozenset(
        {"main", "connectFaculty", "checkConnect", "checkPermission"}
    )
    assert full.sites() == frozenset(
        {S("main", 1), S("connectFaculty", 30), S("checkConnect", 6)}
    )


def test_linear_chain_has_a_single_path():
    m = build(
        "method a",
        "calledge 1 main 1 a ctx=any",
        "calledge 2 a 2 check ctx=any",
    )
    (path,) = enum_vpaths(m, "check")
    assert idents(path) == ("1", "2")


def test_route_support_prunes_unreachable_contexts():
    # edge 2 only fires under a route through main:9, and no path
    # provides that site
    m = build(
        "method a",
        "calledge 1 main 1 a ctx=any",
        "calledge 2 a 2 check ctx={main:9}",
        "calledge 9 main 9 a ctx=any",
    )
    keys = {idents(p) for p in enum_vpaths(m, "check")}
    assert keys == {("9", "2")}


def test_bound_lets_paths_wind_through_cycles():
    m = build(
        "method a",
        "method b",
        "calledge 1 main 1 a ctx=any",
        "calledge 2 a 2 b ctx=any",
        "calledge 3 b 3 a ctx=any",
        "calledge 4 a 4 check ctx=any",
    )
    at1 = {idents(p) for p in enum_vpaths(m, "check", bound=1)}
    at2 = {idents(p) for p in enum_vpaths(m, "check", bound=2)}
    assert at1 == {("1", "4"), ("1", "2", "3", "4")}
    assert at1 < at2
    assert ("1", "2", "3", "2", "3", "4") in at2


def test_bound_below_one_is_rejected(example_model):
    with pytest.raises(ValueError):
        enum_vpaths(example_model, "checkPermission", bound=0)


def test_enumeration_blowup_is_capped():
    lines = []
    for i in range(18):
        src = "main" if i == 0 else f"m{i}"
        lines.append(f"method m{i + 1}")
        lines.append(f"calledge a{i} {src} {2 * i} m{i + 1} ctx=any")
        lines.append(f"calledge b{i} {src} {2 * i + 1} m{i + 1} ctx=any")
    lines.append("calledge z m18 99 check ctx=any")
    m = build(*lines)
    with pytest.raises(EnumerationLimitError):
        enum_vpaths(m, "check", bound=1)


# ------------------------------------------------------------ bracket matching


def test_well_matched_words():
    a, b = S("m", 1), S("m", 2)
    assert well_matched([])
    assert well_matched([Bracket(OPEN, a)])
    assert well_matched([Bracket(OPEN, a), Bracket(CLOSE, a)])
    assert well_matched(
        [Bracket(OPEN, a), Bracket(OPEN, b), Bracket(CLOSE, b), Bracket(CLOSE, a)]
    )
    assert not well_matched([Bracket(CLOSE, a)])
    assert not well_matched([Bracket(OPEN, a), Bracket(CLOSE, b)])
    assert not well_matched(
        [Bracket(OPEN, a), Bracket(OPEN, b), Bracket(CLOSE, a)]
    )


def test_bundled_flow_paths_and_their_words(example_model):
    flows = dep_paths(example_model)
    assert [(p.start, p.end) for p in flows] == [("n12", "n6"), ("n23", "n24")]
    socket_flow, file_flow = flows

    # the socket permission value returns out of mkSocketPerm into the
    # frame that called it at checkConnect:5; the file flow never crosses
    assert extract(example_model, socket_flow) == (
        Bracket(CLOSE, S("checkConnect", 5)),
    )
    assert extract(example_model, file_flow) == ()

    assert socket_flow.methods(example_model) == frozenset(
        {"mkSocketPerm", "checkConnect"}
    )
    assert file_flow.methods(example_model) == frozenset({"checkAccess"})


def test_call_crossings_open_the_source_site():
    m = build(
        "method mk",
        "calledge 1 main 1 mk ctx=any",
        "calledge 2 main 2 check ctx=any",
        "depnode a main 5 kind=alloc form=3 type=P",
        "depnode arg main 1 kind=callsite",
        "depnode inside mk 3 kind=plain",
        "depedge a arg",
        "depedge arg inside inter=call",
        "checkarg main:2 var=p",
        "pta p@main = {(P, a, {})}",
    )
    from stackpol import DepPath

    flow = DepPath(tuple(m.dep_edges))
    assert extract(m, flow) == (Bracket(OPEN, S("main", 1)),)


# ----------------------------------------------------------------- match paths


def test_match_paths_for_the_socket_flow(example_model):
    (socket_flow, file_flow) = dep_paths(example_model)
    matches = match_paths(example_model, socket_flow)
    assert {idents(p) for p in matches} == {("1", "3", "5"), ("2", "4", "5")}


def test_match_paths_with_an_empty_word_accepts_every_path(example_model):
    (socket_flow, file_flow) = dep_paths(example_model)
    matches = match_paths(example_model, file_flow)
    assert matches == enum_vpaths(example_model, "checkAccess")
    assert [idents(p) for p in matches] == [("8", "9")]


def test_match_paths_rejects_a_close_no_path_opened():
    # the value returns into main:2, but every path to the allocator
    # opens main:1 instead
    m = build(
        "method mk",
        "method other",
        "calledge 1 main 1 mk ctx=any",
        "calledge 2 main 2 other ctx=any",
        "calledge 3 main 3 check ctx=any",
        "depnode a mk 7 kind=alloc form=3 type=P",
        "depnode r mk 8 kind=return",
        "depnode c main 2 kind=callsite",
        "depedge a r",
        "depedge r c inter=return",
        "checkarg main:3 var=p",
        "pta p@main = {(P, a, {})}",
    )
    from stackpol import DepPath

    flow = DepPath(tuple(m.dep_edges))
    assert flow.start == "a" and flow.end == "c"
    assert match_paths(m, flow) == []


# --------------------------------------------------------------------- relates


def test_relates_is_route_and_checkpoint_specific(example_model, example_universe):
    flows = dep_paths(example_model)
    cache = {}
    faculty, student, privileged = enum_vpaths(example_model, "checkPermission")

    def rel(sigma, perm):
        return relates(
            example_model, sigma, perm, example_universe, flows, cache
        )

    assert rel(faculty, PERM_F) and not rel(faculty, PERM_S)
    assert rel(student, PERM_S) and not rel(student, PERM_F)
    # the file permission is only demanded at checkAccess:24, which the
    # socket-check paths never invoke
    assert not rel(faculty, PERM_A) and not rel(student, PERM_A)
    assert rel(privileged, PERM_A)
    assert not rel(privileged, PERM_F) and not rel(privileged, PERM_S)


def test_relates_needs_a_real_checkpoint_invocation(example_model, example_universe):
    flows = dep_paths(example_model)
    degenerate = CallPath("main", ())
    assert not relates(
        example_model, degenerate, PERM_F, example_universe, flows, {}
    )


# -------------------------------------------------------------- whole pipeline


def test_oracle_agrees_with_the_solver_on_the_bundled_model(
    example_model, example_universe, example_policy
):
    reference = oracle_policy(example_model, example_universe)
    assert reference.grants == example_policy.grants
    assert reference.system_methods == example_policy.system_methods
    assert reference.method_domains == example_policy.method_domains


def test_oracle_agrees_with_the_solver_on_random_models():
    from randmodels import random_model

    for seed in range(12):
        m = random_model(seed)
        u = generate_permissions(m)
        engine = generate_policy(m, u).policy
        reference = oracle_policy(m, u)
        assert reference.grants == engine.grants, f"seed {seed}"


def test_unchecked_model_grants_nothing():
    m = build(
        "method a",
        "calledge 1 main 1 a ctx=any",
    )
    u = generate_permissions(m)
    assert u.perms == frozenset()
    assert oracle_policy(m, u).grants == {}
    assert generate_policy(m, u).policy.grants == {}


# ------------------------------------------------------------- concrete stacks


def test_concrete_stack_of_a_full_path(example_model):
    student = enum_vpaths(example_model, "checkPermission")[1]
    (stack,) = concrete_stacks(example_model, student)
    assert stack == (
        Frame("checkConnect"),
        Frame("connectStudent"),
        Frame("main"),
    )


def test_concrete_stacks_of_a_privileged_segment(example_model):
    trunc = enum_vpaths(example_model, "checkPermission")[2]
    bare, faculty, student = concrete_stacks(example_model, trunc)
    assert bare == (
        Frame("checkAccess"),
        Frame("Priv.run"),
        Frame("doPrivileged"),
    )
    assert faculty == (
        Frame("checkAccess"),
        Frame("Priv.run"),
        Frame("doPrivileged"),
        Frame("checkConnect", privileged=True),
        Frame("connectFaculty"),
        Frame("main"),
    )
    assert student[3] == Frame("checkConnect", privileged=True)
    assert sum(f.privileged for f in student) == 1
