import random

from chorus import (
    B_END, BCall, BCond, BFALSE, BTRUE, Branch, CCProgram, Call, Choose,
    ComEta, Cond, DefSet, DefSetB, END, EppFailure, Lit, Network, RCom,
    RCond, Recv, SelEta, Send, Var, behaviour_wf, bproj, cc_enabled,
    cc_step, ccp_pn, epp, epp_c, gen_program, merge, more_branches,
    more_branches_net, network_eq, projectable_b, projectable_p, singleton,
    str_proj, str_proj_p,
)
from chorus.values import EMPTY_STATE

from helpers import (
    LEFT, RIGHT, auth_expected_network, auth_program, file_transfer_body,
    file_transfer_program, seq, unmended_program,
)


# --------------------------------------------------------------------------
# Branching order

def test_more_branches_basics():
    assert more_branches(B_END, B_END)
    full = Branch("p", ("a", B_END), ("b", B_END))
    bare = Branch("p", None, None)
    assert more_branches(full, bare)
    assert not more_branches(bare, full)
    send_p = Send("p", Lit(1), "", B_END)
    send_q = Send("q", Lit(1), "", B_END)
    assert not more_branches(send_p, send_q)
    assert not more_branches(B_END, bare)


def test_more_branches_requires_matching_annotations():
    upper = Branch("p", ("a", B_END), None)
    lower = Branch("p", ("b", B_END), None)
    assert not more_branches(upper, lower)
    assert more_branches(upper, Branch("p", ("a", B_END), None))


def test_more_branches_net():
    net = auth_expected_network()
    assert more_branches_net(net, net)
    taller = Branch("q", None, None)
    assert not more_branches_net(Network(), singleton("p", taller))


def test_projection_shrinks_for_bystanders_after_conditional():
    # Taking the then-branch can only drop offers for uninvolved processes.
    program = auth_program()
    processes = ("c", "ip", "s")
    before = epp_c(program.defs, processes, program.main)
    st2 = EMPTY_STATE.update("ip", "x", 7).update("ip", "secret", 7)
    after_com = cc_step(program.defs, program.main, EMPTY_STATE.update("ip", "secret", 7).update("c", "creds", 7),
                        RCom("c", 7, "ip", "x"))
    chor2, st = after_com
    then = cc_step(program.defs, chor2, st, RCond("ip"))
    proj_then = epp_c(program.defs, processes, then[0])
    assert not isinstance(proj_then, EppFailure)
    # ip took the branch; c and s keep a superset of the new projection.
    assert more_branches(epp_c(program.defs, processes, chor2).get("c"), proj_then.get("c"))
    assert more_branches(epp_c(program.defs, processes, chor2).get("s"), proj_then.get("s"))


# --------------------------------------------------------------------------
# Merge

def test_merge_combines_offers():
    left = Branch("p", ("a", Send("q", Lit(1), "", B_END)), None)
    right = Branch("p", None, ("b", B_END))
    merged = merge(left, right)
    assert merged.ok
    assert merged.behaviour == Branch("p", ("a", Send("q", Lit(1), "", B_END)), ("b", B_END))


def test_merge_end_and_mismatches():
    assert merge(B_END, B_END).unwrap() == B_END
    r1 = merge(Recv("p", "x", "", B_END), Recv("q", "x", "", B_END))
    assert not r1.ok
    r2 = merge(Recv("p", "x", "", B_END), Send("p", Lit(1), "", B_END))
    assert not r2.ok
    r3 = merge(Branch("p", ("a", B_END), None), Branch("p", ("b", B_END), None))
    assert not r3.ok and r3.failure.path == ("left",)
    r4 = merge(BCond(BTRUE, B_END, B_END),
               BCond(BFALSE, B_END, B_END))
    assert not r4.ok
    r5 = merge(BCall(("X", "p")), BCall(("Y", "p")))
    assert not r5.ok


def test_merge_diag_path_descends_continuations():
    left = Send("q", Lit(1), "", Recv("p", "x", "", B_END))
    right = Send("q", Lit(1), "", Recv("r", "x", "", B_END))
    result = merge(left, right)
    assert not result.ok
    assert result.failure.path == ("cont",)


# --------------------------------------------------------------------------
# Per-process projection

def test_bproj_end():
    assert bproj(DefSet(), END, "p").unwrap() == B_END


def test_golden_projection_matches_expected_network():
    projected = epp(auth_program())
    assert not isinstance(projected, EppFailure)
    assert network_eq(projected.network, auth_expected_network())
    assert projected.defs == DefSetB()


def test_bproj_selection_receiver_gets_single_offer():
    # The receiver of a selection offers exactly the selected side.
    chor = Cond("p", BTRUE,
                seq(SelEta("p", "q", LEFT), ComEta("q", Var("e"), "p", "z"), END),
                seq(SelEta("p", "q", RIGHT), END))
    projected = bproj(DefSet(), chor, "q").unwrap()
    assert projected == Branch("p", ("", Send("p", Var("e"), "", B_END)), ("", B_END))


def test_unmended_conditional_unprojectable():
    program = unmended_program()
    assert not projectable_b(program.defs, program.main, "q")
    result = bproj(program.defs, program.main, "q")
    assert not result.ok
    assert result.failure.path == ()  # the conditional itself
    assert projectable_b(program.defs, program.main, "p")
    assert not projectable_p(program)


def test_file_transfer_projection_by_rule_table():
    program = file_transfer_program()
    defs = program.defs
    body = file_transfer_body()
    expected_c = Recv("s", "x", "", BCond(
        body.cont.guard,
        Choose("s", LEFT, "", B_END),
        Choose("s", RIGHT, "", BCall(("FileTransfer", "c")))))
    expected_s = Send("c", body.eta.expr, "", Branch(
        "c", ("", B_END), ("", BCall(("FileTransfer", "s")))))
    assert bproj(defs, body, "c").unwrap() == expected_c
    assert bproj(defs, body, "s").unwrap() == expected_s

    projected = epp(program, ("FileTransfer",))
    assert not isinstance(projected, EppFailure)
    assert projected.defs.get(("FileTransfer", "c")) == expected_c
    assert projected.defs.get(("FileTransfer", "s")) == expected_s
    assert projected.network.get("c") == BCall(("FileTransfer", "c"))
    assert projected.network.get("s") == BCall(("FileTransfer", "s"))


def test_epp_c_empty_process_set():
    assert epp_c(DefSet(), (), auth_program().main) == Network()


def test_epp_reports_first_failure():
    program = unmended_program()
    failure = epp(program)
    assert isinstance(failure, EppFailure)
    assert failure.scope == "main"
    assert failure.process == "q"
    assert failure.diagnostic.path == ()


def test_bproj_preserves_behaviour_wf():
    for seed in range(40):
        program = gen_program(seed)
        processes = sorted(ccp_pn(program))
        for p in processes:
            result = bproj(program.defs, program.main, p)
            assert result.ok
            assert behaviour_wf(p, result.behaviour)


# --------------------------------------------------------------------------
# Strong projectability

def test_str_proj_trivial_cases():
    assert str_proj(DefSet(), END, "r")
    assert str_proj(DefSet(), Call("X"), "r")


def test_str_proj_holds_for_initial_projectable_programs():
    assert str_proj_p(auth_program())
    assert str_proj_p(file_transfer_program(), ("FileTransfer",))
    assert not str_proj_p(unmended_program())


def test_str_proj_preserved_by_transitions():
    program = file_transfer_program()
    chor, state = program.main, EMPTY_STATE
    for _ in range(6):
        enabled = cc_enabled(program.defs, chor, state)
        if not enabled:
            break
        _, chor, state = enabled[0]
        stepped = CCProgram(program.defs, chor)
        assert str_proj_p(stepped, ("FileTransfer",))


def test_merge_preserves_behaviour_wf():
    rng = random.Random(21)
    checked = 0
    while checked < 300:
        top = gen_behaviour_wf(rng)
        first, second = _weaken(rng, top), _weaken(rng, top)
        merged = merge(first, second)
        assert merged.ok
        if behaviour_wf("me", first) and behaviour_wf("me", second):
            assert behaviour_wf("me", merged.behaviour)
            checked += 1


def gen_behaviour_wf(rng):
    from helpers import gen_behaviour

    return gen_behaviour(rng, rng.randint(1, 4), peers=("a", "b", "me"))


def _weaken(rng, behaviour):
    from helpers import weaken

    return weaken(rng, behaviour)
