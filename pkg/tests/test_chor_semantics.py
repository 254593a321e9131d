import random

from chorus import (
    BTRUE, CCConfiguration, CCProgram, ComEta, Cond, DefSet, END, Lit,
    RCall, RCom, RCond, RSel, RTCall, TCom, TSel, TTau, cc_enabled,
    cc_step, ccc_pn, ccp_multistep, ccp_step, forget, program_wf,
)
from chorus.values import EMPTY_STATE

from helpers import (
    LEFT, RIGHT, auth_program, auth_state, file_transfer_program, seq,
)


def test_forget():
    assert forget(RCond("ip")) == TTau("ip")
    assert forget(RCom("c", 5, "ip", "x")) == TCom("c", 5, "ip")
    assert forget(RCall("FileTransfer", "c")) == TTau("c")
    assert forget(RSel("ip", "s", LEFT)) == TSel("ip", "s", LEFT)


def test_cc_step_com():
    program = auth_program()
    st1 = auth_state(good=True)
    result = cc_step(program.defs, program.main, st1, RCom("c", 7, "ip", "x"))
    assert result is not None
    cont, st2 = result
    assert isinstance(cont, Cond)
    assert st2 == st1.update("ip", "x", 7)
    # A wrong value is not enabled.
    assert cc_step(program.defs, program.main, st1, RCom("c", 8, "ip", "x")) is None


def test_cc_step_call_joins():
    program = file_transfer_program()
    st = EMPTY_STATE
    joined = cc_step(program.defs, program.main, st, RCall("FileTransfer", "c"))
    assert joined is not None
    chor, st2 = joined
    assert chor == RTCall("FileTransfer", ("s",), program.defs.body("FileTransfer"))
    assert st2 == st


def test_cc_step_end_is_stuck():
    assert cc_step(DefSet(), END, EMPTY_STATE, RCond("p")) is None
    assert cc_enabled(DefSet(), END, EMPTY_STATE) == []


def test_enabled_file_transfer_joins():
    program = file_transfer_program()
    enabled = cc_enabled(program.defs, program.main, EMPTY_STATE)
    assert {label for label, _, _ in enabled} == {RCall("FileTransfer", "c"),
                                                  RCall("FileTransfer", "s")}
    # Both join orders converge on the expanded body.
    body = program.defs.body("FileTransfer")
    for label, chor, state in enabled:
        other = RCall("FileTransfer", "s" if label.proc == "c" else "c")
        final = cc_step(program.defs, chor, state, other)
        assert final == (body, EMPTY_STATE)


def test_enabled_head_and_delayed_communication():
    chor = seq(ComEta("o1", Lit(1), "s1", "x"), ComEta("o2", Lit(2), "s2", "y"), END)
    enabled = cc_enabled(DefSet(), chor, EMPTY_STATE)
    assert [label for label, _, _ in enabled] == [RCom("o1", 1, "s1", "x"),
                                                  RCom("o2", 2, "s2", "y")]


def test_delay_blocked_by_shared_process():
    chor = seq(ComEta("o1", Lit(1), "s1", "x"), ComEta("o1", Lit(2), "s2", "y"), END)
    enabled = cc_enabled(DefSet(), chor, EMPTY_STATE)
    assert len(enabled) == 1


def test_delay_under_conditional_needs_both_branches():
    inner = seq(ComEta("q", Lit(1), "r", "x"), END)
    both = Cond("p", BTRUE, inner, inner)
    enabled = cc_enabled(DefSet(), both, EMPTY_STATE)
    labels = [label for label, _, _ in enabled]
    assert RCond("p") in labels
    assert RCom("q", 1, "r", "x") in labels
    # If only one branch can take the step, the delay is not enabled.
    lop_sided = Cond("p", BTRUE, inner, END)
    labels2 = [label for label, _, _ in cc_enabled(DefSet(), lop_sided, EMPTY_STATE)]
    assert labels2 == [RCond("p")]


def test_ccp_multistep_empty_is_identity():
    conf = CCConfiguration(auth_program(), auth_state(True))
    assert ccp_multistep(conf, []) == [conf]


def _auth_trace(good: bool):
    st1 = auth_state(good)
    v1 = 7 if good else 5
    if good:
        labels = [TCom("c", v1, "ip"), TTau("ip"), TSel("ip", "s", LEFT),
                  TSel("ip", "c", LEFT), TCom("s", 99, "c")]
    else:
        labels = [TCom("c", v1, "ip"), TTau("ip"), TSel("ip", "s", RIGHT),
                  TSel("ip", "c", RIGHT)]
    return st1, labels


def test_auth_happy_path_trace():
    st1, labels = _auth_trace(good=True)
    conf = CCConfiguration(auth_program(), st1)
    final = ccp_multistep(conf, labels)
    st2 = st1.update("ip", "x", 7)
    st3 = st2.update("c", "t", 99)
    assert final == [CCConfiguration(CCProgram(auth_program().defs, END), st3)]


def test_auth_failure_trace():
    st1, labels = _auth_trace(good=False)
    conf = CCConfiguration(auth_program(), st1)
    final = ccp_multistep(conf, labels)
    st2 = st1.update("ip", "x", 5)
    assert final == [CCConfiguration(CCProgram(auth_program().defs, END), st2)]


def test_ccp_step_matches_forgetting():
    program = file_transfer_program()
    conf = CCConfiguration(program, EMPTY_STATE)
    succ = ccp_step(conf, TTau("c"))
    assert len(succ) == 1
    assert succ[0].program.main == RTCall("FileTransfer", ("s",),
                                          program.defs.body("FileTransfer"))


def _random_walk(program, state, steps, seed):
    rng = random.Random(seed)
    chor = program.main
    seen = [(chor, state)]
    for _ in range(steps):
        enabled = cc_enabled(program.defs, chor, state)
        if not enabled:
            break
        _, chor, state = rng.choice(enabled)
        seen.append((chor, state))
    return seen


def test_pn_monotone_and_wf_preserved_along_runs():
    for program, state in ((auth_program(), auth_state(True)),
                           (file_transfer_program(), EMPTY_STATE)):
        names = program.defs.names
        for seed in range(5):
            walk = _random_walk(program, state, 12, seed)
            pns = [ccc_pn(chor, names) for chor, _ in walk]
            for before, after in zip(pns, pns[1:]):
                assert after <= before
            for chor, _ in walk:
                assert program_wf(CCProgram(program.defs, chor))


def test_enabled_agrees_with_step_everywhere():
    for program, state in ((auth_program(), auth_state(False)),
                           (file_transfer_program(), EMPTY_STATE)):
        for seed in range(4):
            for chor, st in _random_walk(program, state, 10, seed):
                for label, succ_chor, succ_state in cc_enabled(program.defs, chor, st):
                    assert cc_step(program.defs, chor, st, label) == (succ_chor, succ_state)
