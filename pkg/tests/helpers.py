"""Shared builders and seeded random generators for the test suite."""
from __future__ import annotations

import random

from chorus import (
    B_END, BCall, BCond, BLit, Branch, Behaviour, CCProgram, Call, Choose,
    ComEta, Cond, DefSet, END, Eq, Fst, Interaction, Leq, Lit, Network,
    Pair, Recv, RTCall, SelEta, SelLabel, Send, Snd, State, Var,
)

LEFT, RIGHT = SelLabel.LEFT, SelLabel.RIGHT


def seq(*parts):
    """Chain interactions onto a final choreography (last argument)."""
    *etas, tail = parts
    for eta in reversed(etas):
        tail = Interaction(eta, "", tail)
    return tail


# --------------------------------------------------------------------------
# The authentication example: ip checks c's credentials and tells s and c.

CREDS = Var("creds")
CHECK = Eq(Var("x"), Var("secret"))
TOKEN = Var("tok")


def auth_choreography():
    happy = seq(SelEta("ip", "s", LEFT), SelEta("ip", "c", LEFT),
                ComEta("s", TOKEN, "c", "t"), END)
    sad = seq(SelEta("ip", "s", RIGHT), SelEta("ip", "c", RIGHT), END)
    return Interaction(ComEta("c", CREDS, "ip", "x"), "",
                       Cond("ip", CHECK, happy, sad))


def auth_program() -> CCProgram:
    return CCProgram(DefSet(), auth_choreography())


def auth_state(good: bool) -> State:
    return State({("c", "creds"): 7 if good else 5,
                  ("ip", "secret"): 7,
                  ("s", "tok"): 99})


def auth_expected_network() -> Network:
    behaviour_c = Send("ip", CREDS, "",
                       Branch("ip", ("", Recv("s", "t", "", B_END)), ("", B_END)))
    behaviour_s = Branch("ip", ("", Send("c", TOKEN, "", B_END)), ("", B_END))
    behaviour_ip = Recv("c", "x", "", BCond(
        CHECK,
        Choose("s", LEFT, "", Choose("c", LEFT, "", B_END)),
        Choose("s", RIGHT, "", Choose("c", RIGHT, "", B_END))))
    return Network({"c": behaviour_c, "s": behaviour_s, "ip": behaviour_ip})


# --------------------------------------------------------------------------
# The file-transfer example: s sends (file, checksum), c checks and retries.

FT_PAYLOAD = Pair(Var("file"), Var("chk"))
FT_GUARD = Eq(Fst(Var("x")), Snd(Var("x")))


def file_transfer_body():
    return Interaction(
        ComEta("s", FT_PAYLOAD, "c", "x"), "",
        Cond("c", FT_GUARD,
             seq(SelEta("c", "s", LEFT), END),
             Interaction(SelEta("c", "s", RIGHT), "", Call("FileTransfer"))))


def file_transfer_program() -> CCProgram:
    defs = DefSet({"FileTransfer": (("c", "s"), file_transfer_body())})
    return CCProgram(defs, Call("FileTransfer"))


# A conditional whose branches the receiver cannot tell apart.
def unmended_program() -> CCProgram:
    branch = Interaction(ComEta("q", Lit(1), "p", "y"), "", END)
    return CCProgram(DefSet(), Cond("p", BLit(True), branch, END))


def deadlock_network() -> Network:
    return Network({"p": Recv("q", "x", "", B_END),
                    "q": Recv("p", "y", "", B_END)})


# --------------------------------------------------------------------------
# Random behaviours and order-related pairs

_ANNS = ("", "note", "mark")
_BVARS = ("x", "y")


def gen_behaviour(rng: random.Random, depth: int, peers=("a", "b", "c"),
                  procs=("P", "Q")) -> Behaviour:
    if depth <= 0 or rng.random() < 0.15:
        if rng.random() < 0.2:
            return BCall((rng.choice(procs), rng.choice(peers)))
        return B_END
    kind = rng.randrange(6)
    if kind == 0:
        return Send(rng.choice(peers), Lit(rng.randrange(3)), rng.choice(_ANNS),
                    gen_behaviour(rng, depth - 1, peers, procs))
    if kind == 1:
        return Recv(rng.choice(peers), rng.choice(_BVARS), rng.choice(_ANNS),
                    gen_behaviour(rng, depth - 1, peers, procs))
    if kind == 2:
        return Choose(rng.choice(peers), rng.choice((LEFT, RIGHT)), rng.choice(_ANNS),
                      gen_behaviour(rng, depth - 1, peers, procs))
    if kind == 3:
        slots = []
        for _ in range(2):
            if rng.random() < 0.7:
                slots.append((rng.choice(_ANNS), gen_behaviour(rng, depth - 1, peers, procs)))
            else:
                slots.append(None)
        return Branch(rng.choice(peers), slots[0], slots[1])
    if kind == 4:
        guard = Leq(Var(rng.choice(_BVARS)), Lit(rng.randrange(3)))
        return BCond(guard, gen_behaviour(rng, depth - 1, peers, procs),
                     gen_behaviour(rng, depth - 1, peers, procs))
    return BCall((rng.choice(procs), rng.choice(peers)))


def weaken(rng: random.Random, behaviour: Behaviour) -> Behaviour:
    """A behaviour below the argument in the branching order, by construction."""
    if isinstance(behaviour, Send):
        return Send(behaviour.peer, behaviour.expr, behaviour.ann,
                    weaken(rng, behaviour.cont))
    if isinstance(behaviour, Recv):
        return Recv(behaviour.peer, behaviour.var, behaviour.ann,
                    weaken(rng, behaviour.cont))
    if isinstance(behaviour, Choose):
        return Choose(behaviour.peer, behaviour.label, behaviour.ann,
                      weaken(rng, behaviour.cont))
    if isinstance(behaviour, Branch):
        slots = []
        for slot in (behaviour.left, behaviour.right):
            if slot is None or rng.random() < 0.4:
                slots.append(None)
            else:
                slots.append((slot[0], weaken(rng, slot[1])))
        return Branch(behaviour.peer, slots[0], slots[1])
    if isinstance(behaviour, BCond):
        return BCond(behaviour.guard, weaken(rng, behaviour.then_branch),
                     weaken(rng, behaviour.else_branch))
    return behaviour  # BEnd, BCall


def strengthen(rng: random.Random, behaviour: Behaviour, depth: int = 2) -> Behaviour:
    """A behaviour above the argument in the branching order, by construction."""
    if isinstance(behaviour, Send):
        return Send(behaviour.peer, behaviour.expr, behaviour.ann,
                    strengthen(rng, behaviour.cont, depth))
    if isinstance(behaviour, Recv):
        return Recv(behaviour.peer, behaviour.var, behaviour.ann,
                    strengthen(rng, behaviour.cont, depth))
    if isinstance(behaviour, Choose):
        return Choose(behaviour.peer, behaviour.label, behaviour.ann,
                      strengthen(rng, behaviour.cont, depth))
    if isinstance(behaviour, Branch):
        slots = []
        for slot in (behaviour.left, behaviour.right):
            if slot is not None:
                slots.append((slot[0], strengthen(rng, slot[1], depth)))
            elif rng.random() < 0.5:
                slots.append((rng.choice(_ANNS), gen_behaviour(rng, depth)))
            else:
                slots.append(None)
        return Branch(behaviour.peer, slots[0], slots[1])
    if isinstance(behaviour, BCond):
        return BCond(behaviour.guard, strengthen(rng, behaviour.then_branch, depth),
                     strengthen(rng, behaviour.else_branch, depth))
    return behaviour


# --------------------------------------------------------------------------
# Independent well-formedness oracle: iterative scans, no shared code with
# the recursive predicates under test.

def _all_nodes(chor):
    stack = [chor]
    while stack:
        node = stack.pop()
        yield node
        if isinstance(node, Interaction):
            stack.append(node.cont)
        elif isinstance(node, Cond):
            stack.append(node.else_branch)
            stack.append(node.then_branch)
        elif isinstance(node, RTCall):
            stack.append(node.body)


def _pn_oracle(chor, vars_of) -> set:
    out = set()
    for node in _all_nodes(chor):
        if isinstance(node, Interaction):
            out |= {node.eta.sender, node.eta.receiver}
        elif isinstance(node, Cond):
            out.add(node.proc)
        elif isinstance(node, Call):
            out |= set(vars_of(node.name))
        elif isinstance(node, RTCall):
            out |= set(node.pending)
    return out


def wf_oracle(program: CCProgram) -> bool:
    defs = program.defs
    for node in _all_nodes(program.main):
        if isinstance(node, Interaction) and node.eta.sender == node.eta.receiver:
            return False
        if isinstance(node, RTCall):
            if not node.pending or not set(node.pending) <= set(defs.vars(node.name)):
                return False
    for name in defs.support():
        body = defs.body(name)
        procs = defs.vars(name)
        if not procs:
            return False
        for node in _all_nodes(body):
            if isinstance(node, Interaction) and node.eta.sender == node.eta.receiver:
                return False
            if isinstance(node, RTCall):
                return False
        if not _pn_oracle(body, defs.vars) <= set(procs):
            return False
    return True
