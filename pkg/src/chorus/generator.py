"""Seeded random generation of well-formed, projectable programs.

Programs are built so the interesting checks hold by construction rather
than by rejection sampling:

* interactions always involve two distinct processes;
* procedure bodies only mention the procedure's declared processes and only
  call procedures whose declared processes they include;
* every conditional starts both branches with selections from the deciding
  process to every other process occurring in either branch, so projection
  never has to merge behaviours that differ before the choice is known.

Generation is deterministic in the seed; the action budget counts
communications, selections, conditionals and calls written by the
generator (the selections injected below conditionals come on top).
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence, Tuple

from .choreography import (
    CCProgram, Call, Choreography, ComEta, Cond, DefSet, END, Interaction,
    SelEta, ccc_pn,
)
from .values import (
    And, BExpr, BFALSE, BTRUE, Eq, Expr, Fst, Leq, Lit, Not, Pair, Plus,
    SelLabel, Snd, Succ, Var,
)

_VARS = ("u", "v", "w")


@dataclass(frozen=True)
class GenParams:
    max_actions: int = 12
    max_processes: int = 4
    max_procedures: int = 2


def _gen_expr(rng: random.Random, depth: int = 2) -> Expr:
    if depth <= 0:
        return Lit(rng.randrange(4)) if rng.random() < 0.5 else Var(rng.choice(_VARS))
    pick = rng.randrange(7)
    if pick == 0:
        return Lit(rng.randrange(4))
    if pick == 1:
        return Var(rng.choice(_VARS))
    if pick == 2:
        return Succ(_gen_expr(rng, depth - 1))
    if pick == 3:
        return Plus(_gen_expr(rng, depth - 1), _gen_expr(rng, depth - 1))
    if pick == 4:
        return Pair(_gen_expr(rng, depth - 1), _gen_expr(rng, depth - 1))
    if pick == 5:
        return Fst(_gen_expr(rng, depth - 1))
    return Snd(_gen_expr(rng, depth - 1))


def _gen_bexpr(rng: random.Random, depth: int = 1) -> BExpr:
    pick = rng.randrange(6 if depth > 0 else 4)
    if pick == 0:
        return BTRUE
    if pick == 1:
        return BFALSE
    if pick == 2:
        return Eq(_gen_expr(rng, 1), _gen_expr(rng, 1))
    if pick == 3:
        return Leq(_gen_expr(rng, 1), _gen_expr(rng, 1))
    if pick == 4:
        return Not(_gen_bexpr(rng, depth - 1))
    return And(_gen_bexpr(rng, depth - 1), _gen_bexpr(rng, depth - 1))


def _prepend_selections(chor: Choreography, decider: str,
                        others: Sequence[str], label: SelLabel) -> Choreography:
    for receiver in sorted(others, reverse=True):
        chor = Interaction(SelEta(decider, receiver, label), "", chor)
    return chor


def _gen_chor(rng: random.Random, pool: Tuple[str, ...],
              callables: Tuple[str, ...], names, budget: int) -> Choreography:
    if budget <= 0:
        return END
    kinds = ["end"]
    if len(pool) >= 2:
        kinds += ["com"] * 5 + ["sel"]
    if budget >= 3:
        kinds += ["cond"] * 2
    if callables:
        kinds += ["call"]
    kind = rng.choice(kinds)

    if kind == "end":
        return END
    if kind == "com":
        sender, receiver = rng.sample(pool, 2)
        cont = _gen_chor(rng, pool, callables, names, budget - 1)
        return Interaction(ComEta(sender, _gen_expr(rng), receiver, rng.choice(_VARS)),
                           "", cont)
    if kind == "sel":
        sender, receiver = rng.sample(pool, 2)
        cont = _gen_chor(rng, pool, callables, names, budget - 1)
        return Interaction(SelEta(sender, receiver, rng.choice((SelLabel.LEFT, SelLabel.RIGHT))),
                           "", cont)
    if kind == "call":
        return Call(rng.choice(callables))

    decider = rng.choice(pool)
    then_budget = rng.randint(0, budget - 1)
    then_branch = _gen_chor(rng, pool, callables, names, then_budget)
    else_branch = _gen_chor(rng, pool, callables, names, budget - 1 - then_budget)
    involved = ccc_pn(then_branch, names) | ccc_pn(else_branch, names)
    others = sorted(involved - {decider})
    return Cond(decider, _gen_bexpr(rng),
                _prepend_selections(then_branch, decider, others, SelLabel.LEFT),
                _prepend_selections(else_branch, decider, others, SelLabel.RIGHT))


def gen_program(seed: int, params: GenParams = GenParams()) -> CCProgram:
    """Generate a well-formed, projectable initial program from a seed."""
    rng = random.Random(seed)
    pool = tuple(f"p{i}" for i in range(1, rng.randint(2, max(2, params.max_processes)) + 1))
    proc_count = rng.randint(0, params.max_procedures)
    proc_names = tuple(f"X{i}" for i in range(1, proc_count + 1))
    proc_vars = {
        name: tuple(sorted(rng.sample(pool, rng.randint(1, len(pool)))))
        for name in proc_names
    }

    def names(name):
        return frozenset(proc_vars.get(name, ()))

    total = rng.randint(0, params.max_actions)
    bodies = {}
    for name in proc_names:
        budget = rng.randint(1, max(1, total // (proc_count + 1))) if total else 0
        callable_from = tuple(other for other in proc_names
                              if set(proc_vars[other]) <= set(proc_vars[name]))
        bodies[name] = _gen_chor(rng, proc_vars[name], callable_from, names, budget)

    main = _gen_chor(rng, pool, proc_names, names, total)
    defs = DefSet({name: (proc_vars[name], bodies[name]) for name in proc_names})
    return CCProgram(defs, main)
