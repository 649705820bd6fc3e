"""Seeded random generators and independent reference implementations used
as oracles. The reference evaluators read the valuation dict directly and
compute action relations with explicit loops and boolean matrix powering,
so they share no code path with the implementations they check."""

from __future__ import annotations

import random

from pdlsl import (
    TOP,
    Action,
    And,
    Articulator,
    At,
    Atom,
    AtomF,
    Atomic,
    AtomicAction,
    Box,
    Choice,
    Concurrent,
    Config,
    Direction,
    Formula,
    Move,
    Not,
    RelDir,
    Seq,
    Star,
    ThreeVal,
    Thrill,
    Touch,
    UtteranceModel,
)

R, L = Articulator.RIGHT, Articulator.LEFT

# Small pools: at most 3 atoms and 2 atomic actions, per the model-checking
# equivalence setup.
ATOM_POOL: tuple[Atom, ...] = (
    Touch(R, L),
    At(R, "FACE"),
    Config(L, "CLAMP"),
)
ACTION_POOL: tuple[AtomicAction, ...] = (
    Move(R, Direction.E),
    Thrill(L),
)

# Pool with dominant/weak aliases for grounding-sensitive generation.
ALIASED_ATOMS: tuple[Atom, ...] = (
    Touch(Articulator.DOMINANT, Articulator.WEAK),
    At(Articulator.DOMINANT, "HEAD"),
    RelDir(Articulator.WEAK, Direction.NE, Articulator.DOMINANT),
)


def gen_model(
    rng: random.Random,
    max_states: int = 4,
    atoms: tuple[Atom, ...] = ATOM_POOL,
    actions: tuple[AtomicAction, ...] = ACTION_POOL,
    allow_unknown: bool = False,
) -> UtteranceModel:
    """A random serial model with every pool atom explicitly valued."""
    n = rng.randint(1, max_states)
    pairs = {(s, rng.randrange(n)) for s in range(n)}
    for s in range(n):
        for t in range(n):
            if rng.random() < 0.3:
                pairs.add((s, t))
    relation = frozenset(pairs)
    interp = {
        a: frozenset(p for p in sorted(relation) if rng.random() < 0.5) for a in actions
    }
    values = (
        (ThreeVal.TRUE, ThreeVal.FALSE, ThreeVal.UNKNOWN)
        if allow_unknown
        else (ThreeVal.TRUE, ThreeVal.FALSE)
    )
    valuation = {(s, atom): rng.choice(values) for s in range(n) for atom in atoms}
    observed = tuple(
        frozenset(h for h in (R, L) if rng.random() < 0.8) for _ in range(n)
    )
    return UtteranceModel(
        state_count=n,
        relation=relation,
        action_interp=interp,
        valuation=valuation,
        observed=observed,
    )


def gen_action(
    rng: random.Random,
    depth: int,
    actions: tuple[AtomicAction, ...] = ACTION_POOL,
) -> Action:
    if depth <= 0 or rng.random() < 0.4:
        return Atomic(rng.choice(actions))
    kind = rng.choice(("concurrent", "choice", "seq", "star"))
    if kind == "star":
        return Star(gen_action(rng, depth - 1, actions))
    left = gen_action(rng, depth - 1, actions)
    right = gen_action(rng, depth - 1, actions)
    if kind == "concurrent":
        return Concurrent(left, right)
    if kind == "choice":
        return Choice(left, right)
    return Seq(left, right)


def gen_formula(
    rng: random.Random,
    depth: int,
    atoms: tuple[Atom, ...] = ATOM_POOL,
    actions: tuple[AtomicAction, ...] = ACTION_POOL,
) -> Formula:
    if depth <= 0:
        if rng.random() < 0.15:
            return TOP
        return AtomF(rng.choice(atoms))
    kind = rng.choice(("atom", "not", "and", "and", "box"))
    if kind == "atom":
        return AtomF(rng.choice(atoms))
    if kind == "not":
        return Not(gen_formula(rng, depth - 1, atoms, actions))
    if kind == "and":
        return And(
            gen_formula(rng, depth - 1, atoms, actions),
            gen_formula(rng, depth - 1, atoms, actions),
        )
    return Box(gen_action(rng, min(depth - 1, 2), actions), gen_formula(rng, depth - 1, atoms, actions))


# --- Reference semantics ------------------------------------------------------


def _bool_matmul(a: list[list[bool]], b: list[list[bool]]) -> list[list[bool]]:
    n = len(a)
    out = [[False] * n for _ in range(n)]
    for i in range(n):
        for k in range(n):
            if a[i][k]:
                row_b = b[k]
                row_o = out[i]
                for j in range(n):
                    if row_b[j]:
                        row_o[j] = True
    return out


def matrix_closure(n: int, pairs: frozenset[tuple[int, int]]) -> frozenset[tuple[int, int]]:
    """Reflexive transitive closure by powering the (I or A) matrix."""
    m = [[i == j for j in range(n)] for i in range(n)]
    for s, t in pairs:
        m[s][t] = True
    steps = 1
    while steps < n:
        m = _bool_matmul(m, m)
        steps *= 2
    return frozenset((i, j) for i in range(n) for j in range(n) if m[i][j])


def ref_action_pairs(model: UtteranceModel, action: Action) -> frozenset[tuple[int, int]]:
    if isinstance(action, Atomic):
        return frozenset(model.action_interp.get(action.action, frozenset()))
    if isinstance(action, Concurrent):
        return ref_action_pairs(model, action.left) & ref_action_pairs(model, action.right)
    if isinstance(action, Choice):
        return ref_action_pairs(model, action.left) | ref_action_pairs(model, action.right)
    if isinstance(action, Seq):
        a = ref_action_pairs(model, action.left)
        b = ref_action_pairs(model, action.right)
        return frozenset((x, w) for (x, y) in a for (z, w) in b if y == z)
    if isinstance(action, Star):
        return matrix_closure(model.state_count, ref_action_pairs(model, action.body))
    raise TypeError(action)


def ref_eval_bool(model: UtteranceModel, state: int, formula: Formula) -> bool:
    """Classical evaluation over a fully valued model, reading the valuation
    dict directly (every queried atom must be listed)."""
    if isinstance(formula, type(TOP)):
        return True
    if isinstance(formula, AtomF):
        return model.valuation[(state, formula.atom)] is ThreeVal.TRUE
    if isinstance(formula, Not):
        return not ref_eval_bool(model, state, formula.body)
    if isinstance(formula, And):
        return ref_eval_bool(model, state, formula.left) and ref_eval_bool(
            model, state, formula.right
        )
    if isinstance(formula, Box):
        return all(
            ref_eval_bool(model, t, formula.body)
            for (s, t) in ref_action_pairs(model, formula.action)
            if s == state
        )
    raise TypeError(formula)


# Three-valued reference by truth-table lookup.
_NOT_TABLE = {"t": "f", "f": "t", "u": "u"}
_AND_TABLE = {
    ("t", "t"): "t", ("t", "f"): "f", ("t", "u"): "u",
    ("f", "t"): "f", ("f", "f"): "f", ("f", "u"): "f",
    ("u", "t"): "u", ("u", "f"): "f", ("u", "u"): "u",
}
_CODE = {ThreeVal.TRUE: "t", ThreeVal.FALSE: "f", ThreeVal.UNKNOWN: "u"}
_VAL = {"t": ThreeVal.TRUE, "f": ThreeVal.FALSE, "u": ThreeVal.UNKNOWN}


def ref_eval_three(model: UtteranceModel, state: int, formula: Formula) -> ThreeVal:
    return _VAL[_ref3(model, state, formula)]


def _ref3(model: UtteranceModel, state: int, formula: Formula) -> str:
    if isinstance(formula, type(TOP)):
        return "t"
    if isinstance(formula, AtomF):
        return _CODE[model.valuation[(state, formula.atom)]]
    if isinstance(formula, Not):
        return _NOT_TABLE[_ref3(model, state, formula.body)]
    if isinstance(formula, And):
        return _AND_TABLE[(_ref3(model, state, formula.left), _ref3(model, state, formula.right))]
    if isinstance(formula, Box):
        out = "t"
        for (s, t) in ref_action_pairs(model, formula.action):
            if s == state:
                out = _AND_TABLE[(out, _ref3(model, t, formula.body))]
        return out
    raise TypeError(formula)
