"""Utterance models and their semantics.

A model is a finite serial transition system over integer states, with an
interpretation of atomic actions as edge sets and a three-valued atomic
valuation. Formula evaluation follows standard relational box semantics
with strong Kleene connectives, so missing tracking data degrades answers
to Unknown instead of guessing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Iterable, Mapping

from .core import (
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
    Formula,
    Not,
    Orient,
    RelDir,
    Seq,
    Star,
    Top,
    Touch,
    Action,
    contains_alias,
)
from .errors import SchemaError, UngroundedFormula, UnknownState
from .parsing import parse_atom, parse_atomic_action, print_atom, print_atomic_action

Pair = tuple[int, int]


class ThreeVal(Enum):
    TRUE = "true"
    FALSE = "false"
    UNKNOWN = "unknown"

    @staticmethod
    def from_bool(b: bool) -> "ThreeVal":
        return ThreeVal.TRUE if b else ThreeVal.FALSE

    def __str__(self) -> str:
        return self.value.capitalize()


def kleene_not(v: ThreeVal) -> ThreeVal:
    if v is ThreeVal.TRUE:
        return ThreeVal.FALSE
    if v is ThreeVal.FALSE:
        return ThreeVal.TRUE
    return ThreeVal.UNKNOWN


def kleene_and(a: ThreeVal, b: ThreeVal) -> ThreeVal:
    if a is ThreeVal.FALSE or b is ThreeVal.FALSE:
        return ThreeVal.FALSE
    if a is ThreeVal.UNKNOWN or b is ThreeVal.UNKNOWN:
        return ThreeVal.UNKNOWN
    return ThreeVal.TRUE


def kleene_all(values: Iterable[ThreeVal]) -> ThreeVal:
    """Conjunction over a possibly empty collection; vacuously True."""
    out = ThreeVal.TRUE
    for v in values:
        if v is ThreeVal.FALSE:
            return ThreeVal.FALSE
        if v is ThreeVal.UNKNOWN:
            out = ThreeVal.UNKNOWN
    return out


_EMPTY_OBSERVED: frozenset[Articulator] = frozenset()
_NO_CONFIGS: Mapping[Articulator, str | None] = {}


@dataclass(frozen=True)
class UtteranceModel:
    """States 0..state_count-1, a serial transition relation, the edges of
    each atomic action, and a per-state atomic valuation.

    `observed` records which hands had a tracked position at each state and
    `config_observed` the hand-shape label seen there, if any; both drive
    the default value of atoms the valuation does not list: geometric atoms
    (direction, place, touch) default to False where the relevant positions
    were observed and Unknown otherwise, configuration atoms default to
    False only against an observed different label, and orientation atoms
    default to Unknown.
    """

    state_count: int
    relation: frozenset[Pair]
    action_interp: Mapping[AtomicAction, frozenset[Pair]]
    valuation: Mapping[tuple[int, Atom], ThreeVal]
    observed: tuple[frozenset[Articulator], ...] = ()
    config_observed: tuple[Mapping[Articulator, str | None], ...] = ()
    meta: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.state_count < 1:
            raise ValueError("a model needs at least one state")
        for pair in self.relation:
            self._check_pair(pair)
        sources = {s for s, _ in self.relation}
        for s in range(self.state_count):
            if s not in sources:
                raise ValueError(f"state {s} has no outgoing transition (seriality)")
        for action, pairs in self.action_interp.items():
            for pair in pairs:
                if pair not in self.relation:
                    raise ValueError(
                        f"{print_atomic_action(action)} maps edge {pair} outside the relation"
                    )

    def _check_pair(self, pair: Pair) -> None:
        s, t = pair
        if not (0 <= s < self.state_count and 0 <= t < self.state_count):
            raise ValueError(f"edge {pair} references a state outside 0..{self.state_count - 1}")

    def states(self) -> range:
        return range(self.state_count)

    def observed_at(self, state: int) -> frozenset[Articulator]:
        return self.observed[state] if state < len(self.observed) else _EMPTY_OBSERVED

    def config_at(self, state: int) -> Mapping[Articulator, str | None]:
        return self.config_observed[state] if state < len(self.config_observed) else _NO_CONFIGS


def _compose(a: frozenset[Pair], b: frozenset[Pair]) -> frozenset[Pair]:
    by_src: dict[int, list[int]] = {}
    for x, y in b:
        by_src.setdefault(x, []).append(y)
    return frozenset((x, z) for x, y in a for z in by_src.get(y, ()))


def interpret_action(model: UtteranceModel, action: Action) -> frozenset[Pair]:
    """The set of state pairs the action relates. Star is the reflexive
    transitive closure, with identity pairs over every state."""
    match action:
        case Atomic(a):
            return model.action_interp.get(a, frozenset())
        case Concurrent(l, r):
            return interpret_action(model, l) & interpret_action(model, r)
        case Choice(l, r):
            return interpret_action(model, l) | interpret_action(model, r)
        case Seq(l, r):
            return _compose(interpret_action(model, l), interpret_action(model, r))
        case Star(body):
            base = interpret_action(model, body)
            closure = frozenset((s, s) for s in model.states()) | base
            while True:
                grown = closure | _compose(closure, base)
                if grown == closure:
                    return closure
                closure = grown
    raise TypeError(f"not an action node: {action!r}")


def atom_value(model: UtteranceModel, state: int, atom: Atom) -> ThreeVal:
    """Valuation lookup with the documented default for unlisted atoms."""
    if not (0 <= state < model.state_count):
        raise UnknownState(f"state {state} outside 0..{model.state_count - 1}")
    listed = model.valuation.get((state, atom))
    if listed is not None:
        return listed
    observed = model.observed_at(state)
    match atom:
        case RelDir(subject=b1, anchor=b2) | Touch(a=b1, b=b2):
            if b1 in observed and b2 in observed:
                return ThreeVal.FALSE
            return ThreeVal.UNKNOWN
        case At(articulator=b):
            return ThreeVal.FALSE if b in observed else ThreeVal.UNKNOWN
        case Config(articulator=b, label=c):
            seen = model.config_at(state).get(b)
            if seen is not None and seen != c:
                return ThreeVal.FALSE
            return ThreeVal.UNKNOWN
        case Orient():
            return ThreeVal.UNKNOWN
    raise TypeError(f"not an atom: {atom!r}")


def _require_grounded(formula: Formula) -> None:
    if contains_alias(formula):
        raise UngroundedFormula("formula mentions D or W; ground it first")


def eval_formula(model: UtteranceModel, state: int, formula: Formula) -> ThreeVal:
    """Three-valued truth of a grounded formula at a state."""
    _require_grounded(formula)
    if not (0 <= state < model.state_count):
        raise UnknownState(f"state {state} outside 0..{model.state_count - 1}")
    return _eval(model, state, formula)


def _eval(model: UtteranceModel, state: int, formula: Formula) -> ThreeVal:
    match formula:
        case Top():
            return ThreeVal.TRUE
        case AtomF(atom):
            return atom_value(model, state, atom)
        case Not(body):
            return kleene_not(_eval(model, state, body))
        case And(l, r):
            left = _eval(model, state, l)
            if left is ThreeVal.FALSE:
                return ThreeVal.FALSE
            return kleene_and(left, _eval(model, state, r))
        case Box(action, body):
            pairs = interpret_action(model, action)
            return kleene_all(_eval(model, t, body) for s, t in pairs if s == state)
    raise TypeError(f"not a formula node: {formula!r}")


def eval_two_valued(
    model: UtteranceModel, state: int, formula: Formula, closed_world: bool = True
) -> bool:
    """Classical evaluation: Unknown atoms collapse to False under the
    closed-world flag (to True with it unset) before the usual recursion."""
    _require_grounded(formula)
    if not (0 <= state < model.state_count):
        raise UnknownState(f"state {state} outside 0..{model.state_count - 1}")
    return _eval2(model, state, formula, closed_world)


def _eval2(model: UtteranceModel, state: int, formula: Formula, closed_world: bool) -> bool:
    match formula:
        case Top():
            return True
        case AtomF(atom):
            v = atom_value(model, state, atom)
            if v is ThreeVal.UNKNOWN:
                return not closed_world
            return v is ThreeVal.TRUE
        case Not(body):
            return not _eval2(model, state, body, closed_world)
        case And(l, r):
            return _eval2(model, state, l, closed_world) and _eval2(model, state, r, closed_world)
        case Box(action, body):
            pairs = interpret_action(model, action)
            return all(_eval2(model, t, body, closed_world) for s, t in pairs if s == state)
    raise TypeError(f"not a formula node: {formula!r}")


# --- Serialization -----------------------------------------------------------

_HANDS = (Articulator.RIGHT, Articulator.LEFT)


def model_to_json(model: UtteranceModel) -> dict[str, Any]:
    """Stable, versioned structure for dump files and golden tests."""
    actions = [
        {"action": print_atomic_action(a), "edges": [list(p) for p in sorted(pairs)]}
        for a, pairs in model.action_interp.items()
    ]
    actions.sort(key=lambda entry: entry["action"])
    valuation = [
        {"state": s, "atom": print_atom(atom), "value": v.value}
        for (s, atom), v in model.valuation.items()
    ]
    valuation.sort(key=lambda entry: (entry["state"], entry["atom"]))
    observed = [
        sorted(a.value for a in model.observed_at(s)) for s in model.states()
    ]
    configs = [
        {h.value: model.config_at(s).get(h) for h in _HANDS} for s in model.states()
    ]
    return {
        "format": 1,
        "states": model.state_count,
        "relation": [list(p) for p in sorted(model.relation)],
        "actions": actions,
        "valuation": valuation,
        "observed": observed,
        "configs": configs,
        "meta": dict(model.meta),
    }


def _pairs_from_json(obj: Any, path: str) -> frozenset[Pair]:
    if not isinstance(obj, list):
        raise SchemaError(path, "expected a list of [src, dst] pairs")
    pairs = set()
    for i, item in enumerate(obj):
        if not (
            isinstance(item, list)
            and len(item) == 2
            and all(isinstance(v, int) and not isinstance(v, bool) for v in item)
        ):
            raise SchemaError(f"{path}/{i}", "expected [src, dst] of integers")
        pairs.add((item[0], item[1]))
    return frozenset(pairs)


def model_from_json(obj: Any) -> UtteranceModel:
    if not isinstance(obj, Mapping):
        raise SchemaError("", "model file must be a JSON object")
    if obj.get("format") != 1:
        raise SchemaError("/format", "unsupported or missing model format (expected 1)")
    states = obj.get("states")
    if not isinstance(states, int) or isinstance(states, bool) or states < 1:
        raise SchemaError("/states", "expected a positive integer")
    relation = _pairs_from_json(obj.get("relation"), "/relation")
    interp: dict[AtomicAction, frozenset[Pair]] = {}
    actions_obj = obj.get("actions", [])
    if not isinstance(actions_obj, list):
        raise SchemaError("/actions", "expected a list")
    for i, entry in enumerate(actions_obj):
        path = f"/actions/{i}"
        if not (isinstance(entry, Mapping) and isinstance(entry.get("action"), str)):
            raise SchemaError(path, "expected {action, edges}")
        try:
            action = parse_atomic_action(entry["action"])
        except Exception as exc:
            raise SchemaError(f"{path}/action", str(exc)) from None
        interp[action] = _pairs_from_json(entry.get("edges"), f"{path}/edges")
    valuation: dict[tuple[int, Atom], ThreeVal] = {}
    valuation_obj = obj.get("valuation", [])
    if not isinstance(valuation_obj, list):
        raise SchemaError("/valuation", "expected a list")
    for i, entry in enumerate(valuation_obj):
        path = f"/valuation/{i}"
        if not (
            isinstance(entry, Mapping)
            and isinstance(entry.get("state"), int)
            and isinstance(entry.get("atom"), str)
            and entry.get("value") in ("true", "false", "unknown")
        ):
            raise SchemaError(path, "expected {state, atom, value}")
        try:
            atom = parse_atom(entry["atom"])
        except Exception as exc:
            raise SchemaError(f"{path}/atom", str(exc)) from None
        valuation[(entry["state"], atom)] = ThreeVal(entry["value"])
    observed_obj = obj.get("observed", [])
    if not isinstance(observed_obj, list):
        raise SchemaError("/observed", "expected a list")
    observed = []
    for i, entry in enumerate(observed_obj):
        if not (isinstance(entry, list) and all(isinstance(v, str) for v in entry)):
            raise SchemaError(f"/observed/{i}", "expected a list of articulator names")
        try:
            observed.append(frozenset(Articulator(v) for v in entry))
        except ValueError:
            raise SchemaError(f"/observed/{i}", "unknown articulator") from None
    configs_obj = obj.get("configs", [])
    if not isinstance(configs_obj, list):
        raise SchemaError("/configs", "expected a list")
    configs = []
    for i, entry in enumerate(configs_obj):
        if not isinstance(entry, Mapping):
            raise SchemaError(f"/configs/{i}", "expected an object")
        per_hand: dict[Articulator, str | None] = {}
        for key, value in entry.items():
            if value is not None and not isinstance(value, str):
                raise SchemaError(f"/configs/{i}/{key}", "expected a string or null")
            try:
                per_hand[Articulator(key)] = value
            except ValueError:
                raise SchemaError(f"/configs/{i}/{key}", "unknown articulator") from None
        configs.append(per_hand)
    meta = obj.get("meta", {})
    if not isinstance(meta, Mapping):
        raise SchemaError("/meta", "expected an object")
    try:
        return UtteranceModel(
            state_count=states,
            relation=relation,
            action_interp=interp,
            valuation=valuation,
            observed=tuple(observed),
            config_observed=tuple(configs),
            meta=dict(meta),
        )
    except ValueError as exc:
        raise SchemaError("", str(exc)) from None
