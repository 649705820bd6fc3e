"""Domain vocabulary: articulators, directions, places, atoms, actions, formulas.

Everything here is an immutable value. Formulas and actions are plain
syntax trees; `ground` resolves the dominant/weak hand aliases so that
evaluation only ever sees the concrete right/left hands.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Union

from .errors import AliasCollision


class Articulator(Enum):
    """The four hand articulators. DOMINANT and WEAK are aliases whose
    concrete hand depends on the signer's handedness."""

    DOMINANT = "D"
    WEAK = "W"
    RIGHT = "R"
    LEFT = "L"

    @property
    def is_alias(self) -> bool:
        return self in (Articulator.DOMINANT, Articulator.WEAK)

    def __str__(self) -> str:
        return self.value


_DIAG = math.sqrt(2.0) / 2.0


class Direction(Enum):
    """Eight compass directions bound to unit vectors in the signer frame
    (x grows to the signer's right, y grows upward). Definition order is
    the canonical order used for deterministic tie-breaking."""

    N = (0.0, 1.0)
    NE = (_DIAG, _DIAG)
    E = (1.0, 0.0)
    SE = (_DIAG, -_DIAG)
    S = (0.0, -1.0)
    SW = (-_DIAG, -_DIAG)
    W = (-1.0, 0.0)
    NW = (-_DIAG, _DIAG)

    @property
    def unit(self) -> tuple[float, float]:
        return self.value

    def __str__(self) -> str:
        return self.name


#: Canonical iteration order; first entry wins ties elsewhere.
CANONICAL_DIRECTIONS: tuple[Direction, ...] = tuple(Direction)

_MIRROR = {
    Direction.N: Direction.N,
    Direction.NE: Direction.NW,
    Direction.E: Direction.W,
    Direction.SE: Direction.SW,
    Direction.S: Direction.S,
    Direction.SW: Direction.SE,
    Direction.W: Direction.E,
    Direction.NW: Direction.NE,
}


class Handedness(Enum):
    RIGHT_DOMINANT = "right"
    LEFT_DOMINANT = "left"


@dataclass(frozen=True, slots=True)
class Rect:
    """Axis-aligned rectangle in normalized body coordinates."""

    x_min: float
    x_max: float
    y_min: float
    y_max: float

    def __post_init__(self) -> None:
        for v in (self.x_min, self.x_max, self.y_min, self.y_max):
            if not math.isfinite(v):
                raise ValueError("rectangle bounds must be finite")
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise ValueError("rectangle must have positive area")

    def contains(self, x: float, y: float) -> bool:
        # Boundary inclusive: a point on a shared edge belongs to both regions.
        return self.x_min <= x <= self.x_max and self.y_min <= y <= self.y_max


@dataclass(frozen=True, slots=True)
class Place:
    """A named place of articulation: a rectangular sub-plane of the body."""

    name: str
    region: Rect


# Hand configuration labels are an open vocabulary, compared by exact string
# equality (CLAMP, OPENPALM_CONFIG, ...).
HandConfig = str
PlaceName = str


# --- Atomic propositions ---------------------------------------------------


@dataclass(frozen=True, slots=True)
class RelDir:
    """`subject` lies in direction `direction` of `anchor`."""

    subject: Articulator
    direction: Direction
    anchor: Articulator

    def __post_init__(self) -> None:
        if self.subject is self.anchor:
            raise ValueError("relative direction needs two distinct articulators")


@dataclass(frozen=True, slots=True)
class At:
    """`articulator` is located in the named place."""

    articulator: Articulator
    place: PlaceName


@dataclass(frozen=True, slots=True)
class Touch:
    """Articulators `a` and `b` are in physical contact."""

    a: Articulator
    b: Articulator

    def __post_init__(self) -> None:
        if self.a is self.b:
            raise ValueError("touch needs two distinct articulators")


@dataclass(frozen=True, slots=True)
class Config:
    """`articulator` currently holds the hand configuration `label`."""

    articulator: Articulator
    label: HandConfig


@dataclass(frozen=True, slots=True)
class Orient:
    """`articulator` is oriented toward `direction` (palm normal for hands)."""

    articulator: Articulator
    direction: Direction


Atom = Union[RelDir, At, Touch, Config, Orient]


# --- Atomic actions and the action algebra ---------------------------------


@dataclass(frozen=True, slots=True)
class Move:
    """`articulator` moves in `direction`."""

    articulator: Articulator
    direction: Direction


@dataclass(frozen=True, slots=True)
class Thrill:
    """`articulator` moves rapidly and continuously without leaving its
    place of articulation."""

    articulator: Articulator


AtomicAction = Union[Move, Thrill]


@dataclass(frozen=True, slots=True)
class Atomic:
    action: AtomicAction


@dataclass(frozen=True, slots=True)
class Concurrent:
    left: "Action"
    right: "Action"


@dataclass(frozen=True, slots=True)
class Choice:
    left: "Action"
    right: "Action"


@dataclass(frozen=True, slots=True)
class Seq:
    left: "Action"
    right: "Action"


@dataclass(frozen=True, slots=True)
class Star:
    body: "Action"


Action = Union[Atomic, Concurrent, Choice, Seq, Star]


# --- Formulas ---------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Top:
    pass


TOP = Top()


@dataclass(frozen=True, slots=True)
class AtomF:
    atom: Atom


@dataclass(frozen=True, slots=True)
class Not:
    body: "Formula"


@dataclass(frozen=True, slots=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class Box:
    """After every execution of `action`, `body` holds."""

    action: Action
    body: "Formula"


Formula = Union[Top, AtomF, Not, And, Box]


def implies(antecedent: Formula, consequent: Formula) -> Formula:
    """Material implication, desugared at construction time."""
    return Not(And(antecedent, Not(consequent)))


def or_(left: Formula, right: Formula) -> Formula:
    return Not(And(Not(left), Not(right)))


def diamond(action: Action, body: Formula) -> Formula:
    """Some execution of `action` reaches a state where `body` holds."""
    return Not(Box(action, Not(body)))


# --- Traversals -------------------------------------------------------------


def iter_atoms(formula: Formula) -> Iterator[Atom]:
    """All atoms of a formula, including those under modalities."""
    match formula:
        case Top():
            return
        case AtomF(atom):
            yield atom
        case Not(body):
            yield from iter_atoms(body)
        case And(left, right):
            yield from iter_atoms(left)
            yield from iter_atoms(right)
        case Box(_, body):
            yield from iter_atoms(body)
        case _:
            raise TypeError(f"not a formula node: {formula!r}")


def iter_atomic_actions(action: Action) -> Iterator[AtomicAction]:
    match action:
        case Atomic(a):
            yield a
        case Concurrent(l, r) | Choice(l, r) | Seq(l, r):
            yield from iter_atomic_actions(l)
            yield from iter_atomic_actions(r)
        case Star(body):
            yield from iter_atomic_actions(body)
        case _:
            raise TypeError(f"not an action node: {action!r}")


def _iter_formula_actions(formula: Formula) -> Iterator[Action]:
    match formula:
        case Box(action, body):
            yield action
            yield from _iter_formula_actions(body)
        case Not(body):
            yield from _iter_formula_actions(body)
        case And(left, right):
            yield from _iter_formula_actions(left)
            yield from _iter_formula_actions(right)
        case _:
            return


def _atom_articulators(atom: Atom) -> tuple[Articulator, ...]:
    match atom:
        case RelDir(subject=s, anchor=a):
            return (s, a)
        case At(articulator=b) | Config(articulator=b) | Orient(articulator=b):
            return (b,)
        case Touch(a=a, b=b):
            return (a, b)
    raise TypeError(f"not an atom: {atom!r}")


def contains_alias(formula: Formula) -> bool:
    """True when the formula mentions the dominant or weak hand anywhere,
    in atoms or in modality actions."""
    for atom in iter_atoms(formula):
        if any(b.is_alias for b in _atom_articulators(atom)):
            return True
    for action in _iter_formula_actions(formula):
        for a in iter_atomic_actions(action):
            if a.articulator.is_alias:
                return True
    return False


def config_labels(formula: Formula) -> frozenset[str]:
    """All hand-configuration labels mentioned by the formula."""
    return frozenset(a.label for a in iter_atoms(formula) if isinstance(a, Config))


# --- Handedness grounding ---------------------------------------------------


def mirror_direction(direction: Direction) -> Direction:
    """The same direction with the x axis inverted. Involutive."""
    return _MIRROR[direction]


def resolve_direction(direction: Direction, handedness: Handedness) -> Direction:
    """Directions are written for a right-dominant signer; mirror them for a
    left-dominant one."""
    if handedness is Handedness.RIGHT_DOMINANT:
        return direction
    return mirror_direction(direction)


_ALIAS_TABLE = {
    (Articulator.DOMINANT, Handedness.RIGHT_DOMINANT): Articulator.RIGHT,
    (Articulator.WEAK, Handedness.RIGHT_DOMINANT): Articulator.LEFT,
    (Articulator.DOMINANT, Handedness.LEFT_DOMINANT): Articulator.LEFT,
    (Articulator.WEAK, Handedness.LEFT_DOMINANT): Articulator.RIGHT,
}


def resolve_articulator(articulator: Articulator, handedness: Handedness) -> Articulator:
    return _ALIAS_TABLE.get((articulator, handedness), articulator)


def _resolve_pair(
    b1: Articulator, b2: Articulator, handedness: Handedness, atom: "Atom"
) -> tuple[Articulator, Articulator]:
    r1 = resolve_articulator(b1, handedness)
    r2 = resolve_articulator(b2, handedness)
    if r1 is r2:
        raise AliasCollision(
            f"{b1.value} and {b2.value} are the same hand for a "
            f"{handedness.value}-dominant signer in {atom!r}"
        )
    return r1, r2


def ground_atom(atom: Atom, handedness: Handedness) -> Atom:
    """Resolve aliases in one atom. A direction is resolved only when it was
    syntactically tied to a dominant/weak articulator."""
    match atom:
        case RelDir(subject=s, direction=d, anchor=a):
            if s.is_alias or a.is_alias:
                d = resolve_direction(d, handedness)
            s, a = _resolve_pair(s, a, handedness, atom)
            return RelDir(s, d, a)
        case At(articulator=b, place=p):
            return At(resolve_articulator(b, handedness), p)
        case Touch(a=a, b=b):
            a, b = _resolve_pair(a, b, handedness, atom)
            return Touch(a, b)
        case Config(articulator=b, label=c):
            return Config(resolve_articulator(b, handedness), c)
        case Orient(articulator=b, direction=d):
            if b.is_alias:
                d = resolve_direction(d, handedness)
            return Orient(resolve_articulator(b, handedness), d)
    raise TypeError(f"not an atom: {atom!r}")


def ground_action(action: Action, handedness: Handedness) -> Action:
    match action:
        case Atomic(Move(articulator=b, direction=d)):
            if b.is_alias:
                d = resolve_direction(d, handedness)
            return Atomic(Move(resolve_articulator(b, handedness), d))
        case Atomic(Thrill(articulator=b)):
            return Atomic(Thrill(resolve_articulator(b, handedness)))
        case Concurrent(l, r):
            return Concurrent(ground_action(l, handedness), ground_action(r, handedness))
        case Choice(l, r):
            return Choice(ground_action(l, handedness), ground_action(r, handedness))
        case Seq(l, r):
            return Seq(ground_action(l, handedness), ground_action(r, handedness))
        case Star(body):
            return Star(ground_action(body, handedness))
    raise TypeError(f"not an action node: {action!r}")


def ground(formula: Formula, handedness: Handedness) -> Formula:
    """Resolve every dominant/weak alias in the formula. Preserves the tree
    shape and is idempotent."""
    match formula:
        case Top():
            return formula
        case AtomF(atom):
            return AtomF(ground_atom(atom, handedness))
        case Not(body):
            return Not(ground(body, handedness))
        case And(left, right):
            return And(ground(left, handedness), ground(right, handedness))
        case Box(action, body):
            return Box(ground_action(action, handedness), ground(body, handedness))
    raise TypeError(f"not a formula node: {formula!r}")
