"""The verification loop: ground the lexicon, evaluate every sign at every
state, and emit per-state proposals.

A sign is proposed at a state only when the state can anchor it: the
positive atoms of the sign's opening conjunction (the antecedent, for
implication-shaped descriptions) must not be refuted there. On top of the
anchor test, three-valued evaluation decides the verdict: Match when the
formula is true and the anchor atoms are all established, Possible when
partial tracking information leaves either undetermined.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping

from .core import (
    And,
    Atom,
    AtomF,
    Formula,
    Handedness,
    Not,
    ground,
    ground_atom,
)
from .errors import ParseError, SourceSpan, UnknownState
from .model import ThreeVal, UtteranceModel, atom_value, eval_formula
from .parsing import LexiconFile, parse_atom


@dataclass(frozen=True, slots=True)
class Proposal:
    sign: str
    verdict: str  # "match" | "possible"


MATCH = "match"
POSSIBLE = "possible"


@dataclass(frozen=True)
class ProposalReport:
    """Per-state sign proposals plus enough metadata to reproduce the run.
    Within a state, matches precede possibles; lexicon order breaks ties."""

    per_state: tuple[tuple[Proposal, ...], ...]
    handedness: Handedness
    lexicon_hash: str
    thresholds: Mapping[str, Any] = field(default_factory=dict)

    def to_json(self) -> dict[str, Any]:
        return {
            "format": 1,
            "handedness": self.handedness.value,
            "lexicon_sha256": self.lexicon_hash,
            "thresholds": dict(self.thresholds),
            "proposals": [
                {
                    "state": s,
                    "signs": [{"sign": p.sign, "verdict": p.verdict} for p in proposals],
                }
                for s, proposals in enumerate(self.per_state)
            ],
        }


def anchor_atoms(formula: Formula) -> frozenset[Atom]:
    """Positive atoms of the formula's top-level conjunction, outside any
    modality. Sees through the implication encoding !(a /\\ !b), whose
    anchor is the antecedent's."""
    match formula:
        case AtomF(atom):
            return frozenset((atom,))
        case And(l, r):
            return anchor_atoms(l) | anchor_atoms(r)
        case Not(And(antecedent, Not(_))):
            return anchor_atoms(antecedent)
        case _:
            return frozenset()


def prefilter(model: UtteranceModel, state: int, grounded: Formula) -> bool:
    """False when some anchor atom is already refuted at the state, in which
    case evaluation can be skipped without changing the report."""
    return all(
        atom_value(model, state, atom) is not ThreeVal.FALSE
        for atom in anchor_atoms(grounded)
    )


def lexicon_hash(lexicon: LexiconFile) -> str:
    return hashlib.sha256(lexicon.canonical_text().encode("utf-8")).hexdigest()


@dataclass(frozen=True, slots=True)
class Override:
    """One valuation override: `state <id>: <atom> = true|false|unknown`."""

    state: int
    atom: Atom
    value: ThreeVal


_OVERRIDE_RE = re.compile(
    r"^\s*state\s+(\d+)\s*:\s*(.+?)\s*=\s*(true|false|unknown)\s*$"
)


def parse_overrides(text: str) -> list[Override]:
    overrides = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        m = _OVERRIDE_RE.match(line)
        if m is None:
            raise ParseError(
                "expected 'state <id>: <atom> = true|false|unknown'",
                SourceSpan(lineno, 1, max(len(line.rstrip()), 1)),
            )
        atom = parse_atom(m.group(2))
        overrides.append(Override(int(m.group(1)), atom, ThreeVal(m.group(3))))
    return overrides


def apply_overrides(
    model: UtteranceModel, overrides: Iterable[Override], handedness: Handedness
) -> UtteranceModel:
    """A copy of the model with override values in place of the extracted
    (or defaulted) ones. Override atoms may use the D/W aliases."""
    valuation = dict(model.valuation)
    for ov in overrides:
        if not (0 <= ov.state < model.state_count):
            raise UnknownState(f"override targets state {ov.state}")
        valuation[(ov.state, ground_atom(ov.atom, handedness))] = ov.value
    return UtteranceModel(
        state_count=model.state_count,
        relation=model.relation,
        action_interp=model.action_interp,
        valuation=valuation,
        observed=model.observed,
        config_observed=model.config_observed,
        meta=model.meta,
    )


def verify(
    model: UtteranceModel,
    lexicon: LexiconFile,
    handedness: Handedness,
    overrides: Iterable[Override] = (),
    use_prefilter: bool = True,
) -> ProposalReport:
    """Evaluate every sign at every state and collect the proposals.

    `use_prefilter` only controls whether refuted anchors skip evaluation;
    the report is identical either way.
    """
    overrides = list(overrides)
    if overrides:
        model = apply_overrides(model, overrides, handedness)
    grounded = [(entry.name, ground(entry.formula, handedness)) for entry in lexicon.entries]

    per_state: list[tuple[Proposal, ...]] = []
    for state in model.states():
        matches: list[Proposal] = []
        possibles: list[Proposal] = []
        for name, formula in grounded:
            anchors = anchor_atoms(formula)
            anchor_values = [atom_value(model, state, atom) for atom in anchors]
            if use_prefilter:
                if any(v is ThreeVal.FALSE for v in anchor_values):
                    continue
                verdict = eval_formula(model, state, formula)
            else:
                verdict = eval_formula(model, state, formula)
                if any(v is ThreeVal.FALSE for v in anchor_values):
                    continue
            if verdict is ThreeVal.FALSE:
                continue
            anchored = all(v is ThreeVal.TRUE for v in anchor_values)
            if verdict is ThreeVal.TRUE and anchored:
                matches.append(Proposal(name, MATCH))
            else:
                possibles.append(Proposal(name, POSSIBLE))
        per_state.append(tuple(matches) + tuple(possibles))

    thresholds = model.meta.get("segmentation", {}) if isinstance(model.meta, Mapping) else {}
    return ProposalReport(
        per_state=tuple(per_state),
        handedness=handedness,
        lexicon_hash=lexicon_hash(lexicon),
        thresholds=thresholds,
    )
