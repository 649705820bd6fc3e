"""Sign descriptions as dynamic-logic formulas, transition-system models
extracted from 2-D hand tracking, and model checking of a sign lexicon
against those models."""

from .core import (
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
    Handedness,
    Move,
    Not,
    Orient,
    Place,
    Rect,
    RelDir,
    Seq,
    Star,
    Thrill,
    Top,
    Touch,
    config_labels,
    contains_alias,
    diamond,
    ground,
    ground_atom,
    implies,
    iter_atoms,
    iter_atomic_actions,
    mirror_direction,
    or_,
    resolve_articulator,
    resolve_direction,
)
from .errors import (
    AliasCollision,
    CoincidentPoints,
    ConfigError,
    DuplicateSign,
    EmptySequence,
    NoKeyPosture,
    NonMonotoneTimestamps,
    ParseError,
    PdlslError,
    SchemaError,
    SourceSpan,
    UngroundedFormula,
    UnknownArticulator,
    UnknownDirection,
    UnknownState,
    ZeroVector,
)
from .geometry import (
    DEFAULT_PLACE_MAP,
    BodyFrame,
    PlaceMap,
    Vec2,
    classify_direction,
    load_place_map,
    normalize,
    place_map_from_json,
    places_containing,
    relative_direction,
    rotation_angle,
)
from .parsing import (
    LexiconEntry,
    LexiconFile,
    LintIssue,
    lint_lexicon,
    parse_action,
    parse_atom,
    parse_atomic_action,
    parse_formula,
    parse_lexicon,
    print_action,
    print_atom,
    print_atomic_action,
    print_formula,
)
from .model import (
    ThreeVal,
    UtteranceModel,
    atom_value,
    eval_formula,
    eval_two_valued,
    interpret_action,
    kleene_all,
    kleene_and,
    kleene_not,
    model_from_json,
    model_to_json,
)
from .extract import (
    EPSILON_MOVE,
    Diagnostic,
    EpsilonMove,
    HandObservation,
    Segment,
    SegmentKind,
    SegmentationParams,
    TrackingFrame,
    TrackingSequence,
    build_model,
    compute_velocities,
    extract_model,
    normalize_sequence,
    posture_valuation,
    segment,
    tracking_from_json,
    transition_action,
    validate_sequence,
)
from .check import (
    MATCH,
    POSSIBLE,
    Override,
    Proposal,
    ProposalReport,
    anchor_atoms,
    apply_overrides,
    lexicon_hash,
    parse_overrides,
    prefilter,
    verify,
)

__version__ = "0.1.0"
