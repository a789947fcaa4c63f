"""spatial-forge: deterministic spatial pretext-task synthesis with verifiable rewards.

Five task families are generated from plain RGB (and RGB-D) image corpora:
grid/strip shuffle reordering, sub-image flip detection, masked-crop inpaint
selection, three-region depth ordering, and rotated-camera relative position.
Every sample carries a machine-checkable answer; the verifier scores free-form
model responses into {0.0, 0.1, 0.9, 1.0} rewards for RL training.
"""

from .config import (
    BuildConfig,
    DEFAULT_COLD_START_FRACTION,
    DEFAULT_SHUFFLE_MIX,
    DEFAULT_TASK_COUNTS,
)
from .core import (
    DepthOrderAnswer,
    FlipAnswer,
    OptionAnswer,
    OrderingAnswer,
    QASample,
    SeedSpec,
    TaskKind,
    answer_from_dict,
    canonical_json,
    sample_id,
)
from .errors import (
    AmbiguousInstance,
    ConfigInvalid,
    CorpusExhausted,
    DegenerateImage,
    DimensionMismatch,
    EmptyRect,
    ForgeError,
    FractionOutOfRange,
    ImageTooSmall,
    IndexOutOfRange,
    IndistinctDistractor,
    InsufficientValidDepth,
    InvalidPermutation,
    ManifestUnreadable,
    NoAsymmetricPatch,
    NoValidPair,
    NoValidRegionTriple,
    OutOfBounds,
    SampleRejected,
    Unparseable,
    UnknownSample,
)
from .rng import derive_rng, derive_stream
from .templates import FORMAT_PROMPT
from .verifier import (
    ParsedResponse,
    RewardBreakdown,
    canonicalize,
    parse_response,
    score,
    score_text,
)
from .build import (
    build_dataset,
    load_reward_index,
    read_manifest,
    read_samples,
    split_cold_start,
    verify_manifest,
)

__version__ = "0.1.0"

__all__ = [
    "AmbiguousInstance",
    "BuildConfig",
    "ConfigInvalid",
    "CorpusExhausted",
    "DEFAULT_COLD_START_FRACTION",
    "DEFAULT_SHUFFLE_MIX",
    "DEFAULT_TASK_COUNTS",
    "DegenerateImage",
    "DepthOrderAnswer",
    "DimensionMismatch",
    "EmptyRect",
    "FlipAnswer",
    "ForgeError",
    "FORMAT_PROMPT",
    "FractionOutOfRange",
    "ImageTooSmall",
    "IndexOutOfRange",
    "IndistinctDistractor",
    "InsufficientValidDepth",
    "InvalidPermutation",
    "ManifestUnreadable",
    "NoAsymmetricPatch",
    "NoValidPair",
    "NoValidRegionTriple",
    "OptionAnswer",
    "OrderingAnswer",
    "OutOfBounds",
    "ParsedResponse",
    "QASample",
    "RewardBreakdown",
    "SampleRejected",
    "SeedSpec",
    "TaskKind",
    "Unparseable",
    "UnknownSample",
    "answer_from_dict",
    "build_dataset",
    "canonical_json",
    "canonicalize",
    "derive_rng",
    "derive_stream",
    "load_reward_index",
    "parse_response",
    "read_manifest",
    "read_samples",
    "sample_id",
    "score",
    "score_text",
    "split_cold_start",
    "verify_manifest",
    "__version__",
]
