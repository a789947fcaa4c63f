"""Exception hierarchy for the forge.

Two broad families:

* hard errors: bad arguments, broken configs, unreadable manifests.  These
  mean the caller did something wrong and should propagate.
* per-sample rejections: an individual (image, seed) draw failed an
  eligibility or well-formedness check.  The build loop catches these,
  records the rejection, and retries with the next seed index / image.
"""


class ForgeError(Exception):
    """Base class for everything raised by this package."""


# ---------------------------------------------------------------------------
# hard errors


class DimensionMismatch(ForgeError):
    """Array shapes disagree with what the operation requires."""


class InvalidPermutation(ForgeError):
    """Sequence is not a permutation of 0..n-1."""


class IndexOutOfRange(ForgeError):
    """A slot / patch index is outside the valid range."""


class OutOfBounds(ForgeError):
    """A rectangle or point lies outside the image."""


class EmptyRect(ForgeError):
    """A rectangle with zero area where a non-empty one is required."""


class ConfigInvalid(ForgeError):
    """Build configuration failed validation."""


class FractionOutOfRange(ForgeError):
    """Split fraction must lie in [0, 1]."""


class ManifestUnreadable(ForgeError):
    """Manifest file is missing, truncated, or fails an audit."""


class UnknownSample(ForgeError):
    """Sample id not present in the loaded manifest."""


class CorpusExhausted(ForgeError):
    """Every image in the corpus was tried and rejected for a task."""


class Unparseable(ForgeError):
    """Answer text does not match the task's answer grammar.

    The scorer treats this as r_acc = 0; it never propagates out of score().
    """


# ---------------------------------------------------------------------------
# per-sample rejections (caught by the build loop)


class SampleRejected(ForgeError):
    """Base class for per-sample eligibility failures."""


class ImageTooSmall(SampleRejected):
    """Image below the minimum height/width gate."""


class DegenerateImage(SampleRejected):
    """Image is too flat (global pixel std below threshold)."""


class NoAsymmetricPatch(SampleRejected):
    """No patch passed the flip asymmetry filter."""


class IndistinctDistractor(SampleRejected):
    """Could not produce four pairwise-distinct answer options."""


class NoValidRegionTriple(SampleRejected):
    """Depth region sampling ran out of attempts."""


class NoValidPair(SampleRejected):
    """Point-pair sampling ran out of attempts."""


class AmbiguousInstance(SampleRejected):
    """Relation is below threshold on both axes; single draw discarded."""


class InsufficientValidDepth(SampleRejected):
    """Depth map has too few valid pixels to normalize."""
