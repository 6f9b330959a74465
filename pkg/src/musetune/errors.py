"""Exception hierarchy shared across the toolkit."""


class MusetuneError(Exception):
    """Base class for every error raised by this package."""


# -- audio decoding / cropping

class UnsupportedFormatError(MusetuneError):
    """Input is not a WAV container, or uses an unsupported encoding."""


class CorruptAudioError(MusetuneError):
    """WAV payload is truncated or internally inconsistent."""


class EmptyTrackError(MusetuneError):
    """Zero-length audio where a non-empty track is required."""


# -- music-feature estimation

class InsufficientAudioError(MusetuneError):
    """Clip is too short for the requested estimator."""


class NoPeriodicityError(MusetuneError):
    """Onset envelope carries no periodic structure (e.g. silence)."""


class AtonalError(MusetuneError):
    """No key profile correlates above the configured floor."""


# -- embedding pooling

class EmptyInputError(MusetuneError):
    """Embedding matrix has no frames."""


# -- corpus ingestion

class MissingAudioError(MusetuneError):
    """A track record points at an audio file that does not exist."""


class MalformedAnnotationError(MusetuneError):
    """An annotation row could not be parsed."""


class NotEnoughTracksError(MusetuneError):
    """Split rule requests more test tracks than the corpus holds."""


# -- instruction generation

class EndpointError(MusetuneError):
    """Chat-completion endpoint failed after all retries."""


class ReplyParseError(MusetuneError):
    """A generator reply block violates the Q/A output grammar."""


class TemplateError(MusetuneError):
    """Prompt template is missing its metadata placeholder."""


# -- metrics

class KeyParseError(MusetuneError):
    """Free-form answer contains no recognizable tonic."""


class EmbedderError(MusetuneError):
    """Text embedder failed to produce a vector."""


# -- studies and the eval service

class InsufficientOutputsError(MusetuneError):
    """Not enough model outputs to build the requested study."""


class ValidationError(MusetuneError):
    """Study definition violates an item invariant."""


class UnknownStudyError(MusetuneError):
    """Study id not present in the store."""


class DuplicateJudgmentError(MusetuneError):
    """Rater already judged this item."""


class DomainError(MusetuneError):
    """Judgment value outside the domain of its item kind."""


class OrphanJudgmentError(MusetuneError):
    """Judgment references an item that is not part of the study."""
