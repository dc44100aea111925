"""Exception types shared across the toolkit.

Data/format problems raise a subclass of :class:`SupradecError`; the CLI
maps these to exit code 2.
"""


class SupradecError(Exception):
    """Base class for every toolkit error."""


# vocabulary files
class EmptyVocabulary(SupradecError):
    pass


class DuplicateToken(SupradecError):
    pass


class InvalidToken(SupradecError):
    pass


class TokenNotInVocab(SupradecError):
    pass


# emission matrices
class FormatError(SupradecError):
    pass


class TruncatedPayload(SupradecError):
    pass


class EmptyMatrix(SupradecError):
    pass


class InvalidValue(SupradecError):
    pass


# CTC
class TargetTooLong(SupradecError):
    pass


class BlankInTarget(SupradecError):
    pass


class InstanceTooLarge(SupradecError):
    pass


# language models
class CountMismatch(SupradecError):
    pass


class EmptyCorpus(SupradecError):
    pass


class InvalidOrder(SupradecError):
    pass


# beam decoding
class VocabularyMismatch(SupradecError):
    pass


# unit pipelines
class UnknownPhone(SupradecError):
    pass


class NoToneDigit(SupradecError):
    pass


class UnknownSyllable(SupradecError):
    pass


class TokenCollision(SupradecError):
    pass


class MalformedToken(SupradecError):
    pass


class SpanOutOfRange(SupradecError):
    pass


# metrics
class EmptyReference(SupradecError):
    pass


class DegenerateVariance(SupradecError):
    pass


class LengthMismatch(SupradecError):
    pass
