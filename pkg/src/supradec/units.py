"""Suprasegmental target pipelines beyond pinyin.

Covers the TIMIT phone -> syllable-marker targets, vocabulary merging
for language-blind multitask decoding, and the frame-to-word mapping
for pitch accents.
"""

from dataclasses import dataclass

from .errors import InvalidToken, SpanOutOfRange, TokenCollision, UnknownPhone
from .vocab import Vocabulary

SYLLABLE_MARKER = "S"

#: the 61-symbol TIMIT transcription inventory
TIMIT_PHONES = frozenset(
    """
    iy ih eh ey ae aa aw ay ah ao oy ow uh uw ux er ax ix axr ax-h
    l r w y hh hv el
    m n ng em en eng nx
    s sh z zh f th v dh
    jh ch
    b d g p t k dx q
    bcl dcl gcl pcl tcl kcl h# pau epi
    """.split()
)

#: vowel-class symbols: vowels and diphthongs plus syllabic consonants,
#: each of which carries a syllable nucleus
DEFAULT_VOWEL_SET = frozenset(
    """
    iy ih eh ey ae aa aw ay ah ao oy ow uh uw ux er ax ix axr ax-h
    el em en eng
    """.split()
)


def load_vowel_set(text: str) -> frozenset:
    """Read an override vowel set: whitespace-separated symbols, # comments."""
    symbols = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            symbols.extend(line.split())
    return frozenset(symbols)


def timit_to_syllable_targets(phones, vowel_set=None) -> list[str]:
    """One syllable marker per vowel-class phone; everything else dropped.

    ``phones`` is a whitespace-joined string or a symbol sequence;
    symbols outside the TIMIT inventory raise ``UnknownPhone``.
    """
    if isinstance(phones, str):
        phones = phones.split()
    vowels = DEFAULT_VOWEL_SET if vowel_set is None else vowel_set
    targets = []
    for phone in phones:
        if phone not in TIMIT_PHONES:
            raise UnknownPhone(f"phone {phone!r} not in the TIMIT inventory")
        if phone in vowels:
            targets.append(SYLLABLE_MARKER)
    return targets


def merge_vocabularies(
    a: Vocabulary, b: Vocabulary, allow_shared: bool = False
) -> Vocabulary:
    """Union vocabulary for language-blind decoding: a's order, then b's
    novel tokens. Shared texts are an error unless ``allow_shared``.
    """
    a_texts = a.non_blank_texts()
    b_texts = b.non_blank_texts()
    shared = sorted(set(a_texts) & set(b_texts))
    if shared and not allow_shared:
        raise TokenCollision(f"token texts present in both vocabularies: {shared}")
    merged = list(a_texts)
    seen = set(a_texts)
    for text in b_texts:
        if text not in seen:
            merged.append(text)
            seen.add(text)
    return Vocabulary.from_texts(merged, scheme_tag="merged")


@dataclass(frozen=True)
class WordSpan:
    """Word with inclusive-exclusive frame boundaries."""

    word: str
    start_frame: int
    end_frame: int
    accent_ref: bool | None = None

    def __post_init__(self):
        if self.start_frame < 0 or self.start_frame >= self.end_frame:
            raise SpanOutOfRange(
                f"bad span [{self.start_frame}, {self.end_frame}) for {self.word!r}"
            )


def parse_word_spans(text: str, source: str = "<spans>") -> list[WordSpan]:
    """Parse TSV spans: ``word<TAB>start<TAB>end[<TAB>ref 0/1]``.

    Spans must be sorted and non-overlapping within the utterance.
    """
    spans: list[WordSpan] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) not in (3, 4):
            raise InvalidToken(f"{source}:{lineno}: expected 3 or 4 tab-separated fields")
        try:
            start, end = int(fields[1]), int(fields[2])
        except ValueError as exc:
            raise InvalidToken(f"{source}:{lineno}: non-integer frame index") from exc
        ref = None
        if len(fields) == 4:
            if fields[3] not in ("0", "1"):
                raise InvalidToken(f"{source}:{lineno}: ref accent must be 0 or 1")
            ref = fields[3] == "1"
        span = WordSpan(word=fields[0], start_frame=start, end_frame=end, accent_ref=ref)
        if spans and span.start_frame < spans[-1].end_frame:
            raise SpanOutOfRange(
                f"{source}:{lineno}: span overlaps or precedes the previous one"
            )
        spans.append(span)
    return spans


def word_pitch_accents(frame_path, spans, accent_token_id: int) -> list[bool]:
    """A word bears a pitch accent iff any frame in its span emits the
    accent token."""
    frames = len(frame_path)
    flags = []
    for span in spans:
        if span.end_frame > frames:
            raise SpanOutOfRange(
                f"span [{span.start_frame}, {span.end_frame}) exceeds {frames} frames"
            )
        flags.append(
            any(
                frame_path[t] == accent_token_id
                for t in range(span.start_frame, span.end_frame)
            )
        )
    return flags
