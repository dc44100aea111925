"""Recognition-unit vocabularies and label sequences.

The blank token always occupies id 0 with the reserved text ``<blank>``
and is never listed in vocabulary files; file order gives ids 1..V-1.
"""

from dataclasses import dataclass, field

from .errors import (
    DuplicateToken,
    EmptyVocabulary,
    InvalidToken,
    TokenNotInVocab,
)

BLANK_ID = 0
BLANK_TEXT = "<blank>"

#: training-framework specials that are not recognition units
FAIRSEQ_SPECIALS = ("<s>", "</s>", "<pad>", "<unk>")

SCHEME_TAGS = frozenset(
    {
        "tone",
        "initial_final_tone",
        "syllable_tone",
        "syllable_marker",
        "pitch_accent",
        "phoneme",
        "merged",
    }
)


@dataclass(frozen=True)
class Token:
    text: str
    id: int


@dataclass(frozen=True)
class LabelSequence:
    """Collapsed token-id sequence; blank never appears here."""

    ids: tuple[int, ...]
    scheme_tag: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "ids", tuple(int(i) for i in self.ids))
        if any(i == BLANK_ID for i in self.ids):
            raise InvalidToken("label sequence must not contain the blank id")
        if any(i < 0 for i in self.ids):
            raise InvalidToken("label sequence ids must be non-negative")

    def __len__(self) -> int:
        return len(self.ids)

    def __iter__(self):
        return iter(self.ids)


def _check_scheme_tag(tag: str) -> str:
    if tag not in SCHEME_TAGS:
        raise InvalidToken(f"unknown scheme tag {tag!r}")
    return tag


@dataclass(frozen=True)
class Vocabulary:
    """Ordered token inventory with the blank reserved at id 0."""

    tokens: tuple[Token, ...]
    scheme_tag: str = "phoneme"
    blank_id: int = BLANK_ID
    _index: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        _check_scheme_tag(self.scheme_tag)
        index = {tok.text: tok.id for tok in self.tokens}
        if len(index) != len(self.tokens):
            raise DuplicateToken("token texts are not pairwise distinct")
        object.__setattr__(self, "_index", index)

    @classmethod
    def from_texts(cls, texts, scheme_tag: str = "phoneme") -> "Vocabulary":
        """Build a vocabulary from non-blank token texts, blank prepended."""
        toks = [Token(BLANK_TEXT, BLANK_ID)]
        for i, text in enumerate(texts, start=1):
            if not text or text != text.strip() or any(c.isspace() for c in text):
                raise InvalidToken(f"token text {text!r} is empty or has whitespace")
            if text == BLANK_TEXT:
                raise InvalidToken(f"{BLANK_TEXT!r} is reserved for the blank")
            toks.append(Token(text, i))
        return cls(tokens=tuple(toks), scheme_tag=scheme_tag)

    @property
    def size(self) -> int:
        return len(self.tokens)

    def non_blank_texts(self) -> list[str]:
        return [t.text for t in self.tokens[1:]]

    def __contains__(self, text: str) -> bool:
        return text in self._index

    def id_of(self, text: str) -> int:
        try:
            return self._index[text]
        except KeyError:
            raise TokenNotInVocab(f"token {text!r} not in vocabulary") from None

    def text_of(self, token_id: int) -> str:
        if not 0 <= token_id < len(self.tokens):
            raise TokenNotInVocab(f"token id {token_id} out of range")
        return self.tokens[token_id].text

    def encode(self, texts) -> LabelSequence:
        """Map token texts to a LabelSequence (blank text not allowed)."""
        ids = []
        for text in texts:
            i = self.id_of(text)
            if i == BLANK_ID:
                raise InvalidToken("blank cannot appear in a label sequence")
            ids.append(i)
        return LabelSequence(ids=tuple(ids), scheme_tag=self.scheme_tag)

    def decode(self, ids) -> list[str]:
        return [self.text_of(i) for i in ids]


def load_vocab(
    text: str,
    scheme_tag: str = "phoneme",
    strip_fairseq_specials: bool = False,
    source: str = "<vocab>",
) -> Vocabulary:
    """Parse a vocabulary file: one token per line, ``#`` comments allowed.

    The blank is prepended at id 0 and must not be listed. With
    ``strip_fairseq_specials`` the four fairseq specials are dropped.
    """
    texts: list[str] = []
    seen: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if any(c.isspace() for c in line):
            raise InvalidToken(f"{source}:{lineno}: token {line!r} contains whitespace")
        if strip_fairseq_specials and line in FAIRSEQ_SPECIALS:
            continue
        if line in seen:
            raise DuplicateToken(f"{source}:{lineno}: duplicate token {line!r}")
        if line == BLANK_TEXT:
            raise InvalidToken(f"{source}:{lineno}: {BLANK_TEXT!r} is reserved")
        seen.add(line)
        texts.append(line)
    if not texts:
        raise EmptyVocabulary(f"{source}: no tokens found")
    return Vocabulary.from_texts(texts, scheme_tag=scheme_tag)


def format_vocab(vocab: Vocabulary) -> str:
    """Serialize back to the one-token-per-line file format (blank omitted)."""
    return "\n".join(vocab.non_blank_texts()) + "\n"
