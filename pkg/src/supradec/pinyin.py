"""Mandarin pinyin decomposition and recognition-unit schemes.

Toneless syllables split into (initial, final) following common ASR
lexicon conventions: the marker ``ii`` stands in for a zero initial
("ye" -> ii + ie), and the u-umlaut vowel is written ``v`` ("quan" ->
q + van, "lv" stays l + v). The built-in table covers the standard
syllable inventory; unknown syllables are an error, never a guess.

Unit schemes render parsed syllables three ways:

* ``tone``               one ``T<k>`` token per syllable
* ``initial_final_tone`` initial token plus ``<final><k>`` token
* ``syllable_tone``      one ``<syllable><k>`` token

and ``project_to_tones`` maps any of them back to bare tones by
dropping initials and reading the trailing tone digit.
"""

from dataclasses import dataclass

from .errors import MalformedToken, NoToneDigit, UnknownSyllable

ZERO_INITIAL = "ii"

INITIALS = (
    "b", "p", "m", "f", "d", "t", "n", "l", "g", "k", "h",
    "j", "q", "x", "zh", "ch", "sh", "r", "z", "c", "s",
)

INITIAL_SET = frozenset(INITIALS) | {ZERO_INITIAL}

SCHEMES = ("tone", "initial_final_tone", "syllable_tone")

# attested finals per consonant initial (u-umlaut written v)
_FINALS_BY_INITIAL = {
    "b": "a o ai ei ao an en ang eng i ie iao ian in ing u",
    "p": "a o ai ei ao ou an en ang eng i ie iao ian in ing u",
    "m": "a o e ai ei ao ou an en ang eng i ie iao iu ian in ing u",
    "f": "a o ei ou an en ang eng u",
    "d": "a e ai ei ao ou an en ang eng ong i ia ie iao iu ian ing u uo ui uan un",
    "t": "a e ai ao ou an ang eng ong i ie iao ian ing u uo ui uan un",
    "n": "a e ai ei ao ou an en ang eng ong i ie iao iu ian in iang ing u uo uan v ve",
    "l": "a e ai ei ao ou an ang eng ong i ia ie iao iu ian in iang ing u uo uan un v ve",
    "g": "a e ai ei ao ou an en ang eng ong u ua uai uan uang ui un uo",
    "k": "a e ai ei ao ou an en ang eng ong u ua uai uan uang ui un uo",
    "h": "a e ai ei ao ou an en ang eng ong u ua uai uan uang ui un uo",
    "j": "i ia ie iao iu ian in iang ing iong v ve van vn",
    "q": "i ia ie iao iu ian in iang ing iong v ve van vn",
    "x": "i ia ie iao iu ian in iang ing iong v ve van vn",
    "zh": "a e i ai ao ou an en ang eng ong u ua uai uan uang ui un uo",
    "ch": "a e i ai ao ou an en ang eng ong u uai uan uang ui un uo",
    "sh": "a e i ai ei ao ou an en ang eng u ua uai uan uang ui un uo",
    "r": "e i ao ou an en ang eng ong u uan ui un uo",
    "z": "a e i ai ei ao ou an en ang eng ong u uan ui un uo",
    "c": "a e i ai ao ou an en ang eng ong u uan ui un uo",
    "s": "a e i ai ao ou an en ang eng ong u uan ui un uo",
}

# zero-initial surfaces mapped to their underlying finals
_ZERO_SURFACES = {
    "yi": "i", "ya": "ia", "ye": "ie", "yao": "iao", "you": "iu",
    "yan": "ian", "yin": "in", "yang": "iang", "ying": "ing",
    "yo": "io", "yong": "iong",
    "yu": "v", "yue": "ve", "yuan": "van", "yun": "vn",
    "wu": "u", "wa": "ua", "wo": "uo", "wai": "uai", "wei": "ui",
    "wan": "uan", "wen": "un", "wang": "uang", "weng": "ueng",
    "a": "a", "o": "o", "e": "e", "ai": "ai", "ei": "ei", "ao": "ao",
    "ou": "ou", "an": "an", "en": "en", "ang": "ang", "eng": "eng",
    "er": "er",
}

# written form of j/q/x + u-umlaut finals drops the diaeresis
_JQX_SPELLING = {"v": "u", "ve": "ue", "van": "uan", "vn": "un"}


def _spell(initial: str, final: str) -> str:
    if initial in ("j", "q", "x") and final in _JQX_SPELLING:
        return initial + _JQX_SPELLING[final]
    return initial + final


def _build_table() -> dict[str, tuple[str, str]]:
    table: dict[str, tuple[str, str]] = {}
    for initial, finals in _FINALS_BY_INITIAL.items():
        for final in finals.split():
            table[_spell(initial, final)] = (initial, final)
    for surface, final in _ZERO_SURFACES.items():
        table[surface] = (ZERO_INITIAL, final)
    return table


#: toneless surface syllable -> (initial, final)
DECOMPOSITION_TABLE = _build_table()

#: (initial, final) -> toneless surface syllable
RECOMPOSITION_TABLE = {v: k for k, v in DECOMPOSITION_TABLE.items()}

assert len(RECOMPOSITION_TABLE) == len(DECOMPOSITION_TABLE)


def load_decomposition_table(text: str, source: str = "<table>") -> dict[str, tuple[str, str]]:
    """Parse a TSV override table: ``syllable<TAB>initial<TAB>final``."""
    table: dict[str, tuple[str, str]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 3:
            raise MalformedToken(f"{source}:{lineno}: expected 3 tab-separated fields")
        table[fields[0]] = (fields[1], fields[2])
    return table


@dataclass(frozen=True)
class PinyinSyllable:
    initial: str  # consonant initial or the zero-initial marker "ii"
    final: str
    tone: int

    def __post_init__(self):
        if not 1 <= self.tone <= 5:
            raise NoToneDigit(f"tone must be 1..5, got {self.tone}")

    @property
    def surface(self) -> str:
        """Toneless written form recovered through the inverse table."""
        try:
            return RECOMPOSITION_TABLE[(self.initial, self.final)]
        except KeyError:
            raise UnknownSyllable(
                f"no syllable spells ({self.initial}, {self.final})"
            ) from None


def parse_pinyin(syllable_text: str, table: dict | None = None) -> PinyinSyllable:
    """Split e.g. ``quan2`` into (q, van, 2); the tone digit is required."""
    if not syllable_text or not syllable_text[-1].isdigit():
        raise NoToneDigit(f"missing trailing tone digit in {syllable_text!r}")
    tone = int(syllable_text[-1])
    if not 1 <= tone <= 5:
        raise NoToneDigit(f"tone digit must be 1..5 in {syllable_text!r}")
    base = syllable_text[:-1]
    lookup = DECOMPOSITION_TABLE if table is None else table
    if base not in lookup:
        raise UnknownSyllable(f"syllable {base!r} not in the decomposition table")
    initial, final = lookup[base]
    return PinyinSyllable(initial=initial, final=final, tone=tone)


def parse_pinyin_sentence(text: str, table: dict | None = None) -> list[PinyinSyllable]:
    return [parse_pinyin(tok, table=table) for tok in text.split()]


def to_unit_scheme(syllables, scheme: str, table: dict | None = None) -> list[str]:
    """Render parsed syllables as recognition-unit token texts.

    With an override ``table`` the tonal-syllable surfaces recompose
    through that table's inverse instead of the built-in one.
    """
    if scheme not in SCHEMES:
        raise ValueError(f"unknown unit scheme {scheme!r}")
    inverse = None if table is None else {v: k for k, v in table.items()}
    units: list[str] = []
    for syl in syllables:
        if scheme == "tone":
            units.append(f"T{syl.tone}")
        elif scheme == "initial_final_tone":
            units.append(syl.initial)
            units.append(f"{syl.final}{syl.tone}")
        elif inverse is not None:
            try:
                surface = inverse[(syl.initial, syl.final)]
            except KeyError:
                raise UnknownSyllable(
                    f"no syllable spells ({syl.initial}, {syl.final})"
                ) from None
            units.append(f"{surface}{syl.tone}")
        else:
            units.append(f"{syl.surface}{syl.tone}")
    return units


def project_to_tones(tokens, scheme: str) -> list[str]:
    """Discard segmental information, keeping one tone token per syllable.

    Initials are dropped; tonal finals and tonal syllables become
    ``T<k>`` via their trailing digit; tone tokens pass through.
    """
    if scheme not in SCHEMES:
        raise ValueError(f"unknown unit scheme {scheme!r}")
    if scheme == "tone":
        return list(tokens)
    tones: list[str] = []
    for tok in tokens:
        if scheme == "initial_final_tone" and tok in INITIAL_SET:
            continue
        if not tok or not tok[-1].isdigit():
            raise MalformedToken(f"token {tok!r} has no trailing tone digit")
        tones.append(f"T{tok[-1]}")
    return tones
