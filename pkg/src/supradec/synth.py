"""Seeded synthetic emission matrices standing in for an acoustic model.

The canonical alignment lays out ``blank_gap`` blank frames, then
``frames_per_token`` frames per target token, with blanks after every
token (adjacent repeats always get at least one separating blank).

Per aligned frame the mass splits deterministically: the dominant token
takes 1 - noise_eps - mix, its confusion partner takes mix, and
noise_eps spreads uniformly over all remaining tokens. Randomness
enters only through confusion pairs: each occurrence of a confusable
token swaps dominant and partner with probability mix, drawn from a
splitmix64 stream, so identical (inputs, seed) give a bit-identical
matrix and noise alone never flips a frame's argmax.
"""

from dataclasses import dataclass

import numpy as np

from .emissions import EmissionMatrix
from .errors import InvalidValue, TokenNotInVocab
from .rng import SplitMix64
from .vocab import BLANK_ID, Vocabulary


@dataclass(frozen=True)
class SynthParams:
    frames_per_token: int = 4
    blank_gap: int = 2
    noise_eps: float = 0.0
    confusion_pairs: tuple[tuple[str, str, float], ...] = ()
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "confusion_pairs", tuple(
            (str(a), str(b), float(m)) for a, b, m in self.confusion_pairs
        ))
        if self.frames_per_token < 2:
            raise InvalidValue("frames_per_token must be >= 2")
        if self.blank_gap < 0:
            raise InvalidValue("blank_gap must be >= 0")
        if not 0.0 <= self.noise_eps < 1.0:
            raise InvalidValue("noise_eps must be in [0, 1)")
        for a, b, mix in self.confusion_pairs:
            if a == b:
                raise InvalidValue(f"confusion pair {a!r} with itself")
            if not 0.0 <= mix <= 0.5:
                raise InvalidValue("confusion mix must be in [0, 0.5]")
            if self.noise_eps + mix > 0.9:
                raise InvalidValue(
                    "noise_eps + mix must leave a dominant peak (<= 0.9)"
                )


def synth_emissions(target_texts, vocab: Vocabulary, params: SynthParams) -> EmissionMatrix:
    """Emission matrix for a target token-text sequence.

    Rows are exactly normalized probability distributions in log space;
    with noise_eps 0 and no confusion the construction is one-hot and
    greedy decoding returns the target verbatim.
    """
    labels = vocab.encode(target_texts)
    vocab_size = vocab.size
    partner = {}
    for a, b, mix in params.confusion_pairs:
        ia = vocab.id_of(a)
        ib = vocab.id_of(b)
        if ia == BLANK_ID or ib == BLANK_ID:
            raise TokenNotInVocab("confusion pairs cannot involve the blank")
        partner[ia] = (ib, mix)

    rng = SplitMix64(params.seed)
    eps = params.noise_eps

    # frame plan: (dominant_id, minor_id | None, mix)
    plan: list[tuple[int, int | None, float]] = []

    def blank_run(n: int):
        for _ in range(n):
            plan.append((BLANK_ID, None, 0.0))

    blank_run(params.blank_gap)
    prev = None
    for tok in labels.ids:
        if prev is not None and tok == prev and params.blank_gap == 0:
            blank_run(1)  # repeats need a separating blank to survive collapse
        dom, minor, mix = tok, None, 0.0
        if tok in partner:
            ib, mix = partner[tok]
            swapped = rng.uniform() < mix
            dom, minor = (ib, tok) if swapped else (tok, ib)
        for _ in range(params.frames_per_token):
            plan.append((dom, minor, mix))
        blank_run(params.blank_gap)
        prev = tok

    probs = np.zeros((len(plan), vocab_size), dtype=np.float64)
    for t, (dom, minor, mix) in enumerate(plan):
        others = vocab_size - (1 if minor is None else 2)
        spread = eps / others if others > 0 else 0.0
        row = probs[t]
        row[:] = spread
        row[dom] = 1.0 - eps - mix
        if minor is not None:
            row[minor] = mix
    with np.errstate(divide="ignore"):
        return EmissionMatrix.from_array(np.log(probs))


# anchor syllables carry tones 1/4 and are never confusable; each one
# predicts exactly one tone-2/3 continuation, so an n-gram model can
# recover tokens the acoustic channel swapped
_BENCH_STEMS = ("ma", "li", "hua", "yan", "qi", "chen", "lin", "hai", "ping", "lan", "yu", "min")
_BENCH_ANCHORS = (
    "ba1", "da4", "ge1", "he4", "jia1", "kan4", "shan1", "tian1",
    "wan4", "xin1", "zhong1", "zuo4", "fa1", "gao1", "hui4", "kai1",
    "lu4", "mo4", "pai1", "qu4", "shu1", "tai4", "wai4", "xia4",
)


def benchmark_phrases() -> list[tuple[str, str]]:
    """(anchor, confusable) phrase pool for the LM-rescue benchmark."""
    confusables = [f"{stem}{tone}" for stem in _BENCH_STEMS for tone in (2, 3)]
    assert len(confusables) == len(_BENCH_ANCHORS)
    return list(zip(_BENCH_ANCHORS, confusables))


def make_benchmark_corpus(n_sentences: int, seed: int, phrases_per_sentence=(3, 5)) -> list[str]:
    """Pinyin sentences built from the fixed phrase pool.

    Tone-2/3 tokens appear only after their anchor, making them
    near-deterministic for a 6-gram model while staying acoustically
    confusable with their other-tone variant.
    """
    pool = benchmark_phrases()
    rng = SplitMix64(seed)
    lo, hi = phrases_per_sentence
    sentences = []
    for _ in range(n_sentences):
        count = lo + rng.randint(hi - lo + 1)
        toks: list[str] = []
        for _ in range(count):
            anchor, confusable = pool[rng.randint(len(pool))]
            toks.extend((anchor, confusable))
        sentences.append(" ".join(toks))
    return sentences
