"""CTC prefix beam search with optional n-gram shallow fusion.

Hypotheses are collapsed prefixes carrying separate blank / non-blank
log-probabilities. Per frame each hypothesis is extended with the
blank, with a repeat of its last token (same prefix), and with every
token whose frame score clears the prune floor (new prefix); identical
prefixes merge by logsumexp. The language model and the token bonus
apply exactly when a token is appended, giving

    fused = log P(prefix) + lm_weight * ln(10) * lm_log10 + token_bonus * |prefix|

when a model is attached, and the bare prefix probability otherwise.
Ties rank shorter prefixes first, then lexicographic token ids. The
pruning floor applies to per-frame emission scores only, so with an
infinite beam and floor the search is exact.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .emissions import EmissionMatrix
from .errors import SupradecError, VocabularyMismatch
from .ngram import EOS, LN10, LmState, NGramModel
from .vocab import BLANK_ID, LabelSequence, Vocabulary

NEG_INF = float("-inf")


@dataclass(frozen=True)
class BeamParams:
    beam_width: int = 32
    lm_weight: float = 1.2
    token_bonus: float = 0.5
    prune_log_floor: float = -9.21  # ~ln 1e-4
    lm_eos: bool = False

    def __post_init__(self):
        if self.beam_width < 1:
            raise ValueError("beam_width must be >= 1")
        if self.lm_weight < 0:
            raise ValueError("lm_weight must be non-negative")


@dataclass(frozen=True)
class BeamHypothesis:
    """One ranked decode: prefix plus its score decomposition."""

    prefix: LabelSequence
    logp_blank: float
    logp_nonblank: float
    lm_log10: float
    fused_score: float

    @property
    def total_log_prob(self) -> float:
        return float(np.logaddexp(self.logp_blank, self.logp_nonblank))


class _Hyp:
    __slots__ = ("pb", "pnb", "lm_state", "lm_log10")

    def __init__(self, pb, pnb, lm_state, lm_log10):
        self.pb = pb
        self.pnb = pnb
        self.lm_state = lm_state
        self.lm_log10 = lm_log10


def _logaddexp(a: float, b: float) -> float:
    if a == NEG_INF:
        return b
    if b == NEG_INF:
        return a
    if a > b:
        return a + math.log1p(math.exp(b - a))
    return b + math.log1p(math.exp(a - b))


def beam_decode(
    emissions,
    params: BeamParams = BeamParams(),
    vocab: Vocabulary | None = None,
    lm: NGramModel | None = None,
) -> list[BeamHypothesis]:
    """Ranked prefix beam search over one emission matrix.

    ``vocab`` supplies token texts for LM fusion and is required when
    ``lm`` is given; when present its size must match the emission
    width. Returns surviving hypotheses sorted by fused score
    descending (ties: shorter prefix, then lexicographic ids).
    """
    if isinstance(emissions, EmissionMatrix):
        log_probs = emissions.log_probs()
    else:
        log_probs = np.asarray(emissions, dtype=np.float64)
    frames, width = log_probs.shape
    if vocab is not None and vocab.size != width:
        raise VocabularyMismatch(
            f"emissions have {width} tokens, vocabulary has {vocab.size}"
        )
    if lm is not None and vocab is None:
        raise VocabularyMismatch("shallow fusion needs a vocabulary for token texts")
    if lm is not None and params.lm_weight == 0.0 and params.token_bonus == 0.0:
        lm = None  # zero-weight fusion is exactly LM-free decoding

    alpha_ln10 = params.lm_weight * LN10
    texts = [t.text for t in vocab.tokens] if vocab is not None else None
    init_state = lm.initial_state() if lm is not None else None

    beams: dict[tuple[int, ...], _Hyp] = {
        (): _Hyp(0.0, NEG_INF, init_state, 0.0)
    }

    def fused(prefix: tuple[int, ...], hyp: _Hyp) -> float:
        total = _logaddexp(hyp.pb, hyp.pnb)
        if lm is None:
            return total
        return total + alpha_ln10 * hyp.lm_log10 + params.token_bonus * len(prefix)

    for t in range(frames):
        row = log_probs[t]
        blank_score = float(row[BLANK_ID])
        candidates = [
            int(v)
            for v in np.flatnonzero(row >= params.prune_log_floor)
            if v != BLANK_ID and row[v] != NEG_INF
        ]
        cand_scores = [float(row[v]) for v in candidates]
        next_beams: dict[tuple[int, ...], _Hyp] = {}

        for prefix, hyp in beams.items():
            total = _logaddexp(hyp.pb, hyp.pnb)
            last = prefix[-1] if prefix else None

            cur = next_beams.get(prefix)
            if cur is None:
                cur = _Hyp(NEG_INF, NEG_INF, hyp.lm_state, hyp.lm_log10)
                next_beams[prefix] = cur
            # blank keeps the prefix and moves mass to the blank part
            cur.pb = _logaddexp(cur.pb, total + blank_score)
            # repeating the last token collapses into the same prefix
            if last is not None:
                rep = float(row[last])
                if hyp.pnb != NEG_INF and rep != NEG_INF:
                    cur.pnb = _logaddexp(cur.pnb, hyp.pnb + rep)

            # appending a token starts/extends a new prefix
            for v, score in zip(candidates, cand_scores):
                base = hyp.pb if v == last else total
                if base == NEG_INF:
                    continue
                child_prefix = prefix + (v,)
                child = next_beams.get(child_prefix)
                if child is None:
                    if lm is not None:
                        lp10, new_state = lm.score_next(hyp.lm_state, texts[v])
                        child = _Hyp(NEG_INF, NEG_INF, new_state, hyp.lm_log10 + lp10)
                    else:
                        child = _Hyp(NEG_INF, NEG_INF, None, 0.0)
                    next_beams[child_prefix] = child
                child.pnb = _logaddexp(child.pnb, base + score)

        ranked = sorted(
            next_beams.items(),
            key=lambda kv: (-fused(kv[0], kv[1]), len(kv[0]), kv[0]),
        )
        beams = dict(ranked[: params.beam_width])

    if lm is not None and params.lm_eos:
        for prefix, hyp in beams.items():
            lp10, _ = lm.score_next(hyp.lm_state, EOS)
            hyp.lm_log10 += lp10

    results = [
        BeamHypothesis(
            prefix=LabelSequence(ids=prefix, scheme_tag=vocab.scheme_tag if vocab else None),
            logp_blank=hyp.pb,
            logp_nonblank=hyp.pnb,
            lm_log10=hyp.lm_log10,
            fused_score=fused(prefix, hyp),
        )
        for prefix, hyp in beams.items()
    ]
    results.sort(key=lambda h: (-h.fused_score, len(h.prefix.ids), h.prefix.ids))
    return results


def decode_batch(
    emissions_list,
    params: BeamParams = BeamParams(),
    vocab: Vocabulary | None = None,
    lm: NGramModel | None = None,
    jobs: int = 1,
) -> list[list[BeamHypothesis]]:
    """Decode many utterances; output order always matches input order.

    Results are identical for every worker count. The first failing
    item (by input index) is re-raised with that index attached.
    """
    items = list(emissions_list)
    if not items:
        return []

    def run(ix_em):
        ix, em = ix_em
        try:
            return ix, beam_decode(em, params=params, vocab=vocab, lm=lm), None
        except Exception as exc:  # noqa: BLE001 - collected, first re-raised
            return ix, None, exc

    if jobs <= 1:
        outcomes = [run(pair) for pair in enumerate(items)]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(run, enumerate(items)))

    outcomes.sort(key=lambda o: o[0])
    for ix, _, exc in outcomes:
        if exc is not None:
            if isinstance(exc, SupradecError):
                raise type(exc)(f"utterance {ix}: {exc}") from exc
            raise exc
    return [res for _, res, _ in outcomes]
