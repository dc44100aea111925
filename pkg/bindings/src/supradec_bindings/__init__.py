"""In-process numeric bindings for the supradec decoder.

Training stacks hand over a (T, V) array of natural-log scores and get
the CTC loss, its gradient, or ranked beam hypotheses back. Arrays are
shared with the decoder, never copied element by element: a float64
C-contiguous array crosses the boundary as-is (float32 input is upcast
once, vectorized). Handles are immutable and safe to share across
threads; core error types propagate unchanged.
"""

from dataclasses import dataclass

import numpy as np

from supradec import BeamParams, NGramModel, Vocabulary
from supradec import beam_decode as _core_beam_decode
from supradec import ctc_loss as _core_ctc_loss
from supradec import load_vocab as _core_load_vocab
from supradec import parse_arpa as _core_parse_arpa

__version__ = "0.1.0"

__all__ = ["BoundHandle", "load_vocab", "load_lm", "loss", "decode"]


@dataclass(frozen=True)
class BoundHandle:
    """Loaded vocabulary plus an optional language model."""

    vocab: Vocabulary
    lm: NGramModel | None = None


def load_vocab(path, scheme_tag: str = "phoneme", strip_fairseq_specials: bool = False) -> BoundHandle:
    """Read a vocabulary file into a fresh handle."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    vocab = _core_load_vocab(
        text,
        scheme_tag=scheme_tag,
        strip_fairseq_specials=strip_fairseq_specials,
        source=str(path),
    )
    return BoundHandle(vocab=vocab)


def load_lm(handle: BoundHandle, path) -> BoundHandle:
    """Attach an ARPA model, returning a new handle; the old one stays valid."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    return BoundHandle(vocab=handle.vocab, lm=_core_parse_arpa(text, source=str(path)))


def _as_scores(emissions) -> np.ndarray:
    arr = np.asarray(emissions)
    if arr.ndim != 2:
        raise ValueError("emissions must be a (frames, vocab) array")
    # float64 C-contiguous input is passed through without a copy
    return np.ascontiguousarray(arr, dtype=np.float64)


def loss(handle: BoundHandle, emissions, target_texts, want_grad: bool = False):
    """CTC loss of a token-text target; optionally its gradient.

    Returns ``(log_prob, grad_or_none)`` exactly as the core loss
    computes them on the same array.
    """
    scores = _as_scores(emissions)
    target = handle.vocab.encode(target_texts)
    result = _core_ctc_loss(scores, target, want_grad=want_grad)
    return result.log_prob, result.grad


def decode(
    handle: BoundHandle,
    emissions,
    beam_width: int = 32,
    lm_weight: float = 1.2,
    token_bonus: float = 0.5,
    prune_log_floor: float = -9.21,
    lm_eos: bool = False,
) -> list[tuple[list[str], float]]:
    """Ranked beam search; token ids come back rendered as texts."""
    scores = _as_scores(emissions)
    params = BeamParams(
        beam_width=beam_width,
        lm_weight=lm_weight,
        token_bonus=token_bonus,
        prune_log_floor=prune_log_floor,
        lm_eos=lm_eos,
    )
    hyps = _core_beam_decode(scores, params=params, vocab=handle.vocab, lm=handle.lm)
    return [(handle.vocab.decode(h.prefix.ids), h.fused_score) for h in hyps]
