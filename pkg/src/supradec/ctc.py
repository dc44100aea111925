"""CTC alignment semantics over emission matrices.

The collapse rule (merge adjacent repeats, then drop blanks) defines
which frame paths realize a label sequence. ``ctc_loss`` sums all such
paths exactly with a log-space forward recursion and, on request,
returns the analytic gradient of -log P with respect to the raw
per-frame log-scores. ``brute_force_posterior`` enumerates every path
and serves as the independent oracle for both.

Scores need not be normalized: the path sum is well defined for raw
log-scores, which also makes finite-difference checks of the gradient
well posed.
"""

import itertools
from dataclasses import dataclass

import numpy as np

from .emissions import EmissionMatrix
from .errors import BlankInTarget, InstanceTooLarge, TargetTooLong, TokenNotInVocab
from .vocab import BLANK_ID, LabelSequence

NEG_INF = float("-inf")

# V**T enumeration caps for the brute-force oracle
MAX_BRUTE_VOCAB = 5
MAX_BRUTE_FRAMES = 8


@dataclass(frozen=True)
class CtcResult:
    """Loss value and optional gradient d(-log P)/d(log-score)."""

    log_prob: float
    grad: np.ndarray | None = None


def _as_log_probs(emissions) -> np.ndarray:
    if isinstance(emissions, EmissionMatrix):
        return emissions.log_probs()
    arr = np.asarray(emissions, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError("emissions must be a (T, V) array")
    return arr


def _target_ids(target) -> list[int]:
    if isinstance(target, LabelSequence):
        return list(target.ids)
    return [int(t) for t in target]


def collapse(path, blank_id: int = BLANK_ID) -> LabelSequence:
    """Merge adjacent repeats, then remove blanks."""
    out: list[int] = []
    prev = None
    for tok in path:
        tok = int(tok)
        if tok != prev:
            if tok != blank_id:
                out.append(tok)
            prev = tok
    return LabelSequence(ids=tuple(out))


def min_frames(target_ids) -> int:
    """Fewest frames that can realize the target (repeats need a blank)."""
    ids = list(target_ids)
    repeats = sum(1 for a, b in zip(ids, ids[1:]) if a == b)
    return len(ids) + repeats


def extended_target(target_ids) -> np.ndarray:
    """Interleave blanks around the target: blank, y1, blank, ..., blank."""
    ids = list(target_ids)
    ext = np.full(2 * len(ids) + 1, BLANK_ID, dtype=np.int64)
    ext[1::2] = ids
    return ext


def ctc_loss(emissions, target, want_grad: bool = False) -> CtcResult:
    """Exact log P(target | emissions) over all collapsing frame paths.

    Runs the standard alpha recursion over the blank-extended target in
    log space. With ``want_grad`` the beta recursion is added and the
    gradient of -log P with respect to each raw log-score is returned
    (the posterior occupancy, negated); no softmax coupling is assumed.

    Raises ``TargetTooLong`` when the frame count cannot realize the
    target and ``BlankInTarget`` when the target contains the blank id.
    """
    log_probs = _as_log_probs(emissions)
    frames, vocab = log_probs.shape
    ids = _target_ids(target)
    if any(i == BLANK_ID for i in ids):
        raise BlankInTarget("target contains the blank id")
    if any(not 0 <= i < vocab for i in ids):
        raise TokenNotInVocab("target id outside emission vocabulary")
    if frames < min_frames(ids):
        raise TargetTooLong(
            f"{len(ids)} labels (min {min_frames(ids)} frames) cannot fit in {frames} frames"
        )

    ext = extended_target(ids)
    states = len(ext)
    # em[t, s] = log-score of state s's token at frame t
    em = log_probs[:, ext]

    # skip transition s-2 -> s allowed into non-blank states whose token
    # differs from the one two states back
    skip = np.zeros(states, dtype=bool)
    if states > 2:
        skip[2:] = (ext[2:] != BLANK_ID) & (ext[2:] != ext[:-2])

    alpha = np.full((frames, states), NEG_INF)
    alpha[0, 0] = em[0, 0]
    if states > 1:
        alpha[0, 1] = em[0, 1]
    for t in range(1, frames):
        prev = alpha[t - 1]
        stay = prev
        step = np.concatenate(([NEG_INF], prev[:-1]))
        jump = np.full(states, NEG_INF)
        if states > 2:
            jump[2:] = np.where(skip[2:], prev[:-2], NEG_INF)
        alpha[t] = np.logaddexp(np.logaddexp(stay, step), jump) + em[t]

    if states == 1:
        log_prob = float(alpha[-1, 0])
    else:
        log_prob = float(np.logaddexp(alpha[-1, -1], alpha[-1, -2]))

    if not want_grad:
        return CtcResult(log_prob=log_prob)

    if log_prob == NEG_INF:
        # target unreachable (hard-masked emissions): posterior undefined,
        # return a zero gradient rather than NaNs
        return CtcResult(log_prob=log_prob, grad=np.zeros_like(log_probs))

    beta = np.full((frames, states), NEG_INF)
    beta[-1, -1] = 0.0
    if states > 1:
        beta[-1, -2] = 0.0
    for t in range(frames - 2, -1, -1):
        nxt = beta[t + 1] + em[t + 1]
        stay = nxt
        step = np.concatenate((nxt[1:], [NEG_INF]))
        jump = np.full(states, NEG_INF)
        if states > 2:
            jump[:-2] = np.where(skip[2:], nxt[2:], NEG_INF)
        beta[t] = np.logaddexp(np.logaddexp(stay, step), jump)

    with np.errstate(under="ignore"):
        occupancy = np.exp(alpha + beta - log_prob)  # (T, S)
    grad = np.zeros_like(log_probs)
    for s in range(states):
        grad[:, ext[s]] -= occupancy[:, s]
    return CtcResult(log_prob=log_prob, grad=grad)


def greedy_decode(emissions) -> tuple[LabelSequence, list[int]]:
    """Per-frame argmax (ties to the lowest id) plus its collapse.

    Returns ``(labels, frame_path)``; the frame path feeds the
    frame-to-word pitch-accent mapping.
    """
    log_probs = _as_log_probs(emissions)
    frame_path = [int(v) for v in np.argmax(log_probs, axis=1)]
    return collapse(frame_path), frame_path


def brute_force_posterior(emissions) -> dict[tuple[int, ...], float]:
    """Enumerate all V**T paths and accumulate collapsed-output mass.

    Only valid for tiny instances (V <= 5, T <= 8); the result maps the
    collapsed id tuple to its total path probability. For normalized
    emissions the values partition the total probability mass.
    """
    log_probs = _as_log_probs(emissions)
    frames, vocab = log_probs.shape
    if vocab > MAX_BRUTE_VOCAB or frames > MAX_BRUTE_FRAMES:
        raise InstanceTooLarge(
            f"{frames} frames x {vocab} tokens exceeds the enumeration cap"
        )
    rows = [list(map(float, row)) for row in log_probs]
    posterior: dict[tuple[int, ...], float] = {}
    for path in itertools.product(range(vocab), repeat=frames):
        score = 0.0
        for t in range(frames):
            score += rows[t][path[t]]
        if score == NEG_INF:
            continue  # masked path carries no mass
        key = tuple(collapse(path).ids)
        posterior[key] = posterior.get(key, 0.0) + float(np.exp(score))
    return posterior
