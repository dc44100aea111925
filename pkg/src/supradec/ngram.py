"""Backoff n-gram language models over recognition-unit texts.

Probabilities and backoff weights are log10 (the ARPA convention);
the beam decoder converts to natural log once, at fusion time.

Training uses interpolated Kneser-Ney with a single fixed discount at
every order. Sentences are padded with one ``<s>`` and one ``</s>``;
``<s>`` is never predicted (its unigram is pinned at -99) while
``</s>`` always is. Lower orders use continuation counts except for
n-grams starting with ``<s>``, which cannot be extended to the left and
keep their raw counts. ``<unk>`` receives the leftover unigram mass,
floored at 1e-7.
"""

import math
from dataclasses import dataclass

from .errors import CountMismatch, EmptyCorpus, FormatError, InvalidOrder, InvalidToken

BOS = "<s>"
EOS = "</s>"
UNK = "<unk>"

KN_DISCOUNT = 0.75
UNK_FLOOR = 1e-7
BOS_LOG10 = -99.0
LN10 = math.log(10.0)


@dataclass(frozen=True)
class LmState:
    """Scoring context: the last (order - 1) predicted token texts."""

    history: tuple[str, ...] = ()


class NGramModel:
    """Immutable backoff model: per-order log10 probs plus backoffs."""

    def __init__(
        self,
        order: int,
        probs: dict[tuple[str, ...], float],
        backoffs: dict[tuple[str, ...], float],
    ):
        if order < 1:
            raise InvalidOrder(f"order must be >= 1, got {order}")
        self.order = order
        self._probs = dict(probs)
        self._backoffs = dict(backoffs)
        self.vocab_texts = sorted(g[0] for g in self._probs if len(g) == 1)
        self._unigram_texts = set(self.vocab_texts)

    def counts(self) -> dict[int, int]:
        out = {k: 0 for k in range(1, self.order + 1)}
        for gram in self._probs:
            out[len(gram)] += 1
        return out

    def entries(self, order: int):
        return [
            (g, self._probs[g], self._backoffs.get(g))
            for g in sorted(g for g in self._probs if len(g) == order)
        ]

    def prob(self, gram: tuple[str, ...]) -> float | None:
        return self._probs.get(gram)

    def backoff(self, gram: tuple[str, ...]) -> float:
        return self._backoffs.get(gram, 0.0)

    def initial_state(self) -> LmState:
        return LmState(history=(BOS,) if self.order > 1 else ())

    def score_next(self, state: LmState, token_text: str) -> tuple[float, LmState]:
        """Longest-match backoff score of one token; unknowns become <unk>.

        Returns the log10 probability and the successor state (history
        plus the predicted token, truncated to order - 1). Unknown
        tokens enter the history as <unk> so later contexts stay inside
        the model's vocabulary.
        """
        w = token_text if token_text in self._unigram_texts else UNK
        hist = state.history[-(self.order - 1):] if self.order > 1 else ()
        score = 0.0
        while True:
            hit = self._probs.get(hist + (w,))
            if hit is not None:
                score += hit
                break
            if hist:
                score += self._backoffs.get(hist, 0.0)
                hist = hist[1:]
            else:
                # no unigram for <unk> either (hand-written model):
                # fall back to a hard floor instead of erroring
                score += BOS_LOG10
                break
        if self.order > 1:
            new_hist = (state.history + (w,))[-(self.order - 1):]
        else:
            new_hist = ()
        return score, LmState(history=new_hist)

    def score_sentence(
        self, tokens, bos: bool = True, eos: bool = True
    ) -> float:
        """Total log10 score of a token sequence via repeated score_next."""
        state = self.initial_state() if bos else LmState()
        total = 0.0
        for tok in tokens:
            lp, state = self.score_next(state, tok)
            total += lp
        if eos:
            lp, state = self.score_next(state, EOS)
            total += lp
        return total

    def perplexity(self, sentences) -> float:
        """10 ** (-avg log10 per event) over tokens plus one </s> each."""
        total = 0.0
        events = 0
        for sent in sentences:
            toks = sent.split() if isinstance(sent, str) else list(sent)
            total += self.score_sentence(toks)
            events += len(toks) + 1
        if events == 0:
            raise EmptyCorpus("no events to evaluate")
        return 10.0 ** (-total / events)


def _normalize_corpus(corpus) -> list[list[str]]:
    sents = []
    for sent in corpus:
        toks = sent.split() if isinstance(sent, str) else [str(t) for t in sent]
        for t in toks:
            if t in (BOS, EOS, UNK):
                raise InvalidToken(f"reserved token {t!r} in training corpus")
        sents.append(toks)
    if not sents:
        raise EmptyCorpus("training corpus is empty")
    return sents


def train_ngram(corpus, order: int) -> NGramModel:
    """Interpolated Kneser-Ney estimation with fixed discount 0.75.

    ``corpus`` holds sentences as strings (whitespace tokenized) or
    token lists. The result serializes to ARPA and parses back to an
    equivalent model.
    """
    if order < 1:
        raise InvalidOrder(f"order must be >= 1, got {order}")
    sents = _normalize_corpus(corpus)
    D = KN_DISCOUNT

    # raw counts per order over <s> ... </s> padded sentences
    raw: list[dict[tuple[str, ...], int]] = [dict() for _ in range(order + 1)]
    for toks in sents:
        padded = [BOS] + toks + [EOS]
        for k in range(1, order + 1):
            counts = raw[k]
            for i in range(len(padded) - k + 1):
                g = tuple(padded[i : i + k])
                counts[g] = counts.get(g, 0) + 1

    # continuation counts: distinct left extensions seen at order k+1
    cont: list[dict[tuple[str, ...], int]] = [dict() for _ in range(order)]
    for k in range(1, order):
        counts = cont[k]
        for g in raw[k + 1]:
            suffix = g[1:]
            counts[suffix] = counts.get(suffix, 0) + 1

    def pseudo_count(k: int, gram: tuple[str, ...]) -> int:
        if k == order or gram[0] == BOS:
            return raw[k][gram]
        return cont[k][gram]

    # predicted vocabulary: every seen type except <s>, plus <unk>
    seen = sorted(t for (t,) in raw[1] if t != BOS)
    v_pred = seen + [UNK]

    # unigram distribution
    uni_c = {
        w: (raw[1][(w,)] if order == 1 else cont[1].get((w,), 0)) for w in seen
    }
    total = sum(uni_c.values())
    n_types = sum(1 for c in uni_c.values() if c > 0)
    lam1 = D * n_types / total
    uniform = 1.0 / len(v_pred)
    p_uni = {w: max(uni_c[w] - D, 0.0) / total + lam1 * uniform for w in seen}
    p_uni[UNK] = max(lam1 * uniform, UNK_FLOOR)
    mass = sum(p_uni.values())
    p_uni = {w: p / mass for w, p in p_uni.items()}

    prob_linear: dict[tuple[str, ...], float] = {(w,): p for w, p in p_uni.items()}
    backoff_lam: dict[tuple[str, ...], float] = {}

    prev = {(w,): p for w, p in p_uni.items()}
    for k in range(2, order + 1):
        grams = sorted(raw[k])
        den: dict[tuple[str, ...], float] = {}
        n1p: dict[tuple[str, ...], int] = {}
        for g in grams:
            h = g[:-1]
            c = pseudo_count(k, g)
            den[h] = den.get(h, 0.0) + c
            n1p[h] = n1p.get(h, 0) + 1
        cur: dict[tuple[str, ...], float] = {}
        for g in grams:
            h = g[:-1]
            lam = D * n1p[h] / den[h]
            p = max(pseudo_count(k, g) - D, 0.0) / den[h] + lam * prev[g[1:]]
            cur[g] = p
            prob_linear[g] = p
        for h in den:
            backoff_lam[h] = D * n1p[h] / den[h]
        prev = cur

    probs = {g: math.log10(p) for g, p in prob_linear.items()}
    probs[(BOS,)] = BOS_LOG10
    backoffs = {h: math.log10(lam) for h, lam in backoff_lam.items()}
    return NGramModel(order=order, probs=probs, backoffs=backoffs)


def parse_arpa(text: str, source: str = "<arpa>") -> NGramModel:
    """Parse the standard ARPA text format.

    Entry lines are ``log10prob <sep> w1 ... wk [<sep> backoff]`` with
    tabs or runs of spaces as separators; a missing backoff reads as 0.
    """
    lines = text.splitlines()
    i = 0
    while i < len(lines) and lines[i].strip() != "\\data\\":
        if lines[i].strip():
            raise FormatError(f"{source}:{i + 1}: expected \\data\\ header")
        i += 1
    if i == len(lines):
        raise FormatError(f"{source}: missing \\data\\ header")
    i += 1

    declared: dict[int, int] = {}
    while i < len(lines):
        line = lines[i].strip()
        if not line:
            i += 1
            continue
        if line.startswith("ngram "):
            try:
                spec = line[len("ngram ") :]
                k_str, n_str = spec.split("=")
                declared[int(k_str)] = int(n_str)
            except ValueError as exc:
                raise FormatError(f"{source}:{i + 1}: bad ngram count line") from exc
            i += 1
            continue
        break
    if not declared:
        raise FormatError(f"{source}: no ngram counts declared")
    order = max(declared)

    probs: dict[tuple[str, ...], float] = {}
    backoffs: dict[tuple[str, ...], float] = {}
    parsed_counts = {k: 0 for k in declared}

    current_k = None
    while i < len(lines):
        line = lines[i].strip()
        i += 1
        if not line:
            continue
        if line == "\\end\\":
            current_k = None
            break
        if line.endswith("-grams:") and line.startswith("\\"):
            try:
                current_k = int(line[1:].split("-")[0])
            except ValueError as exc:
                raise FormatError(f"{source}:{i}: bad section header {line!r}") from exc
            if current_k not in declared:
                raise FormatError(f"{source}:{i}: undeclared order {current_k}")
            continue
        if current_k is None:
            raise FormatError(f"{source}:{i}: entry outside any n-gram section")
        fields = line.split()  # tabs or runs of spaces both separate fields
        if len(fields) not in (current_k + 1, current_k + 2):
            raise FormatError(
                f"{source}:{i}: expected {current_k}-gram entry, got {len(fields)} fields"
            )
        try:
            lp = float(fields[0])
        except ValueError as exc:
            raise FormatError(f"{source}:{i}: non-numeric probability") from exc
        gram = tuple(fields[1 : 1 + current_k])
        if len(fields) == current_k + 2:
            try:
                backoffs[gram] = float(fields[-1])
            except ValueError as exc:
                raise FormatError(f"{source}:{i}: non-numeric backoff") from exc
        probs[gram] = lp
        parsed_counts[current_k] += 1

    if current_k is not None:
        raise FormatError(f"{source}: missing \\end\\ marker")
    for k, want in declared.items():
        if parsed_counts[k] != want:
            raise CountMismatch(
                f"{source}: header declares {want} {k}-grams, found {parsed_counts[k]}"
            )
    return NGramModel(order=order, probs=probs, backoffs=backoffs)


def write_arpa(model: NGramModel) -> str:
    """Serialize to ARPA; floats print with full round-trip precision."""
    counts = model.counts()
    out = ["\\data\\"]
    for k in range(1, model.order + 1):
        out.append(f"ngram {k}={counts[k]}")
    for k in range(1, model.order + 1):
        out.append("")
        out.append(f"\\{k}-grams:")
        for gram, lp, bo in model.entries(k):
            line = "\t".join([repr(lp), *gram])
            if bo is not None:
                line += f"\t{bo!r}"
            out.append(line)
    out.append("")
    out.append("\\end\\")
    return "\n".join(out) + "\n"
