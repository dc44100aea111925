"""Evaluation metrics: edit-distance error rates, syllable-count
correlation, and pitch-accent accuracy.

``align_edit`` minimizes (total cost, substitutions, insertions)
lexicographically, so among minimum-cost alignments the one with the
fewest substitutions, then fewest insertions, defines the counts. That
makes per-class breakdowns reproducible and forces S = 0 whenever the
two sequences share a single token type.

Error-rate reports carry both conventions side by side: the micro rate
pools errors over the corpus (Sum errors / Sum reference lengths); the
macro rate averages per-utterance rates. The syllable-recognition rate
is the macro average of per-utterance (insertions + deletions) /
reference length.
"""

import math
from dataclasses import dataclass

from .errors import DegenerateVariance, EmptyReference, LengthMismatch


@dataclass(frozen=True)
class EditCounts:
    substitutions: int
    insertions: int
    deletions: int
    ref_len: int

    @property
    def total_errors(self) -> int:
        return self.substitutions + self.insertions + self.deletions

    @property
    def error_rate(self) -> float:
        if self.ref_len == 0:
            raise EmptyReference("error rate undefined for an empty reference")
        return self.total_errors / self.ref_len

    @property
    def indel_rate(self) -> float:
        if self.ref_len == 0:
            raise EmptyReference("rate undefined for an empty reference")
        return (self.insertions + self.deletions) / self.ref_len


def align_edit(ref, hyp) -> EditCounts:
    """Levenshtein alignment with unit costs and deterministic counts."""
    ref = list(ref)
    hyp = list(hyp)
    rows, cols = len(ref), len(hyp)
    # dp[j] = (cost, substitutions, insertions) aligning ref[:i], hyp[:j]
    prev = [(j, 0, j) for j in range(cols + 1)]
    for i in range(1, rows + 1):
        cur = [(i, 0, 0)]
        r = ref[i - 1]
        for j in range(1, cols + 1):
            if r == hyp[j - 1]:
                best = prev[j - 1]
            else:
                c, s, n = prev[j - 1]
                best = (c + 1, s + 1, n)
            c, s, n = prev[j]  # delete ref token
            cand = (c + 1, s, n)
            if cand < best:
                best = cand
            c, s, n = cur[j - 1]  # insert hyp token
            cand = (c + 1, s, n + 1)
            if cand < best:
                best = cand
            cur.append(best)
        prev = cur
    cost, subs, ins = prev[cols]
    return EditCounts(
        substitutions=subs,
        insertions=ins,
        deletions=cost - subs - ins,
        ref_len=rows,
    )


def sr_error_rate(counts) -> float:
    """Macro average of per-utterance (insertions + deletions) / ref length."""
    counts = list(counts)
    if not counts:
        raise EmptyReference("no utterances")
    for c in counts:
        if c.ref_len == 0:
            raise EmptyReference("utterance with empty reference")
    return sum(c.indel_rate for c in counts) / len(counts)


def count_correlation(pairs) -> float:
    """Pearson product-moment correlation of (actual, estimated) counts."""
    pairs = [(float(a), float(b)) for a, b in pairs]
    if len(pairs) < 2:
        raise DegenerateVariance("need at least two pairs")
    xs = [a for a, _ in pairs]
    ys = [b for _, b in pairs]
    mx = sum(xs) / len(xs)
    my = sum(ys) / len(ys)
    sxx = sum((x - mx) ** 2 for x in xs)
    syy = sum((y - my) ** 2 for y in ys)
    if sxx == 0.0 or syy == 0.0:
        raise DegenerateVariance("constant counts on one side")
    sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    return sxy / math.sqrt(sxx * syy)


def pitch_accent_accuracy(ref_flags, hyp_flags) -> float:
    """Fraction of words whose accent flags agree."""
    ref_flags = list(ref_flags)
    hyp_flags = list(hyp_flags)
    if len(ref_flags) != len(hyp_flags):
        raise LengthMismatch(
            f"{len(ref_flags)} reference vs {len(hyp_flags)} hypothesis words"
        )
    if not ref_flags:
        raise EmptyReference("no words")
    agree = sum(1 for r, h in zip(ref_flags, hyp_flags) if bool(r) == bool(h))
    return agree / len(ref_flags)


@dataclass(frozen=True)
class EvalReport:
    """Per-utterance counts plus corpus-level aggregates."""

    per_utterance: tuple[EditCounts, ...]
    correlation: float | None = None
    accuracy: float | None = None

    @classmethod
    def from_pairs(cls, refs, hyps, correlation=None, accuracy=None) -> "EvalReport":
        refs = list(refs)
        hyps = list(hyps)
        if len(refs) != len(hyps):
            raise LengthMismatch(f"{len(refs)} references vs {len(hyps)} hypotheses")
        counts = tuple(align_edit(r, h) for r, h in zip(refs, hyps))
        return cls(per_utterance=counts, correlation=correlation, accuracy=accuracy)

    @property
    def ref_tokens(self) -> int:
        return sum(c.ref_len for c in self.per_utterance)

    @property
    def micro_rate(self) -> float:
        total_ref = self.ref_tokens
        if total_ref == 0:
            raise EmptyReference("empty corpus reference")
        return sum(c.total_errors for c in self.per_utterance) / total_ref

    @property
    def macro_rate(self) -> float:
        if not self.per_utterance:
            raise EmptyReference("no utterances")
        return sum(c.error_rate for c in self.per_utterance) / len(self.per_utterance)

    @property
    def sr_macro_rate(self) -> float:
        return sr_error_rate(self.per_utterance)

    def totals(self) -> EditCounts:
        return EditCounts(
            substitutions=sum(c.substitutions for c in self.per_utterance),
            insertions=sum(c.insertions for c in self.per_utterance),
            deletions=sum(c.deletions for c in self.per_utterance),
            ref_len=self.ref_tokens,
        )

    def format_text(self) -> str:
        t = self.totals()
        lines = [
            f"utterances: {len(self.per_utterance)}",
            f"reference tokens: {t.ref_len}",
            f"errors: sub={t.substitutions} ins={t.insertions} del={t.deletions}",
            f"micro error rate: {self.micro_rate!r}",
            f"macro error rate: {self.macro_rate!r}",
            f"sr error rate (macro ins+del): {self.sr_macro_rate!r}",
        ]
        if self.correlation is not None:
            lines.append(f"count correlation: {self.correlation!r}")
        if self.accuracy is not None:
            lines.append(f"accuracy: {self.accuracy!r}")
        return "\n".join(lines) + "\n"

    def format_records(self) -> str:
        t = self.totals()
        lines = [
            f"utterances={len(self.per_utterance)}",
            f"ref_tokens={t.ref_len}",
            f"errors_sub={t.substitutions}",
            f"errors_ins={t.insertions}",
            f"errors_del={t.deletions}",
            f"rate_micro={self.micro_rate!r}",
            f"rate_macro={self.macro_rate!r}",
            f"rate_sr_macro={self.sr_macro_rate!r}",
        ]
        if self.correlation is not None:
            lines.append(f"correlation={self.correlation!r}")
        if self.accuracy is not None:
            lines.append(f"accuracy={self.accuracy!r}")
        return "\n".join(lines) + "\n"
