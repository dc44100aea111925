#!/usr/bin/env python3
"""Time the beam decoder on a large-vocabulary instance.

Builds a 2020-token tonal-syllable vocabulary, synthesizes 1000 frames
of peaked emissions, and times prefix beam search with and without a
fuzz-built six-gram model of one million entries.
"""

import argparse
import random
import time

import numpy as np

from supradec import BeamParams, SynthParams, Vocabulary, beam_decode, synth_emissions
from supradec.emissions import EmissionMatrix
from supradec.ngram import UNK, NGramModel
from supradec.pinyin import DECOMPOSITION_TABLE


def build_instance(frames=1000, vocab_size=2020, seed=813):
    texts = [f"{s}{t}" for s in sorted(DECOMPOSITION_TABLE) for t in range(1, 6)]
    vocab = Vocabulary.from_texts(texts[: vocab_size - 1], scheme_tag="syllable_tone")
    rnd = random.Random(seed)
    tokens_needed = (frames - 2) // 6
    target = [vocab.text_of(rnd.randint(1, vocab.size - 1)) for _ in range(tokens_needed)]
    m = synth_emissions(target, vocab, SynthParams(noise_eps=0.1, seed=seed))
    pad = frames - m.frames
    rows = np.vstack([m.values, m.values[:pad]]) if pad else m.values
    return vocab, EmissionMatrix.from_array(rows)


def build_lm(vocab, entries=1_000_000, seed=814):
    rnd = random.Random(seed)
    texts = vocab.non_blank_texts()
    probs = {}
    backoffs = {}
    for w in texts + ["<s>", "</s>", UNK]:
        probs[(w,)] = rnd.uniform(-4.0, -0.5)
        backoffs[(w,)] = rnd.uniform(-0.8, 0.0)
    per_order = (entries - len(probs) + 4) // 5
    for k in range(2, 7):
        added = 0
        while added < per_order:
            g = tuple(rnd.choices(texts, k=k))
            if g in probs:
                continue
            probs[g] = rnd.uniform(-5.0, -0.5)
            if k < 6:
                backoffs[g] = rnd.uniform(-0.8, 0.0)
            added += 1
    return NGramModel(order=6, probs=probs, backoffs=backoffs)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--beam", type=int, default=32)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    vocab, matrix = build_instance()
    params = BeamParams(beam_width=args.beam)
    print(f"frames={matrix.frames} vocab={matrix.vocab_size} beam={args.beam}")

    beam_decode(matrix, params=params, vocab=vocab)  # warm-up
    times = []
    for _ in range(args.repeats):
        t0 = time.perf_counter()
        beam_decode(matrix, params=params, vocab=vocab)
        times.append(time.perf_counter() - t0)
    print(f"no LM:     best {min(times) * 1000:7.1f} ms over {args.repeats} runs")

    print("building 1M-entry six-gram model ...")
    lm = build_lm(vocab)
    times = []
    for _ in range(args.repeats):
        t0 = time.perf_counter()
        beam_decode(matrix, params=params, vocab=vocab, lm=lm)
        times.append(time.perf_counter() - t0)
    print(f"with LM:   best {min(times) * 1000:7.1f} ms over {args.repeats} runs")


if __name__ == "__main__":
    main()
