import statistics

import pytest

from supradec import (
    SynthParams,
    Vocabulary,
    align_edit,
    beam_decode,
    brute_force_posterior,
    decode_batch,
    greedy_decode,
    load_vocab,
    project_to_tones,
    synth_emissions,
    to_unit_scheme,
    train_ngram,
    write_emissions,
)
from supradec.beam import BeamParams
from supradec.errors import InvalidValue, TokenNotInVocab
from supradec.pinyin import parse_pinyin_sentence
from supradec.rng import SplitMix64, derive_seed
from supradec.synth import benchmark_phrases, make_benchmark_corpus


def test_noiseless_greedy_identity(tones_vocab):
    target = ["T1", "T5", "T3", "T3", "T2"]
    m = synth_emissions(target, tones_vocab, SynthParams(seed=1))
    labels, _ = greedy_decode(m)
    assert tones_vocab.decode(labels.ids) == target


def test_noiseless_identity_all_schemes():
    sentence = "ta1 de5 biao3 xian4 ye3 geng4 jia1 quan2 mian4"
    syls = parse_pinyin_sentence(sentence)
    for scheme in ("tone", "initial_final_tone", "syllable_tone"):
        units = to_unit_scheme(syls, scheme)
        vocab = Vocabulary.from_texts(sorted(set(units)), scheme_tag=scheme)
        m = synth_emissions(units, vocab, SynthParams(seed=9))
        labels, _ = greedy_decode(m)
        assert vocab.decode(labels.ids) == units


def test_same_seed_bit_identical(tones_vocab):
    params = SynthParams(noise_eps=0.2, confusion_pairs=(("T2", "T3", 0.4),), seed=77)
    a = synth_emissions(["T2", "T3", "T1"], tones_vocab, params)
    b = synth_emissions(["T2", "T3", "T1"], tones_vocab, params)
    assert write_emissions(a) == write_emissions(b)


def test_seed_changes_swaps(tones_vocab):
    target = ["T2"] * 12
    pair = (("T2", "T3", 0.45),)
    a = synth_emissions(target, tones_vocab, SynthParams(confusion_pairs=pair, seed=1))
    b = synth_emissions(target, tones_vocab, SynthParams(confusion_pairs=pair, seed=2))
    assert write_emissions(a) != write_emissions(b)


def test_confusable_frames_carry_partner_mass():
    vocab = Vocabulary.from_texts(["T2", "T3"], scheme_tag="tone")
    params = SynthParams(
        frames_per_token=2, blank_gap=1, confusion_pairs=(("T3", "T2", 0.45),), seed=3
    )
    m = synth_emissions(["T2", "T3"], vocab, params)
    post = brute_force_posterior(m)
    t2, t3 = vocab.id_of("T2"), vocab.id_of("T3")
    assert post[(t2, t2)] >= 0.45 * post[(t2, t3)]


def test_rows_exactly_normalized(tones_vocab):
    m = synth_emissions(["T1", "T4"], tones_vocab, SynthParams(noise_eps=0.3, seed=5))
    assert m.normalized


def test_unknown_target_token(tones_vocab):
    with pytest.raises(TokenNotInVocab):
        synth_emissions(["T9"], tones_vocab, SynthParams(seed=0))
    with pytest.raises(TokenNotInVocab):
        synth_emissions(
            ["T1"], tones_vocab, SynthParams(confusion_pairs=(("T1", "T9", 0.3),), seed=0)
        )


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(frames_per_token=1),
        dict(blank_gap=-1),
        dict(noise_eps=1.0),
        dict(noise_eps=-0.1),
        dict(confusion_pairs=(("a", "a", 0.3),)),
        dict(confusion_pairs=(("a", "b", 0.6),)),
        dict(noise_eps=0.5, confusion_pairs=(("a", "b", 0.45),)),
    ],
)
def test_param_validation(kwargs):
    with pytest.raises(InvalidValue):
        SynthParams(seed=0, **kwargs)


def sample_tone_sentences(count, seed):
    rng = SplitMix64(seed)
    tones = ["T1", "T2", "T3", "T4", "T5"]
    out = []
    for _ in range(count):
        out.append([tones[rng.randint(5)] for _ in range(4 + rng.randint(5))])
    return out


def test_ter_non_decreasing_in_noise(tones_vocab):
    sentences = sample_tone_sentences(20, seed=42)
    pair = (("T2", "T3", 0.3), ("T3", "T2", 0.3))
    medians = []
    for eps in (0.0, 0.1, 0.3, 0.5):
        rates = []
        for ix, target in enumerate(sentences):
            params = SynthParams(
                noise_eps=eps, confusion_pairs=pair, seed=derive_seed(7, ix)
            )
            m = synth_emissions(target, tones_vocab, params)
            labels, _ = greedy_decode(m)
            rates.append(align_edit(target, tones_vocab.decode(labels.ids)).error_rate)
        medians.append(statistics.median(rates))
    for lo, hi in zip(medians, medians[1:]):
        assert hi >= lo


def test_benchmark_phrases_are_well_formed(tones_vocab):
    for anchor, confusable in benchmark_phrases():
        assert int(anchor[-1]) in (1, 4)
        assert int(confusable[-1]) in (2, 3)
    corpus = make_benchmark_corpus(5, seed=1)
    assert corpus == make_benchmark_corpus(5, seed=1)
    for sentence in corpus:
        parse_pinyin_sentence(sentence)  # all syllables decompose


def test_lm_rescues_confusable_tokens():
    test_sents = make_benchmark_corpus(30, seed=11)
    lm_sents = make_benchmark_corpus(400, seed=99)
    scheme = "syllable_tone"
    units = [to_unit_scheme(parse_pinyin_sentence(s), scheme) for s in test_sents]
    lm_units = [to_unit_scheme(parse_pinyin_sentence(s), scheme) for s in lm_sents]
    inventory = sorted({t for u in units + lm_units for t in u})
    vocab = Vocabulary.from_texts(inventory, scheme_tag=scheme)
    texts = set(inventory)
    pairs = []
    for text in inventory:
        tone = int(text[-1])
        if tone in (2, 3):
            other = text[:-1] + str(5 - tone)
            if other in texts:
                pairs.append((text, other, 0.45))
    emissions = [
        synth_emissions(
            u, vocab, SynthParams(confusion_pairs=tuple(pairs), seed=derive_seed(5, i))
        )
        for i, u in enumerate(units)
    ]
    refs = [project_to_tones(u, scheme) for u in units]
    lm = train_ngram([" ".join(u) for u in lm_units], order=6)

    def ter(lm_model):
        outs = decode_batch(emissions, params=BeamParams(), vocab=vocab, lm=lm_model)
        total_err = total_ref = 0
        for ref, hyps in zip(refs, outs):
            hyp = project_to_tones(vocab.decode(hyps[0].prefix.ids), scheme)
            c = align_edit(ref, hyp)
            total_err += c.total_errors
            total_ref += c.ref_len
        return total_err / total_ref

    no_lm = ter(None)
    with_lm = ter(lm)
    assert with_lm <= no_lm
    assert no_lm > 0
    assert (no_lm - with_lm) / no_lm >= 0.2
