import math
import random

import pytest

from supradec import parse_arpa, train_ngram, write_arpa
from supradec.errors import CountMismatch, EmptyCorpus, FormatError, InvalidOrder, InvalidToken
from supradec.ngram import BOS, EOS, KN_DISCOUNT, UNK, LmState, NGramModel


@pytest.fixture(scope="module")
def toy(data_dir):
    return parse_arpa((data_dir / "toy.arpa").read_text(), source="toy.arpa")


def test_toy_counts(toy):
    assert toy.order == 2
    assert toy.counts() == {1: 4, 2: 2}


def test_bigram_hit_exact(toy):
    lp, state = toy.score_next(LmState(("T1",)), "T2")
    assert lp == -0.30103
    assert state.history == ("T2",)


def test_unknown_token_backs_off(toy):
    # backoff(T1) + unigram(<unk>) hand-traced
    lp, state = toy.score_next(LmState(("T1",)), "zz")
    assert lp == pytest.approx(-0.3 + -1.2, abs=1e-12)
    assert state.history == (UNK,)


def test_missing_backoff_reads_as_zero(toy):
    # <unk> unigram carries no backoff field
    lp, _ = toy.score_next(LmState((UNK,)), "T2")
    assert lp == pytest.approx(-0.9, abs=1e-12)


def test_sentence_score_hand_traced(toy):
    # <s> context is absent: unigram T1, bigram (T1,T2), bigram (T2,</s>)
    assert toy.score_sentence(["T1", "T2"]) == pytest.approx(-0.7 - 0.30103 - 0.5, abs=1e-12)


def test_sentence_score_additive(toy):
    tokens = ["T1", "T2", "zz", "T1"]
    state = toy.initial_state()
    total = 0.0
    for tok in tokens:
        lp, state = toy.score_next(state, tok)
        total += lp
    lp, _ = toy.score_next(state, EOS)
    total += lp
    assert toy.score_sentence(tokens) == pytest.approx(total, abs=1e-12)


def test_minimal_unigram_file():
    text = "\\data\\\nngram 1=3\n\n\\1-grams:\n-0.5\ta\n-0.5\tb\n-0.7\tc\n\n\\end\\\n"
    model = parse_arpa(text)
    assert model.order == 1
    assert model.counts() == {1: 3}


def test_count_mismatch():
    text = "\\data\\\nngram 1=4\n\n\\1-grams:\n-0.5\ta\n-0.5\tb\n-0.5\tc\n\n\\end\\\n"
    with pytest.raises(CountMismatch):
        parse_arpa(text)


@pytest.mark.parametrize(
    "text",
    [
        "no header at all",
        "\\data\\\nngram 1=x\n\\end\\\n",
        "\\data\\\nngram 1=1\n\n\\1-grams:\n-abc\ta\n\n\\end\\\n",
        "\\data\\\nngram 1=1\n\n\\1-grams:\n-0.5\ta\n",  # missing \end\
    ],
)
def test_malformed_arpa(text):
    with pytest.raises(FormatError):
        parse_arpa(text)


def test_train_rejects_bad_inputs():
    with pytest.raises(EmptyCorpus):
        train_ngram([], order=2)
    with pytest.raises(InvalidOrder):
        train_ngram(["a b"], order=0)
    with pytest.raises(InvalidToken):
        train_ngram(["a <s> b"], order=2)


def test_unigram_model_normalizes():
    model = train_ngram(["a a b"], order=1)
    p = {w: 10 ** model.score_next(LmState(), w)[0] for w in ("a", "b", EOS, UNK)}
    assert p["a"] > p["b"]
    assert sum(p.values()) == pytest.approx(1.0, abs=1e-6)


def test_two_type_corpus_closed_form():
    # N copies of "T1 T2": continuation counts are all 1, so the hand
    # formulas below follow directly from interpolated Kneser-Ney
    D = KN_DISCOUNT
    for n in (4, 10, 100):
        model = train_ngram(["T1 T2"] * n, order=2)
        p1 = (1 - D) / 3 + D * (3 / 3) / 4
        want = (n - D) / n + (D * 1 / n) * p1
        assert 10 ** model.prob(("T1", "T2")) == pytest.approx(want, rel=1e-12)
    # discount mass vanishes with data: P(T2|T1) -> 1
    small = 10 ** train_ngram(["T1 T2"] * 10, order=2).prob(("T1", "T2"))
    large = 10 ** train_ngram(["T1 T2"] * 1000, order=2).prob(("T1", "T2"))
    assert small < large < 1.0
    model = train_ngram(["T1 T2"] * 10, order=2)
    assert model.score_sentence(["T1", "T2"]) > model.score_sentence(["T2", "T1"])


def make_generator(rng, vocab=("T1", "T2", "T3", "T4", "T5")):
    # fixed first-order Markov chain so more data genuinely helps
    trans = {w: rng.sample(vocab, 3) for w in vocab}

    def sample(n_sentences):
        out = []
        for _ in range(n_sentences):
            w = rng.choice(vocab)
            toks = [w]
            for _ in range(rng.randint(2, 8)):
                w = rng.choice(trans[w])
                toks.append(w)
            out.append(" ".join(toks))
        return out

    return sample


def sample_corpus(rng, n_sentences):
    return make_generator(rng)(n_sentences)


def test_arpa_round_trip_preserves_scores():
    rng = random.Random(17)
    corpus = sample_corpus(rng, 40)
    model = train_ngram(corpus, order=3)
    again = parse_arpa(write_arpa(model))
    queries = sample_corpus(rng, 100)
    for q in queries:
        assert again.score_sentence(q.split()) == pytest.approx(
            model.score_sentence(q.split()), abs=1e-9
        )


def test_trained_model_normalizes_per_context():
    rng = random.Random(23)
    model = train_ngram(sample_corpus(rng, 60), order=4)
    vocab = [w for w in model.vocab_texts if w != BOS]
    contexts = [()] + [
        tuple(rng.choices(vocab + ["zz"], k=rng.randint(1, 4))) for _ in range(50)
    ]
    contexts.append((BOS,))
    for ctx in contexts:
        total = sum(10 ** model.score_next(LmState(ctx), w)[0] for w in vocab)
        assert total == pytest.approx(1.0, abs=1e-6), ctx


def reference_backoff_score(probs, backoffs, order, history, token):
    """Straightforward recursive definition, independent of NGramModel."""
    unigrams = {g[0] for g in probs if len(g) == 1}
    w = token if token in unigrams else UNK
    hist = tuple(history)[-(order - 1):] if order > 1 else ()

    def rec(h):
        if h + (w,) in probs:
            return probs[h + (w,)]
        if h:
            return backoffs.get(h, 0.0) + rec(h[1:])
        return probs.get((w,), -99.0)

    return rec(hist)


def fuzz_model(rng, order=4, n_tokens=15):
    vocab = [f"w{i}" for i in range(n_tokens)] + [BOS, EOS, UNK]
    probs = {}
    backoffs = {}
    for w in vocab:
        probs[(w,)] = rng.uniform(-3.0, -0.1)
        if rng.random() < 0.8:
            backoffs[(w,)] = rng.uniform(-1.0, 0.5)
    for k in range(2, order + 1):
        for _ in range(120):
            g = tuple(rng.choices(vocab, k=k))
            probs[g] = rng.uniform(-4.0, -0.1)
            if k < order and rng.random() < 0.6:
                backoffs[g] = rng.uniform(-1.0, 0.5)
    return NGramModel(order=order, probs=probs, backoffs=backoffs), probs, backoffs, vocab


def test_backoff_matches_recursive_reference():
    rng = random.Random(99)
    model, probs, backoffs, vocab = fuzz_model(rng)
    tokens = vocab + ["junk"]
    for _ in range(1000):
        hist = tuple(rng.choices(vocab, k=rng.randint(0, model.order - 1)))
        tok = rng.choice(tokens)
        want = reference_backoff_score(probs, backoffs, model.order, hist, tok)
        got, _ = model.score_next(LmState(hist), tok)
        assert got == pytest.approx(want, abs=1e-12), (hist, tok)


def test_more_data_never_hurts_perplexity():
    diffs = []
    for seed in range(10):
        rng = random.Random(1000 + seed)
        sample = make_generator(rng)
        train = sample(400)
        heldout = sample(80)
        small = train_ngram(train[:40], order=3)
        large = train_ngram(train, order=3)
        diffs.append(small.perplexity(heldout) - large.perplexity(heldout))
    diffs.sort()
    median = diffs[len(diffs) // 2]
    assert median >= 0.0


def test_state_truncates_to_order():
    model = train_ngram(["T1 T2 T3 T4"], order=3)
    state = model.initial_state()
    for tok in ["T1", "T2", "T3", "T4"]:
        _, state = model.score_next(state, tok)
    assert len(state.history) == 2
