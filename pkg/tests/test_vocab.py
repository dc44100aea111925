import pytest
from hypothesis import given
from hypothesis import strategies as st

from supradec import LabelSequence, Vocabulary, format_vocab, load_vocab
from supradec.errors import (
    DuplicateToken,
    EmptyVocabulary,
    InvalidToken,
    TokenNotInVocab,
)


def test_five_tones():
    v = load_vocab("T1\nT2\nT3\nT4\nT5")
    assert v.size == 6
    assert v.blank_id == 0
    assert v.text_of(0) == "<blank>"
    assert [v.id_of(f"T{k}") for k in range(1, 6)] == [1, 2, 3, 4, 5]


def test_single_token_vocab():
    v = load_vocab("S")
    assert v.size == 2
    assert v.non_blank_texts() == ["S"]


def test_empty_file_errors():
    with pytest.raises(EmptyVocabulary):
        load_vocab("")
    with pytest.raises(EmptyVocabulary):
        load_vocab("# only a comment\n\n")


def test_duplicate_and_whitespace_errors():
    with pytest.raises(DuplicateToken):
        load_vocab("T1\nT1")
    with pytest.raises(InvalidToken):
        load_vocab("a b\n")


def test_comments_and_blank_lines_skipped():
    v = load_vocab("# tones\nT1\n\nT2\n")
    assert v.non_blank_texts() == ["T1", "T2"]


def test_strip_fairseq_specials():
    text = "<s>\n</s>\n<pad>\n<unk>\nT1\nT2"
    v = load_vocab(text, strip_fairseq_specials=True)
    assert v.non_blank_texts() == ["T1", "T2"]
    # without the flag they are ordinary tokens
    v2 = load_vocab(text)
    assert v2.size == 7


def test_blank_text_is_reserved():
    with pytest.raises(InvalidToken):
        load_vocab("<blank>\nT1")


def test_encode_decode_round_trip(tones_vocab):
    seq = tones_vocab.encode(["T1", "T5", "T3"])
    assert tones_vocab.decode(seq.ids) == ["T1", "T5", "T3"]
    with pytest.raises(TokenNotInVocab):
        tones_vocab.encode(["T9"])
    with pytest.raises(InvalidToken):
        tones_vocab.encode(["<blank>"])


def test_label_sequence_rejects_blank():
    with pytest.raises(InvalidToken):
        LabelSequence(ids=(1, 0, 2))


def test_format_vocab_round_trip(tones_vocab):
    again = load_vocab(format_vocab(tones_vocab), scheme_tag="tone")
    assert again == tones_vocab


token_texts = st.lists(
    st.text(
        alphabet=st.characters(whitelist_categories=("Ll", "Lu", "Nd"), max_codepoint=0x2FF),
        min_size=1,
        max_size=6,
    ),
    min_size=1,
    max_size=40,
    unique=True,
)


@given(token_texts)
def test_lookup_bijective(texts):
    v = Vocabulary.from_texts(texts)
    for tok in v.tokens:
        assert v.id_of(v.text_of(tok.id)) == tok.id
        assert v.text_of(v.id_of(tok.text)) == tok.text


def test_scheme_vocab_fixture_counts(scheme_vocab_files):
    for tag, (path, expected_lines) in scheme_vocab_files.items():
        v = load_vocab(path.read_text(), scheme_tag=tag, source=str(path))
        assert v.size == expected_lines + 1
