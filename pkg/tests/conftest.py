from pathlib import Path

import pytest

from supradec import Vocabulary, load_vocab
from supradec.pinyin import DECOMPOSITION_TABLE

DATA_DIR = Path(__file__).parent / "data"

PAPER_PINYIN = "ta1 de5 biao3 xian4 ye3 geng4 jia1 quan2 mian4"
PAPER_TONES = "T1 T5 T3 T4 T3 T4 T1 T2 T4"
PAPER_IF_TONE = "t a1 d e5 b iao3 x ian4 ii ie3 g eng4 j ia1 q van2 m ian4"
PAPER_TIMIT = "h# sh ix hv eh dcl jh ih dcl d ah kcl k"


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture(scope="session")
def tones_vocab() -> Vocabulary:
    return load_vocab((DATA_DIR / "tones.txt").read_text(), scheme_tag="tone")


@pytest.fixture(scope="session")
def scheme_vocab_files(tmp_path_factory):
    """The three tone-scheme vocabulary fixtures, with their line counts.

    The tone file is checked in; the initial+final and tonal-syllable
    inventories are generated from the decomposition table.
    """
    root = tmp_path_factory.mktemp("scheme_vocabs")
    files = {"tone": (DATA_DIR / "tones.txt", 5)}

    initials = sorted({ini for ini, _ in DECOMPOSITION_TABLE.values()})
    finals = sorted({fin for _, fin in DECOMPOSITION_TABLE.values()})
    if_tokens = initials + [f"{fin}{t}" for fin in finals for t in range(1, 6)]
    path = root / "initial_final_tone.txt"
    path.write_text("\n".join(if_tokens) + "\n")
    files["initial_final_tone"] = (path, len(if_tokens))

    syl_tokens = [f"{s}{t}" for s in sorted(DECOMPOSITION_TABLE) for t in range(1, 6)]
    path = root / "syllable_tone.txt"
    path.write_text("\n".join(syl_tokens) + "\n")
    files["syllable_tone"] = (path, len(syl_tokens))
    return files
