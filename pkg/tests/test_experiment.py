import pytest

from supradec import format_cells, parse_experiment_config, run_experiment
from supradec.errors import FormatError
from supradec.synth import make_benchmark_corpus

CONFIG = """
[corpus]
sentences = test.txt
lm_sentences = lm.txt

[units]
schemes = tone syl_tone

[lm]
order = 3
sizes = 0 50

[synth]
frames_per_token = 3
blank_gap = 1
confuse_tones = 2:3:0.4 3:2:0.4

[beam]
beam_width = 16
"""


@pytest.fixture()
def corpus_dir(tmp_path):
    (tmp_path / "test.txt").write_text("\n".join(make_benchmark_corpus(12, seed=4)) + "\n")
    (tmp_path / "lm.txt").write_text("\n".join(make_benchmark_corpus(50, seed=40)) + "\n")
    (tmp_path / "exp.ini").write_text(CONFIG)
    return tmp_path


def test_config_parses(corpus_dir):
    cfg = parse_experiment_config(CONFIG, base_dir=corpus_dir)
    assert cfg.schemes == ("tone", "syllable_tone")
    assert cfg.lm_sizes == (0, 50)
    assert cfg.lm_order == 3
    assert cfg.confuse_tones == ((2, 3, 0.4), (3, 2, 0.4))
    assert cfg.beam.beam_width == 16
    assert cfg.sentences_path.name == "test.txt"


def test_config_defaults(tmp_path):
    (tmp_path / "s.txt").write_text("ta1\n")
    cfg = parse_experiment_config("[corpus]\nsentences = s.txt\n", base_dir=tmp_path)
    assert cfg.lm_sentences_path == cfg.sentences_path
    assert cfg.lm_order == 6
    assert cfg.beam.beam_width == 32


@pytest.mark.parametrize(
    "text",
    [
        "[units]\nschemes = tone\n",  # no corpus
        "[corpus]\nsentences = s.txt\n[units]\nschemes = nope\n",
        "[corpus]\nsentences = s.txt\n[synth]\nconfuse_tones = 2:3\n",
        "[corpus]\nsentences = s.txt\n[beam]\nmode = fancy\n",
        "[corpus]\nsentences = s.txt\n[lm]\norder = x\n",
    ],
)
def test_config_errors(text, tmp_path):
    with pytest.raises(FormatError):
        parse_experiment_config(text, base_dir=tmp_path)


def test_grid_is_complete_and_deterministic(corpus_dir):
    cfg = parse_experiment_config(CONFIG, base_dir=corpus_dir)
    cells = run_experiment(cfg, seed=77, jobs=1)
    assert [(c.scheme, c.lm_sentences) for c in cells] == [
        ("tone", 0),
        ("tone", 50),
        ("syllable_tone", 0),
        ("syllable_tone", 50),
    ]
    again = run_experiment(cfg, seed=77, jobs=4)
    assert format_cells(cells, records=True) == format_cells(again, records=True)
    different = run_experiment(cfg, seed=78, jobs=1)
    assert format_cells(cells, records=True) != format_cells(different, records=True)


def test_noiseless_grid_is_perfect(tmp_path):
    (tmp_path / "test.txt").write_text("\n".join(make_benchmark_corpus(6, seed=2)) + "\n")
    text = (
        "[corpus]\nsentences = test.txt\n"
        "[units]\nschemes = tone if_tone syl_tone\n"
        "[lm]\nsizes = 0\n"
    )
    cfg = parse_experiment_config(text, base_dir=tmp_path)
    for cell in run_experiment(cfg, seed=5):
        assert cell.report.micro_rate == 0.0


def test_records_have_one_block_per_cell(corpus_dir):
    cfg = parse_experiment_config(CONFIG, base_dir=corpus_dir)
    cells = run_experiment(cfg, seed=3)
    records = format_cells(cells, records=True)
    assert records.count("[cell]") == 4
    assert records.count("scheme=tone") == 2
    assert "rate_micro=" in records
