"""supradec: CTC decoding and evaluation for suprasegmental units.

Everything operates on emission matrices (per-frame log-probabilities
over a vocabulary with a reserved blank), so any acoustic model, or the
bundled synthetic generator, can sit in front of the decoders.
"""

__version__ = "0.1.0"

from . import errors
from .beam import BeamHypothesis, BeamParams, beam_decode, decode_batch
from .ctc import (
    CtcResult,
    brute_force_posterior,
    collapse,
    ctc_loss,
    extended_target,
    greedy_decode,
    min_frames,
)
from .emissions import EmissionMatrix, read_emissions, write_emissions
from .experiment import (
    CellReport,
    ExperimentConfig,
    format_cells,
    load_experiment_config,
    parse_experiment_config,
    run_experiment,
)
from .metrics import (
    EditCounts,
    EvalReport,
    align_edit,
    count_correlation,
    pitch_accent_accuracy,
    sr_error_rate,
)
from .ngram import LmState, NGramModel, parse_arpa, train_ngram, write_arpa
from .pinyin import (
    DECOMPOSITION_TABLE,
    PinyinSyllable,
    parse_pinyin,
    parse_pinyin_sentence,
    project_to_tones,
    to_unit_scheme,
)
from .rng import SplitMix64, derive_seed
from .synth import SynthParams, synth_emissions
from .units import (
    DEFAULT_VOWEL_SET,
    TIMIT_PHONES,
    WordSpan,
    merge_vocabularies,
    parse_word_spans,
    timit_to_syllable_targets,
    word_pitch_accents,
)
from .vocab import (
    BLANK_ID,
    BLANK_TEXT,
    LabelSequence,
    Token,
    Vocabulary,
    format_vocab,
    load_vocab,
)

__all__ = [
    "BLANK_ID",
    "BLANK_TEXT",
    "BeamHypothesis",
    "BeamParams",
    "CellReport",
    "CtcResult",
    "DECOMPOSITION_TABLE",
    "DEFAULT_VOWEL_SET",
    "EditCounts",
    "EmissionMatrix",
    "EvalReport",
    "ExperimentConfig",
    "LabelSequence",
    "LmState",
    "NGramModel",
    "PinyinSyllable",
    "SplitMix64",
    "SynthParams",
    "TIMIT_PHONES",
    "Token",
    "Vocabulary",
    "WordSpan",
    "align_edit",
    "beam_decode",
    "brute_force_posterior",
    "collapse",
    "count_correlation",
    "ctc_loss",
    "decode_batch",
    "derive_seed",
    "errors",
    "extended_target",
    "format_cells",
    "format_vocab",
    "greedy_decode",
    "load_experiment_config",
    "load_vocab",
    "merge_vocabularies",
    "min_frames",
    "parse_arpa",
    "parse_experiment_config",
    "parse_pinyin",
    "parse_pinyin_sentence",
    "parse_word_spans",
    "pitch_accent_accuracy",
    "project_to_tones",
    "read_emissions",
    "run_experiment",
    "sr_error_rate",
    "synth_emissions",
    "timit_to_syllable_targets",
    "to_unit_scheme",
    "train_ngram",
    "word_pitch_accents",
    "write_arpa",
    "write_emissions",
]
