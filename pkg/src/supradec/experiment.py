"""End-to-end experiment harness: synthesize, decode, project, score.

A config file (INI sections of key=value pairs) names a pinyin decode
corpus, the unit schemes to compare, the LM training slice sizes, and
the synthesis / beam parameters. For every (scheme, lm_size) cell the
harness synthesizes emissions per sentence, decodes with or without a
freshly trained n-gram model, projects hypotheses to tones, and scores
the tone error rate against the reference tones.

Per-sentence emission seeds derive from (seed, scheme index, sentence
index), so reports are identical for any worker count.

Config keys (defaults in parentheses):

    [corpus]    sentences = pinyin.txt     lm_sentences = big.txt (sentences)
    [units]     schemes = tone syllable_tone
    [lm]        order = 6                  sizes = 0 200 2000
    [synth]     frames_per_token (4)  blank_gap (2)  noise_eps (0.0)
                confuse_tones = 2:3:0.45   (optional; symmetric)
    [beam]      mode = beam|greedy (beam)  beam_width (32)  lm_weight (1.2)
                token_bonus (0.5)  prune_log_floor (-9.21)  lm_eos (false)
"""

import configparser
from dataclasses import dataclass, field
from pathlib import Path

from .beam import BeamParams, decode_batch
from .ctc import greedy_decode
from .errors import FormatError, SupradecError
from .metrics import EvalReport
from .ngram import train_ngram
from .pinyin import parse_pinyin_sentence, to_unit_scheme, project_to_tones
from .rng import derive_seed
from .synth import SynthParams, synth_emissions
from .vocab import Vocabulary

SCHEME_ALIASES = {
    "tone": "tone",
    "if_tone": "initial_final_tone",
    "initial_final_tone": "initial_final_tone",
    "syl_tone": "syllable_tone",
    "syllable_tone": "syllable_tone",
}


@dataclass(frozen=True)
class ExperimentConfig:
    sentences_path: Path
    lm_sentences_path: Path
    schemes: tuple[str, ...] = ("tone", "syllable_tone")
    lm_order: int = 6
    lm_sizes: tuple[int, ...] = (0,)
    frames_per_token: int = 4
    blank_gap: int = 2
    noise_eps: float = 0.0
    confuse_tones: tuple[tuple[int, int, float], ...] = ()
    decode_mode: str = "beam"
    beam: BeamParams = field(default_factory=BeamParams)


def parse_experiment_config(text: str, base_dir: Path, source: str = "<config>") -> ExperimentConfig:
    parser = configparser.ConfigParser()
    try:
        parser.read_string(text, source=source)
    except configparser.Error as exc:
        raise FormatError(f"{source}: {exc}") from exc

    def get(section, key, default=None):
        if parser.has_option(section, key):
            return parser.get(section, key)
        return default

    sentences = get("corpus", "sentences")
    if sentences is None:
        raise FormatError(f"{source}: [corpus] sentences is required")
    sentences_path = (base_dir / sentences).resolve()
    lm_sentences = get("corpus", "lm_sentences", sentences)
    lm_sentences_path = (base_dir / lm_sentences).resolve()

    schemes = []
    for name in get("units", "schemes", "tone syllable_tone").split():
        if name not in SCHEME_ALIASES:
            raise FormatError(f"{source}: unknown scheme {name!r}")
        schemes.append(SCHEME_ALIASES[name])

    confusions = []
    spec = get("synth", "confuse_tones")
    if spec:
        for item in spec.split():
            parts = item.split(":")
            if len(parts) != 3:
                raise FormatError(f"{source}: confuse_tones wants ta:tb:mix, got {item!r}")
            try:
                confusions.append((int(parts[0]), int(parts[1]), float(parts[2])))
            except ValueError as exc:
                raise FormatError(f"{source}: bad confuse_tones entry {item!r}") from exc

    mode = get("beam", "mode", "beam")
    if mode not in ("beam", "greedy"):
        raise FormatError(f"{source}: decode mode must be beam or greedy")

    try:
        return ExperimentConfig(
            sentences_path=sentences_path,
            lm_sentences_path=lm_sentences_path,
            schemes=tuple(schemes),
            lm_order=int(get("lm", "order", "6")),
            lm_sizes=tuple(int(s) for s in get("lm", "sizes", "0").split()),
            frames_per_token=int(get("synth", "frames_per_token", "4")),
            blank_gap=int(get("synth", "blank_gap", "2")),
            noise_eps=float(get("synth", "noise_eps", "0.0")),
            confuse_tones=tuple(confusions),
            decode_mode=mode,
            beam=BeamParams(
                beam_width=int(get("beam", "beam_width", "32")),
                lm_weight=float(get("beam", "lm_weight", "1.2")),
                token_bonus=float(get("beam", "token_bonus", "0.5")),
                prune_log_floor=float(get("beam", "prune_log_floor", "-9.21")),
                lm_eos=get("beam", "lm_eos", "false").lower() in ("1", "true", "yes"),
            ),
        )
    except ValueError as exc:
        raise FormatError(f"{source}: {exc}") from exc


def load_experiment_config(path: Path) -> ExperimentConfig:
    path = Path(path)
    return parse_experiment_config(
        path.read_text(encoding="utf-8"), base_dir=path.parent, source=str(path)
    )


@dataclass(frozen=True)
class CellReport:
    scheme: str
    lm_sentences: int
    report: EvalReport

    def format_records(self) -> str:
        head = f"[cell]\nscheme={self.scheme}\nlm_sentences={self.lm_sentences}\n"
        return head + self.report.format_records()

    def format_text(self) -> str:
        return (
            f"scheme={self.scheme} lm={self.lm_sentences} "
            f"ter_micro={self.report.micro_rate!r} "
            f"ter_macro={self.report.macro_rate!r}"
        )


def _tone_confusions_for_vocab(vocab: Vocabulary, confusions):
    """Resolve tone-level confusion specs into concrete token pairs.

    For every vocabulary token carrying tone digit ta whose tb-variant
    also exists, add the (token, variant, mix) pair; specs apply in
    both listed directions independently.
    """
    pairs = []
    texts = set(vocab.non_blank_texts())
    for ta, tb, mix in confusions:
        for text in vocab.non_blank_texts():
            if not text[-1].isdigit():
                continue  # initials under initial_final_tone stay clean
            if int(text[-1]) == ta:
                other = text[:-1] + str(tb)
                if other in texts:
                    pairs.append((text, other, mix))
    return tuple(pairs)


def run_experiment(config: ExperimentConfig, seed: int, jobs: int = 1) -> list[CellReport]:
    sentences = [
        line.strip()
        for line in config.sentences_path.read_text(encoding="utf-8").splitlines()
        if line.strip()
    ]
    lm_sentences = [
        line.strip()
        for line in config.lm_sentences_path.read_text(encoding="utf-8").splitlines()
        if line.strip()
    ]
    if not sentences:
        raise SupradecError(f"{config.sentences_path}: no sentences")

    parsed = [parse_pinyin_sentence(s) for s in sentences]
    parsed_lm = [parse_pinyin_sentence(s) for s in lm_sentences]
    ref_tones = [to_unit_scheme(p, "tone") for p in parsed]

    cells: list[CellReport] = []
    for scheme_ix, scheme in enumerate(config.schemes):
        targets = [to_unit_scheme(p, scheme) for p in parsed]
        lm_corpus = [to_unit_scheme(p, scheme) for p in parsed_lm]
        inventory = sorted({t for units in targets for t in units}
                           | {t for units in lm_corpus for t in units})
        vocab = Vocabulary.from_texts(inventory, scheme_tag=scheme)
        pairs = _tone_confusions_for_vocab(vocab, config.confuse_tones)

        emissions = []
        for sent_ix, units in enumerate(targets):
            params = SynthParams(
                frames_per_token=config.frames_per_token,
                blank_gap=config.blank_gap,
                noise_eps=config.noise_eps,
                confusion_pairs=pairs,
                seed=derive_seed(seed, scheme_ix, sent_ix),
            )
            emissions.append(synth_emissions(units, vocab, params))

        # the synthesized target must project to the evaluation reference
        for units, ref in zip(targets, ref_tones):
            assert project_to_tones(units, scheme) == ref

        for lm_size in config.lm_sizes:
            lm = None
            if lm_size > 0:
                lm = train_ngram(lm_corpus[:lm_size], order=config.lm_order)
            if config.decode_mode == "greedy" and lm is None:
                hyp_units = [
                    vocab.decode(greedy_decode(em)[0].ids) for em in emissions
                ]
            else:
                ranked = decode_batch(
                    emissions, params=config.beam, vocab=vocab, lm=lm, jobs=jobs
                )
                hyp_units = [vocab.decode(r[0].prefix.ids) for r in ranked]
            hyp_tones = [project_to_tones(h, scheme) for h in hyp_units]
            report = EvalReport.from_pairs(ref_tones, hyp_tones)
            cells.append(CellReport(scheme=scheme, lm_sentences=lm_size, report=report))
    return cells


def format_cells(cells, records: bool = False) -> str:
    if records:
        return "\n".join(c.format_records() for c in cells)
    return "\n".join(c.format_text() for c in cells) + "\n"
