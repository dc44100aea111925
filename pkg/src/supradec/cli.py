"""Command-line entry point.

Results go to stdout, diagnostics to stderr. Exit codes: 0 success,
1 usage error, 2 data/format error, 3 internal invariant violation.
All randomness flows from an explicit --seed; output is byte-identical
across reruns and --jobs settings.
"""

import argparse
import sys
from pathlib import Path

from . import __version__
from .beam import BeamParams, decode_batch
from .ctc import ctc_loss, greedy_decode
from .emissions import read_emissions, write_emissions
from .errors import LengthMismatch, SupradecError
from .experiment import SCHEME_ALIASES, format_cells, load_experiment_config, run_experiment
from .metrics import (
    EvalReport,
    count_correlation,
    pitch_accent_accuracy,
    sr_error_rate,
)
from .ngram import parse_arpa, train_ngram, write_arpa
from .pinyin import (
    load_decomposition_table,
    parse_pinyin_sentence,
    project_to_tones,
    to_unit_scheme,
)
from .synth import SynthParams, synth_emissions
from .units import (
    load_vowel_set,
    merge_vocabularies,
    parse_word_spans,
    timit_to_syllable_targets,
    word_pitch_accents,
)
from .vocab import format_vocab, load_vocab


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _read_text(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _load_vocab_arg(args):
    return load_vocab(
        _read_text(args.vocab),
        strip_fairseq_specials=getattr(args, "strip_fairseq_specials", False),
        source=args.vocab,
    )


def _read_lines(path: str) -> list[str]:
    return [ln for ln in _read_text(path).splitlines() if ln.strip()]


def _cmd_decode(args, out):
    vocab = _load_vocab_arg(args)
    matrices = [read_emissions(Path(p).read_bytes(), source=p) for p in args.emissions]
    if args.spans and not args.greedy:
        raise UsageError("--spans requires --greedy (frame-level paths)")
    if args.greedy:
        if args.spans:
            spans = parse_word_spans(_read_text(args.spans), source=args.spans)
            accent_id = vocab.id_of(args.accent_token)
            if len(matrices) != 1:
                raise UsageError("--spans expects exactly one emissions file")
            _, frame_path = greedy_decode(matrices[0])
            for span, flag in zip(
                spans, word_pitch_accents(frame_path, spans, accent_id)
            ):
                out.write(f"{span.word}\t{1 if flag else 0}\n")
            return
        for m in matrices:
            labels, _ = greedy_decode(m)
            out.write(" ".join(vocab.decode(labels.ids)) + "\n")
        return
    lm = parse_arpa(_read_text(args.lm), source=args.lm) if args.lm else None
    params = BeamParams(
        beam_width=args.beam,
        lm_weight=args.lm_weight,
        token_bonus=args.token_bonus,
        prune_log_floor=args.prune_floor,
        lm_eos=args.lm_eos,
    )
    ranked = decode_batch(matrices, params=params, vocab=vocab, lm=lm, jobs=args.jobs)
    for ix, hyps in enumerate(ranked):
        top = hyps[0]
        if args.format == "records":
            out.write(f"utterance={ix}\n")
            out.write(f"tokens={' '.join(vocab.decode(top.prefix.ids))}\n")
            out.write(f"score={top.fused_score!r}\n\n")
        else:
            out.write(" ".join(vocab.decode(top.prefix.ids)) + "\n")


def _cmd_loss(args, out):
    vocab = _load_vocab_arg(args)
    matrix = read_emissions(Path(args.emissions).read_bytes(), source=args.emissions)
    target = vocab.encode(args.target.split())
    result = ctc_loss(matrix, target, want_grad=args.grad)
    out.write(f"log_prob={result.log_prob!r}\n")
    if args.grad:
        for row in result.grad:
            out.write("\t".join(repr(float(v)) for v in row) + "\n")


def _cmd_lm_train(args, out):
    corpus = _read_lines(args.corpus)
    model = train_ngram(corpus, order=args.order)
    Path(args.out).write_text(write_arpa(model), encoding="utf-8")
    for k, n in sorted(model.counts().items()):
        out.write(f"ngram {k}={n}\n")


def _cmd_lm_score(args, out):
    model = parse_arpa(_read_text(args.arpa), source=args.arpa)
    tokens = args.text.split()
    total = model.score_sentence(tokens, bos=not args.no_bos, eos=not args.no_eos)
    if args.format == "records":
        state = model.initial_state()
        for tok in tokens:
            lp, state = model.score_next(state, tok)
            out.write(f"token={tok}\nlog10={lp!r}\n")
        out.write(f"total={total!r}\n")
    else:
        out.write(f"log10_total={total!r}\n")


def _cmd_units(args, out):
    if args.units_cmd == "convert":
        scheme = SCHEME_ALIASES[args.scheme]
        table = None
        if args.table:
            table = load_decomposition_table(_read_text(args.table), source=args.table)
        for line in _read_lines(args.infile):
            syls = parse_pinyin_sentence(line, table=table)
            out.write(" ".join(to_unit_scheme(syls, scheme, table=table)) + "\n")
    elif args.units_cmd == "project":
        scheme = SCHEME_ALIASES[args.scheme]
        for line in _read_lines(args.infile):
            out.write(" ".join(project_to_tones(line.split(), scheme)) + "\n")
    elif args.units_cmd == "timit-syllables":
        vowels = load_vowel_set(_read_text(args.vowel_set)) if args.vowel_set else None
        for line in _read_lines(args.infile):
            out.write(" ".join(timit_to_syllable_targets(line, vowels)) + "\n")
    elif args.units_cmd == "merge-vocab":
        a = load_vocab(_read_text(args.vocab_a), source=args.vocab_a)
        b = load_vocab(_read_text(args.vocab_b), source=args.vocab_b)
        merged = merge_vocabularies(a, b, allow_shared=args.allow_shared)
        Path(args.out).write_text(format_vocab(merged), encoding="utf-8")
        out.write(f"tokens={merged.size - 1}\n")


def _cmd_eval(args, out):
    refs = [line.split() for line in _read_lines(args.ref)]
    hyps = [line.split() for line in _read_lines(args.hyp)]
    if args.metric == "ter":
        report = EvalReport.from_pairs(refs, hyps)
        out.write(report.format_records() if args.format == "records" else report.format_text())
    elif args.metric == "sr":
        report = EvalReport.from_pairs(refs, hyps)
        out.write(f"sr_error_rate={sr_error_rate(report.per_utterance)!r}\n")
    elif args.metric == "corr":
        if len(refs) != len(hyps):
            raise LengthMismatch(
                f"{len(refs)} reference vs {len(hyps)} hypothesis utterances"
            )
        pairs = [(len(r), len(h)) for r, h in zip(refs, hyps)]
        out.write(f"correlation={count_correlation(pairs)!r}\n")
    elif args.metric == "accent":
        ref_flags = [f == "1" for line in refs for f in line]
        hyp_flags = [f == "1" for line in hyps for f in line]
        out.write(f"accuracy={pitch_accent_accuracy(ref_flags, hyp_flags)!r}\n")


def _parse_confusions(specs):
    pairs = []
    for spec in specs or ():
        parts = spec.split(":")
        if len(parts) != 3:
            raise UsageError(f"--confuse wants token_a:token_b:mix, got {spec!r}")
        pairs.append((parts[0], parts[1], float(parts[2])))
    return tuple(pairs)


def _cmd_synth(args, out):
    vocab = _load_vocab_arg(args)
    target = _read_text(args.target).split()
    params = SynthParams(
        frames_per_token=args.frames_per_token,
        blank_gap=args.blank_gap,
        noise_eps=args.noise,
        confusion_pairs=_parse_confusions(args.confuse),
        seed=args.seed,
    )
    matrix = synth_emissions(target, vocab, params)
    Path(args.out).write_bytes(write_emissions(matrix, format="binary"))
    out.write(f"frames={matrix.frames} vocab={matrix.vocab_size}\n")


def _cmd_experiment(args, out):
    config = load_experiment_config(Path(args.config))
    cells = run_experiment(config, seed=args.seed, jobs=args.jobs)
    out.write(format_cells(cells, records=args.format == "records"))


def build_parser() -> _Parser:
    parser = _Parser(prog="supradec", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("decode", help="beam or greedy decode of emission files")
    p.add_argument("--emissions", nargs="+", required=True)
    p.add_argument("--vocab", required=True)
    p.add_argument("--beam", type=int, default=32)
    p.add_argument("--lm")
    p.add_argument("--lm-weight", type=float, default=1.2)
    p.add_argument("--token-bonus", type=float, default=0.5)
    p.add_argument("--prune-floor", type=float, default=-9.21)
    p.add_argument("--lm-eos", action="store_true")
    p.add_argument("--greedy", action="store_true")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--spans", help="word spans TSV; with --greedy, emit accent flags")
    p.add_argument("--accent-token", default="1")
    p.add_argument("--strip-fairseq-specials", action="store_true")
    p.add_argument("--format", choices=("text", "records"), default="text")
    p.set_defaults(func=_cmd_decode)

    p = sub.add_parser("loss", help="CTC loss (and gradient) of a target")
    p.add_argument("--emissions", required=True)
    p.add_argument("--vocab", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--grad", action="store_true")
    p.add_argument("--strip-fairseq-specials", action="store_true")
    p.set_defaults(func=_cmd_loss)

    p = sub.add_parser("lm-train", help="train a Kneser-Ney n-gram model")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_lm_train)

    p = sub.add_parser("lm-score", help="score a token sequence with an ARPA model")
    p.add_argument("--arpa", required=True)
    p.add_argument("--text", required=True)
    p.add_argument("--no-bos", action="store_true")
    p.add_argument("--no-eos", action="store_true")
    p.add_argument("--format", choices=("text", "records"), default="text")
    p.set_defaults(func=_cmd_lm_score)

    p = sub.add_parser("units", help="recognition-unit pipelines")
    usub = p.add_subparsers(dest="units_cmd", parser_class=_Parser)
    pc = usub.add_parser("convert")
    pc.add_argument("--scheme", choices=sorted(SCHEME_ALIASES), required=True)
    pc.add_argument("--in", dest="infile", required=True)
    pc.add_argument("--table", help="decomposition table override (syllable<TAB>initial<TAB>final)")
    pc.set_defaults(func=_cmd_units)
    pp = usub.add_parser("project")
    pp.add_argument("--scheme", choices=sorted(SCHEME_ALIASES), required=True)
    pp.add_argument("--in", dest="infile", required=True)
    pp.set_defaults(func=_cmd_units)
    pt = usub.add_parser("timit-syllables")
    pt.add_argument("--in", dest="infile", required=True)
    pt.add_argument("--vowel-set")
    pt.set_defaults(func=_cmd_units)
    pm = usub.add_parser("merge-vocab")
    pm.add_argument("vocab_a")
    pm.add_argument("vocab_b")
    pm.add_argument("--out", required=True)
    pm.add_argument("--allow-shared", action="store_true")
    pm.set_defaults(func=_cmd_units)

    p = sub.add_parser("eval", help="error rates, correlation, accent accuracy")
    p.add_argument("--ref", required=True)
    p.add_argument("--hyp", required=True)
    p.add_argument("--metric", choices=("ter", "sr", "corr", "accent"), required=True)
    p.add_argument("--format", choices=("text", "records"), default="text")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("synth", help="synthesize emissions for a target")
    p.add_argument("--target", required=True)
    p.add_argument("--vocab", required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--noise", type=float, default=0.0)
    p.add_argument("--confuse", action="append", metavar="A:B:MIX")
    p.add_argument("--frames-per-token", type=int, default=4)
    p.add_argument("--blank-gap", type=int, default=2)
    p.add_argument("--strip-fairseq-specials", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("experiment", help="run a config-driven experiment grid")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--format", choices=("text", "records"), default="text")
    p.set_defaults(func=_cmd_experiment)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not getattr(args, "func", None):
            parser.print_help(sys.stderr)
            return 1
        args.func(args, sys.stdout)
        return 0
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except SupradecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:  # argparse --help/--version
        return 0 if exc.code in (0, None) else 1
    except Exception as exc:  # noqa: BLE001 - invariant violations exit 3
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
