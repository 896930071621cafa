"""Command-line entry point wiring the library into reproducible pipelines.

Exit codes: 0 success, 2 usage or configuration, 3 data or format problems
(missing files, malformed inputs, misaligned corpora), 4 numeric failure.
All randomness flows from a single ``--seed`` (default 1917); identical
invocations on identical inputs produce byte-identical outputs.
"""

from __future__ import annotations

import argparse
import sys
from collections import Counter

from . import analysis, bpe, corpus, crf, metrics, morf
from .errors import (
    ConfigError,
    FormatError,
    NumericError,
    ParseError,
    PolysegError,
)

DEFAULT_SEED = 1917
EOW = "eow"  # end-of-word marker on each word's final piece (bpe family)
CONT = "cont"  # continuation marker on each word's non-final pieces
DEFAULT_MARKERS = {EOW: bpe.DEFAULT_MARKER, CONT: "@@"}


# -- segmented-text rendering ------------------------------------------------


def render_segmented(pieces_per_token, style: str, marker: str) -> str:
    """One line of segmented text from per-token piece lists."""
    out = []
    for pieces in pieces_per_token:
        if style == EOW:
            out.extend(pieces)  # final piece already carries the marker
        else:
            out.extend([p + marker for p in pieces[:-1]] + [pieces[-1]])
    return " ".join(out)


def desegment_line(line: str, style: str, marker: str, lineno: int = 1) -> str:
    """Invert :func:`render_segmented`; raises FormatError with line/column
    on stray or missing markers."""
    words = []
    current = ""
    col = 1
    for piece in line.split(" "):
        if style == EOW:
            idx = piece.find(marker)
            if idx >= 0 and idx != len(piece) - len(marker):
                raise FormatError(
                    "line %d, column %d: marker inside piece %r" % (lineno, col, piece)
                )
            if piece.endswith(marker):
                words.append(current + piece[: -len(marker)])
                current = ""
            else:
                current += piece
        else:
            idx = piece.find(marker)
            if idx >= 0 and idx != len(piece) - len(marker):
                raise FormatError(
                    "line %d, column %d: marker inside piece %r" % (lineno, col, piece)
                )
            if piece.endswith(marker):
                current += piece[: -len(marker)]
            else:
                words.append(current + piece)
                current = ""
        col += len(piece) + 1
    if current:
        raise FormatError(
            "line %d, column %d: unterminated word %r at end of line"
            % (lineno, col - 1, current)
        )
    return " ".join(words)


def _read_text(path) -> list[str]:
    try:
        with open(path, encoding="utf-8") as f:
            return f.read().splitlines()
    except OSError as exc:
        raise ParseError("cannot read %s: %s" % (path, exc)) from exc


def _write_text(path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)


def _emit(args, text: str) -> None:
    if getattr(args, "out", None):
        _write_text(args.out, text)
    else:
        sys.stdout.write(text)


def _sep(args) -> str:
    return "," if getattr(args, "format", "tsv") == "csv" else "\t"


# -- subcommand implementations -----------------------------------------------


def _cmd_stats(args) -> int:
    pc = corpus.load_parallel(args.source, args.target)
    ref = None
    if args.train_source and args.train_target:
        ref = corpus.load_parallel(args.train_source, args.train_target)
    stats = corpus.corpus_stats(pc, reference_train=ref)
    _emit(args, corpus.stats_table(stats, sep=_sep(args)))
    print("stats: S=%d N=%s V=%s" % (stats.s, list(stats.n), list(stats.v)))
    return 0


def _cmd_seg_stats(args) -> int:
    data = corpus.load_segmentation(args.data, mode=args.mode)
    ref = corpus.load_segmentation(args.train, mode=args.mode) if args.train else None
    stats = corpus.seg_stats(data, reference_train=ref)
    _emit(args, corpus.seg_stats_table(stats, sep=_sep(args)))
    print(
        "seg-stats: words=%d morphs=%d morphs/word=%.2f"
        % (stats.words, stats.morphs, stats.morphs_per_word)
    )
    return 0


def _word_counts(path) -> Counter:
    counts = Counter()
    for line in _read_text(path):
        counts.update(line.split())
    if not counts:
        raise ParseError("%s: no tokens found" % (path,))
    return counts


def _cmd_train(args) -> int:
    if args.method == "bpe":
        model = bpe.train_bpe(_word_counts(args.input), args.vocab_size)
        bpe.save_model(model, args.model)
        print("trained bpe: vocab size %d, %d merges -> %s"
              % (len(model.vocab), len(model.merges), args.model))
    elif args.method == "morfessor":
        model = morf.train_baseline(
            _word_counts(args.input),
            alpha=args.alpha,
            seed=args.seed,
            epsilon=args.epsilon,
            init=args.init,
            restarts=args.restarts,
        )
        morf.save_model(model, args.model)
        print("trained morfessor: %d morphs -> %s" % (len(model.lexicon), args.model))
    elif args.method == "lmvr":
        model = morf.train_lmvr(
            _word_counts(args.input),
            alpha=args.alpha,
            max_lexicon_size=args.cap,
            seed=args.seed,
            epsilon=args.epsilon,
            init=args.init,
            restarts=args.restarts,
        )
        morf.save_model(model, args.model)
        print("trained lmvr: %d morphs (cap %s) -> %s"
              % (len(model.lexicon), args.cap, args.model))
    elif args.method == "flatcat":
        counts = _word_counts(args.input)
        base = morf.train_baseline(
            counts, alpha=args.alpha, seed=args.seed, epsilon=args.epsilon,
            init=args.init, restarts=args.restarts,
        )
        model = morf.train_flatcat(counts, base, seed=args.seed)
        morf.save_model(model, args.model)
        print("trained flatcat: %d morphs -> %s" % (len(model.lexicon), args.model))
    elif args.method == "crf":
        data = corpus.load_segmentation(args.input, mode=args.mode)
        model = crf.train_crf(
            data,
            delta=args.delta,
            l2=args.l2,
            max_iters=args.max_iters,
            tol=args.tol,
            seed=args.seed,
        )
        crf.save_model(model, args.model)
        print("trained crf: %d features -> %s" % (len(model.feat_index), args.model))
    else:
        raise ConfigError("unknown method %r" % (args.method,))
    return 0


def _model_family(path) -> str:
    head = _read_text(path)
    if not head:
        raise ParseError("%s: empty model file" % (path,))
    return head[0].split(" ", 1)[0]


def _cmd_segment(args) -> int:
    family = _model_family(args.model)
    lines = _read_text(args.input)
    out = []
    if family == "bpe":
        model = bpe.load_model(args.model)
        style, marker = EOW, model.boundary_marker
        for line in lines:
            pieces = [bpe.encode(model, tok) for tok in line.split()]
            out.append(render_segmented(pieces, style, marker))
    elif family == "morf":
        model = morf.load_model(args.model)
        style, marker = CONT, DEFAULT_MARKERS[CONT]
        for line in lines:
            pieces = [morf.viterbi_segment(model, tok) for tok in line.split()]
            out.append(render_segmented(pieces, style, marker))
    elif family == "crf":
        model = crf.load_model(args.model)
        style, marker = CONT, DEFAULT_MARKERS[CONT]
        for line in lines:
            pieces = [list(crf.decode(model, tok).morphs) for tok in line.split()]
            out.append(render_segmented(pieces, style, marker))
    else:
        raise ParseError("%s: unknown model family %r" % (args.model, family))
    text = "\n".join(out) + "\n" if out else ""
    if args.output:
        _write_text(args.output, text)
    else:
        sys.stdout.write(text)
    print("segmented %d lines (%s style, marker %r)" % (len(out), style, marker),
          file=sys.stderr)
    return 0


def _cmd_desegment(args) -> int:
    style = args.style
    marker = args.marker
    if args.model:
        family = _model_family(args.model)
        style = EOW if family == "bpe" else CONT
        if family == "bpe":
            marker = bpe.load_model(args.model).boundary_marker
    if style is None:
        raise ConfigError("desegment needs --style or --model")
    if marker is None:
        marker = DEFAULT_MARKERS[style]
    lines = _read_text(args.input)
    out = [desegment_line(line, style, marker, lineno=i) for i, line in enumerate(lines, 1)]
    text = "\n".join(out) + "\n" if out else ""
    if args.output:
        _write_text(args.output, text)
    else:
        sys.stdout.write(text)
    print("desegmented %d lines" % (len(out),), file=sys.stderr)
    return 0


def _cmd_eval_seg(args) -> int:
    pred = corpus.load_segmentation(args.pred, mode=args.pred_mode)
    gold = corpus.load_segmentation(args.gold, mode=args.gold_mode)
    if args.metric == "boundary":
        score = metrics.boundary_f1(pred, gold)
        name = "boundary-f1"
    elif args.metric == "emma":
        score = metrics.emma_f1(pred, gold)
        name = "emma-f1"
    else:
        raise ConfigError("unknown segmentation metric %r" % (args.metric,))
    sep = _sep(args)
    table = sep.join(("metric", "precision", "recall", "f1", "accuracy")) + "\n"
    table += sep.join(
        (name, "%.4f" % score.precision, "%.4f" % score.recall,
         "%.4f" % score.f1, "%.4f" % score.accuracy)
    ) + "\n"
    _emit(args, table)
    print("%s: f1=%.4f accuracy=%.4f" % (name, score.f1, score.accuracy))
    return 0


def _cmd_eval_mt(args) -> int:
    hyps = _read_text(args.hyp)
    refs = _read_text(args.ref)
    report = metrics.metric_report(args.metric, hyps, refs)
    sep = _sep(args)
    table = sep.join(("metric", "score", "signature")) + "\n"
    table += sep.join((report.metric, "%.4f" % report.score, report.signature)) + "\n"
    _emit(args, table)
    print("%s = %.4f (%s)" % (report.metric, report.score, report.signature))
    return 0


def _cmd_signif(args) -> int:
    sys_a = _read_text(args.sys_a)
    sys_b = _read_text(args.sys_b)
    refs = _read_text(args.ref)
    report_a = metrics.metric_report(args.metric, sys_a, refs)
    report_b = metrics.metric_report(args.metric, sys_b, refs)
    p = metrics.paired_randomization_test(
        sys_a, sys_b, refs, metric=args.metric, trials=args.trials, seed=args.seed
    )
    sep = _sep(args)
    table = sep.join(
        ("metric", "score_a", "score_b", "delta", "p_value", "trials",
         "seed", "classification", "signature")
    ) + "\n"
    table += sep.join(
        (args.metric, "%.4f" % report_a.score, "%.4f" % report_b.score,
         "%.4f" % (report_a.score - report_b.score), repr(p), str(args.trials),
         str(args.seed), metrics.significance_mark(p), report_a.signature)
    ) + "\n"
    _emit(args, table)
    print("p=%s (%s)" % (repr(p), metrics.significance_mark(p)))
    return 0


def _cmd_analyze(args) -> int:
    if args.what == "richness":
        model = morf.load_model(args.probe_model)
        sentences = [line.split() for line in _read_text(args.input)]
        scores = [float(x) for x in _read_text(args.scores)]
        records = analysis.richness_table(model, sentences, scores)
        _emit(args, analysis.richness_csv(records))
        if args.bins_out:
            bins = analysis.bin_richness(records, bins=args.bins)
            _write_text(args.bins_out, analysis.richness_bins_csv(bins))
        print("richness: %d records" % (len(records),))
    elif args.what == "unk":
        vocab = set(_read_text(args.vocab))
        segmented = []
        for line in _read_text(args.input):
            segmented.append([[piece] for piece in line.split()])
        report = analysis.unk_report(segmented, vocab, system=args.system)
        _emit(args, analysis.unk_csv([report]))
        print(
            "unk: %d/%d pieces out of vocabulary (rate %.4f)"
            % (report.unk_tokens, report.total_tokens, report.unk_rate)
        )
    else:
        raise ConfigError("unknown analysis %r" % (args.what,))
    return 0


# -- argument parsing ----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polyseg",
        description="subword/morphological segmentation and MT evaluation toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stats", help="parallel-corpus statistics")
    p.add_argument("--source", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--train-source")
    p.add_argument("--train-target")
    p.add_argument("--format", choices=("tsv", "csv"), default="tsv")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("seg-stats", help="segmentation-dataset statistics")
    p.add_argument("--data", required=True)
    p.add_argument("--mode", choices=corpus.MODES, default=corpus.SURFACE)
    p.add_argument("--train")
    p.add_argument("--format", choices=("tsv", "csv"), default="tsv")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_seg_stats)

    p = sub.add_parser("train", help="train a segmentation model")
    p.add_argument("--method", required=True,
                   choices=("bpe", "morfessor", "lmvr", "flatcat", "crf"))
    p.add_argument("--input", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--vocab-size", type=int, default=5000)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--cap", type=int, default=None)
    p.add_argument("--epsilon", type=float, default=0.1)
    p.add_argument("--init", choices=("random", "words", "chars"), default="random")
    p.add_argument("--restarts", type=int, default=1)
    p.add_argument("--delta", type=int, default=3)
    p.add_argument("--l2", type=float, default=0.01)
    p.add_argument("--max-iters", type=int, default=200)
    p.add_argument("--tol", type=float, default=1e-5)
    p.add_argument("--mode", choices=corpus.MODES, default=corpus.SURFACE)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("segment", help="segment a text file with a trained model")
    p.add_argument("--model", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--output")
    p.set_defaults(func=_cmd_segment)

    p = sub.add_parser("desegment", help="undo segmentation markers")
    p.add_argument("--input", required=True)
    p.add_argument("--output")
    p.add_argument("--model", help="read the marker convention from this model file")
    p.add_argument("--style", choices=(EOW, CONT))
    p.add_argument("--marker")
    p.set_defaults(func=_cmd_desegment)

    p = sub.add_parser("eval-seg", help="segmentation quality against gold")
    p.add_argument("--pred", required=True)
    p.add_argument("--gold", required=True)
    p.add_argument("--metric", choices=("boundary", "emma"), default="emma")
    p.add_argument("--pred-mode", choices=corpus.MODES, default=corpus.SURFACE)
    p.add_argument("--gold-mode", choices=corpus.MODES, default=corpus.SURFACE)
    p.add_argument("--format", choices=("tsv", "csv"), default="tsv")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_eval_seg)

    p = sub.add_parser("eval-mt", help="translation quality against references")
    p.add_argument("--hyp", required=True)
    p.add_argument("--ref", required=True)
    p.add_argument("--metric", choices=("bleu", "chrf"), required=True)
    p.add_argument("--format", choices=("tsv", "csv"), default="tsv")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_eval_mt)

    p = sub.add_parser("signif", help="paired randomization significance test")
    p.add_argument("--sys-a", required=True)
    p.add_argument("--sys-b", required=True)
    p.add_argument("--ref", required=True)
    p.add_argument("--metric", choices=("bleu", "chrf"), required=True)
    p.add_argument("--trials", type=int, default=10000)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--format", choices=("tsv", "csv"), default="tsv")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_signif)

    p = sub.add_parser("analyze", help="richness and UNK diagnostics")
    p.add_argument("what", choices=("richness", "unk"))
    p.add_argument("--probe-model")
    p.add_argument("--input", required=True)
    p.add_argument("--scores")
    p.add_argument("--vocab")
    p.add_argument("--system", default="system")
    p.add_argument("--bins", type=int, default=10)
    p.add_argument("--bins-out")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_analyze)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print("polyseg: configuration error: %s" % (exc,), file=sys.stderr)
        return 2
    except NumericError as exc:
        print("polyseg: numeric failure: %s" % (exc,), file=sys.stderr)
        return 4
    except PolysegError as exc:
        print("polyseg: %s" % (exc,), file=sys.stderr)
        return 3
    except (OSError, ValueError) as exc:
        print("polyseg: %s" % (exc,), file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
