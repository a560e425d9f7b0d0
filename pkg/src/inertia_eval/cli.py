"""``inertia-eval`` command line.

Exit codes: 0 success, 1 usage error, 2 data error.  Results go to stdout,
diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import string
import sys
import time
from pathlib import Path

from . import align, flips, inertia, noise
from .bleu import BleuConfig, bootstrap_ci, corpus_bleu
from .corpus import load_corpus, load_parallel, load_scores, mix_plt, save_corpus
from .errors import DataError
from .report import InertiaReport, emit, file_digest, merge

logger = logging.getLogger("inertia_eval")

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def default_threads() -> int:
    env = os.environ.get("INERTIA_EVAL_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            logger.warning("ignoring non-integer INERTIA_EVAL_THREADS=%r", env)
    return os.cpu_count() or 1


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print a JSON report instead of text")
    common.add_argument("--threads", type=int, default=None, help="worker threads (default: $INERTIA_EVAL_THREADS or all cores)")
    common.add_argument("--label", default="system", help="system label used in report rows")
    common.add_argument("--timestamp", action="store_true", help="record the run time in the report metadata")
    return common


def _bleu_options() -> argparse.ArgumentParser:
    opts = argparse.ArgumentParser(add_help=False)
    opts.add_argument("--tokenize", choices=("13a", "whitespace", "none"), default="13a")
    opts.add_argument("--smooth", choices=("exp", "none"), default="exp")
    opts.add_argument("--max-order", type=int, default=4)
    opts.add_argument("--effective-order", action="store_true")
    return opts


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="inertia-eval", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    common, bleu_opts = _common(), _bleu_options()

    p = sub.add_parser("noise", parents=[common], help="inject synthetic misspellings")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--prob", type=float, default=0.1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--alphabet", default="a-z", help="'a-z', 'corpus' (characters seen in --input) or a file whose characters form the alphabet")
    p.add_argument("--strategies", default="del,ins,sub")

    p = sub.add_parser("bleu", parents=[common, bleu_opts], help="corpus BLEU")
    p.add_argument("--hyp", required=True)
    p.add_argument("--ref", required=True)
    p.add_argument("--bootstrap", type=int, default=0, metavar="N", help="paired bootstrap resamples for a 95%% interval")
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("consistency", parents=[common, bleu_opts], help="harmonic-mean BLEU between noisy and clean outputs")
    p.add_argument("--noisy", required=True)
    p.add_argument("--clean", required=True, action="append", help="repeat to average over several clean variants")

    p = sub.add_parser("robustness", parents=[common, bleu_opts], help="quality change under input noise")
    p.add_argument("--noisy-scores")
    p.add_argument("--clean-scores")
    p.add_argument("--noisy")
    p.add_argument("--clean")
    p.add_argument("--refs")

    p = sub.add_parser("stability", parents=[common, bleu_opts], help="similarity between two model versions' outputs")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--symmetrize", action="store_true")

    p = sub.add_parser("flips", parents=[common], help="negative flip rate / impact")
    p.add_argument("--old", required=True)
    p.add_argument("--new", required=True)
    p.add_argument("--mode", choices=("scalar", "categorical"), required=True)
    p.add_argument("--metric", choices=("nfr", "nfi"), default="nfr")
    p.add_argument("--annotators", type=int, default=None, help="expected annotator columns (scalar mode)")
    p.add_argument("--symmetrize", action="store_true")

    p = sub.add_parser("complexity", parents=[common], help="alignment-entropy complexity of a bitext")
    p.add_argument("--source", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--iters", type=int, default=5)
    p.add_argument("--p0", type=float, default=0.08)
    p.add_argument("--lambda", dest="tension", type=float, default=4.0)
    p.add_argument("--optimize-lambda", action="store_true")
    p.add_argument("--alpha", type=float, default=0.0, help="additive smoothing of expected counts")
    p.add_argument("--lowercase", action="store_true")
    p.add_argument("--sample", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dump-alignments", metavar="FILE")

    p = sub.add_parser("mix", parents=[common], help="append pseudo-labelled pairs to a bitext")
    for flag in ("--orig-src", "--orig-tgt", "--pl-src", "--pl-tgt", "--out-src", "--out-tgt"):
        p.add_argument(flag, required=True)
    p.add_argument("--ratio", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("report", help="merge JSON reports and render them")
    p.add_argument("--in", dest="inputs", nargs="+", required=True)
    p.add_argument("--format", choices=("json", "markdown", "csv"), default="markdown")
    return parser


def _bleu_config(args) -> BleuConfig:
    return BleuConfig(
        max_order=args.max_order,
        smoothing="exponential" if args.smooth == "exp" else "none",
        effective_order=args.effective_order,
        tokenizer=args.tokenize,
    )


def _digests(*paths) -> dict[str, str]:
    return {str(p): file_digest(p) for p in paths}


def _new_report(args, config: dict) -> InertiaReport:
    metadata = {"command": args.command, "config": config}
    if getattr(args, "timestamp", False):
        metadata["timestamps"] = {"created": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())}
    return InertiaReport(metadata=metadata)


def _bleu_echo(config: BleuConfig) -> dict:
    return {"bleu_signature": config.signature, "max_order": config.max_order}


def _cmd_noise(args, threads):
    corpus = load_corpus(args.input)
    if args.alphabet == "a-z":
        alphabet = string.ascii_lowercase
    elif args.alphabet == "corpus":
        alphabet = noise.observed_alphabet(corpus)
    else:
        alphabet = noise.observed_alphabet(load_corpus(args.alphabet))
    try:
        strategies = noise.parse_strategies(args.strategies)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    config = noise.NoiseConfig(p=args.prob, strategies=strategies, alphabet=alphabet, seed=args.seed)
    noisy = noise.misspell_corpus(corpus, config, threads)
    save_corpus(noisy, args.output)
    words = sum(len(line.split()) for line in corpus)
    changed = sum(a != b for x, y in zip(corpus, noisy) for a, b in zip(x.split(), y.split()))
    report = _new_report(args, {"prob": args.prob, "seed": args.seed, "strategies": list(config.strategies), "alphabet": alphabet})
    report.metadata["outputs"] = {args.output: file_digest(args.output), "words": words, "changed_words": changed}
    text = f"wrote {len(noisy)} lines to {args.output} ({changed}/{words} words changed)\n"
    return report, text


def _cmd_bleu(args, threads):
    hyp, ref = load_corpus(args.hyp), load_corpus(args.ref)
    config = _bleu_config(args)
    score = corpus_bleu(hyp, ref, config, threads)
    ci = None
    if args.bootstrap:
        ci = bootstrap_ci(hyp, ref, config, args.bootstrap, args.seed, threads)
    echo = _bleu_echo(config) | ({"bootstrap": args.bootstrap, "seed": args.seed} if ci else {})
    report = _new_report(args, echo)
    report.add(args.label, "bleu", score.score, ci, _digests(args.hyp, args.ref))
    text = f"bleu: {score.score:.4f}"
    if ci:
        text += f" (95% CI {ci[0]:.4f}-{ci[1]:.4f})"
    precisions = "/".join(f"{p:.4f}" for p in score.precisions)
    text += f"\nprecisions: {precisions}\nbrevity_penalty: {score.brevity_penalty:.4f}\nhyp_len: {score.hyp_len}\nref_len: {score.ref_len}\n"
    return report, text


def _cmd_consistency(args, threads):
    noisy = load_corpus(args.noisy)
    cleans = [load_corpus(p) for p in args.clean]
    config = _bleu_config(args)
    value = inertia.consistency_multi(noisy, cleans, config, threads)
    report = _new_report(args, _bleu_echo(config) | {"clean_variants": len(cleans)})
    report.add(args.label, "consistency", value, None, _digests(args.noisy, *args.clean))
    return report, f"consistency: {value:.4f}\n"


def _cmd_robustness(args, threads):
    score_mode = args.noisy_scores is not None or args.clean_scores is not None
    bleu_mode = any(v is not None for v in (args.noisy, args.clean, args.refs))
    if score_mode == bleu_mode:
        raise UsageError("give either --noisy-scores/--clean-scores or --noisy/--clean/--refs")
    if score_mode:
        if args.noisy_scores is None or args.clean_scores is None:
            raise UsageError("--noisy-scores and --clean-scores are both required")
        value = inertia.robustness(load_scores(args.noisy_scores, 1), load_scores(args.clean_scores, 1))
        report = _new_report(args, {"mode": "scores"})
        digests = _digests(args.noisy_scores, args.clean_scores)
    else:
        if None in (args.noisy, args.clean, args.refs):
            raise UsageError("--noisy, --clean and --refs are all required")
        config = _bleu_config(args)
        value = inertia.robustness_bleu(load_corpus(args.noisy), load_corpus(args.clean), load_corpus(args.refs), config, threads)
        report = _new_report(args, {"mode": "bleu"} | _bleu_echo(config))
        digests = _digests(args.noisy, args.clean, args.refs)
    report.add(args.label, "robustness", value, None, digests)
    return report, f"robustness: {value:.4f}\n"


def _cmd_stability(args, threads):
    a, b = load_corpus(args.a), load_corpus(args.b)
    config = _bleu_config(args)
    result = inertia.stability(a, b, config, threads)
    stab, em = result.stability, result.exact_match_rate
    if args.symmetrize:
        back = inertia.stability(b, a, config, threads)
        stab = inertia.symmetrize(stab, back.stability)
        em = inertia.symmetrize(em, back.exact_match_rate)
    report = _new_report(args, _bleu_echo(config) | {"symmetrize": args.symmetrize})
    digests = _digests(args.a, args.b)
    report.add(args.label, "stability", stab, None, digests)
    report.add(args.label, "exact_match", em, None, digests)
    return report, f"stability: {stab:.4f}\nem: {em:.4f}\n"


def _cmd_flips(args, threads):
    columns = args.annotators if args.mode == "scalar" else 1
    old, new = load_scores(args.old, columns), load_scores(args.new, columns)
    if args.mode == "scalar":
        if args.metric == "nfi":
            raise UsageError("NFI is only defined for categorical labels")
        fn = flips.nfr_scalar
    else:
        fn = flips.nfr_categorical if args.metric == "nfr" else flips.nfi_categorical
    value = fn(old, new)
    if args.symmetrize:
        value = inertia.symmetrize(value, fn(new, old))
    report = _new_report(args, {"mode": args.mode, "symmetrize": args.symmetrize})
    report.add(args.label, args.metric, value, None, _digests(args.old, args.new))
    return report, f"{args.metric}: {value:.4f}\n"


def _cmd_complexity(args, threads):
    source, target = load_parallel(args.source, args.target)
    config = align.AlignConfig(
        iterations=args.iters,
        p0=args.p0,
        diagonal_tension=args.tension,
        dirichlet_alpha=args.alpha,
        sample_size=args.sample,
        seed=args.seed,
        optimize_tension=args.optimize_lambda,
        lowercase=args.lowercase,
    )
    result = align.analyze_complexity(source, target, config)
    if args.dump_alignments:
        align.write_pharaoh(result.alignments, args.dump_alignments)
    echo = {
        "iterations": config.iterations,
        "p0": config.p0,
        "lambda": config.diagonal_tension,
        "final_lambda": result.model.diagonal_tension,
        "alpha": config.dirichlet_alpha,
        "sample": config.sample_size,
        "seed": config.seed,
        "lowercase": config.lowercase,
        "log_likelihoods": result.model.log_likelihoods,
    }
    report = _new_report(args, echo)
    report.add(args.label, "complexity", result.value, None, _digests(args.source, args.target))
    if args.dump_alignments:
        report.metadata["outputs"] = {args.dump_alignments: file_digest(args.dump_alignments)}
    return report, f"complexity: {result.value:.4f}\naligned_pairs: {len(result.alignments)}\n"


def _cmd_mix(args, threads):
    orig_src, orig_tgt = load_parallel(args.orig_src, args.orig_tgt)
    pl_src, pl_tgt = load_parallel(args.pl_src, args.pl_tgt)
    src, tgt = mix_plt(orig_src, orig_tgt, pl_src, pl_tgt, args.ratio, args.seed)
    save_corpus(src, args.out_src)
    save_corpus(tgt, args.out_tgt)
    report = _new_report(args, {"ratio": args.ratio, "seed": args.seed})
    report.metadata["outputs"] = {
        args.out_src: file_digest(args.out_src),
        args.out_tgt: file_digest(args.out_tgt),
        "pairs": len(src),
    }
    return report, f"wrote {len(src)} pairs ({len(orig_src)} original + {len(src) - len(orig_src)} pseudo-labelled)\n"


COMMANDS = {
    "noise": _cmd_noise,
    "bleu": _cmd_bleu,
    "consistency": _cmd_consistency,
    "robustness": _cmd_robustness,
    "stability": _cmd_stability,
    "flips": _cmd_flips,
    "complexity": _cmd_complexity,
    "mix": _cmd_mix,
}


def _cmd_report(args) -> str:
    reports = []
    for path in args.inputs:
        text = Path(path).read_text(encoding="utf-8") if Path(path).is_file() else None
        if text is None:
            raise DataError(f"file not found: {path}")
        try:
            reports.append(InertiaReport.from_json(text))
        except (ValueError, KeyError, TypeError) as exc:
            raise DataError(f"{path}: not a valid report ({exc})") from None
    return emit(merge(reports), args.format)


def _to_json(report: InertiaReport) -> str:
    if report.rows:
        return emit(report, "json")
    # file-producing commands report outputs only; same schema, no metric rows
    return json.dumps(report.to_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "report":
            sys.stdout.write(_cmd_report(args))
            return EXIT_OK
        threads = args.threads if args.threads is not None else default_threads()
        if threads < 1:
            raise UsageError("--threads must be >= 1")
        report, text = COMMANDS[args.command](args, threads)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"inertia-eval: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, ValueError, OSError) as exc:
        print(f"inertia-eval: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    sys.stdout.write(_to_json(report) if args.json else text)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, stream=sys.stderr, format="%(levelname)s: %(message)s")
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
