"""Batch command line: convert, stats, split, train, tag and the evaluators.

Exit status is 0 on success, 1 on a usage error and 2 on a data error.
"""

from __future__ import annotations

import argparse
import sys
from typing import List, Optional, Sequence

from . import corpus_io, metrics, tagger
from .core import EojeolError, LEVELS
from .granularity import SyntaxTree, convert_tree, merge_to_level1, segment_sentence

CORPUS_FORMATS = ("sejong-morph", "sejong-tree", "conllu")
OUTPUT_FORMATS = ("sejong-morph", "sejong-tree", "conllu", "tokens", "bracketed")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _level(text: str) -> int:
    try:
        lv = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a level: {text!r}") from None
    if lv not in LEVELS:
        raise argparse.ArgumentTypeError(f"level must be 1..5, got {lv}")
    return lv


def _levels(text: str) -> List[int]:
    """``3``, ``1..5`` or ``1,3,5``."""
    if ".." in text:
        lo, hi = text.split("..", 1)
        a, b = _level(lo), _level(hi)
        if a > b:
            raise argparse.ArgumentTypeError(f"empty level range {text!r}")
        return list(range(a, b + 1))
    return sorted({_level(t) for t in text.split(",")})


def _fraction(text: str) -> float:
    try:
        f = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0 < f < 1:
        raise argparse.ArgumentTypeError("train fraction must be in (0, 1)")
    return f


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _load(path: str, fmt: str):
    """Sentences and, for tree input, the level-1 trees."""
    text = _read(path)
    if fmt == "sejong-morph":
        return corpus_io.read_morph_corpus(text), None
    if fmt == "sejong-tree":
        trees = corpus_io.read_treebank(text)
        return [t.sentence for t in trees], trees
    if fmt == "conllu":
        return [s.source for s in corpus_io.read_conllu(text)], None
    raise UsageError(f"unsupported input format {fmt!r}")


def _require_trees(trees: Optional[List[SyntaxTree]], fmt: str) -> List[SyntaxTree]:
    if trees is None:
        raise EojeolError(f"output format {fmt} needs tree input (--from sejong-tree)")
    return trees


# -- subcommands --------------------------------------------------------------

def cmd_convert(args) -> None:
    sentences, trees = _load(args.input, args.source_format)
    fmt = args.target_format
    if fmt == "sejong-morph":
        out = corpus_io.write_morph_corpus(sentences)
    elif fmt == "sejong-tree":
        if args.level != 1:
            raise EojeolError("sejong-tree output holds level-1 trees only")
        out = corpus_io.write_treebank(_require_trees(trees, fmt))
    elif fmt == "bracketed":
        out = corpus_io.write_bracketed(
            [convert_tree(t, args.level) for t in _require_trees(trees, fmt)])
    else:
        segs = [segment_sentence(s, args.level) for s in sentences]
        out = corpus_io.write_conllu(segs) if fmt == "conllu" else corpus_io.write_tokens(segs)
    _write(args.output, out)


def cmd_stats(args) -> None:
    sentences, _ = _load(args.input, args.format)
    rows = [metrics.corpus_stats(sentences, lv) for lv in args.level]
    out = metrics.format_stats_machine(rows) if args.machine else metrics.format_stats_table(rows)
    _write(args.output, out)


def split_indices(count: int, train_fraction: float = 0.9, seed: int = 0):
    """Every n-th item (n = 1/(1 - train_fraction), rounded) goes to
    evaluation; ``seed`` shifts which residue class that is."""
    n = max(2, round(1 / (1 - train_fraction)))
    offset = seed % n
    held = [i for i in range(count) if (i + offset) % n == n - 1]
    held_set = set(held)
    return [i for i in range(count) if i not in held_set], held


def cmd_split(args) -> None:
    sentences, trees = _load(args.input, args.format)
    train_idx, eval_idx = split_indices(len(sentences), args.train_fraction, args.seed)

    def dump(idx: Sequence[int]) -> str:
        if args.format == "sejong-tree":
            return corpus_io.write_treebank([trees[i] for i in idx])
        if args.format == "conllu":
            return corpus_io.write_conllu([segment_sentence(sentences[i], 5) for i in idx])
        return corpus_io.write_morph_corpus([sentences[i] for i in idx])

    _write(args.train_output, dump(train_idx))
    _write(args.eval_output, dump(eval_idx))
    print(f"train = {len(train_idx)}\neval = {len(eval_idx)}")


def cmd_train(args) -> None:
    sentences, _ = _load(args.input, args.format)
    model = tagger.train(sentences, args.level, args.smoothing_k)
    _write(args.model, model.dumps())


def cmd_tag(args) -> None:
    model = tagger.TaggerModel.loads(_read(args.model))
    lines = [line.split() for line in _read(args.input).splitlines()]
    segs = [tagger.analyze(model, words, str(n))
            for n, words in enumerate(lines, 1) if words]
    out = corpus_io.write_conllu(segs) if args.to == "conllu" else corpus_io.write_tokens(segs)
    _write(args.output, out)


def _gold_segmented(path: str, fmt: str, level: Optional[int]):
    if fmt == "conllu":
        return corpus_io.read_conllu(_read(path), level)
    if level is None:
        raise UsageError("--level is required with --gold-format " + fmt)
    sentences, _ = _load(path, fmt)
    return [segment_sentence(s, level) for s in sentences]


def cmd_eval_seg(args) -> None:
    gold = _gold_segmented(args.gold, args.gold_format, args.level)
    pred = corpus_io.read_conllu(_read(args.pred))
    print(metrics.format_prf(metrics.segmentation_prf(gold, pred)), end="")


def cmd_eval_pos(args) -> None:
    gold, _ = _load(args.gold, args.gold_format)
    pred = corpus_io.read_conllu(_read(args.pred))
    acc = metrics.pos_accuracy(gold, [merge_to_level1(p) for p in pred])
    print(f"accuracy = {100 * float(acc):.2f}")


def cmd_eval_parse(args) -> None:
    gold = corpus_io.read_bracketed(_read(args.gold))
    pred = corpus_io.read_bracketed(_read(args.pred))
    report = metrics.bracket_prf(gold, pred, labeled=not args.unlabeled,
                                 include_root=not args.no_root,
                                 strip_functional_tags=args.strip_functional_tags)
    print(metrics.format_prf(report), end="")


def cmd_eval_bleu(args) -> None:
    refs = _read(args.reference).splitlines()
    hyps = _read(args.hypothesis).splitlines()
    print(f"bleu = {metrics.bleu(refs, hyps, args.max_n):.2f}")


# -- argument parsing -----------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="eojeol", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    c = sub.add_parser("convert", help="re-segment a corpus at a granularity level")
    c.add_argument("--level", type=_level, required=True, help="target level 1..5")
    c.add_argument("--from", dest="source_format", choices=CORPUS_FORMATS, required=True)
    c.add_argument("--to", dest="target_format", choices=OUTPUT_FORMATS, required=True,
                   help="sejong-tree and bracketed output need sejong-tree input")
    c.add_argument("input", help="input file, or - for stdin")
    c.add_argument("output", help="output file, or - for stdout")
    c.set_defaults(func=cmd_convert)

    s = sub.add_parser("stats", help="token count, MCW ratio and preterminal labels per level")
    s.add_argument("--level", type=_levels, required=True, help="a level, a range 1..5 or a list 1,3,5")
    s.add_argument("--format", choices=CORPUS_FORMATS, default="sejong-morph")
    s.add_argument("--machine", action="store_true", help="key=value lines instead of a table")
    s.add_argument("input")
    s.add_argument("-o", "--output", default="-")
    s.set_defaults(func=cmd_stats)

    sp = sub.add_parser("split", help="deterministic train/eval split preserving order")
    sp.add_argument("--format", choices=CORPUS_FORMATS, default="sejong-morph")
    sp.add_argument("--train-fraction", type=_fraction, default=0.9)
    sp.add_argument("--seed", type=int, default=0, help="shifts which sentences are held out")
    sp.add_argument("input")
    sp.add_argument("train_output")
    sp.add_argument("eval_output")
    sp.set_defaults(func=cmd_split)

    t = sub.add_parser("train", help="train the HMM tagger at a level")
    t.add_argument("--level", type=_level, required=True)
    t.add_argument("--format", choices=CORPUS_FORMATS, default="sejong-morph")
    t.add_argument("--smoothing-k", type=float, default=0.1)
    t.add_argument("input")
    t.add_argument("model")
    t.set_defaults(func=cmd_train)

    g = sub.add_parser("tag", help="segment and tag raw text, one sentence per line")
    g.add_argument("--to", choices=("conllu", "tokens"), default="conllu")
    g.add_argument("model")
    g.add_argument("input")
    g.add_argument("output")
    g.set_defaults(func=cmd_tag)

    e = sub.add_parser("eval-seg", help="segmentation P/R/F1 of predicted CoNLL-U")
    e.add_argument("--gold-format", choices=CORPUS_FORMATS, default="conllu")
    e.add_argument("--level", type=_level, help="gold level (required unless gold is CoNLL-U)")
    e.add_argument("gold")
    e.add_argument("pred", help="predicted CoNLL-U")
    e.set_defaults(func=cmd_eval_seg)

    e = sub.add_parser("eval-pos", help="eojeol-level POS accuracy of predicted CoNLL-U")
    e.add_argument("--gold-format", choices=CORPUS_FORMATS, default="sejong-morph")
    e.add_argument("gold")
    e.add_argument("pred", help="predicted CoNLL-U")
    e.set_defaults(func=cmd_eval_pos)

    e = sub.add_parser("eval-parse", help="bracket P/R/F1 between bracketed tree files")
    e.add_argument("--unlabeled", action="store_true")
    e.add_argument("--no-root", action="store_true", help="do not score the root span")
    e.add_argument("--strip-functional-tags", action="store_true",
                   help="compare NP-SBJ as NP")
    e.add_argument("gold")
    e.add_argument("pred")
    e.set_defaults(func=cmd_eval_parse)

    e = sub.add_parser("eval-bleu", help="corpus BLEU, one tokenized sentence per line")
    e.add_argument("--max-n", type=int, default=4)
    e.add_argument("reference")
    e.add_argument("hypothesis")
    e.set_defaults(func=cmd_eval_bleu)
    return p


def run(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (EojeolError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    return 0


def main() -> None:
    sys.exit(run())
