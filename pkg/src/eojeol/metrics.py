"""Segmentation P/R/F1, eojeol-level POS accuracy, bracket P/R/F1, BLEU and
corpus statistics, plus text renderings of the results."""

from __future__ import annotations

import math
import warnings
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from .core import AlignmentError, EojeolError, Sentence, check_level
from .granularity import (
    Leaf,
    Phrase,
    SegmentedSentence,
    SyntaxTree,
    analysis_strings,
    segment_sentence,
)


@dataclass(frozen=True)
class PrfReport:
    precision: Fraction
    recall: Fraction
    f1: Fraction
    relevant: int
    retrieved: int
    matched: int
    skipped: int = 0

    @classmethod
    def from_counts(cls, relevant: int, retrieved: int, matched: int, skipped: int = 0):
        p = Fraction(matched, retrieved) if retrieved else Fraction(0)
        r = Fraction(matched, relevant) if relevant else Fraction(0)
        f = 2 * p * r / (p + r) if p + r else Fraction(0)
        return cls(p, r, f, relevant, retrieved, matched, skipped)


def _segments(seg: SegmentedSentence) -> List[Counter]:
    """Per eojeol, the multiset of (start, end, form) spans over the
    concatenated token forms of that eojeol."""
    out = [Counter() for _ in seg.source.eojeols]
    offsets = [0] * len(out)
    for t in seg.tokens:
        i = t.eojeol_index
        start = offsets[i]
        offsets[i] += len(t.rendered_form)
        out[i][(start, offsets[i], t.rendered_form)] += 1
    return out


def segmentation_prf(gold: Sequence[SegmentedSentence],
                     pred: Sequence[SegmentedSentence]) -> PrfReport:
    if len(gold) != len(pred):
        raise AlignmentError(f"{len(gold)} gold vs {len(pred)} predicted sentences")
    relevant = retrieved = matched = 0
    for n, (g, p) in enumerate(zip(gold, pred)):
        gs = [e.surface for e in g.source.eojeols]
        ps = [e.surface for e in p.source.eojeols]
        if gs != ps:
            raise AlignmentError(f"sentence {n}: eojeols differ ({' '.join(gs)!r} vs {' '.join(ps)!r})")
        for ge, pe in zip(_segments(g), _segments(p)):
            relevant += sum(ge.values())
            retrieved += sum(pe.values())
            matched += sum((ge & pe).values())
    return PrfReport.from_counts(relevant, retrieved, matched)


def pos_accuracy(gold: Sequence[Sentence],
                 pred: Sequence[Sequence[Tuple[str, str]]]) -> Fraction:
    """Share of eojeols whose full analysis string matches gold exactly.

    ``pred`` holds per-sentence ``(surface, analysis)`` pairs as produced by
    :func:`eojeol.granularity.merge_to_level1`.
    """
    if len(gold) != len(pred):
        raise AlignmentError(f"{len(gold)} gold vs {len(pred)} predicted sentences")
    total = correct = 0
    for n, (g, p) in enumerate(zip(gold, pred)):
        ga = analysis_strings(g)
        if len(ga) != len(p):
            raise AlignmentError(f"sentence {n}: {len(ga)} gold vs {len(p)} predicted eojeols")
        total += len(ga)
        correct += sum(1 for (_, a), (_, b) in zip(ga, p) if a == b)
    if not total:
        raise AlignmentError("no eojeols to score")
    return Fraction(correct, total)


# -- bracketing -----------------------------------------------------------------

def _strip_function(label: str) -> str:
    if label.startswith("-") or "-" not in label:
        return label
    return label.split("-", 1)[0]


def constituents(tree: SyntaxTree, labeled: bool = True, include_root: bool = True,
                 strip_functional_tags: bool = False) -> Tuple[Counter, int]:
    """Multiset of (label, start, end) over non-preterminal phrases, and the
    terminal count.

    Positions count morphemes: a preterminal tagged ``A+B+C`` spans three.
    That is the terminal sequence of the tree expanded to level 5, so trees
    at different levels are scored on the same footing.
    """
    out: Counter = Counter()

    def walk(node, start: int) -> int:
        if isinstance(node, Leaf):
            return start + node.token.size
        end = start
        for c in node.children:
            end = walk(c, end)
        if not node.is_preterminal and (include_root or node is not tree.root):
            label = node.label
            if strip_functional_tags:
                label = _strip_function(label)
            out[(label if labeled else "", start, end)] += 1
        return end

    n = walk(tree.root, 0)
    return out, n


def bracket_prf(gold: Sequence[SyntaxTree], pred: Sequence[SyntaxTree], labeled: bool = True,
                include_root: bool = True, strip_functional_tags: bool = False) -> PrfReport:
    """EVALB-style bracket scoring. Sentences whose terminal counts differ
    are skipped and counted in ``skipped``."""
    if len(gold) != len(pred):
        raise AlignmentError(f"{len(gold)} gold vs {len(pred)} predicted trees")
    relevant = retrieved = matched = skipped = 0
    for n, (g, p) in enumerate(zip(gold, pred)):
        gc, gn = constituents(g, labeled, include_root, strip_functional_tags)
        pc, pn = constituents(p, labeled, include_root, strip_functional_tags)
        if gn != pn:
            skipped += 1
            warnings.warn(f"tree {n}: {gn} gold vs {pn} predicted terminals, skipped")
            continue
        relevant += sum(gc.values())
        retrieved += sum(pc.values())
        matched += sum((gc & pc).values())
    return PrfReport.from_counts(relevant, retrieved, matched, skipped)


# -- BLEU -------------------------------------------------------------------------

def _ngrams(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def bleu(references: Sequence[Union[str, Sequence[str]]],
         hypotheses: Sequence[Union[str, Sequence[str]]], max_n: int = 4) -> float:
    """Corpus BLEU in [0, 100] with one reference per line, no smoothing.

    Any zero n-gram precision makes the score 0, as multi-bleu.perl does.
    """
    if len(references) != len(hypotheses):
        raise AlignmentError(f"{len(references)} references vs {len(hypotheses)} hypotheses")
    if not references:
        raise EojeolError("empty corpus")
    correct = [0] * max_n
    total = [0] * max_n
    ref_len = hyp_len = 0
    for ref, hyp in zip(references, hypotheses):
        r = ref.split() if isinstance(ref, str) else list(ref)
        h = hyp.split() if isinstance(hyp, str) else list(hyp)
        ref_len += len(r)
        hyp_len += len(h)
        for n in range(1, max_n + 1):
            hc = _ngrams(h, n)
            rc = _ngrams(r, n)
            total[n - 1] += sum(hc.values())
            correct[n - 1] += sum(min(c, rc[g]) for g, c in hc.items())
    if hyp_len == 0 or any(c == 0 for c in correct):
        return 0.0
    log_p = sum(math.log(c / t) for c, t in zip(correct, total)) / max_n
    bp = math.exp(1 - ref_len / hyp_len) if hyp_len < ref_len else 1.0
    return 100.0 * bp * math.exp(log_p)


# -- corpus statistics ------------------------------------------------------------

@dataclass(frozen=True)
class StatsRow:
    level: int
    token_count: int
    mcw_ratio: Fraction
    immediate_nt_count: int


def corpus_stats(corpus: Iterable[Union[Sentence, SyntaxTree]], level: int) -> StatsRow:
    """Token count, morphologically-complex-word ratio and the number of
    distinct preterminal labels at ``level``."""
    check_level(level)
    tokens = complex_ = 0
    labels = set()
    for item in corpus:
        sent = item.sentence if isinstance(item, SyntaxTree) else item
        if sent is None:
            raise EojeolError("tree without sentence provenance")
        seg = segment_sentence(sent, level)
        for t in seg.tokens:
            tokens += 1
            complex_ += t.size >= 2
            labels.add(t.composite_tag)
    if not tokens:
        raise EojeolError("empty corpus")
    return StatsRow(level, tokens, Fraction(complex_, tokens), len(labels))


# -- report rendering -------------------------------------------------------------

def _table(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    widths = [max(len(r[i]) for r in [header, *rows]) for i in range(len(header))]
    lines = []
    for r in [header, *rows]:
        cells = [r[0].ljust(widths[0])] + [c.rjust(w) for c, w in zip(r[1:], widths[1:])]
        lines.append("  ".join(cells).rstrip())
    return "\n".join(lines) + "\n"


def format_stats_table(rows: Sequence[StatsRow]) -> str:
    """Levels as columns, the three statistics as rows."""
    header = [""] + [f"Level {r.level}" for r in rows]
    body = [
        ["Token"] + [f"{r.token_count:,}" for r in rows],
        ["MCW"] + [f"{float(r.mcw_ratio):.4f}" if r.mcw_ratio else "0" for r in rows],
        ["Immediate NT"] + [f"{r.immediate_nt_count:,}" for r in rows],
    ]
    return _table(header, body)


def format_stats_machine(rows: Sequence[StatsRow]) -> str:
    return "".join(
        f"level={r.level}\ttoken_count={r.token_count}\tmcw_ratio={r.mcw_ratio}"
        f"\timmediate_nt_count={r.immediate_nt_count}\n" for r in rows)


def format_prf(report: PrfReport, name: Optional[str] = None) -> str:
    prefix = f"{name}." if name else ""
    lines = [
        f"{prefix}precision = {100 * float(report.precision):.2f}",
        f"{prefix}recall = {100 * float(report.recall):.2f}",
        f"{prefix}f1 = {100 * float(report.f1):.2f}",
        f"{prefix}matched = {report.matched}",
        f"{prefix}relevant = {report.relevant}",
        f"{prefix}retrieved = {report.retrieved}",
    ]
    if report.skipped:
        lines.append(f"{prefix}skipped = {report.skipped}")
    return "\n".join(lines) + "\n"


def format_results_table(results: Sequence[Tuple[int, Optional[PrfReport], Optional[Fraction]]]) -> str:
    """Rows shaped like a per-level results table: segmentation F1 and POS accuracy."""
    header = [""] + [f"Level {lv}" for lv, _, _ in results] + [""]
    seg = ["Segmentation"] + [f"{100 * float(r.f1):.2f}" if r else "-" for _, r, _ in results] + ["(F1)"]
    pos = ["POS tagging"] + [f"{100 * float(a):.2f}" if a is not None else "-"
                             for _, _, a in results] + ["(ACC)"]
    return _table(header, [seg, pos])
