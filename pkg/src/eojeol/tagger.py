"""A dictionary eojeol analyzer with a first-order HMM tagger.

Tokens are whatever the model's granularity level produces; tags are the
composite ``A+B`` labels of those tokens. Unknown eojeols are never split
below the eojeol except for trailing punctuation.
"""

from __future__ import annotations

import math
import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .core import EojeolAnalysis, EojeolError, Morpheme, Sentence, check_level
from .corpus_io import parse_analysis
from .granularity import (
    SegmentedSentence,
    TokenGroup,
    format_analysis,
    merge_to_level1,
    segment_eojeol,
    segment_sentence,
)
from .metrics import PrfReport, pos_accuracy, segmentation_prf

BOS = "<s>"
EOS = "</s>"
FORMAT_VERSION = "eojeol-hmm 1"


@dataclass
class TaggerModel:
    level: int
    smoothing_k: float = 0.1
    # surface -> (analysis, frequency of that analysis)
    dictionary: Dict[str, Tuple[EojeolAnalysis, int]] = field(default_factory=dict)
    transitions: Counter = field(default_factory=Counter)  # (prev, tag)
    emissions: Counter = field(default_factory=Counter)  # (tag, form)
    suffixes: Counter = field(default_factory=Counter)  # (final char, tag)

    def __post_init__(self):
        check_level(self.level)
        self._index()

    def _index(self) -> None:
        self.tag_counts: Counter = Counter()
        self.tags_of: Dict[str, set] = {}
        for (tag, form), c in self.emissions.items():
            self.tag_counts[tag] += c
            self.tags_of.setdefault(form, set()).add(tag)
        self.vocab = set(self.tags_of)
        self.tags: Tuple[str, ...] = tuple(sorted(self.tag_counts))
        self.context_counts: Counter = Counter()
        for (prev, _), c in self.transitions.items():
            self.context_counts[prev] += c
        self.suffix_counts: Counter = Counter()
        for (ch, _), c in self.suffixes.items():
            self.suffix_counts[ch] += c
        self._log_cache: Dict[tuple, float] = {}

    # distributions, all add-k smoothed

    def transition_prob(self, prev: str, tag: str) -> float:
        """P(tag | prev) over the model tags plus EOS."""
        k = self.smoothing_k
        return (self.transitions[(prev, tag)] + k) / (
            self.context_counts[prev] + k * (len(self.tags) + 1))

    def emission_prob(self, tag: str, form: str) -> float:
        """P(form | tag) for known forms; a suffix-based P(tag | final char)
        for unknown ones, else uniform over tags."""
        k = self.smoothing_k
        if form in self.vocab:
            return (self.emissions[(tag, form)] + k) / (self.tag_counts[tag] + k * len(self.vocab))
        ch = form[-1]
        if self.suffix_counts[ch]:
            return (self.suffixes[(ch, tag)] + k) / (self.suffix_counts[ch] + k * len(self.tags))
        return 1.0 / len(self.tags)

    def _log(self, kind: str, a: str, b: str) -> float:
        key = (kind, a, b)
        v = self._log_cache.get(key)
        if v is None:
            p = self.transition_prob(a, b) if kind == "t" else self.emission_prob(a, b)
            v = self._log_cache[key] = math.log(p)
        return v

    def candidates(self, size: Optional[int] = None, form: Optional[str] = None) -> List[str]:
        """Tags a token may take, in sorted order.

        A known form is limited to the tags it was trained with. ``size``
        keeps only tags with that many components; if nothing is left the
        answer is an all-NA tag of the right size.
        """
        pool = self.tags
        if form is not None and form in self.tags_of:
            seen = sorted(self.tags_of[form])
            if size is None or any(t.count("+") + 1 == size for t in seen):
                pool = seen
        if size is None:
            return list(pool)
        out = [t for t in pool if t.count("+") + 1 == size]
        return out or ["+".join(["NA"] * size)]

    def score(self, forms: Sequence[str], tags: Sequence[str]) -> float:
        """Joint log probability of a tag sequence, BOS and EOS included."""
        total = 0.0
        prev = BOS
        for form, tag in zip(forms, tags):
            total += self._log("t", prev, tag) + self._log("e", tag, form)
            prev = tag
        return total + self._log("t", prev, EOS)

    # serialization

    def dumps(self) -> str:
        lines = [FORMAT_VERSION, f"level\t{self.level}", f"smoothing_k\t{self.smoothing_k!r}"]
        for surface in sorted(self.dictionary):
            analysis, freq = self.dictionary[surface]
            lines.append(f"dict\t{surface}\t{freq}\t{format_analysis(analysis.morphemes)}")
        for (a, b), c in sorted(self.transitions.items()):
            lines.append(f"trans\t{a}\t{b}\t{c}")
        for (a, b), c in sorted(self.emissions.items()):
            lines.append(f"emit\t{a}\t{b}\t{c}")
        for (a, b), c in sorted(self.suffixes.items()):
            lines.append(f"suffix\t{a}\t{b}\t{c}")
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> "TaggerModel":
        lines = text.splitlines()
        if not lines or lines[0] != FORMAT_VERSION:
            raise EojeolError(f"not a model file (expected header {FORMAT_VERSION!r})")
        level = None
        k = 0.1
        dictionary = {}
        tables = {"trans": Counter(), "emit": Counter(), "suffix": Counter()}
        for n, line in enumerate(lines[1:], 2):
            parts = line.split("\t")
            try:
                if parts[0] == "level":
                    level = int(parts[1])
                elif parts[0] == "smoothing_k":
                    k = float(parts[1])
                elif parts[0] == "dict":
                    _, surface, freq, analysis = parts
                    dictionary[surface] = (
                        EojeolAnalysis(surface, parse_analysis(analysis, n)), int(freq))
                elif parts[0] in tables:
                    _, a, b, c = parts
                    tables[parts[0]][(a, b)] = int(c)
                else:
                    raise ValueError(f"unknown record {parts[0]!r}")
            except ValueError as exc:
                raise EojeolError(f"model line {n}: {exc}") from None
        if level is None:
            raise EojeolError("model file has no level")
        return cls(level, k, dictionary, tables["trans"], tables["emit"], tables["suffix"])


def train(corpus: Sequence[Sentence], level: int, smoothing_k: float = 0.1) -> TaggerModel:
    check_level(level)
    if not corpus:
        raise EojeolError("cannot train on an empty corpus")
    if smoothing_k <= 0:
        raise ValueError("smoothing_k must be positive")
    seen: Dict[str, Counter] = {}
    first: Dict[Tuple[str, str], int] = {}
    transitions: Counter = Counter()
    emissions: Counter = Counter()
    suffixes: Counter = Counter()
    order = 0
    for sent in corpus:
        for e in sent.eojeols:
            key = format_analysis(e.morphemes)
            seen.setdefault(e.surface, Counter())[key] += 1
            first.setdefault((e.surface, key), order)
            order += 1
        prev = BOS
        for t in segment_sentence(sent, level).tokens:
            transitions[(prev, t.composite_tag)] += 1
            emissions[(t.composite_tag, t.rendered_form)] += 1
            suffixes[(t.rendered_form[-1], t.composite_tag)] += 1
            prev = t.composite_tag
        transitions[(prev, EOS)] += 1
    dictionary = {}
    for surface, counts in seen.items():
        best = min(counts, key=lambda a: (-counts[a], first[(surface, a)]))
        dictionary[surface] = (EojeolAnalysis(surface, parse_analysis(best)), counts[best])
    return TaggerModel(level, smoothing_k, dictionary, transitions, emissions, suffixes)


def viterbi(model: TaggerModel, forms: Sequence[str],
            sizes: Optional[Sequence[Optional[int]]] = None) -> List[str]:
    """Most probable tag sequence. ``sizes`` optionally fixes the number of
    components each position's tag must have."""
    if not forms:
        raise ValueError("empty token sequence")
    if not model.tags:
        raise EojeolError("model has no tags")
    if sizes is None:
        sizes = [None] * len(forms)
    cands = [model.candidates(s, f) for s, f in zip(sizes, forms)]

    best: Dict[str, float] = {}
    for tag in cands[0]:
        best[tag] = model._log("t", BOS, tag) + model._log("e", tag, forms[0])
    back: List[Dict[str, str]] = []
    for i in range(1, len(forms)):
        cur: Dict[str, float] = {}
        ptr: Dict[str, str] = {}
        prevs = sorted(best)
        for tag in cands[i]:
            arg = None
            top = -math.inf
            for p in prevs:
                s = best[p] + model._log("t", p, tag)
                if arg is None or s > top:
                    arg, top = p, s
            cur[tag] = top + model._log("e", tag, forms[i])
            ptr[tag] = arg
        best = cur
        back.append(ptr)

    last = None
    top = -math.inf
    for tag in sorted(best):
        s = best[tag] + model._log("t", tag, EOS)
        if last is None or s > top:
            last, top = tag, s
    path = [last]
    for ptr in reversed(back):
        path.append(ptr[path[-1]])
    path.reverse()
    return path


def _is_symbol_char(ch: str) -> bool:
    return unicodedata.category(ch)[0] in "PS"


def split_trailing_symbols(surface: str) -> List[str]:
    """``"의상."`` -> ``["의상", "."]``; runs of one repeated symbol stay together."""
    end = len(surface)
    while end and _is_symbol_char(surface[end - 1]):
        end -= 1
    pieces = [surface[:end]] if end else []
    i = end
    while i < len(surface):
        j = i
        while j < len(surface) and surface[j] == surface[i]:
            j += 1
        pieces.append(surface[i:j])
        i = j
    return pieces


Plan = List[Tuple[str, List[str], List[Tuple[str, ...]]]]


def _retag(model: TaggerModel, plan: Plan, sentence_id: str) -> SegmentedSentence:
    """Tag a sentence given, per eojeol, its surface, token forms and each
    token's morpheme forms. The result's source carries the predicted tags."""
    forms = [f for _, toks, _ in plan for f in toks]
    sizes = [len(m) for _, _, morphs in plan for m in morphs]
    tags = viterbi(model, forms, sizes)
    eojeols = []
    tokens = []
    pos = 0
    for i, (surface, toks, morphs) in enumerate(plan):
        ms: List[Morpheme] = []
        for form, parts in zip(toks, morphs):
            tag = tags[pos]
            start = len(ms)
            ms.extend(Morpheme(p, t) for p, t in zip(parts, tag.split("+")))
            tokens.append(TokenGroup(i, (start, len(ms)), form, tag))
            pos += 1
        eojeols.append(EojeolAnalysis(surface, tuple(ms)))
    return SegmentedSentence(model.level, tuple(tokens), Sentence(sentence_id, tuple(eojeols)))


def analyze(model: TaggerModel, raw_sentence: Union[str, Sequence[str]],
            sentence_id: str = "") -> SegmentedSentence:
    """Segment and tag one whitespace-tokenized sentence."""
    surfaces = raw_sentence.split() if isinstance(raw_sentence, str) else list(raw_sentence)
    if not surfaces:
        raise ValueError("empty sentence")
    plan: Plan = []
    for i, s in enumerate(surfaces):
        hit = model.dictionary.get(s)
        if hit is not None:
            analysis = hit[0]
            groups = segment_eojeol(analysis, model.level, i)
            morphs = [tuple(m.form for m in analysis.morphemes[a:b])
                      for a, b in (g.morpheme_range for g in groups)]
            plan.append((s, [g.rendered_form for g in groups], morphs))
        else:
            pieces = [s] if model.level == 1 else split_trailing_symbols(s)
            plan.append((s, pieces, [(p,) for p in pieces]))
    return _retag(model, plan, sentence_id)


def tag_segmented(model: TaggerModel, segmented: SegmentedSentence) -> SegmentedSentence:
    """Retag a given segmentation, keeping its tokens and morpheme forms."""
    groups = segmented.by_eojeol()
    plan: Plan = []
    for i, e in enumerate(segmented.source.eojeols):
        toks = groups.get(i, [])
        plan.append((e.surface, [t.rendered_form for t in toks],
                     [tuple(m.form for m in segmented.morphemes_of(t)) for t in toks]))
    return _retag(model, plan, segmented.source.id)


@dataclass(frozen=True)
class PipelineReport:
    level: int
    segmentation: PrfReport
    pos_accuracy: Fraction
    sentences: int


def evaluate_pipeline(model: TaggerModel, raw: Sequence[Union[str, Sequence[str]]],
                      gold: Sequence[Sentence], gold_segmentation: bool = False) -> PipelineReport:
    """Analyze ``raw`` and score it against ``gold``.

    With ``gold_segmentation`` the tagger only retags the gold tokens of the
    model's level, which isolates tagging from the OOV segmentation policy.
    """
    if not gold:
        raise EojeolError("empty test set")
    if len(raw) != len(gold):
        raise EojeolError(f"{len(raw)} raw vs {len(gold)} gold sentences")
    gold_segs = [segment_sentence(g, model.level) for g in gold]
    if gold_segmentation:
        preds = [tag_segmented(model, s) for s in gold_segs]
    else:
        preds = [analyze(model, r, g.id) for r, g in zip(raw, gold)]
    seg = segmentation_prf(gold_segs, preds)
    acc = pos_accuracy(gold, [merge_to_level1(p) for p in preds])
    return PipelineReport(model.level, seg, acc, len(gold))
