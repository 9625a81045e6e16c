"""Segmentation granularity levels 1-5 and conversions between them.

Level 1 keeps eojeols whole, level 2 splits off symbols, level 3 also case
markers, level 4 also verbal endings, and level 5 splits every morpheme.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from .core import (
    FUSING_JAMO,
    EojeolAnalysis,
    Sentence,
    StructureError,
    TagClass,
    add_tail,
    check_level,
)

Range = Tuple[int, int]

# classes split off as singleton groups, per level
_SPLIT_CLASSES = {
    1: frozenset(),
    2: frozenset({TagClass.SYMBOL}),
    3: frozenset({TagClass.SYMBOL, TagClass.CASE_MARKER}),
    4: frozenset({TagClass.SYMBOL, TagClass.CASE_MARKER, TagClass.VERBAL_ENDING}),
}


def partition_eojeol(analysis: EojeolAnalysis, level: int,
                     symbol_tags: Optional[frozenset] = None) -> List[Range]:
    """Half-open morpheme ranges of the level-``level`` token groups.

    ``symbol_tags`` restricts which Symbol-class tags are split off (for
    example ``{"SS"}`` for a quotes-only policy); by default all are.
    """
    check_level(level)
    n = len(analysis.morphemes)
    if level == 5:
        return [(i, i + 1) for i in range(n)]
    split = _SPLIT_CLASSES[level]
    ranges: List[Range] = []
    start = None
    for i, m in enumerate(analysis.morphemes):
        cls = m.tag_class
        if cls is TagClass.SYMBOL and symbol_tags is not None and m.tag not in symbol_tags:
            cls = TagClass.LEXICAL
        if cls in split:
            if start is not None:
                ranges.append((start, i))
                start = None
            ranges.append((i, i + 1))
        elif start is None:
            start = i
    if start is not None:
        ranges.append((start, n))
    return ranges


def _canonical(analysis: EojeolAnalysis, rng: Range) -> str:
    return "".join(m.form for m in analysis.morphemes[rng[0]:rng[1]])


def render_groups(analysis: EojeolAnalysis, ranges: Sequence[Range]) -> List[str]:
    """Token forms for a partition of one eojeol.

    Groups take slices of the surface wherever their canonical forms can be
    located on it, peeling from the left and from the right. A lone-jamo
    ending fused into the previous syllable's tail is split back out
    (세계적인 -> 세계적이 | ㄴ). Groups that cannot be located keep their
    canonical forms (나섰다 -> 나서 | 었 | 다).
    """
    surface = analysis.surface
    if len(ranges) == 1:
        return [surface]
    pieces = [_canonical(analysis, r) for r in ranges]
    if "".join(pieces) == surface:
        return pieces

    out: List[Optional[str]] = [None] * len(pieces)
    lo, hi = 0, len(pieces) - 1
    rest = surface
    carry = ""  # jamo already consumed from the surface for group `lo`
    while lo < hi:
        piece = pieces[lo][len(carry):]
        if piece and rest.startswith(piece) and len(rest) > len(piece):
            out[lo] = carry + piece
            rest = rest[len(piece):]
            carry = ""
            lo += 1
            continue
        nxt = pieces[lo + 1]
        if piece and nxt[0] in FUSING_JAMO:
            fused = add_tail(piece[-1], nxt[0])
            if fused and rest.startswith(piece[:-1] + fused):
                out[lo] = carry + piece
                rest = rest[len(piece):]
                carry = nxt[0]
                lo += 1
                if len(nxt) == 1 and lo < hi:
                    out[lo] = carry
                    carry = ""
                    lo += 1
                continue
        last = pieces[hi]
        if rest.endswith(last) and len(rest) > len(last):
            out[hi] = last
            rest = rest[:-len(last)]
            hi -= 1
            continue
        break
    if lo == hi and rest:
        out[lo] = carry + rest
    else:
        for i in range(lo, hi + 1):
            out[i] = pieces[i]
    return out  # type: ignore[return-value]


def render_group(analysis: EojeolAnalysis, rng: Range) -> str:
    """Form of a single group, with the rest of the eojeol kept as context."""
    n = len(analysis.morphemes)
    a, b = rng
    if not 0 <= a < b <= n:
        raise ValueError(f"bad morpheme range {rng} for {analysis.surface!r}")
    ranges = [r for r in ((0, a), (a, b), (b, n)) if r[0] < r[1]]
    return render_groups(analysis, ranges)[ranges.index(rng)]


@dataclass(frozen=True)
class TokenGroup:
    eojeol_index: int
    morpheme_range: Range
    rendered_form: str
    composite_tag: str

    def __post_init__(self):
        a, b = self.morpheme_range
        if not 0 <= a < b:
            raise ValueError(f"empty morpheme range {self.morpheme_range}")
        if len(self.composite_tag.split("+")) != b - a:
            raise ValueError(
                f"tag {self.composite_tag!r} does not match range {self.morpheme_range}")

    @property
    def size(self) -> int:
        return self.morpheme_range[1] - self.morpheme_range[0]


@dataclass(frozen=True)
class SegmentedSentence:
    level: int
    tokens: Tuple[TokenGroup, ...]
    source: Sentence

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(self.tokens))

    @property
    def forms(self) -> List[str]:
        return [t.rendered_form for t in self.tokens]

    @property
    def tags(self) -> List[str]:
        return [t.composite_tag for t in self.tokens]

    def morphemes_of(self, token: TokenGroup):
        a, b = token.morpheme_range
        return self.source.eojeols[token.eojeol_index].morphemes[a:b]

    def by_eojeol(self) -> Dict[int, List[TokenGroup]]:
        groups: Dict[int, List[TokenGroup]] = defaultdict(list)
        for t in self.tokens:
            groups[t.eojeol_index].append(t)
        return groups


def segment_eojeol(analysis: EojeolAnalysis, level: int, index: int = 0,
                   symbol_tags: Optional[frozenset] = None) -> List[TokenGroup]:
    ranges = partition_eojeol(analysis, level, symbol_tags)
    forms = render_groups(analysis, ranges)
    return [
        TokenGroup(index, r, f, "+".join(analysis.tags[r[0]:r[1]]))
        for r, f in zip(ranges, forms)
    ]


def segment_sentence(sentence: Sentence, level: int,
                     symbol_tags: Optional[frozenset] = None) -> SegmentedSentence:
    tokens: List[TokenGroup] = []
    for i, e in enumerate(sentence.eojeols):
        tokens.extend(segment_eojeol(e, level, i, symbol_tags))
    return SegmentedSentence(level, tuple(tokens), sentence)


def has_inner_symbol(analysis: EojeolAnalysis) -> bool:
    """True when a symbol sits between non-symbol morphemes, so level 2
    splits the eojeol into more than one non-symbol run."""
    classes = [m.tag_class is TagClass.SYMBOL for m in analysis.morphemes]
    seen_word = False
    for i, sym in enumerate(classes):
        if not sym:
            seen_word = True
        elif seen_word and not all(classes[i:]):
            return True
    return False


def format_analysis(morphemes: Iterable) -> str:
    """``form/TAG+form/TAG`` with '/', '+' and '\\' escaped in forms."""
    return "+".join(f"{escape_form(m.form)}/{m.tag}" for m in morphemes)


def escape_form(form: str) -> str:
    return form.replace("\\", "\\\\").replace("/", "\\/").replace("+", "\\+")


def merge_to_level1(segmented: SegmentedSentence) -> List[Tuple[str, str]]:
    """Regroup tokens by eojeol into ``(surface, analysis string)`` pairs.

    Morpheme forms come from the source analyses and tags from each token's
    composite tag, so predicted tags are what gets scored.
    """
    groups = segmented.by_eojeol()
    out = []
    for i, e in enumerate(segmented.source.eojeols):
        toks = groups.get(i)
        if not toks:
            raise StructureError(f"eojeol {i} ({e.surface!r}) has no tokens")
        pairs = []
        pos = 0
        for t in toks:
            a, b = t.morpheme_range
            if a != pos:
                raise StructureError(f"provenance gap in eojeol {i} at morpheme {pos}")
            tags = t.composite_tag.split("+")
            for m, tag in zip(e.morphemes[a:b], tags):
                pairs.append((m.form, tag))
            pos = b
        if pos != len(e.morphemes):
            raise StructureError(f"eojeol {i} ({e.surface!r}) is not fully covered")
        out.append((e.surface, "+".join(f"{escape_form(f)}/{t}" for f, t in pairs)))
    if len(groups) != len(segmented.source.eojeols):
        raise StructureError("tokens reference eojeols outside the source sentence")
    return out


def analysis_strings(sentence: Sentence) -> List[Tuple[str, str]]:
    return [(e.surface, format_analysis(e.morphemes)) for e in sentence.eojeols]


# -- phrase-structure trees ------------------------------------------------

@dataclass(frozen=True)
class Leaf:
    token: TokenGroup


@dataclass(frozen=True)
class Phrase:
    label: str
    children: Tuple[Union["Phrase", Leaf], ...]

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        if not self.children:
            raise ValueError(f"phrase {self.label!r} has no children")

    @property
    def is_preterminal(self) -> bool:
        return len(self.children) == 1 and isinstance(self.children[0], Leaf)

    @property
    def category(self) -> str:
        return self.label.split("-", 1)[0] if not self.label.startswith("-") else self.label

    @property
    def function(self) -> Optional[str]:
        if self.label.startswith("-") or "-" not in self.label:
            return None
        return self.label.split("-", 1)[1]


Node = Union[Phrase, Leaf]


@dataclass(frozen=True)
class SyntaxTree:
    """A phrase-structure tree plus the sentence its leaves point into.

    ``sentence`` is None for trees read without morphological provenance;
    those can be scored but not converted between levels.
    """
    root: Phrase
    level: int
    sentence: Optional[Sentence] = None

    def leaves(self) -> List[TokenGroup]:
        return [leaf.token for leaf in iter_leaves(self.root)]

    def preterminals(self) -> List[Phrase]:
        return [p for p in iter_phrases(self.root) if p.is_preterminal]


def preterminal(token: TokenGroup) -> Phrase:
    return Phrase(token.composite_tag, (Leaf(token),))


def iter_leaves(node: Node) -> Iterator[Leaf]:
    if isinstance(node, Leaf):
        yield node
    else:
        for c in node.children:
            yield from iter_leaves(c)


def iter_phrases(node: Node) -> Iterator[Phrase]:
    if isinstance(node, Phrase):
        yield node
        for c in node.children:
            yield from iter_phrases(c)


def skeleton(node: Node):
    """Phrase structure with preterminals and leaves erased.

    Consecutive preterminals collapse to a single marker so that skeletons
    compare equal across levels.
    """
    if isinstance(node, Leaf) or node.is_preterminal:
        return "*"
    kids = []
    for c in node.children:
        s = skeleton(c)
        if s == "*" and kids and kids[-1] == "*":
            continue
        kids.append(s)
    return (node.label, tuple(kids))


def convert_tree(tree: SyntaxTree, level: int) -> SyntaxTree:
    """Re-segment the terminals of ``tree`` at a finer (or equal) level.

    Each preterminal is replaced in place by the preterminals of the
    level-``level`` groups it covers; every label above is kept.
    """
    check_level(level)
    if tree.sentence is None:
        raise StructureError("tree leaves carry no stored analysis")
    if level < tree.level:
        raise StructureError(f"cannot coarsen a level-{tree.level} tree to level {level}")
    target = segment_sentence(tree.sentence, level).by_eojeol()

    def rebuild(node: Phrase) -> List[Node]:
        if node.is_preterminal:
            tok = node.children[0].token
            a, b = tok.morpheme_range
            groups = [g for g in target.get(tok.eojeol_index, [])
                      if a <= g.morpheme_range[0] and g.morpheme_range[1] <= b]
            if not groups or groups[0].morpheme_range[0] != a or groups[-1].morpheme_range[1] != b:
                raise StructureError(f"leaf {tok.rendered_form!r} does not align with level {level}")
            return [preterminal(g) for g in groups]
        kids: List[Node] = []
        for c in node.children:
            if isinstance(c, Leaf):
                raise StructureError("bare leaf outside a preterminal")
            kids.extend(rebuild(c))
        return [Phrase(node.label, tuple(kids))]

    if tree.root.is_preterminal:
        root = Phrase(tree.root.label, tuple(rebuild(tree.root)))
    else:
        (root,) = rebuild(tree.root)
    return SyntaxTree(root, level, tree.sentence)


def expand_tree_to_level5(tree: SyntaxTree) -> SyntaxTree:
    return convert_tree(tree, 5)


def tree_from_segmentation(shape, segmented: SegmentedSentence) -> SyntaxTree:
    """Build a tree from a nested ``(label, [children])`` shape whose leaves
    are token indices into ``segmented``."""
    tokens = segmented.tokens

    def build(node) -> Node:
        if isinstance(node, int):
            return preterminal(tokens[node])
        label, kids = node
        return Phrase(label, tuple(build(k) for k in kids))

    root = build(shape)
    if not isinstance(root, Phrase):
        raise StructureError("tree shape must have a phrase at the root")
    return SyntaxTree(root, segmented.level, segmented.source)
