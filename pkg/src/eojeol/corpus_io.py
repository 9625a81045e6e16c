"""Readers and writers for the corpus formats.

* Sejong morph: ``id<TAB>surface<TAB>form/TAG+form/TAG`` per eojeol, blank
  line between sentences. ``/``, ``+`` and ``\\`` inside forms are escaped
  with a backslash. ``form__NN`` carries a sense number.
* Sejong treebank: bracketed trees whose leaves are whole analyses, each
  optionally preceded by a ``; sentence text`` line.
* Bracketed (Penn style): ``(TAG form)`` preterminals at any level.
* CoNLL-U: ten columns with ``i-j`` multiword-token rows per eojeol.
* Tokens: space-joined token forms, one sentence per line.
"""

from __future__ import annotations

import re
import unicodedata
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from .core import (
    CorpusFormatError,
    EojeolAnalysis,
    Morpheme,
    Sentence,
    TagClass,
    add_tail,
    check_level,
    classify_tag,
    is_sejong_tag,
    FUSING_JAMO,
)
from .granularity import (
    Leaf,
    Phrase,
    SegmentedSentence,
    SyntaxTree,
    TokenGroup,
    escape_form,
    format_analysis,
    iter_leaves,
    partition_eojeol,
    preterminal,
    segment_sentence,
)

__all__ = [
    "parse_analysis", "read_morph_corpus", "write_morph_corpus",
    "read_treebank", "write_treebank", "read_bracketed", "write_bracketed",
    "read_conllu", "write_conllu", "read_tokens", "write_tokens",
    "upos_of", "lemma_of",
]


def _nfc(text: str) -> str:
    return unicodedata.normalize("NFC", text)


_SENSE = re.compile(r"^(.+?)__(\d{2})$")


def parse_analysis(text: str, line: Optional[int] = None) -> Tuple[Morpheme, ...]:
    """Parse ``form/TAG(+form/TAG)*`` into morphemes."""
    items: List[List[Tuple[str, bool]]] = [[]]
    i = 0
    while i < len(text):
        c = text[i]
        if c == "\\" and i + 1 < len(text):
            items[-1].append((text[i + 1], True))
            i += 2
            continue
        if c == "+":
            items.append([])
        else:
            items[-1].append((c, False))
        i += 1

    morphemes = []
    for item in items:
        slash = max((j for j, (c, esc) in enumerate(item) if c == "/" and not esc), default=None)
        if slash is None:
            raise CorpusFormatError(f"bad separator in analysis {text!r}", line)
        form = "".join(c for c, _ in item[:slash])
        tag = "".join(c for c, _ in item[slash + 1:])
        if not form:
            raise CorpusFormatError(f"empty form in analysis {text!r}", line)
        if not is_sejong_tag(tag):
            raise CorpusFormatError(f"unknown tag {tag!r} in analysis {text!r}", line)
        sense = None
        m = _SENSE.match(form)
        if m and not any(esc for _, esc in item[:slash]):
            form, sense = m.group(1), m.group(2)
        try:
            morphemes.append(Morpheme(form, tag, sense))
        except ValueError as exc:
            raise CorpusFormatError(str(exc), line) from None
    return tuple(morphemes)


def _format_with_senses(morphemes: Iterable[Morpheme]) -> str:
    return "+".join(
        f"{escape_form(m.form)}{'__' + m.sense if m.sense else ''}/{m.tag}" for m in morphemes)


# -- Sejong morphologically analysed corpus --------------------------------

def _id_prefix(record_id: str) -> str:
    return record_id.rsplit("-", 1)[0]


def read_morph_corpus(text: str, boundary: str = "blank") -> List[Sentence]:
    """Read a Sejong-style morph corpus.

    ``boundary`` is ``"blank"`` (blank lines end sentences) or
    ``"id-prefix"`` (a change in the id part before the last ``-`` also does).
    Lines starting with ``#`` are skipped.
    """
    if boundary not in ("blank", "id-prefix"):
        raise ValueError(f"unknown boundary mode {boundary!r}")
    sentences: List[Sentence] = []
    ids: List[str] = []
    eojeols: List[EojeolAnalysis] = []

    def flush():
        if eojeols:
            sentences.append(Sentence(ids[0], tuple(eojeols), tuple(ids)))
            ids.clear()
            eojeols.clear()

    for lineno, raw in enumerate(_nfc(text).split("\n"), 1):
        line = raw.rstrip("\r")
        if not line.strip():
            flush()
            continue
        if line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 3:
            raise CorpusFormatError(f"expected 3 tab-separated fields, got {len(fields)}", lineno)
        rid, surface, analysis = fields
        if boundary == "id-prefix" and ids and _id_prefix(ids[-1]) != _id_prefix(rid):
            flush()
        try:
            eojeol = EojeolAnalysis(surface, parse_analysis(analysis, lineno))
        except ValueError as exc:
            if isinstance(exc, CorpusFormatError):
                raise
            raise CorpusFormatError(str(exc), lineno) from None
        ids.append(rid)
        eojeols.append(eojeol)
    flush()
    return sentences


def write_morph_corpus(sentences: Iterable[Sentence]) -> str:
    blocks = []
    for s in sentences:
        ids = s.line_ids or tuple(s.id for _ in s.eojeols)
        blocks.append("".join(
            f"{rid}\t{e.surface}\t{_format_with_senses(e.morphemes)}\n"
            for rid, e in zip(ids, s.eojeols)))
    return _nfc("\n".join(blocks))


# -- bracketed trees --------------------------------------------------------

_PAREN_ESCAPES = (("(", "-LRB-"), (")", "-RRB-"))


def _escape_atom(s: str) -> str:
    for a, b in _PAREN_ESCAPES:
        s = s.replace(a, b)
    return s


def _unescape_atom(s: str) -> str:
    for a, b in _PAREN_ESCAPES:
        s = s.replace(b, a)
    return s


class _Node:
    __slots__ = ("label", "kids", "line")

    def __init__(self, label, line):
        self.label = label
        self.kids: list = []
        self.line = line


def _parse_sexps(text: str) -> Iterator[Tuple[Optional[str], _Node]]:
    """Yield ``(comment, node)`` for each top-level bracketed expression.

    ``comment`` is the text of the last ``;`` line seen before the tree.
    """
    stack: List[_Node] = []
    comment = None
    expect_label = False
    for lineno, line in enumerate(_nfc(text).split("\n"), 1):
        if not stack and line.lstrip().startswith(";"):
            comment = line.lstrip()[1:].strip()
            continue
        for tok in re.findall(r"\(|\)|[^\s()]+", line):
            if tok == "(":
                node = _Node(None, lineno)
                if stack:
                    stack[-1].kids.append(node)
                stack.append(node)
                expect_label = True
            elif tok == ")":
                if not stack:
                    raise CorpusFormatError("unbalanced ')'", lineno)
                node = stack.pop()
                if not node.kids:
                    raise CorpusFormatError(f"empty phrase {node.label or ''!r}", lineno)
                expect_label = False
                if not stack:
                    yield comment, node
                    comment = None
            else:
                if not stack:
                    raise CorpusFormatError(f"text outside brackets: {tok!r}", lineno)
                if expect_label and stack[-1].label is None and not stack[-1].kids:
                    stack[-1].label = tok
                else:
                    stack[-1].kids.append(tok)
                expect_label = False
    if stack:
        raise CorpusFormatError("unbalanced: missing ')'", stack[0].line)


def _unwrap(node: _Node) -> _Node:
    # "( (S ...))" wrappers
    while node.label is None and len(node.kids) == 1 and isinstance(node.kids[0], _Node):
        node = node.kids[0]
    if node.label is None:
        raise CorpusFormatError("phrase without a label", node.line)
    return node


def _is_composite_tag(label: str) -> bool:
    return all(is_sejong_tag(t) for t in label.split("+"))


def _rebuild_surface(morphemes: Sequence[Morpheme]) -> str:
    """Best-effort surface for a leaf with no sentence text: canonical
    forms joined, lone jamo fused into an open preceding syllable."""
    out = ""
    for m in morphemes:
        form = m.form
        if out and form[0] in FUSING_JAMO:
            fused = add_tail(out[-1], form[0])
            if fused:
                out = out[:-1] + fused
                form = form[1:]
        out += form
    return out


def read_treebank(text: str) -> List[SyntaxTree]:
    """Read Sejong-style trees into level-1 trees with full provenance.

    Leaves are analyses such as ``웅가로/NNP+가/JKS``; a preterminal
    labelled with the composite tag is inserted above each. Surfaces come
    from the preceding ``;`` line when it has one word per leaf.
    """
    trees = []
    for n, (comment, raw) in enumerate(_parse_sexps(text), 1):
        raw = _unwrap(raw)
        analyses: List[Tuple[Morpheme, ...]] = []

        def collect(node: _Node):
            for k in node.kids:
                if isinstance(k, _Node):
                    if k.label is None:
                        raise CorpusFormatError("phrase without a label", k.line)
                    collect(k)
                else:
                    analyses.append(parse_analysis(_unescape_atom(k), node.line))

        collect(raw)
        words = comment.split() if comment else []
        if len(words) != len(analyses):
            words = [_rebuild_surface(a) for a in analyses]
        sentence = Sentence(str(n), tuple(EojeolAnalysis(w, a) for w, a in zip(words, analyses)))

        counter = iter(range(len(analyses)))

        def build(node: _Node) -> Phrase:
            kids = []
            for k in node.kids:
                if isinstance(k, _Node):
                    kids.append(build(k))
                else:
                    i = next(counter)
                    e = sentence.eojeols[i]
                    tok = TokenGroup(i, (0, len(e.morphemes)), e.surface, "+".join(e.tags))
                    kids.append(preterminal(tok))
            return Phrase(node.label, tuple(kids))

        trees.append(SyntaxTree(build(raw), 1, sentence))
    return trees


def write_treebank(trees: Iterable[SyntaxTree]) -> str:
    """Sejong-style output; trees must be at level 1."""
    out = []
    for t in trees:
        if t.level != 1 or t.sentence is None:
            raise ValueError("Sejong treebank output needs level-1 trees with analyses")
        sent = t.sentence

        def fmt(node) -> str:
            if node.is_preterminal:
                tok = node.children[0].token
                return _escape_atom(format_analysis(sent.eojeols[tok.eojeol_index].morphemes))
            return f"({node.label} {' '.join(fmt(c) for c in node.children)})"

        out.append(f"; {sent.text}\n{fmt(t.root)}\n")
    return _nfc("".join(out))


def write_bracketed(tree: Union[SyntaxTree, Iterable[SyntaxTree]]) -> str:
    """Penn-style ``(LABEL child ...)`` lines with ``(TAG form)`` preterminals."""
    trees = [tree] if isinstance(tree, SyntaxTree) else list(tree)

    def fmt(node) -> str:
        if isinstance(node, Leaf):
            return _escape_atom(node.token.rendered_form)
        return f"({node.label} {' '.join(fmt(c) for c in node.children)})"

    return _nfc("".join(fmt(t.root) + "\n" for t in trees))


def read_bracketed(text: str, sentences: Optional[Sequence[Sentence]] = None,
                   level: Optional[int] = None) -> List[SyntaxTree]:
    """Read Penn-style trees.

    With ``sentences`` the leaves are aligned to the sentence's segmentation
    at ``level`` (or the coarsest level whose token forms match), giving full
    provenance. Without them, each leaf stands alone and the tree can only
    be scored.
    """
    if level is not None:
        check_level(level)
    trees = []
    for n, (_, raw) in enumerate(_parse_sexps(text)):
        raw = _unwrap(raw)
        pre: List[Tuple[str, str, int]] = []

        def collect(node: _Node):
            if len(node.kids) == 1 and not isinstance(node.kids[0], _Node):
                if not _is_composite_tag(node.label):
                    raise CorpusFormatError(f"preterminal label {node.label!r} is not a tag", node.line)
                pre.append((node.label, _unescape_atom(node.kids[0]), node.line))
                return
            for k in node.kids:
                if not isinstance(k, _Node):
                    raise CorpusFormatError(f"bare word {k!r} outside a preterminal", node.line)
                if k.label is None:
                    raise CorpusFormatError("phrase without a label", k.line)
                collect(k)

        collect(raw)
        if sentences is not None:
            if n >= len(sentences):
                raise CorpusFormatError("more trees than sentences", raw.line)
            sent = sentences[n]
            forms = [f for _, f, _ in pre]
            candidates = [level] if level else [1, 2, 3, 4, 5]
            seg = None
            for lv in candidates:
                s = segment_sentence(sent, lv)
                if s.forms == forms:
                    seg = s
                    break
            if seg is None:
                raise CorpusFormatError(f"tree {n + 1} leaves do not match its sentence", raw.line)
            tokens = list(seg.tokens)
            tree_level = seg.level
        else:
            sent = None
            tokens = [TokenGroup(i, (0, len(tag.split("+"))), form, tag)
                      for i, (tag, form, _) in enumerate(pre)]
            tree_level = level or (5 if all("+" not in t for t, _, _ in pre) else 1)

        counter = iter(tokens)

        def build(node: _Node) -> Phrase:
            if len(node.kids) == 1 and not isinstance(node.kids[0], _Node):
                tok = next(counter)
                return Phrase(node.label, (Leaf(tok),))
            return Phrase(node.label, tuple(build(k) for k in node.kids))

        trees.append(SyntaxTree(build(raw), tree_level, sent))
    return trees


# -- CoNLL-U ----------------------------------------------------------------

_LEXICAL_UPOS = {
    "NNG": "NOUN", "NNB": "NOUN", "NR": "NOUN", "NF": "NOUN",
    "NNP": "PROPN", "NP": "PRON",
    "VV": "VERB", "VA": "VERB", "VX": "VERB", "VCP": "VERB", "VCN": "VERB", "NV": "VERB",
    "MM": "DET", "MAG": "ADV", "MAJ": "ADV", "IC": "INTJ",
    "SN": "NUM", "SL": "X", "SH": "X", "NA": "X",
}


def _functional_upos(tag: str) -> str:
    cls = classify_tag(tag)
    if cls is TagClass.CASE_MARKER:
        return "ADP"
    if cls is TagClass.SYMBOL:
        return "SYM" if tag == "SW" else "PUNCT"
    # verbal endings and derivational affixes
    return "PART"


def upos_of(tags: Sequence[str]) -> str:
    """UPOS of a token group: its last content morpheme decides."""
    for t in reversed(tags):
        if t in _LEXICAL_UPOS:
            return _LEXICAL_UPOS[t]
    return _functional_upos(tags[-1])


JAMO_LEMMAS = {"ㄴ": "은", "ㄹ": "을", "ㅁ": "음", "ㅂ": "습"}
_JAMO_FROM_LEMMA = {v: k for k, v in JAMO_LEMMAS.items()}


def lemma_of(morphemes: Sequence[Morpheme]) -> str:
    if len(morphemes) == 1:
        form = morphemes[0].form
        return JAMO_LEMMAS.get(form, form)
    return "+".join(escape_form(m.form) for m in morphemes)


def _split_lemma(lemma: str) -> List[str]:
    parts, cur, i = [], "", 0
    while i < len(lemma):
        c = lemma[i]
        if c == "\\" and i + 1 < len(lemma):
            cur += lemma[i + 1]
            i += 2
            continue
        if c == "+":
            parts.append(cur)
            cur = ""
        else:
            cur += c
        i += 1
    parts.append(cur)
    return parts


def _row(*cols: str) -> str:
    cols = list(cols) + ["_"] * (10 - len(cols))
    return "\t".join(cols)


def write_conllu(segmented: Union[SegmentedSentence, Iterable[SegmentedSentence]]) -> str:
    """CoNLL-U text; one block per sentence.

    Tokens of one eojeol that are not followed by a space carry
    ``SpaceAfter=No`` in MISC so the reader can regroup eojeols.
    """
    items = [segmented] if isinstance(segmented, SegmentedSentence) else list(segmented)
    blocks = []
    for seg in items:
        src = seg.source
        lines = [f"# sent_id = {src.id}", f"# text = {src.text}", f"# level = {seg.level}"]
        groups = seg.by_eojeol()
        tid = 0
        for ei, e in enumerate(src.eojeols):
            toks = groups.get(ei, [])
            is_sym = [all(classify_tag(t) is TagClass.SYMBOL for t in tok.composite_tag.split("+"))
                      for tok in toks]
            words = [k for k, s in enumerate(is_sym) if not s]
            range_row = None
            if len(words) >= 2:
                first, last = words[0], words[-1]
                lead = "".join(t.rendered_form for t in toks[:first])
                trail = "".join(t.rendered_form for t in toks[last + 1:])
                surf = e.surface
                if lead and surf.startswith(lead):
                    surf = surf[len(lead):]
                if trail and surf.endswith(trail) and len(surf) > len(trail):
                    surf = surf[:-len(trail)]
                range_row = (tid + first + 1, tid + last + 1, surf, last < len(toks) - 1)
            for k, tok in enumerate(toks):
                tid += 1
                if range_row and tid == range_row[0]:
                    misc = "SpaceAfter=No" if range_row[3] else "_"
                    lines.append(_row(f"{range_row[0]}-{range_row[1]}", range_row[2],
                                      "_", "_", "_", "_", "_", "_", "_", misc))
                morphs = seg.morphemes_of(tok)
                tags = tok.composite_tag.split("+")
                in_range = range_row is not None and range_row[0] <= tid <= range_row[1]
                misc = "_" if k == len(toks) - 1 or in_range else "SpaceAfter=No"
                lines.append(_row(str(tid), tok.rendered_form, lemma_of(morphs),
                                  upos_of(tags), tok.composite_tag, "_", "_", "_", "_", misc))
        blocks.append("\n".join(lines) + "\n")
    return _nfc("\n".join(blocks))


def _infer_level(sentence: Sentence, tokens: Sequence[TokenGroup]) -> int:
    for lv in (1, 2, 3, 4, 5):
        expected = [(i, r) for i, e in enumerate(sentence.eojeols)
                    for r in partition_eojeol(e, lv)]
        if expected == [(t.eojeol_index, t.morpheme_range) for t in tokens]:
            return lv
    return 5


def read_conllu(text: str, level: Optional[int] = None) -> List[SegmentedSentence]:
    """Read CoNLL-U into segmented sentences whose tags are the XPOS column.

    Eojeols are rebuilt from ``i-j`` rows and ``SpaceAfter=No``. For files
    without any MISC annotation, unranged symbol tokens are attached to the
    preceding eojeol. The level comes from ``level``, a ``# level`` comment,
    or the coarsest level whose partition matches the tokens.
    """
    out = []
    for block in _conllu_blocks(_nfc(text)):
        out.append(_read_block(block, level))
    return out


def _conllu_blocks(text: str) -> Iterator[List[Tuple[int, str]]]:
    block: List[Tuple[int, str]] = []
    for lineno, line in enumerate(text.split("\n"), 1):
        if line.strip():
            block.append((lineno, line.rstrip("\r")))
        elif block:
            yield block
            block = []
    if block:
        yield block


def _group_by_text(units, text):
    """Group units into eojeols by matching their surfaces against the
    words of the sentence text; None when they do not line up."""
    words = text.split()
    groups = []
    i = 0
    for w in words:
        acc = ""
        group = []
        while i < len(units) and len(acc) < len(w):
            acc += units[i][2]
            group.append(units[i])
            i += 1
        if acc != w:
            return None
        groups.append(group)
    return groups if i == len(units) else None


def _read_block(block, level):
    sent_id = None
    text_line = None
    file_level = None
    ranges = []  # (start, end, surface, misc)
    rows = []  # (lineno, id, form, lemma, xpos, misc)
    for lineno, line in block:
        if line.startswith("#"):
            key, _, val = line[1:].partition("=")
            key, val = key.strip(), val.strip()
            if key == "sent_id":
                sent_id = val
            elif key == "text":
                text_line = val
            elif key == "level" and val.isdigit():
                file_level = int(val)
            continue
        cols = line.split("\t")
        if len(cols) < 5:
            raise CorpusFormatError(f"expected at least 5 columns, got {len(cols)}", lineno)
        cols += ["_"] * (10 - len(cols))
        rid = cols[0]
        if "." in rid:
            continue  # empty nodes
        if "-" in rid:
            a, _, b = rid.partition("-")
            if not (a.isdigit() and b.isdigit()) or int(a) > int(b):
                raise CorpusFormatError(f"bad range id {rid!r}", lineno)
            a, b = int(a), int(b)
            if ranges and a <= ranges[-1][1]:
                raise CorpusFormatError(f"range {rid} overlaps {ranges[-1][0]}-{ranges[-1][1]}", lineno)
            if a != len(rows) + 1:
                raise CorpusFormatError(f"range {rid} does not start at the next token", lineno)
            ranges.append((a, b, cols[1], cols[9], lineno))
            continue
        if not rid.isdigit() or int(rid) != len(rows) + 1:
            raise CorpusFormatError(f"non-consecutive token id {rid!r}", lineno)
        rows.append((lineno, int(rid), cols[1], cols[2], cols[4], cols[9]))
    if not rows:
        raise CorpusFormatError("sentence without tokens", block[0][0])
    for a, b, _, _, lineno in ranges:
        if b > len(rows):
            raise CorpusFormatError(f"range {a}-{b} past the last token", lineno)

    has_misc = any(r[5] != "_" for r in rows) or any(r[3] != "_" for r in ranges)
    range_at = {r[0]: r for r in ranges}

    # units: (first row idx, last row idx, surface, joins_next)
    units = []
    i = 0
    while i < len(rows):
        tid = rows[i][1]
        if tid in range_at:
            a, b, surf, misc, _ = range_at[tid]
            units.append((a - 1, b - 1, surf, "SpaceAfter=No" in misc, False))
            i = b
        else:
            r = rows[i]
            sym = all(is_sejong_tag(t) and classify_tag(t) is TagClass.SYMBOL
                      for t in r[4].split("+"))
            units.append((i, i, r[2], "SpaceAfter=No" in r[5], sym))
            i += 1

    eojeols = _group_by_text(units, text_line) if text_line else None
    if eojeols is None and has_misc:
        eojeols = []
        joined = False
        for u in units:
            if eojeols and joined:
                eojeols[-1].append(u)
            else:
                eojeols.append([u])
            joined = u[3]
    elif eojeols is None:
        eojeols = []
        for u in units:
            if u[4] and eojeols:
                eojeols[-1].append(u)
            else:
                eojeols.append([u])

    analyses = []
    tokens = []
    for ei, units_ in enumerate(eojeols):
        surface = "".join(u[2] for u in units_)
        morphs: List[Morpheme] = []
        for u in units_:
            for ri in range(u[0], u[1] + 1):
                lineno, _, form, lemma, xpos, _ = rows[ri]
                tags = xpos.split("+")
                if not all(is_sejong_tag(t) for t in tags):
                    raise CorpusFormatError(f"unknown tag in {xpos!r}", lineno)
                if len(tags) == 1:
                    if lemma == "_":
                        forms = [form]
                    elif form in JAMO_LEMMAS and lemma == JAMO_LEMMAS[form]:
                        forms = [form]
                    else:
                        forms = [lemma]
                else:
                    forms = _split_lemma(lemma)
                    if len(forms) != len(tags):
                        raise CorpusFormatError(
                            f"lemma {lemma!r} does not match tag {xpos!r}", lineno)
                start = len(morphs)
                try:
                    morphs.extend(Morpheme(f, t) for f, t in zip(forms, tags))
                except ValueError as exc:
                    raise CorpusFormatError(str(exc), lineno) from None
                tokens.append(TokenGroup(ei, (start, len(morphs)), form, xpos))
        try:
            analyses.append(EojeolAnalysis(surface, tuple(morphs)))
        except ValueError as exc:
            raise CorpusFormatError(str(exc), units_[0][0]) from None

    sentence = Sentence(sent_id or "", tuple(analyses))
    lv = level or file_level or _infer_level(sentence, tokens)
    return SegmentedSentence(check_level(lv), tuple(tokens), sentence)


# -- plain token lines --------------------------------------------------------

def write_tokens(segmented: Union[SegmentedSentence, Iterable[SegmentedSentence]]) -> str:
    items = [segmented] if isinstance(segmented, SegmentedSentence) else list(segmented)
    return _nfc("".join(" ".join(s.forms) + "\n" for s in items))


def read_tokens(text: str) -> List[List[str]]:
    """Whitespace-split token lines. Every line is a sentence, even an empty one."""
    lines = _nfc(text).split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return [line.split() for line in lines]
