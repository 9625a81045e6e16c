import unicodedata

import pytest
from hypothesis import given, settings, strategies as st

from eojeol import corpus_io
from eojeol.core import CorpusFormatError, EojeolAnalysis, Morpheme, Sentence
from eojeol.granularity import analysis_strings, convert_tree, segment_sentence
from conftest import read_fixture
from golden import conllu_mismatches, mt_mismatches, tree_mismatches
from strategies import sentences, trees


# -- morph corpus ------------------------------------------------------------------

def test_read_morph_line():
    (s,) = corpus_io.read_morph_corpus("BTAA0001-00000017\t웅가로가\t웅가로/NNP+가/JKS\n")
    (e,) = s.eojeols
    assert e.surface == "웅가로가"
    assert e.morphemes == (Morpheme("웅가로", "NNP"), Morpheme("가", "JKS"))
    assert s.line_ids == ("BTAA0001-00000017",)


def test_read_sense_numbers():
    (s,) = corpus_io.read_morph_corpus(read_fixture("example_sense.txt"))
    m = s.eojeols[1].morphemes
    assert len(m) == 4 and m[0].form == "세계" and m[0].sense == "02"
    assert s.eojeols[7].morphemes[0].sense == "05"


def test_senses_do_not_change_analyses(example_sentence):
    (s,) = corpus_io.read_morph_corpus(read_fixture("example_sense.txt"))
    assert analysis_strings(s) == analysis_strings(example_sentence)


@pytest.mark.parametrize("text, line", [
    ("a\t가\t가/NNG\nx\ty\n", 2),
    ("a\t가\t가/XYZ\n", 1),
    ("a\t가\t/NNG\n", 1),
    ("a\t가\t가NNG\n", 1),
    ("a\t가\t가/NNG+\n", 1),
])
def test_morph_errors_carry_line(text, line):
    with pytest.raises(CorpusFormatError) as exc:
        corpus_io.read_morph_corpus(text)
    assert exc.value.line == line


def test_id_prefix_boundaries():
    text = "A-1\t가\t가/NNG\nA-2\t나\t나/NNG\nB-1\t다\t다/NNG\n"
    assert [len(s.eojeols) for s in corpus_io.read_morph_corpus(text, boundary="id-prefix")] == [2, 1]
    assert len(corpus_io.read_morph_corpus(text)) == 1


def test_escaped_symbols_round_trip():
    e = EojeolAnalysis("1/2+3", (Morpheme("1", "SN"), Morpheme("/", "SP"), Morpheme("2", "SN"),
                                 Morpheme("+", "SW"), Morpheme("3", "SN")))
    text = corpus_io.write_morph_corpus([Sentence("X-1", (e,))])
    assert "1/SN+\\//SP+2/SN+\\+/SW+3/SN" in text
    assert corpus_io.read_morph_corpus(text)[0].eojeols == (e,)


def test_morph_write_read_example(example_sentence):
    text = read_fixture("example_morph.txt")
    assert corpus_io.write_morph_corpus([example_sentence]) == text


def test_nfc_normalization():
    nfd = unicodedata.normalize("NFD", "a\t웅가로가\t웅가로/NNP+가/JKS\n")
    (s,) = corpus_io.read_morph_corpus(nfd)
    assert s.eojeols[0].surface == "웅가로가"


# -- treebank ----------------------------------------------------------------------

def test_read_treebank_examples():
    (t,) = corpus_io.read_treebank("(NP-SBJ 웅가로/NNP+가/JKS)")
    assert t.root.label == "NP-SBJ" and t.root.function == "SBJ" and t.root.category == "NP"
    pre = t.preterminals()
    assert [p.label for p in pre] == ["NNP+JKS"]
    assert t.leaves()[0].rendered_form == "웅가로가"
    (t,) = corpus_io.read_treebank("(VP 나서/VV+었/EP+다/EF+./SF)")
    assert t.preterminals()[0].label == "VV+EP+EF+SF"
    # no "; text" line, and contractions are never synthesized
    assert t.sentence.eojeols[0].surface == "나서었다."
    (t,) = corpus_io.read_treebank("; 나섰다.\n(VP 나서/VV+었/EP+다/EF+./SF)")
    assert t.sentence.eojeols[0].surface == "나섰다."


@pytest.mark.parametrize("text, msg", [
    ("(NP", "unbalanced"),
    ("(NP 의상/NNG))", "unbalanced"),
    ("(NP )", "empty"),
    ("(NP 의상)", "separator"),
])
def test_treebank_errors(text, msg):
    with pytest.raises(CorpusFormatError, match=msg):
        corpus_io.read_treebank(text)


def test_treebank_round_trip(example_tree):
    text = corpus_io.write_treebank([example_tree])
    (again,) = corpus_io.read_treebank(text)
    assert again == example_tree
    assert corpus_io.write_treebank([again]) == text


def test_treebank_writer_needs_level1(example_tree):
    with pytest.raises(ValueError):
        corpus_io.write_treebank([convert_tree(example_tree, 3)])


# -- bracketed ---------------------------------------------------------------------

def test_golden_tree_fragments(example_tree):
    assert tree_mismatches(example_tree) == []


def test_single_leaf_tree():
    (t,) = corpus_io.read_treebank("(NP 의상/NNG)")
    assert corpus_io.write_bracketed(t) == "(NP (NNG 의상))\n"


def test_bracketed_round_trip_with_sentences(example_tree):
    for k in range(1, 6):
        tk = convert_tree(example_tree, k)
        (back,) = corpus_io.read_bracketed(corpus_io.write_bracketed(tk), [example_tree.sentence], k)
        assert back == tk
        (inferred,) = corpus_io.read_bracketed(corpus_io.write_bracketed(tk), [example_tree.sentence])
        assert corpus_io.write_bracketed(inferred) == corpus_io.write_bracketed(tk)


def test_bracketed_without_sentences(example_tree):
    text = corpus_io.write_bracketed(convert_tree(example_tree, 4))
    (t,) = corpus_io.read_bracketed(text)
    assert t.sentence is None
    assert corpus_io.write_bracketed(t) == text


def test_bracketed_parens_escaped():
    e = EojeolAnalysis("(가)", (Morpheme("(", "SS"), Morpheme("가", "NNG"), Morpheme(")", "SS")))
    s = Sentence("1", (e,))
    (t,) = corpus_io.read_treebank(corpus_io.write_treebank(
        [corpus_io.read_treebank("(NP -LRB-/SS+가/NNG+-RRB-/SS)")[0]]))
    assert t.sentence.eojeols[0].morphemes == e.morphemes
    t2 = convert_tree(t, 2)
    text = corpus_io.write_bracketed(t2)
    assert text == "(NP (SS -LRB-) (NNG 가) (SS -RRB-))\n"
    assert corpus_io.read_bracketed(text, [s])[0].leaves() == t2.leaves()


def test_bracketed_errors():
    with pytest.raises(CorpusFormatError):
        corpus_io.read_bracketed("(S (VP-X 가))")
    with pytest.raises(CorpusFormatError):
        corpus_io.read_bracketed("(S 가 나)")


# -- CoNLL-U -----------------------------------------------------------------------

def test_golden_conllu_rows(example_sentence):
    assert conllu_mismatches(example_sentence) == []


def test_level1_upos_cell_is_verb_by_rule(example_sentence):
    # the printed table says NOUN; the last-lexical rule gives VERB (VCP)
    text = corpus_io.write_conllu(segment_sentence(example_sentence, 1))
    row = [line for line in text.splitlines() if line.startswith("2\t")][0]
    assert row.split("\t")[3] == "VERB"


def test_conllu_header_and_layout(example_sentence):
    text = corpus_io.write_conllu(segment_sentence(example_sentence, 2))
    lines = text.splitlines()
    assert lines[0] == "# sent_id = BTAA0001-00000012"
    assert lines[1] == "# text = " + example_sentence.text
    assert lines[2] == "# level = 2"
    assert all(len(line.split("\t")) == 10 for line in lines[3:])
    # no range row for 나섰다 + .
    assert not any(line.startswith("11-") for line in lines)
    assert lines[-1].split("\t")[:5] == ["12", ".", ".", "PUNCT", "SF"]
    assert lines[-2].split("\t")[9] == "SpaceAfter=No"


def test_read_golden_level3_token_count(example_sentence):
    text = corpus_io.write_conllu(segment_sentence(example_sentence, 3))
    (seg,) = corpus_io.read_conllu(text)
    assert len(seg.tokens) == 15
    assert seg.level == 3


@pytest.mark.parametrize("body, msg", [
    ("3-5\t가나다\t_\t_\t_\n1\t가\t가\tX\tNNG\n", "start"),
    ("1-2\t가나\t_\t_\t_\n1\t가\t가\tX\tNNG\n2-3\t나다\t_\t_\t_\n2\t나\t나\tX\tNNG\n3\t다\t다\tX\tNNG\n", "overlap"),
    ("1\t가\t가\tX\tNNG\n3\t나\t나\tX\tNNG\n", "non-consecutive"),
    ("1\t가\t가\tX\tNNG+JKS\n", "lemma"),
    ("1\t가\t가\n", "columns"),
])
def test_conllu_errors(body, msg):
    with pytest.raises(CorpusFormatError, match=msg):
        corpus_io.read_conllu(body)


def test_conllu_without_misc_groups_symbols():
    body = "1\t나섰다\t나서+었+다\tVERB\tVV+EP+EF\n2\t.\t.\tPUNCT\tSF\n"
    (seg,) = corpus_io.read_conllu(body)
    assert [e.surface for e in seg.source.eojeols] == ["나섰다."]
    assert seg.level == 2


def test_upos_rule():
    assert corpus_io.upos_of(["NNP", "JKS"]) == "PROPN"
    assert corpus_io.upos_of(["JKS"]) == "ADP"
    assert corpus_io.upos_of(["EF"]) == "PART"
    assert corpus_io.upos_of(["XSN"]) == "PART"
    assert corpus_io.upos_of(["SW"]) == "SYM"
    assert corpus_io.upos_of(["SF"]) == "PUNCT"
    assert corpus_io.upos_of(["MAG"]) == "ADV"


def test_lemmas():
    assert corpus_io.lemma_of([Morpheme("ㄴ", "ETM")]) == "은"
    assert corpus_io.lemma_of([Morpheme("ㄹ", "ETM")]) == "을"
    assert corpus_io.lemma_of([Morpheme("세계", "NNG"), Morpheme("적", "XSN")]) == "세계+적"


# -- tokens ------------------------------------------------------------------------

def test_mt_lines(example_sentence):
    assert mt_mismatches(example_sentence) == []
    assert corpus_io.write_tokens(segment_sentence(example_sentence, 1)) == example_sentence.text + "\n"


def test_read_tokens():
    assert corpus_io.read_tokens("a b\n\nc\n") == [["a", "b"], [], ["c"]]


# -- round trips on generated data -------------------------------------------------

@settings(max_examples=100)
@given(st.lists(sentences(), min_size=1, max_size=4), st.integers(1, 5))
def test_generated_round_trips(sents, level):
    sents = [Sentence(f"G-{i}", s.eojeols) for i, s in enumerate(sents)]
    back = corpus_io.read_morph_corpus(corpus_io.write_morph_corpus(sents))
    assert back == sents
    segs = [segment_sentence(s, level) for s in sents]
    assert corpus_io.read_conllu(corpus_io.write_conllu(segs)) == segs
    lines = corpus_io.read_tokens(corpus_io.write_tokens(segs))
    assert lines == [s.forms for s in segs]


@settings(max_examples=60)
@given(trees(), st.integers(1, 5))
def test_generated_tree_round_trips(t, level):
    t = type(t)(t.root, 1, Sentence("1", t.sentence.eojeols))
    (back,) = corpus_io.read_treebank(corpus_io.write_treebank([t]))
    assert back == t
    tk = convert_tree(t, level)
    (b2,) = corpus_io.read_bracketed(corpus_io.write_bracketed(tk), [t.sentence], level)
    assert b2 == tk
