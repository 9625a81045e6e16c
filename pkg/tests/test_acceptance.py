"""One test per acceptance criterion. Each prints a single PASS/FAIL line
(also collected into the terminal summary) and asserts both the result
and its time budget."""

import importlib.util
import time
from importlib import resources
from fractions import Fraction
from pathlib import Path

import pytest

import conftest
from eojeol import cli, corpus_io
from eojeol.core import EojeolAnalysis, Morpheme, Sentence
from eojeol.granularity import (
    SegmentedSentence,
    TokenGroup,
    analysis_strings,
    convert_tree,
    expand_tree_to_level5,
    merge_to_level1,
    segment_sentence,
    skeleton,
)
from eojeol.metrics import bleu, bracket_prf, corpus_stats, pos_accuracy, segmentation_prf
from eojeol.tagger import evaluate_pipeline, train, viterbi
from golden import conllu_mismatches, level_row_mismatches, mt_mismatches, tree_mismatches
from oracles import all_inputs, brute_force, sparsity_fixture, toy_model

ROOT = Path(__file__).resolve().parent.parent
CAT_MAT_BLEU = 48.89230224349011
EXAMPLE_L5 = ("프랑스 의 세계 적 이 ㄴ 의상 디자이너 엠마누엘 웅가로 가 "
             "실내 장식 용 직물 디자이너 로 나서 었 다 .").split()


def report(n: int, ok: bool, detail: str, elapsed: float, budget: float) -> None:
    ok = ok and elapsed < budget
    line = (f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}  "
            f"({elapsed:.2f}s, limit {budget:g}s)")
    conftest.ACCEPTANCE_LINES[n] = line
    print(line)
    assert ok, line


def generator(seed: int):
    spec = importlib.util.spec_from_file_location("make_minicorpus",
                                                  ROOT / "scripts" / "make_minicorpus.py")
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    return mod.Gen(seed)


def generated_sentences(n: int, seed: int = 7):
    g = generator(seed)
    out = []
    for i in range(n):
        _, words = g.sentence()
        out.append(Sentence(f"R-{i}", tuple(
            EojeolAnalysis(w, tuple(Morpheme(f, t) for f, t in ms)) for w, ms in words)))
    return out


def generated_trees(n: int, seed: int = 11):
    g = generator(seed)
    text = "\n".join(g.sentence()[0] for _ in range(n))
    return corpus_io.read_treebank(text)


# -- 1 ---------------------------------------------------------------------------

def test_criterion_1_example_levels(example_sentence):
    t0 = time.perf_counter()
    problems = level_row_mismatches(example_sentence)
    counts = [len(segment_sentence(example_sentence, k).tokens) for k in (1, 5)]
    l5 = segment_sentence(example_sentence, 5).forms
    ok = not problems and counts == [11, 21] and l5 == EXAMPLE_L5
    report(1, ok, f"tokens L1/L5 = {counts[0]}/{counts[1]}, row mismatches = {len(problems)}",
           time.perf_counter() - t0, 1)


# -- 2 ---------------------------------------------------------------------------

def test_criterion_2_golden_files(example_sentence, example_tree):
    t0 = time.perf_counter()
    problems = (conllu_mismatches(example_sentence) + tree_mismatches(example_tree)
                + mt_mismatches(example_sentence))
    report(2, not problems, f"CoNLL-U/tree/MT mismatches = {len(problems)} {problems[:3]}",
           time.perf_counter() - t0, 1)


# -- 3 ---------------------------------------------------------------------------

def _monotone(rows):
    tokens = [r.token_count for r in rows]
    mcw = [r.mcw_ratio for r in rows]
    return (all(a <= b for a, b in zip(tokens, tokens[1:]))
            and all(a >= b for a, b in zip(mcw, mcw[1:])) and mcw[-1] == 0)


def test_criterion_3_monotonicity(mini_sentences):
    t0 = time.perf_counter()
    random_sents = generated_sentences(1000)
    bad = 0
    corpus_ok = True
    for corpus in (mini_sentences, random_sents):
        corpus_ok &= _monotone([corpus_stats(corpus, k) for k in range(1, 6)])
        bad += sum(not _monotone([corpus_stats([s], k) for k in range(1, 6)]) for s in corpus)
    mini_mcw = [corpus_stats(mini_sentences, k).mcw_ratio for k in range(1, 6)]
    report(3, corpus_ok and bad == 0,
           f"{len(mini_sentences)} + {len(random_sents)} sentences, per-sentence violations = {bad}, "
           f"mini MCW = {' > '.join(f'{float(x):.4f}' for x in mini_mcw)}",
           time.perf_counter() - t0, 10)


# -- 4 ---------------------------------------------------------------------------

def test_criterion_4_round_trips(mini_sentences, mini_trees):
    t0 = time.perf_counter()
    failures = []
    for s in mini_sentences:
        for k in range(1, 6):
            if merge_to_level1(segment_sentence(s, k)) != analysis_strings(s):
                failures.append(f"merge {s.id} L{k}")
    if corpus_io.read_morph_corpus(corpus_io.write_morph_corpus(mini_sentences)) != mini_sentences:
        failures.append("sejong-morph")
    if corpus_io.read_treebank(corpus_io.write_treebank(mini_trees)) != mini_trees:
        failures.append("sejong-tree")
    sents = [t.sentence for t in mini_trees]
    for k in range(1, 6):
        segs = [segment_sentence(s, k) for s in mini_sentences]
        if corpus_io.read_conllu(corpus_io.write_conllu(segs)) != segs:
            failures.append(f"conllu L{k}")
        if corpus_io.read_tokens(corpus_io.write_tokens(segs)) != [s.forms for s in segs]:
            failures.append(f"tokens L{k}")
        tk = [convert_tree(t, k) for t in mini_trees]
        if corpus_io.read_bracketed(corpus_io.write_bracketed(tk), sents, k) != tk:
            failures.append(f"bracketed L{k}")
    report(4, not failures, f"merge identity x5 levels, morph/tree/CoNLL-U/bracketed inverses; "
           f"failures = {failures[:5]}", time.perf_counter() - t0, 10)


# -- 5 ---------------------------------------------------------------------------

def test_criterion_5_tree_coherence(mini_trees):
    t0 = time.perf_counter()
    bad = 0
    for t in mini_trees:
        t5 = convert_tree(t, 5)
        shape = skeleton(t.root)
        for k in range(1, 6):
            tk = convert_tree(t, k)
            bad += expand_tree_to_level5(tk) != t5 or skeleton(tk.root) != shape
    report(5, bad == 0, f"{len(mini_trees)} trees x 5 levels, incoherent = {bad}",
           time.perf_counter() - t0, 5)


# -- 6 ---------------------------------------------------------------------------

def _segmentation_examples(example_sentence):
    segs = [segment_sentence(example_sentence, k) for k in range(1, 6)]
    identity = segmentation_prf(segs, segs)
    s = Sentence("1", (EojeolAnalysis("웅가로가", (Morpheme("웅가로", "NNP"), Morpheme("가", "JKS"))),))
    unsplit = segmentation_prf([segment_sentence(s, 3)], [segment_sentence(s, 1)])
    abc = Sentence("1", (EojeolAnalysis("가나다", tuple(Morpheme(c, "NNG") for c in "가나다")),))

    def seg(groups):
        return SegmentedSentence(5, [TokenGroup(0, r, f, "+".join(["NNG"] * (r[1] - r[0])))
                                     for r, f in groups], abc)

    partial = segmentation_prf([seg([((0, 1), "가"), ((1, 2), "나"), ((2, 3), "다")])],
                               [seg([((0, 1), "가"), ((1, 3), "나다")])])
    return [
        (identity.precision, identity.recall, identity.f1) == (1, 1, 1),
        (unsplit.precision, unsplit.recall) == (0, 0),
        (partial.precision, partial.recall, partial.f1) == (Fraction(1, 2), Fraction(1, 3), Fraction(2, 5)),
    ]


def _pos_examples(example_sentence):
    es = tuple(EojeolAnalysis(f"책{i}이", (Morpheme(f"책{i}", "NNG"), Morpheme("이", "JKS")))
               for i in range(10))
    gold = Sentence("1", es)
    toks = list(segment_sentence(gold, 5).tokens)
    toks[1] = TokenGroup(0, (1, 2), "이", "JKC")
    one_wrong = pos_accuracy([gold], [merge_to_level1(SegmentedSentence(5, toks, gold))])
    rt = pos_accuracy([example_sentence], [merge_to_level1(segment_sentence(example_sentence, 5))])
    same = pos_accuracy([gold], [merge_to_level1(segment_sentence(gold, 1))])
    return [same == 1, one_wrong == Fraction(9, 10), rt == 1]


def _bracket_examples(example_tree):
    br = corpus_io.read_bracketed
    relabel = bracket_prf(br("(S (A (NNG x) (NNP y)))"), br("(S (B (NNG x) (NNP y)))"))
    unlabeled = bracket_prf(br("(S (A (NNG x) (NNP y)))"), br("(S (B (NNG x) (NNP y)))"),
                            labeled=False)
    text = corpus_io.write_bracketed(convert_tree(example_tree, 5))
    n = text.count("(") - len(convert_tree(example_tree, 5).leaves())
    pruned = bracket_prf(br(text), br(text.replace("(NP (NNG 의상))", "(NNG 의상)")))
    return [relabel.precision == relabel.recall == Fraction(1, 2), unlabeled.f1 == 1,
            pruned.recall == Fraction(n - 1, n)]


def test_criterion_6_metric_oracles(example_sentence, example_tree):
    t0 = time.perf_counter()
    checks = _segmentation_examples(example_sentence) + _pos_examples(example_sentence)
    checks += _bracket_examples(example_tree)
    random_trees = generated_trees(500)
    levels = [i % 5 + 1 for i in range(500)]
    perfect = sum(bracket_prf([convert_tree(t, k)], [convert_tree(t, k)]).f1 == 1
                  for t, k in zip(random_trees, levels))
    b_id = bleu(["a b c d e"], ["a b c d e"])
    b_dis = bleu(["e f g h"], ["a b c d"])
    b_reg = bleu(["the cat sat on a mat ."], ["the cat sat on the mat ."])
    checks += [perfect == 500, b_id == pytest.approx(100.0, abs=1e-9), b_dis == 0.0,
               abs(b_reg - CAT_MAT_BLEU) <= 1e-6]
    report(6, all(checks), f"{sum(checks)}/{len(checks)} oracle checks, self-F1 = 1 on "
           f"{perfect}/500 random trees, BLEU = {b_id:.1f}/{b_dis:.1f}/{b_reg:.6f}",
           time.perf_counter() - t0, 10)


# -- 7 ---------------------------------------------------------------------------

def test_criterion_7_viterbi_exhaustive():
    t0 = time.perf_counter()
    model = toy_model()
    n = bad = 0
    for forms in all_inputs(6):
        forms = list(forms)
        best, argmaxes = brute_force(model, forms)
        out = viterbi(model, forms)
        n += 1
        bad += out not in argmaxes or abs(model.score(forms, out) - best) > 1e-9
    report(7, bad == 0 and n == 1092, f"{n} inputs of length 1..6 over 3 tags, disagreements = {bad}",
           time.perf_counter() - t0, 5)


# -- 8 ---------------------------------------------------------------------------

def test_criterion_8_sparsity():
    t0 = time.perf_counter()
    train_set, test_set = sparsity_fixture()
    raw = [s.text for s in test_set]
    acc = {k: evaluate_pipeline(train(train_set, k), raw, test_set, gold_segmentation=True).pos_accuracy
           for k in (1, 5)}
    report(8, acc[5] > acc[1], f"eojeol POS accuracy L5 = {float(acc[5]):.4f} > L1 = {float(acc[1]):.4f}",
           time.perf_counter() - t0, 5)


# -- 9 ---------------------------------------------------------------------------

def test_criterion_9_stats_determinism(tmp_path, capsys):
    t0 = time.perf_counter()
    mini = str(resources.files("eojeol") / "data" / "mini.morph")
    outs = []
    for i in range(2):
        path = tmp_path / f"stats{i}.txt"
        assert cli.run(["stats", "--level", "1..5", mini, "-o", str(path)]) == 0
        outs.append(path.read_bytes())
    capsys.readouterr()
    lines = outs[0].decode("utf-8").splitlines()
    shaped = (len(lines) == 4 and lines[0].split() == ["Level", "1", "Level", "2", "Level", "3",
                                                       "Level", "4", "Level", "5"]
              and [line.split()[0] for line in lines[1:]] == ["Token", "MCW", "Immediate"]
              and b"\r" not in outs[0])
    report(9, outs[0] == outs[1] and shaped,
           f"two runs byte-identical = {outs[0] == outs[1]}, table shape ok = {shaped}",
           time.perf_counter() - t0, 5)
