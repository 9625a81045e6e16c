#!/usr/bin/env python3
"""Generate the bundled 200-sentence mini-corpus (morph file + treebank).

Sentences come from a handful of templates over a small lexicon, with
the usual verb contractions (가+았 -> 갔, 하+였 -> 했, 가+ㄴ -> 간) applied to
the surfaces. Output is deterministic for a given seed.

    python scripts/make_minicorpus.py src/eojeol/data
"""

import random
import re
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from eojeol.core import VOWELS, compose_syllable, decompose_syllable, tail_index  # noqa: E402

EXAMPLE_TREE = """(S (NP-SBJ (NP (NP-MOD 프랑스/NNP+의/JKG) (NP (VNP-MOD 세계/NNG+적/XSN+이/VCP+ㄴ/ETM) (NP (NP 의상/NNG) (NP 디자이너/NNG)))) (NP-SBJ (NP 엠마누엘/NNP) (NP-SBJ 웅가로/NNP+가/JKS))) (VP (NP-AJT (NP (NP (NP 실내/NNG) (NP 장식/NNG+용/XSN)) (NP 직물/NNG)) (NP-AJT 디자이너/NNG+로/JKB)) (VP 나서/VV+었/EP+다/EF+./SF)))"""
EXAMPLE_WORDS = "프랑스의 세계적인 의상 디자이너 엠마누엘 웅가로가 실내 장식용 직물 디자이너로 나섰다.".split()

NNG = ["학교", "사람", "책", "정부", "경제", "문제", "시장", "회사", "디자이너", "의상",
       "직물", "도시", "학생", "친구", "영화", "음악", "물", "밥", "집", "바다", "산",
       "나라", "정책", "기업", "사회", "문화", "역사", "신문", "편지", "길"]
NNP = ["서울", "한국", "프랑스", "웅가로", "부산", "철수", "영희", "일본", "미국", "파리"]
NP_ = ["그", "우리", "그녀"]
MAG = ["매우", "다시", "잘", "함께", "빨리", "오늘"]
MM = ["새", "그", "이", "모든"]
VV_TRANS = ["읽", "만들", "보", "먹", "좋아하", "찾", "쓰", "배우", "기다리", "마시"]
VV_INTRANS = ["가", "오", "나서", "살", "떠나", "도착하", "돌아가"]
VA = ["크", "좋", "작", "많", "아름답", "넓"]
XSV_NOUNS = ["공부", "준비", "발표", "생각", "연구"]


def tail(syl):
    return decompose_syllable(syl).tail


def vowel(syl):
    return VOWELS[decompose_syllable(syl).vowel]


def with_vowel_tail(syl, v, t):
    d = decompose_syllable(syl)
    return compose_syllable(d._replace(vowel=VOWELS.index(v), tail=tail_index(t) if t else None))


def final_consonant(word):
    last = word[-1]
    if not ("가" <= last <= "힣"):
        return True
    return tail(last) is not None


def particle(noun, with_c, without_c):
    return with_c if final_consonant(noun) else without_c


def past(stem, tag="VV"):
    """(morphemes after the stem, surface) for stem + past tense marker."""
    last = stem[-1]
    v = vowel(last)
    if stem.endswith("하"):
        return "였", stem[:-1] + "했"
    if tail(last) is not None:
        ep = "았" if v in "ㅏㅗ" else "었"
        return ep, stem + ep
    if v == "ㅏ":
        return "았", stem[:-1] + with_vowel_tail(last, "ㅏ", "ㅆ")
    if v in "ㅓㅐㅔ":
        return "었", stem[:-1] + with_vowel_tail(last, v, "ㅆ")
    if v == "ㅗ":
        return "았", stem[:-1] + with_vowel_tail(last, "ㅘ", "ㅆ")
    if v == "ㅜ":
        return "었", stem[:-1] + with_vowel_tail(last, "ㅝ", "ㅆ")
    if v == "ㅣ":
        return "었", stem[:-1] + with_vowel_tail(last, "ㅕ", "ㅆ")
    if v == "ㅡ":
        return "었", stem[:-1] + with_vowel_tail(last, "ㅓ", "ㅆ")
    return "었", stem + "었"


def fuse(stem, jamo):
    """stem + lone jamo ending; None when the stem is closed."""
    last = stem[-1]
    if tail(last) is not None:
        return None
    return stem[:-1] + with_vowel_tail(last, vowel(last), jamo)


class Gen:
    def __init__(self, seed):
        self.r = random.Random(seed)

    def pick(self, xs):
        return self.r.choice(xs)

    # each builder returns (tree string, list of words); leaves are analyses

    def noun(self):
        """(text, morphemes) of a bare nominal."""
        roll = self.r.random()
        if roll < 0.15:
            n = self.pick(NNP)
            return n, [(n, "NNP")]
        if roll < 0.22:
            n = self.pick(NNG)
            return n + "용", [(n, "NNG"), ("용", "XSN")]
        if roll < 0.27:
            return "IT기업", [("IT", "SL"), ("기업", "NNG")]
        if roll < 0.32:
            n = self.pick(NP_)
            return n, [(n, "NP")]
        n = self.pick(NNG)
        return n, [(n, "NNG")]

    def nominal(self, case):
        """An eojeol: noun + particle for the given case slot."""
        text, morphs = self.noun()
        quoted = self.r.random() < 0.05 and case == "OBJ"
        if case == "SBJ":
            if self.r.random() < 0.4:
                p, tag = particle(text, "은", "는"), "JX"
            else:
                p, tag = particle(text, "이", "가"), "JKS"
        elif case == "OBJ":
            p, tag = particle(text, "을", "를"), "JKO"
        elif case == "AJT":
            p = self.pick(["에", "에서", "로", "에게"])
            if p == "로" and final_consonant(text) and tail(text[-1]) != tail_index("ㄹ"):
                p = "으로"
            tag = "JKB"
        elif case == "GEN":
            p, tag = "의", "JKG"
        else:
            p, tag = None, None
        surface = text
        if quoted:
            morphs = [("‘", "SS")] + morphs + [("’", "SS")]
            surface = "‘" + text + "’"
        if p:
            morphs.append((p, tag))
            surface += p
        if case == "SBJ" and self.r.random() < 0.1:
            morphs.append((",", "SP"))
            surface += ","
        return surface, morphs

    def np(self, case, label):
        word = self.nominal(case)
        roll = self.r.random()
        if roll < 0.2:
            mod = self.nominal("GEN")
            return f"({label} (NP-MOD {leaf(mod)}) ({label} {leaf(word)}))", [mod, word]
        if roll < 0.3:
            d = self.pick(MM)
            mod = (d, [(d, "MM")])
            return f"({label} (DP {leaf(mod)}) ({label} {leaf(word)}))", [mod, word]
        if roll < 0.4:
            mod = self.adnominal()
            return f"({label} (VP-MOD {leaf(mod)}) ({label} {leaf(word)}))", [mod, word]
        return f"({label} {leaf(word)})", [word]

    def adnominal(self):
        stem = self.pick(VA + VV_INTRANS)
        tag = "VA" if stem in VA else "VV"
        fused = fuse(stem, "ㄴ")
        if stem == "아름답":
            return "아름다운", [("아름답", "VA"), ("ㄴ", "ETM")]
        if stem == "살":
            return "산", [("살", tag), ("ㄴ", "ETM")]
        if fused:
            return fused, [(stem, tag), ("ㄴ", "ETM")]
        return stem + "은", [(stem, tag), ("은", "ETM")]

    def predicate(self, kind, final):
        """Sentence-final predicate eojeol(s) as (tree, words)."""
        punct = self.pick([".", ".", ".", "?"]) if final else None

        def close(surface, morphs):
            if punct:
                return surface + punct, morphs + [(punct, "SF")]
            return surface, morphs

        if kind == "copula":
            n = self.pick(NNG)
            if final_consonant(n):
                w = close(n + "이다", [(n, "NNG"), ("이", "VCP"), ("다", "EF")])
            else:
                w = close(n + "다", [(n, "NNG"), ("이", "VCP"), ("다", "EF")])
            return f"(VNP {leaf(w)})", [w]
        if kind == "adj":
            stem = self.pick(VA)
            w = close(stem + "다", [(stem, "VA"), ("다", "EF")])
            return f"(VP {leaf(w)})", [w]
        if kind == "progressive":
            stem = self.pick(VV_TRANS)
            v1 = (stem + "고", [(stem, "VV"), ("고", "EC")])
            ep, surf = past("있")
            v2 = close(surf + "다", [("있", "VX"), (ep, "EP"), ("다", "EF")]) \
                if self.r.random() < 0.5 else close("있다", [("있", "VX"), ("다", "EF")])
            return f"(VP (VP {leaf(v1)}) (VP {leaf(v2)}))", [v1, v2]
        if kind == "hada":
            n = self.pick(XSV_NOUNS)
            if self.r.random() < 0.6:
                w = close(n + "했다", [(n, "NNG"), ("하", "XSV"), ("였", "EP"), ("다", "EF")])
            else:
                w = close(n + "한다", [(n, "NNG"), ("하", "XSV"), ("ㄴ다", "EF")])
            return f"(VP {leaf(w)})", [w]
        stems = VV_TRANS if kind == "trans" else VV_INTRANS
        stem = self.pick(stems)
        roll = self.r.random()
        if roll < 0.5:
            ep, surf = past(stem)
            w = close(surf + "다", [(stem, "VV"), (ep, "EP"), ("다", "EF")])
        elif roll < 0.65 and tail(stem[-1]) is None:
            # honorific + past: 가+시+었 -> 가셨
            w = close(stem + "셨다", [(stem, "VV"), ("시", "EP"), ("었", "EP"), ("다", "EF")])
        elif tail(stem[-1]) is None:
            w = close(fuse(stem, "ㄴ") + "다", [(stem, "VV"), ("ㄴ다", "EF")])
        elif stem.endswith("ㄹ") or tail(stem[-1]) == tail_index("ㄹ"):
            w = close(stem[:-1] + with_vowel_tail(stem[-1], vowel(stem[-1]), "ㄴ") + "다",
                      [(stem, "VV"), ("ㄴ다", "EF")])
        else:
            w = close(stem + "는다", [(stem, "VV"), ("는다", "EF")])
        return f"(VP {leaf(w)})", [w]

    def sentence(self):
        kind = self.pick(["trans", "trans", "intrans", "copula", "adj", "progressive", "hada"])
        sbj_tree, sbj = self.np("SBJ", "NP-SBJ")
        pred_tree, pred = self.predicate(kind, final=True)
        if kind in ("trans", "progressive"):
            obj_tree, obj = self.np("OBJ", "NP-OBJ")
            vp, vp_words = f"(VP {obj_tree} {pred_tree})", obj + pred
        elif kind == "intrans":
            ajt_tree, ajt = self.np("AJT", "NP-AJT")
            vp, vp_words = f"(VP {ajt_tree} {pred_tree})", ajt + pred
        else:
            vp, vp_words = pred_tree, pred
        if self.r.random() < 0.25:
            adv = self.pick(MAG)
            a = (adv, [(adv, "MAG")])
            vp, vp_words = f"(VP (AP {leaf(a)}) {vp})", [a] + vp_words
        if self.r.random() < 0.15:
            # a fronted time adverbial with a number
            m = self.r.randint(1, 12)
            t = (f"{m}월에", [(str(m), "SN"), ("월", "NNB"), ("에", "JKB")])
            return f"(S (NP-AJT {leaf(t)}) (S {sbj_tree} {vp}))", [t] + sbj + vp_words
        return f"(S {sbj_tree} {vp})", sbj + vp_words


def esc(form):
    return form.replace("\\", "\\\\").replace("/", "\\/").replace("+", "\\+") \
        .replace("(", "-LRB-").replace(")", "-RRB-")


def leaf(word):
    _, morphs = word
    return "+".join(f"{esc(f)}/{t}" for f, t in morphs)


def main(out_dir, seed=20, n=200):
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    g = Gen(seed)
    trees = [(EXAMPLE_TREE, EXAMPLE_WORDS)]
    morph_blocks = []
    # the example sentence, straight from its tree
    example_leaves = re.findall(r" ([^\s()]+/[A-Z]+(?:\+[^\s()]+/[A-Z]+)*)\)", EXAMPLE_TREE)
    assert len(example_leaves) == len(EXAMPLE_WORDS)
    morph_blocks.append([(w, a) for w, a in zip(EXAMPLE_WORDS, example_leaves)])
    while len(trees) < n:
        tree, words = g.sentence()
        in_tree = [x for x in re.findall(r" ([^\s()]+)\)", tree) if "/" in x]
        assert in_tree == [leaf(w) for w in words], tree
        trees.append((tree, [w for w, _ in words]))
        morph_blocks.append([(w, leaf((w, m))) for w, m in words])

    with open(out / "mini.tree", "w", encoding="utf-8") as f:
        for tree, words in trees:
            f.write(f"; {' '.join(words)}\n{tree}\n")
    with open(out / "mini.morph", "w", encoding="utf-8") as f:
        k = 0
        blocks = []
        for si, block in enumerate(morph_blocks, 1):
            lines = []
            for surface, analysis in block:
                k += 1
                lines.append(f"MINI{(si - 1) // 50 + 1:04d}-{k:08d}\t{surface}\t{analysis}\n")
            blocks.append("".join(lines))
        f.write("\n".join(blocks))


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "src/eojeol/data")
