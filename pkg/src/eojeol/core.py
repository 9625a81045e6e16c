"""Domain types, the Sejong tag taxonomy and hangul jamo arithmetic."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Tuple


class EojeolError(ValueError):
    """Base class for data errors raised by this package."""


class CorpusFormatError(EojeolError):
    """Malformed input text. Carries the 1-based line number when known."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class StructureError(EojeolError):
    """Provenance or tree structure that an operation cannot work with."""


class AlignmentError(EojeolError):
    """Gold and predicted data that cannot be scored against each other."""


class TagClass(enum.Enum):
    SYMBOL = "Symbol"
    CASE_MARKER = "CaseMarker"
    VERBAL_ENDING = "VerbalEnding"
    LEXICAL = "Lexical"


SYMBOL_TAGS = frozenset({"SF", "SP", "SS", "SE", "SO", "SW"})
CASE_MARKER_TAGS = frozenset({"JKS", "JKC", "JKG", "JKO", "JKB", "JKV", "JKQ", "JX", "JC"})
VERBAL_ENDING_TAGS = frozenset({"EP", "EF", "EC", "ETN", "ETM"})
LEXICAL_TAGS = frozenset({
    "NNG", "NNP", "NNB", "NP", "NR", "VV", "VA", "VX", "VCP", "VCN", "MM",
    "MAG", "MAJ", "IC", "XPN", "XSN", "XSV", "XSA", "XR", "SL", "SH", "SN",
    "NF", "NV", "NA",
})

# the closed tagset, in a stable order
SEJONG_TAGS: Tuple[str, ...] = (
    "NNG", "NNP", "NNB", "NP", "NR", "VV", "VA", "VX", "VCP", "VCN", "MM",
    "MAG", "MAJ", "IC", "JKS", "JKC", "JKG", "JKO", "JKB", "JKV", "JKQ", "JX",
    "JC", "EP", "EF", "EC", "ETN", "ETM", "XPN", "XSN", "XSV", "XSA", "XR",
    "SF", "SP", "SS", "SE", "SO", "SW", "SL", "SH", "SN", "NF", "NV", "NA",
)
_TAG_SET = frozenset(SEJONG_TAGS)

_CLASS_OF = {}
for _tags, _cls in (
    (SYMBOL_TAGS, TagClass.SYMBOL),
    (CASE_MARKER_TAGS, TagClass.CASE_MARKER),
    (VERBAL_ENDING_TAGS, TagClass.VERBAL_ENDING),
    (LEXICAL_TAGS, TagClass.LEXICAL),
):
    for _t in _tags:
        _CLASS_OF[_t] = _cls
assert set(_CLASS_OF) == _TAG_SET


def is_sejong_tag(tag: str) -> bool:
    return tag in _TAG_SET


def classify_tag(tag: str) -> TagClass:
    """Map a Sejong tag to its granularity-relevant class."""
    try:
        return _CLASS_OF[tag]
    except KeyError:
        raise ValueError(f"unknown Sejong tag {tag!r}") from None


@dataclass(frozen=True)
class Morpheme:
    form: str
    tag: str
    # sense numbers never take part in comparisons
    sense: Optional[str] = field(default=None, compare=False)

    def __post_init__(self):
        if not self.form:
            raise ValueError("empty morpheme form")
        if any(c.isspace() for c in self.form):
            raise ValueError(f"whitespace in morpheme form {self.form!r}")
        if self.tag not in _TAG_SET:
            raise ValueError(f"unknown Sejong tag {self.tag!r}")

    @property
    def tag_class(self) -> TagClass:
        return _CLASS_OF[self.tag]


@dataclass(frozen=True)
class EojeolAnalysis:
    surface: str
    morphemes: Tuple[Morpheme, ...]

    def __post_init__(self):
        if not self.surface or any(c.isspace() for c in self.surface):
            raise ValueError(f"bad eojeol surface {self.surface!r}")
        if not self.morphemes:
            raise ValueError(f"eojeol {self.surface!r} has no morphemes")
        object.__setattr__(self, "morphemes", tuple(self.morphemes))

    @property
    def tags(self) -> Tuple[str, ...]:
        return tuple(m.tag for m in self.morphemes)


@dataclass(frozen=True)
class Sentence:
    id: str
    eojeols: Tuple[EojeolAnalysis, ...]
    # per-eojeol record ids of the Sejong line format, kept for rewriting
    line_ids: Optional[Tuple[str, ...]] = field(default=None, compare=False)

    def __post_init__(self):
        if not self.eojeols:
            raise ValueError(f"sentence {self.id!r} has no eojeols")
        object.__setattr__(self, "eojeols", tuple(self.eojeols))
        if self.line_ids is not None:
            object.__setattr__(self, "line_ids", tuple(self.line_ids))
            if len(self.line_ids) != len(self.eojeols):
                raise ValueError("line_ids must match the eojeol count")

    @property
    def text(self) -> str:
        return " ".join(e.surface for e in self.eojeols)


LEVELS = (1, 2, 3, 4, 5)


def check_level(level: int) -> int:
    if level not in LEVELS:
        raise ValueError(f"granularity level must be 1..5, got {level!r}")
    return level


# Hangul syllable arithmetic. Jamo are exposed as compatibility jamo
# (U+3131..), which is what the Sejong corpus writes for lone endings.

SYLLABLE_BASE = 0xAC00
SYLLABLE_LAST = 0xD7A3
_LEAD_SPAN = 588
_VOWEL_SPAN = 28

LEADS = "ㄱㄲㄴㄷㄸㄹㅁㅂㅃㅅㅆㅇㅈㅉㅊㅋㅌㅍㅎ"
VOWELS = "ㅏㅐㅑㅒㅓㅔㅕㅖㅗㅘㅙㅚㅛㅜㅝㅞㅟㅠㅡㅢㅣ"
# index 0 is "no tail"
TAILS = " ㄱㄲㄳㄴㄵㄶㄷㄹㄺㄻㄼㄽㄾㄿㅀㅁㅂㅄㅅㅆㅇㅈㅊㅋㅌㅍㅎ"


class JamoTriple(NamedTuple):
    lead: int
    vowel: int
    tail: Optional[int] = None

    @property
    def jamo(self) -> Tuple[str, str, Optional[str]]:
        return (LEADS[self.lead], VOWELS[self.vowel],
                TAILS[self.tail] if self.tail else None)


def is_syllable(ch: str) -> bool:
    return len(ch) == 1 and SYLLABLE_BASE <= ord(ch) <= SYLLABLE_LAST


def decompose_syllable(ch: str) -> JamoTriple:
    if not is_syllable(ch):
        raise ValueError(f"not a precomposed hangul syllable: {ch!r}")
    offset = ord(ch) - SYLLABLE_BASE
    tail = offset % _VOWEL_SPAN
    return JamoTriple(offset // _LEAD_SPAN, (offset % _LEAD_SPAN) // _VOWEL_SPAN,
                      tail or None)


def compose_syllable(triple: JamoTriple) -> str:
    lead, vowel, tail = triple
    if not 0 <= lead < len(LEADS):
        raise ValueError(f"lead index out of range: {lead}")
    if not 0 <= vowel < len(VOWELS):
        raise ValueError(f"vowel index out of range: {vowel}")
    if tail is not None and not 1 <= tail < len(TAILS):
        raise ValueError(f"tail index out of range: {tail}")
    return chr(SYLLABLE_BASE + lead * _LEAD_SPAN + vowel * _VOWEL_SPAN + (tail or 0))


def tail_index(jamo: str) -> Optional[int]:
    """Jongseong index of a compatibility jamo, or None if it cannot be a tail."""
    i = TAILS.find(jamo)
    return i if i > 0 else None


def add_tail(ch: str, jamo: str) -> Optional[str]:
    """Attach ``jamo`` as the tail of an open syllable; None if impossible."""
    if not is_syllable(ch):
        return None
    t = decompose_syllable(ch)
    idx = tail_index(jamo)
    if t.tail is not None or idx is None:
        return None
    return compose_syllable(t._replace(tail=idx))


# lone-jamo endings that fuse into the preceding syllable's tail
FUSING_JAMO = "ㄴㄹㅁㅂ"
