"""Korean word segmentation at five granularity levels, with corpus
readers and writers, evaluation metrics and a small HMM tagger."""

from .core import (
    AlignmentError,
    CorpusFormatError,
    EojeolAnalysis,
    EojeolError,
    Morpheme,
    Sentence,
    StructureError,
    TagClass,
    classify_tag,
)
from .granularity import (
    Leaf,
    Phrase,
    SegmentedSentence,
    SyntaxTree,
    TokenGroup,
    convert_tree,
    expand_tree_to_level5,
    merge_to_level1,
    segment_sentence,
)

__version__ = "0.1.0"

__all__ = [
    "AlignmentError", "CorpusFormatError", "EojeolAnalysis", "EojeolError", "Morpheme",
    "Sentence", "StructureError", "TagClass", "classify_tag", "Leaf", "Phrase",
    "SegmentedSentence", "SyntaxTree", "TokenGroup", "convert_tree",
    "expand_tree_to_level5", "merge_to_level1", "segment_sentence", "load_mini_corpus",
]


def load_mini_corpus(kind: str = "morph"):
    """The bundled 200-sentence sample: ``"morph"`` gives sentences,
    ``"tree"`` gives level-1 trees."""
    from importlib.resources import files

    from . import corpus_io

    if kind == "morph":
        return corpus_io.read_morph_corpus(files(__package__).joinpath("data/mini.morph").read_text("utf-8"))
    if kind == "tree":
        return corpus_io.read_treebank(files(__package__).joinpath("data/mini.tree").read_text("utf-8"))
    raise ValueError(f"unknown sample kind {kind!r}")
