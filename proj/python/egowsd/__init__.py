"""Unsupervised, knowledge-free and interpretable word sense disambiguation."""

from ._egowsd import (
    EgowsdError,
    IncompleteModelError,
    Model,
    ModelNotLoadedError,
    ParseError,
    UnknownWordError,
    __version__,
    build,
    chinese_whispers,
    fold_case,
    tokenize,
)

__all__ = [
    "EgowsdError",
    "IncompleteModelError",
    "Model",
    "ModelNotLoadedError",
    "ParseError",
    "UnknownWordError",
    "__version__",
    "build",
    "chinese_whispers",
    "fold_case",
    "load",
    "tokenize",
]


def load(path):
    """Load a saved model directory."""
    return Model.load(path)
