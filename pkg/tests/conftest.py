import logging
from pathlib import Path

import pytest

from alexlab.fpgroup import GroupPresentation, Word, load_presentation, parse_presentation
from alexlab.laurent import from_text

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


def poly(text: str, nvars: int = 1):
    """Canonical polynomial from its text form."""
    return from_text(text, nvars).normalized()


def corpus(name: str):
    return load_presentation(CORPUS / f"{name}.fp")


def relabel(p: GroupPresentation, perm, inverted=(), relator_order=None) -> GroupPresentation:
    """Same group: generator i becomes generator perm[i], inverted ones are replaced by their inverses."""
    names = [None] * p.ngens
    for i, j in enumerate(perm):
        names[j] = p.generators[i]
    relators = [Word.reduced([(perm[g], -e if g in inverted else e) for g, e in r.syllables]) for r in p.relators]
    if relator_order is not None:
        relators = [relators[i] for i in relator_order]
    return GroupPresentation(tuple(names), tuple(relators))


def conjugate_relator(p: GroupPresentation, i: int, w: Word) -> GroupPresentation:
    relators = list(p.relators)
    relators[i] = w * relators[i] * w.inverse()
    return GroupPresentation(p.generators, tuple(relators))


@pytest.fixture
def corpus_dir() -> Path:
    return CORPUS


@pytest.fixture
def trefoil():
    return parse_presentation("gens a b\nrel a^2 b^-3\n")


@pytest.fixture(autouse=True)
def _reset_logging(monkeypatch):
    for name in ("ALEXLAB_MAX_VARS", "ALEXLAB_MAX_HULL_DIM", "ALEXLAB_KMAX", "ALEXLAB_LOG_LEVEL"):
        monkeypatch.delenv(name, raising=False)
    yield
    logger = logging.getLogger("alexlab")
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
    logger.setLevel(logging.NOTSET)
