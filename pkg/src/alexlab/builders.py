"""
Constructors for the standard families: torus bundles, torus knots,
free-by-cyclic groups and a few small groups used by the corpus.
"""

from typing import Sequence

from .errors import InvalidInputError, PresentationParseError
from .exactla import IntMatrix
from .fpgroup import GroupPresentation, Word, parse_word


def _monodromy(A) -> IntMatrix:
    M = A if isinstance(A, IntMatrix) else IntMatrix.from_rows(A)
    if (M.rows, M.cols) != (2, 2):
        raise InvalidInputError(f"Monodromy must be a 2x2 matrix, got {M.rows}x{M.cols}.")
    if abs(M.determinant()) != 1:
        raise InvalidInputError(f"Monodromy {M.to_rows()} has determinant {M.determinant()}, not +-1.")
    return M


def torus_bundle(A) -> GroupPresentation:
    """
    <x, y, t | [x, y], t x t^-1 = x^a11 y^a21, t y t^-1 = x^a12 y^a22>: the
    monodromy acts on column vectors.
    """
    M = _monodromy(A)
    x, y, t = 0, 1, 2
    commutator = Word.reduced([(x, 1), (y, 1), (x, -1), (y, -1)])
    relators = [commutator]
    for g, col in ((x, 0), (y, 1)):
        image = Word.reduced([(x, M[0, col]), (y, M[1, col])])
        relators.append(Word.reduced([(t, 1), (g, 1), (t, -1)]) * image.inverse())
    return GroupPresentation(("x", "y", "t"), tuple(relators))


def torus_knot(p: int, q: int) -> GroupPresentation:
    if p < 1 or q < 1:
        raise InvalidInputError(f"Torus knot parameters must be positive, got ({p}, {q}).")
    return GroupPresentation(("a", "b"), (Word.reduced([(0, p), (1, -q)]),))


def _image_word(image, names: Sequence[str]) -> Word:
    if isinstance(image, Word):
        if not image.generators() <= set(range(len(names))):
            raise InvalidInputError(f"Image word uses a generator outside {list(names)}.")
        return image
    try:
        return parse_word(image, names)
    except PresentationParseError as e:
        raise InvalidInputError(f"Bad image {image!r}: {e}")


def free_by_cyclic(images: Sequence, names: Sequence[str] | None = None) -> GroupPresentation:
    """
    <x1..xm, t | t x_i t^-1 = phi(x_i)>. Images are Words or text over the
    fiber generators; whether phi is an automorphism is not checked.
    """
    m = len(images)
    names = list(names) if names is not None else [f"x{i + 1}" for i in range(m)]
    if len(names) != m:
        raise InvalidInputError(f"{len(names)} generator names for {m} images.")
    words = [_image_word(image, names) for image in images]
    stable = "t"
    while stable in names:
        stable += "_2"
    relators = tuple(
        Word.reduced([(m, 1), (i, 1), (m, -1)]) * word.inverse() for i, word in enumerate(words)
    )
    return GroupPresentation(tuple(names) + (stable,), relators)


def abelianized_monodromy(images: Sequence, names: Sequence[str] | None = None) -> IntMatrix:
    """Column i holds the exponent sums of phi(x_i)."""
    m = len(images)
    names = list(names) if names is not None else [f"x{i + 1}" for i in range(m)]
    columns = [_image_word(image, names).exponent_sums(m) for image in images]
    return IntMatrix.from_rows(columns, cols=m).transpose()


def klein_bottle() -> GroupPresentation:
    """<x, t | t x t^-1 x>, the mapping torus of x -> x^-1."""
    return free_by_cyclic(["x^-1"], names=["x"])


def free_group(m: int) -> GroupPresentation:
    if m < 0:
        raise InvalidInputError(f"Rank must be nonnegative, got {m}.")
    return GroupPresentation(tuple(f"x{i + 1}" for i in range(m)))


def cyclic_group(n: int) -> GroupPresentation:
    """<x | x^n>; n = 0 gives the infinite cyclic group."""
    if n < 0:
        raise InvalidInputError(f"Order must be nonnegative, got {n}.")
    return GroupPresentation(("x",), (Word.letter(0, n),) if n else ())


def trivial_group() -> GroupPresentation:
    return GroupPresentation(())
