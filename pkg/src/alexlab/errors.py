"""Exceptions raised by alexlab."""


class AlexlabError(Exception):
    """Base class for every error alexlab raises on purpose."""


class PresentationParseError(AlexlabError, ValueError):
    """Malformed input text: presentation files, Thurston data, CSV, torus specs."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class ComputationLimitError(AlexlabError):
    """A configured size limit (gcd variables, hull dimension) was exceeded."""


class InvalidInputError(AlexlabError, ValueError):
    """Input that parses but is mathematically unacceptable."""


class AmbientMismatchError(InvalidInputError):
    """Operands live in rings or tori of different rank."""
