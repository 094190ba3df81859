"""alexlab: exact Alexander-type invariants of finitely presented groups."""

__version__ = "0.1.0"
