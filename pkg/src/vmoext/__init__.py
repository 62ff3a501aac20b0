"""Whitney decompositions, Jones constants and extension of VMO functions."""

__version__ = "0.1.0"
