"""Design-pattern reference library behind the patternd demonstration service."""

__version__ = "0.1.0"
