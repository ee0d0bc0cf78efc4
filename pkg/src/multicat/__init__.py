"""Multiple concatenation of finite automata: constructions, bounds, witnesses."""

__version__ = "0.1.0"
