"""Order theory, the interval domain and context posets of operator algebras."""

__version__ = "0.1.0"
