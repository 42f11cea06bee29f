"""Higher-order rewriting with proof terms."""
__version__ = "0.1.0"
