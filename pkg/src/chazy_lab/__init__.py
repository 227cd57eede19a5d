"""Jets, hypergeometric triangle maps and exact algebra for generalised Chazy equations."""

__version__ = "0.1.0"
