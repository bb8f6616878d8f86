"""Exact local arithmetic for elliptic curves over Q with a rational
isogeny of degree 2 or 3: Tate's algorithm, Hilbert symbols, local root
numbers, local Selmer-parity terms, 2-isogeny descent and Tate-curve series."""

__version__ = "0.1.0"
