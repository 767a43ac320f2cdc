"""Exact uniform definitions of valuation rings of Henselian valued fields."""

__version__ = "0.1.0"
