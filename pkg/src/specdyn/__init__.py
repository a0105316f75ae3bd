"""Projective spectra of self-similar group pencils and the rational maps behind them."""

__version__ = "0.1.0"
