"""Verification workbench for split-epi style factorisation systems,
categories of weak maps, and bar-resolution calculations, all over exact
rational arithmetic."""

__version__ = "0.1.0"
