"""Computational toolkit for the class F(psi) of non-univalent analytic functions."""
