"""Polytree-qe library for query expansion with polytree Bayesian network thesauri."""
