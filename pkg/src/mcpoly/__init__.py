# src/mcpoly/__init__.py
"""
Minimum-cost Markov chains via the Markov Chain Polytope, with an application
to binary AIFV-m lossless codes.
"""
# Version is managed in pyproject.toml and accessed via importlib.metadata
