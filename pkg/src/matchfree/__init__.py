"""Exact tools for families of sets without s pairwise disjoint members."""

__version__ = "0.1.0"
