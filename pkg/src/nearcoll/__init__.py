"""Memoryless near-collision search and complexity planning for n-bit hash functions."""
