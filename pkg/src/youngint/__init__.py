"""Truncated variation, p-variation and certified Young integration for sampled paths."""
