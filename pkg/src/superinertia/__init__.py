"""Exact inertia action and monodromy pairing for split degenerate superelliptic curves."""
