"""Exact modular data, Galois actions and SL2(Z) representations."""
