"""Canonical quantum oracles on an exact statevector simulator."""
