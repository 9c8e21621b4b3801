"""Quantum Fourier filtering and quantum matrix transpose on a state-vector simulator."""
