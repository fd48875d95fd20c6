"""Non-Hermitian Jaynes-Cummings-type Hamiltonians built from supercharges:
operator builders, metric operators and spectral verification."""

__version__ = "0.1.0"
