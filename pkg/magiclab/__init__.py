"""MagicLab - stabilizer entropies, Pauli monomials and Clifford commutant numerics"""

__version__ = "0.1.0"
__author__ = "MagicLab Team"
__description__ = "Library, CLI and HTTP API for stabilizer Renyi entropies, generalized stabilizer purities and Clifford twirls"
