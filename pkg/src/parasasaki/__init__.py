"""Exact construction and verification of para-Sasakian phi-symmetric structures
over para-Hermitian symmetric spaces, at the Lie algebra level."""

__version__ = "0.1.0"
