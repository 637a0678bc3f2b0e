"""Lifshitz-theory dispersion free energies for atoms near uniaxial bodies."""
__version__ = "0.1.0"
