"""
addlab - a verification workbench for additivity breaking of minimum output Rényi entropy.

This package provides:
- tensor-product linear algebra (Schmidt spectra, partial traces, projectors)
- the antisymmetric, Bell-extension and Parthasarathy subspace constructions
- closed-form entropy bounds and breaking criteria
- multi-start numerical oracles that cross-check the bounds
"""

__version__ = "0.3.0"

__all__ = ["__version__"]
