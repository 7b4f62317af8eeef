"""
Poisson structures on tangent bundles: lifts, deformations and verification
"""

__version__ = "1.0.0"
__title__ = "poissonlift"
__description__ = "Symbolic construction and verification of Poisson tensors lifted to TM"
