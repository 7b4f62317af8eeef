"""
Operations on Poisson data: brackets, lifts, deformations and coordinate changes
"""
