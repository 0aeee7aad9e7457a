"""
MalleB - Malle-type constants for finite transitive permutation groups
"""

__version__ = '1.0.0'
