"""
Domain models: permutation groups, abelian quotients, exponent functions and pairs
"""
