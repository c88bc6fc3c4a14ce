"""
Contains the black hole thermodynamics.

black_hole

"""
