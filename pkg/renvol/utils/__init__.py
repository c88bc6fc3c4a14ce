"""
Contains utility functions.

constants,
errors,
integration,
log,
math,
mem

"""
