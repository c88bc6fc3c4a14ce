"""
Contains the command line.

config,
dispatch

"""
