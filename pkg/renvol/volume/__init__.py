"""
Contains the renormalized volume routes.

renormalized

"""
