"""
Contains the boundary expansion of asymptotically hyperbolic metrics.

fefferman_graham

"""
