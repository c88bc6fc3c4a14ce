"""
Contains the core of renvol.

RadialGrid,
Ansatz,
BoundaryRep,
CohomOneMetric,
SpecialBdf,
CurvatureFields,
model metrics

"""
