"""
Contains the normalized Ricci-DeTurck flow.

ricci_deturck,
diagnostics,
perturbation

"""
