"""Numerical engines: ensembles, eigensolvers, flows, lattices and determinants."""
