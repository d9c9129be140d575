"""Exact Berglund-Hubsch mirror symmetry data for invertible curve
singularities in two variables.

Subpackages cover: the classification and basic invariants of the three
families (Fermat, chain, loop), Milnor fiber tessellations, the immersed
Seidel Lagrangian and its Floer theory on the quotient orbifold sphere,
the localized mirror functor to matrix factorizations, the
Auslander-Reiten catalog for the ADE singularities together with surgery
realizations, wrapped endomorphism algebras, and the obstruction analysis
for the smallest non-ADE cases.
"""

__version__ = "0.1.0"
