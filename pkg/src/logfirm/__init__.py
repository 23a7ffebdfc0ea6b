"""Exact combinatorial machinery for logarithmic geometry.

Subpackages cover integer linear algebra, fine saturated monoids, cone
complexes and subdivisions, firmness decisions, firmaments, DVR lift
solving, and orbifold (Campana) multiplicities for monomial ideals.
"""

__version__ = "0.1.0"
