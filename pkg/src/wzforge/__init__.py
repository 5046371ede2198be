"""wzforge: construction, certification and verification of
Wilf-Zeilberger pairs from a seed catalog.

Subpackages:
  polys     exact arithmetic substrate (rationals, polynomials, solving)
  terms     Gamma-product term model, profiles, envelopes, limits
  gosper    indefinite hypergeometric summation with rational certificates
  engine    WZ mates, seed certification, pair construction, verification
  catalog   the registry of WZ-seeds
  search    exponent/profile search for pair candidates
  numerics  arbitrary-precision evaluation and identity verification
  serialize JSON interchange for terms, pairs and identities
  cli       command-line interface
"""

__version__ = "0.1.0"
