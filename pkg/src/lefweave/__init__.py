"""lefweave: symbolic calculus for Lefschetz presentations.

Exact fiber lattices, vanishing-cycle moves (Hurwitz, rotation,
stabilization, boundary connect sum, subflexibilization), arc rewriting,
total-space invariants, and a syntactic flexibility-certificate system with
a small line-oriented scripting language (see the ``lefweave`` command).
"""

__version__ = "0.1.0"
