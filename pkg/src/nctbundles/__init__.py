"""Exact invariants of noncommutative principal torus bundles.

Modules: intmat (integer matrices), exterior (Lambda*(Z^n)), monodromy (loop action on
Lambda*(Z^n)), heisenberg (H_n and its automorphisms), nctorus (twisted group algebras
and rational representations), bundles (descriptors and decisions), cli.
"""

__version__ = "0.1.0"
