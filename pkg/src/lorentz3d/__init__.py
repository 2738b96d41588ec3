"""Exact computer algebra for 3-dimensional Lorentz metrics.

Subpackages cover exact polynomial/rational arithmetic (`exactalg`),
curvature of coordinate metrics (`geometry`), symmetry equations and their
solution spaces (`killing`), abstract Lie-algebra classification (`liealg`),
a curvature calculus in a fixed model quadratic form (`cartan`), the
two-parameter metric family under study (`families`), and a command-line
interface (`cli`).
"""

__version__ = "0.1.0"
