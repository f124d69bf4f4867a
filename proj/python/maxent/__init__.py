"""Series expansions of KL-minimizing distributions under linear constraints.

Every function takes and returns plain JSON-compatible dicts, identical to the
documents the ``maxent`` command line tool reads and writes.
"""

import json

try:
    from . import _maxent
except ImportError:  # in-tree build: the extension sits on PYTHONPATH
    import _maxent

DataError = _maxent.DataError
NumericalError = _maxent.NumericalError

__all__ = ["normalize", "expand", "evaluate", "solve", "trees", "verify", "DataError", "NumericalError"]


def _text(doc):
    return doc if isinstance(doc, str) else json.dumps(doc)


def normalize(problem, drop_dependent=False, tolerance=1e-9):
    """Problem dict -> {"problem", "transform"} with orthonormal constraints."""
    return json.loads(_maxent.normalize(_text(problem), drop_dependent, tolerance))


def expand(problem, order=6, basis="moment", drop_dependent=False, tolerance=1e-9):
    """Coefficient table of lambda'_0, lambda_1..k and sigma up to ``order``."""
    return json.loads(_maxent.expand(_text(problem), order, basis, drop_dependent, tolerance))


def evaluate(table, rho, raw=False):
    """Evaluates a table at rho; ``raw`` maps rho through the stored transform first."""
    return json.loads(_maxent.evaluate(_text(table), list(rho), raw))


def solve(problem, rho, raw=False, tolerance=1e-12):
    """Exact KL minimizer at normalized (or raw) constraint values."""
    return json.loads(_maxent.solve(_text(problem), list(rho), raw, tolerance))


def trees(problem, output, index, basis="moment"):
    """Per-tree breakdown of one coefficient."""
    return json.loads(_maxent.trees(_text(problem), output, list(index), basis))


def verify(problem, order=6, basis="moment", radii=(0.05, 0.1, 0.2), samples=20, seed=7, threads=0):
    """Compares the truncated series with the exact solver on spheres of rho."""
    return json.loads(_maxent.verify(_text(problem), order, basis, list(radii), samples, seed, threads))
