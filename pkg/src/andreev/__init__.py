"""Reflection-eigenvalue statistics of semi-non-ideal Andreev quantum dots.

The package has three layers:

* symmetric-function machinery: `partitions`, `symfunc` (Jack and Schur
  polynomials, Pochhammer symbols, hook products);
* analytics: `hypergeom` (matrix-argument 2F1, Selberg closed forms),
  `ensembles` (the reflection-eigenvalue densities and their
  normalization), `pfaffian` (skew-orthogonal Pfaffian representation);
* Monte Carlo: `sampling` (Haar measures on O/SO/Sp, the Poisson-kernel
  Metropolis chain, empirical densities).

`verify` wires every cross-check into a runnable report; `cli` exposes it
all as the `andreev` command.
"""

__version__ = "0.1.0"

from .ensembles import EnsembleSpec  # noqa: F401
from .hypergeom import SeriesValue, TruncationPolicy  # noqa: F401
from .partitions import Partition  # noqa: F401
