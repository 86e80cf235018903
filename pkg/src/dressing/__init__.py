"""Dressing field method on a single chart.

Modules: ``expr``/``normal`` (exact scalar expressions), ``forms`` (matrix
valued differential forms), ``groups``, ``gauge`` (gauge maps, dressing,
residual laws and cocycles), ``brst``, ``electroweak``, ``gr_tetrad``,
``conformal``, and the verification ``harness`` with its ``cli``.
"""

__version__ = "0.1.0"
