"""Robin-Laplacian eigenvalue ratio toolkit.

Exact ball-side quantities via Bessel cross zeros, trial-function and
rearrangement machinery, and a 2-D P1 finite-element verifier for the
eigenvalue-ratio bounds.
"""

__version__ = "0.1.0"
