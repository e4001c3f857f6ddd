"""Exact certificates for identifiability of sums of powers of forms.

Covers tangent skewness and tangential contact loci of power varieties,
the closed-form identifiability ranges, and the moment dictionary for
mixtures of centered Gaussians.
"""

__version__ = "0.1.0"
