"""Gromov-Hausdorff-type metrics for finite metric spaces carrying additional structure."""

from .core import (Correspondence, FiniteMetricSpace, RootedSpace, ToleranceConfig, distortion, glue,
                   validate_space)

__version__ = "0.1.0"
