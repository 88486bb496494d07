"""Structures carried by finite metric spaces: values, distances, distortions."""

from .distortion import CLAMP, IDENTITY, ZERO, DistortionFn, compose, distortion_of, dmax
from .functions import (function_system, graph_hausdorff, graph_of, precompactness_triple,
                        restrict_function, var_function_distance)
from .metrics import (check_isometric, compact_distance, er_distance, law_distance, pushforward,
                      skorohod_er, structure_distance)
from .skorohod import (MalformedJumps, SkorohodResult, skorohod_distance, skorohod_finite,
                       skorohod_full, skorohod_modulus)
from .values import (VALUE_TYPES, Composed, Fixed, KindMismatch, Law, LZero, Measure, NotIsometric,
                     Point, PointTuple, PowerSpace, Product, StepCadlag, Subset, Transform,
                     UnknownKind, VarFunction, check_value, kind_descriptor)
