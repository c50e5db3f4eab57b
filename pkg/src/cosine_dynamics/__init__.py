"""Adjoint weighted-composition and cosine operator dynamics on atomic measures."""

from .conditions import (ConditionReport, PartitionScheme, check_corollary,
                         check_forward_divergence, check_theorem_partition,
                         corollary_family, sup_product, sup_product_curve)
from .dynamics import (Affine, CosineSystem, Homeomorphism, PiecewiseLinear, WeightFunction,
                       adjoint_S, adjoint_T, apply_function_operator, backward_weight_product,
                       cosine, duality_pairing, forward_weight_product)
from .measure import (Atom, AtomicMeasure, CompactWindow, linear_combine, normalize, restrict,
                      total_variation, tv_distance)
from .scenarios import (ExampleParams, ParseError, RunConfig, ValidationError, build_example,
                        load_measure, load_run_config, load_system, save_measure, save_system)
from .sets import IntervalSet
from .witness import (BallSpec, DegenerateWitness, WitnessReport, build_witness,
                      certify_proof_bounds, proof_epsilon, scan_witnesses)

__version__ = "0.1.0"
