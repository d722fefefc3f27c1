"""Partition function, probabilities and Boltzmann samples of RNA-RNA
interaction structures for a pair of multiple sequence alignments."""
from .alignio import (Msa, Orientation, PairedAlignment, consensus, expand_interaction_pairs,
                      parse_msa)
from .compat import (CompatibilityMasks, ConstraintSet, FoldParams, apply_constraints,
                     build_masks, pair_score, parse_constraints)
from .energy import EnergyModel, load_params, structure_energy
from .engine import (EngineConfig, InsideTables, ProbMatrices, contact_region_probability,
                     hybrid_probabilities, pair_probabilities, partition_function, sample)
from .jointstruct import (JointStructure, Loop, LoopKind, decompose_loops, from_notation,
                          to_notation, validate)

__version__ = "0.1.0"
