"""Inside, outside and sampling over the joint-structure grammar."""
from .api import (EngineConfig, InsideTables, ProbMatrices, contact_region_probability,
                  hybrid_probabilities, pair_probabilities, partition_function, sample, warmup)

__all__ = ["EngineConfig", "InsideTables", "ProbMatrices", "contact_region_probability",
           "hybrid_probabilities", "pair_probabilities", "partition_function", "sample",
           "warmup"]
