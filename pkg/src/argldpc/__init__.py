"""Almost-regular high-girth LDPC codes: construction, bounds, formats and BP simulation."""

__version__ = "0.1.0"

from .bounds import (BoundReport, design_rate, feasibility_threshold, girth_lower_bound,
                     stall_consistency_check)
from .channel import (BerCurve, BerPoint, ChannelConfig, StoppingRule, awgn_llr, run_monte_carlo,
                      wilson_interval)
from .construct import (Construction, ConstructionParams, ConstructionStalled, ConstructionTrace,
                        InvalidParameters, PhaseState, StallEvent, TieBreakPolicy, construct,
                        phase_of, select_edge, validate_params, verify_phase_invariants)
from .decoder import BPDecoder, BPState, DecodeResult, DecoderConfig, bp_iteration, decode, hard_decision
from .formats import read_alist, write_alist, write_dot
from .gf2 import (GeneratorMatrix, SparseMatrixGF2, encode, parity_matrix, rank_gf2, syndrome,
                  systematic_generator)
from .graph import (ACYCLIC, UNREACHABLE, BipartiteGraph, Side, VertexRef, bfs_distances,
                    degree_profile, girth, new_graph)
