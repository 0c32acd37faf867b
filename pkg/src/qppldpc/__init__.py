"""LDPC codes from quadratic permutation polynomials over Z_N."""

from .codes import CodeSpec, load_spec, example_code
from .decoder import DecodeResult, SumProductDecoder, bp_decode, syndrome_weight
from .distance import (BoundResult, NncsConfig, NncsResult, dmin_recursive, dmin_upper_bound,
                       nncs_search, permanent, psi)
from .gf2 import (CirculantDecomposition, SparseBitMatrix, decompose_circulant, qc_rearrange,
                  rank_gf2, to_parity_check, weight_matrix)
from .montecarlo import SimConfig, SimStats, classify_frame, simulate
from .qpp import Factorization, Qpp, factorize, is_permutation_poly, min_f2
from .search import SearchReport, search_codes
from .tanner import (AutomorphismParams, CodeProfile, TannerGraph, automorphism_params,
                     build_graph, canonical_f1_range, girth, isomorphic_images, local_girth)

__version__ = "0.1.0"
