"""Synthesis, verification and lower-bound auditing of monotone shift circuits."""
from .audit import AuditReport, TraceError, gate_identity_probe, run_audit, trace_paths
from .baselines import gen_convolution, gen_matmul
from .circuit_ir import (AND, INPUT, OR, Circuit, CircuitBuilder, CircuitError,
                         CircuitStats, Gate, evaluate, evaluate_batch, from_json,
                         stats, to_json, validate)
from .encodings import (Antichain, MonomialSystem, antichain_a0, antichain_a1,
                        doubling, encode_shift, is_antichain, monomial_circuit)
from .oracles import (OperatorSpec, check_completion, conv_spec, matmul_spec,
                      perm_spec, shift_spec, verify)
from .perm_gen import (ComparatorNetwork, PermutationCode, batcher_network,
                       comparator_encode, doubled_word_comparator, gen_perm_matrix,
                       gen_perm_sortnet)
from .shift_gen import IndicatorBank, dyadic_indicators, gen_shift

__version__ = "0.1.0"
