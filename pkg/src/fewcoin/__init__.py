"""Multihead finite automata, constant-coin certificate verifiers, and
exact probabilistic analysis tools."""

from .automata import (MHConfiguration, MultiheadAutomaton, accepting_path,
                       accepts, add_clock, clock_step_bound,
                       enumerate_language, successors, validate)
from .compiler import (CompiledVerifier, TrackSymbol, compile_strong,
                       compile_weak, honest_certificate, honest_length_bound)
from .derandom import (check_private_coin, check_public_coin, expand_coins,
                       make_multitrack_certificate, materialize_one_way,
                       to_one_way_multihead)
from .markov import (MarkovChain, absorption, acceptance_probability_2pfa,
                     build_split_chain, n_dissimilarity)
from .showcase import (build_nh_verifier, build_twin_recognizer_2head,
                       build_twin_verifier, nh_honest_certificate, nh_oracle,
                       twin_honest_certificate, twin_oracle)
from .symbols import (ENDMARKER, HALT_MARK, LOOP_MARK, NULL_SYM, PAD_SYM,
                      REQUEST_SYM, HeadMode)
from .verifier import (BranchOutcome, OutcomeDistribution, ProverStrategy,
                       VerifierMachine, best_certificate,
                       derandomize_recognizer, interact_branch,
                       interact_distribution, outcome_distribution,
                       run_branch)

__all__ = [name for name in dir() if not name.startswith("_")]
