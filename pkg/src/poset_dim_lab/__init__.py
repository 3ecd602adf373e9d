"""Dimension of random bipartite posets: sampling, exact dimension with
certificates, generalized latin rectangles, bound formulas and seeded
experiments."""
from .bounds import BoundEntry, BoundReport, eval_bounds, f2n_estimate, fdn_lower_bound
from .dimension import (ConflictDigraph, Realizer, brute_force_dimension, conflict_digraph,
                        dim_upper_via_matching, exact_dimension, is_linear_extension, is_reversible,
                        linear_extension_reversing, reversed_pairs)
from .errors import DomainError, InputError, IrreversibleError, PosetFormatError
from .experiments import (ExperimentConfig, ExperimentReport, run_experiment, run_extremal_fd,
                          stability_snapshot, trial_seed)
from .glr import (EXAMPLE_GLR_9_2_3, GLRArray, GLRReport, construct_glr, glr_counting_feasible,
                  loads_glr_csv, max_glr_depth, validate_glr)
from .metrics import (Matching, Witness, balanced_clique_number, balanced_independence_number,
                      count_balanced_clique_pairs, count_balanced_indep_pairs_size2, count_standard_examples,
                      defect, max_incomparability_matching, min_maximal_matching, standard_example_greedy,
                      standard_example_number)
from .poset import (BipartitePoset, SampleConfig, all_posets, dumps_posetb, loads_posetb, make_poset,
                    read_posetb, sample_poset, standard_example, write_posetb)
from .realizers import (OneSidedFamily, ShortFamily, euler_phi, evaluate_one_sided, evaluate_short,
                        expected_failures, family_from_glr, multiplicities, t_value, truncate_realizer,
                        weight, weight_shift_holds)

__version__ = "0.1.0"
