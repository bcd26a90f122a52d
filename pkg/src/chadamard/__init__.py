"""Exact tools for complex Hadamard matrices and their affine families."""

from .errors import (DimensionError, NotDephasedError, NotHadamardError,
                     UnsuitablePairError, VerificationError)
from .phase import (AffineEntry, AffinePhaseMatrix, FamilyCheck, Phase, cyclotomic_polynomial,
                    family_eval, family_is_hadamard, fourier, vanishing_root_sum)
from .ops import (Distinction, EquivalenceOp, HaagerupSet, apply_equivalence, as_phase_matrix,
                  defect, defect_report, dephase, haagerup_set, hadamard_residual, is_hadamard,
                  kron, lambda_distinguish)
from .dita import (DitaCertificate, DitaVerdict, dita_compose, dita_detect, dn_equivalent,
                   no_orthogonal_extension, quick_non_dita, rows_I_equivalent)
from .affine import (PairPattern, canonicalize_real, family_dimension, find_pair_patterns,
                     parametrize_pair, parametrize_real)
from .conference import (ConferenceMatrix, conference_parametrize, conference_to_hadamard,
                         find_suitable_pairs, hadamard_to_conference, iterative_parametrize,
                         paley_conference, symmetric_conference_order_feasible)

__version__ = "0.1.0"
