"""Projector-sum POVM perceptron with a classical Rosenblatt baseline.

Public API re-exports; see the module docstrings for the underlying ideas:

* linops     -- states, projectors, expectations, eigen-extrema
* encoding   -- qubit and direct amplitude encodings
* perceptron -- training, regime diagnosis, deterministic classification
* sampling   -- seeded measurement-statistics simulation
* baseline   -- classical perceptron with the error-correcting rule
* clustering -- unsupervised two-class protocol and order-consensus
* ensemble   -- per-DOF perceptron ensemble and synthetic EMG data
* cli        -- command-line interface, model persistence, CSV ingestion
"""

from .baseline import LinearWeights, NonConvergence, predict_classical, train_classical
from .clustering import (ClusterState, ConsensusReport, cluster,
                         cluster_consensus, separability_check)
from .encoding import (EncodingScheme, FeatureVector, encode, encode_direct,
                       encode_qubit)
from .ensemble import (ClassCapacity, EnsembleDecision, EnsembleModel,
                       SyntheticEmgConfig, class_capacity, classify_ensemble,
                       generate_synthetic, train_ensemble)
from .errors import (DataError, DegenerateInputError, FeatureRangeError,
                     InvalidInputError, ModelFormatError, NoSupportError,
                     NumericIntegrityError, QuantumPerceptronError,
                     TrainingError, UnphysicalModelError)
from .linops import (Operator, StateVector, eig_extrema, expectation, identity,
                     projector, tensor_product)
from .perceptron import (ClassificationResult, NormalizationMode,
                         PerceptronModel, RegimeReport, classify,
                         classify_feature, diagnose_regime, regime, train)
from .policy import DEFAULT_POLICY, NumericPolicy
from .sampling import (RandomSource, empirical_accuracy, sample_outcome,
                       sample_outcomes)

__version__ = "0.1.0"
