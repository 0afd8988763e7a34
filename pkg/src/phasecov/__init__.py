"""Phase-covariant qubit dynamics: speed limits, non-Markovianity and trade-offs."""

from .action import (ActionParams, ControlPath, action_functional, action_qsl_time,
                     cauchy_schwarz_bound, first_integral, optimize_path)
from .channels import (GAD, MOUN, NMAD, OUN, RTN, ChannelSpec, Composite, Eternal,
                       MapIntegrals, Phenomenological, combine, evolve, generator_apply,
                       map_integrals, rates_at, regime_of)
from .config import Scenario, parse_scenario, to_config
from .errors import (ConfigError, DivergentIntegrandError, InvalidStateError,
                     PathConstraintError, PhaseCovError, PuritySingularityError, QuadratureError,
                     SingularRateError)
from .figures import run_figure
from .nonmarkov import sss_zeta, sss_zeta_eternal, zeta_details
from .qsl import QslResult, holevo_rate_bound, qsl_time_mixed, qsl_time_pure
from .qubit import (BlochVector, QubitState, bures_angle_mixed, bures_angle_pure, coherence_l1,
                    mixedness, state_from_bloch, state_from_r, state_from_theta, super_fidelity,
                    tradeoff_mcl)
from .runner import run_scenario

__version__ = "0.1.0"
