"""Joint numerical ranges of Hermitian operators and their applications."""

from .boundary import (
    BoundaryPoint,
    ObservableSet,
    Polytope,
    boundary_general,
    boundary_sweep_2d,
    fibonacci_sphere,
    inner_polytope,
    outer_polytope,
    sample_directions,
    support_function,
)
from .classify import (
    FlatPart,
    JnrClass,
    classify_k2_qutrit,
    classify_k3_qutrit,
    detect_flat_parts,
    ellipse_from_eigenspace,
)
from .errors import JnrError
from .linalg import (
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    expectation,
    gibbs_state,
    lambda_max_projector,
    partial_trace,
    partial_transpose,
)
from .models import ising_observables, two_qubit_examples, xxzz_spin_observables
from .phase import detect_ground_crossings, energy_bounds, ground_data, spectrum_sweep
from .separable import bell_witness_pair, max_product_expectation, min_product_expectation, separable_boundary
from .thermal import thermal_point, thermal_range_sweep
from .uncertainty import maccone_pati_bounds, min_uncertainty_point, uncertainty_lifted, variance_map

__version__ = "0.1.0"
