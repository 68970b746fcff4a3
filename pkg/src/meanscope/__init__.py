"""Kubo-Ando operator means, positive linear maps, and numerical
certification of the inequalities relating them."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    DegenerateBoundsError,
    DegenerateSlopeError,
    DomainError,
    HypothesisError,
    InputError,
    MeanscopeError,
    SingularError,
    ValidationError,
)
from .linalg import (  # noqa: E402
    OrderCertificate,
    SpectralBounds,
    SpectralDecomposition,
    eigh,
    fun_calc,
    hermitian,
    loewner_compare,
    random_banded_hermitian,
)
from .means import RepresentingFunction, check_mean_axioms, kubo_ando_mean, register_mean, representing_fn  # noqa: E402
from .maps import apply_map, validate_map  # noqa: E402
from .constants import chord_constants, derived_constants, hadamard_constants  # noqa: E402
from .hadamard import hadamard, kron  # noqa: E402
from .suite import generate_instance, make_instance, run_case, run_suite, sharpness_scan  # noqa: E402
