"""Regular sampling and reconstruction in U-invariant subspaces over finite abelian groups."""
from .abelian_group import (
    CosetDecomposition,
    GroupSpec,
    PointAction,
    act,
    character_table,
    character_value,
    coset_decompose,
    cyclic_rotations,
    dihedral_group,
    haar_integral,
    make_group,
)
from .convops import (
    ConvMatrix,
    adjoint,
    compose,
    convolve,
    dense_operator,
    injectivity_margin,
    invert,
    is_injective,
    is_surjective,
    operator_norm,
    surjectivity_margin,
    translate,
)
from .errors import *  # noqa: F401,F403
from .frames import FrameReport, bessel_bound, frame_analysis, is_dual_pair, left_inverse
from .hmodels import (
    GeneratorSet,
    HModel,
    RieszSequence,
    SamplerSet,
    boundedness_check,
    build_average_sampler,
    build_pointwise_sampler,
    crystal_generators,
    crystal_operator,
    make_crystallographic_model,
    make_periodized_shift_model,
    make_regular_model,
    riesz_check,
    synthesize,
)
from .sampler import (
    ReconstructionKit,
    design,
    design_from,
    interpolation_check,
    reconstruct,
    subgroup_lift,
    take_samples,
)
from .scenario import Scenario, bundled_scenario, load_scenario
from .spectral import TransferField, fourier, inverse_fourier, transfer_field

__version__ = "0.1.0"
