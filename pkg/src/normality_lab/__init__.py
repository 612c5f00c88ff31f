"""normality-lab: digit-frequency trajectories of b-adic expansions,
prescribed-limit stream synthesis, ideal-convergence scoring, and
Knopp-core checks for regular summability matrices."""

__version__ = "0.1.0"

from .streams import (
    DigitStream,
    DomainError,
    RationalStream,
    PeriodicStream,
    BlocksStream,
    RandomStream,
    expand,
    take,
    stream_from_spec,
)
from .freq import (
    StringIndex,
    FreqVector,
    count_strings,
    freq_vector,
    freq_trajectory,
    freq_matrix,
    merge_counts,
)
from .simplex import (
    SimplexPoint,
    MembershipReport,
    is_member,
    enumerate_rationals,
    distance,
)
from .synth import (
    DeBruijnMultigraph,
    debruijn_multigraph,
    eulerian_word,
    synthesizer_word,
    synthesize,
    BlockPartition,
    WitnessPlan,
    build_witness,
)
from .ideals import (
    SubmeasureSpec,
    counting_ideal,
    density_ideal,
    summable_ideal,
    phi_eval,
    tail_norm_estimate,
    hit_set,
    empirical_upper_density,
    ClusterReport,
    cluster_score,
    estimate_gamma,
)
from .summability import (
    MatrixSpec,
    IdentityMatrix,
    CesaroMatrix,
    HolderMatrix,
    RieszLogMatrix,
    SparseMatrix,
    RowRuleMatrix,
    remark_matrix,
    subsequence_matrix,
    factorial_style_matrix,
    RegularityReport,
    st_check,
    transform,
    CoreEstimate,
    knopp_core_estimate,
    dist_to_hull,
    InclusionReport,
    check_core_inclusion,
    matrix_from_spec,
)
