"""Incremental cluster validity indices for streaming data.

Four index variants (Xie-Beni and a squared-distance Davies-Bouldin relative,
each with and without an exponential forgetting factor) maintained in a single
pass over a stream, driven by sequential k-means or a simplified online
ellipsoidal clusterer.
"""

from .core import (
    MembershipVector,
    PrototypeSet,
    StreamPoint,
    min_pairwise_center_distance_sq,
    validate_membership,
)
from .cvi import (
    INDEX_FAMILIES,
    IndexState,
    IndexValue,
    batch_db_oracle,
    batch_xb_oracle,
    db_lambda_update,
    db_update,
    new_index_state,
    xb_lambda_update,
    xb_update,
)
from .dispersion import (
    DispersionState,
    batch_dispersion_oracle,
    make_state,
    update_dispersion,
    update_dispersion_forgetting,
)
from .engine import RunConfig, StreamEngine, init_icvi_state, run
from .oec import OecConfig, chi2_inverse, mahalanobis_sq, oec_init, oec_membership, oec_step
from .skmeans import SkMeansState, skmeans_init, skmeans_step

__version__ = "0.1.0"
