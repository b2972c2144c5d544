"""Exact GSP auctions with ROI-constrained autobidders: equilibria, welfare bounds, tight instances."""

from .autobidder import (
    EquilibriumReport,
    MenuItem,
    MixedResponse,
    best_response_mixed,
    best_response_pure,
    deviation_menu,
    verify_equilibrium,
)
from .bounds import (
    BoundReport,
    EnvelopeWitness,
    ParetoPoint,
    bound_closed_form,
    bound_simplified,
    envelope_intersection,
    pareto_points,
)
from .charging import ChargingCertificate, build_certificate, phantom_slot, verify_certificate
from .factory import TightInstanceSpec, poa_zero_family, random_instance, solve_s_x, tight_instance, tight_spec
from .mechanism import (
    AuctionOutcome,
    BidProfile,
    Instance,
    InstanceError,
    OptStats,
    make_bids,
    make_instance,
    opt_stats,
    proxy_values,
    run_gsp,
    validate_instance,
    welfare_summary,
)
from .scalar import INF
from .search import GridSpec, SearchReport, empirical_poa, enumerate_equilibria

__version__ = "0.1.0"
