"""Cyclic interference alignment on the 3-way Delta channel and cyclic
signal alignment on the Y-channel over F(x)/(x^n - 1)."""

__version__ = "0.1.0"

from .alignment import (
    OffsetPlan,
    SeparabilityReport,
    Violation,
    check,
    check_delta,
    check_y,
    construct,
    construct_delta_elementary,
    construct_delta_general,
    construct_y_elementary,
    construct_y_general,
)
from .bounds import (
    DofValue,
    achieved_dof,
    dimension_requirement,
    dof_upper_bound_multiway,
    dof_upper_bound_xchannel,
)
from .channel import (
    DeltaChannel,
    MessageSet,
    MessagingMatrix,
    YChannel,
    delta_receive,
    encode,
    y_downlink,
    y_uplink,
)
from .oracle import SearchResult, channel_sweep, feasible_plan_search, minimal_n
from .ring import CyclicPoly, add, reduce_exponent, shift, support
from .simulate import SimulationOutcome, random_messages, run_delta, run_y
from .ydelta import (
    MimoConfig,
    ProductDecomposition,
    compose,
    decompose,
    mimo_dof_bound,
    mimo_normalized_dof,
    transfer_equivalence,
)
