"""Qudit state-vector simulator for symmetric multiparty superdense coding."""

from qudsim.errors import DecodeAmbiguityError, UnlawfulActionError
from qudsim.operators import (
    LocalOperator,
    dense_coding_unitary,
    identity,
    is_unitary,
    reduced_target_state,
    target_state,
)
from qudsim.protocol import (
    CapacityReport,
    Codebook,
    SenderAction,
    Transcript,
    build_codebook,
    capacity,
    decode,
    encode,
    initial_state,
    recover_digits,
    run_roundtrip,
)
from qudsim.qudit_state import (
    StateVector,
    apply_local,
    basis_state,
    ghz_state,
    inner_product,
    tensor,
)
from qudsim.radix import (
    FactorPlan,
    SenderSet,
    add_mod,
    compose,
    decompose,
    enumerate_factor_plans,
    make_factor_plan,
    sender_set,
)

__version__ = "0.1.0"
