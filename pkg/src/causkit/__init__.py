"""Causal-structure verification for stochastic, quantum and relational processes.

The package decides whether a concrete process — a stochastic matrix, a Choi
tensor, or a boolean relation — inhabits a causal type: plain causality,
non-signalling between parties, one-way signalling, combs, consistency with an
arbitrary partial order of events, and second-order causal maps.  A small
linear-logic prover decides type-level transformations, and an axiom harness
re-verifies the structural assumptions each backend is supposed to satisfy.
"""

from .axioms import AXIOMS, AxiomResult, HarnessConfig, load_config, run_all, run_axiom
from .backends import (
    CheckReport,
    causal_basis,
    causal_channel_family,
    channel_family_size,
    dimension,
    discard,
    factorize_one_way,
    is_causal,
    is_positive,
    random_causal,
    random_state,
    uniform_state,
)
from .checks import (
    check_comb,
    check_membership,
    check_nonsignalling,
    check_one_way,
    check_order_consistency,
    check_soc,
    check_via_totalisations,
)
from .core import (
    BACKENDS,
    CPM,
    DEFAULT_TOL,
    MATR,
    REL,
    Process,
    System,
    bend,
    cap,
    compose_seq,
    cup,
    discard_outputs,
    distance,
    dump_process,
    from_json_dict,
    identity,
    load_process,
    maxabs,
    permute,
    plug,
    rename,
    scalar,
    tensor_par,
    to_json_dict,
)
from .errors import (
    BackendMismatch,
    BadPartition,
    CauskitError,
    CombinatorialBlowup,
    CyclicOrder,
    CyclicWiring,
    DuplicateLabel,
    EmbedMismatch,
    FormatError,
    InvalidPermutation,
    MalformedProof,
    NoSuchWire,
    NotFirstOrderBased,
    NotOneWay,
    ShapeMismatch,
    TooManyEvents,
    TypeSyntaxError,
    UnknownEvent,
    UnsupportedBackend,
    UnsupportedConnective,
    UnsupportedIso,
    UnsupportedType,
)
from .events import Event, EventPoset, check_partition, load_poset, poset_to_json_dict
from .gallery import REGISTRY, ExampleInstance, build, comb_type, load_golden
from .mll import (
    Proof,
    formula_of_type,
    parse_proof,
    parse_sequent,
    prove,
    provable,
    render_proof,
    render_sequent,
    verify_proof,
)
from .typesys import (
    Atom,
    Cap,
    Dual,
    Embedding,
    Lolli,
    Par,
    Tensor,
    Type,
    Unit,
    fo_embedding,
    intersect,
    is_first_order,
    normalize,
    parse_type,
    render_type,
)

__version__ = "0.1.0"

__all__ = [
    "AXIOMS",
    "AxiomResult",
    "Atom",
    "BACKENDS",
    "BackendMismatch",
    "BadPartition",
    "CPM",
    "Cap",
    "CauskitError",
    "CheckReport",
    "CombinatorialBlowup",
    "CyclicOrder",
    "CyclicWiring",
    "DEFAULT_TOL",
    "Dual",
    "DuplicateLabel",
    "EmbedMismatch",
    "Embedding",
    "Event",
    "EventPoset",
    "ExampleInstance",
    "FormatError",
    "HarnessConfig",
    "InvalidPermutation",
    "Lolli",
    "MATR",
    "MalformedProof",
    "NoSuchWire",
    "NotFirstOrderBased",
    "NotOneWay",
    "Par",
    "Process",
    "Proof",
    "REGISTRY",
    "REL",
    "ShapeMismatch",
    "System",
    "Tensor",
    "TooManyEvents",
    "Type",
    "TypeSyntaxError",
    "UnknownEvent",
    "Unit",
    "UnsupportedBackend",
    "UnsupportedConnective",
    "UnsupportedIso",
    "UnsupportedType",
    "bend",
    "build",
    "cap",
    "causal_basis",
    "causal_channel_family",
    "channel_family_size",
    "check_comb",
    "check_membership",
    "check_nonsignalling",
    "check_one_way",
    "check_order_consistency",
    "check_partition",
    "check_soc",
    "check_via_totalisations",
    "comb_type",
    "compose_seq",
    "cup",
    "dimension",
    "discard",
    "discard_outputs",
    "distance",
    "dump_process",
    "factorize_one_way",
    "fo_embedding",
    "formula_of_type",
    "from_json_dict",
    "identity",
    "intersect",
    "is_causal",
    "is_first_order",
    "is_positive",
    "load_config",
    "load_golden",
    "load_poset",
    "load_process",
    "maxabs",
    "normalize",
    "parse_proof",
    "parse_sequent",
    "parse_type",
    "permute",
    "plug",
    "poset_to_json_dict",
    "prove",
    "provable",
    "random_causal",
    "random_state",
    "rename",
    "render_proof",
    "render_sequent",
    "render_type",
    "run_all",
    "run_axiom",
    "scalar",
    "tensor_par",
    "to_json_dict",
    "uniform_state",
    "verify_proof",
]
