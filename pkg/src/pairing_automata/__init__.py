"""Pairing matrices, their Mealy automata, and certified torsion in the
groups they present."""
from .automata import (
    Arrow,
    HasIdentityOutput,
    HasLoop,
    HelixCycleTooLong,
    HelixGraph,
    MealyAutomaton,
    NotBireversible,
    RecognitionError,
    automaton_from_json,
    automaton_to_dot,
    automaton_to_json,
    build_a_automaton,
    build_b_automaton,
    build_helix,
    check_bireversible,
    check_invertible,
    dual_automaton,
    helix_to_dot,
    power_automaton,
    recognize_pairing,
)
from .certify import (
    GAMMA,
    G,
    Certificate,
    CertificateError,
    Relation,
    Step,
    export_presentation,
    format_word,
    free_reduce,
    invert,
    parse_word,
    relations_from_matrix,
    replay,
    verify_certificate,
)
from .io import MatrixParseError, format_matrix_text, parse_matrix, read_matrix
from .matrix import (
    BudgetExceeded,
    Cell,
    MatrixEquivalence,
    PairingError,
    PairingMatrix,
    canonical_form,
    enumerate_pairings,
    is_canonical,
    is_invertible_pairing,
    partner_cell,
    transpose,
    validate_pairing,
)
from .torsion import (
    BipartiteNormalForm,
    CyclicBipartiteStructure,
    TorsionError,
    TorsionWitness,
    cyclic_bipartite_witness,
    detect_cyclic_bipartite,
    find_dual_letter_cycles,
    find_letter_cycles,
    find_word_cycles,
    normal_form_3x2n,
    theorem4_witness,
    verify_witness,
)

__version__ = "0.1.0"
