pub mod classify;
pub mod construction;
pub mod engine;
pub mod group;
pub mod search;
pub mod star;
pub mod term;
pub mod theta;
pub mod word;

pub use classify::{
    classify_identity, classify_set, condition_holds, Atom, Classification, Classifier, ConditionExpr, Stage, Witness,
    WitnessBattery,
};
pub use construction::{
    build_loop, check_identity, check_identity_witness, check_isomorphism, has_two_sided_inverses, is_diassociative,
    is_loop, mirror_map, mirror_quadruple, opposite, LoopTable, Provenance,
};
pub use engine::{
    collect_identities, collect_with_trace, delta_usage, evaluate_term, Coset, CosetAssignment, EngineError,
    SymbolicValue, TraceLine,
};
pub use group::{center, load_group, Elem, FiniteGroup, GroupError};
pub use search::{
    diff_against_golden, enumerate_quadruples, golden_condition, render_json, render_publication, render_text,
    run_search, run_variety_search, search_identities, vetoed_identities, DiffReport, DiffRow, GoldenCondition,
    GoldenError, GoldenSet, GoldenTable, SearchError, VarietyResult, VARIETIES,
};
pub use star::{
    enumerate_star_maps, g0_candidates, predicate_pb, predicate_pc, predicate_ps, CentralElement, Signature, StarMap,
    StarredGroup,
};
pub use term::{
    builtin, builtin_identities, check_strictly_balanced, parse_identity, LoopIdentity, LoopTerm, ParseError,
};
pub use theta::{MultQuadruple, ThetaElem, ThetaError};
pub use word::{
    canonicalize, star_rename, star_word, substitute_unit, GroupIdentity, GroupWord, IdentitySet, Letter, Var,
};
