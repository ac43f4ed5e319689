//! Finitely presented groupoids and the algorithms on them.

pub mod constructions;
pub mod cylinder;
pub mod finite;
pub mod forest;
pub mod functor;
pub mod group;
pub mod invariants;
pub mod presentation;
pub mod snf;
pub mod tietze;
pub mod word_problem;

pub use constructions::{homotopy_pushout, pushout, PushoutSquare};
pub use cylinder::{mapping_cylinder, MappingCylinder};
pub use finite::{
    enumerate_functors, functor_groupoid_stats, natural_transformations, FiniteFunctor, FiniteGroup,
    FiniteGroupoid, HomStats, Morphism,
};
pub use forest::{connected_components, SpanningForest};
pub use functor::{
    compose_functors, identity_functor, injectivity_witness, is_injective_on_objects, validate_functor,
    FunctorPresentation, FunctorValidation,
};
pub use group::{abelianization, vertex_group, AbelianInvariant, GroupPresentation};
pub use invariants::{groupoid_invariants, GroupoidInvariants};
pub use presentation::{
    free_reduce, invert_letters, reduce_letters, GenId, Generator, GroupoidPresentation, Letter, ObjId,
    Relation, Word,
};
pub use snf::{smith_normal_form, SmithForm};
pub use tietze::tietze_simplify;
pub use word_problem::{word_equal, AbelianWitness, WordSolver, WordVerdict};
