//! Closed and open evolutions of `A – M – B`: Kraus maps, decomposable maps,
//! dilations, Trotter products and classicality checks.

mod classical;
mod distance;
pub mod hamiltonians;
mod maps;
mod trotter;

pub use classical::{classicality_check, computational_projectors, dephasing_invariance, Classicality};
pub use distance::{sampled_map_distance, MapDistance, MapDistanceOptions};
pub use maps::{
    apply_map, evolve, marginal_of_dilation, DecomposableSpec, DilationSpec, KrausMap, Order, QuantumMap,
    COMPLETENESS_TOL,
};
pub use trotter::{
    commutator_norm, first_order_steps, min_steps, trotter_error, trotter_unitary, HamiltonianPair, StepCount,
    DEFAULT_STEP_CAP,
};
