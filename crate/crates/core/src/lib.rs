//! Lower bounds on the concurrence of bipartite states from informationally
//! complete symmetric measurements (`(N,M)`-POVMs, GSIC and SIC POVMs),
//! together with the realignment bound, builtin test states and reproducible
//! parameter sweeps.

pub mod bounds;
pub mod error;
pub mod json;
pub mod matcore;
pub mod povm;
pub mod states;
pub mod sweep;

pub use bounds::{
    conjecture_gap, exact_concurrence_isotropic, exact_concurrence_pure, gsic_bound, nm_bound,
    probability_matrix, realignment_bound, separability_threshold, sic_bound, BoundMethod,
    BoundReport, ProbabilityMatrix,
};
pub use error::{Error, Result};
pub use povm::{build_nm_povm, gell_mann_basis, sic_povm, t_range, x_of_t, SymmetricPovm};
pub use states::{DensityMatrix, PureState};
