//! Structure-preserving electromagnetics on cell complexes.
//!
//! Maxwell's equations are written as cochain equations `dF = 0`, `dG = J`
//! over a primal mesh and its circumcentric dual. One operator core backs
//! three time integrators: the Yee scheme on rectangular grids, the
//! unstructured leapfrog of Bossavit and Kettunen, and an asynchronous
//! variational integrator (AVI) driven by a priority queue.

pub mod dec;
pub mod diagnostics;
pub mod integrators;
pub mod io;
pub mod maxwell;
pub mod mesh;

pub use dec::{Causality, Cochain, OperatorKind, OperatorMatrix, Placement};
pub use maxwell::{FieldState, MaterialParams, MaxwellModel};
pub use mesh::{CellComplex, CellShape, DualComplex};
