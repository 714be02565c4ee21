//! Inputs shared by the benchmarks in `benches/`.

use steinberg_core::ash::AshComplex;
use steinberg_core::{ExactMatrix, Result};

/// (n, p) pairs small enough to iterate on in a benchmark loop.
pub const INSTANCES: [(usize, u64); 3] = [(2, 3), (3, 2), (3, 3)];

/// Boundary matrices of the Ash complex, lowest degree first.
pub fn ash_boundaries(n: usize, p: u64) -> Result<Vec<ExactMatrix>> {
    let ash = AshComplex::new(n, p)?;
    let c = ash.complex();
    Ok((1..c.dims().len()).filter_map(|k| c.boundary(k).cloned()).collect())
}
