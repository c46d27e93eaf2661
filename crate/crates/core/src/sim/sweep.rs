//! Parameter grids over cache size, replacement policy, query mode and seed.

use rayon::prelude::*;

use super::engine::run;
use super::metrics::MetricsReport;
use super::scenario::{Scenario, ScenarioError};
use crate::content_store::CachePolicy;

/// Normalized cache sizes of the reference experiments.
pub const PAPER_FRACTIONS: [f64; 4] = [0.4, 0.5, 0.6, 0.7];

/// Expands the grid in `(fraction, policy, query, seed)` order, validating
/// every cell. Stops at the first invalid cell and returns the cells before
/// it together with the error.
pub fn sweep_cells(
    base: &Scenario,
    fractions: &[f64],
    policies: &[CachePolicy],
    query_modes: &[bool],
    seeds: &[u64],
) -> (Vec<Scenario>, Option<ScenarioError>) {
    let mut cells = Vec::new();
    let empty = [
        ("cache_fraction", fractions.is_empty()),
        ("cache_policy", policies.is_empty()),
        ("query_enabled", query_modes.is_empty()),
        ("seed", seeds.is_empty()),
    ];
    if let Some((field, _)) = empty.iter().find(|(_, e)| *e) {
        return (
            cells,
            Some(ScenarioError::Invalid {
                field,
                message: "sweep list is empty".into(),
            }),
        );
    }
    for &fraction in fractions {
        for &policy in policies {
            for &query in query_modes {
                for &seed in seeds {
                    let mut cell = base.clone();
                    cell.cache_policy = policy;
                    cell.query_enabled = query;
                    cell.seed = seed;
                    let checked = cell.set_cache_fraction(fraction).and_then(|_| cell.validate());
                    if let Err(e) = checked {
                        return (cells, Some(e));
                    }
                    cells.push(cell);
                }
            }
        }
    }
    (cells, None)
}

/// Runs every cell of the grid (in parallel) and returns one report per
/// cell in grid order.
pub fn sweep(
    base: &Scenario,
    fractions: &[f64],
    policies: &[CachePolicy],
    query_modes: &[bool],
    seeds: &[u64],
) -> Result<Vec<MetricsReport>, ScenarioError> {
    let (cells, error) = sweep_cells(base, fractions, policies, query_modes, seeds);
    if let Some(e) = error {
        return Err(e);
    }
    run_all(&cells)
}

pub fn run_all(cells: &[Scenario]) -> Result<Vec<MetricsReport>, ScenarioError> {
    cells.par_iter().map(run).collect()
}
