//! Sequences of samplings of one function on refining grids.

use crate::corpus::{sample, AnalyticFunction};
use crate::error::{FracError, Result};
use crate::grid::{Grid, GridFunction};

/// Samplings of one function on grids of increasing size over one interval.
#[derive(Debug, Clone, PartialEq)]
pub struct Ladder {
    levels: Vec<GridFunction>,
}

impl Ladder {
    pub fn new(levels: Vec<GridFunction>) -> Result<Self> {
        let first = levels
            .first()
            .ok_or_else(|| FracError::InvalidGrid("empty ladder".into()))?;
        let iv = first.grid().interval();
        if levels.iter().any(|u| u.grid().interval() != iv) {
            return Err(FracError::InvalidGrid(
                "ladder levels live on different intervals".into(),
            ));
        }
        if levels
            .windows(2)
            .any(|w| w[1].grid().n() <= w[0].grid().n())
        {
            return Err(FracError::InvalidGrid(
                "ladder sizes must increase strictly".into(),
            ));
        }
        Ok(Ladder { levels })
    }

    /// Sample a corpus member at each size in `ns`.
    pub fn sample(f: &AnalyticFunction, ns: &[usize]) -> Result<Self> {
        let levels = ns
            .iter()
            .map(|&n| sample(f, &Grid::new(f.interval(), n)?))
            .collect::<Result<Vec<_>>>()?;
        Ladder::new(levels)
    }

    /// Resample one grid function (its interpolant and terms) at each size.
    pub fn resample(u: &GridFunction, ns: &[usize]) -> Result<Self> {
        let iv = u.grid().interval();
        let levels = ns
            .iter()
            .map(|&n| u.resample(Grid::new(iv, n)?))
            .collect::<Result<Vec<_>>>()?;
        Ladder::new(levels)
    }

    /// Single level; checks that need refinement report that they cannot
    /// judge monotonicity.
    pub fn single(u: GridFunction) -> Self {
        Ladder { levels: vec![u] }
    }

    pub fn levels(&self) -> &[GridFunction] {
        &self.levels
    }

    pub fn ns(&self) -> Vec<usize> {
        self.levels.iter().map(|u| u.grid().n()).collect()
    }

    pub fn finest(&self) -> &GridFunction {
        self.levels.last().expect("ladders are never empty")
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// Apply `f` level by level (same sizes, new function).
    pub fn map(&self, f: impl Fn(&GridFunction) -> Result<GridFunction>) -> Result<Ladder> {
        Ladder::new(self.levels.iter().map(f).collect::<Result<Vec<_>>>()?)
    }
}
