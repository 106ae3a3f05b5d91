//! Density and similarity figures on occupancy grids.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::grid::OccupancyGrid;
use crate::error::{Error, Result};

/// Which cells enter the denominator of the mean cell count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CellSupport {
    /// Cells with N_m > 0 (M − K cells).
    #[default]
    Occupied,
    /// Cells with N_m > 1 only.
    MoreThanOne,
}

/// Points per occupied cell, kept as an exact ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellDensity {
    pub points: u64,
    pub cells: u64,
    pub cell_area: f64,
}

impl CellDensity {
    pub fn ratio(&self) -> Ratio<u64> {
        Ratio::new(self.points, self.cells)
    }

    pub fn per_cell(&self) -> f64 {
        self.points as f64 / self.cells as f64
    }

    /// Mean count normalised to one square metre of cell area.
    pub fn per_square_metre(&self) -> f64 {
        self.per_cell() / self.cell_area
    }
}

/// Mean cell count N̄ = Σ N_m / (M − K): total points over occupied cells.
pub fn mean_cell_count(grid: &OccupancyGrid) -> Result<CellDensity> {
    mean_cell_count_with(grid, CellSupport::Occupied, None)
}

/// Mean cell count over a chosen support. With `joint`, only cells occupied
/// in both grids count (points of `grid` in those cells over their number).
pub fn mean_cell_count_with(
    grid: &OccupancyGrid,
    support: CellSupport,
    joint: Option<&OccupancyGrid>,
) -> Result<CellDensity> {
    if let Some(other) = joint {
        if other.spec != grid.spec {
            return Err(Error::Config(
                "joint support needs identical grid specs".into(),
            ));
        }
    }
    let floor = match support {
        CellSupport::Occupied => 0,
        CellSupport::MoreThanOne => 1,
    };
    let mut points = 0u64;
    let mut cells = 0u64;
    for (i, &n) in grid.counts().iter().enumerate() {
        if n <= floor {
            continue;
        }
        if joint.is_some_and(|o| o.counts()[i] == 0) {
            continue;
        }
        points += u64::from(n);
        cells += 1;
    }
    if cells == 0 {
        return Err(Error::UndefinedMetric(
            "mean cell count of a grid with no occupied cells",
        ));
    }
    Ok(CellDensity {
        points,
        cells,
        cell_area: grid.spec.cell_area(),
    })
}

/// |A ∩ B| and |A ∪ B| over occupied cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Jaccard {
    pub intersection: u64,
    pub union: u64,
}

impl Jaccard {
    /// Both grids empty: J is defined as 1.
    pub fn is_degenerate(&self) -> bool {
        self.union == 0
    }

    pub fn ratio(&self) -> Ratio<u64> {
        if self.union == 0 {
            Ratio::from_integer(1)
        } else {
            Ratio::new(self.intersection, self.union)
        }
    }

    pub fn value(&self) -> f64 {
        if self.union == 0 {
            1.0
        } else {
            self.intersection as f64 / self.union as f64
        }
    }
}

pub fn jaccard(a: &OccupancyGrid, b: &OccupancyGrid) -> Result<Jaccard> {
    if a.spec != b.spec {
        return Err(Error::Config(
            "Jaccard needs grids with identical specs".into(),
        ));
    }
    let (mut inter, mut union) = (0u64, 0u64);
    for (&x, &y) in a.counts().iter().zip(b.counts()) {
        match (x > 0, y > 0) {
            (true, true) => {
                inter += 1;
                union += 1;
            }
            (true, false) | (false, true) => union += 1,
            (false, false) => {}
        }
    }
    Ok(Jaccard {
        intersection: inter,
        union,
    })
}
