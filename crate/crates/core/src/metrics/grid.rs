use serde::{Deserialize, Serialize};

use crate::cloud::RadarPoint;
use crate::error::{Error, Result};

/// Axis-aligned crop of the horizontal plane divided into square cells.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    /// Lower-left corner, m.
    pub origin: [f64; 2],
    /// Width along x and y, m.
    pub extent: [f64; 2],
    pub cell_size: f64,
}

impl Default for GridSpec {
    /// 100 m × 80 m centred on the vessel origin, 1 m cells.
    fn default() -> Self {
        GridSpec::centered(100.0, 80.0, 1.0).expect("default grid is valid")
    }
}

impl GridSpec {
    pub fn new(origin: [f64; 2], extent: [f64; 2], cell_size: f64) -> Result<Self> {
        if !(cell_size > 0.0) || !cell_size.is_finite() {
            return Err(Error::Config(format!("cell size {cell_size} must be > 0")));
        }
        for e in extent {
            if !(e > 0.0) || !e.is_finite() {
                return Err(Error::Config(format!("grid extent {e} must be > 0")));
            }
            let n = e / cell_size;
            if (n - n.round()).abs() > 1e-9 * n.max(1.0) {
                return Err(Error::Config(format!(
                    "extent {e} m is not a whole number of {cell_size} m cells"
                )));
            }
        }
        if origin.iter().any(|o| !o.is_finite()) {
            return Err(Error::Config("grid origin must be finite".into()));
        }
        Ok(GridSpec {
            origin,
            extent,
            cell_size,
        })
    }

    /// Crop of `length × width` metres centred on the vessel frame origin.
    pub fn centered(length: f64, width: f64, cell_size: f64) -> Result<Self> {
        GridSpec::new([-0.5 * length, -0.5 * width], [length, width], cell_size)
    }

    pub fn with_cell_size(&self, cell_size: f64) -> Result<Self> {
        GridSpec::new(self.origin, self.extent, cell_size)
    }

    pub fn shape(&self) -> (usize, usize) {
        (
            (self.extent[0] / self.cell_size).round() as usize,
            (self.extent[1] / self.cell_size).round() as usize,
        )
    }

    /// Number of cells M.
    pub fn n_cells(&self) -> usize {
        let (nx, ny) = self.shape();
        nx * ny
    }

    pub fn cell_area(&self) -> f64 {
        self.cell_size * self.cell_size
    }

    /// Cell holding `(x, y)` under half-open `[edge, edge + cell_size)` intervals.
    pub fn cell_of(&self, x: f64, y: f64) -> Option<(usize, usize)> {
        let (nx, ny) = self.shape();
        let ix = cell_coord(x - self.origin[0], self.cell_size)?;
        let iy = cell_coord(y - self.origin[1], self.cell_size)?;
        (ix < nx && iy < ny).then_some((ix, iy))
    }
}

fn cell_coord(offset: f64, cell: f64) -> Option<usize> {
    let k = offset / cell;
    // points sitting on an edge (up to rounding of the division) go up
    let k = if (k - k.round()).abs() < 1e-9 {
        k.round()
    } else {
        k.floor()
    };
    (k >= 0.0 && k.is_finite()).then_some(k as usize)
}

/// Per-cell point counts N_m of one cloud.
#[derive(Debug, Clone, PartialEq)]
pub struct OccupancyGrid {
    pub spec: GridSpec,
    counts: Vec<u32>,
    /// Points that fell outside the crop.
    pub dropped: usize,
}

impl OccupancyGrid {
    pub fn empty(spec: GridSpec) -> Self {
        OccupancyGrid {
            spec,
            counts: vec![0; spec.n_cells()],
            dropped: 0,
        }
    }

    pub fn from_counts(spec: GridSpec, counts: Vec<u32>) -> Result<Self> {
        if counts.len() != spec.n_cells() {
            return Err(Error::Dimension(format!(
                "{} counts for {} cells",
                counts.len(),
                spec.n_cells()
            )));
        }
        Ok(OccupancyGrid {
            spec,
            counts,
            dropped: 0,
        })
    }

    /// Counts in row-major order (`iy * nx + ix`).
    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn count(&self, ix: usize, iy: usize) -> u32 {
        let (nx, _) = self.spec.shape();
        self.counts[iy * nx + ix]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().map(|&c| u64::from(c)).sum()
    }

    pub fn occupied(&self) -> usize {
        self.counts.iter().filter(|&&c| c > 0).count()
    }

    /// K: cells with N_m = 0.
    pub fn zero_cells(&self) -> usize {
        self.counts.len() - self.occupied()
    }
}

/// Projects points onto the horizontal plane and counts them per cell.
pub fn rasterize<'a>(
    points: impl IntoIterator<Item = &'a RadarPoint>,
    spec: &GridSpec,
) -> OccupancyGrid {
    let mut grid = OccupancyGrid::empty(*spec);
    let (nx, _) = spec.shape();
    for p in points {
        match spec.cell_of(p.x, p.y) {
            Some((ix, iy)) => grid.counts[iy * nx + ix] += 1,
            None => grid.dropped += 1,
        }
    }
    grid
}
