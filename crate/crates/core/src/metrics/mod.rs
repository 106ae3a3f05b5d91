//! Occupancy-grid comparison of point clouds.

pub mod figures;
pub mod grid;
pub mod series;
pub mod stats;

pub use figures::{
    jaccard, mean_cell_count, mean_cell_count_with, CellDensity, CellSupport, Jaccard,
};
pub use grid::{rasterize, GridSpec, OccupancyGrid};
pub use series::{
    default_pair_tolerance, metric_timeseries, CellMetrics, MetricFrame, MetricRow, MetricSeries,
    SeriesOptions,
};
pub use stats::{boxplot_stats, quantile_sorted, BoxStats};
