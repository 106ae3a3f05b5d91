//! Two-dimensional cell-averaging CFAR on a range-Doppler power map.
//!
//! The training region is the rectangle `±(guard + train)` around the cell
//! under test minus the `±guard` block. Doppler wraps around; range is
//! truncated at the map edges and the threshold factor is recomputed for the
//! reduced number of training cells, so the false-alarm probability stays at
//! `pfa` for exponentially distributed noise power.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::spectrum::PowerMap;
use crate::error::{Error, Result};
use crate::{real, Real};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CfarParams {
    pub train_range: usize,
    pub train_doppler: usize,
    pub guard_range: usize,
    pub guard_doppler: usize,
    pub pfa: f64,
    /// Half-width of the neighbourhood within which a detection must be the
    /// strongest cell to survive. Zero keeps every threshold crossing.
    pub merge_radius: usize,
}

impl Default for CfarParams {
    fn default() -> Self {
        CfarParams {
            train_range: 8,
            train_doppler: 4,
            guard_range: 2,
            guard_doppler: 2,
            pfa: 1e-4,
            merge_radius: 1,
        }
    }
}

impl CfarParams {
    fn validate(&self) -> Result<()> {
        if !(self.pfa > 0.0 && self.pfa < 1.0) {
            return Err(Error::Config(format!("pfa {} outside (0, 1)", self.pfa)));
        }
        if self.train_range + self.train_doppler == 0 {
            return Err(Error::Config(
                "CFAR needs at least one training cell".into(),
            ));
        }
        Ok(())
    }
}

/// Threshold factor α = N · (pfa^(−1/N) − 1).
pub fn threshold_factor(n_train: usize, pfa: f64) -> f64 {
    let n = n_train as f64;
    n * (pfa.powf(-1.0 / n) - 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CfarCell<T> {
    pub range_bin: usize,
    pub doppler_bin: usize,
    pub power: T,
    /// Mean power of the training cells.
    pub noise: T,
    pub snr_db: T,
}

pub fn cfar_detect<T: Real>(map: &PowerMap<T>, params: &CfarParams) -> Result<Vec<CfarCell<T>>> {
    params.validate()?;
    let (nd, nr) = (map.n_doppler, map.n_range);
    let wd = params.guard_doppler + params.train_doppler;
    let wr = params.guard_range + params.train_range;
    if nd < 2 * wd + 1 || nr < 2 * wr + 1 {
        return Err(Error::Config(format!(
            "{nd}×{nr} map is smaller than the {}×{} CFAR window",
            2 * wd + 1,
            2 * wr + 1
        )));
    }

    // Summed-area table over rows extended by `wd` on both sides (Doppler wrap).
    let rows = nd + 2 * wd;
    let mut sat = vec![0.0f64; (rows + 1) * (nr + 1)];
    for i in 0..rows {
        let d = (i + nd - wd) % nd;
        let mut run = 0.0;
        for r in 0..nr {
            run += map.get(d, r).to_f64().unwrap_or(0.0);
            sat[(i + 1) * (nr + 1) + r + 1] = sat[i * (nr + 1) + r + 1] + run;
        }
    }
    // sum over extended rows [i0, i1) and range [r0, r1)
    let rect = |i0: usize, i1: usize, r0: usize, r1: usize| {
        sat[i1 * (nr + 1) + r1] - sat[i0 * (nr + 1) + r1] - sat[i1 * (nr + 1) + r0]
            + sat[i0 * (nr + 1) + r0]
    };

    let mut alpha_cache: HashMap<usize, f64> = HashMap::new();
    let gd = params.guard_doppler;
    let gr = params.guard_range;
    let mut hits = Vec::new();
    for d in 0..nd {
        // extended row index of d is d + wd
        let (o0, o1) = (d, d + 2 * wd + 1);
        let (g0, g1) = (d + wd - gd, d + wd + gd + 1);
        for r in 0..nr {
            let (r0, r1) = (r.saturating_sub(wr), (r + wr + 1).min(nr));
            let (q0, q1) = (r.saturating_sub(gr), (r + gr + 1).min(nr));
            let outer_n = (o1 - o0) * (r1 - r0);
            let guard_n = (g1 - g0) * (q1 - q0);
            let n_train = outer_n - guard_n;
            if n_train == 0 {
                continue;
            }
            let sum = rect(o0, o1, r0, r1) - rect(g0, g1, q0, q1);
            let mean = sum.max(0.0) / n_train as f64;
            let alpha = *alpha_cache
                .entry(n_train)
                .or_insert_with(|| threshold_factor(n_train, params.pfa));
            let p = map.get(d, r).to_f64().unwrap_or(0.0);
            if p > alpha * mean {
                let snr = if mean > 0.0 {
                    10.0 * (p / mean).log10()
                } else {
                    f64::INFINITY
                };
                hits.push(CfarCell {
                    range_bin: r,
                    doppler_bin: d,
                    power: map.get(d, r),
                    noise: real(mean),
                    snr_db: real(snr),
                });
            }
        }
    }

    if params.merge_radius == 0 {
        return Ok(hits);
    }
    Ok(hits
        .into_iter()
        .filter(|c| is_local_max(map, c.doppler_bin, c.range_bin, params.merge_radius))
        .collect())
}

/// True if `(d, r)` is the strongest cell of its neighbourhood; ties go to the
/// lowest linear index so a plateau yields exactly one survivor.
fn is_local_max<T: Real>(map: &PowerMap<T>, d: usize, r: usize, radius: usize) -> bool {
    let (nd, nr) = (map.n_doppler, map.n_range);
    let p = map.get(d, r);
    let me = d * nr + r;
    let rad = radius as isize;
    for dd in -rad..=rad {
        let d2 = (d as isize + dd).rem_euclid(nd as isize) as usize;
        for dr in -rad..=rad {
            let r2 = r as isize + dr;
            if r2 < 0 || r2 >= nr as isize || (dd == 0 && dr == 0) {
                continue;
            }
            let r2 = r2 as usize;
            let q = map.get(d2, r2);
            if q > p || (q == p && d2 * nr + r2 < me) {
                return false;
            }
        }
    }
    true
}
