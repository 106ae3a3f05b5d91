//! Doppler-division demultiplexing of the transmit channels.
//!
//! Transmitter `i` is phase-coded with `2π·i/n_tx` per chirp, so after the
//! slow-time FFT its copy of a target sits `i · n_chirps / n_tx` bins above the
//! true Doppler bin. The spectrum therefore splits into `n_tx` sub-bands of
//! width `W = n_chirps / n_tx`; the true Doppler of a target is its position
//! inside a sub-band, read as a signed bin in `[-W/2, W/2)`.

use num_complex::Complex;

use super::spectrum::RangeDopplerMap;
use crate::error::{Error, Result};
use crate::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct Demuxed<T> {
    /// Signed Doppler bin of the target inside one sub-band.
    pub doppler_bin: isize,
    /// FFT-order bin of each transmitter's copy, indexed by TX.
    pub alias_bins: Vec<usize>,
    /// Virtual-array snapshot, element `i * n_rx + j`.
    pub snapshot: Vec<Complex<T>>,
    /// Within `guard` bins of a sub-band edge: the TX assignment may be off.
    pub ambiguous: bool,
}

/// Signed Doppler bin inside a sub-band of width `width` for an FFT-order bin.
pub fn subband_bin(bin: usize, width: usize) -> isize {
    let p = (bin % width) as isize;
    if p < width.div_ceil(2) as isize {
        p
    } else {
        p - width as isize
    }
}

pub fn ddma_demux<T: Real>(
    map: &RangeDopplerMap<T>,
    range_bin: usize,
    doppler_bin: usize,
    n_tx: usize,
    guard: usize,
) -> Result<Demuxed<T>> {
    let n = map.n_doppler;
    if n_tx == 0 || !n.is_multiple_of(n_tx) {
        return Err(Error::Config(format!(
            "{n} Doppler bins cannot be split into {n_tx} sub-bands"
        )));
    }
    if range_bin >= map.n_range || doppler_bin >= n {
        return Err(Error::Dimension(format!(
            "cell ({doppler_bin}, {range_bin}) outside {n}×{} map",
            map.n_range
        )));
    }
    let width = n / n_tx;
    let d = subband_bin(doppler_bin, width);
    let lo = -(width as isize / 2);
    let hi = width.div_ceil(2) as isize - 1;
    let ambiguous = d < lo + guard as isize || d > hi - guard as isize;

    let alias_bins: Vec<usize> = (0..n_tx)
        .map(|i| (d + (i * width) as isize).rem_euclid(n as isize) as usize)
        .collect();
    let snapshot = alias_bins
        .iter()
        .flat_map(|&bin| (0..map.n_rx).map(move |j| map.get(bin, j, range_bin)))
        .collect();
    Ok(Demuxed {
        doppler_bin: d,
        alias_bins,
        snapshot,
        ambiguous,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subband_positions() {
        assert_eq!(subband_bin(0, 64), 0);
        assert_eq!(subband_bin(64, 64), 0);
        assert_eq!(subband_bin(130, 64), 2);
        assert_eq!(subband_bin(63, 64), -1);
        assert_eq!(subband_bin(32, 64), -32);
        assert_eq!(subband_bin(31, 64), 31);
    }
}
