//! `RDC1` binary container for one data cube.
//!
//! A 64-byte little-endian header followed by the samples as interleaved
//! `(re, im)` `f32` pairs in `[chirp][rx][sample]` order:
//!
//! | offset | type     | field            |
//! |--------|----------|------------------|
//! | 0      | [u8; 4]  | magic `RDC1`     |
//! | 4      | u32      | version (1)      |
//! | 8      | u64      | timestamp_ns     |
//! | 16     | u16      | sensor_id        |
//! | 18     | u16      | n_tx             |
//! | 20     | u16      | n_rx             |
//! | 22     | u16      | reserved (0)     |
//! | 24     | u32      | n_chirps         |
//! | 28     | u32      | n_samples        |
//! | 32     | f64      | carrier, Hz      |
//! | 40     | f64      | bandwidth, Hz    |
//! | 48     | f64      | chirp duration, s|
//! | 56     | f64      | sample rate, Hz  |

use std::fs;
use std::path::Path;

use num_complex::Complex32;

use crate::config::WaveformConfig;
use crate::cube::DataCube;
use crate::error::{FormatError, Result};

pub const MAGIC: [u8; 4] = *b"RDC1";
pub const VERSION: u32 = 1;
pub const HEADER_LEN: usize = 64;

/// Decoded fixed-size header.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubeFileHeader {
    pub version: u32,
    pub timestamp_ns: u64,
    pub sensor_id: u16,
    pub n_tx: u16,
    pub n_rx: u16,
    pub n_chirps: u32,
    pub n_samples: u32,
    pub carrier_frequency: f64,
    pub bandwidth: f64,
    pub chirp_duration: f64,
    pub sample_rate: f64,
}

impl CubeFileHeader {
    pub fn of(cube: &DataCube) -> Result<Self, FormatError> {
        let c = &cube.config;
        let narrow16 = |v: usize| u16::try_from(v).map_err(|_| FormatError::DimOverflow);
        let narrow32 = |v: usize| u32::try_from(v).map_err(|_| FormatError::DimOverflow);
        Ok(CubeFileHeader {
            version: VERSION,
            timestamp_ns: cube.timestamp_ns,
            sensor_id: cube.sensor_id,
            n_tx: narrow16(c.n_tx)?,
            n_rx: narrow16(c.n_rx)?,
            n_chirps: narrow32(c.n_chirps)?,
            n_samples: narrow32(c.n_samples)?,
            carrier_frequency: c.carrier_frequency,
            bandwidth: c.bandwidth,
            chirp_duration: c.chirp_duration,
            sample_rate: c.sample_rate,
        })
    }

    pub fn to_bytes(&self) -> [u8; HEADER_LEN] {
        let mut b = [0u8; HEADER_LEN];
        b[0..4].copy_from_slice(&MAGIC);
        b[4..8].copy_from_slice(&self.version.to_le_bytes());
        b[8..16].copy_from_slice(&self.timestamp_ns.to_le_bytes());
        b[16..18].copy_from_slice(&self.sensor_id.to_le_bytes());
        b[18..20].copy_from_slice(&self.n_tx.to_le_bytes());
        b[20..22].copy_from_slice(&self.n_rx.to_le_bytes());
        // 22..24 reserved
        b[24..28].copy_from_slice(&self.n_chirps.to_le_bytes());
        b[28..32].copy_from_slice(&self.n_samples.to_le_bytes());
        b[32..40].copy_from_slice(&self.carrier_frequency.to_le_bytes());
        b[40..48].copy_from_slice(&self.bandwidth.to_le_bytes());
        b[48..56].copy_from_slice(&self.chirp_duration.to_le_bytes());
        b[56..64].copy_from_slice(&self.sample_rate.to_le_bytes());
        b
    }

    /// Parses and checks the header at the start of `bytes`.
    pub fn parse(bytes: &[u8]) -> Result<Self, FormatError> {
        if bytes.len() < 4 {
            return Err(FormatError::Truncated {
                expected: HEADER_LEN as u64,
                actual: bytes.len() as u64,
            });
        }
        let magic: [u8; 4] = bytes[0..4].try_into().unwrap();
        if magic != MAGIC {
            return Err(FormatError::BadMagic(magic));
        }
        if bytes.len() < HEADER_LEN {
            return Err(FormatError::Truncated {
                expected: HEADER_LEN as u64,
                actual: bytes.len() as u64,
            });
        }
        let u16_at = |o: usize| u16::from_le_bytes(bytes[o..o + 2].try_into().unwrap());
        let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().unwrap());
        let u64_at = |o: usize| u64::from_le_bytes(bytes[o..o + 8].try_into().unwrap());
        let f64_at = |o: usize| f64::from_le_bytes(bytes[o..o + 8].try_into().unwrap());

        let version = u32_at(4);
        if version != VERSION {
            return Err(FormatError::UnsupportedVersion(version));
        }
        let h = CubeFileHeader {
            version,
            timestamp_ns: u64_at(8),
            sensor_id: u16_at(16),
            n_tx: u16_at(18),
            n_rx: u16_at(20),
            n_chirps: u32_at(24),
            n_samples: u32_at(28),
            carrier_frequency: f64_at(32),
            bandwidth: f64_at(40),
            chirp_duration: f64_at(48),
            sample_rate: f64_at(56),
        };
        if h.n_tx == 0 || h.n_rx == 0 || h.n_chirps == 0 || h.n_samples == 0 {
            return Err(FormatError::InvalidHeader("zero dimension".into()));
        }
        for (name, v) in [
            ("carrier frequency", h.carrier_frequency),
            ("bandwidth", h.bandwidth),
            ("chirp duration", h.chirp_duration),
            ("sample rate", h.sample_rate),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(FormatError::InvalidHeader(format!(
                    "{name} {v} is not positive"
                )));
            }
        }
        Ok(h)
    }

    /// Payload size in bytes, or `DimOverflow` if it does not fit the address space.
    pub fn payload_len(&self) -> Result<u64, FormatError> {
        let n = u64::from(self.n_chirps)
            .checked_mul(u64::from(self.n_rx))
            .and_then(|n| n.checked_mul(u64::from(self.n_samples)))
            .and_then(|n| n.checked_mul(8))
            .ok_or(FormatError::DimOverflow)?;
        usize::try_from(n).map_err(|_| FormatError::DimOverflow)?;
        n.checked_add(HEADER_LEN as u64)
            .ok_or(FormatError::DimOverflow)?;
        Ok(n)
    }

    pub fn config(&self) -> WaveformConfig {
        WaveformConfig {
            carrier_frequency: self.carrier_frequency,
            bandwidth: self.bandwidth,
            chirp_duration: self.chirp_duration,
            n_samples: self.n_samples as usize,
            sample_rate: self.sample_rate,
            n_chirps: self.n_chirps as usize,
            n_tx: self.n_tx as usize,
            n_rx: self.n_rx as usize,
            ..WaveformConfig::default()
        }
    }
}

pub fn encode_cube(cube: &DataCube) -> Result<Vec<u8>> {
    let header = CubeFileHeader::of(cube)?;
    let mut out = Vec::with_capacity(HEADER_LEN + cube.samples().len() * 8);
    out.extend_from_slice(&header.to_bytes());
    for s in cube.samples() {
        out.extend_from_slice(&s.re.to_le_bytes());
        out.extend_from_slice(&s.im.to_le_bytes());
    }
    Ok(out)
}

/// Decodes a cube. The frame rate is not stored and comes back as the default.
pub fn decode_cube(bytes: &[u8]) -> Result<DataCube> {
    let header = CubeFileHeader::parse(bytes)?;
    let payload = header.payload_len()?;
    let expected = HEADER_LEN as u64 + payload;
    let actual = bytes.len() as u64;
    if actual < expected {
        return Err(FormatError::Truncated { expected, actual }.into());
    }
    if actual > expected {
        return Err(FormatError::TrailingData { expected, actual }.into());
    }
    let samples: Vec<Complex32> = bytes[HEADER_LEN..]
        .chunks_exact(8)
        .map(|c| {
            Complex32::new(
                f32::from_le_bytes(c[0..4].try_into().unwrap()),
                f32::from_le_bytes(c[4..8].try_into().unwrap()),
            )
        })
        .collect();
    DataCube::from_samples(
        header.config(),
        header.sensor_id,
        header.timestamp_ns,
        samples,
    )
}

pub fn write_cube(cube: &DataCube, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let bytes = encode_cube(cube).map_err(|e| e.at(path))?;
    fs::write(path, bytes).map_err(|e| crate::Error::from(e).at(path))
}

pub fn read_cube(path: impl AsRef<Path>) -> Result<DataCube> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| crate::Error::from(e).at(path))?;
    decode_cube(&bytes).map_err(|e| e.at(path))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Error;

    fn small_cube() -> DataCube {
        let cfg = WaveformConfig {
            n_chirps: 6,
            n_samples: 8,
            n_tx: 3,
            n_rx: 2,
            ..WaveformConfig::default()
        };
        let n = cfg.cube_len();
        let samples = (0..n)
            .map(|i| Complex32::new(i as f32 * 0.5 - 3.0, -(i as f32) / 7.0))
            .collect();
        DataCube::from_samples(cfg, 9, 1_234_567_890, samples).unwrap()
    }

    fn format_err(r: Result<DataCube>) -> FormatError {
        match r {
            Err(Error::Format(f)) => f,
            other => panic!("expected a format error, got {other:?}"),
        }
    }

    #[test]
    fn header_layout() {
        let bytes = encode_cube(&small_cube()).unwrap();
        assert_eq!(&bytes[0..4], b"RDC1");
        assert_eq!(bytes[4..8], [1, 0, 0, 0]);
        assert_eq!(bytes[16..18], [9, 0]);
        assert_eq!(bytes[24..28], [6, 0, 0, 0]);
        assert_eq!(bytes.len(), 64 + 6 * 2 * 8 * 8);
        // first sample re = -3.0f32
        assert_eq!(bytes[64..68], (-3.0f32).to_le_bytes());
    }

    #[test]
    fn round_trip_is_exact() {
        let cube = small_cube();
        let back = decode_cube(&encode_cube(&cube).unwrap()).unwrap();
        assert_eq!(back, cube);
    }

    #[test]
    fn distinct_failures() {
        let bytes = encode_cube(&small_cube()).unwrap();

        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(matches!(
            format_err(decode_cube(&bad)),
            FormatError::BadMagic(_)
        ));

        let mut bad = bytes.clone();
        bad[4] = 2;
        assert_eq!(
            format_err(decode_cube(&bad)),
            FormatError::UnsupportedVersion(2)
        );

        let cut = &bytes[..bytes.len() - 1];
        assert!(matches!(
            format_err(decode_cube(cut)),
            FormatError::Truncated { .. }
        ));
        assert!(matches!(
            format_err(decode_cube(&bytes[..30])),
            FormatError::Truncated { .. }
        ));

        let mut long = bytes.clone();
        long.push(0);
        assert!(matches!(
            format_err(decode_cube(&long)),
            FormatError::TrailingData { .. }
        ));

        let mut bad = bytes.clone();
        bad[24..28].copy_from_slice(&u32::MAX.to_le_bytes());
        bad[28..32].copy_from_slice(&u32::MAX.to_le_bytes());
        bad[20..22].copy_from_slice(&u16::MAX.to_le_bytes());
        assert_eq!(format_err(decode_cube(&bad)), FormatError::DimOverflow);

        let mut bad = bytes;
        bad[20..22].copy_from_slice(&0u16.to_le_bytes());
        assert!(matches!(
            format_err(decode_cube(&bad)),
            FormatError::InvalidHeader(_)
        ));
    }

    #[test]
    fn header_claims_more_receivers_than_payload() {
        // payload written for 3 RX, header patched to claim 4
        let cfg = WaveformConfig {
            n_rx: 3,
            ..WaveformConfig::default()
        };
        let mut bytes = encode_cube(&DataCube::zeros(cfg, 1, 0)).unwrap();
        bytes[20..22].copy_from_slice(&4u16.to_le_bytes());
        match format_err(decode_cube(&bytes)) {
            FormatError::Truncated { expected, actual } => {
                assert_eq!(expected, 64 + 192 * 4 * 256 * 8);
                assert_eq!(actual, 64 + 192 * 3 * 256 * 8);
            }
            other => panic!("{other:?}"),
        }
    }
}
