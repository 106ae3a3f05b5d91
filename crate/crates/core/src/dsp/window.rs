use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{real, Real};

/// Taper applied before each FFT stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Window {
    #[default]
    Hann,
    Rectangular,
}

impl Window {
    /// Symmetric window of length `n`.
    pub fn coefficients<T: Real>(self, n: usize) -> Vec<T> {
        match self {
            Window::Rectangular => vec![T::one(); n],
            Window::Hann if n <= 1 => vec![T::one(); n],
            Window::Hann => {
                let denom = (n - 1) as f64;
                (0..n)
                    .map(|i| real(0.5 - 0.5 * (std::f64::consts::TAU * i as f64 / denom).cos()))
                    .collect()
            }
        }
    }
}

impl FromStr for Window {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "hann" | "hanning" => Ok(Window::Hann),
            "rect" | "rectangular" | "none" => Ok(Window::Rectangular),
            other => Err(format!("unknown window '{other}' (expected hann or rect)")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hann_is_symmetric_with_zero_ends() {
        let w: Vec<f64> = Window::Hann.coefficients(12);
        assert_eq!(w[0], 0.0);
        assert!(w[11].abs() < 1e-15);
        for i in 0..6 {
            assert!((w[i] - w[11 - i]).abs() < 1e-15);
        }
    }

    #[test]
    fn parse() {
        assert_eq!("HANN".parse::<Window>(), Ok(Window::Hann));
        assert_eq!("rect".parse::<Window>(), Ok(Window::Rectangular));
        assert!("kaiser".parse::<Window>().is_err());
    }
}
