use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{Field, Grid};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PerturbationKind {
    /// `a exp(-(x/w)^2)`.
    Gaussian,
    /// `-a (x/w) exp(-(x/w)^2)`.
    OddGaussianDerivative,
    /// `a sin(2x/w) exp(-(x/2w)^2)`.
    OddSinePacket,
    /// Random low-frequency Fourier sum under a Gaussian envelope of
    /// width `2w`, scaled to max-norm `a`.
    RandomBandlimited,
}

impl PerturbationKind {
    pub const ALL: [PerturbationKind; 4] = [
        PerturbationKind::Gaussian,
        PerturbationKind::OddGaussianDerivative,
        PerturbationKind::OddSinePacket,
        PerturbationKind::RandomBandlimited,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PerturbationKind::Gaussian => "gaussian",
            PerturbationKind::OddGaussianDerivative => "odd_gaussian_derivative",
            PerturbationKind::OddSinePacket => "odd_sine_packet",
            PerturbationKind::RandomBandlimited => "random_bandlimited",
        }
    }

    pub fn is_odd(self) -> bool {
        matches!(
            self,
            PerturbationKind::OddGaussianDerivative | PerturbationKind::OddSinePacket
        )
    }
}

impl fmt::Display for PerturbationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PerturbationKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| {
            Error::InvalidParameter(format!(
                "unknown perturbation kind `{s}` (expected one of {})",
                Self::ALL.map(|k| k.name()).join(", ")
            ))
        })
    }
}

const RANDOM_MODES: usize = 8;

pub fn make_perturbation(
    grid: &Grid,
    kind: PerturbationKind,
    amplitude: f64,
    width: f64,
    seed: u64,
) -> Result<Field> {
    if !(amplitude > 0.0 && amplitude.is_finite() && width > 0.0 && width.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "amplitude and width must be positive, got {amplitude} and {width}"
        )));
    }
    let (a, w) = (amplitude, width);
    let f = match kind {
        PerturbationKind::Gaussian => Field::from_fn(grid, |x| a * (-(x / w).powi(2)).exp()),
        PerturbationKind::OddGaussianDerivative => {
            Field::from_fn(grid, |x| -a * (x / w) * (-(x / w).powi(2)).exp()).odd_part()
        }
        PerturbationKind::OddSinePacket => {
            Field::from_fn(grid, |x| a * (2.0 * x / w).sin() * (-(x / (2.0 * w)).powi(2)).exp())
                .odd_part()
        }
        PerturbationKind::RandomBandlimited => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let coef: Vec<(f64, f64)> = (0..RANDOM_MODES)
                .map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let raw = Field::from_fn(grid, |x| {
                let s: f64 = coef
                    .iter()
                    .enumerate()
                    .map(|(m, (c, d))| {
                        let k = (m + 1) as f64 / (2.0 * w);
                        c * (k * x).cos() + d * (k * x).sin()
                    })
                    .sum();
                s * (-(x / (2.0 * w)).powi(2)).exp()
            });
            let m = raw.max_abs();
            raw.scaled(a / m)
        }
    };
    Ok(f)
}
