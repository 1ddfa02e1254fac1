//! Serializable model descriptions and the standard fixture set.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame_transform::{translate, NormalizationMode};
use crate::kinematics::{Boost, Event};
use crate::quadrature::QuadratureSettings;
use crate::tomography::TomographyConfig;
use crate::wavepacket::{MomentumAmplitude, SpectralProfile, UniformGrid, WavefunctionModel};

/// Packet half-widths covered by automatic normalization domains.
const COVER: f64 = 20.0;
/// Off-shell fixtures use coarse grids whose synthesis repeats with period
/// 2π/Δk, so their domains stay well inside one period.
const COVER_OFFSHELL: f64 = 6.0;
const AUTO_QUAD_N: usize = 8192;

fn one() -> f64 {
    1.0
}

fn default_quad_n() -> usize {
    4096
}

/// A wave-function described by its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelSpec {
    /// Right-moving Gaussian packet, translated by `shift`.
    Massless {
        k0: f64,
        sigma: f64,
        k_min: f64,
        k_max: f64,
        n_k: usize,
        #[serde(default)]
        shift: f64,
        /// Multiplies the discrete norm after normalization; 1 leaves it intact.
        #[serde(default = "one")]
        norm_scale: f64,
    },
    /// Eigen-energy Gaussian packet centred at `center`, normalized on `well`.
    EigenGaussian {
        omega_e: f64,
        k0: f64,
        sigma: f64,
        n_k: usize,
        center: f64,
        well: [f64; 2],
        #[serde(default = "default_quad_n")]
        n_quad: usize,
    },
    /// Eigen-energy superposition of explicit momentum nodes, normalized on `well`.
    EigenModes {
        omega_e: f64,
        k_min: f64,
        k_max: f64,
        amplitudes: Vec<f64>,
        well: [f64; 2],
        #[serde(default = "default_quad_n")]
        n_quad: usize,
    },
    /// Separable Gaussian in k and ω.
    OffShell {
        k0: f64,
        sigma_k: f64,
        n_k: usize,
        omega0: f64,
        sigma_omega: f64,
        n_omega: usize,
    },
}

impl ModelSpec {
    pub fn build(&self) -> Result<WavefunctionModel> {
        match *self {
            ModelSpec::Massless { k0, sigma, k_min, k_max, n_k, shift, norm_scale } => {
                if !(norm_scale > 0.0 && norm_scale.is_finite()) {
                    return Err(Error::Domain(format!("norm_scale must be positive, got {norm_scale}")));
                }
                let grid = UniformGrid::new(k_min, k_max, n_k)?;
                let phi = MomentumAmplitude::gaussian(k0, sigma, grid)?.scaled(norm_scale.sqrt());
                Ok(translate(&WavefunctionModel::massless(phi)?, shift))
            }
            ModelSpec::EigenGaussian { omega_e, k0, sigma, n_k, center, well, n_quad } => {
                let half = crate::wavepacket::GAUSSIAN_CUTOFF * sigma;
                let grid = UniformGrid::new(k0 - half, k0 + half, n_k)?;
                let phi = MomentumAmplitude::gaussian(k0, sigma, grid)?;
                let m = translate(&WavefunctionModel::eigen_energy(omega_e, phi)?, center);
                m.normalized_on(0.0, &well_quadrature(well, n_quad)?)
            }
            ModelSpec::EigenModes { omega_e, k_min, k_max, ref amplitudes, well, n_quad } => {
                let grid = UniformGrid::new(k_min, k_max, amplitudes.len())?;
                let values = amplitudes.iter().map(|&a| Complex64::new(a, 0.0)).collect();
                let m = WavefunctionModel::eigen_energy(omega_e, MomentumAmplitude::new(grid, values)?)?;
                m.normalized_on(0.0, &well_quadrature(well, n_quad)?)
            }
            ModelSpec::OffShell { k0, sigma_k, n_k, omega0, sigma_omega, n_omega } => {
                let hk = crate::wavepacket::GAUSSIAN_CUTOFF * sigma_k;
                let hw = crate::wavepacket::GAUSSIAN_CUTOFF * sigma_omega;
                let phi = MomentumAmplitude::gaussian(k0, sigma_k, UniformGrid::new(k0 - hk, k0 + hk, n_k)?)?;
                let eps = SpectralProfile::gaussian(
                    omega0,
                    sigma_omega,
                    UniformGrid::new(omega0 - hw, omega0 + hw, n_omega)?,
                )?;
                Ok(WavefunctionModel::off_shell(phi, eps))
            }
        }
    }

    pub fn well(&self) -> Option<[f64; 2]> {
        match *self {
            ModelSpec::EigenGaussian { well, .. } | ModelSpec::EigenModes { well, .. } => Some(well),
            _ => None,
        }
    }

    pub fn is_eigen(&self) -> bool {
        self.well().is_some()
    }

    /// Domain for ∫|ψ|² dx at fixed t that covers the packet (or the well).
    pub fn spatial_quadrature(&self, t: f64) -> Result<QuadratureSettings> {
        match *self {
            ModelSpec::Massless { sigma, shift, .. } => {
                let c = t + shift;
                QuadratureSettings::new(c - COVER / sigma, c + COVER / sigma, AUTO_QUAD_N)
            }
            ModelSpec::OffShell { sigma_k, .. } => {
                QuadratureSettings::symmetric(COVER_OFFSHELL / sigma_k, AUTO_QUAD_N)
            }
            ModelSpec::EigenGaussian { well, n_quad, .. } | ModelSpec::EigenModes { well, n_quad, .. } => {
                well_quadrature(well, n_quad)
            }
        }
    }

    /// Domain for a numeric normalization along the primed worldline x′ = 0
    /// (path) or the primed line t′ = 0 (slice). `None` where the mode is a
    /// closed form or undefined for the family.
    pub fn normalization_quadrature(
        &self,
        b: Boost,
        mode: NormalizationMode,
    ) -> Result<Option<QuadratureSettings>> {
        let (g, d) = (b.gamma(), b.doppler());
        let q = match (mode, self) {
            (NormalizationMode::MomentumScalar, _) => return Ok(None),
            // ψ depends on u = t − x + shift; u = D·t′ + shift on the path,
            // u = −D·x′ + shift on the slice.
            (NormalizationMode::PathNormalized, ModelSpec::Massless { sigma, shift, .. }) => {
                let c = -shift / d;
                QuadratureSettings::new(c - COVER / (sigma * d), c + COVER / (sigma * d), AUTO_QUAD_N)?
            }
            (NormalizationMode::SliceNormalized, ModelSpec::Massless { sigma, shift, .. }) => {
                let c = shift / d;
                QuadratureSettings::new(c - COVER / (sigma * d), c + COVER / (sigma * d), AUTO_QUAD_N)?
            }
            (NormalizationMode::PathNormalized, ModelSpec::OffShell { sigma_k, sigma_omega, .. })
            | (NormalizationMode::SliceNormalized, ModelSpec::OffShell { sigma_k, sigma_omega, .. }) => {
                let width = (1.0 / sigma_k).max(1.0 / sigma_omega);
                QuadratureSettings::symmetric(COVER_OFFSHELL * width / g, AUTO_QUAD_N)?
            }
            (NormalizationMode::PathNormalized, _) => return Ok(None),
            // the well [lo, hi] at rest appears on t′ = 0 as [lo/γ, hi/γ]
            (NormalizationMode::SliceNormalized, _) => {
                let [lo, hi] = self.well().expect("eigen specs carry a well");
                let n = match *self {
                    ModelSpec::EigenGaussian { n_quad, .. } | ModelSpec::EigenModes { n_quad, .. } => n_quad,
                    _ => unreachable!(),
                };
                QuadratureSettings::new(lo / g, hi / g, n)?
            }
        };
        Ok(Some(q))
    }

    /// Maps two unit-interval numbers to an event where the density is
    /// appreciable.
    pub fn probe_event(&self, u1: f64, u2: f64) -> Event {
        let (a, b) = (2.0 * u1 - 1.0, 2.0 * u2 - 1.0);
        match *self {
            ModelSpec::Massless { sigma, shift, .. } => {
                let t = 4.0 * a;
                Event::new(t, t + shift + 2.0 * b / sigma)
            }
            ModelSpec::OffShell { sigma_k, sigma_omega, .. } => {
                Event::new(1.5 * a / sigma_omega, 1.5 * b / sigma_k)
            }
            ModelSpec::EigenGaussian { sigma, center, .. } => {
                Event::new(10.0 * u1, center + 1.5 * b / sigma)
            }
            ModelSpec::EigenModes { well, .. } => {
                Event::new(10.0 * u1, well[0] + u2 * (well[1] - well[0]))
            }
        }
    }
}

fn well_quadrature(well: [f64; 2], n: usize) -> Result<QuadratureSettings> {
    QuadratureSettings::new(well[0], well[1], n)
}

/// Massless Gaussian, k0 = 5, σ = 1 on [0, 10] with 1024 nodes.
pub fn standard_massless() -> ModelSpec {
    ModelSpec::Massless { k0: 5.0, sigma: 1.0, k_min: 0.0, k_max: 10.0, n_k: 1024, shift: 0.0, norm_scale: 1.0 }
}

/// Two momentum modes with unequal weights in a well of length 16; three
/// beat periods fit the well.
pub fn standard_two_mode() -> ModelSpec {
    ModelSpec::EigenModes {
        omega_e: 2.0,
        k_min: 1.0,
        k_max: 1.0 + 3.0 * std::f64::consts::TAU / 16.0,
        amplitudes: vec![0.8, 0.6],
        well: [0.0, 16.0],
        n_quad: 4096,
    }
}

/// Gaussian eigen-energy packet centred in a well of length 16.
pub fn standard_eigen_gaussian() -> ModelSpec {
    ModelSpec::EigenGaussian {
        omega_e: 2.5,
        k0: 2.0,
        sigma: 0.5,
        n_k: 256,
        center: 8.0,
        well: [0.0, 16.0],
        n_quad: 4096,
    }
}

pub fn standard_offshell() -> ModelSpec {
    ModelSpec::OffShell { k0: 2.0, sigma_k: 0.5, n_k: 32, omega0: 3.0, sigma_omega: 0.5, n_omega: 32 }
}

/// 64 bins of width 0.25 over the well of [`standard_eigen_gaussian`], 65
/// instants, Δt_d = Δx so that q = 2 gives v_B = 0.5.
pub fn standard_tomography(seed: u64) -> TomographyConfig {
    TomographyConfig { samples: 20_000, rows: 64, dt_d: 0.25, dx: 0.25, length: 16.0, seed }
}
