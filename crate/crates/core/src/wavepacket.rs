//! Momentum-space amplitudes and the three wave-function families.
//!
//! Every wave-function is synthesized from a discretized amplitude φ(k) on a
//! uniform grid by a node Riemann sum:
//!
//! * massless on-shell: ψ(t, x) = Σ φ_j e^{i(|k_j| t − k_j x)} Δk
//! * eigen-energy:      ψ(t, x) = e^{−iω_E t} Σ φ_j e^{i k_j x} Δk
//! * off-shell:         ψ(t, x) = Σ_j Σ_l φ_j ε_l e^{i k_j x} e^{−iω_l t} Δk Δω
//!
//! The sign of the exponent follows each family's own convention and is kept
//! in [`PhaseSign`]. Densities do not depend on it.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kinematics::Event;
use crate::quadrature::{integrate_density, Integral, QuadratureSettings};

/// Half-width, in standard deviations, beyond which Gaussian amplitudes are zeroed.
pub const GAUSSIAN_CUTOFF: f64 = 6.0;

/// Uniform grid of `n ≥ 2` nodes spanning `[min, max]` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UniformGrid {
    min: f64,
    max: f64,
    n: usize,
}

impl UniformGrid {
    pub fn new(min: f64, max: f64, n: usize) -> Result<Self> {
        if !(min.is_finite() && max.is_finite()) || min >= max {
            return Err(Error::Grid(format!("need finite min < max, got [{min}, {max}]")));
        }
        if n < 2 {
            return Err(Error::Grid(format!("need at least two nodes, got {n}")));
        }
        Ok(UniformGrid { min, max, n })
    }

    pub fn min(&self) -> f64 {
        self.min
    }

    pub fn max(&self) -> f64 {
        self.max
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn step(&self) -> f64 {
        (self.max - self.min) / (self.n - 1) as f64
    }

    pub fn node(&self, j: usize) -> f64 {
        self.min + j as f64 * self.step()
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |j| self.node(j))
    }
}

/// φ(k) sampled on a momentum grid.
///
/// Constructors that normalize enforce 2π Σ|φ_j|² Δk = 1 exactly up to
/// rounding. [`MomentumAmplitude::unnormalized`] and
/// [`MomentumAmplitude::scaled`] skip that step.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentumAmplitude {
    grid: UniformGrid,
    values: Vec<Complex64>,
    truncated: bool,
}

impl MomentumAmplitude {
    pub fn new(grid: UniformGrid, values: Vec<Complex64>) -> Result<Self> {
        let raw = Self::unnormalized(grid, values)?;
        let norm = raw.discrete_norm();
        if norm <= 0.0 {
            return Err(Error::Domain("amplitude is identically zero".into()));
        }
        Ok(raw.scaled(1.0 / norm.sqrt()))
    }

    pub fn unnormalized(grid: UniformGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Grid(format!(
                "{} values for a grid of {} nodes",
                values.len(),
                grid.len()
            )));
        }
        if values.iter().any(|z| !z.is_finite()) {
            return Err(Error::Domain("amplitude contains non-finite values".into()));
        }
        Ok(MomentumAmplitude { grid, values, truncated: false })
    }

    /// Normalized Gaussian φ_j ∝ exp(−(k_j − k0)²/(2σ²)), zero beyond 6σ.
    ///
    /// [`MomentumAmplitude::truncated`] reports whether the grid fails to
    /// cover `[k0 − 6σ, k0 + 6σ]`.
    pub fn gaussian(k0: f64, sigma: f64, grid: UniformGrid) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) || !k0.is_finite() {
            return Err(Error::Domain(format!("gaussian needs sigma > 0, got {sigma}")));
        }
        let values = grid
            .nodes()
            .map(|k| {
                let z = (k - k0) / sigma;
                if z.abs() > GAUSSIAN_CUTOFF {
                    Complex64::new(0.0, 0.0)
                } else {
                    Complex64::new((-0.5 * z * z).exp(), 0.0)
                }
            })
            .collect();
        let mut amp = Self::new(grid, values)?;
        amp.truncated = grid.min() > k0 - GAUSSIAN_CUTOFF * sigma
            || grid.max() < k0 + GAUSSIAN_CUTOFF * sigma;
        Ok(amp)
    }

    pub fn grid(&self) -> &UniformGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn truncated(&self) -> bool {
        self.truncated
    }

    /// 2π Σ|φ_j|² Δk.
    pub fn discrete_norm(&self) -> f64 {
        2.0 * PI * self.values.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.grid.step()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        self.map_values(|_, z| z * factor)
    }

    pub(crate) fn map_values(&self, f: impl Fn(f64, Complex64) -> Complex64) -> Self {
        let values = self
            .grid
            .nodes()
            .zip(&self.values)
            .map(|(k, &z)| f(k, z))
            .collect();
        MomentumAmplitude { grid: self.grid, values, truncated: self.truncated }
    }

    pub(crate) fn nodes(&self) -> impl Iterator<Item = (f64, Complex64)> + '_ {
        self.grid.nodes().zip(self.values.iter().copied())
    }
}

/// ε(ω) sampled on an energy grid. No normalization is imposed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralProfile {
    grid: UniformGrid,
    values: Vec<Complex64>,
}

impl SpectralProfile {
    pub fn new(grid: UniformGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Grid(format!(
                "{} values for a grid of {} nodes",
                values.len(),
                grid.len()
            )));
        }
        if values.iter().any(|z| !z.is_finite()) {
            return Err(Error::Domain("spectral profile contains non-finite values".into()));
        }
        Ok(SpectralProfile { grid, values })
    }

    /// Unit-peak Gaussian in ω.
    pub fn gaussian(omega0: f64, sigma: f64, grid: UniformGrid) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::Domain(format!("gaussian needs sigma > 0, got {sigma}")));
        }
        let values = grid
            .nodes()
            .map(|w| {
                let z = (w - omega0) / sigma;
                Complex64::new((-0.5 * z * z).exp(), 0.0)
            })
            .collect();
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &UniformGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub(crate) fn nodes(&self) -> impl Iterator<Item = (f64, Complex64)> + '_ {
        self.grid.nodes().zip(self.values.iter().copied())
    }
}

/// Sign `s` in the plane-wave factor e^{i s (ωt − kx)}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PhaseSign {
    Plus,
    Minus,
}

impl PhaseSign {
    pub fn value(self) -> f64 {
        match self {
            PhaseSign::Plus => 1.0,
            PhaseSign::Minus => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Massless,
    EigenEnergy,
    OffShell,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum ModelKind {
    Massless { phi: MomentumAmplitude },
    EigenEnergy { omega_e: f64, phi: MomentumAmplitude },
    OffShell { phi: MomentumAmplitude, eps: SpectralProfile },
}

/// Anything with a complex amplitude at every space-time event.
pub trait Wavefunction {
    fn evaluate(&self, e: Event) -> Complex64;

    /// Born-rule density |ψ|².
    fn density(&self, e: Event) -> f64 {
        self.evaluate(e).norm_sqr()
    }
}

impl<W: Wavefunction + ?Sized> Wavefunction for &W {
    fn evaluate(&self, e: Event) -> Complex64 {
        (**self).evaluate(e)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WavefunctionModel {
    kind: ModelKind,
    phase_sign: PhaseSign,
}

impl WavefunctionModel {
    /// Free massless particle. Only right-moving modes (k ≥ 0) are accepted.
    pub fn massless(phi: MomentumAmplitude) -> Result<Self> {
        if phi.grid().min() < 0.0 {
            return Err(Error::Unsupported(format!(
                "massless packets must be right-moving, grid starts at k = {}",
                phi.grid().min()
            )));
        }
        Ok(WavefunctionModel { kind: ModelKind::Massless { phi }, phase_sign: PhaseSign::Plus })
    }

    pub fn eigen_energy(omega_e: f64, phi: MomentumAmplitude) -> Result<Self> {
        if !omega_e.is_finite() {
            return Err(Error::Domain("eigen-energy must be finite".into()));
        }
        Ok(WavefunctionModel {
            kind: ModelKind::EigenEnergy { omega_e, phi },
            phase_sign: PhaseSign::Minus,
        })
    }

    pub fn off_shell(phi: MomentumAmplitude, eps: SpectralProfile) -> Self {
        WavefunctionModel { kind: ModelKind::OffShell { phi, eps }, phase_sign: PhaseSign::Minus }
    }

    /// Overrides the family's default phase convention (conjugates ψ).
    pub fn with_phase_sign(mut self, sign: PhaseSign) -> Self {
        self.phase_sign = sign;
        self
    }

    pub fn kind(&self) -> &ModelKind {
        &self.kind
    }

    pub fn phase_sign(&self) -> PhaseSign {
        self.phase_sign
    }

    pub fn family(&self) -> Family {
        match self.kind {
            ModelKind::Massless { .. } => Family::Massless,
            ModelKind::EigenEnergy { .. } => Family::EigenEnergy,
            ModelKind::OffShell { .. } => Family::OffShell,
        }
    }

    pub fn amplitude(&self) -> &MomentumAmplitude {
        match &self.kind {
            ModelKind::Massless { phi }
            | ModelKind::EigenEnergy { phi, .. }
            | ModelKind::OffShell { phi, .. } => phi,
        }
    }

    /// Same model with φ replaced.
    pub fn with_amplitude(&self, phi: MomentumAmplitude) -> Self {
        let kind = match &self.kind {
            ModelKind::Massless { .. } => ModelKind::Massless { phi },
            ModelKind::EigenEnergy { omega_e, .. } => {
                ModelKind::EigenEnergy { omega_e: *omega_e, phi }
            }
            ModelKind::OffShell { eps, .. } => ModelKind::OffShell { phi, eps: eps.clone() },
        };
        WavefunctionModel { kind, phase_sign: self.phase_sign }
    }

    /// Rescales φ so that ∫|ψ(t, x)|² dx over `domain` equals one.
    pub fn normalized_on(&self, t: f64, domain: &QuadratureSettings) -> Result<Self> {
        domain.validate()?;
        let mass = spatial_norm(self, t, domain).value;
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::Domain(format!("spatial mass {mass} cannot be normalized")));
        }
        Ok(self.with_amplitude(self.amplitude().scaled(1.0 / mass.sqrt())))
    }

    /// ∫|ψ(t, x)|² dt along a fixed position. Only defined for massless
    /// packets, whose shape does not change during propagation.
    pub fn temporal_norm(&self, x: f64, domain: &QuadratureSettings) -> Result<Integral> {
        if self.family() != Family::Massless {
            return Err(Error::Unsupported(
                "temporal normalization is only defined for non-dispersive massless packets".into(),
            ));
        }
        domain.validate()?;
        Ok(integrate_density(domain, |t| self.density(Event::new(t, x))))
    }
}

impl Wavefunction for WavefunctionModel {
    fn evaluate(&self, e: Event) -> Complex64 {
        let s = self.phase_sign.value();
        match &self.kind {
            ModelKind::Massless { phi } => {
                let dk = phi.grid().step();
                phi.nodes()
                    .map(|(k, a)| a * Complex64::cis(s * (k.abs() * e.t - k * e.x)))
                    .sum::<Complex64>()
                    * dk
            }
            ModelKind::EigenEnergy { omega_e, phi } => {
                let dk = phi.grid().step();
                let spatial = phi
                    .nodes()
                    .map(|(k, a)| a * Complex64::cis(-s * k * e.x))
                    .sum::<Complex64>()
                    * dk;
                Complex64::cis(s * omega_e * e.t) * spatial
            }
            // The double sum factorizes into a temporal and a spatial sum.
            ModelKind::OffShell { phi, eps } => {
                let dk = phi.grid().step();
                let dw = eps.grid().step();
                let spatial = phi
                    .nodes()
                    .map(|(k, a)| a * Complex64::cis(-s * k * e.x))
                    .sum::<Complex64>()
                    * dk;
                let temporal = eps
                    .nodes()
                    .map(|(w, a)| a * Complex64::cis(s * w * e.t))
                    .sum::<Complex64>()
                    * dw;
                spatial * temporal
            }
        }
    }
}

/// Midpoint value of ∫|ψ(t, x)|² dx over `domain`.
pub fn spatial_norm<W: Wavefunction + ?Sized>(
    w: &W,
    t: f64,
    domain: &QuadratureSettings,
) -> Integral {
    integrate_density(domain, |x| w.density(Event::new(t, x)))
}

/// Probability |ψ(t, 0)|² Δt of a detection at the origin during `[t, t + dt)`.
pub fn detection_probability<W: Wavefunction + ?Sized>(w: &W, t: f64, dt: f64) -> f64 {
    w.density(Event::new(t, 0.0)) * dt
}

#[cfg(test)]
mod tests {
    use super::*;

    fn standard_massless(n: usize) -> WavefunctionModel {
        let grid = UniformGrid::new(0.0, 10.0, n).unwrap();
        WavefunctionModel::massless(MomentumAmplitude::gaussian(5.0, 1.0, grid).unwrap()).unwrap()
    }

    fn gaussian_eigen() -> WavefunctionModel {
        let grid = UniformGrid::new(-1.0, 5.0, 256).unwrap();
        WavefunctionModel::eigen_energy(2.5, MomentumAmplitude::gaussian(2.0, 0.5, grid).unwrap())
            .unwrap()
    }

    #[test]
    fn grid_validation() {
        assert!(UniformGrid::new(1.0, 1.0, 4).is_err());
        assert!(UniformGrid::new(0.0, 1.0, 1).is_err());
        let g = UniformGrid::new(0.0, 1.0, 5).unwrap();
        assert_eq!(g.step(), 0.25);
        assert_eq!(g.node(4), 1.0);
    }

    #[test]
    fn gaussian_packet_is_normalized_and_peaked() {
        let grid = UniformGrid::new(0.0, 10.0, 1024).unwrap();
        let phi = MomentumAmplitude::gaussian(5.0, 1.0, grid).unwrap();
        assert!((phi.discrete_norm() - 1.0).abs() < 1e-12);
        let (imax, _) = phi
            .values()
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm().partial_cmp(&b.1.norm()).unwrap())
            .unwrap();
        // k = 5 falls midway between two nodes of this grid
        assert!((grid.node(imax) - 5.0).abs() <= 0.5 * grid.step() + 1e-12);
        // [0, 10] does not reach k0 ± 6σ
        assert!(phi.truncated());
        let wide = UniformGrid::new(-2.0, 12.0, 64).unwrap();
        assert!(!MomentumAmplitude::gaussian(5.0, 1.0, wide).unwrap().truncated());
    }

    #[test]
    fn gaussian_rejects_nonpositive_sigma() {
        let grid = UniformGrid::new(0.0, 10.0, 16).unwrap();
        assert!(MomentumAmplitude::gaussian(5.0, 0.0, grid).is_err());
        assert!(MomentumAmplitude::gaussian(5.0, -1.0, grid).is_err());
    }

    #[test]
    fn massless_rejects_left_movers() {
        let grid = UniformGrid::new(-1.0, 10.0, 64).unwrap();
        let phi = MomentumAmplitude::gaussian(5.0, 1.0, grid).unwrap();
        assert!(matches!(WavefunctionModel::massless(phi), Err(Error::Unsupported(_))));
    }

    #[test]
    fn massless_at_origin_is_real_positive() {
        let m = standard_massless(256);
        let psi = m.evaluate(Event::ORIGIN);
        let expected: f64 = m.amplitude().values().iter().map(|z| z.re).sum::<f64>()
            * m.amplitude().grid().step();
        assert!(psi.re > 0.0);
        assert!(psi.im.abs() < 1e-15);
        assert!((psi.re - expected).abs() < 1e-14);
    }

    #[test]
    fn massless_is_rigid() {
        let m = standard_massless(1024);
        for &t in &[0.5, 1.0, 2.0] {
            for &x in &[-1.0, 0.0, 0.3, 1.0, 2.5] {
                let a = m.evaluate(Event::new(t, x)).norm();
                let b = m.evaluate(Event::new(0.0, x - t)).norm();
                assert!((a - b).abs() < 1e-9, "t={t} x={x}");
            }
        }
    }

    #[test]
    fn eigen_density_is_static() {
        let m = gaussian_eigen();
        for &x in &[-1.0, 0.0, 0.7, 2.0] {
            let d0 = m.density(Event::new(0.0, x));
            for &t in &[0.1, 3.0, -17.0, 250.0] {
                assert!((m.density(Event::new(t, x)) - d0).abs() <= 1e-12 * d0.max(1e-300));
            }
        }
    }

    #[test]
    fn massless_density_integrates_to_one() {
        let m = standard_massless(4096);
        let q = QuadratureSettings::symmetric(20.0, 4096).unwrap();
        let r = spatial_norm(&m, 0.0, &q);
        assert!((r.value - 1.0).abs() < 1e-6, "{}", r.value);
        assert!(!r.boundary_warning);
    }

    #[test]
    fn spatial_norm_rigid_in_time() {
        let m = standard_massless(1024);
        let q = QuadratureSettings::symmetric(20.0, 8192).unwrap();
        let n0 = spatial_norm(&m, 0.0, &q).value;
        let n3 = spatial_norm(&m, 3.0, &q).value;
        assert!((n0 - 1.0).abs() < 1e-6);
        assert!((n0 - n3).abs() < 1e-9);
    }

    #[test]
    fn grid_refinement_converges() {
        let q = QuadratureSettings::symmetric(20.0, 8192).unwrap();
        let a = spatial_norm(&standard_massless(1024), 0.0, &q).value;
        let b = spatial_norm(&standard_massless(2048), 0.0, &q).value;
        assert!((a - b).abs() < 1e-8);

        let coarse = standard_massless(1024);
        let fine = standard_massless(2047);
        for i in 0..10 {
            let e = Event::new(0.3 * i as f64 - 1.0, 0.2 * i as f64 - 0.5);
            let (c, f) = (coarse.evaluate(e), fine.evaluate(e));
            assert!((c - f).norm() < 1e-6 * f.norm(), "event {e:?}");
        }
    }

    #[test]
    fn temporal_norm_massless_only() {
        let m = standard_massless(1024);
        let q = QuadratureSettings::symmetric(20.0, 8192).unwrap();
        let at0 = m.temporal_norm(0.0, &q).unwrap().value;
        let at5 = m.temporal_norm(5.0, &QuadratureSettings::new(-15.0, 25.0, 8192).unwrap());
        assert!((at0 - 1.0).abs() < 1e-6);
        assert!((at5.unwrap().value - at0).abs() < 1e-9);
        assert!(gaussian_eigen().temporal_norm(0.0, &q).is_err());
    }

    #[test]
    fn detection_probability_sums_to_one() {
        let m = standard_massless(1024);
        assert_eq!(detection_probability(&m, 0.3, 0.0), 0.0);
        let p1 = detection_probability(&m, 0.3, 0.01);
        assert_eq!(detection_probability(&m, 0.3, 0.02), 2.0 * p1);

        let dt = 40.0 / 8192.0;
        let total: f64 = (0..8192)
            .map(|i| detection_probability(&m, -20.0 + (i as f64 + 0.5) * dt, dt))
            .sum();
        assert!((total - 1.0).abs() < 1e-5);
    }

    #[test]
    fn narrow_domain_is_flagged() {
        let m = standard_massless(1024);
        let r = spatial_norm(&m, 0.0, &QuadratureSettings::symmetric(2.0, 2048).unwrap());
        // |ψ|² ∝ exp(−x²) so the mass inside ±2 is erf(2)
        assert!((r.value - 0.9953222650189527).abs() < 1e-6);
        assert!(r.boundary_warning);
    }

    #[test]
    fn normalized_on_interval() {
        let m = gaussian_eigen();
        let q = QuadratureSettings::new(-8.0, 8.0, 4096).unwrap();
        let n = m.normalized_on(0.0, &q).unwrap();
        for &t in &[0.0, 1.0, 7.5] {
            assert!((spatial_norm(&n, t, &q).value - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn phase_sign_conjugates() {
        let m = standard_massless(128);
        let c = m.clone().with_phase_sign(PhaseSign::Minus);
        let e = Event::new(0.4, -0.2);
        assert!((m.evaluate(e).conj() - c.evaluate(e)).norm() < 1e-15);
    }
}
