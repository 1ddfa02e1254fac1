//! Wave-functions seen from a boosted frame.
//!
//! The transformed amplitude at a primed event is a constant multiple of the
//! source amplitude at the corresponding unprimed event,
//! ψ′(Λe) = A ψ(e), so every ratio of probabilities is frame independent.
//! What remains is the constant A, for which three prescriptions are offered
//! in [`NormalizationMode`]. They do not agree in general and callers that
//! care should compute all of them.
//!
//! Independently of the inverse-mapping evaluation, [`ModeSum`] rebuilds the
//! primed wave-function by boosting every (ω, k) node of the source synthesis
//! and carrying φ′(k′) = φ(k) over, with the integration measure recomputed
//! from the boosted grid. The two routes must agree.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kinematics::{phase, Boost, Event, FourMomentum};
use crate::quadrature::{integrate_density, QuadratureSettings};
use crate::wavepacket::{Family, ModelKind, PhaseSign, Wavefunction, WavefunctionModel};

/// How the constant A in ψ′ = Aψ is fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormalizationMode {
    /// φ′(k′) = φ(k) with the boosted measure dk′; closed form.
    MomentumScalar,
    /// ∫|ψ′(t′, 0)|² dt′ = 1 along the primed observer's worldline.
    PathNormalized,
    /// ∫|ψ′(0, x′)|² dx′ = 1 along the primed simultaneity line t′ = 0.
    SliceNormalized,
}

impl NormalizationMode {
    pub const ALL: [NormalizationMode; 3] = [
        NormalizationMode::MomentumScalar,
        NormalizationMode::PathNormalized,
        NormalizationMode::SliceNormalized,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Normalization {
    pub a: f64,
    /// ∫|ψ_source|² along the selected primed line, absent for the closed form.
    pub integral: Option<f64>,
    pub boundary_warning: bool,
}

/// The thing being transformed: a plain model or an already boosted one.
#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    Model(WavefunctionModel),
    Transformed(Box<TransformedModel>),
}

impl From<WavefunctionModel> for Source {
    fn from(m: WavefunctionModel) -> Self {
        Source::Model(m)
    }
}

impl From<TransformedModel> for Source {
    fn from(t: TransformedModel) -> Self {
        Source::Transformed(Box::new(t))
    }
}

impl Source {
    /// Family of the underlying rest-frame model.
    pub fn family(&self) -> Family {
        match self {
            Source::Model(m) => m.family(),
            Source::Transformed(t) => t.family(),
        }
    }

    /// Slope dω/dk of the line the modes lie on, if they lie on one.
    /// Off-shell synthesis covers an area of the (ω, k) plane and has none.
    pub fn group_velocity(&self) -> Option<f64> {
        match self {
            Source::Model(m) => match m.family() {
                Family::Massless => Some(1.0),
                Family::EigenEnergy => Some(0.0),
                Family::OffShell => None,
            },
            Source::Transformed(t) => t.group_velocity(),
        }
    }

    pub fn synthesis(&self) -> ModeSum {
        match self {
            Source::Model(m) => ModeSum::from_model(m),
            Source::Transformed(t) => t.synthesis(),
        }
    }
}

impl Wavefunction for Source {
    fn evaluate(&self, e: Event) -> Complex64 {
        match self {
            Source::Model(m) => m.evaluate(e),
            Source::Transformed(t) => t.evaluate(e),
        }
    }
}

/// A wave-function as seen by an observer moving with `boost.v()` relative
/// to the source frame.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformedModel {
    source: Source,
    boost: Boost,
    a: f64,
    mode: NormalizationMode,
    boundary_warning: bool,
}

impl TransformedModel {
    pub fn source(&self) -> &Source {
        &self.source
    }

    pub fn boost(&self) -> Boost {
        self.boost
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn mode(&self) -> NormalizationMode {
        self.mode
    }

    pub fn family(&self) -> Family {
        self.source.family()
    }

    /// Off-shell transformation has no counterpart in the original analysis
    /// and is reported as an extension.
    pub fn is_extension(&self) -> bool {
        self.family() == Family::OffShell
    }

    pub fn boundary_warning(&self) -> bool {
        self.boundary_warning
    }

    /// Relativistic velocity addition of the source group velocity.
    pub fn group_velocity(&self) -> Option<f64> {
        let v = self.boost.v();
        self.source.group_velocity().map(|u| (u - v) / (1.0 - u * v))
    }

    /// Explicit primed-frame synthesis, scaled to this model's A.
    pub fn synthesis(&self) -> ModeSum {
        let boosted = self.source.synthesis().boosted(self.boost);
        match self.mode {
            NormalizationMode::MomentumScalar => boosted,
            _ => {
                let closed = momentum_scalar_factor(&self.source, self.boost);
                boosted.scaled(self.a / closed)
            }
        }
    }
}

impl Wavefunction for TransformedModel {
    fn evaluate(&self, e: Event) -> Complex64 {
        self.source.evaluate(self.boost.negated().event(e)) * self.a
    }
}

fn momentum_scalar_factor(source: &Source, b: Boost) -> f64 {
    match source.group_velocity() {
        Some(u) => b.gamma() * (1.0 - b.v() * u),
        None => 1.0,
    }
}

/// Computes A for boosting `source` by `b`.
///
/// `MomentumScalar` is closed form: γ(1 − v·u) for modes on a line of slope
/// u = dω/dk (the Doppler factor for right-moving massless packets, γ for
/// eigen-energy packets) and 1 for off-shell synthesis. The other two modes
/// integrate |ψ_source|² along a primed line with the midpoint rule over
/// `quad`, which parameterizes t′ (path) or x′ (slice).
pub fn compute_normalization(
    source: &Source,
    b: Boost,
    mode: NormalizationMode,
    quad: Option<&QuadratureSettings>,
) -> Result<Normalization> {
    let inverse = b.negated();
    let integral = match mode {
        NormalizationMode::MomentumScalar => {
            return Ok(Normalization {
                a: momentum_scalar_factor(source, b),
                integral: None,
                boundary_warning: false,
            })
        }
        NormalizationMode::PathNormalized => {
            if source.family() == Family::EigenEnergy {
                return Err(Error::Unsupported(
                    "path normalization of a static density diverges".into(),
                ));
            }
            let q = required(quad)?;
            integrate_density(q, |tp| source.density(inverse.event(Event::new(tp, 0.0))))
        }
        NormalizationMode::SliceNormalized => {
            let q = required(quad)?;
            integrate_density(q, |xp| source.density(inverse.event(Event::new(0.0, xp))))
        }
    };
    if !(integral.value > 0.0 && integral.value.is_finite()) {
        return Err(Error::Domain(format!(
            "normalization integral {} is not positive",
            integral.value
        )));
    }
    Ok(Normalization {
        a: 1.0 / integral.value.sqrt(),
        integral: Some(integral.value),
        boundary_warning: integral.boundary_warning,
    })
}

fn required(quad: Option<&QuadratureSettings>) -> Result<&QuadratureSettings> {
    let q = quad.ok_or_else(|| Error::Domain("numeric normalization needs quadrature settings".into()))?;
    q.validate()?;
    Ok(q)
}

/// Boosts any source with the requested normalization.
pub fn transform(
    source: impl Into<Source>,
    b: Boost,
    mode: NormalizationMode,
    quad: Option<&QuadratureSettings>,
) -> Result<TransformedModel> {
    let source = source.into();
    let norm = compute_normalization(&source, b, mode, quad)?;
    Ok(TransformedModel { source, boost: b, a: norm.a, mode, boundary_warning: norm.boundary_warning })
}

fn expect_family(model: &WavefunctionModel, family: Family) -> Result<()> {
    if model.family() == family {
        Ok(())
    } else {
        Err(Error::Unsupported(format!("expected a {family:?} model, got {:?}", model.family())))
    }
}

/// Boost of a right-moving massless packet. With `MomentumScalar`,
/// A = sqrt((1 − v)/(1 + v)).
pub fn transform_massless(
    model: &WavefunctionModel,
    b: Boost,
    mode: NormalizationMode,
    quad: Option<&QuadratureSettings>,
) -> Result<TransformedModel> {
    expect_family(model, Family::Massless)?;
    if model.amplitude().grid().min() < 0.0 {
        return Err(Error::Unsupported("left-moving modes present".into()));
    }
    transform(model.clone(), b, mode, quad)
}

/// Boost of an eigen-energy packet. The modes (ω_E, k) become
/// (γ(ω_E − vk), γ(k − vω_E)) and, with `MomentumScalar`, A = γ.
pub fn transform_eigen(
    model: &WavefunctionModel,
    b: Boost,
    mode: NormalizationMode,
    quad: Option<&QuadratureSettings>,
) -> Result<TransformedModel> {
    expect_family(model, Family::EigenEnergy)?;
    transform(model.clone(), b, mode, quad)
}

/// Boost of an off-shell packet, node by node with unit area Jacobian (A = 1).
/// This goes beyond the published rules and is flagged as an extension.
pub fn transform_offshell(model: &WavefunctionModel, b: Boost) -> Result<TransformedModel> {
    expect_family(model, Family::OffShell)?;
    transform(model.clone(), b, NormalizationMode::MomentumScalar, None)
}

/// Spatial translation by `a`: the result evaluated at (t, x) equals the
/// original at (t, x − a). Implemented as a phase on φ, so norms are kept.
pub fn translate(model: &WavefunctionModel, a: f64) -> WavefunctionModel {
    let s = model.phase_sign().value();
    let phi = model.amplitude().map_values(|k, z| z * Complex64::cis(s * k * a));
    model.with_amplitude(phi)
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct ModeNode {
    amplitude: Complex64,
    p: FourMomentum,
}

/// Integration measure of a mode synthesis, stored as the (ω, k) grid
/// displacements so that it can be boosted along with the nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Measure {
    /// Modes on a line; the weight is the k-extent of one step.
    Line { step: FourMomentum },
    /// Modes filling a lattice; the weight is the cell area.
    Cell { edge_k: FourMomentum, edge_omega: FourMomentum },
}

impl Measure {
    fn weight(&self) -> f64 {
        match self {
            Measure::Line { step } => step.k.abs(),
            Measure::Cell { edge_k: a, edge_omega: b } => (a.omega * b.k - a.k * b.omega).abs(),
        }
    }

    fn boosted(&self, b: Boost) -> Measure {
        match *self {
            Measure::Line { step } => Measure::Line { step: b.momentum(step) },
            Measure::Cell { edge_k, edge_omega } => Measure::Cell {
                edge_k: b.momentum(edge_k),
                edge_omega: b.momentum(edge_omega),
            },
        }
    }
}

/// ψ(e) = Σ_n a_n e^{i s (ω_n t − k_n x)} · weight, over explicit nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSum {
    nodes: Vec<ModeNode>,
    sign: PhaseSign,
    measure: Measure,
}

impl ModeSum {
    pub fn from_model(model: &WavefunctionModel) -> ModeSum {
        let sign = model.phase_sign();
        match model.kind() {
            ModelKind::Massless { phi } => {
                let dk = phi.grid().step();
                ModeSum {
                    nodes: phi
                        .nodes()
                        .map(|(k, a)| ModeNode { amplitude: a, p: FourMomentum::new(k.abs(), k) })
                        .collect(),
                    sign,
                    measure: Measure::Line { step: FourMomentum::new(dk, dk) },
                }
            }
            ModelKind::EigenEnergy { omega_e, phi } => ModeSum {
                nodes: phi
                    .nodes()
                    .map(|(k, a)| ModeNode { amplitude: a, p: FourMomentum::new(*omega_e, k) })
                    .collect(),
                sign,
                measure: Measure::Line { step: FourMomentum::new(0.0, phi.grid().step()) },
            },
            ModelKind::OffShell { phi, eps } => {
                let mut nodes = Vec::with_capacity(phi.grid().len() * eps.grid().len());
                for (k, a) in phi.nodes() {
                    for (w, e) in eps.nodes() {
                        nodes.push(ModeNode { amplitude: a * e, p: FourMomentum::new(w, k) });
                    }
                }
                ModeSum {
                    nodes,
                    sign,
                    measure: Measure::Cell {
                        edge_k: FourMomentum::new(0.0, phi.grid().step()),
                        edge_omega: FourMomentum::new(eps.grid().step(), 0.0),
                    },
                }
            }
        }
    }

    /// Boosts every node with φ′(k′) = φ(k) and recomputes the measure.
    pub fn boosted(&self, b: Boost) -> ModeSum {
        ModeSum {
            nodes: self
                .nodes
                .iter()
                .map(|n| ModeNode { amplitude: n.amplitude, p: b.momentum(n.p) })
                .collect(),
            sign: self.sign,
            measure: self.measure.boosted(b),
        }
    }

    pub fn scaled(&self, factor: f64) -> ModeSum {
        ModeSum {
            nodes: self
                .nodes
                .iter()
                .map(|n| ModeNode { amplitude: n.amplitude * factor, p: n.p })
                .collect(),
            sign: self.sign,
            measure: self.measure,
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Integration weight per node (Δk′ or Δk′Δω′).
    pub fn weight(&self) -> f64 {
        self.measure.weight()
    }

    pub fn momenta(&self) -> impl Iterator<Item = FourMomentum> + '_ {
        self.nodes.iter().map(|n| n.p)
    }
}

impl Wavefunction for ModeSum {
    fn evaluate(&self, e: Event) -> Complex64 {
        let s = self.sign.value();
        self.nodes
            .iter()
            .map(|n| n.amplitude * Complex64::cis(s * phase(n.p, e)))
            .sum::<Complex64>()
            * self.weight()
    }
}
