//! Lorentz-frame transformation of single-particle wave-functions in 1+1
//! dimensions, and a simulated position-tomography protocol that reconstructs
//! the boosted probability density from counts recorded in the rest frame.

pub mod error;
pub mod fixtures;
pub mod frame_transform;
pub mod output;
pub mod kinematics;
pub mod quadrature;
pub mod tomography;
pub mod verify;
pub mod wavepacket;

pub use error::{Error, Result};
pub use kinematics::{boost_event, boost_momentum, doppler, gamma, phase, Boost, Event, FourMomentum};
pub use quadrature::{Integral, QuadratureSettings};
pub use wavepacket::{
    detection_probability, spatial_norm, Family, MomentumAmplitude, PhaseSign, SpectralProfile,
    UniformGrid, Wavefunction, WavefunctionModel,
};
