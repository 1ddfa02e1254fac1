//! Special-relativistic primitives in 1+1 dimensions, natural units (c = ħ = 1).
//!
//! Boosts act on events `(t, x)` and on energy-momentum vectors `(ω, k)` with
//! the same matrix. The inverse of a boost is the boost with negated velocity;
//! there is no separate inverse routine.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest admissible |v|. Keeps γ finite.
pub const MAX_SPEED: f64 = 1.0 - 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub t: f64,
    pub x: f64,
}

impl Event {
    pub const ORIGIN: Event = Event { t: 0.0, x: 0.0 };

    pub fn new(t: f64, x: f64) -> Self {
        Event { t, x }
    }

    /// Minkowski interval t² − x².
    pub fn interval(&self) -> f64 {
        self.t * self.t - self.x * self.x
    }
}

/// Energy-momentum vector. Off-shell values are allowed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FourMomentum {
    pub omega: f64,
    pub k: f64,
}

impl FourMomentum {
    pub fn new(omega: f64, k: f64) -> Self {
        FourMomentum { omega, k }
    }

    /// ω² − k², the squared mass.
    pub fn mass_shell(&self) -> f64 {
        self.omega * self.omega - self.k * self.k
    }
}

fn check_velocity(v: f64) -> Result<()> {
    if v.is_finite() && v.abs() < MAX_SPEED {
        Ok(())
    } else {
        Err(Error::Velocity(v))
    }
}

/// Lorentz factor 1/sqrt(1 − v²).
pub fn gamma(v: f64) -> Result<f64> {
    check_velocity(v)?;
    Ok(1.0 / (1.0 - v * v).sqrt())
}

/// Doppler factor sqrt((1 − v)/(1 + v)): the momentum rescaling of a
/// right-moving massless mode seen by an observer moving with velocity `v`.
pub fn doppler(v: f64) -> Result<f64> {
    check_velocity(v)?;
    Ok(((1.0 - v) / (1.0 + v)).sqrt())
}

/// A boost to the frame of an observer moving with velocity `v`.
///
/// Only the velocity is stored; γ is recomputed on demand so the two can
/// never disagree.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Boost {
    v: f64,
}

impl Boost {
    pub const IDENTITY: Boost = Boost { v: 0.0 };

    pub fn new(v: f64) -> Result<Self> {
        check_velocity(v)?;
        Ok(Boost { v })
    }

    pub fn v(&self) -> f64 {
        self.v
    }

    pub fn gamma(&self) -> f64 {
        1.0 / (1.0 - self.v * self.v).sqrt()
    }

    pub fn doppler(&self) -> f64 {
        ((1.0 - self.v) / (1.0 + self.v)).sqrt()
    }

    /// The boost with velocity −v, which undoes this one.
    pub fn negated(&self) -> Boost {
        Boost { v: -self.v }
    }

    pub fn event(&self, e: Event) -> Event {
        boost_event(*self, e)
    }

    pub fn momentum(&self, p: FourMomentum) -> FourMomentum {
        boost_momentum(*self, p)
    }
}

impl<'de> Deserialize<'de> for Boost {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            v: f64,
        }
        let raw = Raw::deserialize(d)?;
        Boost::new(raw.v).map_err(serde::de::Error::custom)
    }
}

/// (t′, x′) = (γ(t − vx), γ(x − vt)).
pub fn boost_event(b: Boost, e: Event) -> Event {
    let g = b.gamma();
    Event {
        t: g * (e.t - b.v * e.x),
        x: g * (e.x - b.v * e.t),
    }
}

/// (ω′, k′) = (γ(ω − vk), γ(k − vω)).
pub fn boost_momentum(b: Boost, p: FourMomentum) -> FourMomentum {
    let g = b.gamma();
    FourMomentum {
        omega: g * (p.omega - b.v * p.k),
        k: g * (p.k - b.v * p.omega),
    }
}

/// Plane-wave phase ωt − kx, a Lorentz scalar.
pub fn phase(p: FourMomentum, e: Event) -> f64 {
    p.omega * e.t - p.k * e.x
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn gamma_values() {
        assert_eq!(gamma(0.0).unwrap(), 1.0);
        assert_abs_diff_eq!(gamma(0.6).unwrap(), 1.25, epsilon = 1e-15);
        assert_abs_diff_eq!(gamma(0.5).unwrap(), 1.1547005383792517, epsilon = 1e-15);
        assert!(gamma(1.0).is_err());
        assert!(gamma(-1.5).is_err());
        assert!(gamma(f64::NAN).is_err());
        assert!(Boost::new(1.0 - 1e-13).is_err());
    }

    #[test]
    fn event_examples() {
        let e = Event::new(2.0, -3.0);
        assert_eq!(boost_event(Boost::IDENTITY, e), e);

        let b = Boost::new(0.5).unwrap();
        let p = b.event(Event::new(1.0, 0.0));
        assert_abs_diff_eq!(p.t, 1.1547005383792517, epsilon = 1e-12);
        assert_abs_diff_eq!(p.x, -0.5773502691896258, epsilon = 1e-12);

        let p = b.event(Event::new(1.0, 1.0));
        assert_abs_diff_eq!(p.t, 0.5773502691896258, epsilon = 1e-12);
        assert_abs_diff_eq!(p.x, 0.5773502691896258, epsilon = 1e-12);
        let back = b.negated().event(p);
        assert_abs_diff_eq!(back.t, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(back.x, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn momentum_examples() {
        let p = FourMomentum::new(3.0, 2.0);
        assert_eq!(boost_momentum(Boost::IDENTITY, p), p);

        let q = Boost::new(0.5).unwrap().momentum(FourMomentum::new(1.0, 1.0));
        assert_abs_diff_eq!(q.omega, 0.5773502691896258, epsilon = 1e-12);
        assert_abs_diff_eq!(q.k, 0.5773502691896258, epsilon = 1e-12);

        let q = Boost::new(0.6).unwrap().momentum(FourMomentum::new(1.0, 0.0));
        assert_abs_diff_eq!(q.omega, 1.25, epsilon = 1e-12);
        assert_abs_diff_eq!(q.k, -0.75, epsilon = 1e-12);
        assert_abs_diff_eq!(q.mass_shell(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn phase_examples() {
        assert_eq!(phase(FourMomentum::new(1.0, 1.0), Event::new(1.0, 1.0)), 0.0);
        assert_eq!(phase(FourMomentum::new(2.0, 0.5), Event::new(1.0, 2.0)), 1.0);
    }

    #[test]
    fn doppler_values() {
        assert_eq!(doppler(0.0).unwrap(), 1.0);
        assert_abs_diff_eq!(doppler(0.5).unwrap(), 0.5773502691896257, epsilon = 1e-12);
        assert_abs_diff_eq!(doppler(-0.5).unwrap(), 1.7320508075688772, epsilon = 1e-12);
        assert!(doppler(-1.0).is_err());
    }

    #[test]
    fn boost_deserialize_validates() {
        let b: Boost = serde_json::from_str(r#"{"v": 0.25}"#).unwrap();
        assert_eq!(b.v(), 0.25);
        assert!(serde_json::from_str::<Boost>(r#"{"v": 1.0}"#).is_err());
    }

    proptest! {
        #[test]
        fn round_trip(v in -0.9f64..0.9, t in -10.0f64..10.0, x in -10.0f64..10.0) {
            let b = Boost::new(v).unwrap();
            let e = Event::new(t, x);
            let back = b.negated().event(b.event(e));
            prop_assert!((back.t - t).abs() <= 1e-12 && (back.x - x).abs() <= 1e-12);
        }

        #[test]
        fn invariants_preserved(
            v in -0.9f64..0.9,
            t in -10.0f64..10.0, x in -10.0f64..10.0,
            w in -10.0f64..10.0, k in -10.0f64..10.0,
        ) {
            let b = Boost::new(v).unwrap();
            let e = Event::new(t, x);
            let p = FourMomentum::new(w, k);
            prop_assert!((b.event(e).interval() - e.interval()).abs() <= 1e-9);
            prop_assert!((b.momentum(p).mass_shell() - p.mass_shell()).abs() <= 1e-9);
            prop_assert!((phase(b.momentum(p), b.event(e)) - phase(p, e)).abs() <= 1e-9);
        }

        #[test]
        fn doppler_identities(v in -0.9f64..0.9) {
            let d = doppler(v).unwrap();
            prop_assert!((d * doppler(-v).unwrap() - 1.0).abs() <= 1e-12);
            prop_assert!((d - gamma(v).unwrap() * (1.0 - v)).abs() <= 1e-12);
        }
    }
}
