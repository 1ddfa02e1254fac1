use boostwave::fixtures;
use boostwave::frame_transform::{transform, translate, NormalizationMode, Source};
use boostwave::verify::scalar_relation;
use boostwave::{Boost, Event, Wavefunction, WavefunctionModel};
use proptest::prelude::*;
use std::sync::OnceLock;

fn massless() -> &'static WavefunctionModel {
    static M: OnceLock<WavefunctionModel> = OnceLock::new();
    M.get_or_init(|| fixtures::standard_massless().build().unwrap())
}

fn two_mode() -> &'static WavefunctionModel {
    static M: OnceLock<WavefunctionModel> = OnceLock::new();
    M.get_or_init(|| fixtures::standard_two_mode().build().unwrap())
}

fn offshell() -> &'static WavefunctionModel {
    static M: OnceLock<WavefunctionModel> = OnceLock::new();
    M.get_or_init(|| fixtures::standard_offshell().build().unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn density_ratios_survive_boosts(v in -0.9f64..0.9, t1 in -3.0f64..3.0, t2 in -3.0f64..3.0, d1 in -1.5f64..1.5, d2 in -1.5f64..1.5) {
        let b = Boost::new(v).unwrap();
        for (model, e1, e2) in [
            (massless(), Event::new(t1, t1 + d1), Event::new(t2, t2 + d2)),
            (two_mode(), Event::new(t1, 8.0 + 3.0 * d1), Event::new(t2, 8.0 + 3.0 * d2)),
            (offshell(), Event::new(t1, d1), Event::new(t2, d2)),
        ] {
            let tr = transform(model.clone(), b, NormalizationMode::MomentumScalar, None).unwrap();
            let primed = tr.synthesis();
            let r = model.density(e1) / model.density(e2);
            let rp = primed.density(b.event(e1)) / primed.density(b.event(e2));
            prop_assert!((r - rp).abs() <= 1e-9 * r, "{:?}: {} vs {}", model.family(), r, rp);
        }
    }

    #[test]
    fn synthesis_agrees_with_inverse_map(v in -0.9f64..0.9, t in -3.0f64..3.0, d in -1.5f64..1.5) {
        let b = Boost::new(v).unwrap();
        for (model, e) in [(massless(), Event::new(t, t + d)), (two_mode(), Event::new(t, 8.0 + 3.0 * d))] {
            let tr = transform(model.clone(), b, NormalizationMode::MomentumScalar, None).unwrap();
            let ep = b.event(e);
            let (direct, synth) = (tr.evaluate(ep), tr.synthesis().evaluate(ep));
            prop_assert!((direct - synth).norm() <= 1e-9 * direct.norm().max(1e-6));
        }
    }

    #[test]
    fn translation_shifts_density(a in -5.0f64..5.0, t in -3.0f64..3.0, x in -5.0f64..5.0) {
        for model in [massless(), two_mode(), offshell()] {
            let moved = translate(model, a);
            let e = Event::new(t, x);
            prop_assert!((moved.density(e) - model.density(Event::new(t, x - a))).abs() <= 1e-10);
        }
    }

    #[test]
    fn composed_boosts_follow_velocity_addition(v1 in -0.8f64..0.8, v2 in -0.8f64..0.8, t in -2.0f64..2.0, d in -1.0f64..1.0) {
        let (b1, b2) = (Boost::new(v1).unwrap(), Boost::new(v2).unwrap());
        let b12 = Boost::new((v1 + v2) / (1.0 + v1 * v2)).unwrap();
        for model in [massless(), two_mode()] {
            let once = transform(model.clone(), b12, NormalizationMode::MomentumScalar, None).unwrap();
            let first = transform(model.clone(), b1, NormalizationMode::MomentumScalar, None).unwrap();
            let a1 = first.a();
            let twice = transform(Source::from(first), b2, NormalizationMode::MomentumScalar, None).unwrap();
            prop_assert!((once.a() - a1 * twice.a()).abs() <= 1e-12 * once.a());
            let centre = if model.family() == boostwave::Family::Massless { 0.0 } else { 8.0 };
            let e = b12.event(Event::new(t, t + d + centre));
            prop_assert!((once.evaluate(e) - twice.evaluate(e)).norm() <= 1e-9);
        }
    }
}

#[test]
fn scalar_relation_is_constant_for_many_velocities() {
    let spec = fixtures::standard_massless();
    let events: Vec<Event> = (0..60).map(|i| spec.probe_event(i as f64 / 60.0, ((i * 37) % 60) as f64 / 60.0)).collect();
    for v in [-0.9, -0.4, 0.2, 0.7, 0.9] {
        let b = Boost::new(v).unwrap();
        let tr = transform(massless().clone(), b, NormalizationMode::MomentumScalar, None).unwrap();
        let r = scalar_relation(&Source::from(massless().clone()), &tr, &events);
        assert!((r.mean - b.doppler()).abs() < 1e-9, "{v}");
        assert!(r.spread < 1e-9);
    }
}
