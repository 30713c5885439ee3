use std::f64::consts::PI;

use qgate::gates::{gate_error, ideal_cnot_like, ideal_hadamard_like, ideal_phase};
use qgate::hamiltonians::{h1, QubitParams};
use qgate::operator::Operator;
use qgate::propagator::{adiabatic_oracle, evolve};
use qgate::schedule::{
    cnot_builder, cnot_u1_path, cnot_u3_path, hadamard_builder, hadamard_path, phase_builder, phase_gate_path,
    ParamPath, RampShape, ScheduleLimits, Segment, UnknownMap,
};

fn loop_builder(v: &[f64]) -> Operator {
    h1(QubitParams::new(v[0], v[1], v[2]))
}

#[test]
fn oracle_berry_phase_of_a_field_loop() {
    for (d, o) in [(1.0, 1.0), (0.5, 2.0), (-1.0, 0.7)] {
        let path = ParamPath::new(
            &["delta", "omega", "phi"],
            vec![Segment::ramp(50.0, vec![d, o, 0.0], vec![d, o, 2.0 * PI], RampShape::Linear)],
        )
        .unwrap();
        let (_, phases) = adiabatic_oracle(&path, loop_builder, 2000).unwrap();
        // half the solid angle enclosed by the field direction
        let cos = d / f64::hypot(d, o);
        let expected = PI * (1.0 - cos);
        let wrap = |x: f64| {
            let w = x.rem_euclid(2.0 * PI);
            w.min(2.0 * PI - w)
        };
        for g in &phases.geometric {
            assert!((wrap(*g) - wrap(expected)).abs() < 1e-4, "d={d} o={o}: {g} vs ±{expected}");
        }
        assert!(wrap(phases.geometric[0] + phases.geometric[1]) < 1e-4);
        let e = 0.5 * f64::hypot(d, o);
        assert!((phases.dynamical[0] - e * 50.0).abs() < 1e-9);
    }
}

#[test]
fn timing_constraints_hold_for_every_protocol() {
    for limits in [ScheduleLimits::default(), ScheduleLimits::tuned(300.0)] {
        for fmap in [UnknownMap::linear(), UnknownMap::random(7)] {
            let u1 = qgate::schedule::cnot_u1_path_mapped(&limits, &fmap).unwrap();
            let paths = [
                phase_gate_path(&limits, &fmap).unwrap(),
                hadamard_path(&limits, &fmap).unwrap(),
                cnot_u3_path(&u1).unwrap(),
                u1,
            ];
            for p in &paths {
                let checks = p.verify_timing();
                assert!(!checks.is_empty() || matches!(p.origin, qgate::schedule::PathOrigin::Phase { .. }));
                for c in checks {
                    assert!(c.passed, "{:?} {}: {:e}", p.origin, c.name, c.max_violation);
                }
            }
        }
    }
}

#[test]
fn protocols_reach_their_targets_when_slow() {
    let limits = ScheduleLimits::tuned(3000.0);
    let fmap = UnknownMap::linear();
    let u = evolve(&phase_gate_path(&limits, &fmap).unwrap(), phase_builder, 8.0).unwrap().unitary;
    assert!(gate_error(&ideal_phase(limits.theta), &u).unwrap() < 1e-6);
    let u = evolve(&hadamard_path(&limits, &fmap).unwrap(), hadamard_builder, 8.0).unwrap().unitary;
    assert!(gate_error(&ideal_hadamard_like(), &u).unwrap() < 1e-4);

    let u1 = cnot_u1_path(&limits).unwrap();
    let u3 = cnot_u3_path(&u1).unwrap();
    let a = evolve(&u1, cnot_builder, 8.0).unwrap().unitary;
    let c = evolve(&u3, cnot_builder, 8.0).unwrap().unitary;
    let seq = qgate::gates::compose_cnot(&a, &qgate::gates::not_gate(), &c).unwrap();
    assert!(gate_error(&ideal_cnot_like(), &seq.composed).unwrap() < 1e-6);
}

#[test]
fn unrefocused_u3_loses_the_conditional_phase() {
    let limits = ScheduleLimits::tuned(300.0);
    let u1 = cnot_u1_path(&limits).unwrap();
    let a = evolve(&u1, cnot_builder, 8.0).unwrap().unitary;
    let good = evolve(&cnot_u3_path(&u1).unwrap(), cnot_builder, 8.0).unwrap().unitary;
    let bad = evolve(&qgate::schedule::cnot_u3_path_unrefocused(&u1).unwrap(), cnot_builder, 8.0).unwrap().unitary;
    let not = qgate::gates::not_gate();
    let e_good = gate_error(&ideal_cnot_like(), &qgate::gates::compose_cnot(&a, &not, &good).unwrap().composed).unwrap();
    let e_bad = gate_error(&ideal_cnot_like(), &qgate::gates::compose_cnot(&a, &not, &bad).unwrap().composed).unwrap();
    assert!(e_bad > 100.0 * e_good, "{e_bad} vs {e_good}");
}

#[test]
fn paths_round_trip_through_json() {
    let limits = ScheduleLimits::tuned(300.0);
    let p = hadamard_path(&limits, &UnknownMap::random(3)).unwrap();
    let back = ParamPath::from_json(&p.to_json()).unwrap();
    assert_eq!(p, back);
    for t in [0.0, 17.3, 299.9, 450.0] {
        assert_eq!(p.sample(t).unwrap(), back.sample(t).unwrap());
    }
}
