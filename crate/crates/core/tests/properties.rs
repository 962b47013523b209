//! Invariants as property tests.

use proptest::prelude::*;

use solab::e2::{
    classify_cauchy, residual_samples, shoot_unstable, Classification, E2State, EpsilonProfile, ShootSettings,
};
use solab::frame::check_point;
use solab::frame::spec::FrameSpec;
use solab::heisenberg::special::{derivative_relation_residual, recursion_residual};
use solab::heisenberg::{big_f, sec_dim4, HeisenbergSoliton};
use solab::numerics::{logspace, IvpSolver, Quadrature};
use solab::steady::SteadyII;

fn eps_strategy() -> impl Strategy<Value = EpsilonProfile> {
    prop_oneof![
        Just(EpsilonProfile::Zero),
        Just(EpsilonProfile::QuadraticBump),
        (0.0..2.0f64).prop_map(|beta| EpsilonProfile::Poly { beta }),
    ]
}

const H: f64 = std::f64::consts::FRAC_1_SQRT_2;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn f_recursion_and_derivative_relation(n in 1u32..=5, lg in -6.0..3.0f64) {
        let phi = 10f64.powf(lg);
        prop_assert!(recursion_residual(n, phi).unwrap() < 1e-10);
        prop_assert!(derivative_relation_residual(n, phi).unwrap() < 1e-10);
        prop_assert!(big_f(n, phi).unwrap() > 0.0);
    }

    #[test]
    fn heisenberg_frame_is_a_kahler_soliton(n in 1u32..=3, lg in -2.0..2.0f64) {
        let phi = 10f64.powf(lg);
        let fs = HeisenbergSoliton::new(n).unwrap().frame();
        let c = check_point(&fs.point(phi).unwrap());
        prop_assert!(c.kahler.max() < 1e-10, "{:?}", c.kahler);
        prop_assert!(c.integrability < 1e-10);
        prop_assert!(c.jacobi < 1e-10);
        prop_assert!(c.curvature.ricci_disagreement < 1e-8);
        let s = c.soliton.unwrap();
        prop_assert!(s.skew + s.killing_max() < 1e-8, "{s:?}");
        prop_assert!(s.identity3 < 1e-8);
    }

    #[test]
    fn heisenberg_curvature_pinching(n in 1u32..=3, lg in -3.0..3.0f64) {
        let phi = 10f64.powf(lg);
        let m = (n + 1) as f64;
        let c = HeisenbergSoliton::new(n).unwrap().curvatures(phi).unwrap();
        for r in c.ricci_xy.iter().chain(std::iter::once(&c.ricci_kt)) {
            prop_assert!(*r > -1.0 && *r < 0.0, "Ric = {r}");
        }
        prop_assert!(c.scalar > -2.0 * m && c.scalar < 0.0);
        for s in c.sec_xy.iter().chain(&c.sec_kx).chain(std::iter::once(&c.sec_kt)) {
            prop_assert!(*s < 0.0);
        }
    }

    #[test]
    fn dim4_sectional_curvature_bounds(lg in -3.0..3.0f64, a1 in -H..H, b1 in -H..H) {
        let phi = 10f64.powf(lg);
        let c = HeisenbergSoliton::new(1).unwrap().curvatures(phi).unwrap();
        let s = sec_dim4(c.sec_kt, c.sec_xy[0], c.sec_kx[0], a1, b1);
        prop_assert!(s > -2.0 / 3.0 && s < 0.0, "Sec = {s}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn q_coordinate_round_trip(n in 1u32..=3, lg in -1.3..1.3f64) {
        let phi = 10f64.powf(lg);
        let s = HeisenbergSoliton::new(n).unwrap();
        let q = Quadrature { abs_tol: 1e-12, rel_tol: 1e-10, max_subdivisions: 4000 };
        let inv = |x: f64| 1.0 / big_f(n, x).unwrap();
        let qv = if phi == 1.0 {
            0.0
        } else if phi > 1.0 {
            q.integrate(inv, 1.0, phi).unwrap().value
        } else {
            -q.integrate(inv, phi, 1.0).unwrap().value
        };
        let back = s.phi_of_q(1.0, 0.0, qv).unwrap();
        prop_assert!((back - phi).abs() <= 1e-4 * phi, "{back} vs {phi}");
    }

    #[test]
    fn steady_closed_form_length_and_ode(k in 0.2..3.0f64, beta in 0.2..3.0f64, k1 in 0.2..3.0f64, k2 in -3.0..-0.2f64, sign in prop::bool::ANY) {
        // kk₁ > 0 and k₂ < 0: the tanh⁻¹ form is real.
        let (k, k1) = if sign { (k, k1) } else { (-k, -k1) };
        let p = SteadyII::new(k, beta, k1, k2);
        let i = p.interval();
        let w = 1.0 / k1.abs();
        let (t0, t1) = match (i.lo, i.hi) {
            (_, Some(h)) => (h - 4.0 * w, h - 0.02 * w),
            (Some(l), None) => (l + 0.02 * w, l + 4.0 * w),
            (None, None) => unreachable!("k₂ < 0 always leaves a finite end"),
        };
        let rec = p.normal_geodesic_length(t0, t1).unwrap();
        prop_assert!((rec.closed_form - rec.quadrature).abs() < 1e-6, "{rec:?}");
        for t in [t0, 0.5 * (t0 + t1), t1] {
            let [c, c1, c2] = p.c_derivs(t).unwrap();
            let scale = (k * beta * c1).abs().max((c1 * c1 / c.powi(3)).abs()).max((c2 / (c * c)).abs()).max(1.0);
            prop_assert!(p.ode_residual(t).unwrap().abs() / scale < 1e-12);
        }
    }

    #[test]
    fn steady_verdict_is_consistent(k in -3.0..3.0f64, beta in 0.2..3.0f64, k1 in -3.0..3.0f64, k2 in -3.0..3.0f64) {
        prop_assume!(k.abs() > 0.1 && k1.abs() > 0.1 && k2.abs() > 0.1);
        let p = SteadyII::new(k, beta, k1, k2);
        prop_assume!(p.validate().is_ok());
        let v = p.incompleteness_verdict().unwrap();
        prop_assert!(v.consistent, "{v:?}");
        // k₂ ≠ 0 always leaves one end at finite distance.
        prop_assert!(v.incomplete(), "{v:?}");
    }

    #[test]
    fn steady_frame_is_a_steady_skew_soliton(beta in 0.3..3.0f64, k2 in -2.0..-0.2f64, back in 0.05..3.0f64) {
        let p = SteadyII::new(1.0, beta, 1.0, k2);
        let t = p.interval().hi.unwrap() - back;
        let c = check_point(&p.frame().point(t).unwrap());
        let s = c.soliton.unwrap();
        prop_assert!(s.skew < 1e-8 && s.identity3 < 1e-8, "{s:?}");
        prop_assert!(c.curvature.ricci_disagreement < 1e-8);
        prop_assert!(c.kahler.max() < 1e-10);
    }

    #[test]
    fn coefficient_documents_have_consistent_derivatives(l in prop::collection::vec(-2.0..2.0f64, 1..4), nn in prop::collection::vec(-2.0..2.0f64, 1..4), x in -1.0..1.0f64) {
        let doc = format!(
            r#"{{"n":1,"coefficients":{{"L":{l:?},"blocks":[{{"N":{nn:?},"A":[0.5,1],"H":[0,0,1]}}],"df":[1,2]}}}}"#
        );
        let fs = FrameSpec::from_json(&doc).unwrap().build().unwrap().frame;
        prop_assert!(fs.derivative_consistency(x).unwrap() < 1e-6);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn unstable_curve_invariants(q in 0.3..3.0f64, eps in eps_strategy()) {
        let t = shoot_unstable(q, &eps, &ShootSettings::default()).unwrap();
        prop_assert_eq!(t.classification, Classification::Case3UnstableCurve);
        prop_assert!(t.lemma_max() < 1e-7, "lemma {}", t.lemma_max());
        let s = &t.trajectory.samples;
        let q2 = q * q;
        for w in s.windows(2) {
            let (y0, y1) = (&w[0].state, &w[1].state);
            // ab, bc, ac and b strictly increase. Near the equilibrium ac moves
            // by about q²b² and is flat in f64 for tiny b, so strictness starts at 1e−4.
            prop_assert!(y1[0] * y1[1] > y0[0] * y0[1]);
            prop_assert!(y1[1] * y1[2] > y0[1] * y0[2]);
            prop_assert!(y1[1] > y0[1]);
            let (ac0, ac1) = (y0[0] * y0[2], y1[0] * y1[2]);
            prop_assert!(ac1 >= ac0, "ac fell at b = {}", y0[1]);
            if y0[1] >= 1e-4 {
                prop_assert!(ac1 > ac0, "ac flat at b = {}", y0[1]);
            }
        }
        for x in s {
            let (a, b, c) = (x.state[0], x.state[1], x.state[2]);
            let gap = c * c - a * a;
            prop_assert!(gap >= -1e-8 * a * a, "c²−a² = {gap}");
            prop_assert!(gap <= 2.0 * a * a * (b * b + eps.eval(b)) + 1e-8 * a * a);
            // The Grönwall bound in the form that holds for every b, and the
            // q²√(2+b²) form where it follows from it.
            prop_assert!(a * c >= q2 * (2.0 + b * b) / 2.0 * (1.0 - 1e-10), "ac = {} at b = {b}", a * c);
            if b >= 2f64.sqrt() {
                prop_assert!(a * c >= q2 * (2.0 + b * b).sqrt());
            }
        }
        for r in residual_samples(&t, 20).unwrap() {
            prop_assert!(r.skew < 1e-7 && r.identity3 < 1e-8, "{r:?}");
        }
    }

    #[test]
    fn shooting_offset_only_shifts_time(q in 0.3..3.0f64, eps in eps_strategy()) {
        let s1 = ShootSettings { b_max: 200.0, ..Default::default() };
        let s2 = ShootSettings { delta: 1e-9, ..s1 };
        let t1 = shoot_unstable(q, &eps, &s1).unwrap();
        let t2 = shoot_unstable(q, &eps, &s2).unwrap();
        for b in logspace(0.1, 100.0, 13) {
            let (_, y1) = t1.at_b(b).unwrap();
            let (_, y2) = t2.at_b(b).unwrap();
            let da = ((y1[0] - y2[0]) / y1[0]).abs();
            let dc = ((y1[2] - y2[2]) / y1[2]).abs();
            prop_assert!(da.max(dc) < 1e-5, "b = {b}: {da:e} {dc:e}");
        }
    }

    #[test]
    fn sign_data_decide_cases_one_and_two(a in 0.5..2.0f64, b in 0.2..2.0f64, spread in 0.2..2.0f64, case_one in prop::bool::ANY) {
        let eps = EpsilonProfile::Zero;
        // Below c = a, or above the upper boundary of the invariant region.
        let c = if case_one {
            a * (1.0 - 0.5 * spread / (1.0 + spread))
        } else {
            a * (1.0 + 2.0 * b * b).sqrt() * (1.0 + spread)
        };
        let st = E2State { a, b, c, f: 0.0, t: 0.0 };
        let solver = IvpSolver { abs_tol: 1e-14, rel_tol: 1e-11, ..Default::default() };
        let tr = classify_cauchy(&st, &eps, &solver).unwrap();
        let expect = if case_one { Classification::Case1 } else { Classification::Case2 };
        prop_assert_eq!(tr.classification, expect);
        prop_assert!(tr.sign_data_consistent(1e-9));
        let bu = tr.blow_up.unwrap();
        prop_assert!((bu.exponent + 0.5).abs() < 0.05, "{bu:?}");
    }
}
