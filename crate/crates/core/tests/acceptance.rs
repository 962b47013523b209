//! The fourteen acceptance criteria, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so every line is printed even when all
//! pass; the process exits nonzero if any criterion fails.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use solab::e2::{
    bolt_smoothness, classify_cauchy, distance_profile, monitors, residual_samples, shoot_unstable, Classification,
    E2State, E2Trajectory, EpsilonProfile, ShootSettings,
};
use solab::frame::{check_point, point_curvature, FrameStructure, PointCheck};
use solab::heisenberg::special::{derivative_relation_residual, recursion_residual};
use solab::heisenberg::{big_f, dim4_operator, profile_frame, sec_extremes_dim4, HeisenbergSoliton, PhiEnd, Profile};
use solab::numerics::{logspace, IvpSolver};
use solab::steady::SteadyII;

type Outcome = Result<String, String>;

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn err<E: std::fmt::Debug>(e: E) -> String {
    format!("{e:?}")
}

fn heisenberg_checks(n: u32, grid: &[f64]) -> Result<Vec<PointCheck>, String> {
    let fs = HeisenbergSoliton::new(n).map_err(err)?.frame();
    grid.iter().map(|&phi| Ok(check_point(&fs.point(phi).map_err(err)?))).collect()
}

fn steady_checks(p: &SteadyII, samples: usize) -> Result<Vec<PointCheck>, String> {
    let fs = p.frame();
    let hi = p.interval().hi.ok_or("expected a finite upper end")?;
    (1..=samples)
        .map(|k| {
            let t = hi - 4.0 * k as f64 / samples as f64;
            Ok(check_point(&fs.point(t).map_err(err)?))
        })
        .collect()
}

fn shoot(eps: &EpsilonProfile) -> Result<E2Trajectory, String> {
    shoot_unstable(1.0, eps, &ShootSettings::default()).map_err(err)
}

fn c1_f_consistency() -> Outcome {
    let mut worst: f64 = 0.0;
    for n in 1..=5 {
        for phi in logspace(1e-6, 1e3, 200) {
            worst = worst.max(recursion_residual(n, phi).map_err(err)?);
            worst = worst.max(derivative_relation_residual(n, phi).map_err(err)?);
        }
    }
    let mut ratio_gap: f64 = 0.0;
    for n in 1..=5u32 {
        let nf = n as f64;
        let small = 1e-4f64;
        let large = 1e4f64;
        let rs = big_f(n, small).map_err(err)? / small.powi(n as i32 - 1) / (2.0 * small * small / (nf + 2.0));
        let rl = big_f(n, large).map_err(err)? / large.powi(n as i32 - 1) / (2.0 * large);
        ratio_gap = ratio_gap.max((rs - 1.0).abs()).max((rl - 1.0).abs());
    }
    ensure(
        worst < 1e-10 && ratio_gap < 0.01,
        format!("max relation residual {worst:.2e}, worst asymptotic ratio gap {ratio_gap:.2e}"),
    )
}

fn c2_soliton_residuals() -> Outcome {
    let grid = logspace(1e-3, 1e3, 200);
    let mut worst: f64 = 0.0;
    for n in 1..=3 {
        for c in heisenberg_checks(n, &grid)? {
            let s = c.soliton.ok_or("no soliton residuals")?;
            worst = worst.max(s.skew + s.killing_max());
        }
    }
    ensure(worst < 1e-8, format!("max skew + Killing residual {worst:.2e} over 200 φ, n = 1..3"))
}

fn c3_identity3() -> Outcome {
    let grid = logspace(1e-3, 1e3, 60);
    let mut heis: f64 = 0.0;
    for n in 1..=3 {
        for c in heisenberg_checks(n, &grid)? {
            heis = heis.max(c.soliton.ok_or("no soliton residuals")?.identity3);
        }
    }
    let mut e2: f64 = 0.0;
    for eps in [EpsilonProfile::Zero, EpsilonProfile::QuadraticBump] {
        for r in residual_samples(&shoot(&eps)?, 50).map_err(err)? {
            e2 = e2.max(r.identity3);
        }
    }
    let mut steady: f64 = 0.0;
    for p in [SteadyII::new(1.0, 1.0, 1.0, -1.0), SteadyII::new(2.0, 0.5, 1.5, -2.0)] {
        for c in steady_checks(&p, 20)? {
            steady = steady.max(c.soliton.ok_or("no soliton residuals")?.identity3);
        }
    }
    let worst = heis.max(e2).max(steady);
    ensure(worst < 1e-8, format!("Heisenberg {heis:.2e}, E(2) {e2:.2e}, steady {steady:.2e}"))
}

fn c4_curvature_triple() -> Outcome {
    let c = HeisenbergSoliton::new(1).map_err(err)?.curvatures(1.0).map_err(err)?;
    let got = [c.sec_xy[0], c.sec_kx[0], c.sec_kt];
    let expect = [-0.5284822, -0.1036383, -0.3212056];
    let triple = got.iter().zip(expect).map(|(g, e)| (g - e).abs()).fold(0.0, f64::max);
    let mut det: f64 = 0.0;
    for phi in [0.1f64, 1.0, 10.0] {
        let op = dim4_operator(phi).map_err(err)?;
        let closed = 4.0 / (phi.powi(4) * phi.exp()) * (2.0 * phi.cosh() - 2.0 - phi * phi);
        det = det.max((op.determinant - closed).abs());
    }
    ensure(
        triple < 1e-6 && det < 1e-10,
        format!("triple {got:.7?} off by {triple:.1e}, determinant identity gap {det:.1e}"),
    )
}

fn c5_dim4_bounds() -> Outcome {
    let ex = sec_extremes_dim4(&logspace(1e-3, 1e3, 60), 100_000, 0).map_err(err)?;
    let c = HeisenbergSoliton::new(1).map_err(err)?.curvatures(1e-6).map_err(err)?;
    let lim = (c.sec_kt + 2.0 / 3.0).abs().max((c.sec_xy[0] + 2.0 / 3.0).abs()).max((c.sec_kx[0] + 1.0 / 6.0).abs());
    let inside = ex.inf > -2.0 / 3.0 && ex.sup < 0.0;
    let sharp = ex.inf < -0.64 && ex.sup > -0.02;
    ensure(
        inside && sharp && lim < 1e-3,
        format!(
            "Sec in [{:.6}, {:.3e}] over {} samples, limits at φ = 1e−6 within {lim:.1e}",
            ex.inf, ex.sup, ex.samples
        ),
    )
}

fn c6_pinching() -> Outcome {
    let grid = logspace(1e-6, 1e3, 200);
    let mut ok = true;
    let mut scal_gap: f64 = 0.0;
    for n in 1..=3u32 {
        let s = HeisenbergSoliton::new(n).map_err(err)?;
        let m = (n + 1) as f64;
        for &phi in &grid {
            let c = s.curvatures(phi).map_err(err)?;
            let ric_ok = c.ricci_xy.iter().chain(std::iter::once(&c.ricci_kt)).all(|r| *r > -1.0 && *r < 0.0);
            ok &= ric_ok && c.scalar > -2.0 * m && c.scalar < 0.0;
        }
        scal_gap = scal_gap.max((s.curvatures(1e-6).map_err(err)?.scalar + 2.0 * m).abs());
    }
    ensure(ok && scal_gap < 1e-3, format!("strict pinching on the grid: {ok}, |Scal(1e−6) + 2m| ≤ {scal_gap:.1e}"))
}

fn c7_distance() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for n in 1..=3u32 {
        let s = HeisenbergSoliton::new(n).map_err(err)?;
        let d = s.distance(1.0, PhiEnd::At(4.0)).map_err(err)?.value().ok_or("finite distance diverged")?;
        let to0 = s.distance(1.0, PhiEnd::Zero).map_err(err)?;
        let toinf = s.distance(1.0, PhiEnd::Infinity).map_err(err)?;
        let g0 = s.gradient_flow_time(1.0, PhiEnd::Zero).map_err(err)?;
        let ginf = s.gradient_flow_time(1.0, PhiEnd::Infinity).map_err(err)?;
        ok &= d > 2f64.sqrt() && to0.diverges() && toinf.diverges() && g0.diverges() && ginf.diverges();
        parts.push(format!("n={n}: d(1,4) = {d:.6}"));
    }
    ensure(ok, format!("{}; both ends diverge for distance and flow time", parts.join(", ")))
}

fn c8_asymptotic_models() -> Outcome {
    let mut dev: f64 = 0.0;
    for n in 1..=3u32 {
        let s = HeisenbergSoliton::new(n).map_err(err)?;
        dev = dev.max(s.asymptotic_model_deviation(Profile::Cone, 1e3).map_err(err)?);
        dev = dev.max(s.asymptotic_model_deviation(Profile::Cusp, 1e-3).map_err(err)?);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut hol: f64 = 0.0;
    for n in 1..=2u32 {
        let fs: FrameStructure = profile_frame(n, Profile::Cusp);
        let target = -2.0 / (n as f64 + 2.0);
        for phi in [0.1, 1.0, 7.0] {
            let (_, r) = point_curvature(&fs.point(phi).map_err(err)?);
            let dim = 2 * n as usize + 2;
            for k in 0..=dim {
                let x: Vec<f64> = if k < dim {
                    (0..dim).map(|a| if a == k { 1.0 } else { 0.0 }).collect()
                } else {
                    (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect()
                };
                hol = hol.max((r.holomorphic_sectional(&x) - target).abs());
            }
        }
    }
    ensure(dev < 5e-3 && hol < 1e-8, format!("model deviation {dev:.2e}, cusp holomorphic curvature off by {hol:.1e}"))
}

fn c9_e2_end_to_end() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for eps in [EpsilonProfile::Zero, EpsilonProfile::QuadraticBump] {
        let start = Instant::now();
        let t = shoot(&eps)?;
        let secs = start.elapsed().as_secs_f64();
        let case3 = t.classification == Classification::Case3UnstableCurve;
        let lemma = t.lemma_max();
        let region = t.monitor_max(monitors::REGION);
        let skew = residual_samples(&t, 50).map_err(err)?.iter().map(|r| r.skew).fold(0.0, f64::max);
        let b_end = t.trajectory.samples.last().map(|s| s.state[1]).unwrap_or(0.0);
        ok &= case3 && lemma < 1e-7 && region <= 1e-8 && skew < 1e-7 && b_end >= 1e3 * (1.0 - 1e-9) && secs < 120.0;
        parts.push(format!(
            "{}: {} lemma {lemma:.1e} region {region:.1e} skew {skew:.1e} in {secs:.2}s",
            eps.name(),
            t.classification.as_str()
        ));
    }
    ensure(ok, parts.join("; "))
}

fn c10_e2_distances() -> Outcome {
    let t = shoot(&EpsilonProfile::Zero)?;
    let d = distance_profile(&t).map_err(err)?;
    let ok = d.tail_below < 1e-5 && d.length_10_100 >= 0.9 * d.minorant && d.k1 > 0.0 && d.k1.is_finite();
    ensure(
        ok,
        format!(
            "tail {:.1e}, length(10,100) {:.4} vs 0.9·K₂ln10 = {:.4}, K₁ = {:.3e}",
            d.tail_below,
            d.length_10_100,
            0.9 * d.minorant,
            d.k1
        ),
    )
}

fn c11_bolt() -> Outcome {
    let b = bolt_smoothness(&shoot(&EpsilonProfile::Zero)?).map_err(err)?;
    let ok = (b.db_dr - 1.0).abs() <= 1e-3 && b.quadratic_rel_change < 0.1 && b.cubic_drift_per_decade < 0.1;
    ensure(
        ok,
        format!(
            "db/dr = {:.8}, quadratic drift {:.1e}, cubic drift per decade {:.1e}",
            b.db_dr, b.quadratic_rel_change, b.cubic_drift_per_decade
        ),
    )
}

fn c12_classification() -> Outcome {
    let solver = IvpSolver { abs_tol: 1e-14, rel_tol: 1e-11, ..Default::default() };
    let mut parts = Vec::new();
    let mut ok = true;
    for (a, b, c, expect) in [(2.0, 1.0, 1.0, Classification::Case1), (1.0, 1.0, 3.0, Classification::Case2)] {
        let t = classify_cauchy(&E2State { a, b, c, f: 0.0, t: 0.0 }, &EpsilonProfile::Zero, &solver).map_err(err)?;
        let p = t.blow_up.as_ref().map(|bu| bu.exponent).unwrap_or(f64::NAN);
        ok &= t.classification == expect && (p + 0.5).abs() <= 0.05;
        parts.push(format!("({a},{b},{c}) → {} p = {p:.4}", t.classification.as_str()));
    }
    ensure(ok, parts.join(", "))
}

fn c13_steady() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut fd: f64 = 0.0;
    let mut len: f64 = 0.0;
    for _ in 0..20 {
        let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let (k, k1) = (sign * rng.gen_range(0.2..3.0), sign * rng.gen_range(0.2..3.0));
        let (beta, k2) = (rng.gen_range(0.2..3.0), -rng.gen_range(0.2..3.0));
        let p = SteadyII::new(k, beta, k1, k2);
        let i = p.interval();
        let w = 1.0 / k1.abs();
        let (t0, t1) = match (i.lo, i.hi) {
            (_, Some(h)) => (h - 4.0 * w, h - 0.05 * w),
            (Some(l), None) => (l + 0.05 * w, l + 4.0 * w),
            (None, None) => return Err("admissible draw without a finite end".into()),
        };
        let rec = p.normal_geodesic_length(t0, t1).map_err(err)?;
        len = len.max((rec.closed_form - rec.quadrature).abs());
        let h = 1e-4 * w;
        for t in [t0 + h, 0.5 * (t0 + t1), t1 - h] {
            let c = |x: f64| p.c_of_t(x).unwrap_or(f64::NAN);
            let (cm, c0, cp) = (c(t - h), c(t), c(t + h));
            let c1 = (cp - cm) / (2.0 * h);
            let c2 = (cp - 2.0 * c0 + cm) / (h * h);
            let r = k * beta * c1 + c1 * c1 / c0.powi(3) - c2 / (c0 * c0);
            let scale = (k * beta * c1).abs().max(c2.abs() / (c0 * c0)).max(1.0);
            fd = fd.max(r.abs() / scale);
        }
    }
    let v = SteadyII::new(1.0, 1.0, 1.0, -1.0).incompleteness_verdict().map_err(err)?;
    let boundary = v.upper.t == Some(0.0) && v.upper.length.is_some() && v.consistent;
    ensure(
        fd < 1e-6 && len < 1e-6 && boundary,
        format!("fd residual {fd:.1e}, length gap {len:.1e} over 20 draws; {}", v.verdict),
    )
}

fn c14_engine() -> Outcome {
    let mut ricci: f64 = 0.0;
    let mut closed: f64 = 0.0;
    let mut take = |c: &PointCheck| {
        ricci = ricci.max(c.curvature.ricci_disagreement);
        closed = closed.max(c.kahler.two_block).max(c.kahler.three_block);
    };
    let grid = logspace(1e-3, 1e3, 60);
    for n in 1..=3 {
        heisenberg_checks(n, &grid)?.iter().for_each(&mut take);
        for profile in [Profile::Cusp, Profile::Cone] {
            let fs = profile_frame(n, profile);
            for &phi in &[0.1, 1.0, 10.0] {
                take(&check_point(&fs.point(phi).map_err(err)?));
            }
        }
    }
    for p in [SteadyII::new(1.0, 1.0, 1.0, -1.0), SteadyII::new(-1.0, 2.0, -1.0, -1.0)] {
        let fs = p.frame();
        let i = p.interval();
        let t0 = i.hi.map(|h| h - 0.5).or(i.lo.map(|l| l + 0.5)).unwrap_or(0.0);
        for k in 0..20 {
            let t = if i.hi.is_some() { t0 - 0.2 * k as f64 } else { t0 + 0.2 * k as f64 };
            take(&check_point(&fs.point(t).map_err(err)?));
        }
    }
    let mut e2_ricci: f64 = 0.0;
    for eps in [EpsilonProfile::Zero, EpsilonProfile::QuadraticBump] {
        let t = shoot(&eps)?;
        for r in residual_samples(&t, 50).map_err(err)? {
            e2_ricci = e2_ricci.max(r.ricci_disagreement);
        }
        let fs = t.frame();
        let s0 = t.trajectory.samples.first().map(|s| s.t).unwrap_or(0.0);
        let s1 = t.trajectory.samples.last().map(|s| s.t).unwrap_or(0.0);
        for k in 1..20 {
            let s = s0 + (s1 - s0) * k as f64 / 20.0;
            let c = check_point(&fs.point(s).map_err(err)?);
            closed = closed.max(c.kahler.two_block).max(c.kahler.three_block);
        }
    }
    ensure(
        ricci.max(e2_ricci) < 1e-8 && closed < 1e-10,
        format!("Ricci disagreement {ricci:.1e} (E(2) {e2_ricci:.1e}), closedness {closed:.1e}"),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 14] = [
        ("F_n consistency", c1_f_consistency),
        ("Heisenberg soliton residuals", c2_soliton_residuals),
        ("L/N + N′/N² = 1 on every frame", c3_identity3),
        ("curvature triple and determinant", c4_curvature_triple),
        ("dim-4 sectional curvature bounds", c5_dim4_bounds),
        ("Ricci and scalar pinching", c6_pinching),
        ("distance and completeness", c7_distance),
        ("asymptotic models", c8_asymptotic_models),
        ("E(2) end to end", c9_e2_end_to_end),
        ("E(2) distances", c10_e2_distances),
        ("bolt smoothness", c11_bolt),
        ("case 1 and case 2 blow-up", c12_classification),
        ("steady case II", c13_steady),
        ("frame engine self-consistency", c14_engine),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(d) => println!("PASS criterion {:>2} ({name}): {d} [{secs:.2}s]", i + 1),
            Err(d) => {
                failed += 1;
                println!("FAIL criterion {:>2} ({name}): {d} [{secs:.2}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
