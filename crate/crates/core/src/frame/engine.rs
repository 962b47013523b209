//! Structure constants, Levi-Civita connection, curvature and residuals of a
//! frame point. Indices: 0 = k, 1 = t, 2+2i = x_i, 3+2i = y_i.

use serde::Serialize;

use super::{FrameError, FramePoint, FrameStructure};

const K: usize = 0;
const T: usize = 1;

fn xi(i: usize) -> usize {
    2 + 2 * i
}
fn yi(i: usize) -> usize {
    3 + 2 * i
}

/// `e_a(τ)`: the frame derivative of the potential, `k − t = ∇τ`.
fn tau_slope(a: usize) -> f64 {
    match a {
        K => 1.0,
        T => -1.0,
        _ => 0.0,
    }
}

/// `J` on frame indices: `Je_a = sign·e_b`.
fn j_of(a: usize) -> (usize, f64) {
    if a.is_multiple_of(2) {
        (a + 1, 1.0)
    } else {
        (a - 1, -1.0)
    }
}

/// Which `J`-invariant block an index lives in.
fn block_of(a: usize) -> usize {
    a / 2
}

/// `⟨[e_a, e_b], e_r⟩` and its `τ`-derivative.
#[derive(Debug, Clone)]
pub struct StructureConstants {
    pub dim: usize,
    c: Vec<f64>,
    dc: Vec<f64>,
}

impl StructureConstants {
    fn idx(&self, a: usize, b: usize, r: usize) -> usize {
        (a * self.dim + b) * self.dim + r
    }
    pub fn get(&self, a: usize, b: usize, r: usize) -> f64 {
        self.c[self.idx(a, b, r)]
    }
    pub fn deriv(&self, a: usize, b: usize, r: usize) -> f64 {
        self.dc[self.idx(a, b, r)]
    }
    fn set(&mut self, a: usize, b: usize, r: usize, v: f64, dv: f64) {
        let i = self.idx(a, b, r);
        self.c[i] = v;
        self.dc[i] = dv;
        let j = self.idx(b, a, r);
        self.c[j] = -v;
        self.dc[j] = -dv;
    }

    pub fn from_point(p: &FramePoint) -> Self {
        let dim = p.dim();
        let mut sc = StructureConstants { dim, c: vec![0.0; dim * dim * dim], dc: vec![0.0; dim * dim * dim] };
        let (v, d) = (&p.value, &p.deriv);
        sc.set(K, T, K, v.l, d.l);
        sc.set(K, T, T, v.l, d.l);
        for (i, (b, db)) in v.blocks.iter().zip(&d.blocks).enumerate() {
            let (x, y) = (xi(i), yi(i));
            sc.set(x, y, K, b.n, db.n);
            sc.set(x, y, T, b.n, db.n);
            sc.set(K, x, x, b.a, db.a);
            sc.set(K, x, y, b.b, db.b);
            sc.set(K, y, x, b.c, db.c);
            sc.set(K, y, y, b.d, db.d);
            sc.set(T, x, x, b.e, db.e);
            sc.set(T, x, y, b.f, db.f);
            sc.set(T, y, x, b.g, db.g);
            sc.set(T, y, y, b.h, db.h);
        }
        sc
    }

    /// Components of the Jacobi identity `Σ_cyc [[e_a,e_b],e_c]`, with the
    /// coefficients differentiated along the frame. Nonzero entries mean the
    /// coefficient functions cannot come from an actual frame. Each component
    /// is divided by the size of its terms (at least 1) so large coefficients
    /// do not masquerade as violations.
    pub fn jacobi_residual(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for a in 0..n {
            for b in (a + 1)..n {
                for c in (b + 1)..n {
                    for r in 0..n {
                        let (mut sum, mut mag) = (0.0, 1.0);
                        for (p, q, w) in [(a, b, c), (b, c, a), (c, a, b)] {
                            for s in 0..n {
                                let t = self.get(p, q, s) * self.get(s, w, r);
                                sum += t;
                                mag += t.abs();
                            }
                            let t = tau_slope(w) * self.deriv(p, q, r);
                            sum -= t;
                            mag += t.abs();
                        }
                        worst = worst.max(sum.abs() / mag);
                    }
                }
            }
        }
        worst
    }
}

/// `⟨∇_{e_a} e_b, e_c⟩` and its `τ`-derivative.
#[derive(Debug, Clone)]
pub struct Connection {
    pub dim: usize,
    gamma: Vec<f64>,
    dgamma: Vec<f64>,
}

impl Connection {
    fn idx(&self, a: usize, b: usize, c: usize) -> usize {
        (a * self.dim + b) * self.dim + c
    }
    pub fn get(&self, a: usize, b: usize, c: usize) -> f64 {
        self.gamma[self.idx(a, b, c)]
    }
    pub fn deriv(&self, a: usize, b: usize, c: usize) -> f64 {
        self.dgamma[self.idx(a, b, c)]
    }

    /// Koszul formula in an orthonormal frame:
    /// `2⟨∇_a e_b, e_c⟩ = ⟨[e_a,e_b],e_c⟩ − ⟨[e_b,e_c],e_a⟩ + ⟨[e_c,e_a],e_b⟩`.
    pub fn from_structure(sc: &StructureConstants) -> Self {
        let n = sc.dim;
        let mut con = Connection { dim: n, gamma: vec![0.0; n * n * n], dgamma: vec![0.0; n * n * n] };
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let i = con.idx(a, b, c);
                    con.gamma[i] = 0.5 * (sc.get(a, b, c) - sc.get(b, c, a) + sc.get(c, a, b));
                    con.dgamma[i] = 0.5 * (sc.deriv(a, b, c) - sc.deriv(b, c, a) + sc.deriv(c, a, b));
                }
            }
        }
        con
    }

    /// Largest deviation from `⟨∇_a e_b, e_c⟩ = −⟨∇_a e_c, e_b⟩`.
    pub fn antisymmetry_defect(&self) -> f64 {
        let n = self.dim;
        let mut m: f64 = 0.0;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    m = m.max((self.get(a, b, c) + self.get(a, c, b)).abs());
                }
            }
        }
        m
    }
}

/// `R_abcd = ⟨R(e_a,e_b)e_c, e_d⟩` with `R(X,Y) = ∇_X∇_Y − ∇_Y∇_X − ∇_[X,Y]`.
#[derive(Debug, Clone)]
pub struct Riemann {
    pub dim: usize,
    r: Vec<f64>,
}

impl Riemann {
    fn idx(&self, a: usize, b: usize, c: usize, d: usize) -> usize {
        ((a * self.dim + b) * self.dim + c) * self.dim + d
    }
    pub fn get(&self, a: usize, b: usize, c: usize, d: usize) -> f64 {
        self.r[self.idx(a, b, c, d)]
    }

    pub fn new(sc: &StructureConstants, con: &Connection) -> Self {
        let n = sc.dim;
        let mut rm = Riemann { dim: n, r: vec![0.0; n * n * n * n] };
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let mut v = tau_slope(a) * con.deriv(b, c, d) - tau_slope(b) * con.deriv(a, c, d);
                        for s in 0..n {
                            v += con.get(b, c, s) * con.get(a, s, d) - con.get(a, c, s) * con.get(b, s, d);
                            v -= sc.get(a, b, s) * con.get(s, c, d);
                        }
                        let i = rm.idx(a, b, c, d);
                        rm.r[i] = v;
                    }
                }
            }
        }
        rm
    }

    /// `Ric(e_b, e_c) = Σ_a R_abca`.
    pub fn ricci(&self) -> Vec<Vec<f64>> {
        let n = self.dim;
        let mut ric = vec![vec![0.0; n]; n];
        for (b, row) in ric.iter_mut().enumerate() {
            for (c, v) in row.iter_mut().enumerate() {
                *v = (0..n).map(|a| self.get(a, b, c, a)).sum();
            }
        }
        ric
    }

    /// `R(X,Y,Z,W)` for arbitrary vectors in frame components.
    pub fn contract(&self, x: &[f64], y: &[f64], z: &[f64], w: &[f64]) -> f64 {
        let n = self.dim;
        let mut s = 0.0;
        for a in 0..n {
            if x[a] == 0.0 {
                continue;
            }
            for b in 0..n {
                if y[b] == 0.0 {
                    continue;
                }
                let xy = x[a] * y[b];
                for c in 0..n {
                    if z[c] == 0.0 {
                        continue;
                    }
                    let xyz = xy * z[c];
                    for d in 0..n {
                        s += xyz * w[d] * self.get(a, b, c, d);
                    }
                }
            }
        }
        s
    }

    /// Sectional curvature of the plane spanned by `x`, `y`.
    pub fn sectional(&self, x: &[f64], y: &[f64]) -> f64 {
        let dot = |u: &[f64], v: &[f64]| u.iter().zip(v).map(|(a, b)| a * b).sum::<f64>();
        let area = dot(x, x) * dot(y, y) - dot(x, y).powi(2);
        self.contract(x, y, y, x) / area
    }

    /// Holomorphic sectional curvature `Sec(X, JX)`.
    pub fn holomorphic_sectional(&self, x: &[f64]) -> f64 {
        let mut jx = vec![0.0; self.dim];
        for (a, v) in x.iter().enumerate() {
            let (b, sign) = j_of(a);
            jx[b] += sign * v;
        }
        self.sectional(x, &jx)
    }

    /// Curvature operator on `Λ²` in the basis `e_a∧e_b`, `a < b`, normalized
    /// so that `⟨𝓡(X∧Y), X∧Y⟩ = Sec(X,Y)` for orthonormal `X, Y`.
    pub fn curvature_operator(&self) -> (Vec<(usize, usize)>, Vec<Vec<f64>>) {
        let n = self.dim;
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| ((a + 1)..n).map(move |b| (a, b))).collect();
        let m = pairs.iter().map(|&(a, b)| pairs.iter().map(|&(c, d)| self.get(a, b, d, c)).collect()).collect();
        (pairs, m)
    }
}

/// Curvature data of a Kähler frame at a point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvatureReport {
    pub sec_xy: Vec<f64>,
    pub sec_kx: Vec<f64>,
    pub sec_kt: f64,
    pub ricci_xy: Vec<f64>,
    pub ricci_kt: f64,
    pub scalar: f64,
    /// Largest gap between the curvature-trace Ricci form and the frame formula.
    pub ricci_disagreement: f64,
    pub fd_derived: bool,
}

impl CurvatureReport {
    /// `scalar − 2ρ(k,t) − 2Σρ(x_i,y_i)`.
    pub fn trace_defect(&self) -> f64 {
        (self.scalar - 2.0 * self.ricci_kt - 2.0 * self.ricci_xy.iter().sum::<f64>()).abs()
    }
}

/// Shear coefficients of `X` on an oriented orthonormal pair `(e₁, e₂)`,
/// from `v1 = (g([X,e₁],e₁), g([X,e₁],e₂))` and `v2 = (g([X,e₂],e₁), g([X,e₂],e₂))`.
pub fn shear_coefficients(v1: [f64; 2], v2: [f64; 2]) -> (f64, f64) {
    (0.5 * (v1[0] - v2[1]), -0.5 * (v1[1] + v2[0]))
}

fn shear_on_block(sc: &StructureConstants, x: usize, i: usize) -> (f64, f64) {
    let (e1, e2) = (xi(i), yi(i));
    shear_coefficients([sc.get(x, e1, e1), sc.get(x, e1, e2)], [sc.get(x, e2, e1), sc.get(x, e2, e2)])
}

fn point_integrability(p: &FramePoint) -> f64 {
    let sc = StructureConstants::from_point(p);
    (0..p.n())
        .map(|i| {
            let (s1k, s2k) = shear_on_block(&sc, K, i);
            let (s1t, s2t) = shear_on_block(&sc, T, i);
            // σ₁ᵗ = σ₂ᵏ and σ₂ᵗ = −σ₁ᵏ, each doubled to match the bracket relations.
            (2.0 * (s1t - s2k)).abs().max((2.0 * (s2t + s1k)).abs())
        })
        .fold(0.0, f64::max)
}

/// Largest violation of `A−D = F+G`, `B+C = H−E`, computed through the shear
/// equations of the `(k,t)` block acting on each `(x_i,y_i)` block.
pub fn integrability_residual(fs: &FrameStructure, s: f64) -> Result<f64, FrameError> {
    Ok(point_integrability(&fs.point(s)?))
}

/// The Kähler relations and the closedness of `ω` on frame triples.
///
/// Like the Jacobi residual, each entry is divided by the size of its terms
/// (at least 1), so roundoff on frames with large coefficients near a bolt
/// stays small.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KahlerResidual {
    /// `max |N_i − A_i − D_i|, |N_i + E_i + H_i|`.
    pub rels2: f64,
    /// `dω` on triples touching two `J`-invariant blocks.
    pub two_block: f64,
    /// `dω` on triples touching three blocks.
    pub three_block: f64,
}

impl KahlerResidual {
    pub fn max(&self) -> f64 {
        self.rels2.max(self.two_block).max(self.three_block)
    }
}

fn point_kahler(p: &FramePoint) -> KahlerResidual {
    let rels2 = p
        .value
        .blocks
        .iter()
        .map(|b| {
            let r1 = (b.n - b.a - b.d).abs() / (1.0 + b.n.abs() + b.a.abs() + b.d.abs());
            let r2 = (b.n + b.e + b.h).abs() / (1.0 + b.n.abs() + b.e.abs() + b.h.abs());
            r1.max(r2)
        })
        .fold(0.0, f64::max);
    let sc = StructureConstants::from_point(p);
    let n = sc.dim;
    // ω(e_s, e_c) = ⟨J e_s, e_c⟩.
    let omega = |s: usize, c: usize| {
        let (js, sign) = j_of(s);
        if js == c {
            sign
        } else {
            0.0
        }
    };
    // ω has constant frame components, so dω(a,b,c) = −ω([a,b],c) + ω([a,c],b) − ω([b,c],a).
    let (mut two, mut three): (f64, f64) = (0.0, 0.0);
    for a in 0..n {
        for b in (a + 1)..n {
            for c in (b + 1)..n {
                let (mut v, mut mag) = (0.0, 1.0);
                for s in 0..n {
                    let t =
                        [-sc.get(a, b, s) * omega(s, c), sc.get(a, c, s) * omega(s, b), -sc.get(b, c, s) * omega(s, a)];
                    v += t.iter().sum::<f64>();
                    mag += t.iter().map(|x| x.abs()).sum::<f64>();
                }
                let v = v / mag;
                let (ba, bb, bc) = (block_of(a), block_of(b), block_of(c));
                if ba != bb && bb != bc && ba != bc {
                    three = three.max(v.abs());
                } else {
                    two = two.max(v.abs());
                }
            }
        }
    }
    KahlerResidual { rels2, two_block: two, three_block: three }
}

pub fn kahler_residual(fs: &FrameStructure, s: f64) -> Result<KahlerResidual, FrameError> {
    Ok(point_kahler(&fs.point(s)?))
}

pub fn koszul_connection(fs: &FrameStructure, s: f64) -> Result<Connection, FrameError> {
    let p = fs.point(s)?;
    Ok(Connection::from_structure(&StructureConstants::from_point(&p)))
}

/// `Q = 2L + Σ_j (C_j − H_j + A_j − F_j)`.
pub fn q_of(p: &FramePoint) -> f64 {
    2.0 * p.value.l + p.value.blocks.iter().map(|b| b.c - b.h + b.a - b.f).sum::<f64>()
}

/// Ricci form predicted by the frame formula in the `τ`-dependent case:
/// `ρ(x_i,y_i) = −N_i Q`, `ρ(k,t) = −LQ + 2L′ + Σ(C_j′ − H_j′ + A_j′ − F_j′)`.
pub fn ricci_form_formula(p: &FramePoint) -> (Vec<f64>, f64) {
    let q = q_of(p);
    let xy = p.value.blocks.iter().map(|b| -b.n * q).collect();
    let kt = -p.value.l * q + 2.0 * p.deriv.l + p.deriv.blocks.iter().map(|b| b.c - b.h + b.a - b.f).sum::<f64>();
    (xy, kt)
}

/// Curvature of a frame point, with the Ricci form computed both by tracing
/// the Riemann tensor and by the frame formula.
pub fn point_curvature(p: &FramePoint) -> (CurvatureReport, Riemann) {
    let sc = StructureConstants::from_point(p);
    let con = Connection::from_structure(&sc);
    let rm = Riemann::new(&sc, &con);
    let ric = rm.ricci();
    let n = p.n();
    let dim = p.dim();
    let sec_xy = (0..n).map(|i| rm.get(xi(i), yi(i), yi(i), xi(i))).collect();
    let sec_kx = (0..n).map(|i| rm.get(K, xi(i), xi(i), K)).collect();
    let sec_kt = rm.get(K, T, T, K);
    // ρ(X,Y) = Ric(JX, Y).
    let rho = |a: usize, b: usize| {
        let (ja, sign) = j_of(a);
        sign * ric[ja][b]
    };
    let ricci_xy: Vec<f64> = (0..n).map(|i| rho(xi(i), yi(i))).collect();
    let ricci_kt = rho(K, T);
    let scalar = (0..dim).map(|a| ric[a][a]).sum();

    let (f_xy, f_kt) = ricci_form_formula(p);
    let mut expected = vec![vec![0.0; dim]; dim];
    expected[K][T] = f_kt;
    expected[T][K] = -f_kt;
    for i in 0..n {
        expected[xi(i)][yi(i)] = f_xy[i];
        expected[yi(i)][xi(i)] = -f_xy[i];
    }
    let mut disagreement: f64 = 0.0;
    for a in 0..dim {
        for b in 0..dim {
            disagreement = disagreement.max((rho(a, b) - expected[a][b]).abs());
        }
    }
    (
        CurvatureReport {
            sec_xy,
            sec_kx,
            sec_kt,
            ricci_xy,
            ricci_kt,
            scalar,
            ricci_disagreement: disagreement,
            fd_derived: p.fd_derived,
        },
        rm,
    )
}

/// Full curvature report; fails when the two Ricci computations disagree by
/// more than `tol`.
pub fn curvature_at(fs: &FrameStructure, s: f64, tol: f64) -> Result<CurvatureReport, FrameError> {
    let p = fs.point(s)?;
    let (rep, _) = point_curvature(&p);
    if !(rep.ricci_disagreement <= tol) {
        return Err(FrameError::InconsistentRicci { disagreement: rep.ricci_disagreement, tolerance: tol });
    }
    Ok(rep)
}

/// Residuals of the reduced soliton equations at a point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolitonResiduals {
    /// Max over the first equation (each block) and the second equation.
    pub skew: f64,
    /// Per block: `f″+Lf′`, `A+E`, `D+H`, `B+C+F+G`.
    pub killing: Vec<[f64; 4]>,
    /// `|L/N + N′/N² − 1|`, or `|LN + N′ − N²|` where `|N| ≤ 1e−6`.
    pub identity3: f64,
    pub identity3_cleared: bool,
}

impl SolitonResiduals {
    pub fn killing_max(&self) -> f64 {
        self.killing.iter().flat_map(|k| k.iter()).map(|v| v.abs()).fold(0.0, f64::max)
    }
}

pub fn point_soliton(p: &FramePoint) -> Result<SolitonResiduals, FrameError> {
    let (v, d) = (&p.value, &p.deriv);
    let lambda = p.lambda;
    if lambda != 0.0 {
        if let Some(i) = v.blocks.iter().position(|b| b.n == 0.0) {
            return Err(FrameError::DegenerateN { block: i, lambda });
        }
    }
    let q = q_of(p);
    let (fp, fpp) = (v.df, d.df);
    let mut skew: f64 = 0.0;
    for b in &v.blocks {
        skew = skew.max((-b.n * (q + fp) - lambda).abs());
    }
    let eq2 =
        -v.l * q + 2.0 * d.l + d.blocks.iter().map(|b| b.c - b.h + b.a - b.f).sum::<f64>() + fpp - v.l * fp - lambda;
    skew = skew.max(eq2.abs());
    let killing = v.blocks.iter().map(|b| [fpp + v.l * fp, b.a + b.e, b.d + b.h, b.b + b.c + b.f + b.g]).collect();
    let mut identity3: f64 = 0.0;
    let mut cleared = false;
    for (b, db) in v.blocks.iter().zip(&d.blocks) {
        let r = if b.n.abs() > 1e-6 {
            (v.l / b.n + db.n / (b.n * b.n) - 1.0).abs()
        } else {
            cleared = true;
            (v.l * b.n + db.n - b.n * b.n).abs()
        };
        identity3 = identity3.max(r);
    }
    Ok(SolitonResiduals { skew, killing, identity3, identity3_cleared: cleared })
}

pub fn soliton_residuals(fs: &FrameStructure, s: f64) -> Result<SolitonResiduals, FrameError> {
    point_soliton(&fs.point(s)?)
}

/// Residuals of the eight lines of the frame-dependent skew-soliton system.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolEqnsResidual {
    pub lines: [f64; 8],
    /// Line two with the sign of the `d_k(A_j − F_j)` term exactly as printed
    /// in the source display; differs from `lines[1]` by `2Σ(A_j−F_j)′`.
    pub line2_as_printed: f64,
}

impl SolEqnsResidual {
    pub fn max(&self) -> f64 {
        self.lines.iter().cloned().fold(0.0, f64::max)
    }
}

/// Evaluates all eight lines with frame directional derivatives
/// `d_a h = e_a(τ)·h′` and `d_a d_b f = e_a(τ)e_b(τ)·f″`.
pub fn point_sol_eqns(p: &FramePoint) -> SolEqnsResidual {
    let (v, dv) = (&p.value, &p.deriv);
    let n = p.n();
    let lambda = p.lambda;
    let q = q_of(p);
    let d = |h_prime: f64, a: usize| tau_slope(a) * h_prime;
    let df = |a: usize| tau_slope(a) * v.df;
    let ddf = |a: usize, b: usize| tau_slope(a) * tau_slope(b) * dv.df;
    let sum_ch: f64 = dv.blocks.iter().map(|b| b.c - b.h).sum();
    let sum_af: f64 = dv.blocks.iter().map(|b| b.a - b.f).sum();

    let mut lines = [0.0f64; 8];
    for (i, b) in v.blocks.iter().enumerate() {
        let (x, y) = (xi(i), yi(i));
        let l1 = -b.n * q + 0.5 * (ddf(x, x) + ddf(y, y) - b.n * (df(K) - df(T))) - lambda;
        let l3 = -d(dv.l + sum_ch, x) + 0.5 * (ddf(x, T) - ddf(K, y) - b.b * df(x) + b.a * df(y));
        let l4 = -d(dv.l + sum_ch, y) + 0.5 * (ddf(y, T) + ddf(K, x) - b.d * df(x) + b.c * df(y));
        let l5 = -d(dv.l + sum_af, x) + 0.5 * (-ddf(x, T) - ddf(T, y) - b.f * df(x) + b.e * df(y));
        let l6 = -d(dv.l + sum_af, y) + 0.5 * (-ddf(y, K) + ddf(T, x) - b.h * df(x) + b.g * df(y));
        lines[0] = lines[0].max(l1.abs());
        lines[2] = lines[2].max(l3.abs());
        lines[3] = lines[3].max(l4.abs());
        lines[4] = lines[4].max(l5.abs());
        lines[5] = lines[5].max(l6.abs());
        for j in 0..n {
            if j == i {
                continue;
            }
            let (xj, yj) = (xi(j), yi(j));
            lines[6] = lines[6].max((ddf(y, xj) - ddf(yj, x)).abs());
            lines[7] = lines[7].max((ddf(y, yj) + ddf(xj, x)).abs());
        }
    }
    let common = -v.l * q + (d(dv.l, K) - d(dv.l, T)) + 0.5 * (ddf(K, K) + ddf(T, T) - v.l * (df(K) - df(T))) - lambda;
    let ch_t: f64 = d(sum_ch, T);
    let af_k: f64 = d(sum_af, K);
    lines[1] = (common - ch_t + af_k).abs();
    let line2_as_printed = (common - (ch_t + af_k)).abs();
    SolEqnsResidual { lines, line2_as_printed }
}

pub fn full_sol_eqns_residual(fs: &FrameStructure, s: f64) -> Result<SolEqnsResidual, FrameError> {
    Ok(point_sol_eqns(&fs.point(s)?))
}

/// Every residual the engine knows about at one point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointCheck {
    pub s: f64,
    pub integrability: f64,
    pub kahler: KahlerResidual,
    pub jacobi: f64,
    pub soliton: Option<SolitonResiduals>,
    pub sol_eqns: SolEqnsResidual,
    pub curvature: CurvatureReport,
}

pub fn check_point(p: &FramePoint) -> PointCheck {
    let sc = StructureConstants::from_point(p);
    PointCheck {
        s: p.s,
        integrability: point_integrability(p),
        kahler: point_kahler(p),
        jacobi: sc.jacobi_residual(),
        soliton: point_soliton(p).ok(),
        sol_eqns: point_sol_eqns(p),
        curvature: point_curvature(p).0,
    }
}
