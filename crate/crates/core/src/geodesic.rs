//! Normal geodesics from the identity class.
//!
//! For an initial velocity `V = [[A, B], [-B*, 0]]` the normal geodesic is the
//! first `k` columns of `exp(tV) · blockdiag(exp(-tA), I)`. Closed forms are
//! provided for `V_{2,1}`, `V_{n,1}` and the horizontal geodesics of
//! `V_{2k,k}` over `G_{2k,k}`.

use std::f64::consts::PI;
use std::io::{Read, Write};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homspace::{BlockVelocity, StiefelPoint};
use crate::matcore::{
    gaussian_matrix, max_abs, real_part, same_field, same_shape, CMatrix, DenseMatrix, Field, SkewEigen, Unitary, I,
};

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Initial data of a normal geodesic.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeodesicSpec {
    pub v: BlockVelocity,
}

impl GeodesicSpec {
    pub fn new(v: BlockVelocity) -> Self {
        Self { v }
    }

    pub fn n(&self) -> usize {
        self.v.n()
    }

    pub fn k(&self) -> usize {
        self.v.k()
    }

    pub fn field(&self) -> Field {
        self.v.field()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeodesicSample {
    pub t: f64,
    pub point: StiefelPoint,
    pub velocity_norm: f64,
}

/// A geodesic with the spectral data of `V` and `A` cached, for repeated evaluation.
#[derive(Clone, Debug)]
pub struct GeodesicFlow {
    spec: GeodesicSpec,
    full: SkewEigen,
    fibre: SkewEigen,
}

impl GeodesicFlow {
    pub fn new(spec: GeodesicSpec) -> Self {
        let full = SkewEigen::new(&spec.v.embed());
        let fibre = SkewEigen::new(spec.v.a());
        Self { spec, full, fibre }
    }

    pub fn spec(&self) -> &GeodesicSpec {
        &self.spec
    }

    /// The `n×k` frame at time `t`.
    pub fn frame(&self, t: f64) -> CMatrix {
        let k = self.spec.k();
        if t == 0.0 || self.spec.v.is_zero() {
            return CMatrix::identity(self.spec.n(), k);
        }
        let head = self.full.exp_columns(t, k);
        let out = head * self.fibre.exp(-t);
        match self.spec.field() {
            Field::Real => real_part(&out),
            Field::Complex => out,
        }
    }

    pub fn point(&self, t: f64) -> Result<StiefelPoint> {
        if !t.is_finite() {
            return Err(Error::NonFinite);
        }
        StiefelPoint::new(self.frame(t), self.spec.field())
    }

    /// Exact time derivative of the frame: `exp(tV) [[0], [-B*]] exp(-tA)`.
    pub fn derivative(&self, t: f64) -> CMatrix {
        let (n, k) = (self.spec.n(), self.spec.k());
        let e = self.full.exp(t);
        let tail = e.columns(k, n - k) * (-self.spec.v.b().adjoint());
        let out = tail * self.fibre.exp(-t);
        match self.spec.field() {
            Field::Real => real_part(&out),
            Field::Complex => out,
        }
    }

    /// Largest angular frequency present in the frame, an upper bound for `|γ̇|` oscillation.
    pub fn max_frequency(&self) -> f64 {
        let top = |e: &SkewEigen| e.freqs.iter().fold(0.0_f64, |m, w| m.max(w.abs()));
        top(&self.full) + top(&self.fibre)
    }

    pub fn sample(&self, t: f64) -> Result<GeodesicSample> {
        Ok(GeodesicSample {
            t,
            point: self.point(t)?,
            velocity_norm: speed_squared(&self.spec.v).sqrt(),
        })
    }
}

/// Point of the normal geodesic at time `t`.
pub fn normal_geodesic(spec: &GeodesicSpec, t: f64) -> Result<StiefelPoint> {
    GeodesicFlow::new(spec.clone()).point(t)
}

fn mu(lambda: f64, s: f64, t: f64, plus: bool) -> Complex64 {
    let phase = if plus { lambda + s } else { lambda - s };
    Complex64::from_polar(1.0, t * phase / 2.0)
}

/// Entries `(γ¹, γ², γ³, γ⁴)` of the `2×2` unitary `exp(tV) · diag(e^{-iλt}, 1)` on `V_{2,1}`.
///
/// `V = [[iλ, x₂], [-x̄₂, 0]]`; the first column `(γ¹, γ³)` is the geodesic.
pub fn geodesic_v21_closed(lambda: f64, x2: Complex64, t: f64) -> [Complex64; 4] {
    if x2 == ZERO {
        return [ONE, ZERO, ZERO, ONE];
    }
    let s = (lambda * lambda + 4.0 * x2.norm_sqr()).sqrt();
    let mu1 = |l: f64| mu(l, s, t, true);
    let mu2 = |l: f64| mu(l, s, t, false);
    let g1 = (lambda / (2.0 * s) + 0.5) * mu1(-lambda) + (-lambda / (2.0 * s) + 0.5) * mu2(-lambda);
    let g2 = x2 * I / s * (mu2(lambda) - mu1(lambda));
    let g3 = -(x2.conj() * I / s) * (mu2(-lambda) - mu1(-lambda));
    let g4 = -mu1(lambda) * (lambda - s) / (2.0 * s) + mu2(lambda) * (lambda + s) / (2.0 * s);
    [g1, g2, g3, g4]
}

/// First column `(γ¹, γ³)` of the geodesic on `V_{n,1}` with `A = [[ix]]` and row `B`.
pub fn geodesic_vn1_closed(x: f64, b: &[Complex64], t: f64) -> (Complex64, Vec<Complex64>) {
    let bb: f64 = b.iter().map(|z| z.norm_sqr()).sum();
    if bb == 0.0 && x == 0.0 {
        return (ONE, vec![ZERO; b.len()]);
    }
    let s = (x * x + 4.0 * bb).sqrt();
    let front = Complex64::from_polar(1.0, -t * (s + x) / 2.0);
    let e = Complex64::from_polar(1.0, t * s);
    let g1 = front / (2.0 * s) * (s * (e + 1.0) + x * (e - 1.0));
    let common = front * (e - 1.0) / (I * s);
    let g3 = b.iter().map(|z| -z.conj() * common).collect();
    (g1, g3)
}

/// Blocks `(γ¹, γ³)` of the horizontal geodesic on `V_{2k,k}` with velocity `[[0, B], [-B*, 0]]`.
///
/// `γ¹ = cos(t√(BB*))` and `γ³ = -B* sin(t√(BB*)) (√(BB*))⁻¹`, evaluated through
/// the singular values of `B` so that singular `B` is allowed.
pub fn grassmann_geodesic_2kk(b: &CMatrix, field: Field, t: f64) -> Result<(CMatrix, CMatrix)> {
    if !b.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "B must be square, got {}x{}",
            b.nrows(),
            b.ncols()
        )));
    }
    DenseMatrix::new(b.clone(), field)?;
    if !t.is_finite() {
        return Err(Error::NonFinite);
    }
    let k = b.nrows();
    if t == 0.0 || b.iter().all(|z| *z == ZERO) {
        return Ok((CMatrix::identity(k, k), CMatrix::zeros(k, k)));
    }
    let svd = b.clone().svd(true, false);
    let u = svd.u.expect("requested");
    let mut cos_d = CMatrix::zeros(k, k);
    let mut sinc_d = CMatrix::zeros(k, k);
    for (j, &sigma) in svd.singular_values.iter().enumerate() {
        cos_d[(j, j)] = Complex64::new((t * sigma).cos(), 0.0);
        let sinc = if sigma == 0.0 { t } else { (t * sigma).sin() / sigma };
        sinc_d[(j, j)] = Complex64::new(sinc, 0.0);
    }
    let ua = u.adjoint();
    let g1 = &u * cos_d * &ua;
    let g3 = -b.adjoint() * (&u * sinc_d * &ua);
    Ok(match field {
        Field::Real => (real_part(&g1), real_part(&g3)),
        Field::Complex => (g1, g3),
    })
}

/// Squared speed `g(γ̇, γ̇)`, constant along the geodesic and independent of `A`.
pub fn speed_squared(v: &BlockVelocity) -> f64 {
    let bb = v.b().norm_squared();
    match v.field() {
        Field::Complex => 4.0 * v.n() as f64 * bb,
        Field::Real => 2.0 * bb,
    }
}

/// Length of the geodesic on `[0, T]`.
pub fn length(v: &BlockVelocity, t: f64) -> Result<f64> {
    if t.is_nan() {
        return Err(Error::NonFinite);
    }
    if t < 0.0 {
        return Err(Error::NegativeTime(t));
    }
    Ok(t * speed_squared(v).sqrt())
}

/// The time `2π / √(x² + 4|B|²)` at which a `V_{n,1}` geodesic first returns to the set `L`.
pub fn first_vanishing_time(x: f64, b: &[Complex64]) -> Result<f64> {
    let bb: f64 = b.iter().map(|z| z.norm_sqr()).sum();
    let s2 = x * x + 4.0 * bb;
    if !s2.is_finite() {
        return Err(Error::NonFinite);
    }
    if s2 == 0.0 {
        return Err(Error::ZeroVelocity);
    }
    Ok(2.0 * PI / s2.sqrt())
}

/// The velocity `(A, -B U)`, which reaches the same block-diagonal points as `(A, B)`.
pub fn mirror_velocity(v: &BlockVelocity, u: &Unitary) -> Result<BlockVelocity> {
    same_shape(v.n() - v.k(), u.dim())?;
    same_field(v.field(), u.field())?;
    BlockVelocity::new(v.a().clone(), -(v.b() * u.matrix()))
}

/// Outcome of comparing one closed form with the generic geodesic.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub suite: String,
    pub trials: usize,
    pub max_error: f64,
    pub pass: bool,
}

/// Tolerance for agreement between closed forms and the generic geodesic.
pub const CLOSED_FORM_TOL: f64 = 1e-9;

/// Compares the `V_{2,1}`, `V_{n,1}` (`n ≤ 8`) and `G_{2k,k}` (`k ≤ 4`) closed forms with
/// [`GeodesicFlow`] on random inputs.
///
/// `flip_sign` negates the lower component of every closed form; it exists to
/// confirm that the comparison detects a wrong formula.
pub fn verify_closed_forms(trials: usize, seed: u64, flip_sign: bool) -> Result<Vec<SuiteResult>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sign = if flip_sign { -1.0 } else { 1.0 };
    let gauss = |rng: &mut ChaCha8Rng| gaussian_matrix(1, 1, Field::Complex, rng)[(0, 0)];
    let mut v21 = 0.0_f64;
    let mut vn1 = 0.0_f64;
    let mut gr = 0.0_f64;
    for _ in 0..trials {
        let lambda = rng.random_range(-3.0..3.0);
        let x2 = gauss(&mut rng);
        let t = rng.random_range(0.0..10.0);
        let g = geodesic_v21_closed(lambda, x2, t);
        let f = GeodesicFlow::new(GeodesicSpec::new(BlockVelocity::vn1(lambda, &[x2])?)).frame(t);
        v21 = v21.max((g[0] - f[(0, 0)]).norm()).max((sign * g[2] - f[(1, 0)]).norm());

        let n = rng.random_range(2..=8);
        let x = rng.random_range(-3.0..3.0);
        let b: Vec<Complex64> = (1..n).map(|_| gauss(&mut rng)).collect();
        let t = rng.random_range(0.0..10.0);
        let (g1, g3) = geodesic_vn1_closed(x, &b, t);
        let f = GeodesicFlow::new(GeodesicSpec::new(BlockVelocity::vn1(x, &b)?)).frame(t);
        vn1 = vn1.max((g1 - f[(0, 0)]).norm());
        for (j, z) in g3.iter().enumerate() {
            vn1 = vn1.max((sign * z - f[(j + 1, 0)]).norm());
        }

        let k = rng.random_range(1..=4);
        let b = gaussian_matrix(k, k, Field::Complex, &mut rng);
        let t = rng.random_range(0.0..5.0);
        let (g1, g3) = grassmann_geodesic_2kk(&b, Field::Complex, t)?;
        let f = GeodesicFlow::new(GeodesicSpec::new(BlockVelocity::horizontal(b, Field::Complex)?)).frame(t);
        let e1 = max_abs(&(f.rows(0, k) - g1));
        let e3 = max_abs(&(f.rows(k, k) - g3.scale(sign)));
        gr = gr.max(e1).max(e3);
    }
    let suite = |name: &str, max_error: f64| SuiteResult {
        suite: name.to_string(),
        trials,
        max_error,
        pass: max_error < CLOSED_FORM_TOL,
    };
    Ok(vec![suite("v21", v21), suite("vn1", vn1), suite("grassmann_2kk", gr)])
}

/// Evenly spaced times `0, T/(m-1), …, T`.
pub fn sample_times(t_end: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..count).map(|j| t_end * j as f64 / (count - 1) as f64).collect(),
    }
}

/// Writes sampled frames as CSV.
///
/// The first two records are `n,k,mode` and their values; the third is the
/// column header `t, re_i_j, im_i_j, …` over entries in row-major order.
pub fn write_csv<W: Write>(flow: &GeodesicFlow, times: &[f64], out: W) -> Result<()> {
    let (n, k) = (flow.spec().n(), flow.spec().k());
    let mut w = csv::WriterBuilder::new().flexible(true).from_writer(out);
    w.write_record(["n", "k", "mode"])?;
    w.write_record([n.to_string(), k.to_string(), flow.spec().field().as_str().to_string()])?;
    let mut header = vec!["t".to_string()];
    for i in 0..n {
        for j in 0..k {
            header.push(format!("re_{i}_{j}"));
            header.push(format!("im_{i}_{j}"));
        }
    }
    w.write_record(&header)?;
    for &t in times {
        let p = flow.point(t)?;
        let mut row = Vec::with_capacity(1 + 2 * n * k);
        row.push(format_float(t));
        for i in 0..n {
            for j in 0..k {
                let z = p.cols()[(i, j)];
                row.push(format_float(z.re));
                row.push(format_float(z.im));
            }
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

fn format_float(x: f64) -> String {
    // shortest representation that parses back to the same bits
    format!("{x:?}")
}

/// Parsed geodesic CSV: dimensions, mode and `(t, frame)` rows.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveTable {
    pub n: usize,
    pub k: usize,
    pub mode: Field,
    pub rows: Vec<(f64, CMatrix)>,
}

pub fn read_csv<R: Read>(input: R) -> Result<CurveTable> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(input);
    let mut records = r.records();
    let bad = |msg: &str| Error::InvalidArgument(format!("geodesic csv: {msg}"));
    let _ = records.next().ok_or_else(|| bad("missing metadata header"))??;
    let meta = records.next().ok_or_else(|| bad("missing metadata"))??;
    let parse_usize =
        |s: Option<&str>| -> Result<usize> { s.and_then(|s| s.parse().ok()).ok_or_else(|| bad("bad dimension")) };
    let n = parse_usize(meta.get(0))?;
    let k = parse_usize(meta.get(1))?;
    let mode = match meta.get(2) {
        Some("complex") => Field::Complex,
        Some("real") => Field::Real,
        _ => return Err(bad("bad mode")),
    };
    let _ = records.next().ok_or_else(|| bad("missing column header"))??;
    let mut rows = Vec::new();
    for rec in records {
        let rec = rec?;
        if rec.len() != 1 + 2 * n * k {
            return Err(bad("wrong column count"));
        }
        let vals: Vec<f64> = rec
            .iter()
            .map(|s| s.parse::<f64>().map_err(|_| bad("bad number")))
            .collect::<Result<_>>()?;
        let m = CMatrix::from_fn(n, k, |i, j| {
            let base = 1 + 2 * (i * k + j);
            Complex64::new(vals[base], vals[base + 1])
        });
        rows.push((vals[0], m));
    }
    Ok(CurveTable { n, k, mode, rows })
}
