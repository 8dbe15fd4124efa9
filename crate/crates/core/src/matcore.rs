//! Dense matrix algebra over the unitary group U(n) and its real form SO(n).
//!
//! Every matrix lives in one complex container. In [`Field::Real`] mode the
//! imaginary parts are identically zero, so the complex and real geometries
//! share a single code path.
//!
//! The exponential of a skew-Hermitian matrix is computed by diagonalising
//! the Hermitian matrix `iX` and exponentiating its spectrum, which keeps the
//! result unitary to eigensolver accuracy.

use std::sync::OnceLock;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Scalar field of the ambient group: U(n) or SO(n).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Complex,
    Real,
}

impl Field {
    pub fn as_str(self) -> &'static str {
        match self {
            Field::Complex => "complex",
            Field::Real => "real",
        }
    }
}

/// Normalisation of the bi-invariant trace form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricScale {
    /// `-2n Re tr(XY)` on u(n).
    Complex2n,
    /// `-tr(XY)` on so(n).
    Real1,
}

impl MetricScale {
    pub fn for_field(field: Field) -> Self {
        match field {
            Field::Complex => MetricScale::Complex2n,
            Field::Real => MetricScale::Real1,
        }
    }

    /// Multiplier applied to `-tr(XY)` for an n×n ambient algebra.
    pub fn factor(self, n: usize) -> f64 {
        match self {
            MetricScale::Complex2n => 2.0 * n as f64,
            MetricScale::Real1 => 1.0,
        }
    }
}

/// Process-wide tolerance record. Read-only once installed.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Skew-Hermitian residual, relative to `max(1, |X|_max)`.
    pub sym: f64,
    /// Unitarity residual `|U*U - I|_max`.
    pub unit: f64,
    /// Entrywise equality of Stiefel and Grassmann representatives.
    pub eq: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            sym: 1e-12,
            unit: 1e-10,
            eq: 1e-9,
        }
    }
}

static TOLERANCES: OnceLock<Tolerances> = OnceLock::new();

pub fn tolerances() -> &'static Tolerances {
    TOLERANCES.get_or_init(Tolerances::default)
}

/// Installs the global tolerances.
///
/// Fails if different values were already installed or read.
pub fn install_tolerances(tol: Tolerances) -> Result<()> {
    if !(tol.sym > 0.0 && tol.unit > 0.0 && tol.eq > 0.0) {
        return Err(Error::InvalidArgument("tolerances must be positive".into()));
    }
    let current = TOLERANCES.get_or_init(|| tol);
    if *current != tol {
        return Err(Error::InvalidArgument(format!(
            "tolerances already fixed at {current:?}"
        )));
    }
    Ok(())
}

/// Largest absolute entry.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Drops imaginary parts. Used to keep real-mode results exactly real.
pub fn real_part(m: &CMatrix) -> CMatrix {
    m.map(|z| Complex64::new(z.re, 0.0))
}

fn check_entries(m: &CMatrix, field: Field) -> Result<()> {
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    if field == Field::Real && m.iter().any(|z| z.im != 0.0) {
        return Err(Error::ImaginaryInRealMode);
    }
    Ok(())
}

/// A finite complex matrix tagged with its field.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    field: Field,
    data: CMatrix,
}

impl DenseMatrix {
    pub fn new(data: CMatrix, field: Field) -> Result<Self> {
        check_entries(&data, field)?;
        Ok(Self { field, data })
    }

    pub fn from_real(data: &DMatrix<f64>) -> Result<Self> {
        Self::new(data.map(|x| Complex64::new(x, 0.0)), Field::Real)
    }

    pub fn zeros(rows: usize, cols: usize, field: Field) -> Self {
        Self {
            field,
            data: CMatrix::zeros(rows, cols),
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.data.nrows()
    }

    pub fn cols(&self) -> usize {
        self.data.ncols()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.data
    }

    pub fn into_matrix(self) -> CMatrix {
        self.data
    }
}

/// Element of u(n), or so(n) in real mode. Stored in exactly skew form.
#[derive(Clone, Debug, PartialEq)]
pub struct SkewHermitian {
    inner: DenseMatrix,
}

impl SkewHermitian {
    /// Validates `X = -X*` to the symmetric tolerance, then stores `(X - X*)/2`.
    ///
    /// The projection leaves an exactly skew input bit-for-bit unchanged and
    /// forces a purely imaginary (real mode: zero) diagonal.
    pub fn new(data: CMatrix, field: Field) -> Result<Self> {
        if !data.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "skew-Hermitian matrix must be square, got {}x{}",
                data.nrows(),
                data.ncols()
            )));
        }
        check_entries(&data, field)?;
        let adj = data.adjoint();
        let residual = max_abs(&(&data + &adj));
        let scale = max_abs(&data).max(1.0);
        if residual > tolerances().sym * scale {
            return Err(Error::NotSkewHermitian(residual));
        }
        let data = (data - adj).scale(0.5);
        Ok(Self {
            inner: DenseMatrix { field, data },
        })
    }

    pub fn from_dense(m: DenseMatrix) -> Result<Self> {
        let field = m.field;
        Self::new(m.data, field)
    }

    pub fn zeros(n: usize, field: Field) -> Self {
        Self {
            inner: DenseMatrix::zeros(n, n, field),
        }
    }

    pub fn dim(&self) -> usize {
        self.inner.rows()
    }

    pub fn field(&self) -> Field {
        self.inner.field
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.inner.data
    }

    pub fn as_dense(&self) -> &DenseMatrix {
        &self.inner
    }

    pub fn is_zero(&self) -> bool {
        self.inner.data.iter().all(|z| *z == Complex64::new(0.0, 0.0))
    }

    pub fn scale(&self, s: f64) -> SkewHermitian {
        SkewHermitian {
            inner: DenseMatrix {
                field: self.field(),
                data: self.matrix().scale(s),
            },
        }
    }

    /// `q⁻¹ X q` for unitary `q`.
    pub fn conjugate_by(&self, q: &Unitary) -> Result<SkewHermitian> {
        same_shape(self.dim(), q.dim())?;
        let m = q.matrix().adjoint() * self.matrix() * q.matrix();
        SkewHermitian::new(m, self.field())
    }
}

/// Element of U(n), or SO(n) in real mode.
#[derive(Clone, Debug, PartialEq)]
pub struct Unitary {
    inner: DenseMatrix,
}

impl Unitary {
    pub fn new(data: CMatrix, field: Field) -> Result<Self> {
        if !data.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "unitary matrix must be square, got {}x{}",
                data.nrows(),
                data.ncols()
            )));
        }
        check_entries(&data, field)?;
        let n = data.nrows();
        let tol = tolerances().unit;
        let residual = max_abs(&(data.adjoint() * &data - identity(n)));
        if residual > tol {
            return Err(Error::NotUnitary(residual));
        }
        if field == Field::Real && n > 0 {
            let det = data.clone().determinant().re;
            if (det - 1.0).abs() > tol {
                return Err(Error::NotSpecial(det));
            }
        }
        Ok(Self {
            inner: DenseMatrix { field, data },
        })
    }

    pub fn identity(n: usize, field: Field) -> Self {
        Self {
            inner: DenseMatrix {
                field,
                data: identity(n),
            },
        }
    }

    pub fn dim(&self) -> usize {
        self.inner.rows()
    }

    pub fn field(&self) -> Field {
        self.inner.field
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.inner.data
    }

    pub fn into_matrix(self) -> CMatrix {
        self.inner.data
    }

    pub fn inverse(&self) -> Unitary {
        Unitary {
            inner: DenseMatrix {
                field: self.field(),
                data: self.matrix().adjoint(),
            },
        }
    }

    pub fn mul(&self, other: &Unitary) -> Result<Unitary> {
        same_shape(self.dim(), other.dim())?;
        same_field(self.field(), other.field())?;
        Ok(Unitary {
            inner: DenseMatrix {
                field: self.field(),
                data: self.matrix() * other.matrix(),
            },
        })
    }
}

pub(crate) fn same_shape(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch(format!("{a} vs {b}")));
    }
    Ok(())
}

pub(crate) fn same_field(expected: Field, found: Field) -> Result<()> {
    if expected != found {
        return Err(Error::FieldMismatch { expected, found });
    }
    Ok(())
}

/// Bi-invariant inner product on u(n) / so(n).
pub fn trace_inner(x: &SkewHermitian, y: &SkewHermitian, scale: MetricScale) -> Result<f64> {
    same_shape(x.dim(), y.dim())?;
    same_field(x.field(), y.field())?;
    if MetricScale::for_field(x.field()) != scale {
        return Err(Error::InvalidArgument(format!(
            "metric scale {scale:?} does not match field {:?}",
            x.field()
        )));
    }
    Ok(trace_form(x.matrix(), y.matrix(), scale))
}

/// `-c · Re tr(XY)` without validation; `c` from the scale mode.
pub(crate) fn trace_form(x: &CMatrix, y: &CMatrix, scale: MetricScale) -> f64 {
    let n = x.nrows();
    // tr(XY) = Σ_ij X_ij Y_ji, no need to form the product
    let tr: f64 = x.iter().zip(y.transpose().iter()).map(|(a, b)| (a * b).re).sum();
    -scale.factor(n) * tr
}

/// Spectral data of a skew-Hermitian matrix: `X = V diag(iθ) V*`.
#[derive(Clone, Debug)]
pub struct SkewEigen {
    /// θ_j, sorted descending.
    pub freqs: Vec<f64>,
    pub vectors: CMatrix,
    field: Field,
}

impl SkewEigen {
    pub fn new(x: &SkewHermitian) -> Self {
        let n = x.dim();
        let field = x.field();
        if n == 0 {
            return Self {
                freqs: Vec::new(),
                vectors: CMatrix::zeros(0, 0),
                field,
            };
        }
        // iX is Hermitian; X = -i H so θ = -h
        let h = x.matrix().scale(1.0).map(|z| z * I);
        let eig = SymmetricEigen::new(h);
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let freqs = order.iter().map(|&j| -eig.eigenvalues[j]).collect();
        let mut vectors = CMatrix::zeros(n, n);
        for (dst, &src) in order.iter().enumerate() {
            let mut col = eig.eigenvectors.column(src).clone_owned();
            fix_phase(col.as_mut_slice());
            vectors.set_column(dst, &col);
        }
        Self { freqs, vectors, field }
    }

    pub fn dim(&self) -> usize {
        self.freqs.len()
    }

    pub fn eigenvalues(&self) -> Vec<Complex64> {
        self.freqs.iter().map(|&w| Complex64::new(0.0, w)).collect()
    }

    /// `exp(tX)` restricted to its first `cols` columns.
    pub fn exp_columns(&self, t: f64, cols: usize) -> CMatrix {
        let n = self.dim();
        let phases: Vec<Complex64> = self.freqs.iter().map(|&w| Complex64::from_polar(1.0, t * w)).collect();
        let mut out = CMatrix::zeros(n, cols);
        for c in 0..cols {
            for j in 0..n {
                let coeff = phases[j] * self.vectors[(c, j)].conj();
                if coeff == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for r in 0..n {
                    out[(r, c)] += self.vectors[(r, j)] * coeff;
                }
            }
        }
        if self.field == Field::Real {
            out = real_part(&out);
        }
        out
    }

    pub fn exp(&self, t: f64) -> CMatrix {
        self.exp_columns(t, self.dim())
    }
}

/// Rotates a vector so its first non-negligible component is real and positive.
fn fix_phase(v: &mut [Complex64]) {
    let scale = v.iter().fold(0.0_f64, |m, z| m.max(z.norm()));
    if let Some(lead) = v.iter().find(|z| z.norm() > 1e-12 * scale.max(f64::MIN_POSITIVE)) {
        let phase = lead.conj() / lead.norm();
        for z in v.iter_mut() {
            *z *= phase;
        }
    }
}

/// `exp(tX)` as an element of U(n) / SO(n). `t = 0` or `X = 0` gives the identity exactly.
pub fn expm_skew(x: &SkewHermitian, t: f64) -> Result<Unitary> {
    if !t.is_finite() {
        return Err(Error::NonFinite);
    }
    let n = x.dim();
    if t == 0.0 || x.is_zero() {
        return Ok(Unitary::identity(n, x.field()));
    }
    Unitary::new(SkewEigen::new(x).exp(t), x.field())
}

/// Eigenvalues (purely imaginary, descending imaginary part) and a unitary eigenbasis.
///
/// Eigenvectors of a real skew matrix are complex, so the basis is always
/// returned in complex mode.
pub fn eig_skew(x: &SkewHermitian) -> Result<(Vec<Complex64>, Unitary)> {
    let eig = SkewEigen::new(x);
    let values = eig.eigenvalues();
    let vectors = Unitary::new(eig.vectors, Field::Complex)?;
    Ok((values, vectors))
}

/// Haar-distributed element of U(n), or SO(n) in real mode.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, field: Field, rng: &mut R) -> Unitary {
    let g = gaussian_matrix(n, n, field, rng);
    let qr = g.qr();
    let (mut q, r) = qr.unpack();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    if field == Field::Real {
        q = real_part(&q);
        if n > 0 && q.clone().determinant().re < 0.0 {
            for i in 0..n {
                q[(i, 0)] = -q[(i, 0)];
            }
        }
    }
    Unitary {
        inner: DenseMatrix { field, data: q },
    }
}

/// Matrix of independent standard normal entries (complex entries have unit variance per part).
pub fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, field: Field, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = match field {
            Field::Complex => rng.sample(StandardNormal),
            Field::Real => 0.0,
        };
        Complex64::new(re, im)
    })
}

/// Skew-Hermitian matrix with Gaussian entries.
pub fn random_skew<R: Rng + ?Sized>(n: usize, field: Field, rng: &mut R) -> SkewHermitian {
    let g = gaussian_matrix(n, n, field, rng);
    let data = (&g - g.adjoint()).scale(0.5);
    SkewHermitian {
        inner: DenseMatrix { field, data },
    }
}
