//! Stiefel and Grassmann points, tangent blocks and the bundle structure.
//!
//! A point of `V_{n,k}` is stored as the first `k` columns of any unitary
//! representative; a point of `G_{n,k}` as the orthogonal projector onto the
//! span of those columns. The fibre `U(k)` acts on the right of the `n×k`
//! frame. In real mode the structure group of the Grassmann quotient also
//! contains orientation-reversing elements, but the projector does not see
//! them, so no extra bookkeeping is needed.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{
    max_abs, same_field, same_shape, tolerances, trace_form, CMatrix, DenseMatrix, Field, MetricScale, SkewHermitian,
    Unitary, I,
};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn check_nk(n: usize, k: usize) -> Result<()> {
    if k == 0 || k > n {
        return Err(Error::KOutOfRange { n, k });
    }
    Ok(())
}

/// A point of `V_{n,k}` as an `n×k` matrix with orthonormal columns.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixRecord", into = "MatrixRecord")]
pub struct StiefelPoint {
    n: usize,
    k: usize,
    field: Field,
    cols: CMatrix,
}

impl StiefelPoint {
    pub fn new(cols: CMatrix, field: Field) -> Result<Self> {
        let (n, k) = cols.shape();
        check_nk(n, k)?;
        DenseMatrix::new(cols.clone(), field)?;
        let residual = max_abs(&(cols.adjoint() * &cols - CMatrix::identity(k, k)));
        if residual > tolerances().unit {
            return Err(Error::NotOrthonormal(residual));
        }
        Ok(Self { n, k, field, cols })
    }

    /// The class of the identity: the first `k` standard basis vectors.
    pub fn identity(n: usize, k: usize, field: Field) -> Result<Self> {
        check_nk(n, k)?;
        Ok(Self {
            n,
            k,
            field,
            cols: CMatrix::identity(n, k),
        })
    }

    pub(crate) fn from_parts_unchecked(cols: CMatrix, field: Field) -> Self {
        let (n, k) = cols.shape();
        Self { n, k, field, cols }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn cols(&self) -> &CMatrix {
        &self.cols
    }

    /// Upper `k×k` block.
    pub fn top_block(&self) -> CMatrix {
        self.cols.rows(0, self.k).clone_owned()
    }

    /// Lower `(n-k)×k` block.
    pub fn lower_block(&self) -> CMatrix {
        self.cols.rows(self.k, self.n - self.k).clone_owned()
    }

    /// Largest entrywise deviation from another point.
    pub fn distance(&self, other: &StiefelPoint) -> Result<f64> {
        if self.cols.shape() != other.cols.shape() {
            return Err(Error::DimensionMismatch(format!(
                "V({},{}) vs V({},{})",
                self.n, self.k, other.n, other.k
            )));
        }
        same_field(self.field, other.field)?;
        Ok(max_abs(&(&self.cols - &other.cols)))
    }

    /// Class equality at the equality tolerance.
    pub fn approx_eq(&self, other: &StiefelPoint) -> bool {
        self.distance(other).is_ok_and(|d| d <= tolerances().eq)
    }

    pub fn is_identity(&self) -> bool {
        max_abs(&(&self.cols - CMatrix::identity(self.n, self.k))) <= tolerances().eq
    }

    /// Right action of the fibre group: `p ↦ p·u`.
    pub fn right_act(&self, u: &Unitary) -> Result<StiefelPoint> {
        same_shape(self.k, u.dim())?;
        same_field(self.field, u.field())?;
        Ok(Self::from_parts_unchecked(&self.cols * u.matrix(), self.field))
    }

    /// Squared norm of a tangent vector `ẏ` (an `n×k` matrix) at this point.
    ///
    /// Equal to the trace metric of the skew generator `V` with `ẏ = q V e`
    /// for any unitary completion `q`.
    pub fn tangent_metric(&self, ydot: &CMatrix) -> Result<f64> {
        if ydot.shape() != self.cols.shape() {
            return Err(Error::DimensionMismatch(format!(
                "tangent {:?} at point {:?}",
                ydot.shape(),
                self.cols.shape()
            )));
        }
        let full = ydot.norm_squared();
        let vertical = (self.cols.adjoint() * ydot).norm_squared();
        let c = MetricScale::for_field(self.field).factor(self.n);
        Ok(c * (2.0 * full - vertical))
    }
}

/// A point of `G_{n,k}` as a rank-`k` orthogonal projector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixRecord", into = "MatrixRecord")]
pub struct GrassmannPoint {
    n: usize,
    k: usize,
    field: Field,
    projector: CMatrix,
}

impl GrassmannPoint {
    pub fn new(projector: CMatrix, k: usize, field: Field) -> Result<Self> {
        if !projector.is_square() {
            return Err(Error::NotProjector("not square".into()));
        }
        let n = projector.nrows();
        check_nk(n, k)?;
        DenseMatrix::new(projector.clone(), field)?;
        let herm = max_abs(&(&projector - projector.adjoint()));
        if herm > tolerances().unit {
            return Err(Error::NotProjector(format!("not Hermitian ({herm:e})")));
        }
        let idem = max_abs(&(&projector * &projector - &projector));
        if idem > tolerances().eq {
            return Err(Error::NotProjector(format!("not idempotent ({idem:e})")));
        }
        let tr = projector.trace().re;
        if (tr - k as f64).abs() > tolerances().eq {
            return Err(Error::NotProjector(format!("trace {tr}, expected {k}")));
        }
        Ok(Self { n, k, field, projector })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn projector(&self) -> &CMatrix {
        &self.projector
    }

    pub fn distance(&self, other: &GrassmannPoint) -> Result<f64> {
        same_shape(self.n, other.n)?;
        same_field(self.field, other.field)?;
        Ok(max_abs(&(&self.projector - &other.projector)))
    }

    pub fn approx_eq(&self, other: &GrassmannPoint) -> bool {
        self.k == other.k && self.distance(other).is_ok_and(|d| d <= tolerances().eq)
    }
}

/// A tangent vector at the identity class, `[[A, B], [-B*, 0]]`.
///
/// `A` is the vertical (fibre) part, `B` the horizontal part.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixRecord", into = "MatrixRecord")]
pub struct BlockVelocity {
    n: usize,
    k: usize,
    field: Field,
    a: SkewHermitian,
    b: CMatrix,
}

impl BlockVelocity {
    pub fn new(a: SkewHermitian, b: CMatrix) -> Result<Self> {
        let k = a.dim();
        if b.nrows() != k {
            return Err(Error::DimensionMismatch(format!(
                "A is {k}x{k} but B has {} rows",
                b.nrows()
            )));
        }
        let n = k + b.ncols();
        check_nk(n, k)?;
        let field = a.field();
        DenseMatrix::new(b.clone(), field)?;
        Ok(Self { n, k, field, a, b })
    }

    pub fn horizontal(b: CMatrix, field: Field) -> Result<Self> {
        let k = b.nrows();
        Self::new(SkewHermitian::zeros(k, field), b)
    }

    pub fn vertical(a: SkewHermitian, n: usize) -> Result<Self> {
        let k = a.dim();
        check_nk(n, k)?;
        Self::new(a, CMatrix::zeros(k, n - k))
    }

    pub fn zero(n: usize, k: usize, field: Field) -> Result<Self> {
        check_nk(n, k)?;
        Self::new(SkewHermitian::zeros(k, field), CMatrix::zeros(k, n - k))
    }

    /// The `V_{n,1}` velocity with `A = [[iλ]]` and row `B`.
    pub fn vn1(lambda: f64, b: &[Complex64]) -> Result<Self> {
        let a = CMatrix::from_element(1, 1, Complex64::new(0.0, lambda));
        let b = CMatrix::from_row_slice(1, b.len(), b);
        Self::new(SkewHermitian::new(a, Field::Complex)?, b)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn a(&self) -> &SkewHermitian {
        &self.a
    }

    pub fn b(&self) -> &CMatrix {
        &self.b
    }

    pub fn is_horizontal(&self) -> bool {
        max_abs(self.a.matrix()) <= tolerances().sym
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.iter().all(|z| *z == ZERO)
    }

    /// The `n×n` skew-Hermitian generator.
    pub fn embed(&self) -> SkewHermitian {
        let (n, k) = (self.n, self.k);
        let mut m = CMatrix::zeros(n, n);
        m.view_mut((0, 0), (k, k)).copy_from(self.a.matrix());
        m.view_mut((0, k), (k, n - k)).copy_from(&self.b);
        m.view_mut((k, 0), (n - k, k)).copy_from(&(-self.b.adjoint()));
        SkewHermitian::new(m, self.field).expect("block embedding is skew by construction")
    }

    /// Real dimension of the tangent space of `V_{n,k}`.
    pub fn tangent_dim(n: usize, k: usize, field: Field) -> usize {
        match field {
            Field::Complex => 2 * n * k - k * k,
            Field::Real => n * k - k * (k + 1) / 2,
        }
    }

    /// Real dimension of the horizontal subspace.
    pub fn horizontal_dim(n: usize, k: usize, field: Field) -> usize {
        match field {
            Field::Complex => 2 * k * (n - k),
            Field::Real => k * (n - k),
        }
    }

    /// Real coordinates: the free parameters of `A`, then those of `B`.
    ///
    /// For `A`, each diagonal entry contributes its imaginary part (complex
    /// mode only) and each strictly upper entry its real and imaginary parts
    /// (real part only in real mode). `B` is read row-major.
    pub fn to_coords(&self) -> Vec<f64> {
        let complex = self.field == Field::Complex;
        let mut out = Vec::with_capacity(Self::tangent_dim(self.n, self.k, self.field));
        let a = self.a.matrix();
        for i in 0..self.k {
            if complex {
                out.push(a[(i, i)].im);
            }
            for j in i + 1..self.k {
                out.push(a[(i, j)].re);
                if complex {
                    out.push(a[(i, j)].im);
                }
            }
        }
        for i in 0..self.k {
            for j in 0..self.n - self.k {
                out.push(self.b[(i, j)].re);
                if complex {
                    out.push(self.b[(i, j)].im);
                }
            }
        }
        out
    }

    pub fn from_coords(n: usize, k: usize, field: Field, coords: &[f64]) -> Result<Self> {
        check_nk(n, k)?;
        let dim = Self::tangent_dim(n, k, field);
        if coords.len() != dim {
            return Err(Error::DimensionMismatch(format!(
                "{} coordinates for a {dim}-dimensional tangent space",
                coords.len()
            )));
        }
        let complex = field == Field::Complex;
        let mut it = coords.iter().copied();
        let mut next = || it.next().expect("length checked");
        let mut a = CMatrix::zeros(k, k);
        for i in 0..k {
            if complex {
                a[(i, i)] = Complex64::new(0.0, next());
            }
            for j in i + 1..k {
                let re = next();
                let im = if complex { next() } else { 0.0 };
                a[(i, j)] = Complex64::new(re, im);
                a[(j, i)] = -Complex64::new(re, im).conj();
            }
        }
        let mut b = CMatrix::zeros(k, n - k);
        for i in 0..k {
            for j in 0..n - k {
                let re = next();
                let im = if complex { next() } else { 0.0 };
                b[(i, j)] = Complex64::new(re, im);
            }
        }
        Self::new(SkewHermitian::new(a, field)?, b)
    }

    /// Coordinate basis of the tangent space.
    pub fn basis(n: usize, k: usize, field: Field) -> Result<Vec<BlockVelocity>> {
        let dim = Self::tangent_dim(n, k, field);
        (0..dim)
            .map(|j| {
                let mut c = vec![0.0; dim];
                c[j] = 1.0;
                Self::from_coords(n, k, field, &c)
            })
            .collect()
    }

    /// Coordinate basis of the horizontal subspace: one unit (or `i`) entry of `B` each.
    pub fn horizontal_basis(n: usize, k: usize, field: Field) -> Result<Vec<BlockVelocity>> {
        check_nk(n, k)?;
        let mut out = Vec::with_capacity(Self::horizontal_dim(n, k, field));
        let units: &[Complex64] = match field {
            Field::Complex => &[ONE, I],
            Field::Real => &[ONE],
        };
        for i in 0..k {
            for j in 0..n - k {
                for &u in units {
                    let mut b = CMatrix::zeros(k, n - k);
                    b[(i, j)] = u;
                    out.push(Self::horizontal(b, field)?);
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: f64) -> BlockVelocity {
        BlockVelocity {
            a: self.a.scale(s),
            b: self.b.scale(s),
            ..self.clone()
        }
    }

    /// Frobenius distance between the embedded generators.
    pub fn distance(&self, other: &BlockVelocity) -> f64 {
        (self.embed().matrix() - other.embed().matrix()).norm()
    }
}

/// First `k` columns of a unitary representative.
pub fn canonicalize(q: &Unitary, k: usize) -> Result<StiefelPoint> {
    let n = q.dim();
    check_nk(n, k)?;
    Ok(StiefelPoint::from_parts_unchecked(
        q.matrix().columns(0, k).clone_owned(),
        q.field(),
    ))
}

/// The bundle projection `V_{n,k} → G_{n,k}`.
pub fn project_to_grassmann(p: &StiefelPoint) -> GrassmannPoint {
    let projector = p.cols() * p.cols().adjoint();
    GrassmannPoint {
        n: p.n(),
        k: p.k(),
        field: p.field(),
        projector,
    }
}

/// Splits a tangent generator at the identity class into vertical and horizontal parts.
pub fn split_tangent(v: &SkewHermitian, k: usize) -> Result<(BlockVelocity, BlockVelocity)> {
    let n = v.dim();
    check_nk(n, k)?;
    let m = v.matrix();
    let lower = m.view((k, k), (n - k, n - k));
    let residual = lower.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()));
    if residual > tolerances().sym * max_abs(m).max(1.0) {
        return Err(Error::NotStiefelTangent(residual));
    }
    let field = v.field();
    let a = SkewHermitian::new(m.view((0, 0), (k, k)).clone_owned(), field)?;
    let b = m.view((0, k), (k, n - k)).clone_owned();
    let lower_left = m.view((k, 0), (n - k, k));
    if max_abs(&(lower_left + b.adjoint())) != 0.0 {
        // the generator was projected to exact skew form, so this block is -B* exactly
        return Err(Error::NotSkewHermitian(max_abs(&(lower_left + b.adjoint()))));
    }
    Ok((BlockVelocity::vertical(a, n)?, BlockVelocity::horizontal(b, field)?))
}

/// The connection one-form: the vertical `u(k)` component.
pub fn connection_form(v: &BlockVelocity) -> SkewHermitian {
    v.a().clone()
}

/// The sub-Riemannian (trace) metric of two tangent vectors.
pub fn metric(v: &BlockVelocity, w: &BlockVelocity) -> Result<f64> {
    if v.n != w.n || v.k != w.k {
        return Err(Error::DimensionMismatch(format!(
            "V({},{}) vs V({},{})",
            v.n, v.k, w.n, w.k
        )));
    }
    same_field(v.field, w.field)?;
    Ok(trace_form(
        v.embed().matrix(),
        w.embed().matrix(),
        MetricScale::for_field(v.field),
    ))
}

/// Wire format shared by all matrix-valued types.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixRecord {
    pub n: usize,
    pub k: usize,
    pub mode: Field,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixRecord {
    pub fn new(n: usize, k: usize, mode: Field, m: &CMatrix) -> Self {
        let rows = |f: fn(&Complex64) -> f64| {
            (0..m.nrows())
                .map(|i| (0..m.ncols()).map(|j| f(&m[(i, j)])).collect())
                .collect()
        };
        Self {
            n,
            k,
            mode,
            re: rows(|z| z.re),
            im: rows(|z| z.im),
        }
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        let rows = self.re.len();
        let cols = self.re.first().map_or(0, Vec::len);
        if self.im.len() != rows
            || self
                .re
                .iter()
                .zip(&self.im)
                .any(|(r, i)| r.len() != cols || i.len() != cols)
        {
            return Err(Error::DimensionMismatch("ragged re/im arrays".into()));
        }
        let m = DMatrix::from_fn(rows, cols, |i, j| Complex64::new(self.re[i][j], self.im[i][j]));
        DenseMatrix::new(m, self.mode).map(DenseMatrix::into_matrix)
    }

    fn expect_shape(&self, m: &CMatrix, rows: usize, cols: usize) -> Result<()> {
        if m.shape() != (rows, cols) {
            return Err(Error::DimensionMismatch(format!(
                "expected {rows}x{cols} for n={}, k={}, got {}x{}",
                self.n,
                self.k,
                m.nrows(),
                m.ncols()
            )));
        }
        Ok(())
    }
}

impl From<StiefelPoint> for MatrixRecord {
    fn from(p: StiefelPoint) -> Self {
        MatrixRecord::new(p.n, p.k, p.field, &p.cols)
    }
}

impl TryFrom<MatrixRecord> for StiefelPoint {
    type Error = Error;

    fn try_from(r: MatrixRecord) -> Result<Self> {
        let m = r.to_matrix()?;
        r.expect_shape(&m, r.n, r.k)?;
        StiefelPoint::new(m, r.mode)
    }
}

impl From<GrassmannPoint> for MatrixRecord {
    fn from(p: GrassmannPoint) -> Self {
        MatrixRecord::new(p.n, p.k, p.field, &p.projector)
    }
}

impl TryFrom<MatrixRecord> for GrassmannPoint {
    type Error = Error;

    fn try_from(r: MatrixRecord) -> Result<Self> {
        let m = r.to_matrix()?;
        r.expect_shape(&m, r.n, r.n)?;
        GrassmannPoint::new(m, r.k, r.mode)
    }
}

impl From<BlockVelocity> for MatrixRecord {
    fn from(v: BlockVelocity) -> Self {
        MatrixRecord::new(v.n, v.k, v.field, v.embed().matrix())
    }
}

impl TryFrom<MatrixRecord> for BlockVelocity {
    type Error = Error;

    fn try_from(r: MatrixRecord) -> Result<Self> {
        let m = r.to_matrix()?;
        r.expect_shape(&m, r.n, r.n)?;
        let v = SkewHermitian::new(m, r.mode)?;
        let (vert, hor) = split_tangent(&v, r.k)?;
        BlockVelocity::new(vert.a, hor.b)
    }
}
