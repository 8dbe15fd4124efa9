//! Cut-locus predicates and desk-scale experiments.
//!
//! A point is in the cut locus of the identity class when it is reached
//! optimally by more than one horizontal geodesic. The search here covers
//! normal geodesics only; for `k ≥ 2` that is all the reports claim.

use std::cmp::Ordering;
use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geodesic::{
    geodesic_vn1_closed, grassmann_geodesic_2kk, length, mirror_velocity, GeodesicFlow, GeodesicSpec,
};
use crate::homspace::{BlockVelocity, StiefelPoint};
use crate::matcore::{gaussian_matrix, max_abs, random_unitary, tolerances, CMatrix, Field, SkewHermitian, Unitary};

pub const DEFAULT_EPS_HIT: f64 = 1e-8;
pub const DEFAULT_EPS_V: f64 = 1e-3;

/// Step size in velocity space below which refinement stops.
pub const REFINE_RESOLUTION: f64 = 1e-10;

/// Relative slack for counting an arrival as length-minimal.
pub const LENGTH_SLACK: f64 = 1e-6;

/// Scan points with endpoint error above this are not refined.
const COARSE_ERROR: f64 = 0.5;

const BISECTION_STEPS: usize = 60;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetKind {
    BlockDiagonalL,
    Antidiagonal,
    Generic,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TargetClass {
    pub kind: TargetKind,
    pub point: StiefelPoint,
    pub mode: Field,
}

/// Membership in `L`: block-diagonal classes other than the identity.
pub fn in_l(p: &StiefelPoint) -> bool {
    max_abs(&p.lower_block()) <= tolerances().eq && !p.is_identity()
}

/// For `n = 2k`: top block zero and bottom block unitary.
pub fn is_antidiagonal(p: &StiefelPoint) -> bool {
    if p.n() != 2 * p.k() || max_abs(&p.top_block()) > tolerances().eq {
        return false;
    }
    let low = p.lower_block();
    let k = p.k();
    max_abs(&(low.adjoint() * &low - CMatrix::identity(k, k))) <= tolerances().eq
}

pub fn classify(p: &StiefelPoint) -> TargetClass {
    let kind = if in_l(p) {
        TargetKind::BlockDiagonalL
    } else if is_antidiagonal(p) {
        TargetKind::Antidiagonal
    } else {
        TargetKind::Generic
    };
    TargetClass {
        kind,
        point: p.clone(),
        mode: p.field(),
    }
}

/// The unique cut point of real `V_{n,1}`: first column `(-1, 0, …, 0)`.
pub fn real_vn1_cutpoint(n: usize) -> Result<StiefelPoint> {
    if n < 2 {
        return Err(Error::KOutOfRange { n, k: 1 });
    }
    let mut cols = CMatrix::zeros(n, 1);
    cols[(0, 0)] = Complex64::new(-1.0, 0.0);
    StiefelPoint::new(cols, Field::Real)
}

/// Velocities and times scanned by [`search_minimizers`].
///
/// Every velocity is normalised to `|B|_F = 1`; fibre coordinates are drawn
/// from `[-a_range, a_range]`. When the fibre has at most one coordinate and
/// the horizontal space at most two, a lattice of `a_steps × b_steps` is
/// used (for `V_{2,1}`: values of `λ` times phases of `x₂`). Otherwise
/// `points` velocities come from a shifted Halton sequence.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct VelocityGrid {
    pub a_range: f64,
    pub a_steps: usize,
    pub b_steps: usize,
    pub points: usize,
    pub t_max: f64,
    pub t_steps: usize,
    pub seed: u64,
    /// Number of best scan candidates passed to refinement.
    pub keep: usize,
}

impl Default for VelocityGrid {
    fn default() -> Self {
        Self {
            a_range: 3.0,
            a_steps: 64,
            b_steps: 64,
            points: 10_000,
            t_max: 2.0 * PI,
            t_steps: 256,
            seed: 0,
            keep: 256,
        }
    }
}

impl VelocityGrid {
    fn fibre_dim(n: usize, k: usize, field: Field) -> usize {
        BlockVelocity::tangent_dim(n, k, field) - BlockVelocity::horizontal_dim(n, k, field)
    }

    fn is_lattice(n: usize, k: usize, field: Field) -> bool {
        Self::fibre_dim(n, k, field) <= 1 && BlockVelocity::horizontal_dim(n, k, field) <= 2
    }

    /// All scanned velocities, in a fixed order.
    pub fn velocities(&self, n: usize, k: usize, field: Field) -> Result<Vec<BlockVelocity>> {
        if !(self.t_max > 0.0 && self.t_max.is_finite() && self.a_range.is_finite() && self.a_range >= 0.0) {
            return Err(Error::InvalidArgument("grid ranges must be finite and positive".into()));
        }
        if self.t_steps == 0 || self.keep == 0 {
            return Err(Error::EmptyGrid);
        }
        let da = Self::fibre_dim(n, k, field);
        let db = BlockVelocity::horizontal_dim(n, k, field);
        if db == 0 {
            return Err(Error::KOutOfRange { n, k });
        }
        let mut out = Vec::new();
        if Self::is_lattice(n, k, field) {
            let a_vals: Vec<f64> = match da {
                0 => vec![],
                _ if self.a_steps == 0 => return Err(Error::EmptyGrid),
                _ if self.a_steps == 1 => vec![0.0],
                _ => (0..self.a_steps)
                    .map(|j| -self.a_range + 2.0 * self.a_range * j as f64 / (self.a_steps - 1) as f64)
                    .collect(),
            };
            let b_dirs: Vec<Vec<f64>> = if db == 1 {
                vec![vec![1.0], vec![-1.0]]
            } else {
                if self.b_steps == 0 {
                    return Err(Error::EmptyGrid);
                }
                (0..self.b_steps)
                    .map(|j| {
                        let phi = 2.0 * PI * j as f64 / self.b_steps as f64;
                        vec![phi.cos(), phi.sin()]
                    })
                    .collect()
            };
            let a_iter: Vec<Option<f64>> = if da == 0 {
                vec![None]
            } else {
                a_vals.into_iter().map(Some).collect()
            };
            for a in &a_iter {
                for b in &b_dirs {
                    let mut c: Vec<f64> = a.iter().copied().collect();
                    c.extend_from_slice(b);
                    out.push(BlockVelocity::from_coords(n, k, field, &c)?);
                }
            }
        } else {
            if self.points == 0 {
                return Err(Error::EmptyGrid);
            }
            let pairs = db.div_ceil(2);
            let dims = da + 2 * pairs;
            if dims > PRIMES.len() {
                return Err(Error::InvalidArgument(format!(
                    "quasi-random grid supports at most {} dimensions, V({n},{k}) needs {dims}",
                    PRIMES.len()
                )));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
            let shift: Vec<f64> = (0..dims).map(|_| rng.random::<f64>()).collect();
            let mut index = 1u64;
            while out.len() < self.points {
                let u: Vec<f64> = (0..dims)
                    .map(|d| (radical_inverse(index, PRIMES[d]) + shift[d]).fract())
                    .collect();
                index += 1;
                let mut c: Vec<f64> = u[..da].iter().map(|x| self.a_range * (2.0 * x - 1.0)).collect();
                let mut g = Vec::with_capacity(2 * pairs);
                for p in 0..pairs {
                    let u1 = u[da + 2 * p].max(f64::MIN_POSITIVE);
                    let u2 = u[da + 2 * p + 1];
                    let r = (-2.0 * u1.ln()).sqrt();
                    g.push(r * (2.0 * PI * u2).cos());
                    g.push(r * (2.0 * PI * u2).sin());
                }
                g.truncate(db);
                let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
                if norm < 1e-6 {
                    continue;
                }
                c.extend(g.iter().map(|x| x / norm));
                out.push(BlockVelocity::from_coords(n, k, field, &c)?);
            }
        }
        Ok(out)
    }
}

const PRIMES: [u64; 64] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109,
    113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191, 193, 197, 199, 211, 223, 227, 229, 233, 239,
    241, 251, 257, 263, 269, 271, 277, 281, 283, 293, 307, 311,
];

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut r = 0.0;
    while i > 0 {
        r += f * (i % base) as f64;
        i /= base;
        f *= inv;
    }
    r
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Arrival {
    pub velocity: BlockVelocity,
    pub t: f64,
    pub length: f64,
    pub endpoint_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinimizerReport {
    pub target: TargetClass,
    pub grid: VelocityGrid,
    pub eps_hit: f64,
    pub eps_v: f64,
    pub scanned_velocities: usize,
    pub refined_candidates: usize,
    /// Length-minimal arrivals, sorted by length, time and velocity.
    pub arrivals: Vec<Arrival>,
    pub clusters: usize,
    pub min_length: Option<f64>,
    /// Only normal geodesics were searched.
    pub normal_only: bool,
    pub pass: bool,
}

/// Velocities of a grid with their flows, reusable across targets.
pub struct PreparedGrid {
    n: usize,
    k: usize,
    field: Field,
    grid: VelocityGrid,
    flows: Vec<GeodesicFlow>,
}

impl PreparedGrid {
    pub fn new(n: usize, k: usize, field: Field, grid: &VelocityGrid) -> Result<Self> {
        let flows = grid
            .velocities(n, k, field)?
            .into_par_iter()
            .map(|v| GeodesicFlow::new(GeodesicSpec::new(v)))
            .collect();
        Ok(Self {
            n,
            k,
            field,
            grid: grid.clone(),
            flows,
        })
    }

    pub fn len(&self) -> usize {
        self.flows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flows.is_empty()
    }
}

struct Candidate {
    index: usize,
    t: f64,
    err: f64,
}

fn frame_residual(frame: &CMatrix, target: &CMatrix, field: Field, out: &mut Vec<f64>) {
    out.clear();
    for (a, b) in frame.iter().zip(target.iter()) {
        let d = a - b;
        out.push(d.re);
        if field == Field::Complex {
            out.push(d.im);
        }
    }
}

/// Damped Gauss–Newton on `w ↦ γ_w(1) - target` in tangent coordinates.
fn refine(n: usize, k: usize, field: Field, w0: Vec<f64>, target: &CMatrix) -> Option<Vec<f64>> {
    let d = w0.len();
    let eval = |w: &[f64], buf: &mut Vec<f64>| -> Option<()> {
        let v = BlockVelocity::from_coords(n, k, field, w).ok()?;
        let frame = GeodesicFlow::new(GeodesicSpec::new(v)).frame(1.0);
        frame_residual(&frame, target, field, buf);
        Some(())
    };
    let norm = |r: &[f64]| r.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut w = w0;
    let mut r = Vec::new();
    eval(&w, &mut r)?;
    let mut cost = norm(&r);
    let mut mu = 1e-3;
    let m = r.len();
    let (mut rp, mut rm) = (Vec::new(), Vec::new());
    for _ in 0..200 {
        if cost < 1e-14 {
            break;
        }
        let mut jac = DMatrix::<f64>::zeros(m, d);
        for j in 0..d {
            let h = 1e-7 * w[j].abs().max(1.0);
            let mut wp = w.clone();
            wp[j] += h;
            let mut wm = w.clone();
            wm[j] -= h;
            eval(&wp, &mut rp)?;
            eval(&wm, &mut rm)?;
            for i in 0..m {
                jac[(i, j)] = (rp[i] - rm[i]) / (2.0 * h);
            }
        }
        let rv = DVector::from_column_slice(&r);
        let jt = jac.transpose();
        let jtj = &jt * &jac;
        let g = &jt * rv;
        let mut improved = false;
        for _ in 0..30 {
            let mut lhs = jtj.clone();
            for i in 0..d {
                lhs[(i, i)] += mu * (1.0 + jtj[(i, i)]);
            }
            let Some(step) = lhs.cholesky().map(|c| c.solve(&(-&g))) else {
                mu *= 10.0;
                continue;
            };
            let trial: Vec<f64> = w.iter().zip(step.iter()).map(|(a, b)| a + b).collect();
            let mut rt = Vec::new();
            eval(&trial, &mut rt)?;
            let ct = norm(&rt);
            if ct < cost {
                let small = step.norm() <= REFINE_RESOLUTION * (1.0 + norm(&w));
                w = trial;
                r = rt;
                cost = ct;
                mu = (mu / 3.0).max(1e-12);
                improved = !small;
                break;
            }
            mu *= 4.0;
        }
        if !improved {
            break;
        }
    }
    Some(w)
}

fn compare_arrivals(a: &Arrival, b: &Arrival) -> Ordering {
    a.length.total_cmp(&b.length).then(a.t.total_cmp(&b.t)).then_with(|| {
        let (ca, cb) = (a.velocity.to_coords(), b.velocity.to_coords());
        ca.iter()
            .zip(&cb)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    })
}

/// Greedy clustering: an arrival joins the first cluster whose representative is within `eps_v`.
pub fn count_clusters(arrivals: &[Arrival], eps_v: f64) -> usize {
    let mut reps: Vec<&BlockVelocity> = Vec::new();
    for a in arrivals {
        if !reps.iter().any(|r| r.distance(&a.velocity) <= eps_v) {
            reps.push(&a.velocity);
        }
    }
    reps.len()
}

fn validate_eps(eps_hit: f64, eps_v: f64) -> Result<()> {
    if !(eps_hit >= 10.0 * tolerances().eq) {
        return Err(Error::InvalidArgument(format!(
            "eps_hit = {eps_hit:e} must be at least 10 × the equality tolerance"
        )));
    }
    if !(eps_v > REFINE_RESOLUTION) || !eps_v.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "eps_v = {eps_v:e} must exceed the refinement resolution {REFINE_RESOLUTION:e}"
        )));
    }
    Ok(())
}

/// Grid scan plus local refinement for geodesics from the identity reaching `target`.
pub fn search_minimizers(
    target: &StiefelPoint,
    grid: &VelocityGrid,
    eps_hit: f64,
    eps_v: f64,
) -> Result<MinimizerReport> {
    validate_eps(eps_hit, eps_v)?;
    let prepared = PreparedGrid::new(target.n(), target.k(), target.field(), grid)?;
    search_minimizers_prepared(&prepared, target, eps_hit, eps_v)
}

pub fn search_minimizers_prepared(
    prepared: &PreparedGrid,
    target: &StiefelPoint,
    eps_hit: f64,
    eps_v: f64,
) -> Result<MinimizerReport> {
    validate_eps(eps_hit, eps_v)?;
    let (n, k, field) = (prepared.n, prepared.k, prepared.field);
    if (target.n(), target.k(), target.field()) != (n, k, field) {
        return Err(Error::DimensionMismatch(format!(
            "target in V({},{}) {:?}, grid for V({n},{k}) {field:?}",
            target.n(),
            target.k(),
            target.field()
        )));
    }
    let grid = &prepared.grid;
    let mut report = MinimizerReport {
        target: classify(target),
        grid: grid.clone(),
        eps_hit,
        eps_v,
        scanned_velocities: prepared.len(),
        refined_candidates: 0,
        arrivals: Vec::new(),
        clusters: 0,
        min_length: None,
        normal_only: true,
        pass: false,
    };
    if target.is_identity() {
        report.arrivals.push(Arrival {
            velocity: BlockVelocity::zero(n, k, field)?,
            t: 0.0,
            length: 0.0,
            endpoint_error: max_abs(&(target.cols() - CMatrix::identity(n, k))),
        });
        report.clusters = 1;
        report.min_length = Some(0.0);
        report.pass = true;
        return Ok(report);
    }
    let tc = target.cols();
    let steps = grid.t_steps;
    let mut candidates: Vec<Candidate> = prepared
        .flows
        .par_iter()
        .enumerate()
        .flat_map_iter(|(index, flow)| {
            let errs: Vec<f64> = (0..=steps)
                .map(|j| {
                    let t = grid.t_max * j as f64 / steps as f64;
                    (flow.frame(t) - tc).norm()
                })
                .collect();
            let mut found = Vec::new();
            for j in 1..=steps {
                let left = errs[j] <= errs[j - 1];
                let right = j == steps || errs[j] < errs[j + 1];
                if left && right && errs[j] < COARSE_ERROR {
                    found.push(Candidate {
                        index,
                        t: grid.t_max * j as f64 / steps as f64,
                        err: errs[j],
                    });
                }
            }
            found
        })
        .collect();
    candidates.sort_by(|a, b| {
        a.err
            .total_cmp(&b.err)
            .then(a.index.cmp(&b.index))
            .then(a.t.total_cmp(&b.t))
    });
    candidates.truncate(grid.keep);
    report.refined_candidates = candidates.len();

    let mut arrivals: Vec<Arrival> = candidates
        .par_iter()
        .filter_map(|c| {
            let v0 = &prepared.flows[c.index].spec().v;
            let w0: Vec<f64> = v0.to_coords().iter().map(|x| x * c.t).collect();
            let w = refine(n, k, field, w0, tc)?;
            let vw = BlockVelocity::from_coords(n, k, field, &w).ok()?;
            let t = vw.b().norm();
            if !(t > 1e-12) {
                return None;
            }
            let v = vw.scale(1.0 / t);
            let frame = GeodesicFlow::new(GeodesicSpec::new(v.clone())).frame(t);
            let endpoint_error = max_abs(&(frame - tc));
            if endpoint_error > eps_hit {
                return None;
            }
            let length = length(&v, t).ok()?;
            Some(Arrival {
                velocity: v,
                t,
                length,
                endpoint_error,
            })
        })
        .collect();
    if arrivals.is_empty() {
        return Ok(report);
    }
    let min_length = arrivals.iter().map(|a| a.length).fold(f64::INFINITY, f64::min);
    arrivals.retain(|a| a.length <= min_length * (1.0 + LENGTH_SLACK));
    arrivals.sort_by(compare_arrivals);
    report.clusters = count_clusters(&arrivals, eps_v);
    report.min_length = Some(min_length);
    report.arrivals = arrivals;
    report.pass = true;
    Ok(report)
}

/// Squared Frobenius norm of the lower block, differentiated: `Re tr(M* M')`.
fn lower_block_slope(flow: &GeodesicFlow, t: f64) -> (f64, f64) {
    let k = flow.spec().k();
    let n = flow.spec().n();
    let m = flow.frame(t).rows(k, n - k).clone_owned();
    let dm = flow.derivative(t).rows(k, n - k).clone_owned();
    let slope: f64 = m.iter().zip(dm.iter()).map(|(a, b)| (a.conj() * b).re).sum();
    (slope, max_abs(&m))
}

/// First positive time at which the geodesic meets a block-diagonal class.
///
/// Local minima of the lower-block norm are located by sign changes of its
/// derivative on a uniform grid, refined by bisection, and accepted when
/// the lower block vanishes to the equality tolerance.
pub fn first_block_diagonal_hit(flow: &GeodesicFlow, horizon: f64) -> Option<f64> {
    let per_period = 32.0;
    let steps = ((horizon * flow.max_frequency() * per_period / (2.0 * PI)).ceil() as usize).clamp(512, 1 << 20);
    let dt = horizon / steps as f64;
    let mut prev = lower_block_slope(flow, dt).0;
    for j in 2..=steps {
        let t = dt * j as f64;
        let (slope, _) = lower_block_slope(flow, t);
        if prev < 0.0 && slope >= 0.0 {
            let (mut lo, mut hi) = (t - dt, t);
            for _ in 0..BISECTION_STEPS {
                let mid = 0.5 * (lo + hi);
                if lower_block_slope(flow, mid).0 < 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let root = 0.5 * (lo + hi);
            if lower_block_slope(flow, root).1 < tolerances().eq {
                return Some(root);
            }
        }
        prev = slope;
    }
    None
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LSubsetSummary {
    pub n: usize,
    pub k: usize,
    pub mode: Option<Field>,
    pub samples: usize,
    pub tested: usize,
    pub skipped_zero: usize,
    pub skipped_identity: usize,
    pub missed: usize,
    pub passed: usize,
    pub max_endpoint_error: f64,
    pub max_length_gap: f64,
    pub min_velocity_gap: f64,
    pub max_rotated_mirror_error: f64,
    pub normal_only: bool,
    pub pass: bool,
}

/// A velocity whose geodesic returns to a block-diagonal class at a known time.
///
/// In a suitable basis `V` splits into blocks `[[iα, σ], [-σ, 0]]` (real mode:
/// `[[αJ, σI], [-σI, 0]]`); each block returns when `t √(α² + 4σ²) ∈ 2πℤ`,
/// and the parameters are chosen so that all blocks return together at `T`.
fn commensurate_velocity<R: Rng>(n: usize, k: usize, field: Field, rng: &mut R) -> Result<BlockVelocity> {
    let r = k.min(n - k);
    let t_hit: f64 = rng.random_range(1.0..3.0);
    let mut alpha = vec![0.0; k];
    let mut sigma = vec![0.0; k];
    let draw = |rng: &mut R| -> (f64, f64) {
        let m = rng.random_range(1..=2) as f64;
        let w = 2.0 * PI * m / t_hit;
        let a = rng.random_range(-0.8..0.8) * w;
        (a, (w * w - a * a).sqrt() / 2.0)
    };
    let mut a_mat = CMatrix::zeros(k, k);
    match field {
        Field::Complex => {
            for j in 0..k {
                if j < r {
                    (alpha[j], sigma[j]) = draw(rng);
                } else {
                    alpha[j] = rng.random_range(-2.0..2.0);
                }
                a_mat[(j, j)] = Complex64::new(0.0, alpha[j]);
            }
        }
        Field::Real => {
            let mut j = 0;
            while j < k {
                let paired = if j < r { j + 1 < r } else { j + 1 < k };
                if j < r {
                    let (a, s) = draw(rng);
                    sigma[j] = s;
                    if paired {
                        sigma[j + 1] = s;
                        alpha[j] = a;
                    } else {
                        // a lone real block cannot rotate: α = 0, 2σ·T = 2πm
                        sigma[j] = PI * rng.random_range(1..=2) as f64 / t_hit;
                    }
                } else if paired {
                    alpha[j] = rng.random_range(-2.0..2.0);
                }
                if paired {
                    a_mat[(j, j + 1)] = Complex64::new(alpha[j], 0.0);
                    a_mat[(j + 1, j)] = Complex64::new(-alpha[j], 0.0);
                    j += 2;
                } else {
                    j += 1;
                }
            }
        }
    }
    let u = random_unitary(k, field, rng);
    let w = random_unitary(n - k, field, rng);
    let mut core = CMatrix::zeros(k, n - k);
    for j in 0..r {
        core[(j, j)] = Complex64::new(sigma[j], 0.0);
    }
    let a = u.matrix() * a_mat * u.matrix().adjoint();
    let b = u.matrix() * core * w.matrix().adjoint();
    let a = match field {
        Field::Real => crate::matcore::real_part(&a),
        Field::Complex => a,
    };
    let b = match field {
        Field::Real => crate::matcore::real_part(&b),
        Field::Complex => b,
    };
    let a = (&a - a.adjoint()).scale(0.5);
    BlockVelocity::new(SkewHermitian::new(a, field)?, b)
}

fn random_velocity<R: Rng>(n: usize, k: usize, field: Field, rng: &mut R) -> Result<BlockVelocity> {
    let a = match field {
        Field::Complex => crate::matcore::random_skew(k, field, rng),
        Field::Real => SkewHermitian::zeros(k, field),
    };
    BlockVelocity::new(a, gaussian_matrix(k, n - k, field, rng))
}

fn smallest_singular_value(b: &CMatrix) -> f64 {
    let sv = b.clone().singular_values();
    let top = sv.iter().cloned().fold(0.0_f64, f64::max);
    sv.iter()
        .cloned()
        .filter(|&s| s > 1e-12 * top)
        .fold(f64::INFINITY, f64::min)
}

enum SampleOutcome {
    SkippedZero,
    SkippedIdentity,
    Missed,
    Checked {
        endpoint_error: f64,
        length_gap: f64,
        velocity_gap: f64,
        rotated_error: f64,
        ok: bool,
    },
}

fn check_l_sample(v: BlockVelocity, rot: &Unitary, eps_hit: f64, eps_v: f64) -> Result<SampleOutcome> {
    if v.b().norm() < 1e-12 {
        return Ok(SampleOutcome::SkippedZero);
    }
    let horizon = 4.0 * PI / smallest_singular_value(v.b());
    let flow = GeodesicFlow::new(GeodesicSpec::new(v.clone()));
    let Some(t) = first_block_diagonal_hit(&flow, horizon) else {
        return Ok(SampleOutcome::Missed);
    };
    let p = flow.point(t)?;
    if p.is_identity() {
        return Ok(SampleOutcome::SkippedIdentity);
    }
    let field = v.field();
    let mirror = mirror_velocity(&v, &Unitary::identity(v.n() - v.k(), field))?;
    let q = GeodesicFlow::new(GeodesicSpec::new(mirror.clone())).point(t)?;
    let endpoint_error = p.distance(&q)?;
    let (l1, l2) = (length(&v, t)?, length(&mirror, t)?);
    let length_gap = (l1 - l2).abs();
    let velocity_gap = v.distance(&mirror);
    let rotated = mirror_velocity(&v, rot)?;
    let rotated_error = p.distance(&GeodesicFlow::new(GeodesicSpec::new(rotated)).point(t)?)?;
    let ok = endpoint_error <= eps_hit
        && length_gap <= 1e-10 * l1.max(1.0)
        && velocity_gap > eps_v
        && rotated_error <= eps_hit
        && in_l(&p);
    Ok(SampleOutcome::Checked {
        endpoint_error,
        length_gap,
        velocity_gap,
        rotated_error,
        ok,
    })
}

/// Checks that block-diagonal points are reached by the mirrored pair `(A, ±B)` at equal length.
pub fn verify_l_subset_cutlocus(n: usize, k: usize, field: Field, samples: usize, seed: u64) -> Result<LSubsetSummary> {
    if k == 0 || k >= n {
        return Err(Error::KOutOfRange { n, k });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut work = Vec::with_capacity(samples);
    for _ in 0..samples {
        let v = if k == 1 {
            random_velocity(n, k, field, &mut rng)?
        } else {
            commensurate_velocity(n, k, field, &mut rng)?
        };
        let rot = random_unitary(n - k, field, &mut rng);
        work.push((v, rot));
    }
    let outcomes: Vec<Result<SampleOutcome>> = work
        .into_par_iter()
        .map(|(v, rot)| check_l_sample(v, &rot, DEFAULT_EPS_HIT, DEFAULT_EPS_V))
        .collect();
    let mut s = LSubsetSummary {
        n,
        k,
        mode: Some(field),
        samples,
        min_velocity_gap: f64::INFINITY,
        normal_only: k >= 2,
        ..Default::default()
    };
    for o in outcomes {
        match o? {
            SampleOutcome::SkippedZero => s.skipped_zero += 1,
            SampleOutcome::SkippedIdentity => s.skipped_identity += 1,
            SampleOutcome::Missed => s.missed += 1,
            SampleOutcome::Checked {
                endpoint_error,
                length_gap,
                velocity_gap,
                rotated_error,
                ok,
            } => {
                s.tested += 1;
                s.passed += ok as usize;
                s.max_endpoint_error = s.max_endpoint_error.max(endpoint_error);
                s.max_length_gap = s.max_length_gap.max(length_gap);
                s.min_velocity_gap = s.min_velocity_gap.min(velocity_gap);
                s.max_rotated_mirror_error = s.max_rotated_mirror_error.max(rotated_error);
            }
        }
    }
    if s.tested == 0 {
        s.min_velocity_gap = 0.0;
    }
    s.pass = s.missed == 0 && s.tested > 0 && s.passed == s.tested;
    Ok(s)
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AntidiagonalSummary {
    pub k: usize,
    pub mode: Option<Field>,
    pub samples: usize,
    pub t0: f64,
    /// Largest deviation of `γ¹(T₀)` from 0 and of `γ³(T₀)` from `-√k B*`, unitary directions.
    pub max_unitary_error: f64,
    /// Largest disagreement between the closed form and the generic geodesic at `T₀`.
    pub max_flow_error: f64,
    /// Smallest `π/(2σ_min) - T₀` over non-unitary directions; `None` when `k = 1`.
    pub min_delay: Option<f64>,
    /// Smallest spectral norm of `γ¹` on `[0, T₀]` over non-unitary directions; `None` when `k = 1`.
    pub min_gamma1_norm: Option<f64>,
    pub max_round_trip_error: f64,
    pub pass: bool,
}

/// Unitary directions reach antidiagonal points at `T₀ = π√k/2`, other directions later,
/// and the endpoint determines the direction.
pub fn verify_antidiagonal_not_cut(k: usize, field: Field, samples: usize, seed: u64) -> Result<AntidiagonalSummary> {
    if k == 0 {
        return Err(Error::KOutOfRange { n: 0, k });
    }
    let kf = k as f64;
    let t0 = PI * kf.sqrt() / 2.0;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = AntidiagonalSummary {
        k,
        mode: Some(field),
        samples,
        t0,
        ..Default::default()
    };
    let mut min_delay = f64::INFINITY;
    let mut min_gamma1_norm = f64::INFINITY;
    for _ in 0..samples {
        // unitary direction, including orientation-reversing ones in real mode
        let mut u = random_unitary(k, field, &mut rng).into_matrix();
        if field == Field::Real && rng.random::<bool>() {
            for i in 0..k {
                u[(i, 0)] = -u[(i, 0)];
            }
        }
        let b = u.scale(1.0 / kf.sqrt());
        let (g1, g3) = grassmann_geodesic_2kk(&b, field, t0)?;
        let expected = -b.adjoint().scale(kf.sqrt());
        s.max_unitary_error = s.max_unitary_error.max(max_abs(&g1)).max(max_abs(&(&g3 - &expected)));
        let v = BlockVelocity::horizontal(b.clone(), field)?;
        let frame = GeodesicFlow::new(GeodesicSpec::new(v)).frame(t0);
        let flow_err = max_abs(&(frame.rows(0, k) - &g1)).max(max_abs(&(frame.rows(k, k) - &g3)));
        s.max_flow_error = s.max_flow_error.max(flow_err);
        let back = -g3.adjoint().scale(1.0 / kf.sqrt());
        s.max_round_trip_error = s.max_round_trip_error.max(max_abs(&(back - &b)));

        // non-unitary invertible direction with |B|_F = 1
        let g = gaussian_matrix(k, k, field, &mut rng);
        let b = g.scale(1.0 / g.norm());
        let sv = b.clone().singular_values();
        let smin = sv.iter().cloned().fold(f64::INFINITY, f64::min);
        let smax = sv.iter().cloned().fold(0.0_f64, f64::max);
        if k > 1 && smin > 1e-8 && smax - smin > 1e-6 {
            min_delay = min_delay.min(PI / (2.0 * smin) - t0);
            let grid = 256;
            for j in 0..=grid {
                let t = t0 * j as f64 / grid as f64;
                let (g1, _) = grassmann_geodesic_2kk(&b, field, t)?;
                let norm = g1.clone().singular_values().iter().cloned().fold(0.0_f64, f64::max);
                min_gamma1_norm = min_gamma1_norm.min(norm);
            }
        }
    }
    // every direction is unitary up to scale when k = 1
    if k > 1 {
        s.min_delay = Some(min_delay);
        s.min_gamma1_norm = Some(min_gamma1_norm);
    }
    let non_unitary_ok = k == 1 || (min_delay > 0.0 && min_gamma1_norm > 1e-9);
    s.pass = samples > 0
        && s.max_unitary_error <= 1e-9
        && s.max_flow_error <= 1e-9
        && s.max_round_trip_error <= 1e-10
        && non_unitary_ok;
    Ok(s)
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct UniquenessSummary {
    pub n: usize,
    pub trials: usize,
    pub sinc_grid_points: usize,
    pub sinc_decreasing: bool,
    /// Smallest `|tan(a)/a - tan(b)/b|` over sampled `0 < a < b < π`.
    pub min_tan_gap: f64,
    /// Smallest `|γ¹_{v₁}(T) - γ¹_{v₂}(T)|` over sampled pairs with opposite `λ`.
    pub min_gamma1_gap: f64,
    /// Largest error recovering `B` from `γ³(T)` given `λ` and `|B|`.
    pub max_inversion_error: f64,
    pub pass: bool,
}

fn tan_ratio(x: f64) -> f64 {
    x.tan() / x
}

/// Numerical checks of the analytic facts behind uniqueness of minimizers off `L` on `V_{n,1}`.
pub fn uniqueness_case_checks(n: usize, trials: usize, seed: u64) -> Result<UniquenessSummary> {
    if n < 2 {
        return Err(Error::KOutOfRange { n, k: 1 });
    }
    let mut s = UniquenessSummary {
        n,
        trials,
        min_tan_gap: f64::INFINITY,
        min_gamma1_gap: f64::INFINITY,
        ..Default::default()
    };
    let xs: Vec<f64> = (0..=31_200).map(|j| 0.01 + 1e-4 * j as f64).collect();
    s.sinc_grid_points = xs.len();
    s.sinc_decreasing = xs.windows(2).all(|w| w[1].sin() / w[1] < w[0].sin() / w[0]);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let lambda: f64 = rng.random_range(0.1..3.0);
        let b = gaussian_matrix(1, n - 1, Field::Complex, &mut rng);
        let b: Vec<Complex64> = b.iter().copied().collect();
        let bn = b.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let scale = rng.random_range(0.1..2.0) / bn;
        let b: Vec<Complex64> = b.iter().map(|z| z * scale).collect();
        let bb: f64 = b.iter().map(|z| z.norm_sqr()).sum();
        let root = (lambda * lambda + 4.0 * bb).sqrt();
        let t = rng.random_range(0.05..0.95) * 2.0 * PI / root;
        let (a, c) = (t * lambda / 2.0, t * root / 2.0);
        if (a - PI / 2.0).abs() > 1e-6 && (c - PI / 2.0).abs() > 1e-6 {
            s.min_tan_gap = s.min_tan_gap.min((tan_ratio(a) - tan_ratio(c)).abs());
        }
        let e = gaussian_matrix(1, n - 1, Field::Complex, &mut rng);
        let en = e.norm();
        let e: Vec<Complex64> = e.iter().map(|z| z * (bb.sqrt() / en)).collect();
        let (g_plus, g3) = geodesic_vn1_closed(lambda, &b, t);
        let (g_minus, _) = geodesic_vn1_closed(-lambda, &e, t);
        s.min_gamma1_gap = s.min_gamma1_gap.min((g_plus - g_minus).norm());

        // γ³ = -B̄ c(λ, |B|, T) with c ≠ 0 off L, so B is recovered from γ³
        let front = Complex64::from_polar(1.0, -t * (root + lambda) / 2.0);
        let common = front * (Complex64::from_polar(1.0, t * root) - 1.0) / (Complex64::i() * root);
        let err = g3
            .iter()
            .zip(&b)
            .map(|(g, z)| (-(g / common).conj() - z).norm())
            .fold(0.0_f64, f64::max);
        s.max_inversion_error = s.max_inversion_error.max(err);
    }
    if trials == 0 {
        s.min_tan_gap = 0.0;
        s.min_gamma1_gap = 0.0;
    }
    s.pass = s.sinc_decreasing
        && (trials == 0 || (s.min_tan_gap > 1e-12 && s.min_gamma1_gap > 1e-12 && s.max_inversion_error <= 1e-10));
    Ok(s)
}

/// Velocity `(λ, x₂)` on `V_{2,1}` with `|x₂| = 1` reaching the `L` point `(e^{ic}, 0)` first, at `T = 2π/√(λ²+4)`.
pub fn v21_l_target_velocity(c: f64, phase: f64) -> Result<(BlockVelocity, f64)> {
    let rho = 1.0 - c / PI;
    if !(rho.abs() < 1.0) {
        return Err(Error::InvalidArgument(format!("angle {c} must lie in (0, 2π)")));
    }
    let lambda = 2.0 * rho / (1.0 - rho * rho).sqrt();
    let v = BlockVelocity::vn1(lambda, &[Complex64::from_polar(1.0, phase)])?;
    let t = 2.0 * PI / (lambda * lambda + 4.0).sqrt();
    Ok((v, t))
}
