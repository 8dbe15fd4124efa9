//! Reference computations shared by the integration tests.
//!
//! Everything here is written from the definitions with plain loops and
//! truncated power series, without calling the library's numerical code.

#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub type M = DMatrix<Complex64>;

pub const TAYLOR_TERMS: usize = 40;
pub const SIMPSON_PANELS: usize = 2048;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn gauss(rng: &mut ChaCha8Rng) -> f64 {
    StandardNormal.sample(rng)
}

pub fn cgauss(rng: &mut ChaCha8Rng) -> Complex64 {
    c(gauss(rng), gauss(rng))
}

pub fn random_matrix(rows: usize, cols: usize, real: bool, rng: &mut ChaCha8Rng) -> M {
    M::from_fn(rows, cols, |_, _| if real { c(gauss(rng), 0.0) } else { cgauss(rng) })
}

pub fn random_skew(n: usize, real: bool, rng: &mut ChaCha8Rng) -> M {
    let g = random_matrix(n, n, real, rng);
    (&g - g.adjoint()).scale(0.5)
}

pub fn one_norm(m: &M) -> f64 {
    (0..m.ncols())
        .map(|j| m.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn max_abs(m: &M) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `exp(X)` by scaling and squaring with a truncated Taylor series.
///
/// At most [`TAYLOR_TERMS`] terms; the sum stops once a term drops below roundoff.
pub fn expm_series(x: &M) -> M {
    let n = x.nrows();
    let norm = one_norm(x);
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let y = x.scale(0.5_f64.powi(squarings as i32));
    let mut term = M::identity(n, n);
    let mut sum = M::identity(n, n);
    for j in 1..=TAYLOR_TERMS {
        term = &term * &y / c(j as f64, 0.0);
        sum += &term;
        if one_norm(&term) < 1e-3 * f64::EPSILON {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// `[[A, B], [-B*, 0]]`.
pub fn generator(a: &M, b: &M) -> M {
    let k = a.nrows();
    let n = k + b.ncols();
    let mut v = M::zeros(n, n);
    v.view_mut((0, 0), (k, k)).copy_from(a);
    v.view_mut((0, k), (k, n - k)).copy_from(b);
    v.view_mut((k, 0), (n - k, k)).copy_from(&(-b.adjoint()));
    v
}

/// `exp(tV) · diag(exp(-tA), I)`.
pub fn frame(a: &M, b: &M, t: f64) -> M {
    let k = a.nrows();
    let v = generator(a, b);
    let n = v.nrows();
    let mut fibre = M::identity(n, n);
    fibre.view_mut((0, 0), (k, k)).copy_from(&expm_series(&a.scale(-t)));
    expm_series(&v.scale(t)) * fibre
}

/// First `k` columns of [`frame`].
pub fn geodesic(a: &M, b: &M, t: f64) -> M {
    frame(a, b, t).columns(0, a.nrows()).into_owned()
}

/// `-c Re Σ_ij X_ij Y_ji`, with `c = 2n` (complex) or `1` (real).
pub fn trace_form(x: &M, y: &M, real: bool) -> f64 {
    let n = x.nrows();
    let scale = if real { 1.0 } else { 2.0 * n as f64 };
    let mut s = c(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            s += x[(i, j)] * y[(j, i)];
        }
    }
    -scale * s.re
}

/// The block-off-diagonal part of an `n×n` matrix, split after row and column `k`.
pub fn horizontal_part(m: &M, k: usize) -> M {
    let n = m.nrows();
    M::from_fn(n, n, |i, j| if (i < k) != (j < k) { m[(i, j)] } else { c(0.0, 0.0) })
}

/// Squared speed at `t` from a central difference of the frame.
///
/// The left-invariant velocity `Q⁻¹ Q̇` is projected onto the horizontal
/// blocks and measured with the trace form.
pub fn fd_speed_squared(a: &M, b: &M, t: f64, real: bool) -> f64 {
    let h = 1e-6 * t.abs().max(1.0);
    let q = frame(a, b, t);
    let dq = (frame(a, b, t + h) - frame(a, b, t - h)) / c(2.0 * h, 0.0);
    let w = horizontal_part(&(q.adjoint() * dq), a.nrows());
    trace_form(&w, &w, real)
}

/// Simpson's rule for `∫₀ᵀ f`.
pub fn simpson(f: impl Fn(f64) -> f64, t_end: f64) -> f64 {
    let n = SIMPSON_PANELS;
    let h = t_end / n as f64;
    let mut s = f(0.0) + f(t_end);
    for j in 1..n {
        let w = if j % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(j as f64 * h);
    }
    s * h / 3.0
}

/// Haar-like unitary from Gram–Schmidt on a Gaussian matrix; real mode has determinant one.
pub fn random_unitary(n: usize, real: bool, rng: &mut ChaCha8Rng) -> M {
    let g = random_matrix(n, n, real, rng);
    let mut q = M::zeros(n, n);
    for j in 0..n {
        let mut v = g.column(j).into_owned();
        for i in 0..j {
            let qi = q.column(i).into_owned();
            let p = qi.dotc(&v);
            v -= qi * p;
        }
        let norm = v.norm();
        q.set_column(j, &(v / c(norm, 0.0)));
    }
    if real && q.determinant().re < 0.0 {
        let col = -q.column(0).into_owned();
        q.set_column(0, &col);
    }
    q
}

pub fn unitarity_error(q: &M) -> f64 {
    let n = q.ncols();
    max_abs(&(q.adjoint() * q - M::identity(n, n)))
}

/// Rank of real vectors by Gram–Schmidt with reorthogonalization.
///
/// A vector counts when its residual exceeds `rel_tol` times its own norm.
pub fn gram_rank(vectors: &[Vec<f64>], rel_tol: f64) -> usize {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for v in vectors {
        let norm0 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm0 == 0.0 {
            continue;
        }
        let mut r = v.clone();
        for _ in 0..2 {
            for q in &basis {
                let p: f64 = q.iter().zip(&r).map(|(a, b)| a * b).sum();
                r.iter_mut().zip(q).for_each(|(x, y)| *x -= p * y);
            }
        }
        let norm = r.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > rel_tol * norm0 {
            basis.push(r.iter().map(|x| x / norm).collect());
        }
    }
    basis.len()
}

/// Entries of `m` outside the lower-right `(n-k)×(n-k)` block, as real coordinates.
pub fn tangent_coords(m: &M, k: usize) -> Vec<f64> {
    let n = m.nrows();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i >= k && j >= k {
                continue;
            }
            out.push(m[(i, j)].re);
            out.push(m[(i, j)].im);
        }
    }
    out
}

/// Horizontal generators `[[0, E], [-E*, 0]]` for `E` a unit or imaginary-unit matrix unit.
pub fn horizontal_generators(n: usize, k: usize, real: bool) -> Vec<M> {
    let mut out = Vec::new();
    let units: &[Complex64] = if real {
        &[c(1.0, 0.0)]
    } else {
        &[c(1.0, 0.0), c(0.0, 1.0)]
    };
    for i in 0..k {
        for j in 0..n - k {
            for &u in units {
                let mut b = M::zeros(k, n - k);
                b[(i, j)] = u;
                out.push(generator(&M::zeros(k, k), &b));
            }
        }
    }
    out
}

pub fn bracket(x: &M, y: &M) -> M {
    x * y - y * x
}

pub fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo..hi)
}
