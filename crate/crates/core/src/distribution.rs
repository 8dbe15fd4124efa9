//! Lie brackets of the horizontal distribution.
//!
//! Brackets are computed in the Lie algebra and then projected to the tangent
//! space of `V_{n,k}` at the identity class by dropping the lower-right
//! `(n-k)×(n-k)` block. Ranks are real ranks of the resulting vectors.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homspace::BlockVelocity;
use crate::matcore::{gaussian_matrix, same_field, same_shape, CMatrix, Field, SkewHermitian};

/// Relative singular-value threshold for numerical rank.
pub const RANK_THRESHOLD: f64 = 1e-8;

/// Sections with `|B|_F` below this are treated as zero.
pub const ZERO_SECTION: f64 = 1e-10;

pub const DEFAULT_STRONG_SAMPLES: usize = 100;
pub const DEFAULT_STRONG_SEED: u64 = 0x5eed;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BracketReport {
    pub n: usize,
    pub k: usize,
    pub mode: Field,
    pub dim_h: usize,
    pub dim_h_plus_brackets: usize,
    pub target_dim: usize,
    pub generating: bool,
    /// 1 if the distribution is the whole tangent space, 2 if one bracket suffices.
    pub step: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrongBracketSummary {
    pub n: usize,
    pub samples: usize,
    pub tested: usize,
    pub zero_sections: usize,
    pub passed: usize,
    pub pass: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MontgomeryReport {
    pub m: usize,
    pub l: usize,
    pub condition1: bool,
    pub condition2: bool,
    pub possible: bool,
}

/// `XY - YX`.
pub fn lie_bracket(x: &SkewHermitian, y: &SkewHermitian) -> Result<SkewHermitian> {
    same_shape(x.dim(), y.dim())?;
    same_field(x.field(), y.field())?;
    let (a, b) = (x.matrix(), y.matrix());
    SkewHermitian::new(a * b - b * a, x.field())
}

/// Real coordinates of the tangent projection of an `n×n` generator.
fn tangent_vector(m: &CMatrix, k: usize, field: Field) -> Vec<f64> {
    let n = m.nrows();
    let mut out = Vec::with_capacity(2 * n * n);
    for i in 0..n {
        for j in 0..n {
            if i >= k && j >= k {
                continue;
            }
            out.push(m[(i, j)].re);
            if field == Field::Complex {
                out.push(m[(i, j)].im);
            }
        }
    }
    out
}

fn real_rank(vectors: &[Vec<f64>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let rows = vectors[0].len();
    let m = DMatrix::from_fn(rows, vectors.len(), |i, j| vectors[j][i]);
    let sv = m.singular_values();
    let top = sv.iter().cloned().fold(0.0_f64, f64::max);
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > RANK_THRESHOLD * top).count()
}

fn check_proper(n: usize, k: usize) -> Result<()> {
    if k == 0 || k >= n {
        return Err(Error::KOutOfRange { n, k });
    }
    Ok(())
}

/// Rank of the horizontal distribution together with its first brackets.
pub fn bracket_generating_rank(n: usize, k: usize, field: Field) -> Result<BracketReport> {
    check_proper(n, k)?;
    let basis: Vec<SkewHermitian> = BlockVelocity::horizontal_basis(n, k, field)?
        .iter()
        .map(BlockVelocity::embed)
        .collect();
    let mut vectors: Vec<Vec<f64>> = basis.iter().map(|x| tangent_vector(x.matrix(), k, field)).collect();
    let dim_h = real_rank(&vectors);
    for (i, x) in basis.iter().enumerate() {
        for y in &basis[i + 1..] {
            vectors.push(tangent_vector(lie_bracket(x, y)?.matrix(), k, field));
        }
    }
    let dim_h_plus_brackets = real_rank(&vectors);
    let target_dim = BlockVelocity::tangent_dim(n, k, field);
    let generating = dim_h_plus_brackets == target_dim;
    let step = if dim_h == target_dim {
        Some(1)
    } else if generating {
        Some(2)
    } else {
        None
    };
    Ok(BracketReport {
        n,
        k,
        mode: field,
        dim_h,
        dim_h_plus_brackets,
        target_dim,
        generating,
        step,
    })
}

/// Whether `H + [v, H]` fills the tangent space, for a horizontal `v`.
///
/// Returns `None` when `v` is numerically the zero section.
pub fn section_generates(v: &BlockVelocity) -> Result<Option<bool>> {
    let (n, k, field) = (v.n(), v.k(), v.field());
    check_proper(n, k)?;
    if v.b().norm() < ZERO_SECTION {
        return Ok(None);
    }
    let x = BlockVelocity::horizontal(v.b().clone(), field)?.embed();
    let basis = BlockVelocity::horizontal_basis(n, k, field)?;
    let mut vectors = Vec::with_capacity(2 * basis.len());
    for h in &basis {
        let h = h.embed();
        vectors.push(tangent_vector(h.matrix(), k, field));
        vectors.push(tangent_vector(lie_bracket(&x, &h)?.matrix(), k, field));
    }
    Ok(Some(real_rank(&vectors) == BlockVelocity::tangent_dim(n, k, field)))
}

/// Samples random nonzero horizontal sections of complex `V_{n,1}` and checks each generates.
pub fn strongly_bracket_summary(n: usize, samples: usize, seed: u64) -> Result<StrongBracketSummary> {
    check_proper(n, 1)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut summary = StrongBracketSummary {
        n,
        samples,
        tested: 0,
        zero_sections: 0,
        passed: 0,
        pass: true,
    };
    for _ in 0..samples {
        let b = gaussian_matrix(1, n - 1, Field::Complex, &mut rng);
        let v = BlockVelocity::horizontal(b, Field::Complex)?;
        match section_generates(&v)? {
            None => summary.zero_sections += 1,
            Some(ok) => {
                summary.tested += 1;
                if ok {
                    summary.passed += 1;
                }
            }
        }
    }
    summary.pass = summary.passed == summary.tested;
    Ok(summary)
}

/// Strong bracket generation of complex `V_{n,1}` on the default sample.
pub fn strongly_bracket_check_vn1(n: usize) -> Result<bool> {
    Ok(strongly_bracket_summary(n, DEFAULT_STRONG_SAMPLES, DEFAULT_STRONG_SEED)?.pass)
}

/// Necessary conditions for a rank-`l` distribution on an `m`-manifold to be strongly
/// bracket generating: `4 | l`, or `l ≥ m - l + 1`.
pub fn montgomery_condition(m: usize, l: usize) -> Result<MontgomeryReport> {
    if l == 0 || l >= m {
        return Err(Error::InvalidArgument(format!("need 0 < l < m, got m={m}, l={l}")));
    }
    if m - l < 2 {
        return Err(Error::OutOfScope(format!("codimension {} < 2", m - l)));
    }
    let condition1 = l.is_multiple_of(4);
    let condition2 = l > m - l;
    Ok(MontgomeryReport {
        m,
        l,
        condition1,
        condition2,
        possible: condition1 || condition2,
    })
}

/// The dimension condition for the horizontal distribution of `V_{n,k}`.
pub fn montgomery_for_stiefel(n: usize, k: usize, field: Field) -> Result<MontgomeryReport> {
    check_proper(n, k)?;
    montgomery_condition(
        BlockVelocity::tangent_dim(n, k, field),
        BlockVelocity::horizontal_dim(n, k, field),
    )
}
