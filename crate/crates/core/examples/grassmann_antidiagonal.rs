//! Horizontal geodesics of V(2k,k) in unitary directions reach antidiagonal points at pi*sqrt(k)/2.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sr_stiefel::cutlocus::verify_antidiagonal_not_cut;
use sr_stiefel::geodesic::grassmann_geodesic_2kk;
use sr_stiefel::matcore::{max_abs, random_unitary, Field};

fn main() -> sr_stiefel::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for k in 1..=3 {
        let kf = k as f64;
        let b = random_unitary(k, Field::Complex, &mut rng)
            .into_matrix()
            .scale(1.0 / kf.sqrt());
        let t0 = std::f64::consts::PI * kf.sqrt() / 2.0;
        let (g1, g3) = grassmann_geodesic_2kk(&b, Field::Complex, t0)?;
        let expected = -b.adjoint().scale(kf.sqrt());
        println!(
            "k = {k}: T0 = {t0:.6}, |gamma1| = {:.1e}, |gamma3 + sqrt(k) B*| = {:.1e}",
            max_abs(&g1),
            max_abs(&(g3 - expected))
        );
        let s = verify_antidiagonal_not_cut(k, Field::Complex, 50, 7)?;
        println!(
            "        50 samples pass: {}, min delay of other directions: {:?}",
            s.pass, s.min_delay
        );
    }
    Ok(())
}
