//! Geodesics of V(2,1): the closed form against the generic exponential, and the CSV trace.

use std::f64::consts::PI;

use num_complex::Complex64;
use sr_stiefel::geodesic::{geodesic_v21_closed, sample_times, speed_squared, write_csv, GeodesicFlow, GeodesicSpec};
use sr_stiefel::homspace::BlockVelocity;

fn main() -> sr_stiefel::Result<()> {
    let (lambda, x2) = (0.8, Complex64::from_polar(1.0, 0.3));
    let v = BlockVelocity::vn1(lambda, &[x2])?;
    let flow = GeodesicFlow::new(GeodesicSpec::new(v.clone()));
    println!("speed^2 = {}", speed_squared(&v));
    for t in [0.5, 1.0, 2.0, PI] {
        let g = geodesic_v21_closed(lambda, x2, t);
        let y = flow.point(t)?;
        let gap = (g[0] - y.cols()[(0, 0)]).norm().max((g[2] - y.cols()[(1, 0)]).norm());
        println!(
            "t = {t:.4}: gamma1 = {:.6}, gamma3 = {:.6}, gap to generic = {gap:.1e}",
            g[0], g[2]
        );
    }
    write_csv(&flow, &sample_times(PI, 5), std::io::stdout())?;
    Ok(())
}
