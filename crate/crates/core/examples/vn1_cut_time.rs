//! First return of V(n,1) geodesics to the block-diagonal set L.

use num_complex::Complex64;
use sr_stiefel::cutlocus::in_l;
use sr_stiefel::geodesic::{first_vanishing_time, geodesic_vn1_closed, length};
use sr_stiefel::homspace::{BlockVelocity, StiefelPoint};
use sr_stiefel::matcore::Field;

fn main() -> sr_stiefel::Result<()> {
    let x = 1.5;
    let b = [
        Complex64::new(0.4, -0.2),
        Complex64::new(0.1, 0.7),
        Complex64::new(-0.5, 0.0),
    ];
    let t = first_vanishing_time(x, &b)?;
    let (g1, g3) = geodesic_vn1_closed(x, &b, t);
    let largest = g3.iter().map(|z| z.norm()).fold(0.0, f64::max);
    println!("first vanishing time {t:.6}, |gamma3| = {largest:.1e}, gamma1 = {g1:.6}");

    let mut cols = vec![g1];
    cols.extend(&g3);
    let p = StiefelPoint::new(
        sr_stiefel::matcore::CMatrix::from_column_slice(4, 1, &cols),
        Field::Complex,
    )?;
    println!("endpoint in L: {}", in_l(&p));
    println!("length {:.6}", length(&BlockVelocity::vn1(x, &b)?, t)?);
    Ok(())
}
