//! Grid search for minimizing geodesics on V(2,1), on and off the set L.

use num_complex::Complex64;
use sr_stiefel::cutlocus::{search_minimizers_prepared, PreparedGrid, VelocityGrid, DEFAULT_EPS_HIT, DEFAULT_EPS_V};
use sr_stiefel::geodesic::{GeodesicFlow, GeodesicSpec};
use sr_stiefel::homspace::{BlockVelocity, StiefelPoint};
use sr_stiefel::matcore::{CMatrix, Field};

fn main() -> sr_stiefel::Result<()> {
    let grid = VelocityGrid::default();
    let prepared = PreparedGrid::new(2, 1, Field::Complex, &grid)?;

    let on_l = CMatrix::from_column_slice(2, 1, &[Complex64::from_polar(1.0, 2.0), Complex64::new(0.0, 0.0)]);
    let on_l = StiefelPoint::new(on_l, Field::Complex)?;
    let v = BlockVelocity::vn1(1.0, &[Complex64::new(1.0, 0.0)])?;
    let off_l = GeodesicFlow::new(GeodesicSpec::new(v)).point(0.3)?;

    for (name, target) in [("on L", on_l), ("off L", off_l)] {
        let r = search_minimizers_prepared(&prepared, &target, DEFAULT_EPS_HIT, DEFAULT_EPS_V)?;
        println!(
            "{name}: {} clusters among {} arrivals, min length {:?}",
            r.clusters,
            r.arrivals.len(),
            r.min_length
        );
    }
    Ok(())
}
