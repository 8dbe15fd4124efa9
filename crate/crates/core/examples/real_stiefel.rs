//! Real Stiefel manifolds: every unit direction of V(n,1) reaches (-1, 0, ..., 0) at time pi.

use sr_stiefel::cutlocus::{real_vn1_cutpoint, search_minimizers, VelocityGrid, DEFAULT_EPS_HIT, DEFAULT_EPS_V};

fn main() -> sr_stiefel::Result<()> {
    for n in 2..=4 {
        let target = real_vn1_cutpoint(n)?;
        let r = search_minimizers(&target, &VelocityGrid::default(), DEFAULT_EPS_HIT, DEFAULT_EPS_V)?;
        let times: Vec<f64> = r.arrivals.iter().take(3).map(|a| a.t).collect();
        println!(
            "V({n},1): {} clusters, min length {:?}, first times {times:.6?}",
            r.clusters, r.min_length
        );
    }
    Ok(())
}
