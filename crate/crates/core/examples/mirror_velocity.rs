//! Mirrored velocities reach the same block-diagonal point at the same length.

use sr_stiefel::cutlocus::verify_l_subset_cutlocus;
use sr_stiefel::matcore::Field;

fn main() -> sr_stiefel::Result<()> {
    for (n, k) in [(2, 1), (3, 1), (4, 2), (5, 2), (6, 3)] {
        let s = verify_l_subset_cutlocus(n, k, Field::Complex, 20, 1)?;
        println!(
            "V({n},{k}): {}/{} pass, endpoint gap {:.1e}, length gap {:.1e}, velocity gap {:.3}",
            s.passed, s.tested, s.max_endpoint_error, s.max_length_gap, s.min_velocity_gap
        );
    }
    Ok(())
}
