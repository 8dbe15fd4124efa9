//! Bracket generation of the horizontal distribution and the dimension obstruction.

use sr_stiefel::distribution::{bracket_generating_rank, montgomery_for_stiefel, strongly_bracket_check_vn1};
use sr_stiefel::matcore::Field;

fn main() -> sr_stiefel::Result<()> {
    for (n, k) in [(2, 1), (4, 2), (4, 3), (6, 2)] {
        let r = bracket_generating_rank(n, k, Field::Complex)?;
        let m = montgomery_for_stiefel(n, k, Field::Complex).ok();
        println!(
            "V({n},{k}): dim H = {}, H + [H,H] = {} of {}, step {:?}, strongly generating possible: {:?}",
            r.dim_h,
            r.dim_h_plus_brackets,
            r.target_dim,
            r.step,
            m.map(|m| m.possible)
        );
    }
    for n in 2..=6 {
        println!(
            "V({n},1) strongly bracket generating: {}",
            strongly_bracket_check_vn1(n)?
        );
    }
    Ok(())
}
