//! Times the exhaustive identity verification per surface.

use delpezzo::comparison::verify_main_exhaustive;
use delpezzo::exactalg::{EqMode, ModPParams};
use delpezzo::lgseed::SurfaceId;
use std::time::Instant;

fn main() {
    let modp = EqMode::ModP(ModPParams::default());
    for mode in [modp, EqMode::Exact] {
        for surface in SurfaceId::ALL {
            let start = Instant::now();
            let reports = verify_main_exhaustive(surface, mode).unwrap();
            let failed = reports.iter().filter(|r| !r.passed()).count();
            println!(
                "{surface} {mode:?}: {} sequences, {} failed, elapsed {:?}",
                reports.len(),
                failed,
                start.elapsed()
            );
        }
    }
}
