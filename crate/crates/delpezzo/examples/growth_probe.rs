//! Prints size statistics of the mutation tree per surface.

use delpezzo::lgseed::{scalar, LGSeed, SurfaceId};
use std::time::Instant;

fn dfs(seed: &LGSeed, used: &mut Vec<usize>, stats: &mut Vec<(i64, i64, usize)>) {
    let depth = used.len();
    for i in 0..seed.rank() {
        if used.contains(&i) {
            continue;
        }
        let v = seed.directions()[i];
        let max_pairing = seed
            .potential()
            .terms()
            .map(|(m, _)| scalar(v.vec(), [m.exponent(0), m.exponent(1)]).unwrap())
            .max()
            .unwrap()
            .max(0);
        let next = seed.mutate(i).unwrap();
        let s = &mut stats[depth];
        s.0 = s.0.max(max_pairing);
        s.1 = s.1.max(next.potential().max_abs_exponent());
        s.2 = s.2.max(next.potential().num_terms());
        used.push(i);
        dfs(&next, used, stats);
        used.pop();
    }
}

fn main() {
    for surface in SurfaceId::ALL {
        let start = Instant::now();
        let n = surface.rank();
        let mut stats = vec![(0i64, 0i64, 0usize); n];
        dfs(&surface.initial_seed(), &mut Vec::new(), &mut stats);
        println!("{surface}: elapsed {:?}", start.elapsed());
        for (d, (m, e, t)) in stats.iter().enumerate() {
            println!(
                "  step {}: max denominator power {}, max |exponent| {}, max terms {}",
                d + 1,
                m,
                e,
                t
            );
        }
    }
}
