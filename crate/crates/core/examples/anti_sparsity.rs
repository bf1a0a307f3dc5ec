//! Anti-sparsity levels and the DCT rotation that spreads a sparse vector out.

use qembed::geometry::{anti_sparsity, rotate_antisparsify};
use qembed::Result;

fn main() -> Result<()> {
    let n = 64;
    let mut spike = vec![0.0; n];
    spike[5] = 1.0;
    spike[17] = -0.5;
    let flat = vec![0.25; n];

    for (name, u) in [("two spikes", &spike), ("flat", &flat)] {
        let rep = anti_sparsity(u, 16.0)?;
        println!("{name:<10} level {:>6.2}  passes K0 = 16: {}", rep.level, rep.passed);
    }

    let rot = rotate_antisparsify(&spike)?;
    println!("after DCT: level {:.2} -> {:.2}", rot.level_before, rot.level_after);
    Ok(())
}
