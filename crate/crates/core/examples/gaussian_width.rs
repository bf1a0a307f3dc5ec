//! Gaussian mean width, entropy bounds and the measurement counts they imply.

use qembed::geometry::{
    empirical_net, entropy_bound, minimal_m, width_estimate, width_properties_check, RequirementKind,
    StructuredConstants,
};
use qembed::rng::rng_from;
use qembed::{Result, SetSpec};

fn main() -> Result<()> {
    let sets = [
        ("sparse N=256 K=4", SetSpec::sparse(256, 4, 1.0)?),
        ("low-rank 8x8 r=1", SetSpec::low_rank(8, 8, 1, 1.0)?),
        ("ball N=16", SetSpec::ball(16, 1.0)?),
    ];
    for (name, set) in &sets {
        let w = width_estimate(set, 20_000, 1)?;
        let h = entropy_bound(set, 0.1)?;
        let m = minimal_m(set, RequirementKind::EmbedStructured, 0.1, 0.5, 1.0)?;
        println!("{name:<18} w = {:.4} +- {:.4}  H(0.1) <= {h:.1}  M >= {m}", w.mean, w.stderr);
    }

    let sparse = &sets[0].1;
    let props = width_properties_check(sparse, 3.0, &vec![0.1; 256], 2000, 5)?;
    println!("homogeneity, diameter and translation checks: {}", props.all_ok());

    let consts = StructuredConstants::for_set(sparse, 1.0, &[0.5, 0.1, 0.02])?;
    println!("w_bar^2 = {:.2}, multiplier needed = {:.3}", consts.w_bar_sq_bound, consts.required_multiplier(1.0));

    let mut r = rng_from(2);
    let cloud: Vec<Vec<f64>> = (0..300).map(|_| sets[2].1.sample_point(&mut r)).collect();
    let net = empirical_net(&cloud, 0.8)?;
    println!("greedy 0.8-net of 300 ball points: {} centers, cover radius {:.3}", net.points.len(), net.cover_radius);
    Ok(())
}
