//! Sub-Gaussian constants of the three entry distributions.

use qembed::ensembles::{berry_esseen_gap, fit_tail_bound, mu_sg, psi2_norm, PSI2_P_MAX};
use qembed::{Ensemble, EnsembleKind, Result, SQRT_2_OVER_PI};

fn main() -> Result<()> {
    let k = 16;
    let flat: Vec<f64> = vec![1.0 / (k as f64).sqrt(); k];
    println!("{:<12} {:>8} {:>10} {:>10} {:>10} {:>8}", "ensemble", "alpha", "kappa_sg", "mu_sg", "BE gap", "rate");
    for kind in [EnsembleKind::Gaussian, EnsembleKind::Rademacher, EnsembleKind::BoundedUniform] {
        let ens = Ensemble::new(kind);
        assert_eq!(ens.alpha, psi2_norm(kind, PSI2_P_MAX)?);
        let mu = mu_sg(&ens, &flat, 200_000, 1)?;
        let gap = berry_esseen_gap(&ens, &flat, 200_000, 2)?;
        let tail = fit_tail_bound(&ens, &[0.5, 1.0, 1.5, 2.0, 2.5], 200_000, 3)?;
        println!(
            "{:<12} {:>8.4} {:>10.4} {:>10.5} {:>10.5} {:>8.4}",
            kind.name(),
            ens.alpha,
            ens.kappa_sg,
            mu.value,
            gap.value,
            tail.rate
        );
    }
    println!("Gaussian reference sqrt(2/pi) = {SQRT_2_OVER_PI:.5}");

    let est = Ensemble::rademacher().with_estimated_kappa(8, 50_000, 4)?;
    println!("estimated kappa_sg for rademacher: {:.4}", est.kappa_sg);
    Ok(())
}
