//! Excess α-risk learning curve of the nearest-neighbour learner, as CSV.

use oodlab::domain::{FeatureSpace, FiniteDomain, IdJoint, OodMarginal};
use oodlab::experiment::{run_learning_curve, ExperimentConfig};
use oodlab::io::{write_json, DomainRecord};

fn main() -> oodlab::Result<()> {
    let dir = std::env::temp_dir().join("oodlab-learning-curve");
    std::fs::create_dir_all(&dir).map_err(|e| oodlab::LabError::Io { path: dir.display().to_string(), source: e })?;
    let domain = FiniteDomain::new(
        IdJoint::new(6, 1, &[(0, 1, 0.4), (1, 1, 0.3), (2, 1, 0.2), (3, 1, 0.1)])?,
        OodMarginal::uniform(6, &[4, 5])?,
        0.5,
    )?;
    write_json(&dir.join("domain.json"), &DomainRecord::from_domain(&domain).with_points(&FeatureSpace::line(6)?))?;
    let cfg = ExperimentConfig::from_json(
        r#"{"domain": "domain.json", "n_grid": [1, 2, 4, 8, 16, 32], "trials": 100, "seed": 3, "alpha_grid": [0, 0.5, 1]}"#,
        &dir,
    )?;
    let report = run_learning_curve(&cfg)?;
    print!("{}", report.to_csv());
    for fit in &report.slopes {
        println!("# alpha {}: log-log slope {:?}", fit.alpha, fit.slope);
    }
    Ok(())
}
