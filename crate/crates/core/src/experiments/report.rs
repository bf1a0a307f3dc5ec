//! CSV and gnuplot writers for experiment results.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use super::plan::ExperimentResult;
use crate::error::Result;

pub fn write_records<W: Write>(result: &ExperimentResult, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["experiment", "m", "trial", "statistic", "censored", "seed"])?;
    for r in &result.records {
        w.write_record([
            result.experiment.clone(),
            r.m.to_string(),
            r.trial.to_string(),
            r.statistic.to_string(),
            r.censored.to_string(),
            r.seed.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_summary<W: Write>(results: &[&ExperimentResult], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["experiment", "slope", "stderr", "verdict"])?;
    for res in results {
        let (slope, stderr) = match res.fit {
            Some(f) => (f.slope.to_string(), f.stderr.to_string()),
            None => ("NaN".to_string(), "NaN".to_string()),
        };
        w.write_record([res.experiment.as_str(), &slope, &stderr, res.verdict.name()])?;
    }
    w.flush()?;
    Ok(())
}

/// Two whitespace-separated columns, `log10 M` and `log10 statistic`, for
/// every uncensored `M`.
pub fn write_gnuplot<W: Write>(result: &ExperimentResult, mut out: W) -> Result<()> {
    writeln!(out, "# {} log10(M) log10(statistic)", result.experiment)?;
    for p in result.per_m.iter().filter(|p| !p.censored && p.statistic > 0.0) {
        writeln!(out, "{} {}", (p.m as f64).log10(), p.statistic.log10())?;
    }
    Ok(())
}

/// Writes `<name>.csv` and `<name>.dat` into `dir`, returning both paths.
pub fn write_experiment(result: &ExperimentResult, dir: &Path) -> Result<(PathBuf, PathBuf)> {
    std::fs::create_dir_all(dir)?;
    let csv_path = dir.join(format!("{}.csv", result.experiment));
    let dat_path = dir.join(format!("{}.dat", result.experiment));
    write_records(result, BufWriter::new(File::create(&csv_path)?))?;
    let mut dat = BufWriter::new(File::create(&dat_path)?);
    write_gnuplot(result, &mut dat)?;
    dat.flush()?;
    Ok((csv_path, dat_path))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::plan::{PerMStat, TrialRecord, Verdict};

    fn toy() -> ExperimentResult {
        let mut records = Vec::new();
        let mut per_m = Vec::new();
        for (i, m) in [100usize, 1000, 10000].into_iter().enumerate() {
            let rec = TrialRecord { m, trial: 0, statistic: 1.0 / m as f64, censored: false, seed: i as u64 };
            per_m.push(PerMStat::from_trials(m, std::slice::from_ref(&rec), &[rec.statistic]));
            records.push(rec);
        }
        ExperimentResult::assemble("toy", records, per_m, 0).judge_slope(-1.1, -0.9)
    }

    #[test]
    fn csv_layout() {
        let res = toy();
        assert_eq!(res.verdict, Verdict::Pass);
        let mut buf = Vec::new();
        write_records(&res, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("experiment,m,trial,statistic,censored,seed"));
        assert_eq!(lines.next(), Some("toy,100,0,0.01,false,0"));
        assert_eq!(text.lines().count(), 4);

        let mut buf = Vec::new();
        write_summary(&[&res], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
        assert_eq!(row[0], "toy");
        assert!((row[1].parse::<f64>().unwrap() + 1.0).abs() < 1e-12, "{text}");
        assert!(text.trim_end().ends_with(",pass"));
    }

    #[test]
    fn gnuplot_columns() {
        let mut buf = Vec::new();
        write_gnuplot(&toy(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(rows, ["2 -2", "3 -3", "4 -4"]);
    }

    #[test]
    fn files_on_disk() {
        let dir = tempfile::tempdir().unwrap();
        let (c, d) = write_experiment(&toy(), dir.path()).unwrap();
        assert!(c.exists() && d.exists());
    }
}
