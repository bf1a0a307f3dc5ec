//! Drives the command-line front end from a config file.

use qembed::cli::run;

fn main() {
    let dir = std::env::temp_dir().join("qembed-cli-example");
    std::fs::create_dir_all(&dir).expect("temp dir");
    let cfg = dir.join("run.cfg");
    std::fs::write(
        &cfg,
        "seed = 3\ncommand = consistency-width\n\n[consistency-width]\nset = sparse:N=64,K=2,d=1\nm_grid = 32,64,128\npairs = 20\ntrials = 4\n",
    )
    .expect("write config");
    let out = dir.join("out");
    // flags on the command line win over the file
    let code = run(["qembed", "consistency-width", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--trials", "6"]);
    println!("exit code {code}; files in {}", out.display());
}
