// Drive the command line in-process and capture its JSON report.

use hecke_density::cli;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli::run(
        ["hecke-density", "sweep", "--deltas", "0.05,0.01,0.001"],
        &mut out,
        &mut err,
    );
    let report: serde_json::Value = serde_json::from_slice(&out)?;
    println!("exit {code}, {} rows", report["rows"].as_array().map_or(0, Vec::len));
    println!("{}", String::from_utf8(out)?);
    if code != 0 {
        return Err(String::from_utf8_lossy(&err).into_owned().into());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
