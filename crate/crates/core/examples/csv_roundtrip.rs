// Write a sequence in the `p,a_p` schema and load it back.

use hecke_density::sources::{load_csv, sample_sato_tate, write_csv};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let seq = sample_sato_tate(1_000, 5)?;
    let dir = std::env::temp_dir().join(format!("hecke-density-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("sato_tate.csv");
    write_csv(&seq, std::fs::File::create(&path)?)?;

    let back = load_csv(&path)?;
    println!("{} rows written to {}, {} read back", seq.len(), path.display(), back.len());
    let same = seq.entries().iter().zip(back.entries()).all(|(x, y)| x.p == y.p && x.a.to_bits() == y.a.to_bits());
    std::fs::remove_dir_all(&dir)?;
    if !same {
        return Err("round trip changed values".into());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
