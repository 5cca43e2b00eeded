// Local Euler factors of symmetric powers at a single prime.

use hecke_density::satake::{component_eigenvalues, local_factor, Piece, SatakeParams};
use num_complex::Complex64;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let p = 5;
    let s = 1.5;
    let a = 4830.0 / (p as f64).powf(5.5);
    let sp = SatakeParams::from_eigenvalue(a, Complex64::new(1.0, 0.0))?;
    println!("tau(5) normalised: a_5 = {a:.9}");
    for piece in [Piece::sym(1), Piece::sym(2), Piece::sym(3), Piece::sym(4), Piece::pair(Piece::sym(2), Piece::sym(2))] {
        let ev = component_eigenvalues(&sp, &piece)?;
        let factor = local_factor(&ev, p, s)?;
        println!("L_5({piece}, {s}) = {:.12} (imaginary part {:.1e})", factor.re, factor.im);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
