//! Worked GF(5) example: rebuilds `G` from the fixed `q`, `U`, `A1`, `A2`,
//! prints it next to the public map and runs both roundtrips.
//!
//! cargo run --example toy

use pesto::toy;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn main() -> pesto::Result<()> {
    let sk = toy::secret_key()?;
    let names: Vec<String> = toy::X_NAMES.iter().map(|s| s.to_string()).collect();
    for (i, g) in sk.twisted().polys().iter().enumerate() {
        println!("G{} = {}", i + 1, g.render(&names));
    }
    let pk = sk.public_key()?;
    println!("public map: {} polynomials of degree {}", pk.system().len(), pk.system().degree());

    let report = toy::run(&mut ChaCha20Rng::seed_from_u64(1))?;
    print!("{}", report.to_text());
    if !report.all_ok() {
        std::process::exit(1);
    }
    Ok(())
}
