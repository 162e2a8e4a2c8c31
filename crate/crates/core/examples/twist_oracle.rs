//! Exhaustive graph check: swapping the first t input and output
//! coordinates maps graph(F) onto graph(G).
//!
//! cargo run --release --example twist_oracle

use pesto::twist::{ccz_check_via_twist, CentralMap};
use pesto::{Field, PolySystem, Shape};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn main() -> pesto::Result<()> {
    let f = Field::prime(5)?;
    let mut rng = ChaCha20Rng::seed_from_u64(9);
    for (n, m, t, s) in [(3, 3, 1, 1), (4, 3, 1, 1), (5, 4, 2, 1), (5, 5, 2, 2)] {
        let cm = CentralMap::random(&f, Shape::new(n, m, t, s)?, &mut rng)?;
        let check = ccz_check_via_twist(&cm.central_system(), &cm.build_twisted(), t)?;
        println!("n={n} m={m} t={t} s={s}: {}", if check.holds { "graphs agree" } else { "MISMATCH" });
    }

    // first coordinate x^2 is not a bijection in x
    let bad = PolySystem::parse(&f, &["x", "y"], &["x^2", "x*y + y"])?;
    let check = ccz_check_via_twist(&bad, &bad, 1)?;
    println!("non-bijective T: holds={} ({})", check.holds, check.diagnostic.unwrap_or_default());
    Ok(())
}
