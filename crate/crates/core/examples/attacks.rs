//! Runs each attack against small keys.
//!
//! cargo run --release --example attacks

use pesto::attacks::{
    forge_with_known_a2, iso_quad_report, lin_struct_report, linearization_attack, structure_count_multiset,
    ENUMERATION_BUDGET,
};
use pesto::{keygen, PestoParams};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn main() -> pesto::Result<()> {
    let mut rng = ChaCha20Rng::seed_from_u64(5);
    let params = PestoParams::parse("2^6,10,8,3,2")?;
    let kp = keygen(&params, &mut rng, true)?;
    print!("{}", iso_quad_report(&kp.public)?.to_text());
    print!("{}", lin_struct_report(&kp.public)?.to_text());

    let f = params.field();
    let z = f.random_vec(params.n(), &mut rng);
    let c = kp.public.encrypt(&z)?;
    match forge_with_known_a2(&kp.public, kp.secret.a2(), &c, ENUMERATION_BUDGET)? {
        Some(found) => println!("known A2: preimage {found:?} (planted {z:?})"),
        None => println!("known A2: no preimage"),
    }

    for text in ["2^6,8,8,1,0", "2^6,9,8,1,1"] {
        let params = PestoParams::parse_relaxed(text)?;
        let kp = keygen(&params, &mut rng, true)?;
        let z = params.field().random_vec(params.n(), &mut rng);
        let c = kp.public.encrypt(&z)?;
        let report = linearization_attack(&kp.public, None, &c, &mut rng)?;
        println!("linearization at {text}: success={} relations={:?}", report.success, report.metrics.get("relations"));
    }

    let small = PestoParams::parse("5,4,3,1,1")?;
    let kp = keygen(&small, &mut rng, true)?;
    let public = structure_count_multiset(kp.public.system())?;
    let twisted = structure_count_multiset(&kp.secret.twisted())?;
    println!("structure count multisets of G and G_pub agree: {}", public == twisted);
    Ok(())
}
