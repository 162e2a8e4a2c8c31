//! Coefficient counts and file sizes for the standard parameter sets, plus
//! one real key file at the smallest set.
//!
//! cargo run --release --example key_sizes

use pesto::codec::{encode_public, encode_secret, public_payload_len, secret_payload_len, HEADER_LEN};
use pesto::scheme::{key_counts, mult_cost};
use pesto::{keygen, PestoParams};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

const SETS: [&str; 3] = ["2^6,27,25,10,2", "2^6,40,38,14,2", "2^6,57,55,20,2"];

fn main() -> pesto::Result<()> {
    println!("{:<16} {:>8} {:>8} {:>10} {:>10} {:>12} {:>12}", "params", "sk", "sk red", "pk", "pk red", "pk bytes(6b)", "sk bytes(6b)");
    for text in SETS {
        let p = PestoParams::parse(text)?;
        let full = key_counts(p.shape(), false);
        let red = key_counts(p.shape(), true);
        println!(
            "{text:<16} {:>8} {:>8} {:>10} {:>10} {:>12} {:>12}",
            full.secret,
            red.secret,
            full.public,
            red.public,
            public_payload_len(p.field(), p.shape(), true, true),
            secret_payload_len(p.field(), p.shape(), true, true)
        );
        let c = mult_cost(p.shape());
        println!("{:<16} verify {} mults, sign {} mults", "", c.verify, c.sign);
    }

    let params = PestoParams::parse(SETS[0])?;
    let kp = keygen(&params, &mut ChaCha20Rng::seed_from_u64(1), true)?;
    let pk = encode_public(&kp.public, true);
    let sk = encode_secret(&kp.secret, true);
    println!("generated {}: packed pk payload {} bytes, sk payload {} bytes", SETS[0], pk.len() - HEADER_LEN, sk.len() - HEADER_LEN);
    Ok(())
}
