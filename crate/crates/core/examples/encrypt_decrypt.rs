//! Encrypts random points and recovers every preimage with the secret key.
//!
//! cargo run --release --example encrypt_decrypt -- 2^4,6,6,2,1

use pesto::{keygen, PestoParams};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn main() -> pesto::Result<()> {
    let params = PestoParams::parse(&std::env::args().nth(1).unwrap_or_else(|| "2^4,6,6,2,1".into()))?;
    let mut rng = ChaCha20Rng::seed_from_u64(3);
    let kp = keygen(&params, &mut rng, true)?;
    let f = params.field();
    let mut sizes = Vec::new();
    for _ in 0..20 {
        let z = f.random_vec(params.n(), &mut rng);
        let c = kp.public.encrypt(&z)?;
        let pre = kp.secret.decrypt(&c)?;
        assert!(pre.contains(&z), "plaintext missing from decryption");
        assert!(pre.iter().all(|p| kp.public.encrypt(p).as_ref() == Ok(&c)));
        sizes.push(pre.len());
    }
    println!("params {params}");
    println!("preimage counts over 20 ciphertexts: {sizes:?}");
    Ok(())
}
