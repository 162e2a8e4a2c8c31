//! Writes a key pair to disk, reads it back and checks the bytes are a
//! pure function of the seed.
//!
//! cargo run --example key_files -- /tmp/pesto-keys

use std::path::PathBuf;

use pesto::codec::{decode_public, decode_secret, encode_public, encode_secret};
use pesto::{keygen, PestoParams};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn main() -> pesto::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| std::env::temp_dir().join("pesto-keys").display().to_string()));
    std::fs::create_dir_all(&dir)?;
    let params = PestoParams::parse("2^6,10,8,3,2")?;
    let kp = keygen(&params, &mut ChaCha20Rng::seed_from_u64(7), true)?;
    let pk = encode_public(&kp.public, false);
    let sk = encode_secret(&kp.secret, false);
    std::fs::write(dir.join("pk.bin"), &pk)?;
    std::fs::write(dir.join("sk.bin"), &sk)?;

    assert_eq!(decode_public(&std::fs::read(dir.join("pk.bin"))?)?, kp.public);
    assert_eq!(decode_secret(&std::fs::read(dir.join("sk.bin"))?)?, kp.secret);
    let again = keygen(&params, &mut ChaCha20Rng::seed_from_u64(7), true)?;
    assert_eq!(encode_public(&again.public, false), pk);
    println!("wrote {} ({} bytes) and {} ({} bytes)", dir.join("pk.bin").display(), pk.len(), dir.join("sk.bin").display(), sk.len());
    Ok(())
}
