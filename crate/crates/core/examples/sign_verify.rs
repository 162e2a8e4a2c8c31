//! Signs hashed messages and checks verification, retries and the
//! multiplication count of the direct verifier.
//!
//! cargo run --release --example sign_verify -- 2^6,10,8,3,2 200

use pesto::scheme::{hash_to_field, mult_cost};
use pesto::{keygen, PestoParams, Signature};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn main() -> pesto::Result<()> {
    let mut args = std::env::args().skip(1);
    let params = PestoParams::parse(&args.next().unwrap_or_else(|| "2^6,10,8,3,2".into()))?;
    let count: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(200);
    let mut rng = ChaCha20Rng::seed_from_u64(42);
    let kp = keygen(&params, &mut rng, true)?;
    let f = params.field();

    let (mut ok, mut draws, mut forged) = (0, 0, 0);
    for i in 0..count {
        let w = hash_to_field(f, format!("message {i}").as_bytes(), params.m());
        let (sig, d) = kp.secret.sign_with_stats(&w, &mut rng)?;
        draws += d;
        ok += kp.public.verify(&w, &sig) as usize;
        forged += kp.public.verify(&w, &Signature(f.random_vec(params.n(), &mut rng))) as usize;
    }
    println!("params {params}");
    println!("valid signatures: {ok}/{count}");
    println!("random signatures accepted: {forged}/{count}");
    println!("mean vinegar draws: {:.3}", draws as f64 / count as f64);

    let w = f.random_vec(params.m(), &mut rng);
    let sig = kp.secret.sign(&w, &mut rng)?;
    let (_, mults) = kp.public.verify_counted(&w, &sig)?;
    let cost = mult_cost(params.shape());
    println!("verify multiplications: {mults} (formula {}), signing estimate {}", cost.verify, cost.sign);
    Ok(())
}
