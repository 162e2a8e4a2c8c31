//! Acceptance criteria 1-8. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use pesto::attacks::{
    common_linear_structures, isolate_quadratic, linearization_attack, structure_count_multiset,
};
use pesto::codec::{encode_public, encode_secret, public_payload_len, HEADER_LEN};
use pesto::poly::monomials_up_to;
use pesto::scheme::key_counts;
use pesto::solvedeg::{gb_complexity_bound, log2_big, probe, SolveConfig};
use pesto::twist::{ccz_check_via_twist, CentralMap};
use pesto::{keygen, toy, Field, Matrix, PestoParams, PolySystem, Shape, Signature};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn binom(n: u64, k: u64) -> u64 {
    let mut acc = 1u64;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

fn within(actual: f64, target: f64, tol: f64) -> bool {
    ((actual - target) / target).abs() <= tol
}

fn c1_toy() -> Outcome {
    let start = Instant::now();
    let r = toy::run(&mut ChaCha20Rng::seed_from_u64(1)).map_err(err)?;
    let elapsed = start.elapsed();
    check(r.matching_coordinates == 4, format!("{}/4 coordinates of G match", r.matching_coordinates))?;
    check(r.public_degree == 4, format!("public degree {}", r.public_degree))?;
    check(r.public_terms.len() == 4, "public map does not have 4 coordinates")?;
    check(r.sign_verify_ok && r.encrypt_decrypt_ok, "roundtrip failed")?;
    check(r.exhaustive_oracle_ok, "decryption disagrees with the exhaustive preimage table")?;
    check(elapsed < Duration::from_secs(5), format!("took {elapsed:?}"))?;
    Ok(format!(
        "G matches coefficient-exactly ({} printed terms), public terms {:?}, {elapsed:.2?}",
        r.printed_terms, r.public_terms
    ))
}

fn c2_key_counts() -> Outcome {
    let start = Instant::now();
    let rows: [((usize, usize, usize, usize), u64, u64, u64, (u64, u64)); 3] = [
        ((27, 25, 10, 2), 7406, 7256, 786625, (786, 1_000)),
        ((40, 38, 14, 2), 21878, 21542, 3270078, (327, 10_000)),
        ((57, 55, 20, 2), 59041, 58341, 18299145, (182, 100_000)),
    ];
    let f = Field::binary(6).map_err(err)?;
    let mut publics = Vec::new();
    for ((n, m, t, s), sk, sk_red, pk_exact, pk_rounded) in rows {
        let shape = Shape::new(n, m, t, s).map_err(err)?;
        let full = key_counts(shape, false);
        let red = key_counts(shape, true);
        check(full.secret == sk && red.secret == sk_red, format!("secret counts {n}: {} / {}", full.secret, red.secret))?;
        // independent: count monomials directly
        let quartic = monomials_up_to(n, 4, f.order()).len() as u64;
        let quadratic = monomials_up_to(n, 2, f.order()).len() as u64;
        check(quartic == binom(n as u64 + 4, 4), "quartic monomial count")?;
        check(full.public == m as u64 * quartic, format!("full public count at n={n}"))?;
        let reduced = (m - t) as u64 * quartic + t as u64 * quadratic;
        check(red.public == reduced, format!("reduced public count at n={n}"))?;
        // the first row's rounded value is the full key, the others the reduced one
        let exact = if n == 27 { full.public } else { red.public };
        check(exact == pk_exact, format!("public count {exact} != {pk_exact}"))?;
        // the table truncates to three digits
        let (lead, unit) = pk_rounded;
        check(exact / unit == lead, format!("{exact} does not truncate to {lead} x {unit}"))?;
        check(red.public == if n == 27 { 476035 } else { pk_exact }, "reduced NIST I count")?;
        publics.push(exact);
    }
    let elapsed = start.elapsed();
    check(elapsed < Duration::from_secs(1), format!("took {elapsed:?}"))?;
    Ok(format!("secret counts exact, public {publics:?} and 476035, {elapsed:.2?}"))
}

fn c3_packed_sizes() -> Outcome {
    let params = PestoParams::parse("2^6,27,25,10,2").map_err(err)?;
    let kp = keygen(&params, &mut ChaCha20Rng::seed_from_u64(1), true).map_err(err)?;
    let pk = (encode_public(&kp.public, true).len() - HEADER_LEN) as f64;
    let sk = (encode_secret(&kp.secret, true).len() - HEADER_LEN) as f64;
    check(within(pk, 357e3, 0.02), format!("packed pk payload {pk} bytes"))?;
    check(within(sk, 5.5e3, 0.05), format!("packed sk payload {sk} bytes"))?;
    let f = Field::binary(6).map_err(err)?;
    let nist3 = public_payload_len(&f, Shape::new(40, 38, 14, 2).map_err(err)?, true, true) as f64;
    check(within(nist3, 2453e3, 0.02), format!("NIST III pk payload {nist3} bytes"))?;
    Ok(format!(
        "pk {pk} B, sk {sk} B, NIST III pk {nist3} B (units are bytes, not MB)"
    ))
}

fn c4_sign_verify() -> Outcome {
    let start = Instant::now();
    let params = PestoParams::parse("2^6,10,8,3,2").map_err(err)?;
    let mut rng = ChaCha20Rng::seed_from_u64(4);
    let kp = keygen(&params, &mut rng, true).map_err(err)?;
    let f = params.field();
    let (mut valid, mut random_ok, mut draws) = (0, 0, 0);
    for _ in 0..1000 {
        let w = f.random_vec(params.m(), &mut rng);
        let (sig, d) = kp.secret.sign_with_stats(&w, &mut rng).map_err(err)?;
        draws += d;
        valid += kp.public.verify(&w, &sig) as usize;
        random_ok += kp.public.verify(&w, &Signature(f.random_vec(params.n(), &mut rng))) as usize;
    }
    let mean = draws as f64 / 1000.0;
    let elapsed = start.elapsed();
    check(valid == 1000, format!("{valid}/1000 signatures verify"))?;
    check(random_ok == 0, format!("{random_ok}/1000 random signatures verify"))?;
    check(mean <= 1.1, format!("mean vinegar draws {mean}"))?;
    check(elapsed < Duration::from_secs(60), format!("took {elapsed:?}"))?;
    Ok(format!("1000/1000 valid, 0/1000 random accepted, mean draws {mean:.3}, {elapsed:.2?}"))
}

fn c5_verify_mults() -> Outcome {
    let mut rng = ChaCha20Rng::seed_from_u64(5);
    let mut seen = Vec::new();
    for (text, keys) in [("2^6,10,8,3,2", 4), ("5,5,4,2,1", 3), ("2^8,12,10,4,2", 3)] {
        let params = PestoParams::parse(text).map_err(err)?;
        let (n, m) = (params.n() as u64, params.m() as u64);
        let expected = m * (2 * binom(n + 4, 4) - n - 2);
        for _ in 0..keys {
            let reduced = rng.gen();
            let kp = keygen(&params, &mut rng, reduced).map_err(err)?;
            let w = params.field().random_vec(params.m(), &mut rng);
            let sig = kp.secret.sign(&w, &mut rng).map_err(err)?;
            let (ok, mults) = kp.public.verify_counted(&w, &sig).map_err(err)?;
            check(ok, "signature did not verify")?;
            check(mults == expected, format!("{text}: counted {mults}, expected {expected}"))?;
        }
        seen.push(expected);
    }
    Ok(format!("10 keys, counts {seen:?} exact"))
}

fn c6_attacks() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha20Rng::seed_from_u64(6);
    let params = PestoParams::parse("2^6,10,8,3,2").map_err(err)?;
    let f = params.field().clone();
    let t = params.t();
    let mut exact = 0;
    for i in 0..50 {
        let kp = keygen(&params, &mut rng, true).map_err(err)?;
        let space = isolate_quadratic(kp.public.system());
        check(space.dim() >= t, format!("key {i}: isolated dimension {} < t", space.dim()))?;
        exact += (space.dim() == t) as usize;
        if i < 20 {
            let comps = space.components(kp.public.system()).map_err(err)?;
            let v = common_linear_structures(&comps).map_err(err)?;
            check(v.dim() == t, format!("key {i}: common structures of dimension {}", v.dim()))?;
            // L2 maps V onto GF(q)^t x {0}
            let images: Vec<Vec<_>> =
                v.basis.iter().map(|b| kp.secret.a2().linear().mul_vec(b)).collect::<Result<_, _>>().map_err(err)?;
            check(images.iter().all(|w| w[t..].iter().all(|&x| x == 0)), format!("key {i}: L2(V) leaves GF(q)^t x 0"))?;
            let rank = Matrix::from_row_vecs(&f, params.n(), &images).map_err(err)?.rank();
            check(rank == t, format!("key {i}: L2(V) has rank {rank}"))?;
        }
    }

    let small = PestoParams::parse("5,4,3,1,1").map_err(err)?;
    for i in 0..5 {
        let reduced = rng.gen();
        let kp = keygen(&small, &mut rng, reduced).map_err(err)?;
        let public = structure_count_multiset(kp.public.system()).map_err(err)?;
        let twisted = structure_count_multiset(&kp.secret.twisted()).map_err(err)?;
        check(public == twisted, format!("structure multisets differ on small key {i}"))?;
    }

    let weak = PestoParams::parse_relaxed("2^6,8,8,1,0").map_err(err)?;
    let mut forged = 0;
    for _ in 0..50 {
        let kp = keygen(&weak, &mut rng, true).map_err(err)?;
        let z = weak.field().random_vec(weak.n(), &mut rng);
        let c = kp.public.encrypt(&z).map_err(err)?;
        if let Ok(report) = linearization_attack(&kp.public, None, &c, &mut rng) {
            let verified = report.candidates.iter().all(|x| kp.public.encrypt(x).as_ref() == Ok(&c));
            forged += (report.success && verified) as usize;
        }
    }
    check(forged >= 45, format!("linearization forged only {forged}/50 on s = 0"))?;

    let strong = PestoParams::parse("2^6,9,8,1,1").map_err(err)?;
    for i in 0..50 {
        let kp = keygen(&strong, &mut rng, true).map_err(err)?;
        let z = strong.field().random_vec(strong.n(), &mut rng);
        let c = kp.public.encrypt(&z).map_err(err)?;
        let report = linearization_attack(&kp.public, None, &c, &mut rng).map_err(err)?;
        check(!report.success, format!("linearization succeeded on s = 1 key {i}"))?;
    }
    let elapsed = start.elapsed();
    check(elapsed < Duration::from_secs(600), format!("took {elapsed:?}"))?;
    Ok(format!(
        "dim == t on {exact}/50, L2(V) white-box 20/20, multisets equal, linearization {forged}/50 on s=0 and 0/50 on s=1, {elapsed:.2?}"
    ))
}

fn c7_twist_oracle() -> Outcome {
    let f = Field::prime(5).map_err(err)?;
    let mut rng = ChaCha20Rng::seed_from_u64(7);
    let shapes = [(2, 2, 1, 1), (3, 2, 1, 1), (3, 3, 1, 1), (4, 3, 1, 1), (4, 4, 2, 1), (5, 4, 2, 1), (5, 5, 2, 2)];
    for i in 0..20 {
        let (n, m, t, s) = shapes[i % shapes.len()];
        let cm = CentralMap::random(&f, Shape::new(n, m, t, s).map_err(err)?, &mut rng).map_err(err)?;
        let c = ccz_check_via_twist(&cm.central_system(), &cm.build_twisted(), t).map_err(err)?;
        check(c.holds, format!("map {i} ({n},{m},{t},{s}): {:?}", c.diagnostic))?;
    }
    let bad = PolySystem::parse(&f, &["x", "y"], &["x^2", "x*y + y"]).map_err(err)?;
    let c = ccz_check_via_twist(&bad, &bad, 1).map_err(err)?;
    check(!c.holds, "non-bijective T accepted")?;
    Ok("20/20 graphs agree, non-bijective T rejected".into())
}

fn c8_solving_degree() -> Outcome {
    let start = Instant::now();
    let cfg = SolveConfig::default();
    let mut summary = Vec::new();
    for (text, expected) in [("2^6,7,5,2,2", 6i64), ("2^6,10,7,3,2", 7)] {
        let params = PestoParams::parse(text).map_err(err)?;
        let mut degrees = Vec::new();
        for seed in 1..=5 {
            let p = probe(&params, seed, &cfg).map_err(err)?;
            let d = p.row.witness_degree.ok_or(format!("{text} seed {seed}: no witness degree"))?;
            check((d as i64 - expected).abs() <= 1, format!("{text} seed {seed}: degree {d}"))?;
            check(p.preimages.len() == p.estimate.solutions.len(), format!("{text} seed {seed}: solution failed to verify"))?;
            degrees.push(d);
        }
        summary.push(format!("{text}: {degrees:?}"));
    }
    // bound arithmetic against an independent big-integer evaluation
    for (n, sd) in [(27u64, 33u64), (40, 48), (57, 59)] {
        let b = gb_complexity_bound(n, sd, 2.3).map_err(err)?;
        let mut num = BigUint::from(1u32);
        let mut den = BigUint::from(1u32);
        for i in 1..=n {
            num *= BigUint::from(sd + i);
            den *= BigUint::from(i);
        }
        let exact = num / den;
        check(b.binomial == exact, format!("binomial C({n}+{sd}, {n})"))?;
        check((b.log2 - 2.3 * log2_big(&exact)).abs() < 1e-9, "log2 of the bound")?;
        let ln: f64 = (1..=n).map(|i| ((sd + i) as f64 / i as f64).ln()).sum();
        check((b.log2 - 2.3 * ln / std::f64::consts::LN_2).abs() < 1e-6, "log2 against float evaluation")?;
    }
    let elapsed = start.elapsed();
    check(elapsed < Duration::from_secs(1800), format!("took {elapsed:?}"))?;
    Ok(format!("{}, {elapsed:.2?}", summary.join("; ")))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("1 toy example", c1_toy),
        ("2 key counts", c2_key_counts),
        ("3 packed sizes", c3_packed_sizes),
        ("4 sign/verify", c4_sign_verify),
        ("5 verify multiplications", c5_verify_mults),
        ("6 attacks", c6_attacks),
        ("7 twist oracle", c7_twist_oracle),
        ("8 solving degree", c8_solving_degree),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {name}: PASS ({detail})"),
            Err(detail) => {
                failed += 1;
                println!("criterion {name}: FAIL ({detail})");
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} criteria failed");
        std::process::exit(1);
    }
}
