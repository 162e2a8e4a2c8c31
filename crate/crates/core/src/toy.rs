//! Worked example over GF(5) with `n = 5, m = 4, t = 2, s = 1`: fixed
//! `q`, `U`, `A1`, `A2` and the expected twisted map `G`, transcribed term
//! by term.

use rand::Rng;

use crate::affine::AffineBijection;
use crate::error::Result;
use crate::field::{Elem, Field};
use crate::matrix::Matrix;
use crate::poly::PolySystem;
use crate::scheme::{PestoParams, PublicKey, SecretKey};
use crate::twist::CentralMap;

pub const X_NAMES: [&str; 5] = ["x1", "x2", "y1", "y2", "y3"];
pub const Y_NAMES: [&str; 3] = ["y1", "y2", "y3"];

pub const Q: [&str; 2] = [
    "y1^2 + 2y1y2 + 4y2^2 + 3y2y3 + y2 + 3y3^2 + 4",
    "3y1^2 + 3y1y2 + 2y1y3 + 2y2y3 + 2y2 + y3^2 + 2y3",
];

pub const U: [&str; 2] = [
    "x1^2 + 2x1x2 + 3x1y1 + x1y2 + 4x1y3 + 2x1 + x2^2 + x2y1 + x2y2 + 3x2y3 + 3x2 \
     + 2y1^2 + 2y1y2 + 2y1y3 + y1 + 4y2 + y3",
    "x1x2 + x1 + 4x2^2 + 2x2y2 + 3x2y3 + 3x2 + 2y1y3 + 3y1 + 3y3 + 1",
];

pub const G: [&str; 4] = [
    "x1 + 4y1^2 + 3y1y2 + y2^2 + 2y2y3 + 4y2 + 2y3^2 + 1",
    "x2 + 2y1^2 + 2y1y2 + 3y1y3 + 3y2y3 + 3y2 + 4y3^2 + 3y3",
    "x1^2 + 2x1x2 + 2x1y1^2 + x1y1y3 + 3x1y1 + 2x1y2^2 + 2x1y3^2 + 4x1 + x2^2 + 2x2y1^2 + x2y1y3 \
     + x2y1 + 2x2y2^2 + 2x2y3^2 + 4x2y3 + y1^4 + y1^3y3 + 4y1^3 + 2y1^2y2^2 + y1^2y2 + y1^2y3^2 \
     + y1^2y3 + 3y1^2 + y1y2^2y3 + 3y1y2^2 + 2y1y2y3 + 4y1y2 + y1y3^3 + 2y1y3^2 + 4y1 + y2^4 \
     + 2y2^2y3^2 + 2y2y3^2 + 3y2y3 + y2 + y3^4 + y3^3 + y3^2 + 3",
    "x1x2 + 2x1y1^2 + 2x1y1y2 + 3x1y1y3 + 3x1y2y3 + 3x1y2 + 4x1y3^2 + 3x1y3 + x1 + 4x2^2 \
     + 4x2y1y2 + 4x2y1y3 + x2y2^2 + x2y2y3 + 4x2y3^2 + 2x2y3 + 4x2 + 4y1^4 + y1^3y2 + 4y1^2y2^2 \
     + y1^2y2y3 + 2y1^2y2 + y1^2y3 + 2y1^2 + 2y1y2^3 + 4y1y2^2y3 + 4y1y2^2 + 3y1y2y3^2 + 3y1y2y3 \
     + y1y2 + 2y1y3^3 + y1y3^2 + 4y1y3 + 3y1 + 3y2^3y3 + 3y2^3 + y2^2y3^2 + 4y2^2y3 + 3y2y3^2 \
     + 3y2y3 + y2 + 2y3^4 + 4y3^3 + 3y3^2 + 2",
];

pub const A2_LINEAR: [[i64; 5]; 5] =
    [[1, 4, 3, 2, 1], [2, 0, 1, 1, 4], [3, 2, 2, 0, 2], [1, 2, 2, 2, 3], [2, 3, 4, 4, 2]];
pub const A2_TRANSLATION: [Elem; 5] = [2, 1, 3, 2, 2];
pub const A1_LINEAR: [[i64; 4]; 4] = [[2, 3, 2, 1], [4, 2, 3, 1], [1, 2, 1, 3], [1, 4, 3, 1]];
pub const A1_TRANSLATION: [Elem; 4] = [1, 0, 0, 4];

pub fn field() -> Field {
    Field::prime(5).expect("5 is prime")
}

pub fn params() -> PestoParams {
    PestoParams::new(&field(), 5, 4, 2, 1).expect("valid toy parameters")
}

pub fn central_map() -> Result<CentralMap> {
    let f = field();
    let qmap = PolySystem::parse(&f, &Y_NAMES, &Q)?;
    let u = PolySystem::parse(&f, &X_NAMES, &U)?;
    CentralMap::new(params().shape(), qmap, u)
}

/// The printed `G`.
pub fn expected_g() -> Result<PolySystem> {
    PolySystem::parse(&field(), &X_NAMES, &G)
}

pub fn secret_key() -> Result<SecretKey> {
    let f = field();
    let a1 = AffineBijection::new(Matrix::from_rows(&f, &A1_LINEAR)?, A1_TRANSLATION.to_vec())?;
    let a2 = AffineBijection::new(Matrix::from_rows(&f, &A2_LINEAR)?, A2_TRANSLATION.to_vec())?;
    SecretKey::from_parts(params(), a1, a2, central_map()?, false)
}

/// Result of running the example end to end.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToyReport {
    /// Printed terms of `G` across the four coordinates.
    pub printed_terms: usize,
    /// Coordinates of the computed `G` equal to the printed ones.
    pub matching_coordinates: usize,
    pub public_degree: u32,
    /// Terms per public coordinate.
    pub public_terms: Vec<usize>,
    pub sign_verify_ok: bool,
    pub encrypt_decrypt_ok: bool,
    /// Decryption agrees with an exhaustive preimage search on every point.
    pub exhaustive_oracle_ok: bool,
}

impl ToyReport {
    pub fn all_ok(&self) -> bool {
        self.matching_coordinates == 4
            && self.public_degree == 4
            && self.sign_verify_ok
            && self.encrypt_decrypt_ok
            && self.exhaustive_oracle_ok
    }

    pub fn to_text(&self) -> String {
        format!(
            "printed terms of G: {}\nmatching coordinates: {}/4\npublic degree: {}\npublic terms per coordinate: {:?}\n\
             sign/verify: {}\nencrypt/decrypt: {}\nexhaustive decrypt oracle: {}\n",
            self.printed_terms,
            self.matching_coordinates,
            self.public_degree,
            self.public_terms,
            ok(self.sign_verify_ok),
            ok(self.encrypt_decrypt_ok),
            ok(self.exhaustive_oracle_ok),
        )
    }
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "FAILED"
    }
}

/// Rebuilds `G`, compares with the printed map, then exercises signing,
/// encryption and decryption (against an exhaustive preimage table).
pub fn run<R: Rng + ?Sized>(rng: &mut R) -> Result<ToyReport> {
    let f = field();
    let sk = secret_key()?;
    let g = sk.twisted();
    let expected = expected_g()?;
    let printed_terms = expected.polys().iter().map(|p| p.num_terms()).sum();
    let matching_coordinates = g.polys().iter().zip(expected.polys()).filter(|(a, b)| a == b).count();
    let pk: PublicKey = sk.public_key()?;

    let mut sign_verify_ok = true;
    for _ in 0..20 {
        let w = f.random_vec(4, rng);
        match sk.sign(&w, rng) {
            Ok(sig) => sign_verify_ok &= pk.verify(&w, &sig),
            Err(_) => sign_verify_ok = false,
        }
    }

    // preimage table of G_pub over all 3125 inputs
    let mut table: std::collections::BTreeMap<Vec<Elem>, Vec<Vec<Elem>>> = Default::default();
    for z in f.all_vectors(5) {
        table.entry(pk.encrypt(&z)?).or_default().push(z);
    }
    let mut encrypt_decrypt_ok = true;
    for _ in 0..20 {
        let z = f.random_vec(5, rng);
        let c = pk.encrypt(&z)?;
        encrypt_decrypt_ok &= sk.decrypt(&c)?.contains(&z);
    }
    let mut exhaustive_oracle_ok = true;
    for c in f.all_vectors(4) {
        let expected = table.get(&c).cloned().unwrap_or_default();
        exhaustive_oracle_ok &= sk.decrypt(&c)? == expected;
    }

    Ok(ToyReport {
        printed_terms,
        matching_coordinates,
        public_degree: pk.system().degree(),
        public_terms: pk.system().polys().iter().map(|p| p.num_terms()).collect(),
        sign_verify_ok,
        encrypt_decrypt_ok,
        exhaustive_oracle_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn twisted_map_matches_printed_coefficients() {
        let sk = secret_key().unwrap();
        assert_eq!(sk.twisted(), expected_g().unwrap());
    }

    #[test]
    fn end_to_end() {
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        let r = run(&mut rng).unwrap();
        assert!(r.all_ok(), "{}", r.to_text());
    }
}
