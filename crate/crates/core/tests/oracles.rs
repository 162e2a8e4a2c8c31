//! Derived quantities checked against direct, independent computations.

use pesto::scheme::{eval_mults, key_counts, mult_cost};
use pesto::twist::ov_support;
use pesto::{keygen, Elem, Field, PestoParams, Poly, Shape};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn binom(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Evaluates G(x, y) = (x - q(y), U(x - q(y), y)) at a point without any
/// symbolic composition.
fn twisted_at(sk: &pesto::SecretKey, point: &[Elem]) -> Vec<Elem> {
    let f = sk.params().field();
    let t = sk.params().t();
    let y = &point[t..];
    let qy = sk.central().eval_qmap(y).unwrap();
    let mut inner: Vec<Elem> = point[..t].iter().zip(&qy).map(|(&x, &q)| f.sub(x, q)).collect();
    let mut out = inner.clone();
    inner.extend_from_slice(y);
    out.extend(sk.central().u().eval(&inner).unwrap());
    out
}

#[test]
fn public_map_matches_pointwise_composition() {
    let mut rng = ChaCha20Rng::seed_from_u64(1);
    for text in ["2^6,10,8,3,2", "7,6,5,2,1", "2^8,8,7,3,1"] {
        let params = PestoParams::parse(text).unwrap();
        let kp = keygen(&params, &mut rng, true).unwrap();
        let f = params.field();
        for _ in 0..50 {
            let z = f.random_vec(params.n(), &mut rng);
            let inner = kp.secret.a2().apply(&z).unwrap();
            let expected = kp.secret.a1().apply(&twisted_at(&kp.secret, &inner)).unwrap();
            assert_eq!(kp.public.encrypt(&z).unwrap(), expected);
        }
    }
}

#[test]
fn secret_count_matches_generated_key() {
    // count monomials actually used by the generator's supports
    for (q, n, m, t, s) in [(64, 27, 25, 10, 2), (64, 10, 8, 3, 2), (5, 5, 4, 2, 1)] {
        let shape = Shape::new(n, m, t, s).unwrap();
        let ov = ov_support(shape, q).len() as u64;
        let y_quadratic = binom((n - t) as u64 + 2, 2);
        let affine = (m * m + m + n * n + n) as u64;
        let expected = affine + t as u64 * y_quadratic + (m - t) as u64 * ov;
        assert_eq!(key_counts(shape, false).secret, expected);
        assert_eq!(key_counts(shape, true).secret, expected - (t * (m - t)) as u64);
    }
}

#[test]
fn eval_mults_matches_horner_free_count() {
    // one multiplication per monomial of degree >= 2 (built from a smaller
    // one) plus one per non-constant coefficient
    for (n, d) in [(5u64, 4u64), (10, 4), (27, 4), (8, 2), (8, 1)] {
        let monomials = binom(n + d, d);
        let products = monomials - 1 - n;
        let coefficients = monomials - 1;
        assert_eq!(eval_mults(n, d), products + coefficients);
    }
}

#[test]
fn counted_verify_equals_formula_for_sparse_keys() {
    let f = Field::prime(5).unwrap();
    let params = PestoParams::new(&f, 5, 4, 2, 1).unwrap();
    let kp = keygen(&params, &mut ChaCha20Rng::seed_from_u64(2), false).unwrap();
    let w = f.random_vec(4, &mut ChaCha20Rng::seed_from_u64(3));
    let sig = kp.secret.sign(&w, &mut ChaCha20Rng::seed_from_u64(4)).unwrap();
    let (_, mults) = kp.public.verify_counted(&w, &sig).unwrap();
    assert_eq!(mults, mult_cost(params.shape()).verify);
    assert_eq!(mults, 4 * (2 * binom(9, 4) - 5 - 2));
}

#[test]
fn char_two_quadratic_forms_have_linear_squares() {
    // over GF(2^k), x^2 is additive, so it never contributes to the polar form
    let f = Field::binary(6).unwrap();
    let p = Poly::parse(&f, &["a", "b"], "a^2 + 5b^2 + 3a").unwrap();
    let b = pesto::attacks::polar_matrix(&p).unwrap();
    assert!((0..2).all(|i| (0..2).all(|j| b.get(i, j) == 0)));
}
