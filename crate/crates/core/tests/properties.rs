use pesto::codec::{decode_public, decode_secret, encode_public, encode_secret};
use pesto::{keygen, Field, PestoParams, Signature};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn fields() -> impl Strategy<Value = Field> {
    prop_oneof![
        Just(Field::prime(5).unwrap()),
        Just(Field::prime(7).unwrap()),
        Just(Field::binary(4).unwrap()),
        Just(Field::binary(6).unwrap()),
        Just(Field::binary(8).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(f in fields(), a in any::<u16>(), b in any::<u16>(), c in any::<u16>()) {
        let q = f.order() as u16;
        let (a, b, c) = (a % q, b % q, c % q);
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.add(f.sub(a, b), b), a);
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
        prop_assert_eq!(f.pow(a, f.order() as u64), a);
    }

    #[test]
    fn keys_roundtrip_and_sign(
        f in fields(),
        seed in any::<u64>(),
        (n, m, t, s) in prop_oneof![Just((5, 4, 2, 1)), Just((6, 5, 2, 1)), Just((7, 5, 2, 2)), Just((6, 6, 2, 1))],
        reduced in any::<bool>(),
        packed in any::<bool>(),
    ) {
        let params = PestoParams::new(&f, n, m, t, s).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let kp = keygen(&params, &mut rng, reduced).unwrap();
        prop_assert_eq!(decode_public(&encode_public(&kp.public, packed)).unwrap(), kp.public.clone());
        prop_assert_eq!(decode_secret(&encode_secret(&kp.secret, packed)).unwrap(), kp.secret.clone());

        let w = f.random_vec(m, &mut rng);
        match kp.secret.sign(&w, &mut rng) {
            Ok(sig) => prop_assert!(kp.public.verify(&w, &sig)),
            // tiny fields occasionally exhaust the retry budget when m - t > n - t - s
            Err(e) => prop_assert!(f.order() < 16 || m - t > n - t - s, "{e}"),
        }
        let z = f.random_vec(n, &mut rng);
        let c = kp.public.encrypt(&z).unwrap();
        prop_assert!(kp.public.verify(&c, &Signature(z.clone())));
        if (f.order() as u128).pow(s as u32) <= 1 << 16 {
            prop_assert!(kp.secret.decrypt(&c).unwrap().contains(&z));
        }
    }
}
