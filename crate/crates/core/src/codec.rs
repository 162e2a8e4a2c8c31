//! Binary key and vector files.
//!
//! Key files start with a 24-byte header:
//!
//! | bytes | content                                   |
//! |-------|-------------------------------------------|
//! | 5     | magic `PSTO1`                             |
//! | 1     | kind: `0x01` public, `0x02` secret        |
//! | 4     | characteristic `p`, u32 LE                |
//! | 1     | extension degree `k`                      |
//! | 4     | modulus bits, u32 LE (0 for prime fields) |
//! | 2 x 4 | `n, m, t, s`, u16 LE each                 |
//! | 1     | flags: bit 0 reduced `A1`, bit 1 packed   |
//!
//! The payload lists coefficients densely (zeros included) in canonical
//! monomial order, one byte each for `q <= 256` and two bytes LE above. A
//! packed payload stores `ceil(log2 q)` bits per element, LSB first, as one
//! continuous bit stream.
//!
//! Public payload: each coordinate over all monomials of degree <= 4; with
//! a reduced `A1` the first `t` coordinates only over degree <= 2.
//!
//! Secret payload: `A1` linear part row-major (the zero block omitted when
//! reduced) and translation, `A2` likewise, then `q` over degree <= 2 in the
//! `n - t` variables `y`, then `U` over the oil-and-vinegar monomials.
//!
//! Vector files (messages, digests, signatures, ciphertexts) are a u32 LE
//! element count followed by the elements at byte-aligned width.

use crate::affine::AffineBijection;
use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::matrix::Matrix;
use crate::poly::{monomials_up_to, Monomial, Poly, PolySystem};
use crate::scheme::{key_counts, PestoParams, PublicKey, SecretKey};
use crate::twist::{ov_support, CentralMap, Shape};

pub const MAGIC: &[u8; 5] = b"PSTO1";
pub const HEADER_LEN: usize = 24;
pub const KIND_PUBLIC: u8 = 0x01;
pub const KIND_SECRET: u8 = 0x02;
const FLAG_REDUCED: u8 = 1;
const FLAG_PACKED: u8 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Header {
    pub kind: u8,
    pub p: u32,
    pub k: u8,
    pub modulus: u32,
    pub shape: Shape,
    pub reduced: bool,
    pub packed: bool,
}

impl Header {
    fn write(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(MAGIC);
        out.push(self.kind);
        out.extend_from_slice(&self.p.to_le_bytes());
        out.push(self.k);
        out.extend_from_slice(&self.modulus.to_le_bytes());
        for v in [self.shape.n, self.shape.m, self.shape.t, self.shape.s] {
            out.extend_from_slice(&(v as u16).to_le_bytes());
        }
        out.push(if self.reduced { FLAG_REDUCED } else { 0 } | if self.packed { FLAG_PACKED } else { 0 });
    }

    pub fn read(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < MAGIC.len() || &bytes[..MAGIC.len()] != MAGIC {
            return Err(Error::BadMagic);
        }
        if bytes.len() < HEADER_LEN {
            return Err(Error::TruncatedStream);
        }
        let kind = bytes[5];
        if kind != KIND_PUBLIC && kind != KIND_SECRET {
            return Err(Error::BadMagic);
        }
        let u32_at = |i: usize| u32::from_le_bytes(bytes[i..i + 4].try_into().expect("4 bytes"));
        let u16_at = |i: usize| u16::from_le_bytes([bytes[i], bytes[i + 1]]) as usize;
        let flags = bytes[23];
        if flags & !(FLAG_REDUCED | FLAG_PACKED) != 0 {
            return Err(Error::ParamSanity(format!("unknown flag bits {flags:#04x}")));
        }
        Ok(Self {
            kind,
            p: u32_at(6),
            k: bytes[10],
            modulus: u32_at(11),
            shape: Shape { n: u16_at(15), m: u16_at(17), t: u16_at(19), s: u16_at(21) },
            reduced: flags & FLAG_REDUCED != 0,
            packed: flags & FLAG_PACKED != 0,
        })
    }

    fn params(&self) -> Result<PestoParams> {
        let field = Field::from_parts(self.p, self.k as u32, self.modulus)
            .map_err(|e| Error::ParamSanity(format!("field descriptor: {e}")))?;
        let Shape { n, m, t, s } = self.shape;
        PestoParams::relaxed(&field, n, m, t, s).map_err(|e| Error::ParamSanity(e.to_string()))
    }

    fn for_params(kind: u8, params: &PestoParams, reduced: bool, packed: bool) -> Self {
        let f = params.field();
        Self {
            kind,
            p: f.characteristic(),
            k: f.degree() as u8,
            modulus: if f.degree() > 1 { f.modulus() } else { 0 },
            shape: params.shape(),
            reduced,
            packed,
        }
    }
}

/// Bits per stored element.
pub fn element_bits(field: &Field, packed: bool) -> u32 {
    match (packed, field.order() <= 256) {
        (true, _) => field.bit_width(),
        (false, true) => 8,
        (false, false) => 16,
    }
}

struct ElementWriter {
    bits: u32,
    out: Vec<u8>,
    acc: u64,
    fill: u32,
}

impl ElementWriter {
    fn new(bits: u32, out: Vec<u8>) -> Self {
        Self { bits, out, acc: 0, fill: 0 }
    }

    fn push(&mut self, v: Elem) {
        self.acc |= (v as u64) << self.fill;
        self.fill += self.bits;
        while self.fill >= 8 {
            self.out.push(self.acc as u8);
            self.acc >>= 8;
            self.fill -= 8;
        }
    }

    fn finish(mut self) -> Vec<u8> {
        if self.fill > 0 {
            self.out.push(self.acc as u8);
        }
        self.out
    }
}

struct ElementReader<'a> {
    field: &'a Field,
    bits: u32,
    bytes: &'a [u8],
    pos: usize,
    acc: u64,
    fill: u32,
}

impl<'a> ElementReader<'a> {
    fn new(field: &'a Field, bits: u32, bytes: &'a [u8]) -> Self {
        Self { field, bits, bytes, pos: 0, acc: 0, fill: 0 }
    }

    fn next(&mut self) -> Result<Elem> {
        while self.fill < self.bits {
            let b = *self.bytes.get(self.pos).ok_or(Error::TruncatedStream)?;
            self.acc |= (b as u64) << self.fill;
            self.pos += 1;
            self.fill += 8;
        }
        let v = (self.acc & ((1 << self.bits) - 1)) as Elem;
        self.acc >>= self.bits;
        self.fill -= self.bits;
        if !self.field.contains(v) {
            return Err(Error::ParamSanity(format!("element {v} out of range")));
        }
        Ok(v)
    }

    fn take(&mut self, n: usize) -> Result<Vec<Elem>> {
        (0..n).map(|_| self.next()).collect()
    }

    fn finish(self) -> Result<()> {
        if self.pos != self.bytes.len() || self.acc != 0 {
            return Err(Error::ParamSanity("trailing data after payload".into()));
        }
        Ok(())
    }
}

fn payload_bytes(coefficients: u64, bits: u32) -> u64 {
    (coefficients * bits as u64).div_ceil(8)
}

/// Number of canonical monomials of degree <= `d` in `n` variables.
fn monomial_count(n: usize, d: u32, q: u32) -> u64 {
    if q > d {
        let (n, d) = (n as u64, d as u64);
        (0..d).fold(1u64, |acc, i| acc * (n + d - i) / (i + 1))
    } else {
        monomials_up_to(n, d, q).len() as u64
    }
}

/// Coefficients stored in a public key file.
pub fn public_coefficients(field: &Field, shape: Shape, reduced: bool) -> u64 {
    let q = field.order();
    if q > 4 {
        return key_counts(shape, reduced).public;
    }
    let quartic = monomial_count(shape.n, 4, q);
    let quadratic = monomial_count(shape.n, 2, q);
    if reduced {
        (shape.m - shape.t) as u64 * quartic + shape.t as u64 * quadratic
    } else {
        shape.m as u64 * quartic
    }
}

/// Coefficients stored in a secret key file.
pub fn secret_coefficients(field: &Field, shape: Shape, reduced: bool) -> u64 {
    let q = field.order();
    if q > 2 {
        return key_counts(shape, reduced).secret;
    }
    let Shape { n, m, t, .. } = shape;
    let affine = (m * m + m + n * n + n - if reduced { t * (m - t) } else { 0 }) as u64;
    affine + t as u64 * monomial_count(n - t, 2, q) + (m - t) as u64 * ov_support(shape, q).len() as u64
}

/// Payload size in bytes, excluding the header.
pub fn public_payload_len(field: &Field, shape: Shape, reduced: bool, packed: bool) -> u64 {
    payload_bytes(public_coefficients(field, shape, reduced), element_bits(field, packed))
}

pub fn secret_payload_len(field: &Field, shape: Shape, reduced: bool, packed: bool) -> u64 {
    payload_bytes(secret_coefficients(field, shape, reduced), element_bits(field, packed))
}

pub fn encode_public(pk: &PublicKey, packed: bool) -> Vec<u8> {
    let params = pk.params();
    let f = params.field();
    let mut out = Vec::new();
    Header::for_params(KIND_PUBLIC, params, pk.is_reduced(), packed).write(&mut out);
    let mut w = ElementWriter::new(element_bits(f, packed), out);
    let quartic = monomials_up_to(params.n(), 4, f.order());
    let quadratic_len = quartic.iter().take_while(|m| m.degree() <= 2).count();
    for (r, p) in pk.system().polys().iter().enumerate() {
        let support = if pk.is_reduced() && r < params.t() { &quartic[..quadratic_len] } else { &quartic[..] };
        for mono in support {
            w.push(p.coefficient(mono));
        }
    }
    w.finish()
}

pub fn decode_public(bytes: &[u8]) -> Result<PublicKey> {
    let header = Header::read(bytes)?;
    if header.kind != KIND_PUBLIC {
        return Err(Error::ParamSanity("not a public key file".into()));
    }
    let params = header.params()?;
    let f = params.field().clone();
    let n = params.n();
    let mut r = ElementReader::new(&f, element_bits(&f, header.packed), &bytes[HEADER_LEN..]);
    let quartic = monomials_up_to(n, 4, f.order());
    let quadratic_len = quartic.iter().take_while(|m| m.degree() <= 2).count();
    let mut polys = Vec::with_capacity(params.m());
    for row in 0..params.m() {
        let support = if header.reduced && row < params.t() { &quartic[..quadratic_len] } else { &quartic[..] };
        let coeffs = r.take(support.len())?;
        polys.push(poly_from_dense(&f, n, support, &coeffs));
    }
    r.finish()?;
    PublicKey::new(params, PolySystem::new(&f, n, polys)?, header.reduced).map_err(|e| Error::ParamSanity(e.to_string()))
}

fn poly_from_dense(f: &Field, n: usize, support: &[Monomial], coeffs: &[Elem]) -> Poly {
    let mut p = Poly::zero(f, n);
    for (mono, &c) in support.iter().zip(coeffs) {
        p.add_term(mono.clone(), c);
    }
    p
}

fn write_affine(w: &mut ElementWriter, a: &AffineBijection, skip_block: Option<usize>) {
    let d = a.dim();
    for r in 0..d {
        for c in 0..d {
            if skip_block.is_some_and(|t| r < t && c >= t) {
                continue;
            }
            w.push(a.linear().get(r, c));
        }
    }
    for &v in a.translation() {
        w.push(v);
    }
}

fn read_affine(r: &mut ElementReader, f: &Field, d: usize, skip_block: Option<usize>) -> Result<AffineBijection> {
    let mut lin = Matrix::zeros(f, d, d);
    for row in 0..d {
        for col in 0..d {
            if !skip_block.is_some_and(|t| row < t && col >= t) {
                lin.set(row, col, r.next()?);
            }
        }
    }
    let translation = r.take(d)?;
    AffineBijection::new(lin, translation).map_err(|_| Error::ParamSanity("affine part is not invertible".into()))
}

pub fn encode_secret(sk: &SecretKey, packed: bool) -> Vec<u8> {
    let params = sk.params();
    let f = params.field();
    let shape = params.shape();
    let mut out = Vec::new();
    Header::for_params(KIND_SECRET, params, sk.is_reduced(), packed).write(&mut out);
    let mut w = ElementWriter::new(element_bits(f, packed), out);
    write_affine(&mut w, sk.a1(), sk.is_reduced().then_some(shape.t));
    write_affine(&mut w, sk.a2(), None);
    let y_support = monomials_up_to(shape.n - shape.t, 2, f.order());
    for p in sk.central().qmap().polys() {
        for mono in &y_support {
            w.push(p.coefficient(mono));
        }
    }
    let ov = ov_support(shape, f.order());
    for p in sk.central().u().polys() {
        for mono in &ov {
            w.push(p.coefficient(mono));
        }
    }
    w.finish()
}

pub fn decode_secret(bytes: &[u8]) -> Result<SecretKey> {
    let header = Header::read(bytes)?;
    if header.kind != KIND_SECRET {
        return Err(Error::ParamSanity("not a secret key file".into()));
    }
    let params = header.params()?;
    let f = params.field().clone();
    let shape = params.shape();
    let mut r = ElementReader::new(&f, element_bits(&f, header.packed), &bytes[HEADER_LEN..]);
    let a1 = read_affine(&mut r, &f, shape.m, header.reduced.then_some(shape.t))?;
    let a2 = read_affine(&mut r, &f, shape.n, None)?;
    let y_support = monomials_up_to(shape.n - shape.t, 2, f.order());
    let qmap = (0..shape.t)
        .map(|_| Ok(poly_from_dense(&f, shape.n - shape.t, &y_support, &r.take(y_support.len())?)))
        .collect::<Result<Vec<_>>>()?;
    let ov = ov_support(shape, f.order());
    let u = (0..shape.m - shape.t)
        .map(|_| Ok(poly_from_dense(&f, shape.n, &ov, &r.take(ov.len())?)))
        .collect::<Result<Vec<_>>>()?;
    r.finish()?;
    let central = CentralMap::new(shape, PolySystem::new(&f, shape.n - shape.t, qmap)?, PolySystem::new(&f, shape.n, u)?)
        .map_err(|e| Error::ParamSanity(e.to_string()))?;
    SecretKey::from_parts(params, a1, a2, central, header.reduced).map_err(|e| Error::ParamSanity(e.to_string()))
}

/// Either kind of key, as read from a file.
#[derive(Clone, Debug)]
pub enum Key {
    Public(Box<PublicKey>),
    Secret(Box<SecretKey>),
}

pub fn decode_key(bytes: &[u8]) -> Result<Key> {
    match Header::read(bytes)?.kind {
        KIND_PUBLIC => decode_public(bytes).map(|k| Key::Public(Box::new(k))),
        _ => decode_secret(bytes).map(|k| Key::Secret(Box::new(k))),
    }
}

pub fn encode_vector(field: &Field, v: &[Elem]) -> Vec<u8> {
    let mut out = (v.len() as u32).to_le_bytes().to_vec();
    let w = ElementWriter::new(element_bits(field, false), std::mem::take(&mut out));
    let mut w = w;
    for &x in v {
        w.push(x);
    }
    w.finish()
}

/// Reads one vector record, returning it and the bytes consumed.
pub fn decode_vector_prefix(field: &Field, bytes: &[u8]) -> Result<(Vec<Elem>, usize)> {
    if bytes.len() < 4 {
        return Err(Error::TruncatedStream);
    }
    let len = u32::from_le_bytes(bytes[..4].try_into().expect("4 bytes")) as usize;
    let width = element_bits(field, false) as usize / 8;
    let end = 4 + len * width;
    if bytes.len() < end {
        return Err(Error::TruncatedStream);
    }
    let mut r = ElementReader::new(field, width as u32 * 8, &bytes[4..end]);
    let v = r.take(len)?;
    Ok((v, end))
}

pub fn decode_vector(field: &Field, bytes: &[u8]) -> Result<Vec<Elem>> {
    let (v, used) = decode_vector_prefix(field, bytes)?;
    if used != bytes.len() {
        return Err(Error::ParamSanity("trailing data after vector".into()));
    }
    Ok(v)
}

/// Consecutive vector records.
pub fn decode_vectors(field: &Field, mut bytes: &[u8]) -> Result<Vec<Vec<Elem>>> {
    let mut out = Vec::new();
    while !bytes.is_empty() {
        let (v, used) = decode_vector_prefix(field, bytes)?;
        out.push(v);
        bytes = &bytes[used..];
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::keygen;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn public_roundtrip_and_length() {
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        for (field, n, m, t, s) in [
            (Field::binary(6).unwrap(), 7, 5, 2, 2),
            (Field::prime(5).unwrap(), 5, 4, 2, 1),
            (Field::prime(3).unwrap(), 5, 4, 2, 1),
            (Field::prime(257).unwrap(), 4, 3, 1, 1),
        ] {
            let params = PestoParams::new(&field, n, m, t, s).unwrap();
            for reduced in [false, true] {
                let kp = keygen(&params, &mut rng, reduced).unwrap();
                for packed in [false, true] {
                    let bytes = encode_public(&kp.public, packed);
                    let expected = public_payload_len(&field, params.shape(), reduced, packed);
                    assert_eq!((bytes.len() - HEADER_LEN) as u64, expected);
                    assert_eq!(decode_public(&bytes).unwrap(), kp.public);
                    let sbytes = encode_secret(&kp.secret, packed);
                    let expected = secret_payload_len(&field, params.shape(), reduced, packed);
                    assert_eq!((sbytes.len() - HEADER_LEN) as u64, expected, "{field:?} {reduced} {packed}");
                    assert_eq!(decode_secret(&sbytes).unwrap(), kp.secret);
                }
            }
        }
    }

    #[test]
    fn rejects_corruption() {
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        let params = PestoParams::new(&Field::binary(6).unwrap(), 6, 4, 2, 2).unwrap();
        let kp = keygen(&params, &mut rng, true).unwrap();
        let bytes = encode_public(&kp.public, false);

        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(matches!(decode_public(&bad), Err(Error::BadMagic)));
        let mut bad = bytes.clone();
        bad[5] = 0x07;
        assert!(matches!(decode_public(&bad), Err(Error::BadMagic)));
        let mut bad = bytes.clone();
        bad[5] = KIND_SECRET;
        assert!(matches!(decode_public(&bad), Err(Error::ParamSanity(_)) | Err(Error::BadMagic)));
        assert!(matches!(decode_public(&bytes[..bytes.len() - 1]), Err(Error::TruncatedStream)));
        assert!(matches!(decode_public(&bytes[..10]), Err(Error::TruncatedStream)));
        let mut bad = bytes.clone();
        bad.push(0);
        assert!(matches!(decode_public(&bad), Err(Error::ParamSanity(_))));
        let mut bad = bytes.clone();
        bad[HEADER_LEN] = 200;
        assert!(matches!(decode_public(&bad), Err(Error::ParamSanity(_))));
        // t > min(n, m)
        let mut bad = bytes.clone();
        bad[19] = 9;
        assert!(matches!(decode_public(&bad), Err(Error::ParamSanity(_))));
        // reducible modulus
        let mut bad = bytes;
        bad[11] = 0x41;
        assert!(matches!(decode_public(&bad), Err(Error::ParamSanity(_))));
    }

    #[test]
    fn determinism() {
        let params = PestoParams::new(&Field::binary(6).unwrap(), 7, 5, 2, 2).unwrap();
        let a = keygen(&params, &mut ChaCha20Rng::seed_from_u64(11), true).unwrap();
        let b = keygen(&params, &mut ChaCha20Rng::seed_from_u64(11), true).unwrap();
        assert_eq!(encode_secret(&a.secret, false), encode_secret(&b.secret, false));
        assert_eq!(encode_public(&a.public, true), encode_public(&b.public, true));
    }

    #[test]
    fn vectors() {
        let f = Field::binary(6).unwrap();
        let bytes = encode_vector(&f, &[1, 2, 63]);
        assert_eq!(bytes, vec![3, 0, 0, 0, 1, 2, 63]);
        assert_eq!(decode_vector(&f, &bytes).unwrap(), vec![1, 2, 63]);
        assert!(decode_vector(&f, &bytes[..5]).is_err());
        assert!(decode_vector(&f, &[1, 0, 0, 0, 64]).is_err());
        let big = Field::prime(3761).unwrap();
        let bytes = encode_vector(&big, &[3760]);
        assert_eq!(bytes, vec![1, 0, 0, 0, 0xb0, 0x0e]);
        let mut two = encode_vector(&f, &[5]);
        two.extend(encode_vector(&f, &[6, 7]));
        assert_eq!(decode_vectors(&f, &two).unwrap(), vec![vec![5], vec![6, 7]]);
    }

    #[test]
    fn packed_bit_layout() {
        let mut w = ElementWriter::new(6, Vec::new());
        for v in [1, 2, 3, 4] {
            w.push(v);
        }
        // 000001 000010 000011 000100, LSB first
        assert_eq!(w.finish(), vec![0b1000_0001, 0b0011_0000, 0b0001_0000]);
    }

    #[test]
    fn packed_payloads_at_standard_shapes() {
        let f = Field::binary(6).unwrap();
        let nist1 = Shape::new(27, 25, 10, 2).unwrap();
        assert_eq!(public_coefficients(&f, nist1, true), 476035);
        assert_eq!(public_payload_len(&f, nist1, true, true), 357027);
        assert_eq!(secret_payload_len(&f, nist1, true, true), 5442);
        let nist3 = Shape::new(40, 38, 14, 2).unwrap();
        assert_eq!(public_payload_len(&f, nist3, true, true), 2452559);
    }
}
