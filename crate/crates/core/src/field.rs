//! Arithmetic in GF(q) for prime fields and binary extension fields.
//!
//! Elements are plain integers in `[0, q)`. For a prime field the integer is
//! the residue; for GF(2^k) its bits are the coefficients of the residue
//! polynomial, bit `i` holding the coefficient of `x^i`. All arithmetic goes
//! through a shared [`Field`] handle, which owns the lookup tables.

use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};

/// Raw field element. Always `< q` when produced by a [`Field`].
pub type Elem = u16;

/// Moduli fixed per order for interoperability: `x^6+x+1` and `x^8+x^4+x^3+x+1`.
pub const GF64_MODULUS: u32 = 0b100_0011;
pub const GF256_MODULUS: u32 = 0b1_0001_1011;

/// Largest order for which a full product table is built.
const MUL_TABLE_MAX: u32 = 256;

struct Inner {
    p: u32,
    k: u32,
    modulus: u32,
    q: u32,
    mul_table: Option<Vec<Elem>>,
    inv_table: Vec<Elem>,
    log: Vec<u16>,
    exp: Vec<Elem>,
}

/// Handle to a finite field GF(p^k). Cheap to clone.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.k == other.0.k && self.0.modulus == other.0.modulus)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.k == 1 {
            write!(f, "GF({})", self.0.p)
        } else {
            write!(f, "GF({}^{}, modulus={:#x})", self.0.p, self.0.k, self.0.modulus)
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.k == 1 {
            write!(f, "{}", self.0.p)
        } else {
            write!(f, "{}^{}", self.0.p, self.0.k)
        }
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn gf2_degree(a: u32) -> i32 {
    31 - a.leading_zeros() as i32
}

fn gf2_rem(mut a: u32, b: u32) -> u32 {
    let db = gf2_degree(b);
    while a != 0 && gf2_degree(a) >= db {
        a ^= b << (gf2_degree(a) - db);
    }
    a
}

/// Irreducibility over GF(2) by trial division with every polynomial of
/// degree `1..=k/2`.
pub fn is_irreducible_gf2(modulus: u32, k: u32) -> bool {
    if gf2_degree(modulus) != k as i32 || modulus & 1 == 0 && k > 1 {
        return false;
    }
    for d in 1..=k / 2 {
        for low in 0..(1u32 << d) {
            let cand = (1u32 << d) | low;
            if gf2_rem(modulus, cand) == 0 {
                return false;
            }
        }
    }
    true
}

/// Carry-less multiplication followed by reduction.
fn gf2_mulmod(a: u32, b: u32, modulus: u32, k: u32) -> u32 {
    let mut acc = 0u32;
    let mut a = a;
    let mut b = b;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a >> k & 1 == 1 {
            a ^= modulus;
        }
    }
    acc
}

impl Field {
    /// The prime field GF(p).
    pub fn prime(p: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if p > u16::MAX as u32 {
            return Err(Error::InvalidField(format!("p = {p} does not fit 16-bit elements")));
        }
        Ok(Self::build(p, 1, 0))
    }

    /// GF(2^k) with the default modulus for `k`: the fixed moduli for
    /// k = 6 and 8, otherwise the smallest irreducible polynomial of degree k.
    pub fn binary(k: u32) -> Result<Self> {
        let modulus = match k {
            6 => GF64_MODULUS,
            8 => GF256_MODULUS,
            1 => return Self::prime(2),
            2..=16 => (1u32 << k..1u32 << (k + 1))
                .find(|&m| is_irreducible_gf2(m, k))
                .expect("irreducible polynomials exist in every degree"),
            _ => return Err(Error::InvalidField(format!("extension degree {k} unsupported"))),
        };
        Self::binary_with_modulus(k, modulus)
    }

    pub fn binary_with_modulus(k: u32, modulus: u32) -> Result<Self> {
        if !(2..=16).contains(&k) {
            return Err(Error::InvalidField(format!("extension degree {k} unsupported")));
        }
        if !is_irreducible_gf2(modulus, k) {
            return Err(Error::InvalidField(format!("{modulus:#x} is not irreducible of degree {k}")));
        }
        Ok(Self::build(2, k, modulus))
    }

    /// Builds from (p, k, modulus) as stored in key headers.
    pub fn from_parts(p: u32, k: u32, modulus: u32) -> Result<Self> {
        match k {
            1 => Self::prime(p),
            _ if p == 2 => Self::binary_with_modulus(k, modulus),
            _ => Err(Error::InvalidField("odd-characteristic extensions unsupported".into())),
        }
    }

    /// Parses `"5"`, `"64"`, `"2^6"` or `"256"`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((base, exp)) = s.split_once('^') {
            let p: u32 = base.trim().parse().map_err(|_| Error::InvalidField(s.into()))?;
            let k: u32 = exp.trim().parse().map_err(|_| Error::InvalidField(s.into()))?;
            return match (p, k) {
                (_, 1) => Self::prime(p),
                (2, _) => Self::binary(k),
                _ => Err(Error::InvalidField(format!("{s}: only binary extensions supported"))),
            };
        }
        let q: u32 = s.parse().map_err(|_| Error::InvalidField(s.into()))?;
        if q.is_power_of_two() && q > 2 {
            Self::binary(q.trailing_zeros())
        } else {
            Self::prime(q)
        }
    }

    fn build(p: u32, k: u32, modulus: u32) -> Self {
        let q = p.pow(k);
        let mut log = Vec::new();
        let mut exp = Vec::new();
        let raw_mul = |a: u32, b: u32| -> u32 {
            if k == 1 {
                a * b % p
            } else {
                gf2_mulmod(a, b, modulus, k)
            }
        };
        if k > 1 {
            // smallest primitive element
            let g = (2..q)
                .find(|&g| {
                    let mut x = g;
                    let mut order = 1;
                    while x != 1 {
                        x = raw_mul(x, g);
                        order += 1;
                    }
                    order == q - 1
                })
                .expect("multiplicative group is cyclic");
            log = vec![0u16; q as usize];
            exp = vec![0 as Elem; 2 * (q as usize - 1)];
            let mut x = 1u32;
            for i in 0..(q - 1) as usize {
                exp[i] = x as Elem;
                exp[i + q as usize - 1] = x as Elem;
                log[x as usize] = i as u16;
                x = raw_mul(x, g);
            }
        }
        let mul_table = (q <= MUL_TABLE_MAX).then(|| {
            let mut t = vec![0 as Elem; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    t[(a * q + b) as usize] = raw_mul(a, b) as Elem;
                }
            }
            t
        });
        let mut inv_table = vec![0 as Elem; q as usize];
        if k > 1 {
            for a in 1..q as usize {
                let l = log[a] as usize;
                inv_table[a] = exp[(q as usize - 1 - l) % (q as usize - 1)];
            }
        } else {
            for a in 1..q {
                // a^(p-2)
                let mut r = 1u64;
                let mut b = a as u64;
                let mut e = p - 2;
                while e > 0 {
                    if e & 1 == 1 {
                        r = r * b % p as u64;
                    }
                    b = b * b % p as u64;
                    e >>= 1;
                }
                inv_table[a as usize] = r as Elem;
            }
        }
        Field(Arc::new(Inner {
            p,
            k,
            modulus,
            q,
            mul_table,
            inv_table,
            log,
            exp,
        }))
    }

    #[inline]
    pub fn order(&self) -> u32 {
        self.0.q
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.0.k
    }

    /// Modulus bit-vector; 0 for prime fields.
    pub fn modulus(&self) -> u32 {
        self.0.modulus
    }

    /// Bits needed to store one element: ceil(log2 q).
    pub fn bit_width(&self) -> u32 {
        32 - (self.0.q - 1).leading_zeros()
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.0.p == 2 {
            a ^ b
        } else {
            let s = a as u32 + b as u32;
            (if s >= self.0.p { s - self.0.p } else { s }) as Elem
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        if self.0.p == 2 || a == 0 {
            a
        } else {
            (self.0.p - a as u32) as Elem
        }
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        let inner = &*self.0;
        if let Some(t) = &inner.mul_table {
            return t[a as usize * inner.q as usize + b as usize];
        }
        if inner.k == 1 {
            (a as u32 * b as u32 % inner.p) as Elem
        } else if a == 0 || b == 0 {
            0
        } else {
            inner.exp[inner.log[a as usize] as usize + inner.log[b as usize] as usize]
        }
    }

    /// Row of the product table for a fixed left factor, when available.
    #[inline]
    pub fn mul_row(&self, a: Elem) -> Option<&[Elem]> {
        let q = self.0.q as usize;
        self.0.mul_table.as_ref().map(|t| &t[a as usize * q..(a as usize + 1) * q])
    }

    /// Multiplicative inverse, `None` for zero.
    #[inline]
    pub fn inv(&self, a: Elem) -> Option<Elem> {
        (a != 0).then(|| self.0.inv_table[a as usize])
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        self.inv(b).map(|ib| self.mul(a, ib)).ok_or(Error::DivisionByZero)
    }

    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut r: Elem = 1;
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        r
    }

    /// Maps an integer to an element: reduction mod p for prime fields, bit
    /// truncation to k bits for binary extensions.
    pub fn from_u64(&self, v: u64) -> Elem {
        if self.0.k == 1 {
            (v % self.0.p as u64) as Elem
        } else {
            (v & (self.0.q as u64 - 1)) as Elem
        }
    }

    /// Maps a signed integer (useful for `-1` in fixtures).
    pub fn from_i64(&self, v: i64) -> Elem {
        if self.0.k == 1 {
            v.rem_euclid(self.0.p as i64) as Elem
        } else {
            self.from_u64(v as u64)
        }
    }

    pub fn contains(&self, a: Elem) -> bool {
        (a as u32) < self.0.q
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        rng.gen_range(0..self.0.q) as Elem
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        rng.gen_range(1..self.0.q) as Elem
    }

    pub fn random_vec<R: Rng + ?Sized>(&self, len: usize, rng: &mut R) -> Vec<Elem> {
        (0..len).map(|_| self.random(rng)).collect()
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.0.q).map(|v| v as Elem)
    }

    /// Every vector of GF(q)^n, in counting order with the first
    /// coordinate varying slowest.
    pub fn all_vectors(&self, n: usize) -> impl Iterator<Item = Vec<Elem>> {
        let q = self.0.q as u64;
        let total = q.checked_pow(n as u32).unwrap_or(u64::MAX);
        (0..total).map(move |mut idx| {
            let mut v = vec![0 as Elem; n];
            for slot in v.iter_mut().rev() {
                *slot = (idx % q) as Elem;
                idx /= q;
            }
            v
        })
    }

    /// Dot product of two equal-length vectors.
    pub fn dot(&self, a: &[Elem], b: &[Elem]) -> Elem {
        a.iter().zip(b).fold(0, |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
    }

    pub fn wrap(&self, value: Elem) -> Result<FieldElement> {
        FieldElement::new(self, value)
    }
}

/// A field element bound to its field, for checked arithmetic across
/// independently constructed values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldElement {
    field: Field,
    value: Elem,
}

/// Binary operation selector for [`FieldElement::apply`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl FieldElement {
    pub fn new(field: &Field, value: Elem) -> Result<Self> {
        if !field.contains(value) {
            return Err(Error::InvalidField(format!("{value} is not below q = {}", field.order())));
        }
        Ok(Self { field: field.clone(), value })
    }

    pub fn value(&self) -> Elem {
        self.value
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn apply(&self, other: &FieldElement, op: ArithOp) -> Result<FieldElement> {
        if self.field != other.field {
            return Err(Error::SpecMismatch);
        }
        let f = &self.field;
        let value = match op {
            ArithOp::Add => f.add(self.value, other.value),
            ArithOp::Sub => f.sub(self.value, other.value),
            ArithOp::Mul => f.mul(self.value, other.value),
            ArithOp::Div => f.div(self.value, other.value)?,
        };
        Ok(FieldElement { field: f.clone(), value })
    }

    pub fn inverse(&self) -> Result<FieldElement> {
        let value = self.field.inv(self.value).ok_or(Error::DivisionByZero)?;
        Ok(FieldElement { field: self.field.clone(), value })
    }
}
