//! Key generation, signing, verification, encryption and decryption, plus
//! exact key-size and multiplication-cost accounting.
//!
//! The secret key is `<A1, A2, q, U>` and the public key is
//! `G_pub = A1 ∘ G ∘ A2` with `G(x, y) = (x - q(y), U(x - q(y), y))`.
//! With a reduced `A1` (zero `t x (m - t)` block in its linear part) the
//! first `t` public coordinates stay quadratic.

use std::fmt;
use std::sync::OnceLock;

use rand::Rng;
use sha3::digest::{ExtendableOutput, Update, XofReader};
use sha3::Shake256;

use crate::affine::AffineBijection;
use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::matrix::{enumerate_affine_span, LinearSolution, Matrix};
use crate::poly::{Monomial, MonomialIndex, Poly, PolySystem, Side};
use crate::twist::{CentralMap, Shape};

/// Vinegar draws allowed per signature before giving up.
pub const SIGN_RETRIES: usize = 256;

/// Largest number of candidate preimages decryption will enumerate.
pub const DECRYPT_BUDGET: u128 = 1 << 20;

/// Field plus dimensions `(n, m, t, s)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PestoParams {
    field: Field,
    shape: Shape,
}

impl fmt::Display for PestoParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Shape { n, m, t, s } = self.shape;
        write!(f, "({}, {n}, {m}, {t}, {s})", self.field)
    }
}

impl PestoParams {
    /// Requires `1 <= t <= min(n, m)` and `1 <= s <= n - t`.
    pub fn new(field: &Field, n: usize, m: usize, t: usize, s: usize) -> Result<Self> {
        if s == 0 {
            return Err(Error::ParamRange("s must be at least 1 (s = 0 admits a linearization attack)".into()));
        }
        Self::relaxed(field, n, m, t, s)
    }

    /// Like [`new`](Self::new) but accepts `s = 0`, for cryptanalysis
    /// experiments.
    pub fn relaxed(field: &Field, n: usize, m: usize, t: usize, s: usize) -> Result<Self> {
        if t == 0 {
            return Err(Error::ParamRange("t must be at least 1".into()));
        }
        let shape = Shape::new(n, m, t, s)?;
        Ok(Self { field: field.clone(), shape })
    }

    /// Parses `q,n,m,t,s`, e.g. `2^6,10,8,3,2`.
    pub fn parse(text: &str) -> Result<Self> {
        Self::parse_with(text, false)
    }

    /// [`parse`](Self::parse) with the [`relaxed`](Self::relaxed) checks.
    pub fn parse_relaxed(text: &str) -> Result<Self> {
        Self::parse_with(text, true)
    }

    fn parse_with(text: &str, relaxed: bool) -> Result<Self> {
        let parts: Vec<&str> = text.split(',').map(str::trim).collect();
        if parts.len() != 5 {
            return Err(Error::ParamRange(format!("expected q,n,m,t,s, got {text:?}")));
        }
        let field = Field::parse(parts[0])?;
        let nums = parts[1..]
            .iter()
            .map(|p| p.parse::<usize>().map_err(|_| Error::ParamRange(format!("bad integer {p:?}"))))
            .collect::<Result<Vec<_>>>()?;
        if relaxed {
            Self::relaxed(&field, nums[0], nums[1], nums[2], nums[3])
        } else {
            Self::new(&field, nums[0], nums[1], nums[2], nums[3])
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn n(&self) -> usize {
        self.shape.n
    }

    pub fn m(&self) -> usize {
        self.shape.m
    }

    pub fn t(&self) -> usize {
        self.shape.t
    }

    pub fn s(&self) -> usize {
        self.shape.s
    }

    /// Non-fatal advice: `t` far from `n/3` leaves the quadratic part close
    /// to a balanced OV system; `s != n - m` makes the oil system non-square.
    pub fn warnings(&self) -> Vec<String> {
        let Shape { n, m, t, s } = self.shape;
        let mut out = Vec::new();
        let third = n as f64 / 3.0;
        if (t as f64 - third).abs() > 0.2 * third {
            out.push(format!("t = {t} deviates from n/3 = {third:.1} by more than 20%"));
        }
        if n < m || s != n - m {
            out.push(format!("s = {s} differs from n - m; the oil system is not square"));
        }
        out
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128) as u64
}

/// Coefficient counts over GF(q) for the public and secret key.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KeyCounts {
    pub public: u64,
    pub secret: u64,
}

/// Coefficients to store for each key; `reduced` selects the block-form `A1`.
pub fn key_counts(shape: Shape, reduced: bool) -> KeyCounts {
    let Shape { n, m, t, s } = shape;
    let (n, m, t, s) = (n as u64, m as u64, t as u64, s as u64);
    let central = t * binomial(n - t + 2, 2) + (m - t) * binomial(t + s + 2, 2) + (m - t) * (n - t - s) * (t + s + 1);
    let mut secret = m * m + m + n * n + n + central;
    let public = if reduced {
        secret -= t * (m - t);
        (m - t) * binomial(n + 4, 4) + t * binomial(n + 2, 2)
    } else {
        m * binomial(n + 4, 4)
    };
    KeyCounts { public, secret }
}

/// Field multiplications for direct evaluation of a polynomial of degree
/// `d` in `n` variables: `2 C(n+d, d) - n - 2`.
pub fn eval_mults(n: u64, d: u64) -> u64 {
    2 * binomial(n + d, d) - n - 2
}

/// Multiplications needed for verification and for signing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MultCost {
    pub verify: u64,
    pub sign: u64,
}

/// `M(r, k)`: upper-bound convention `r k min(r, k)` for solving `r`
/// equations in `k` unknowns.
pub fn linear_solve_mults(r: u64, k: u64) -> u64 {
    r * k * r.min(k)
}

pub fn mult_cost(shape: Shape) -> MultCost {
    let Shape { n, m, t, s } = shape;
    let (n, m, t, s) = (n as u64, m as u64, t as u64, s as u64);
    let verify = m * eval_mults(n, 4);
    let sign = m * eval_mults(m, 1)
        + t * eval_mults(n - t, 2)
        + n * eval_mults(n, 1)
        + (m - t) * (eval_mults(t, 2) + eval_mults(s, 2))
        + linear_solve_mults(m - t, n - t - s);
    MultCost { verify, sign }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature(pub Vec<Elem>);

impl Signature {
    pub fn as_slice(&self) -> &[Elem] {
        &self.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SecretKey {
    params: PestoParams,
    a1: AffineBijection,
    a2: AffineBijection,
    central: CentralMap,
    reduced: bool,
}

/// Dense coefficient rows over the canonical monomials of degree <= 4.
#[derive(Debug)]
struct DenseForm {
    index: MonomialIndex,
    coeffs: Vec<Vec<Elem>>,
}

#[derive(Debug)]
pub struct PublicKey {
    params: PestoParams,
    reduced: bool,
    system: PolySystem,
    dense: OnceLock<DenseForm>,
}

impl Clone for PublicKey {
    fn clone(&self) -> Self {
        Self::new(self.params.clone(), self.system.clone(), self.reduced).expect("already validated")
    }
}

impl PartialEq for PublicKey {
    fn eq(&self, other: &Self) -> bool {
        self.params == other.params && self.reduced == other.reduced && self.system == other.system
    }
}

impl Eq for PublicKey {}

/// Diagnostics gathered during key generation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KeygenReport {
    /// Dimension of the space of components of `G` with degree <= 2.
    pub quadratic_dim: usize,
    /// `quadratic_dim - t`: quadratic components contributed by the twisted
    /// `U` part (expected 0).
    pub extra_quadratic: usize,
}

pub struct Keypair {
    pub secret: SecretKey,
    pub public: PublicKey,
    pub report: KeygenReport,
}

/// Generates a key pair. Randomness is consumed in a fixed order: `q`, `U`,
/// `A1`, `A2`.
pub fn keygen<R: Rng + ?Sized>(params: &PestoParams, rng: &mut R, reduced_a1: bool) -> Result<Keypair> {
    let sk = SecretKey::generate(params, rng, reduced_a1)?;
    let public = sk.public_key()?;
    let report = sk.keygen_report();
    Ok(Keypair { secret: sk, public, report })
}

impl SecretKey {
    pub fn generate<R: Rng + ?Sized>(params: &PestoParams, rng: &mut R, reduced_a1: bool) -> Result<Self> {
        let field = params.field();
        let central = CentralMap::random(field, params.shape, rng)?;
        let a1 = if reduced_a1 {
            AffineBijection::random_block(field, params.m(), params.t(), rng)?
        } else {
            AffineBijection::random(field, params.m(), rng)?
        };
        let a2 = AffineBijection::random(field, params.n(), rng)?;
        Self::from_parts(params.clone(), a1, a2, central, reduced_a1)
    }

    /// Assembles a key from explicit components. `reduced` asserts that
    /// `A1` has the zero block.
    pub fn from_parts(
        params: PestoParams,
        a1: AffineBijection,
        a2: AffineBijection,
        central: CentralMap,
        reduced: bool,
    ) -> Result<Self> {
        if a1.dim() != params.m() || a2.dim() != params.n() {
            return Err(Error::DimensionMismatch { expected: params.m(), got: a1.dim() });
        }
        if central.shape() != params.shape {
            return Err(Error::ParamSanity("central map shape differs from parameters".into()));
        }
        if a1.field() != params.field() || a2.field() != params.field() || central.field() != params.field() {
            return Err(Error::SpecMismatch);
        }
        if reduced && !a1.has_zero_block(params.t()) {
            return Err(Error::ParamSanity("A1 lacks the zero block required for a reduced key".into()));
        }
        Ok(Self { params, a1, a2, central, reduced })
    }

    pub fn params(&self) -> &PestoParams {
        &self.params
    }

    pub fn a1(&self) -> &AffineBijection {
        &self.a1
    }

    pub fn a2(&self) -> &AffineBijection {
        &self.a2
    }

    pub fn central(&self) -> &CentralMap {
        &self.central
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    /// The twisted central map `G`.
    pub fn twisted(&self) -> PolySystem {
        self.central.build_twisted()
    }

    /// `A1 ∘ G ∘ A2`, assembled densely.
    pub fn public_key(&self) -> Result<PublicKey> {
        let f = self.params.field();
        let composer = QuarticComposer::new(f, self.params.n());
        let g = composer.twisted(&self.central, Some(&self.a2));
        let len = composer.high.len();
        let mut coeffs = vec![vec![0 as Elem; len]; self.params.m()];
        for (r, out) in coeffs.iter_mut().enumerate() {
            for (i, gi) in g.iter().enumerate() {
                let a = self.a1.linear().get(r, i);
                if a != 0 {
                    axpy(f, out, a, gi);
                }
            }
            out[0] = f.add(out[0], self.a1.translation()[r]);
        }
        PublicKey::from_dense(self.params.clone(), composer.high, coeffs, self.reduced)
    }

    /// `A1 ∘ G ∘ A2` by symbolic substitution; slower, kept as a reference.
    pub fn public_key_symbolic(&self) -> Result<PublicKey> {
        let g = self.twisted();
        let gpub = g.compose_affine(&self.a2, Side::Input)?.compose_affine(&self.a1, Side::Output)?;
        PublicKey::new(self.params.clone(), gpub, self.reduced)
    }

    pub fn keygen_report(&self) -> KeygenReport {
        let f = self.params.field();
        let composer = QuarticComposer::new(f, self.params.n());
        let g = composer.twisted(&self.central, None);
        let high: Vec<usize> =
            (0..composer.high.len()).filter(|&i| composer.high.monomials()[i].degree() >= 3).collect();
        let rows: Vec<Vec<Elem>> = g.iter().map(|gi| high.iter().map(|&i| gi[i]).collect()).collect();
        let quadratic_dim = Matrix::from_row_vecs(f, high.len(), &rows)
            .map(|m| m.left_nullspace().len())
            .unwrap_or(0);
        KeygenReport { quadratic_dim, extra_quadratic: quadratic_dim.saturating_sub(self.params.t()) }
    }

    /// Oil-variable linear system `U(w_T, vinegar, oil) = w_U` as `(matrix, rhs)`.
    fn oil_system(&self, w_t: &[Elem], vinegar_y: &[Elem], w_u: &[Elem]) -> Result<(Matrix, Vec<Elem>)> {
        let f = self.params.field();
        let shape = self.params.shape;
        let mut assignment: Vec<Option<Elem>> = vec![None; shape.n];
        for (i, &v) in w_t.iter().enumerate() {
            assignment[i] = Some(v);
        }
        for (j, &v) in vinegar_y.iter().enumerate() {
            assignment[shape.t + j] = Some(v);
        }
        let oil = shape.oil();
        let mut mat = Matrix::zeros(f, shape.m - shape.t, oil);
        let mut rhs = Vec::with_capacity(shape.m - shape.t);
        for (i, ui) in self.central.u().polys().iter().enumerate() {
            let lin = ui.partial_eval(&assignment)?;
            let (coeffs, c) = lin.linear_parts().expect("oil variables occur linearly");
            for k in 0..oil {
                mat.set(i, k, coeffs[shape.vinegar() + k]);
            }
            rhs.push(f.sub(w_u[i], c));
        }
        Ok((mat, rhs))
    }

    fn finish_preimage(&self, w_t: &[Elem], y: &[Elem]) -> Result<Vec<Elem>> {
        let f = self.params.field();
        let qy = self.central.eval_qmap(y)?;
        let mut xy: Vec<Elem> = w_t.iter().zip(&qy).map(|(&a, &b)| f.add(a, b)).collect();
        xy.extend_from_slice(y);
        self.a2.apply_inverse(&xy)
    }

    pub fn sign<R: Rng + ?Sized>(&self, w: &[Elem], rng: &mut R) -> Result<Signature> {
        self.sign_with_stats(w, rng).map(|(s, _)| s)
    }

    /// Signs and also reports how many vinegar draws were needed.
    pub fn sign_with_stats<R: Rng + ?Sized>(&self, w: &[Elem], rng: &mut R) -> Result<(Signature, usize)> {
        let shape = self.params.shape;
        if w.len() != shape.m {
            return Err(Error::DimensionMismatch { expected: shape.m, got: w.len() });
        }
        let f = self.params.field();
        let wp = self.a1.apply_inverse(w)?;
        let (w_t, w_u) = wp.split_at(shape.t);
        for attempt in 1..=SIGN_RETRIES {
            let vinegar = f.random_vec(shape.s, rng);
            let (mat, rhs) = self.oil_system(w_t, &vinegar, w_u)?;
            let LinearSolution::Solution { mut particular, basis } = mat.solve(&rhs)? else {
                continue;
            };
            // uniform point of the affine solution set
            for b in &basis {
                let r = f.random(rng);
                for (p, &bi) in particular.iter_mut().zip(b) {
                    *p = f.add(*p, f.mul(r, bi));
                }
            }
            let mut y = vinegar;
            y.extend(particular);
            return Ok((Signature(self.finish_preimage(w_t, &y)?), attempt));
        }
        Err(Error::SigningFailed(SIGN_RETRIES))
    }

    /// All `z` with `G_pub(z) = c`, sorted.
    pub fn decrypt(&self, c: &[Elem]) -> Result<Vec<Vec<Elem>>> {
        let shape = self.params.shape;
        if c.len() != shape.m {
            return Err(Error::DimensionMismatch { expected: shape.m, got: c.len() });
        }
        let f = self.params.field();
        let q = f.order() as u128;
        let vinegar_count = q.pow(shape.s as u32);
        if vinegar_count > DECRYPT_BUDGET {
            return Err(Error::BudgetExceeded { needed: vinegar_count, budget: DECRYPT_BUDGET });
        }
        let cp = self.a1.apply_inverse(c)?;
        let (c_t, c_u) = cp.split_at(shape.t);
        let mut out = Vec::new();
        let mut enumerated = 0u128;
        for vinegar in f.all_vectors(shape.s) {
            let (mat, rhs) = self.oil_system(c_t, &vinegar, c_u)?;
            let LinearSolution::Solution { particular, basis } = mat.solve(&rhs)? else {
                continue;
            };
            enumerated += q.pow(basis.len() as u32);
            if enumerated > DECRYPT_BUDGET {
                return Err(Error::BudgetExceeded { needed: enumerated, budget: DECRYPT_BUDGET });
            }
            for oil in enumerate_affine_span(f, &particular, &basis) {
                let mut y = vinegar.clone();
                y.extend(oil);
                out.push(self.finish_preimage(c_t, &y)?);
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}

fn axpy(f: &Field, out: &mut [Elem], a: Elem, x: &[Elem]) {
    for (o, &v) in out.iter_mut().zip(x) {
        if v != 0 {
            *o = f.add(*o, f.mul(a, v));
        }
    }
}

/// Dense arithmetic for building degree-4 maps out of degree-2 pieces.
/// Vectors are indexed by the canonical monomials of degree <= 4; those of
/// degree <= 2 form a prefix.
struct QuarticComposer {
    field: Field,
    n: usize,
    high: MonomialIndex,
    low_len: usize,
    /// `product[i * low_len + j]`: index of monomial `i` times monomial `j`.
    product: Vec<u32>,
}

impl QuarticComposer {
    fn new(field: &Field, n: usize) -> Self {
        let q = field.order();
        let high = MonomialIndex::new(n, 4, q);
        let low_len = high.monomials().iter().take_while(|m| m.degree() <= 2).count();
        let mons = high.monomials();
        let mut product = Vec::with_capacity(low_len * low_len);
        for a in &mons[..low_len] {
            for b in &mons[..low_len] {
                product.push(high.get(&a.mul(b, q)).expect("degree <= 4") as u32);
            }
        }
        Self { field: field.clone(), n, high, low_len, product }
    }

    fn zero(&self) -> Vec<Elem> {
        vec![0; self.high.len()]
    }

    /// `out += c * a * b` for `a`, `b` of degree <= 2.
    fn mul_acc(&self, out: &mut [Elem], c: Elem, a: &[Elem], b: &[Elem]) {
        let f = &self.field;
        for i in (0..self.low_len).filter(|&i| a[i] != 0) {
            let ca = f.mul(c, a[i]);
            let row = &self.product[i * self.low_len..(i + 1) * self.low_len];
            for j in (0..self.low_len).filter(|&j| b[j] != 0) {
                let k = row[j] as usize;
                out[k] = f.add(out[k], f.mul(ca, b[j]));
            }
        }
    }

    /// `p(args)` for `p` of degree <= 2 and arguments of degree <= 2.
    fn eval_quadratic(&self, p: &Poly, args: &[Vec<Elem>]) -> Vec<Elem> {
        let f = &self.field;
        let mut out = self.zero();
        for (mono, c) in p.terms() {
            let vars: Vec<usize> = mono.support().collect();
            match (mono.degree(), vars.as_slice()) {
                (0, _) => out[0] = f.add(out[0], c),
                (1, [v]) => axpy(f, &mut out, c, &args[*v]),
                (2, [v]) => self.mul_acc(&mut out, c, &args[*v], &args[*v]),
                (2, [u, v]) => self.mul_acc(&mut out, c, &args[*u], &args[*v]),
                _ => unreachable!("degree <= 2 checked at construction"),
            }
        }
        out
    }

    /// Coordinates of `G ∘ A2` (or of `G` when `a2` is `None`).
    fn twisted(&self, central: &CentralMap, a2: Option<&AffineBijection>) -> Vec<Vec<Elem>> {
        let f = &self.field;
        let (n, t) = (self.n, central.shape().t);
        let pos: Vec<usize> = (0..n).map(|k| self.high.get(&Monomial::var(n, k)).expect("degree 1")).collect();
        let linear: Vec<Vec<Elem>> = (0..n)
            .map(|j| {
                let mut v = self.zero();
                match a2 {
                    Some(a2) => {
                        v[0] = a2.translation()[j];
                        for k in 0..n {
                            v[pos[k]] = a2.linear().get(j, k);
                        }
                    }
                    None => v[pos[j]] = 1,
                }
                v
            })
            .collect();
        let mut args = linear.clone();
        for (i, qi) in central.qmap().polys().iter().enumerate() {
            let q_val = self.eval_quadratic(qi, &linear[t..]);
            for (a, &b) in args[i].iter_mut().zip(&q_val) {
                *a = f.sub(*a, b);
            }
        }
        let mut out: Vec<Vec<Elem>> = args[..t].to_vec();
        out.extend(central.u().polys().iter().map(|u| self.eval_quadratic(u, &args)));
        out
    }
}

impl PublicKey {
    /// Builds a key from dense coefficient rows over `index`.
    fn from_dense(params: PestoParams, index: MonomialIndex, coeffs: Vec<Vec<Elem>>, reduced: bool) -> Result<Self> {
        let f = params.field().clone();
        let f = &f;
        let n = params.n();
        let polys = coeffs
            .iter()
            .map(|row| {
                let mut p = Poly::zero(f, n);
                for (i, &c) in row.iter().enumerate().filter(|(_, &c)| c != 0) {
                    p.add_term(index.monomials()[i].clone(), c);
                }
                p
            })
            .collect();
        let pk = Self::new(params, PolySystem::new(f, n, polys)?, reduced)?;
        pk.dense.set(DenseForm { index, coeffs }).expect("fresh key");
        Ok(pk)
    }

    pub fn new(params: PestoParams, system: PolySystem, reduced: bool) -> Result<Self> {
        if system.nvars() != params.n() || system.len() != params.m() {
            return Err(Error::DimensionMismatch { expected: params.m(), got: system.len() });
        }
        if system.field() != params.field() {
            return Err(Error::SpecMismatch);
        }
        if system.degree() > 4 {
            return Err(Error::DegreeTooHigh(system.degree()));
        }
        if reduced && system.polys()[..params.t()].iter().any(|p| p.degree() > 2) {
            return Err(Error::ParamSanity("reduced key has a first-block coordinate above degree 2".into()));
        }
        Ok(Self { params, reduced, system, dense: OnceLock::new() })
    }

    pub fn params(&self) -> &PestoParams {
        &self.params
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn system(&self) -> &PolySystem {
        &self.system
    }

    fn dense(&self) -> &DenseForm {
        self.dense.get_or_init(|| {
            let index = MonomialIndex::new(self.params.n(), 4, self.params.field().order());
            let coeffs = self
                .system
                .polys()
                .iter()
                .map(|p| {
                    let mut row = vec![0; index.len()];
                    for (mono, c) in p.terms() {
                        row[index.get(mono).expect("degree <= 4")] = c;
                    }
                    row
                })
                .collect();
            DenseForm { index, coeffs }
        })
    }

    /// `G_pub(z)`.
    pub fn encrypt(&self, z: &[Elem]) -> Result<Vec<Elem>> {
        if z.len() != self.params.n() {
            return Err(Error::DimensionMismatch { expected: self.params.n(), got: z.len() });
        }
        let f = self.params.field();
        let dense = self.dense();
        let (vals, _) = dense.index.values(f, z);
        Ok(dense.coeffs.iter().map(|row| f.dot(row, &vals)).collect())
    }

    pub fn verify(&self, w: &[Elem], sig: &Signature) -> bool {
        w.len() == self.params.m() && self.encrypt(&sig.0).is_ok_and(|v| v == w)
    }

    /// Verification by direct evaluation of every coordinate as a dense
    /// quartic, returning the verdict and the multiplications spent.
    pub fn verify_counted(&self, w: &[Elem], sig: &Signature) -> Result<(bool, u64)> {
        let n = self.params.n();
        if sig.0.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: sig.0.len() });
        }
        if w.len() != self.params.m() {
            return Err(Error::DimensionMismatch { expected: self.params.m(), got: w.len() });
        }
        let f = self.params.field();
        let dense = self.dense();
        let mut mults = 0u64;
        let mut ok = true;
        for (row, &target) in dense.coeffs.iter().zip(w) {
            let (vals, monomial_mults) = dense.index.values(f, &sig.0);
            mults += monomial_mults;
            let mut acc = row[0];
            for (&c, &v) in row.iter().zip(&vals).skip(1) {
                acc = f.add(acc, f.mul(c, v));
                mults += 1;
            }
            ok &= acc == target;
        }
        Ok((ok, mults))
    }
}

/// Maps a message to GF(q)^m: SHAKE256 output is read as a little-endian
/// bit stream in `ceil(log2 q)`-bit chunks, and chunks `>= q` are skipped.
pub fn hash_to_field(field: &Field, msg: &[u8], m: usize) -> Vec<Elem> {
    let mut hasher = Shake256::default();
    hasher.update(b"pesto-digest");
    hasher.update(msg);
    let mut reader = hasher.finalize_xof();
    let width = field.bit_width();
    let mut out = Vec::with_capacity(m);
    let mut acc: u64 = 0;
    let mut bits = 0u32;
    let mut byte = [0u8; 1];
    while out.len() < m {
        while bits < width {
            reader.read(&mut byte);
            acc |= (byte[0] as u64) << bits;
            bits += 8;
        }
        let chunk = (acc & ((1u64 << width) - 1)) as u32;
        acc >>= width;
        bits -= width;
        if chunk < field.order() {
            out.push(chunk as Elem);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn gf64() -> Field {
        Field::binary(6).unwrap()
    }

    #[test]
    fn param_validation() {
        let f = gf64();
        assert!(PestoParams::new(&f, 10, 8, 3, 2).is_ok());
        assert!(PestoParams::new(&f, 10, 8, 3, 0).is_err());
        assert!(PestoParams::relaxed(&f, 8, 8, 1, 0).is_ok());
        assert!(PestoParams::new(&f, 10, 8, 0, 2).is_err());
        assert!(PestoParams::new(&f, 10, 8, 9, 1).is_err());
        assert!(PestoParams::new(&f, 10, 8, 3, 8).is_err());
        let p = PestoParams::parse("2^6, 10, 8, 3, 2").unwrap();
        assert_eq!((p.n(), p.m(), p.t(), p.s()), (10, 8, 3, 2));
        assert!(p.warnings().is_empty());
        let w = PestoParams::new(&f, 10, 8, 1, 1).unwrap().warnings();
        assert_eq!(w.len(), 2);
        assert!(PestoParams::parse("2^6,10,8,3").is_err());
    }

    #[test]
    fn toy_verify_cost() {
        let s = Shape::new(5, 4, 2, 1).unwrap();
        assert_eq!(mult_cost(s).verify, 980);
    }

    #[test]
    fn degenerate_sign_cost() {
        // n = m = t: empty U
        let s = Shape { n: 4, m: 4, t: 4, s: 0 };
        assert_eq!(mult_cost(s).sign, 16 + 16);
    }

    #[test]
    fn standard_shape_secret_counts() {
        for (n, m, t, s, sk, skr) in [
            (27, 25, 10, 2, 7406, 7256),
            (40, 38, 14, 2, 21878, 21542),
            (57, 55, 20, 2, 59041, 58341),
        ] {
            let shape = Shape::new(n, m, t, s).unwrap();
            assert_eq!(key_counts(shape, false).secret, sk);
            assert_eq!(key_counts(shape, true).secret, skr);
        }
    }

    #[test]
    fn empty_u_signs_first_try() {
        let f = gf64();
        let params = PestoParams::new(&f, 6, 3, 3, 1).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        let kp = keygen(&params, &mut rng, true).unwrap();
        for _ in 0..20 {
            let w = f.random_vec(3, &mut rng);
            let (sig, attempts) = kp.secret.sign_with_stats(&w, &mut rng).unwrap();
            assert_eq!(attempts, 1);
            assert!(kp.public.verify(&w, &sig));
        }
    }

    #[test]
    fn sign_verify_small() {
        let f = gf64();
        let params = PestoParams::new(&f, 7, 5, 2, 2).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(6);
        let kp = keygen(&params, &mut rng, false).unwrap();
        let w = f.random_vec(5, &mut rng);
        let sig = kp.secret.sign(&w, &mut rng).unwrap();
        assert!(kp.public.verify(&w, &sig));
        let (ok, mults) = kp.public.verify_counted(&w, &sig).unwrap();
        assert!(ok);
        assert_eq!(mults, mult_cost(params.shape()).verify);
        assert!(kp.secret.sign(&w[..4], &mut rng).is_err());
    }

    #[test]
    fn dense_and_symbolic_public_keys_agree() {
        let mut rng = ChaCha20Rng::seed_from_u64(8);
        for (field, n, m, t, s) in [(gf64(), 7, 5, 2, 2), (Field::prime(5).unwrap(), 5, 4, 2, 1), (Field::binary(1).unwrap(), 6, 4, 2, 2)] {
            let params = PestoParams::new(&field, n, m, t, s).unwrap();
            for reduced in [false, true] {
                let sk = SecretKey::generate(&params, &mut rng, reduced).unwrap();
                assert_eq!(sk.public_key().unwrap(), sk.public_key_symbolic().unwrap());
            }
        }
    }

    #[test]
    fn report_counts_quadratic_components() {
        let params = PestoParams::new(&gf64(), 10, 8, 3, 2).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(9);
        let kp = keygen(&params, &mut rng, true).unwrap();
        assert_eq!(kp.report.quadratic_dim, 3);
        assert_eq!(kp.report.extra_quadratic, 0);
    }

    #[test]
    fn digest_is_deterministic_and_in_range() {
        let f = Field::prime(5).unwrap();
        let a = hash_to_field(&f, b"hello", 16);
        assert_eq!(a, hash_to_field(&f, b"hello", 16));
        assert_ne!(a, hash_to_field(&f, b"hellp", 16));
        assert!(a.iter().all(|&v| v < 5));
        let g = gf64();
        assert_eq!(hash_to_field(&g, b"", 40).len(), 40);
    }
}
