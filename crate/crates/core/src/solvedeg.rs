//! Solving-degree probe for small public systems.
//!
//! A Gröbner basis of `G_pub(z) - w` is computed in grevlex order with the
//! normal selection strategy (pairs of lowest degree first). The witness
//! degree is the highest pair degree processed up to the last pair whose
//! reduction was nonzero: from that point on the basis is complete, so it
//! is the smallest degree at which a degree-truncated computation already
//! yields the basis. Rational solutions are then read off the
//! multiplication matrices of the quotient ring and re-verified.
//!
//! Dense Macaulay matrices give the per-degree rank profile.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::time::Instant;

use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::matrix::Matrix;
use crate::poly::{Monomial, MonomialIndex, Poly, PolySystem};
use crate::scheme::{keygen, PestoParams};

/// Largest number of variables the probe handles.
pub const MAX_VARS: usize = 16;

/// Default column budget `C(n + d_max, d_max)`.
pub const COLUMN_BUDGET: u64 = 1 << 21;

/// Quotient rings larger than this are treated as positive-dimensional.
pub const QUOTIENT_LIMIT: usize = 1 << 12;

#[derive(Clone, Copy, Debug)]
pub struct SolveConfig {
    pub d_max: u32,
    pub column_budget: u64,
    /// Append `z_i^q - z_i` to the input (meant for q <= 5).
    pub field_equations: bool,
    /// Rank profiles are computed only for Macaulay matrices with at most
    /// this many columns.
    pub profile_columns: u64,
    /// Upper bound on processed pairs.
    pub max_pairs: usize,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self { d_max: 12, column_budget: COLUMN_BUDGET, field_equations: false, profile_columns: 4096, max_pairs: 1 << 20 }
    }
}

/// Exponent vector ordered by graded reverse lexicographic order.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
struct Mono {
    deg: u16,
    exps: [u8; MAX_VARS],
}

impl fmt::Debug for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exps)
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.deg.cmp(&other.deg).then_with(|| {
            for i in (0..MAX_VARS).rev() {
                if self.exps[i] != other.exps[i] {
                    return other.exps[i].cmp(&self.exps[i]);
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Mono {
    const ONE: Mono = Mono { deg: 0, exps: [0; MAX_VARS] };

    fn var(i: usize) -> Self {
        let mut m = Self::ONE;
        m.exps[i] = 1;
        m.deg = 1;
        m
    }

    fn from_monomial(m: &Monomial) -> Self {
        let mut out = Self::ONE;
        for (i, &e) in m.exps().iter().enumerate() {
            out.exps[i] = e as u8;
        }
        out.deg = m.degree() as u16;
        out
    }

    fn mul(&self, other: &Mono) -> Mono {
        let mut out = *self;
        for i in 0..MAX_VARS {
            out.exps[i] += other.exps[i];
        }
        out.deg += other.deg;
        out
    }

    fn divides(&self, other: &Mono) -> bool {
        self.deg <= other.deg && (0..MAX_VARS).all(|i| self.exps[i] <= other.exps[i])
    }

    fn div(&self, other: &Mono) -> Mono {
        let mut out = *self;
        for i in 0..MAX_VARS {
            out.exps[i] -= other.exps[i];
        }
        out.deg -= other.deg;
        out
    }

    fn lcm(&self, other: &Mono) -> Mono {
        let mut out = Self::ONE;
        for i in 0..MAX_VARS {
            out.exps[i] = self.exps[i].max(other.exps[i]);
        }
        out.deg = out.exps.iter().map(|&e| e as u16).sum();
        out
    }

    fn coprime(&self, other: &Mono) -> bool {
        (0..MAX_VARS).all(|i| self.exps[i] == 0 || other.exps[i] == 0)
    }
}

/// Sparse polynomial, terms in descending grevlex order.
#[derive(Clone, Debug, PartialEq, Eq)]
struct SPoly {
    terms: Vec<(Mono, Elem)>,
}

impl SPoly {
    fn from_poly(p: &Poly) -> Self {
        let mut terms: Vec<(Mono, Elem)> = p.terms().map(|(m, c)| (Mono::from_monomial(m), c)).collect();
        terms.sort_by_key(|t| std::cmp::Reverse(t.0));
        Self { terms }
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn lm(&self) -> Mono {
        self.terms[0].0
    }

    fn degree(&self) -> u16 {
        self.terms.iter().map(|t| t.0.deg).max().unwrap_or(0)
    }

    fn monic(mut self, f: &Field) -> Self {
        if let Some(&(_, lc)) = self.terms.first() {
            let inv = f.inv(lc).expect("nonzero leading coefficient");
            for t in &mut self.terms {
                t.1 = f.mul(t.1, inv);
            }
        }
        self
    }

    fn shifted(&self, mono: &Mono) -> SPoly {
        SPoly { terms: self.terms.iter().map(|&(m, c)| (m.mul(mono), c)).collect() }
    }

    /// `self - c * mono * g`.
    fn sub_mul(&self, f: &Field, c: Elem, mono: &Mono, g: &SPoly) -> SPoly {
        let mut out = Vec::with_capacity(self.terms.len() + g.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < g.terms.len() {
            let right = g.terms.get(j).map(|&(m, v)| (m.mul(mono), f.neg(f.mul(c, v))));
            match (self.terms.get(i), right) {
                (Some(&(a, va)), Some((b, vb))) => match a.cmp(&b) {
                    Ordering::Greater => {
                        out.push((a, va));
                        i += 1;
                    }
                    Ordering::Less => {
                        out.push((b, vb));
                        j += 1;
                    }
                    Ordering::Equal => {
                        let s = f.add(va, vb);
                        if s != 0 {
                            out.push((a, s));
                        }
                        i += 1;
                        j += 1;
                    }
                },
                (Some(&t), None) => {
                    out.push(t);
                    i += 1;
                }
                (None, Some(t)) => {
                    out.push(t);
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        SPoly { terms: out }
    }}

/// Full reduction of `p` by the monic polynomials `basis`.
fn reduce(f: &Field, mut p: SPoly, basis: &[SPoly]) -> SPoly {
    let mut done: Vec<(Mono, Elem)> = Vec::new();
    while let Some(&(lead, c)) = p.terms.first() {
        match basis.iter().find(|g| g.lm().divides(&lead)) {
            Some(g) => p = p.sub_mul(f, c, &lead.div(&g.lm()), g),
            None => {
                done.push((lead, c));
                p.terms.remove(0);
            }
        }
    }
    SPoly { terms: done }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Mono,
}

/// Grevlex Gröbner basis with bookkeeping of pair degrees.
struct Buchberger<'a> {
    field: &'a Field,
    polys: Vec<SPoly>,
    active: Vec<usize>,
    pairs: Vec<Pair>,
    /// Highest pair degree processed so far.
    max_degree: u16,
    /// Value of `max_degree` when the last nonzero remainder appeared.
    witness: u16,
    processed: usize,
}

impl<'a> Buchberger<'a> {
    fn new(field: &'a Field) -> Self {
        Self { field, polys: Vec::new(), active: Vec::new(), pairs: Vec::new(), max_degree: 0, witness: 0, processed: 0 }
    }

    fn active_polys(&self) -> Vec<SPoly> {
        self.active.iter().map(|&i| self.polys[i].clone()).collect()
    }

    /// Gebauer–Möller update with a new monic element.
    fn insert(&mut self, h: SPoly) {
        let hi = self.polys.len();
        let lh = h.lm();
        self.polys.push(h);
        let candidates: Vec<Pair> =
            self.active.iter().map(|&g| Pair { i: g, j: hi, lcm: lh.lcm(&self.polys[g].lm()) }).collect();
        let mut kept: Vec<Pair> = Vec::new();
        for (k, p) in candidates.iter().enumerate() {
            let coprime = lh.coprime(&self.polys[p.i].lm());
            let dominated = candidates[k + 1..].iter().chain(&kept).any(|o| o.lcm.divides(&p.lcm));
            if coprime || !dominated {
                kept.push(*p);
            }
        }
        kept.retain(|p| !lh.coprime(&self.polys[p.i].lm()));
        let polys = &self.polys;
        self.pairs.retain(|p| {
            !(lh.divides(&p.lcm)
                && lh.lcm(&polys[p.i].lm()) != p.lcm
                && lh.lcm(&polys[p.j].lm()) != p.lcm)
        });
        self.pairs.extend(kept);
        let polys = &self.polys;
        self.active.retain(|&g| !lh.divides(&polys[g].lm()));
        self.active.push(hi);
    }

    fn add_generator(&mut self, p: SPoly) {
        let reduced = reduce(self.field, p, &self.active_polys());
        if !reduced.is_zero() {
            self.witness = self.witness.max(reduced.degree());
            self.max_degree = self.max_degree.max(reduced.degree());
            self.insert(reduced.monic(self.field));
        }
    }

    /// Processes pairs of degree at most `d_max`; `Ok(true)` once none remain.
    fn run(&mut self, d_max: u16, max_pairs: usize) -> Result<bool> {
        while let Some(pos) = (0..self.pairs.len()).min_by_key(|&k| self.pairs[k].lcm) {
            let pair = self.pairs[pos];
            if pair.lcm.deg > d_max {
                return Ok(false);
            }
            self.pairs.swap_remove(pos);
            self.processed += 1;
            if self.processed > max_pairs {
                return Err(Error::BudgetExceeded { needed: self.processed as u128, budget: max_pairs as u128 });
            }
            self.max_degree = self.max_degree.max(pair.lcm.deg);
            let (gi, gj) = (&self.polys[pair.i], &self.polys[pair.j]);
            let s = gi.shifted(&pair.lcm.div(&gi.lm())).sub_mul(self.field, 1, &pair.lcm.div(&gj.lm()), gj);
            let r = reduce(self.field, s, &self.active_polys());
            if !r.is_zero() {
                self.witness = self.max_degree;
                self.insert(r.monic(self.field));
            }
        }
        Ok(true)
    }
}

/// How the probe ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    /// A verified rational solution was found.
    Solved,
    /// The basis is complete but no rational point satisfies the system.
    NoRationalSolution,
    /// The quotient ring is too large (or infinite).
    PositiveDimensional,
    /// Pairs above `d_max` remain.
    DegreeLimit,
}

/// Rank of the degree-`d` Macaulay matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RankPoint {
    pub degree: u32,
    pub rows: usize,
    pub columns: usize,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveDegreeEstimate {
    /// `(q, n, m, t, s)` when the system came from a key.
    pub params: Option<(u32, usize, usize, usize, usize)>,
    pub witness_degree: Option<u32>,
    pub max_input_degree: u32,
    /// Highest pair degree processed, including the final zero reductions.
    pub max_pair_degree: u32,
    pub basis_size: usize,
    pub quotient_dim: Option<usize>,
    pub rank_profile: Vec<RankPoint>,
    pub termination: Termination,
    pub solutions: Vec<Vec<Elem>>,
    pub pairs_processed: usize,
}

/// Rows `u * f_i` (`deg u <= d - deg f_i`) over the canonical monomials of
/// degree at most `d`, with exponents reduced by `x^q = x`.
#[derive(Clone, Debug)]
pub struct MacaulayMatrix {
    pub degree: u32,
    pub row_labels: Vec<(Monomial, usize)>,
    pub columns: Vec<Monomial>,
    pub matrix: Matrix,
}

impl MacaulayMatrix {
    pub fn build(polys: &[Poly], d: u32) -> Result<Self> {
        let Some(first) = polys.first() else {
            return Err(Error::ParamRange("empty system".into()));
        };
        let (f, n) = (first.field().clone(), first.nvars());
        let q = f.order();
        let cols = MonomialIndex::new(n, d, q);
        let mut row_labels = Vec::new();
        let mut data = Vec::new();
        for (pi, p) in polys.iter().enumerate() {
            let pd = p.degree();
            if pd > d || p.is_zero() {
                continue;
            }
            for u in crate::poly::monomials_up_to(n, d - pd, q) {
                let mut row = vec![0 as Elem; cols.len()];
                for (m, c) in p.terms() {
                    let idx = cols.get(&m.mul(&u, q)).expect("degree within bound");
                    row[idx] = f.add(row[idx], c);
                }
                data.extend(row);
                row_labels.push((u, pi));
            }
        }
        let matrix = Matrix::from_data(&f, row_labels.len(), cols.len(), data)?;
        Ok(Self { degree: d, row_labels, columns: cols.monomials().to_vec(), matrix })
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }
}

fn binomial(n: u64, k: u64) -> BigUint {
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

fn columns(n: usize, d: u32) -> u64 {
    u64::try_from(binomial((n as u64) + d as u64, d as u64)).unwrap_or(u64::MAX)
}

/// Standard monomials of a zero-dimensional basis, or `None` past the limit.
fn standard_monomials(nvars: usize, leads: &[Mono], limit: usize) -> Option<Vec<Mono>> {
    let mut seen: BTreeSet<Mono> = BTreeSet::new();
    let mut frontier = vec![Mono::ONE];
    if leads.iter().any(|l| l.deg == 0) {
        return Some(Vec::new());
    }
    seen.insert(Mono::ONE);
    while let Some(m) = frontier.pop() {
        for v in 0..nvars {
            if m.exps[v] == u8::MAX {
                return None;
            }
            let next = m.mul(&Mono::var(v));
            if !leads.iter().any(|l| l.divides(&next)) && seen.insert(next) {
                if seen.len() > limit {
                    return None;
                }
                frontier.push(next);
            }
        }
    }
    Some(seen.into_iter().collect())
}

/// Rational common zeros of a zero-dimensional ideal from the left
/// eigenvectors of the multiplication matrices.
fn rational_points(f: &Field, nvars: usize, basis: &[SPoly], standard: &[Mono]) -> Vec<Vec<Elem>> {
    let dim = standard.len();
    let pos: HashMap<Mono, usize> = standard.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let mult: Vec<Matrix> = (0..nvars)
        .map(|v| {
            let mut mat = Matrix::zeros(f, dim, dim);
            for (col, b) in standard.iter().enumerate() {
                let nf = reduce(f, SPoly { terms: vec![(b.mul(&Mono::var(v)), 1)] }, basis);
                for (m, c) in nf.terms {
                    mat.set(pos[&m], col, c);
                }
            }
            mat
        })
        .collect();
    // evaluation functionals ev with ev * M_v = p_v * ev
    let mut out = Vec::new();
    let mut stack: Vec<(Vec<Vec<Elem>>, Vec<Elem>)> = vec![(identity_rows(dim), Vec::new())];
    while let Some((space, coords)) = stack.pop() {
        let v = coords.len();
        if v == nvars {
            out.push(coords);
            continue;
        }
        let s = Matrix::from_row_vecs(f, dim, &space).expect("consistent");
        let sm = s.mul(&mult[v]).expect("square");
        for a in f.elements() {
            // rows c with c * (S M - a S) = 0
            let mut shifted = sm.clone();
            for r in 0..s.rows() {
                for c in 0..dim {
                    shifted.set(r, c, f.sub(sm.get(r, c), f.mul(a, s.get(r, c))));
                }
            }
            let kernel = shifted.left_nullspace();
            if kernel.is_empty() {
                continue;
            }
            let sub: Vec<Vec<Elem>> =
                kernel.iter().map(|c| s.transpose().mul_vec(c).expect("dimensions")).collect();
            let mut next = coords.clone();
            next.push(a);
            stack.push((sub, next));
        }
    }
    out.sort();
    out
}

fn identity_rows(n: usize) -> Vec<Vec<Elem>> {
    (0..n)
        .map(|i| {
            let mut r = vec![0; n];
            r[i] = 1;
            r
        })
        .collect()
}

/// Estimates the solving degree of `system(z) = target` and recovers its
/// rational solutions.
pub fn xl_witness_degree(system: &PolySystem, target: &[Elem], cfg: &SolveConfig) -> Result<SolveDegreeEstimate> {
    let f = system.field();
    let n = system.nvars();
    if n > MAX_VARS {
        return Err(Error::ParamRange(format!("at most {MAX_VARS} variables, got {n}")));
    }
    if target.len() != system.len() {
        return Err(Error::DimensionMismatch { expected: system.len(), got: target.len() });
    }
    let needed = columns(n, cfg.d_max);
    if needed > cfg.column_budget {
        return Err(Error::BudgetExceeded { needed: needed as u128, budget: cfg.column_budget as u128 });
    }
    let mut inputs: Vec<Poly> = system
        .polys()
        .iter()
        .zip(target)
        .map(|(p, &w)| p.sub(&Poly::constant(f, n, w)))
        .collect::<Result<_>>()?;
    let max_input_degree = inputs.iter().map(Poly::degree).max().unwrap_or(0);

    let mut gb = Buchberger::new(f);
    let mut sorted: Vec<SPoly> = inputs.iter().map(SPoly::from_poly).filter(|p| !p.is_zero()).collect();
    sorted.sort_by_key(|p| p.lm());
    if cfg.field_equations {
        for v in 0..n {
            let mut xq = Mono::var(v);
            xq.exps[v] = f.order() as u8;
            xq.deg = f.order() as u16;
            sorted.push(SPoly { terms: vec![(xq, 1), (Mono::var(v), f.neg(1))] });
        }
    }
    for p in sorted {
        gb.add_generator(p);
    }
    let complete = gb.run(cfg.d_max as u16, cfg.max_pairs)?;

    let leads: Vec<Mono> = gb.active.iter().map(|&i| gb.polys[i].lm()).collect();
    let basis = gb.active_polys();
    let (termination, quotient_dim, solutions) = if !complete {
        (Termination::DegreeLimit, None, Vec::new())
    } else {
        match standard_monomials(n, &leads, QUOTIENT_LIMIT) {
            None => (Termination::PositiveDimensional, None, Vec::new()),
            Some(std) => {
                let candidates = if std.is_empty() { Vec::new() } else { rational_points(f, n, &basis, &std) };
                let verified: Vec<Vec<Elem>> = candidates
                    .into_iter()
                    .filter(|p| inputs.iter().all(|g| g.eval(p).is_ok_and(|v| v == 0)))
                    .collect();
                let term = if verified.is_empty() { Termination::NoRationalSolution } else { Termination::Solved };
                (term, Some(std.len()), verified)
            }
        }
    };

    let witness_degree = (termination == Termination::Solved)
        .then(|| (gb.witness as u32).max(max_input_degree));
    let top = witness_degree.unwrap_or(gb.max_degree as u32).max(max_input_degree);
    if cfg.field_equations {
        inputs.extend((0..n).map(|v| {
            let mut p = Poly::var(f, n, v).pow(f.order());
            p.add_term(Monomial::var(n, v), f.neg(1));
            p
        }));
    }
    let mut rank_profile = Vec::new();
    for d in max_input_degree.max(1)..=top {
        if columns(n, d) > cfg.profile_columns {
            break;
        }
        let mac = MacaulayMatrix::build(&inputs, d)?;
        rank_profile.push(RankPoint { degree: d, rows: mac.matrix.rows(), columns: mac.matrix.cols(), rank: mac.rank() });
    }

    Ok(SolveDegreeEstimate {
        params: None,
        witness_degree,
        max_input_degree,
        max_pair_degree: (gb.max_degree as u32).max(max_input_degree),
        basis_size: gb.active.len(),
        quotient_dim,
        rank_profile,
        termination,
        solutions,
        pairs_processed: gb.processed,
    })
}

/// One CSV row: `q,n,m,t,s,seed,witness_degree,max_rank_degree,runtime_ms`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbeRow {
    pub q: u32,
    pub n: usize,
    pub m: usize,
    pub t: usize,
    pub s: usize,
    pub seed: u64,
    pub witness_degree: Option<u32>,
    pub max_rank_degree: Option<u32>,
    pub runtime_ms: u128,
}

pub const CSV_HEADER: &str = "q,n,m,t,s,seed,witness_degree,max_rank_degree,runtime_ms";

impl ProbeRow {
    pub fn to_csv(&self) -> String {
        let opt = |v: Option<u32>| v.map_or_else(String::new, |d| d.to_string());
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.q,
            self.n,
            self.m,
            self.t,
            self.s,
            self.seed,
            opt(self.witness_degree),
            opt(self.max_rank_degree),
            self.runtime_ms
        )
    }
}

/// Result of [`probe`]: the estimate plus the full preimages it recovered.
#[derive(Clone, Debug)]
pub struct Probe {
    pub estimate: SolveDegreeEstimate,
    pub row: ProbeRow,
    pub planted: Vec<Elem>,
    pub target: Vec<Elem>,
    /// Recovered preimages in the full `n` variables, each re-encrypted.
    pub preimages: Vec<Vec<Elem>>,
}

/// Generates a key from `seed`, plants a preimage `z0`, fixes the last
/// `n - m` coordinates to those of `z0` so the system is square, and runs
/// [`xl_witness_degree`] on the remaining `m` variables.
pub fn probe(params: &PestoParams, seed: u64, cfg: &SolveConfig) -> Result<Probe> {
    let start = Instant::now();
    let f = params.field();
    let (n, m) = (params.n(), params.m());
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let kp = keygen(params, &mut rng, true)?;
    let planted = f.random_vec(n, &mut rng);
    let target = kp.public.encrypt(&planted)?;
    let free = m.min(n);
    let mut assignment: Vec<Option<Elem>> = vec![None; n];
    for v in free..n {
        assignment[v] = Some(planted[v]);
    }
    let restricted: Vec<Poly> = kp
        .public
        .system()
        .polys()
        .iter()
        .map(|p| {
            let fixed = p.partial_eval(&assignment)?;
            Ok(shrink(&fixed, free))
        })
        .collect::<Result<_>>()?;
    let square = PolySystem::new(f, free, restricted)?;
    let mut estimate = xl_witness_degree(&square, &target, cfg)?;
    estimate.params = Some((f.order(), n, m, params.t(), params.s()));
    let mut preimages = Vec::new();
    for sol in &estimate.solutions {
        let mut z = sol.clone();
        z.extend_from_slice(&planted[free..]);
        if kp.public.encrypt(&z)? == target {
            preimages.push(z);
        }
    }
    let row = ProbeRow {
        q: f.order(),
        n,
        m,
        t: params.t(),
        s: params.s(),
        seed,
        witness_degree: estimate.witness_degree,
        max_rank_degree: estimate.rank_profile.last().map(|r| r.degree),
        runtime_ms: start.elapsed().as_millis(),
    };
    Ok(Probe { estimate, row, planted, target, preimages })
}

/// Drops the trailing variables (which no longer occur).
fn shrink(p: &Poly, keep: usize) -> Poly {
    let mut out = Poly::zero(p.field(), keep);
    for (mono, c) in p.terms() {
        out.add_term(Monomial::new(mono.exps()[..keep].to_vec()), c);
    }
    out
}

/// `C(n + sd, n)^omega` in bits, together with the exact binomial.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexityBound {
    pub binomial: BigUint,
    pub omega: f64,
    pub log2: f64,
}

/// `log2` of a big unsigned integer to double precision.
pub fn log2_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    let shift = bits.saturating_sub(64);
    let top = x >> shift;
    let lead: u64 = top.try_into().expect("fits in 64 bits");
    (lead as f64).log2() + shift as f64
}

pub fn gb_complexity_bound(n: u64, sd: u64, omega: f64) -> Result<ComplexityBound> {
    if sd < 1 {
        return Err(Error::ParamRange("solving degree must be at least 1".into()));
    }
    if !(omega > 2.0 && omega < 3.0) {
        return Err(Error::ParamRange(format!("omega = {omega} not in (2, 3)")));
    }
    let b = binomial(n + sd, n.min(sd));
    let log2 = omega * log2_big(&b);
    Ok(ComplexityBound { binomial: b, omega, log2 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grevlex_order() {
        // x0 > x1 > x2; x0 x2 < x1^2 in grevlex
        let m = |e: [u8; 3]| {
            let mut x = Mono::ONE;
            x.exps[..3].copy_from_slice(&e);
            x.deg = e.iter().map(|&v| v as u16).sum();
            x
        };
        assert!(m([1, 0, 0]) > m([0, 1, 0]));
        assert!(m([0, 1, 0]) > m([0, 0, 1]));
        assert!(m([0, 2, 0]) > m([1, 0, 1]));
        assert!(m([2, 0, 0]) > m([0, 2, 0]));
        assert!(m([0, 0, 2]) > m([1, 0, 0]));
    }

    #[test]
    fn linear_system_has_witness_one() {
        let f = Field::prime(7).unwrap();
        let names = ["a", "b", "c"];
        let sys = PolySystem::parse(&f, &names, &["a + 2b + c", "b + 3c + 1", "a + c"]).unwrap();
        let est = xl_witness_degree(&sys, &[1, 2, 3], &SolveConfig::default()).unwrap();
        assert_eq!(est.witness_degree, Some(1));
        assert_eq!(est.solutions.len(), 1);
        assert_eq!(sys.eval(&est.solutions[0]).unwrap(), vec![1, 2, 3]);
    }

    #[test]
    fn small_quadratic_system() {
        let f = Field::prime(5).unwrap();
        let names = ["a", "b"];
        // a^2 = 4 and a = b: solutions (2,2), (3,3)
        let sys = PolySystem::parse(&f, &names, &["a^2", "a - b"]).unwrap();
        let est = xl_witness_degree(&sys, &[4, 0], &SolveConfig::default()).unwrap();
        assert_eq!(est.solutions, vec![vec![2, 2], vec![3, 3]]);
        assert_eq!(est.termination, Termination::Solved);
        assert_eq!(est.quotient_dim, Some(2));
    }

    #[test]
    fn no_rational_point() {
        let f = Field::prime(5).unwrap();
        // a^2 = 2 has no root mod 5
        let sys = PolySystem::parse(&f, &["a"], &["a^2"]).unwrap();
        let est = xl_witness_degree(&sys, &[2], &SolveConfig::default()).unwrap();
        assert_eq!(est.termination, Termination::NoRationalSolution);
    }

    #[test]
    fn underdetermined_is_positive_dimensional() {
        let f = Field::binary(6).unwrap();
        let sys = PolySystem::parse(&f, &["a", "b"], &["a*b"]).unwrap();
        let est = xl_witness_degree(&sys, &[1], &SolveConfig::default()).unwrap();
        assert_eq!(est.termination, Termination::PositiveDimensional);
    }

    #[test]
    fn bound_small_cases() {
        let b = gb_complexity_bound(5, 1, 2.5).unwrap();
        assert_eq!(b.binomial, BigUint::from(6u32));
        assert!((b.log2 - 2.5 * 6f64.log2()).abs() < 1e-12);
        assert!(gb_complexity_bound(5, 0, 2.5).is_err());
        assert!(gb_complexity_bound(5, 3, 3.0).is_err());
        let big = BigUint::from(1u8) << 200usize;
        assert!((log2_big(&big) - 200.0).abs() < 1e-9);
    }

    #[test]
    fn macaulay_rows_and_columns() {
        let f = Field::prime(5).unwrap();
        let p = Poly::parse(&f, &["a", "b"], "a*b + 1").unwrap();
        let mac = MacaulayMatrix::build(&[p], 3).unwrap();
        assert_eq!(mac.columns.len(), 10);
        assert_eq!(mac.row_labels.len(), 3);
        assert_eq!(mac.rank(), 3);
    }
}
