//! Cryptanalysis: isolation of the quadratic components of a public key,
//! linear structures, the bilinear-relation linearization attack and the
//! forgery available to anyone who knows `A2`.

use std::collections::BTreeMap;
use std::time::Instant;

use itertools::Itertools;
use rand::Rng;
use serde::Serialize;

use crate::affine::AffineBijection;
use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::matrix::{enumerate_affine_span, LinearSolution, Matrix};
use crate::poly::{MonomialIndex, Poly, PolySystem, Side};
use crate::scheme::PublicKey;

/// Largest `q^n` (and `q^m`) accepted by the exhaustive structure counters.
pub const BRUTE_FORCE_BUDGET: u64 = 1 << 16;

/// Default number of candidates a single attack may enumerate.
pub const ENUMERATION_BUDGET: u128 = 1 << 16;

/// The `lambda` with `deg(lambda . sys) <= 2`, as a basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentSpace {
    pub basis: Vec<Vec<Elem>>,
    /// Number of degree-3 and degree-4 terms, the column count of the
    /// isolation matrix.
    pub delta: usize,
}

impl ComponentSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn components(&self, sys: &PolySystem) -> Result<Vec<Poly>> {
        self.basis.iter().map(|l| sys.component(l)).collect()
    }
}

/// Builds the `m x |Delta|` matrix of coefficients of every monomial of
/// degree 3 up to `max(deg sys, 4)`.
pub fn isolation_matrix(sys: &PolySystem) -> Matrix {
    let f = sys.field();
    let top = sys.degree().max(4);
    let idx = MonomialIndex::new(sys.nvars(), top, f.order());
    let delta: BTreeMap<_, usize> = idx
        .monomials()
        .iter()
        .filter(|m| m.degree() >= 3)
        .enumerate()
        .map(|(col, m)| (m.clone(), col))
        .collect();
    let mut mat = Matrix::zeros(f, sys.len(), delta.len());
    for (r, p) in sys.polys().iter().enumerate() {
        for (mono, c) in p.terms() {
            if let Some(&col) = delta.get(mono) {
                mat.set(r, col, c);
            }
        }
    }
    mat
}

pub fn isolate_quadratic(sys: &PolySystem) -> ComponentSpace {
    let mat = isolation_matrix(sys);
    ComponentSpace { basis: mat.left_nullspace(), delta: mat.cols() }
}

/// Basis of the components of `sys` with degree at most 2.
pub fn quadratic_component_basis(sys: &PolySystem) -> Vec<Vec<Elem>> {
    isolate_quadratic(sys).basis
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StructureMethod {
    LinearAlgebra,
    BruteForce,
}

/// A subspace of GF(q)^n given by a reduced basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearStructureSpace {
    pub n: usize,
    pub basis: Vec<Vec<Elem>>,
}

impl LinearStructureSpace {
    /// Span of arbitrary vectors, stored as a reduced echelon basis.
    pub fn span(field: &Field, n: usize, vectors: &[Vec<Elem>]) -> Result<Self> {
        if vectors.is_empty() {
            return Ok(Self { n, basis: Vec::new() });
        }
        let ech = Matrix::from_row_vecs(field, n, vectors)?.echelon();
        let basis = (0..ech.rank()).map(|r| ech.matrix.row(r).to_vec()).collect();
        Ok(Self { n, basis })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, field: &Field, v: &[Elem]) -> bool {
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        Matrix::from_row_vecs(field, self.n, &rows).map(|m| m.rank() == self.dim()).unwrap_or(false)
    }

    /// Every vector of the space.
    pub fn elements(&self, field: &Field) -> Vec<Vec<Elem>> {
        enumerate_affine_span(field, &vec![0; self.n], &self.basis)
    }
}

/// The symmetric matrix `B` with `D_a f(z) = z^T B a + const` for a
/// quadratic `f`.
pub fn polar_matrix(f: &Poly) -> Result<Matrix> {
    if f.degree() > 2 {
        return Err(Error::DegreeTooHigh(f.degree()));
    }
    let field = f.field();
    let n = f.nvars();
    let mut b = Matrix::zeros(field, n, n);
    for (mono, c) in f.terms().filter(|(m, _)| m.degree() == 2) {
        let vars: Vec<usize> = mono.support().collect();
        match vars[..] {
            [i] => b.set(i, i, field.add(b.get(i, i), field.add(c, c))),
            [i, j] => {
                b.set(i, j, field.add(b.get(i, j), c));
                b.set(j, i, field.add(b.get(j, i), c));
            }
            _ => unreachable!("degree-2 monomial has one or two variables"),
        }
    }
    Ok(b)
}

/// Indexing of GF(q)^n compatible with [`Field::all_vectors`].
fn point_index(q: usize, v: &[Elem]) -> usize {
    v.iter().fold(0, |acc, &x| acc * q + x as usize)
}

fn check_brute_budget(field: &Field, k: usize) -> Result<()> {
    let size = (field.order() as u64).checked_pow(k as u32).unwrap_or(u64::MAX);
    if size > BRUTE_FORCE_BUDGET {
        return Err(Error::BudgetExceeded { needed: size as u128, budget: BRUTE_FORCE_BUDGET as u128 });
    }
    Ok(())
}

/// Every `a` whose derivative `z -> table[z + a] - table[z]` is constant,
/// where `table` lists a function on GF(q)^n in `all_vectors` order.
fn structures_from_table(field: &Field, n: usize, table: &[Elem]) -> Vec<Vec<Elem>> {
    let q = field.order() as usize;
    let points: Vec<Vec<Elem>> = field.all_vectors(n).collect();
    let mut out = Vec::new();
    let mut shifted = vec![0 as Elem; n];
    for a in &points {
        let base = field.sub(table[point_index(q, a)], table[0]);
        let constant = points.iter().enumerate().all(|(zi, z)| {
            for ((s, &x), &y) in shifted.iter_mut().zip(z).zip(a) {
                *s = field.add(x, y);
            }
            field.sub(table[point_index(q, &shifted)], table[zi]) == base
        });
        if constant {
            out.push(a.clone());
        }
    }
    out
}

fn value_table(f: &Poly) -> Result<Vec<Elem>> {
    f.field().all_vectors(f.nvars()).map(|z| f.eval(&z)).collect()
}

/// All linear structures of `f` found by exhaustive search.
pub fn linear_structure_set(f: &Poly) -> Result<Vec<Vec<Elem>>> {
    check_brute_budget(f.field(), f.nvars())?;
    Ok(structures_from_table(f.field(), f.nvars(), &value_table(f)?))
}

/// `{ a : D_a f is constant }`.
pub fn linear_structures(f: &Poly, method: StructureMethod) -> Result<LinearStructureSpace> {
    match method {
        StructureMethod::LinearAlgebra => Ok(LinearStructureSpace { n: f.nvars(), basis: polar_matrix(f)?.nullspace() }),
        StructureMethod::BruteForce => LinearStructureSpace::span(f.field(), f.nvars(), &linear_structure_set(f)?),
    }
}

/// Intersection of the linear-structure spaces of quadratic polynomials.
pub fn common_linear_structures(components: &[Poly]) -> Result<LinearStructureSpace> {
    let Some(first) = components.first() else {
        return Err(Error::ParamRange("no components given".into()));
    };
    let n = first.nvars();
    let mut rows = Vec::new();
    for c in components {
        if c.nvars() != n {
            return Err(Error::DimensionMismatch { expected: n, got: c.nvars() });
        }
        let b = polar_matrix(c)?;
        rows.extend((0..n).map(|r| b.row(r).to_vec()));
    }
    let stacked = Matrix::from_row_vecs(first.field(), n, &rows)?;
    Ok(LinearStructureSpace { n, basis: stacked.nullspace() })
}

/// For each nonzero `lambda`, the number of linear structures of
/// `lambda . sys`, sorted ascending.
pub fn structure_count_multiset(sys: &PolySystem) -> Result<Vec<u64>> {
    let f = sys.field();
    check_brute_budget(f, sys.nvars())?;
    check_brute_budget(f, sys.len())?;
    let tables: Vec<Vec<Elem>> = sys.polys().iter().map(value_table).collect::<Result<_>>()?;
    let size = tables.first().map_or(0, Vec::len);
    let mut counts: Vec<u64> = f
        .all_vectors(sys.len())
        .skip(1)
        .map(|lambda| {
            let mut combined = vec![0 as Elem; size];
            for (&l, t) in lambda.iter().zip(&tables) {
                if l != 0 {
                    for (c, &v) in combined.iter_mut().zip(t) {
                        *c = f.add(*c, f.mul(l, v));
                    }
                }
            }
            structures_from_table(f, sys.nvars(), &combined).len() as u64
        })
        .collect();
    counts.sort_unstable();
    Ok(counts)
}

/// Outcome of an attack, printable as text or JSON.
#[derive(Clone, Debug, Default, Serialize)]
pub struct AttackReport {
    pub attack: String,
    pub success: bool,
    pub wall_ms: u128,
    /// Ranks, dimensions and counts.
    pub metrics: BTreeMap<String, u64>,
    /// Recovered subspaces, by name.
    pub spaces: BTreeMap<String, Vec<Vec<Elem>>>,
    pub candidates: Vec<Vec<Elem>>,
    pub notes: Vec<String>,
}

fn join(v: &[Elem]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

impl AttackReport {
    fn new(attack: &str) -> Self {
        Self { attack: attack.into(), ..Default::default() }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("attack: {}\nsuccess: {}\nwall_ms: {}\n", self.attack, self.success, self.wall_ms);
        for (k, v) in &self.metrics {
            out += &format!("{k}: {v}\n");
        }
        for (name, basis) in &self.spaces {
            out += &format!("space {name}: dim {}\n", basis.len());
            for b in basis {
                out += &format!("  {}\n", join(b));
            }
        }
        for c in &self.candidates {
            out += &format!("candidate: {}\n", join(c));
        }
        for n in &self.notes {
            out += &format!("note: {n}\n");
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }
}

/// Quadratic isolation followed by the common linear structures of the
/// isolated components.
pub fn iso_quad_report(pk: &PublicKey) -> Result<AttackReport> {
    let start = Instant::now();
    let mut report = AttackReport::new("iso-quad");
    let space = isolate_quadratic(pk.system());
    report.metrics.insert("delta".into(), space.delta as u64);
    report.metrics.insert("dimension".into(), space.dim() as u64);
    report.metrics.insert("t".into(), pk.params().t() as u64);
    report.success = space.dim() >= pk.params().t();
    if space.dim() > pk.params().t() {
        report.notes.push("more quadratic components than t".into());
    }
    report.spaces.insert("lambda".into(), space.basis.clone());
    if space.dim() > 0 {
        let v = common_linear_structures(&space.components(pk.system())?)?;
        report.metrics.insert("common_structures_dim".into(), v.dim() as u64);
        report.spaces.insert("V".into(), v.basis);
    }
    report.wall_ms = start.elapsed().as_millis();
    Ok(report)
}

/// Linear structures of each isolated component and their intersection.
pub fn lin_struct_report(pk: &PublicKey) -> Result<AttackReport> {
    let start = Instant::now();
    let mut report = AttackReport::new("lin-struct");
    let space = isolate_quadratic(pk.system());
    let comps = space.components(pk.system())?;
    for (i, c) in comps.iter().enumerate() {
        let s = linear_structures(c, StructureMethod::LinearAlgebra)?;
        report.metrics.insert(format!("component{i}_structures_dim"), s.dim() as u64);
    }
    if !comps.is_empty() {
        let v = common_linear_structures(&comps)?;
        report.metrics.insert("common_structures_dim".into(), v.dim() as u64);
        report.success = v.dim() >= pk.params().t();
        report.spaces.insert("V".into(), v.basis);
    }
    report.wall_ms = start.elapsed().as_millis();
    Ok(report)
}

/// Layout of the bilinear relation terms for `n` inputs and `m` outputs:
/// `i_j o_k`, `o_j o_k (j <= k)`, `i_j`, `o_j`, `1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RelationTerms {
    pub n: usize,
    pub m: usize,
}

impl RelationTerms {
    pub fn len(&self) -> usize {
        self.n * self.m + self.m * (self.m + 1) / 2 + self.n + self.m + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn evaluate(&self, field: &Field, input: &[Elem], output: &[Elem]) -> Vec<Elem> {
        let mut row = Vec::with_capacity(self.len());
        for &i in input {
            row.extend(output.iter().map(|&o| field.mul(i, o)));
        }
        for j in 0..self.m {
            row.extend(output[j..].iter().map(|&o| field.mul(output[j], o)));
        }
        row.extend_from_slice(input);
        row.extend_from_slice(output);
        row.push(1);
        row
    }

    /// Rewrites a relation at a fixed output as `coeffs . i + constant`.
    fn specialize(&self, field: &Field, rel: &[Elem], output: &[Elem]) -> (Vec<Elem>, Elem) {
        let (n, m) = (self.n, self.m);
        let mut coeffs = vec![0 as Elem; n];
        for (j, c) in coeffs.iter_mut().enumerate() {
            *c = field.add(field.dot(&rel[j * m..(j + 1) * m], output), rel[n * m + m * (m + 1) / 2 + j]);
        }
        let mut constant = 0;
        let mut pos = n * m;
        for j in 0..m {
            for k in j..m {
                constant = field.add(constant, field.mul(rel[pos], field.mul(output[j], output[k])));
                pos += 1;
            }
        }
        pos += n;
        constant = field.add(constant, field.dot(&rel[pos..pos + m], output));
        constant = field.add(constant, rel[pos + m]);
        (coeffs, constant)
    }
}

/// Relations `B(i, o) = 0` satisfied by every sampled input/output pair.
#[derive(Clone, Debug)]
pub struct Relations {
    pub terms: RelationTerms,
    pub samples: usize,
    pub basis: Vec<Vec<Elem>>,
}

/// Fits all bilinear relations of `pk` from `samples` random evaluations
/// (default three times the term count).
pub fn fit_relations<R: Rng + ?Sized>(pk: &PublicKey, samples: Option<usize>, rng: &mut R) -> Result<Relations> {
    let f = pk.params().field();
    let terms = RelationTerms { n: pk.params().n(), m: pk.params().m() };
    let samples = samples.unwrap_or(3 * terms.len());
    if samples < terms.len() {
        return Err(Error::InsufficientSamples(samples));
    }
    let mut rows = Vec::with_capacity(samples);
    for _ in 0..samples {
        let input = f.random_vec(terms.n, rng);
        let output = pk.encrypt(&input)?;
        rows.push(terms.evaluate(f, &input, &output));
    }
    let full = Matrix::from_row_vecs(f, terms.len(), &rows)?;
    // the relation space must already be stable a third of a term count earlier
    let head = samples - terms.len() / 3;
    let partial = Matrix::from_row_vecs(f, terms.len(), &rows[..head])?;
    if partial.rank() != full.rank() {
        return Err(Error::InsufficientSamples(samples));
    }
    Ok(Relations { terms, samples, basis: full.nullspace() })
}

/// Uses fitted relations to look for a preimage of `target`.
pub fn linearization_forge(pk: &PublicKey, relations: &Relations, target: &[Elem], budget: u128) -> Result<AttackReport> {
    let start = Instant::now();
    let f = pk.params().field();
    let terms = relations.terms;
    if target.len() != terms.m {
        return Err(Error::DimensionMismatch { expected: terms.m, got: target.len() });
    }
    let mut report = AttackReport::new("linearize");
    report.metrics.insert("terms".into(), terms.len() as u64);
    report.metrics.insert("samples".into(), relations.samples as u64);
    report.metrics.insert("relations".into(), relations.basis.len() as u64);
    let mut mat = Matrix::zeros(f, relations.basis.len(), terms.n);
    let mut rhs = Vec::with_capacity(relations.basis.len());
    for (r, rel) in relations.basis.iter().enumerate() {
        let (coeffs, constant) = terms.specialize(f, rel, target);
        for (j, &c) in coeffs.iter().enumerate() {
            mat.set(r, j, c);
        }
        rhs.push(f.neg(constant));
    }
    report.metrics.insert("input_rank".into(), mat.rank() as u64);
    match mat.solve(&rhs)? {
        LinearSolution::NoSolution => report.notes.push("relations are inconsistent at the target".into()),
        LinearSolution::Solution { particular, basis } => {
            report.metrics.insert("solution_dim".into(), basis.len() as u64);
            let size = (f.order() as u128).checked_pow(basis.len() as u32).unwrap_or(u128::MAX);
            if size > budget {
                report.notes.push(format!("solution space of size {size} exceeds budget {budget}"));
            } else {
                for cand in enumerate_affine_span(f, &particular, &basis) {
                    if pk.encrypt(&cand)? == target {
                        report.candidates.push(cand);
                    }
                }
                report.success = !report.candidates.is_empty();
                if !report.success {
                    report.notes.push("no candidate verified".into());
                }
            }
        }
    }
    report.wall_ms = start.elapsed().as_millis();
    Ok(report)
}

/// Both phases of the linearization attack.
pub fn linearization_attack<R: Rng + ?Sized>(
    pk: &PublicKey,
    samples: Option<usize>,
    target: &[Elem],
    rng: &mut R,
) -> Result<AttackReport> {
    let start = Instant::now();
    let relations = fit_relations(pk, samples, rng)?;
    let mut report = linearization_forge(pk, &relations, target, ENUMERATION_BUDGET)?;
    report.wall_ms = start.elapsed().as_millis();
    Ok(report)
}

/// Smallest set `S` of variables (of size at most `max`) such that every
/// polynomial becomes affine once `S` is fixed.
fn linearizing_set(polys: &[Poly], candidates: &[usize], max: usize) -> Option<Vec<usize>> {
    let nonlinear = |s: &[usize]| {
        polys.iter().any(|p| {
            p.terms().any(|(mono, _)| {
                mono.support().filter(|v| !s.contains(v)).map(|v| mono.exp(v) as usize).sum::<usize>() > 1
            })
        })
    };
    (0..=max.min(candidates.len()))
        .flat_map(|size| candidates.iter().copied().combinations(size))
        .find(|set| !nonlinear(set))
}

/// Finds `z` with `G_pub(z) = c`, given the true input transformation.
/// Returns `None` when no preimage exists (or the key was not honest).
pub fn forge_with_known_a2(pk: &PublicKey, a2: &AffineBijection, c: &[Elem], budget: u128) -> Result<Option<Vec<Elem>>> {
    let params = pk.params();
    let f = params.field();
    let (n, m, t) = (params.n(), params.m(), params.t());
    if c.len() != m {
        return Err(Error::DimensionMismatch { expected: m, got: c.len() });
    }
    let gbar = pk.system().compose_affine(&a2.inverse(), Side::Input)?;
    let space = isolate_quadratic(&gbar);
    if space.dim() != t {
        return Err(Error::IsolationAmbiguous(format!("{} quadratic components, expected {t}", space.dim())));
    }
    // each component is gamma . x + h(y) with no x inside a quadratic term
    let comps = space.components(&gbar)?;
    let mut gamma = Matrix::zeros(f, t, t);
    let mut rest = Vec::with_capacity(t);
    for (k, comp) in comps.iter().enumerate() {
        let mut h = Poly::zero(f, n);
        for (mono, coeff) in comp.terms() {
            let x_degree: u32 = mono.support().filter(|&v| v < t).map(|v| mono.exp(v) as u32).sum();
            match (x_degree, mono.degree()) {
                (0, _) => h.add_term(mono.clone(), coeff),
                (1, 1) => {
                    let v = mono.support().next().expect("degree one");
                    gamma.set(k, v, coeff);
                }
                _ => return Err(Error::IsolationAmbiguous("x variables occur nonlinearly".into())),
            }
        }
        rest.push(h);
    }
    let gamma_inv = gamma
        .inverse()
        .ok_or_else(|| Error::IsolationAmbiguous("isolated components do not determine x".into()))?;
    // x = gamma^-1 (lambda . c - h(y))
    let comp_targets: Vec<Elem> = space.basis.iter().map(|l| f.dot(l, c)).collect();
    let mut subs: Vec<Poly> = Vec::with_capacity(n);
    for i in 0..t {
        let mut xi = Poly::zero(f, n);
        for k in 0..t {
            let g = gamma_inv.get(i, k);
            let mut term = Poly::constant(f, n, comp_targets[k]).sub(&rest[k])?;
            term = term.scale(g);
            xi = xi.add(&term)?;
        }
        subs.push(xi);
    }
    let x_of_y = subs.clone();
    subs.extend((t..n).map(|j| Poly::var(f, n, j)));
    let residual: Vec<Poly> = gbar
        .substitute(&subs)?
        .into_polys()
        .into_iter()
        .zip(c)
        .map(|(p, &ci)| p.sub(&Poly::constant(f, n, ci)))
        .collect::<Result<_>>()?;
    let y_vars: Vec<usize> = (t..n).collect();
    let fixed = linearizing_set(&residual, &y_vars, params.s())
        .ok_or_else(|| Error::IsolationAmbiguous("residual system is not oil-and-vinegar shaped".into()))?;
    let q = f.order() as u128;
    let outer = q.pow(fixed.len() as u32);
    if outer > budget {
        return Err(Error::BudgetExceeded { needed: outer, budget });
    }
    let free: Vec<usize> = y_vars.iter().copied().filter(|v| !fixed.contains(v)).collect();
    let mut spent = 0u128;
    for values in f.all_vectors(fixed.len()) {
        let mut assignment: Vec<Option<Elem>> = vec![None; n];
        for (&v, &val) in fixed.iter().zip(&values) {
            assignment[v] = Some(val);
        }
        let mut mat = Matrix::zeros(f, m, free.len());
        let mut rhs = Vec::with_capacity(m);
        for (r, p) in residual.iter().enumerate() {
            let (coeffs, constant) = p.partial_eval(&assignment)?.linear_parts().expect("linearizing set fixed");
            for (col, &v) in free.iter().enumerate() {
                mat.set(r, col, coeffs[v]);
            }
            rhs.push(f.neg(constant));
        }
        let LinearSolution::Solution { particular, basis } = mat.solve(&rhs)? else {
            continue;
        };
        spent += q.pow(basis.len() as u32);
        if spent > budget {
            return Err(Error::BudgetExceeded { needed: spent, budget });
        }
        for sol in enumerate_affine_span(f, &particular, &basis) {
            let mut point = vec![0 as Elem; n];
            for (&v, &val) in fixed.iter().zip(&values) {
                point[v] = val;
            }
            for (&v, &val) in free.iter().zip(&sol) {
                point[v] = val;
            }
            for i in 0..t {
                point[i] = x_of_y[i].eval(&point)?;
            }
            let z = a2.apply_inverse(&point)?;
            if pk.encrypt(&z)? == c {
                return Ok(Some(z));
            }
        }
    }
    Ok(None)
}
