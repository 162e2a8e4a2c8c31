//! The t-twist: central maps `F(x, y) = (x + q(y), U(x, y))`, the twisted
//! map `G(x, y) = (x - q(y), U(x - q(y), y))`, the graph permutation `M_t`,
//! and brute-force graph oracles for small parameters.
//!
//! Variable order throughout is `x_1..x_t, y_1..y_{n-t}`. The oil-and-vinegar
//! split of `U` takes `x_1..x_t, y_1..y_s` as vinegar and the remaining
//! `y_{s+1}..y_{n-t}` as oil.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::matrix::Matrix;
use crate::poly::{monomials_up_to, Monomial, Poly, PolySystem};

/// Largest `q^n` the graph oracles will enumerate.
pub const GRAPH_BUDGET: u64 = 1 << 20;

/// Dimensions of a central map: `n` inputs, `m` outputs, twist size `t`,
/// `s` vinegar variables among the `y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Shape {
    pub n: usize,
    pub m: usize,
    pub t: usize,
    pub s: usize,
}

impl Shape {
    pub fn new(n: usize, m: usize, t: usize, s: usize) -> Result<Self> {
        if t > n.min(m) {
            return Err(Error::ParamRange(format!("t = {t} exceeds min(n, m) = {}", n.min(m))));
        }
        if s > n - t {
            return Err(Error::ParamRange(format!("s = {s} exceeds n - t = {}", n - t)));
        }
        Ok(Self { n, m, t, s })
    }

    /// Number of vinegar variables, `t + s`.
    pub fn vinegar(&self) -> usize {
        self.t + self.s
    }

    /// Number of oil variables, `n - t - s`.
    pub fn oil(&self) -> usize {
        self.n - self.t - self.s
    }

    pub fn is_oil(&self, var: usize) -> bool {
        var >= self.vinegar()
    }
}

/// Monomials of degree <= 2 in `n` variables containing at most one oil
/// variable, in canonical order.
pub fn ov_support(shape: Shape, q: u32) -> Vec<Monomial> {
    monomials_up_to(shape.n, 2, q)
        .into_iter()
        .filter(|m| m.support().filter(|&v| shape.is_oil(v)).map(|v| m.exp(v) as u32).sum::<u32>() <= 1)
        .collect()
}

/// Secret central map: `qmap` (t quadratics in the n - t variables `y`) and
/// `u` (m - t oil-and-vinegar quadratics in all n variables).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralMap {
    shape: Shape,
    qmap: PolySystem,
    u: PolySystem,
}

impl CentralMap {
    pub fn new(shape: Shape, qmap: PolySystem, u: PolySystem) -> Result<Self> {
        let (n, m, t) = (shape.n, shape.m, shape.t);
        if qmap.len() != t || qmap.nvars() != n - t {
            return Err(Error::DimensionMismatch { expected: t, got: qmap.len() });
        }
        if u.len() != m - t || u.nvars() != n {
            return Err(Error::DimensionMismatch { expected: m - t, got: u.len() });
        }
        if qmap.field() != u.field() {
            return Err(Error::SpecMismatch);
        }
        if qmap.degree() > 2 || u.degree() > 2 {
            return Err(Error::DegreeTooHigh(qmap.degree().max(u.degree())));
        }
        for p in u.polys() {
            for (mono, _) in p.terms() {
                let oil_degree: u32 =
                    mono.support().filter(|&v| shape.is_oil(v)).map(|v| mono.exp(v) as u32).sum();
                if oil_degree > 1 {
                    return Err(Error::ParamSanity(format!("U has an oil-by-oil term {mono:?}")));
                }
            }
        }
        Ok(Self { shape, qmap, u })
    }

    /// Uniform `q` over all quadratics and uniform `U` over the
    /// oil-and-vinegar shape.
    pub fn random<R: Rng + ?Sized>(field: &Field, shape: Shape, rng: &mut R) -> Result<Self> {
        let q = field.order();
        let y_support = monomials_up_to(shape.n - shape.t, 2, q);
        let qmap = (0..shape.t).map(|_| Poly::random_on(field, shape.n - shape.t, &y_support, rng)).collect();
        let ov = ov_support(shape, q);
        let u = (0..shape.m - shape.t).map(|_| Poly::random_on(field, shape.n, &ov, rng)).collect();
        Self::new(
            shape,
            PolySystem::new(field, shape.n - shape.t, qmap)?,
            PolySystem::new(field, shape.n, u)?,
        )
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn field(&self) -> &Field {
        self.u.field()
    }

    pub fn qmap(&self) -> &PolySystem {
        &self.qmap
    }

    pub fn u(&self) -> &PolySystem {
        &self.u
    }

    /// `q` re-embedded as polynomials in all n variables.
    pub fn qmap_embedded(&self) -> Vec<Poly> {
        let Shape { n, t, .. } = self.shape;
        let var_map: Vec<usize> = (t..n).collect();
        self.qmap.polys().iter().map(|p| p.embed(n, &var_map)).collect()
    }

    /// Evaluates `q` at `y` (length n - t).
    pub fn eval_qmap(&self, y: &[Elem]) -> Result<Vec<Elem>> {
        self.qmap.eval(y)
    }

    /// The untwisted map `F(x, y) = (x + q(y), U(x, y))`.
    pub fn central_system(&self) -> PolySystem {
        let f = self.field();
        let n = self.shape.n;
        let mut polys: Vec<Poly> = self
            .qmap_embedded()
            .into_iter()
            .enumerate()
            .map(|(i, qi)| Poly::var(f, n, i).add(&qi).expect("same ambient"))
            .collect();
        polys.extend(self.u.polys().iter().cloned());
        PolySystem::new(f, n, polys).expect("consistent")
    }

    /// The twisted map `G(x, y) = (x - q(y), U(x - q(y), y))`.
    pub fn build_twisted(&self) -> PolySystem {
        let f = self.field();
        let Shape { n, t, .. } = self.shape;
        let qe = self.qmap_embedded();
        let mut subs: Vec<Poly> = Vec::with_capacity(n);
        for (i, qi) in qe.iter().enumerate() {
            subs.push(Poly::var(f, n, i).sub(qi).expect("same ambient"));
        }
        for j in t..n {
            subs.push(Poly::var(f, n, j));
        }
        let twisted_u = self.u.substitute(&subs).expect("dimensions match");
        let mut polys: Vec<Poly> = subs[..t].to_vec();
        polys.extend(twisted_u.into_polys());
        PolySystem::new(f, n, polys).expect("consistent")
    }
}

/// The `(n + m) x (n + m)` 0/1 matrix swapping the first t input
/// coordinates with the first t output coordinates.
pub fn mt_matrix(field: &Field, t: usize, n: usize, m: usize) -> Result<Matrix> {
    if t > n.min(m) {
        return Err(Error::ParamRange(format!("t = {t} exceeds min(n, m) = {}", n.min(m))));
    }
    let mut mt = Matrix::zeros(field, n + m, n + m);
    for i in 0..t {
        mt.set(i, n + i, 1);
        mt.set(n + i, i, 1);
    }
    for i in t..n {
        mt.set(i, i, 1);
    }
    for i in n + t..n + m {
        mt.set(i, i, 1);
    }
    Ok(mt)
}

/// Graph `{ (v, F(v)) }`, sorted by input.
pub fn graph_of(sys: &PolySystem) -> Result<Vec<(Vec<Elem>, Vec<Elem>)>> {
    let f = sys.field();
    let size = (f.order() as u64).checked_pow(sys.nvars() as u32).unwrap_or(u64::MAX);
    if size > GRAPH_BUDGET {
        return Err(Error::BudgetExceeded { needed: size as u128, budget: GRAPH_BUDGET as u128 });
    }
    f.all_vectors(sys.nvars())
        .map(|v| {
            let out = sys.eval(&v)?;
            Ok((v, out))
        })
        .collect()
}

/// Outcome of [`ccz_check_via_twist`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistCheck {
    pub holds: bool,
    pub diagnostic: Option<String>,
}

/// Checks `graph(G) = M_t(graph(F))` by enumerating both graphs.
pub fn ccz_check_via_twist(f_sys: &PolySystem, g_sys: &PolySystem, t: usize) -> Result<TwistCheck> {
    if f_sys.field() != g_sys.field() {
        return Err(Error::SpecMismatch);
    }
    let (n, m) = (f_sys.nvars(), f_sys.len());
    if g_sys.nvars() != n || g_sys.len() != m {
        return Err(Error::DimensionMismatch { expected: n, got: g_sys.nvars() });
    }
    let mt = mt_matrix(f_sys.field(), t, n, m)?;
    let mut image: BTreeMap<Vec<Elem>, Vec<Elem>> = BTreeMap::new();
    for (v, out) in graph_of(f_sys)? {
        let mut point = v;
        point.extend(out);
        let mut moved = mt.mul_vec(&point)?;
        let output = moved.split_off(n);
        if let Some(prev) = image.insert(moved.clone(), output.clone()) {
            return Ok(TwistCheck {
                holds: false,
                diagnostic: Some(format!(
                    "M_t image is not a graph: input {moved:?} maps to both {prev:?} and {output:?}"
                )),
            });
        }
    }
    let target: BTreeSet<(Vec<Elem>, Vec<Elem>)> = graph_of(g_sys)?.into_iter().collect();
    let moved: BTreeSet<(Vec<Elem>, Vec<Elem>)> = image.into_iter().collect();
    if moved == target {
        Ok(TwistCheck { holds: true, diagnostic: None })
    } else {
        let (v, w) = moved.difference(&target).next().expect("equal sizes, sets differ");
        Ok(TwistCheck {
            holds: false,
            diagnostic: Some(format!("point ({v:?}, {w:?}) of M_t(graph F) is not on graph G")),
        })
    }
}
