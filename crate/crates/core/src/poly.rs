//! Multivariate polynomials over GF(q) in reduced form.
//!
//! Every exponent is kept below `q`: since `x^q = x` as functions on GF(q),
//! products are folded back eagerly, so each function has exactly one
//! representation. Terms are stored in canonical order: ascending total
//! degree, then ascending exponent vector.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rand::Rng;

use crate::affine::AffineBijection;
use crate::error::{Error, Result};
use crate::field::{Elem, Field};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    // field order matters: derived Ord gives (degree, exponent vector)
    degree: u32,
    exps: Box<[u16]>,
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exps)
    }
}

/// Folds an exponent into `[0, q)` using `x^q = x`.
#[inline]
pub fn reduce_exponent(e: u32, q: u32) -> u32 {
    if e < q {
        e
    } else {
        (e - 1) % (q - 1) + 1
    }
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Self { degree: 0, exps: vec![0; nvars].into_boxed_slice() }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[i] = 1;
        Self { degree: 1, exps: exps.into_boxed_slice() }
    }

    /// Exponents are taken as given; use [`Monomial::reduced`] for
    /// arbitrary exponent vectors.
    pub fn new(exps: Vec<u16>) -> Self {
        let degree = exps.iter().map(|&e| e as u32).sum();
        Self { degree, exps: exps.into_boxed_slice() }
    }

    pub fn reduced(exps: &[u32], q: u32) -> Self {
        Self::new(exps.iter().map(|&e| reduce_exponent(e, q) as u16).collect())
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn exps(&self) -> &[u16] {
        &self.exps
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn exp(&self, i: usize) -> u16 {
        self.exps[i]
    }

    /// Indices of variables with positive exponent.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.exps.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, _)| i)
    }

    pub fn mul(&self, other: &Monomial, q: u32) -> Monomial {
        let mut degree = 0;
        let exps: Box<[u16]> = self
            .exps
            .iter()
            .zip(other.exps.iter())
            .map(|(&a, &b)| {
                let e = reduce_exponent(a as u32 + b as u32, q);
                degree += e;
                e as u16
            })
            .collect();
        Monomial { degree, exps }
    }

    /// `self / x_i`, if `x_i` divides `self`.
    pub fn div_var(&self, i: usize) -> Option<Monomial> {
        (self.exps[i] > 0).then(|| {
            let mut exps = self.exps.clone();
            exps[i] -= 1;
            Monomial { degree: self.degree - 1, exps }
        })
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    pub fn eval(&self, field: &Field, point: &[Elem]) -> Elem {
        self.exps
            .iter()
            .zip(point)
            .filter(|(&e, _)| e > 0)
            .fold(1, |acc, (&e, &v)| field.mul(acc, field.pow(v, e as u64)))
    }
}

/// All monomials in `nvars` variables with total degree `<= max_degree` and
/// every exponent `< q`, in canonical order.
pub fn monomials_up_to(nvars: usize, max_degree: u32, q: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for d in 0..=max_degree {
        let mut exps = vec![0u16; nvars];
        compositions(&mut exps, 0, d, q, &mut out);
    }
    out
}

fn compositions(exps: &mut Vec<u16>, pos: usize, remaining: u32, q: u32, out: &mut Vec<Monomial>) {
    if pos + 1 == exps.len() {
        if remaining < q {
            exps[pos] = remaining as u16;
            out.push(Monomial::new(exps.clone()));
            exps[pos] = 0;
        }
        return;
    }
    if exps.is_empty() {
        if remaining == 0 {
            out.push(Monomial::new(Vec::new()));
        }
        return;
    }
    for e in 0..=remaining.min(q - 1) {
        exps[pos] = e as u16;
        compositions(exps, pos + 1, remaining - e, q, out);
    }
    exps[pos] = 0;
}

/// Canonical monomial list with index lookup and parent links, used for
/// dense coefficient vectors and counted evaluation.
#[derive(Clone, Debug)]
pub struct MonomialIndex {
    nvars: usize,
    max_degree: u32,
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    /// For each monomial of degree >= 1: (index of monomial / x_v, v), with v
    /// the first variable in its support.
    parents: Vec<Option<(usize, usize)>>,
}

impl MonomialIndex {
    pub fn new(nvars: usize, max_degree: u32, q: u32) -> Self {
        let monomials = monomials_up_to(nvars, max_degree, q);
        let index: HashMap<Monomial, usize> =
            monomials.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        let parents = monomials
            .iter()
            .map(|m| {
                let v = m.support().next()?;
                let parent = m.div_var(v).expect("v in support");
                Some((index[&parent], v))
            })
            .collect();
        Self { nvars, max_degree, monomials, index, parents }
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn get(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn parent(&self, i: usize) -> Option<(usize, usize)> {
        self.parents[i]
    }

    /// Values of every monomial at `point`, plus the number of field
    /// multiplications spent (one per monomial of degree >= 2).
    pub fn values(&self, field: &Field, point: &[Elem]) -> (Vec<Elem>, u64) {
        let mut vals = vec![0 as Elem; self.monomials.len()];
        let mut mults = 0;
        for (i, m) in self.monomials.iter().enumerate() {
            vals[i] = match self.parents[i] {
                None => 1,
                Some((_, v)) if m.degree == 1 => point[v],
                Some((p, v)) => {
                    mults += 1;
                    field.mul(vals[p], point[v])
                }
            };
        }
        (vals, mults)
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: Field,
    nvars: usize,
    terms: BTreeMap<Monomial, Elem>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.nvars).map(|i| format!("z{i}")).collect();
        write!(f, "{}", self.render(&names))
    }
}

impl Poly {
    pub fn zero(field: &Field, nvars: usize) -> Self {
        Self { field: field.clone(), nvars, terms: BTreeMap::new() }
    }

    pub fn constant(field: &Field, nvars: usize, c: Elem) -> Self {
        let mut p = Self::zero(field, nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn var(field: &Field, nvars: usize, i: usize) -> Self {
        let mut p = Self::zero(field, nvars);
        p.add_term(Monomial::var(nvars, i), 1);
        p
    }

    /// Affine form `sum coeffs[i] * z_i + c`.
    pub fn affine(field: &Field, coeffs: &[Elem], c: Elem) -> Self {
        let n = coeffs.len();
        let mut p = Self::constant(field, n, c);
        for (i, &a) in coeffs.iter().enumerate() {
            p.add_term(Monomial::var(n, i), a);
        }
        p
    }

    pub fn from_terms<I>(field: &Field, nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, Elem)>,
    {
        let mut p = Self::zero(field, nvars);
        for (exps, c) in terms {
            if exps.len() != nvars {
                return Err(Error::DimensionMismatch { expected: nvars, got: exps.len() });
            }
            p.add_term(Monomial::reduced(&exps, field.order()), field.from_u64(c as u64));
        }
        Ok(p)
    }

    /// Uniformly random polynomial supported on the given monomials.
    pub fn random_on<R: Rng + ?Sized>(field: &Field, nvars: usize, support: &[Monomial], rng: &mut R) -> Self {
        let mut p = Self::zero(field, nvars);
        for m in support {
            p.add_term(m.clone(), field.random(rng));
        }
        p
    }

    /// Parses text such as `x1^2 + 2x1x2 + 3y3 + 4` over the given variable
    /// names (longest name wins on ambiguity). Coefficients are integers and
    /// reduced into the field; `-` is accepted as a separator.
    pub fn parse(field: &Field, names: &[&str], text: &str) -> Result<Self> {
        let n = names.len();
        let mut p = Self::zero(field, n);
        let cleaned: String = text.chars().filter(|c| !c.is_whitespace() && *c != '*' && *c != '_').collect();
        let mut terms: Vec<(i64, &str)> = Vec::new();
        let mut start = 0;
        let mut sign = 1i64;
        let bytes = cleaned.as_bytes();
        for i in 0..=bytes.len() {
            if i == bytes.len() || ((bytes[i] == b'+' || bytes[i] == b'-') && i > 0 && bytes[i - 1] != b'^') {
                let tok = &cleaned[start..i];
                if !tok.is_empty() {
                    terms.push((sign, tok));
                }
                if i < bytes.len() {
                    sign = if bytes[i] == b'-' { -1 } else { 1 };
                    start = i + 1;
                }
            } else if i == 0 && bytes[0] == b'-' {
                sign = -1;
                start = 1;
            }
        }
        let bad = |t: &str| Error::ParamSanity(format!("cannot parse term {t:?}"));
        let mut sorted_names: Vec<(usize, String)> =
            names.iter().map(|s| s.replace('_', "")).enumerate().collect();
        sorted_names.sort_by_key(|(_, s)| std::cmp::Reverse(s.len()));
        for (sign, tok) in terms {
            let digits = tok.chars().take_while(|c| c.is_ascii_digit()).count();
            let coeff: i64 = if digits == 0 { 1 } else { tok[..digits].parse().map_err(|_| bad(tok))? };
            let mut rest = &tok[digits..];
            let mut exps = vec![0u32; n];
            while !rest.is_empty() {
                let (idx, name) = sorted_names
                    .iter()
                    .find(|(_, s)| rest.starts_with(s.as_str()))
                    .ok_or_else(|| bad(tok))?;
                rest = &rest[name.len()..];
                let mut e = 1u32;
                if let Some(r) = rest.strip_prefix('^') {
                    let d = r.chars().take_while(|c| c.is_ascii_digit()).count();
                    e = r[..d].parse().map_err(|_| bad(tok))?;
                    rest = &r[d..];
                }
                exps[*idx] += e;
            }
            p.add_term(Monomial::reduced(&exps, field.order()), field.from_i64(sign * coeff));
        }
        Ok(p)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, Elem)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> Elem {
        self.terms.get(m).copied().unwrap_or(0)
    }

    pub fn constant_term(&self) -> Elem {
        self.coefficient(&Monomial::one(self.nvars))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.degree() == 0
    }

    /// Maximum total degree over stored terms; 0 for constants and for the
    /// zero polynomial (check [`is_zero`](Self::is_zero) to tell them apart).
    pub fn degree(&self) -> u32 {
        self.terms.keys().next_back().map_or(0, |m| m.degree)
    }

    /// Adds `c * m`; `m` must already be reduced.
    pub fn add_term(&mut self, m: Monomial, c: Elem) {
        debug_assert_eq!(m.nvars(), self.nvars);
        if c == 0 {
            return;
        }
        let f = &self.field;
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = f.add(*e.get(), c);
                if v == 0 {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    fn check_compatible(&self, other: &Poly) -> Result<()> {
        if self.field != other.field {
            return Err(Error::SpecMismatch);
        }
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, got: other.nvars });
        }
        Ok(())
    }

    pub fn add(&self, other: &Poly) -> Result<Poly> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        out.add_assign_scaled(other, 1);
        Ok(out)
    }

    pub fn sub(&self, other: &Poly) -> Result<Poly> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        out.add_assign_scaled(other, self.field.neg(1));
        Ok(out)
    }

    /// `self += c * other` (same ambient assumed).
    pub fn add_assign_scaled(&mut self, other: &Poly, c: Elem) {
        if c == 0 {
            return;
        }
        for (m, &v) in &other.terms {
            let cv = self.field.mul(c, v);
            self.add_term(m.clone(), cv);
        }
    }

    pub fn scale(&self, c: Elem) -> Poly {
        if c == 0 {
            return Poly::zero(&self.field, self.nvars);
        }
        let f = &self.field;
        Poly {
            field: f.clone(),
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, &v)| (m.clone(), f.mul(c, v))).collect(),
        }
    }

    pub fn neg(&self) -> Poly {
        self.scale(self.field.neg(1))
    }

    /// Product with field-equation reduction.
    pub fn mul(&self, other: &Poly) -> Result<Poly> {
        self.check_compatible(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Poly) -> Poly {
        let f = &self.field;
        let q = f.order();
        let mut acc: HashMap<Monomial, Elem> = HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, &ca) in &self.terms {
            for (mb, &cb) in &other.terms {
                let m = ma.mul(mb, q);
                let c = f.mul(ca, cb);
                let e = acc.entry(m).or_insert(0);
                *e = f.add(*e, c);
            }
        }
        Poly {
            field: f.clone(),
            nvars: self.nvars,
            terms: acc.into_iter().filter(|(_, c)| *c != 0).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut r = Poly::constant(&self.field, self.nvars, 1);
        for _ in 0..e {
            r = r.mul_unchecked(self);
        }
        r
    }

    pub fn eval(&self, point: &[Elem]) -> Result<Elem> {
        if point.len() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, got: point.len() });
        }
        let f = &self.field;
        Ok(self.terms.iter().fold(0, |acc, (m, &c)| f.add(acc, f.mul(c, m.eval(f, point)))))
    }

    /// Replaces variable `i` by `subs[i]`; the result lives in the ambient
    /// space of `subs`.
    pub fn substitute(&self, subs: &[Poly]) -> Result<Poly> {
        let mut cache = SubstitutionCache::new(subs)?;
        if subs.len() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, got: subs.len() });
        }
        cache.apply(self)
    }

    /// `z -> f(z + a)`.
    pub fn translate(&self, a: &[Elem]) -> Result<Poly> {
        if a.len() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, got: a.len() });
        }
        let subs: Vec<Poly> = (0..self.nvars)
            .map(|i| {
                let mut p = Poly::var(&self.field, self.nvars, i);
                p.add_term(Monomial::one(self.nvars), a[i]);
                p
            })
            .collect();
        self.substitute(&subs)
    }

    /// Fixes the variables with `Some(value)`; they keep their slot in the
    /// ambient space but no longer occur.
    pub fn partial_eval(&self, assignment: &[Option<Elem>]) -> Result<Poly> {
        if assignment.len() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, got: assignment.len() });
        }
        let f = &self.field;
        let mut out = Poly::zero(f, self.nvars);
        for (m, &c) in &self.terms {
            let mut coeff = c;
            let mut exps = m.exps.to_vec();
            for (i, a) in assignment.iter().enumerate() {
                if let Some(v) = a {
                    if exps[i] > 0 {
                        coeff = f.mul(coeff, f.pow(*v, exps[i] as u64));
                        exps[i] = 0;
                    }
                }
            }
            out.add_term(Monomial::new(exps), coeff);
        }
        Ok(out)
    }

    /// Re-embeds into `new_nvars` variables, sending variable `i` to
    /// `var_map[i]`.
    pub fn embed(&self, new_nvars: usize, var_map: &[usize]) -> Poly {
        let mut out = Poly::zero(&self.field, new_nvars);
        for (m, &c) in &self.terms {
            let mut exps = vec![0u16; new_nvars];
            for (i, &e) in m.exps.iter().enumerate() {
                exps[var_map[i]] += e;
            }
            out.add_term(Monomial::new(exps), c);
        }
        out
    }

    /// Sum of the terms of total degree exactly `d`.
    pub fn homogeneous_part(&self, d: u32) -> Poly {
        Poly {
            field: self.field.clone(),
            nvars: self.nvars,
            terms: self.terms.iter().filter(|(m, _)| m.degree == d).map(|(m, &c)| (m.clone(), c)).collect(),
        }
    }

    /// Variables occurring in some term of degree >= 2.
    pub fn nonlinear_variables(&self) -> Vec<usize> {
        let mut seen = vec![false; self.nvars];
        for m in self.terms.keys().filter(|m| m.degree >= 2) {
            for v in m.support() {
                seen[v] = true;
            }
        }
        (0..self.nvars).filter(|&i| seen[i]).collect()
    }

    /// Coefficients of `z_0..z_{n-1}` and the constant, if `deg <= 1`.
    pub fn linear_parts(&self) -> Option<(Vec<Elem>, Elem)> {
        if self.degree() > 1 {
            return None;
        }
        let coeffs = (0..self.nvars).map(|i| self.coefficient(&Monomial::var(self.nvars, i))).collect();
        Some((coeffs, self.constant_term()))
    }

    /// Renders with the given variable names, terms in descending canonical order.
    pub fn render(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (m, &c) in self.terms.iter().rev() {
            let mut s = String::new();
            if c != 1 || m.degree == 0 {
                s.push_str(&c.to_string());
            }
            for (i, &e) in m.exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !s.is_empty() {
                    s.push('*');
                }
                s.push_str(&names[i]);
                if e > 1 {
                    s.push_str(&format!("^{e}"));
                }
            }
            parts.push(s);
        }
        parts.join(" + ")
    }
}

/// Shares powers and monomial images across many substitutions into the
/// same replacement tuple.
pub struct SubstitutionCache<'a> {
    subs: &'a [Poly],
    field: Field,
    out_nvars: usize,
    images: HashMap<Monomial, Poly>,
}

impl<'a> SubstitutionCache<'a> {
    pub fn new(subs: &'a [Poly]) -> Result<Self> {
        let first = subs.first().ok_or(Error::DimensionMismatch { expected: 1, got: 0 })?;
        let out_nvars = first.nvars;
        for s in subs {
            first.check_compatible(s)?;
        }
        Ok(Self { subs, field: first.field.clone(), out_nvars, images: HashMap::new() })
    }

    fn image(&mut self, m: &Monomial) -> Poly {
        if let Some(p) = self.images.get(m) {
            return p.clone();
        }
        let img = match m.support().next() {
            None => Poly::constant(&self.field, self.out_nvars, 1),
            Some(v) => {
                let parent = m.div_var(v).expect("v in support");
                let pimg = self.image(&parent);
                pimg.mul_unchecked(&self.subs[v])
            }
        };
        self.images.insert(m.clone(), img.clone());
        img
    }

    pub fn apply(&mut self, p: &Poly) -> Result<Poly> {
        if p.nvars != self.subs.len() {
            return Err(Error::DimensionMismatch { expected: self.subs.len(), got: p.nvars });
        }
        if p.field != self.field {
            return Err(Error::SpecMismatch);
        }
        let mut out = Poly::zero(&self.field, self.out_nvars);
        for (m, &c) in &p.terms {
            let img = self.image(m);
            out.add_assign_scaled(&img, c);
        }
        Ok(out)
    }
}

/// Which side of a system an affine map is composed on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `sys ∘ B`
    Input,
    /// `B ∘ sys`
    Output,
}

/// Ordered list of polynomials over a shared set of variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolySystem {
    field: Field,
    nvars: usize,
    polys: Vec<Poly>,
}

impl PolySystem {
    pub fn new(field: &Field, nvars: usize, polys: Vec<Poly>) -> Result<Self> {
        for p in &polys {
            if p.nvars != nvars {
                return Err(Error::DimensionMismatch { expected: nvars, got: p.nvars });
            }
            if p.field != *field {
                return Err(Error::SpecMismatch);
            }
        }
        Ok(Self { field: field.clone(), nvars, polys })
    }

    /// The identity map on `n` variables.
    pub fn identity(field: &Field, n: usize) -> Self {
        Self { field: field.clone(), nvars: n, polys: (0..n).map(|i| Poly::var(field, n, i)).collect() }
    }

    pub fn parse(field: &Field, names: &[&str], lines: &[&str]) -> Result<Self> {
        let polys = lines.iter().map(|l| Poly::parse(field, names, l)).collect::<Result<Vec<_>>>()?;
        Self::new(field, names.len(), polys)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn polys(&self) -> &[Poly] {
        &self.polys
    }

    pub fn poly(&self, i: usize) -> &Poly {
        &self.polys[i]
    }

    pub fn into_polys(self) -> Vec<Poly> {
        self.polys
    }

    pub fn degree(&self) -> u32 {
        self.polys.iter().map(Poly::degree).max().unwrap_or(0)
    }

    pub fn eval(&self, point: &[Elem]) -> Result<Vec<Elem>> {
        self.polys.iter().map(|p| p.eval(point)).collect()
    }

    /// `sum lambda_i * f_i`.
    pub fn component(&self, lambda: &[Elem]) -> Result<Poly> {
        if lambda.len() != self.polys.len() {
            return Err(Error::DimensionMismatch { expected: self.polys.len(), got: lambda.len() });
        }
        let mut out = Poly::zero(&self.field, self.nvars);
        for (&l, p) in lambda.iter().zip(&self.polys) {
            out.add_assign_scaled(p, l);
        }
        Ok(out)
    }

    pub fn substitute(&self, subs: &[Poly]) -> Result<PolySystem> {
        if subs.len() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, got: subs.len() });
        }
        let mut cache = SubstitutionCache::new(subs)?;
        let polys = self.polys.iter().map(|p| cache.apply(p)).collect::<Result<Vec<_>>>()?;
        PolySystem::new(&self.field, subs[0].nvars, polys)
    }

    pub fn compose_affine(&self, b: &AffineBijection, side: Side) -> Result<PolySystem> {
        if b.field() != &self.field {
            return Err(Error::SpecMismatch);
        }
        match side {
            Side::Input => {
                if b.dim() != self.nvars {
                    return Err(Error::DimensionMismatch { expected: self.nvars, got: b.dim() });
                }
                let subs: Vec<Poly> = (0..self.nvars)
                    .map(|i| Poly::affine(&self.field, b.linear().row(i), b.translation()[i]))
                    .collect();
                self.substitute(&subs)
            }
            Side::Output => {
                if b.dim() != self.polys.len() {
                    return Err(Error::DimensionMismatch { expected: self.polys.len(), got: b.dim() });
                }
                let polys = (0..b.dim())
                    .map(|i| {
                        let mut p = self.component(b.linear().row(i))?;
                        p.add_term(Monomial::one(self.nvars), b.translation()[i]);
                        Ok(p)
                    })
                    .collect::<Result<Vec<_>>>()?;
                PolySystem::new(&self.field, self.nvars, polys)
            }
        }
    }

    /// Appends the polynomials of `other` (same variables).
    pub fn concat(&self, other: &PolySystem) -> Result<PolySystem> {
        let mut polys = self.polys.clone();
        polys.extend(other.polys.iter().cloned());
        PolySystem::new(&self.field, self.nvars, polys)
    }
}
