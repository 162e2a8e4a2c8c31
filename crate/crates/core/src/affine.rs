use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::matrix::Matrix;

/// Rejections allowed before giving up on sampling an invertible matrix.
pub const MAX_REJECTIONS: usize = 1000;

/// `v -> L v + c` with `L` invertible. The inverse linear part is cached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineBijection {
    linear: Matrix,
    translation: Vec<Elem>,
    inverse: Matrix,
}

impl AffineBijection {
    pub fn new(linear: Matrix, translation: Vec<Elem>) -> Result<Self> {
        if linear.rows() != linear.cols() {
            return Err(Error::DimensionMismatch { expected: linear.rows(), got: linear.cols() });
        }
        if translation.len() != linear.rows() {
            return Err(Error::DimensionMismatch { expected: linear.rows(), got: translation.len() });
        }
        let inverse = linear
            .inverse()
            .ok_or_else(|| Error::ParamRange("linear part is singular".into()))?;
        Ok(Self { linear, translation, inverse })
    }

    pub fn identity(field: &Field, dim: usize) -> Self {
        let id = Matrix::identity(field, dim);
        Self { linear: id.clone(), translation: vec![0; dim], inverse: id }
    }

    /// Uniform invertible linear part by rejection, uniform translation.
    pub fn random<R: Rng + ?Sized>(field: &Field, dim: usize, rng: &mut R) -> Result<Self> {
        Self::random_with_stats(field, dim, rng).map(|(b, _)| b)
    }

    /// As [`random`](Self::random), also returning the number of rejected draws.
    pub fn random_with_stats<R: Rng + ?Sized>(
        field: &Field,
        dim: usize,
        rng: &mut R,
    ) -> Result<(Self, usize)> {
        if dim == 0 {
            return Err(Error::ParamRange("dimension must be at least 1".into()));
        }
        let (linear, inverse, rejected) = random_invertible(field, dim, rng)?;
        let translation = field.random_vec(dim, rng);
        Ok((Self { linear, translation, inverse }, rejected))
    }

    /// Linear part of block form `[[A, 0], [C, D]]` with a `t x (dim - t)`
    /// zero block in the top-right corner; `A` and `D` are uniform
    /// invertible, `C` uniform.
    pub fn random_block<R: Rng + ?Sized>(field: &Field, dim: usize, t: usize, rng: &mut R) -> Result<Self> {
        if t == 0 || t > dim {
            return Err(Error::ParamRange(format!("block size {t} not in 1..={dim}")));
        }
        let (top, _, _) = random_invertible(field, t, rng)?;
        let mut linear = Matrix::zeros(field, dim, dim);
        for r in 0..t {
            for c in 0..t {
                linear.set(r, c, top.get(r, c));
            }
        }
        if t < dim {
            let (bottom, _, _) = random_invertible(field, dim - t, rng)?;
            for r in t..dim {
                for c in 0..t {
                    linear.set(r, c, field.random(rng));
                }
                for c in t..dim {
                    linear.set(r, c, bottom.get(r - t, c - t));
                }
            }
        }
        let translation = field.random_vec(dim, rng);
        Self::new(linear, translation)
    }

    pub fn dim(&self) -> usize {
        self.translation.len()
    }

    pub fn field(&self) -> &Field {
        self.linear.field()
    }

    pub fn linear(&self) -> &Matrix {
        &self.linear
    }

    pub fn linear_inverse(&self) -> &Matrix {
        &self.inverse
    }

    pub fn translation(&self) -> &[Elem] {
        &self.translation
    }

    /// True when the top-right `t x (dim - t)` block is zero.
    pub fn has_zero_block(&self, t: usize) -> bool {
        (0..t).all(|r| (t..self.dim()).all(|c| self.linear.get(r, c) == 0))
    }

    pub fn apply(&self, v: &[Elem]) -> Result<Vec<Elem>> {
        let f = self.field();
        let mut out = self.linear.mul_vec(v)?;
        for (o, &c) in out.iter_mut().zip(&self.translation) {
            *o = f.add(*o, c);
        }
        Ok(out)
    }

    pub fn apply_inverse(&self, v: &[Elem]) -> Result<Vec<Elem>> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: v.len() });
        }
        let f = self.field();
        let shifted: Vec<Elem> = v.iter().zip(&self.translation).map(|(&a, &c)| f.sub(a, c)).collect();
        self.inverse.mul_vec(&shifted)
    }

    /// The inverse map `v -> L^-1 v - L^-1 c`.
    pub fn inverse(&self) -> AffineBijection {
        let f = self.field();
        let lc = self.inverse.mul_vec(&self.translation).expect("square");
        AffineBijection {
            linear: self.inverse.clone(),
            translation: lc.iter().map(|&v| f.neg(v)).collect(),
            inverse: self.linear.clone(),
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &AffineBijection) -> Result<AffineBijection> {
        let linear = self.linear.mul(&other.linear)?;
        let translation = self.apply(&other.translation)?;
        let inverse = other.inverse.mul(&self.inverse)?;
        Ok(AffineBijection { linear, translation, inverse })
    }
}

fn random_invertible<R: Rng + ?Sized>(field: &Field, dim: usize, rng: &mut R) -> Result<(Matrix, Matrix, usize)> {
    for rejected in 0..MAX_REJECTIONS {
        let m = Matrix::random(field, dim, dim, rng);
        if let Some(inv) = m.inverse() {
            return Ok((m, inv, rejected));
        }
    }
    Err(Error::RngExhausted(MAX_REJECTIONS))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn dimension_one_is_nonzero_scalar() {
        let f = Field::prime(5).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        for _ in 0..50 {
            let b = AffineBijection::random(&f, 1, &mut rng).unwrap();
            assert!((1..5).contains(&b.linear().get(0, 0)));
        }
        assert!(AffineBijection::random(&f, 0, &mut rng).is_err());
    }

    #[test]
    fn forward_backward_on_all_of_gf5_squared() {
        let f = Field::prime(5).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        let b = AffineBijection::random(&f, 2, &mut rng).unwrap();
        let mut images = std::collections::BTreeSet::new();
        for x in 0..5 {
            for y in 0..5 {
                let v = vec![x, y];
                let w = b.apply(&v).unwrap();
                assert_eq!(b.apply_inverse(&w).unwrap(), v);
                assert_eq!(b.inverse().apply(&w).unwrap(), v);
                images.insert(w);
            }
        }
        assert_eq!(images.len(), 25);
    }

    #[test]
    fn inverse_round_trips_random_vectors() {
        let mut rng = ChaCha20Rng::seed_from_u64(9);
        for f in [Field::prime(5).unwrap(), Field::binary(6).unwrap(), Field::binary(8).unwrap()] {
            for dim in [1, 3, 8] {
                let b = AffineBijection::random(&f, dim, &mut rng).unwrap();
                assert!(b.linear().mul(b.linear_inverse()).unwrap().is_identity());
                for _ in 0..100 {
                    let v = f.random_vec(dim, &mut rng);
                    assert_eq!(b.apply_inverse(&b.apply(&v).unwrap()).unwrap(), v);
                }
            }
        }
    }

    #[test]
    fn block_structure() {
        let f = Field::prime(5).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(4);
        for _ in 0..50 {
            let b = AffineBijection::random_block(&f, 2, 1, &mut rng).unwrap();
            assert_eq!(b.linear().get(0, 1), 0);
        }
        let g = Field::binary(6).unwrap();
        for (d, t) in [(8, 3), (5, 5), (6, 1)] {
            for _ in 0..20 {
                let b = AffineBijection::random_block(&g, d, t, &mut rng).unwrap();
                assert!(b.has_zero_block(t));
                let tl = b.linear().submatrix(0..t, 0..t);
                assert_ne!(tl.determinant().unwrap(), 0);
                if t < d {
                    let br = b.linear().submatrix(t..d, t..d);
                    assert_ne!(br.determinant().unwrap(), 0);
                }
            }
        }
        assert!(AffineBijection::random_block(&f, 3, 0, &mut rng).is_err());
        assert!(AffineBijection::random_block(&f, 3, 4, &mut rng).is_err());
    }

    #[test]
    fn composition() {
        let f = Field::binary(6).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        let a = AffineBijection::random(&f, 4, &mut rng).unwrap();
        let b = AffineBijection::random(&f, 4, &mut rng).unwrap();
        let ab = a.compose(&b).unwrap();
        let v = f.random_vec(4, &mut rng);
        assert_eq!(ab.apply(&v).unwrap(), a.apply(&b.apply(&v).unwrap()).unwrap());
        assert_eq!(ab.apply_inverse(&ab.apply(&v).unwrap()).unwrap(), v);
    }
}
