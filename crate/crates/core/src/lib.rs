pub mod affine;
pub mod attacks;
pub mod cli;
pub mod codec;
pub mod error;
pub mod field;
pub mod matrix;
pub mod poly;
pub mod scheme;
pub mod solvedeg;
pub mod toy;
pub mod twist;

pub use affine::AffineBijection;
pub use error::{Error, Result};
pub use field::{Elem, Field, FieldElement};
pub use matrix::{LinearSolution, Matrix};
pub use poly::{Monomial, Poly, PolySystem, Side};
pub use scheme::{keygen, Keypair, PestoParams, PublicKey, SecretKey, Signature};
pub use twist::{CentralMap, Shape};
