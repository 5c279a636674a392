//! Multivariate cyclic lattices: tensors over ℤ[x₁..xₙ]/⟨x_i^{r_i} − 1⟩ and
//! the axis-wise cyclic shifts.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::groebner::Ideal;
use crate::lattice::IntegerLattice;
use crate::poly::{Monomial, Polynomial};
use crate::{ErrorKind, HasKind};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CyclicError {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("axis {axis} out of range for {n} axes")]
    Axis { axis: usize, n: usize },
}

impl HasKind for CyclicError {
    fn kind(&self) -> ErrorKind {
        ErrorKind::Domain
    }
}

fn check_shape(shape: &[usize]) -> Result<(), CyclicError> {
    if shape.is_empty() || shape.contains(&0) {
        return Err(CyclicError::Shape(format!("invalid shape {shape:?}")));
    }
    Ok(())
}

/// `⟨x_i^{r_i} − 1⟩`
pub fn cyclic_ideal(r: &[usize]) -> Result<Ideal, CyclicError> {
    check_shape(r)?;
    let n = r.len();
    let gens = r
        .iter()
        .enumerate()
        .map(|(i, &ri)| {
            let mut g = Polynomial::term(Monomial::pure_power(n, i, ri as u32), 1);
            g.add_term(Monomial::one(n), -BigInt::one());
            g
        })
        .collect();
    Ok(Ideal::new(gens).expect("same ring"))
}

/// `⟨1 + x_i + … + x_i^{r_i − 1}⟩`, the ideal whose variety is the product
/// of the nontrivial `r_i`-th roots of unity.
pub fn aprime_ideal(r: &[usize]) -> Result<Ideal, CyclicError> {
    check_shape(r)?;
    if let Some(&bad) = r.iter().find(|&&ri| ri < 2) {
        return Err(CyclicError::Shape(format!("every r_i must be at least 2, got {bad}")));
    }
    let n = r.len();
    let gens = r
        .iter()
        .enumerate()
        .map(|(i, &ri)| {
            let mut g = Polynomial::zero(n);
            for k in 0..ri {
                g.add_term(Monomial::pure_power(n, i, k as u32), BigInt::one());
            }
            g
        })
        .collect();
    Ok(Ideal::new(gens).expect("same ring"))
}

/// Coefficient tensor of an element of ℤ[x₁..xₙ]/⟨x_i^{r_i} − 1⟩, stored
/// row-major with the last axis fastest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tensor {
    shape: Vec<usize>,
    data: Vec<BigInt>,
}

impl Tensor {
    pub fn new(shape: Vec<usize>, data: Vec<BigInt>) -> Result<Self, CyclicError> {
        check_shape(&shape)?;
        let len: usize = shape.iter().product();
        if data.len() != len {
            return Err(CyclicError::Shape(format!(
                "{} entries for shape {shape:?} ({len} expected)",
                data.len()
            )));
        }
        Ok(Tensor { shape, data })
    }

    pub fn zeros(shape: Vec<usize>) -> Result<Self, CyclicError> {
        let len = shape.iter().product();
        Self::new(shape, vec![BigInt::zero(); len])
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn data(&self) -> &[BigInt] {
        &self.data
    }

    pub fn into_data(self) -> Vec<BigInt> {
        self.data
    }

    fn strides(&self) -> Vec<usize> {
        let mut s = vec![1; self.shape.len()];
        for i in (0..self.shape.len().saturating_sub(1)).rev() {
            s[i] = s[i + 1] * self.shape[i + 1];
        }
        s
    }

    pub fn get(&self, idx: &[usize]) -> &BigInt {
        let off: usize = idx.iter().zip(self.strides()).map(|(i, s)| i * s).sum();
        &self.data[off]
    }

    pub fn add(&self, other: &Tensor) -> Tensor {
        assert_eq!(self.shape, other.shape);
        Tensor {
            shape: self.shape.clone(),
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Tensor {
        Tensor {
            shape: self.shape.clone(),
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }
}

/// Tensor of a reduced element; fails if an exponent reaches its `r_i`.
pub fn tensor_of(f: &Polynomial, shape: &[usize]) -> Result<Tensor, CyclicError> {
    check_shape(shape)?;
    if f.nvars() != shape.len() {
        return Err(CyclicError::Shape(format!(
            "polynomial in {} variables for a shape with {} axes",
            f.nvars(),
            shape.len()
        )));
    }
    let mut t = Tensor::zeros(shape.to_vec())?;
    let strides = t.strides();
    for (m, c) in f.terms() {
        let mut off = 0;
        for (i, (&e, &r)) in m.exponents().iter().zip(shape).enumerate() {
            if e as usize >= r {
                return Err(CyclicError::Shape(format!(
                    "exponent {e} of variable {} not below {r}",
                    i + 1
                )));
            }
            off += e as usize * strides[i];
        }
        t.data[off] = c.clone();
    }
    Ok(t)
}

pub fn element_of(t: &Tensor) -> Polynomial {
    let n = t.shape.len();
    let strides = t.strides();
    let mut p = Polynomial::zero(n);
    for (off, c) in t.data.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let e: Vec<u32> = (0..n).map(|i| ((off / strides[i]) % t.shape[i]) as u32).collect();
        p.add_term(Monomial::new(e), c.clone());
    }
    p
}

/// Cyclic shift along `axis` (zero-based): slice `j` moves to `j + 1 mod r`.
/// This is multiplication by `x_{axis+1}`.
pub fn sigma(t: &Tensor, axis: usize) -> Result<Tensor, CyclicError> {
    let n = t.shape.len();
    if axis >= n {
        return Err(CyclicError::Axis { axis, n });
    }
    let strides = t.strides();
    let r = t.shape[axis];
    let mut data = vec![BigInt::zero(); t.data.len()];
    for (off, c) in t.data.iter().enumerate() {
        let j = (off / strides[axis]) % r;
        let to = off - j * strides[axis] + ((j + 1) % r) * strides[axis];
        data[to] = c.clone();
    }
    Ok(Tensor {
        shape: t.shape.clone(),
        data,
    })
}

/// Whether every shift of every Hermite row stays in the lattice.
pub fn is_multivariate_cyclic(lattice: &IntegerLattice, shape: &[usize]) -> Result<bool, CyclicError> {
    check_shape(shape)?;
    let len: usize = shape.iter().product();
    if lattice.dim() != len {
        return Err(CyclicError::Shape(format!(
            "lattice in dimension {} for shape {shape:?} of size {len}",
            lattice.dim()
        )));
    }
    for row in lattice.hnf() {
        let t = Tensor::new(shape.to_vec(), row.clone())?;
        for axis in 0..shape.len() {
            if !lattice.contains(sigma(&t, axis)?.data()) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
