//! Dense vectors of fixed dimension.
//!
//! The ambient space and its dual are identified, so the same type carries
//! primal points `x` and functionals `x*`. Hot loops work on plain slices via
//! the free functions at the bottom of this module.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::ops::{Add, Index, Mul, Neg, Sub};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vector {
    coords: Vec<f64>,
}

impl Vector {
    /// Builds a vector, rejecting NaN and infinite entries and `p < 2`.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::Dimension { expected: 2, got: coords.len() });
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { coords })
    }

    /// Unchecked constructor for internal arithmetic on already valid data.
    pub(crate) fn raw(coords: Vec<f64>) -> Self {
        Self { coords }
    }

    pub fn from_slice(c: &[f64]) -> Result<Self> {
        Self::new(c.to_vec())
    }

    pub fn zeros(p: usize) -> Self {
        Self::raw(vec![0.0; p])
    }

    pub fn ones(p: usize) -> Self {
        Self::raw(vec![1.0; p])
    }

    pub fn basis(p: usize, i: usize) -> Self {
        let mut c = vec![0.0; p];
        c[i] = 1.0;
        Self::raw(c)
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.coords
    }

    pub fn dot(&self, other: &Vector) -> f64 {
        dot(&self.coords, &other.coords)
    }

    pub fn norm(&self) -> f64 {
        norm(&self.coords)
    }

    pub fn dist(&self, other: &Vector) -> f64 {
        dist(&self.coords, &other.coords)
    }

    pub fn scale(&self, t: f64) -> Vector {
        Vector::raw(self.coords.iter().map(|c| c * t).collect())
    }

    pub fn check_dim(&self, p: usize) -> Result<()> {
        if self.dim() == p {
            Ok(())
        } else {
            Err(Error::Dimension { expected: p, got: self.dim() })
        }
    }

    /// Parses `"1,-2.5,3"`.
    pub fn parse(s: &str) -> Result<Self> {
        let coords = s
            .split(',')
            .map(|t| t.trim().parse::<f64>().map_err(|e| Error::Schema(format!("bad coordinate `{t}`: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(coords)
    }
}

impl Index<usize> for Vector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.coords[i]
    }
}

impl Add for &Vector {
    type Output = Vector;
    fn add(self, rhs: &Vector) -> Vector {
        Vector::raw(add(&self.coords, &rhs.coords))
    }
}

impl Sub for &Vector {
    type Output = Vector;
    fn sub(self, rhs: &Vector) -> Vector {
        Vector::raw(sub(&self.coords, &rhs.coords))
    }
}

impl Mul<f64> for &Vector {
    type Output = Vector;
    fn mul(self, t: f64) -> Vector {
        self.scale(t)
    }
}

impl Neg for &Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        self.scale(-1.0)
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(a: &[f64], t: f64) -> Vec<f64> {
    a.iter().map(|x| x * t).collect()
}

/// `λa + (1-λ)b`.
pub fn lerp(a: &[f64], b: &[f64], lambda: f64) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| lambda * x + (1.0 - lambda) * y).collect()
}

pub fn normalize(a: &[f64]) -> Vec<f64> {
    let n = norm(a);
    if n == 0.0 {
        a.to_vec()
    } else {
        scale(a, 1.0 / n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_input() {
        assert!(Vector::new(vec![1.0]).is_err());
        assert!(Vector::new(vec![1.0, f64::NAN]).is_err());
        assert!(Vector::new(vec![1.0, f64::INFINITY]).is_err());
    }

    #[test]
    fn arithmetic() {
        let a = Vector::new(vec![1.0, 2.0]).unwrap();
        let b = Vector::new(vec![-1.0, -1.0]).unwrap();
        assert_eq!(a.dot(&b), -3.0);
        assert_eq!((&a + &b).as_slice(), &[0.0, 1.0]);
        assert_eq!((&a - &b).as_slice(), &[2.0, 3.0]);
        assert_eq!(Vector::parse("1, 2").unwrap(), a);
        assert_eq!(lerp(&[0.0, 0.0], &[2.0, 4.0], 0.5), vec![1.0, 2.0]);
    }
}
