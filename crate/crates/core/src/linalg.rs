//! Dense exact linear algebra and univariate polynomials over a field.

use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::cyclo::Cyclotomic;

/// Exact field scalar.
pub trait Field:
    Clone + PartialEq + Zero + One + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn inv(&self) -> Option<Self>;
}

impl Field for BigRational {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }
}

impl Field for Cyclotomic {
    fn inv(&self) -> Option<Self> {
        self.inverse().ok()
    }
}

/// Row-reduces a copy of `m` and returns its rank.
pub fn rank<F: Field>(m: &[Vec<F>]) -> usize {
    let mut a: Vec<Vec<F>> = m.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = a[r][c].inv().expect("nonzero pivot is invertible");
        for i in r + 1..rows {
            if a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone() * inv.clone();
            for k in c..cols {
                let t = f.clone() * a[r][k].clone();
                a[i][k] = a[i][k].clone() - t;
            }
        }
        r += 1;
    }
    r
}

pub fn mat_mul<F: Field>(a: &[Vec<F>], b: &[Vec<F>]) -> Vec<Vec<F>> {
    let n = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .filter(|(x, _)| !x.is_zero())
                        .fold(F::zero(), |acc, (x, brow)| acc + x.clone() * brow[j].clone())
                })
                .collect()
        })
        .collect()
}

/// Univariate polynomial, coefficients in ascending order without trailing
/// zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly<F> {
    coeffs: Vec<F>,
}

impl<F: Field> Poly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![F::one()] }
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// `Π (x − r)`.
    pub fn from_roots<'a, I: IntoIterator<Item = &'a F>>(roots: I) -> Self
    where
        F: 'a,
    {
        let mut p = Self::one();
        for r in roots {
            p = p.mul(&Poly::new(vec![-r.clone(), F::one()]));
        }
        p
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Poly { coeffs: Vec::new() };
        }
        let mut out = vec![F::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Poly<G> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    /// `r^deg · P(x / r)`.
    pub fn rescale(&self, r: &F) -> Option<Self> {
        let deg = self.degree()?;
        let rinv = r.inv()?;
        let mut out = Vec::with_capacity(self.coeffs.len());
        let mut pw = F::one();
        let mut rp = F::one();
        for _ in 0..deg {
            rp = rp * r.clone();
        }
        for c in &self.coeffs {
            out.push(c.clone() * pw.clone() * rp.clone());
            pw = pw * rinv.clone();
        }
        Some(Poly::new(out))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(a: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(a))
    }

    #[test]
    fn rank_of_rational_matrices() {
        let m = vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)], vec![q(0), q(1), q(1)]];
        assert_eq!(rank(&m), 2);
        assert_eq!(rank::<BigRational>(&[]), 0);
        assert_eq!(rank(&[vec![q(0), q(0)]]), 0);
    }

    #[test]
    fn rank_over_cyclotomics() {
        let s = &Cyclotomic::root_of_unity(1, 8) - &Cyclotomic::root_of_unity(3, 8);
        let one = Cyclotomic::one();
        // [[1, √2], [√2, 2]] is singular
        let m = vec![vec![one.clone(), s.clone()], vec![s.clone(), Cyclotomic::from_int(2)]];
        assert_eq!(rank(&m), 1);
        let m2 = vec![vec![one.clone(), s.clone()], vec![s, one]];
        assert_eq!(rank(&m2), 2);
    }

    #[test]
    fn polynomial_roots_and_rescaling() {
        let p = Poly::from_roots(&[q(2), q(3)]);
        assert_eq!(p.coeffs(), &[q(6), q(-5), q(1)]);
        // roots scale by r
        let r = p.rescale(&q(2)).unwrap();
        assert_eq!(r, Poly::from_roots(&[q(4), q(6)]));
    }
}
