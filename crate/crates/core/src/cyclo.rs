//! Exact arithmetic in cyclotomic fields Q[ζ_N].
//!
//! A [`Cyclotomic`] stores integer numerators over one positive common
//! denominator, in the power basis `ζ_N^k, 0 ≤ k < φ(N)` modulo the N-th
//! cyclotomic polynomial. Every value is kept at its minimal conductor, so
//! structural equality is field equality and values can be hashed.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::numeric::{cis, half_tol, invert_complex, limit_denominator, BigFloat, Cx, Real};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CycloError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("Galois index {ell} is not coprime to conductor {n}")]
    NotCoprime { ell: i64, n: u32 },
    #[error("conductor {0} exceeds the supported maximum {MAX_CONDUCTOR}")]
    ConductorTooLarge(u64),
    #[error("no cyclotomic candidate at conductor {n} with denominators <= {bound}")]
    NoCandidate { n: u32, bound: String },
    #[error("cyclotomic literal: {0}")]
    Parse(String),
}

/// Largest supported conductor.
pub const MAX_CONDUCTOR: u32 = 4096;

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm_u64(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

/// Euler's totient.
pub fn totient(n: u32) -> usize {
    (1..=n).filter(|&k| gcd_u64(k as u64, n as u64) == 1).count()
}

/// Q[ζ_N] = Q[ζ_{N/2}] when N ≡ 2 mod 4; conductors 1 and 2 both denote Q.
pub fn canonical_conductor(n: u32) -> u32 {
    if n % 4 == 2 {
        n / 2
    } else {
        n
    }
}

pub fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Units modulo `n` in increasing order (`[1]` for n = 1).
pub fn units(n: u32) -> Vec<u32> {
    if n == 1 {
        return vec![1];
    }
    (1..n).filter(|&k| gcd_u64(k as u64, n as u64) == 1).collect()
}

fn mobius(n: u32) -> i32 {
    let mut m = n;
    let mut res = 1;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            m /= p;
            if m.is_multiple_of(p) {
                return 0;
            }
            res = -res;
        }
        p += 1;
    }
    if m > 1 {
        res = -res;
    }
    res
}

/// Coefficients (ascending) of the n-th cyclotomic polynomial.
pub fn cyclotomic_poly(n: u32) -> Vec<i64> {
    let divisors: Vec<u32> = (1..=n).filter(|d| n.is_multiple_of(*d)).collect();
    let mut p: Vec<i64> = vec![1];
    for &d in &divisors {
        if mobius(n / d) == 1 {
            let mut q = vec![0i64; p.len() + d as usize];
            for (i, &c) in p.iter().enumerate() {
                q[i + d as usize] += c;
                q[i] -= c;
            }
            p = q;
        }
    }
    for &d in &divisors {
        if mobius(n / d) == -1 {
            let d = d as usize;
            let deg_q = p.len() - 1 - d;
            let mut q = vec![0i64; deg_q + 1];
            for k in 0..=deg_q {
                let prev = if k >= d { q[k - d] } else { 0 };
                q[k] = prev - p[k];
            }
            p = q;
        }
    }
    p
}

pub(crate) struct Descent {
    sub: u32,
    rows: Vec<Vec<BigInt>>,
    den: BigInt,
}

pub(crate) struct FieldData {
    n: u32,
    phi: usize,
    poly: Vec<i64>,
    powers: Vec<Vec<i64>>,
    descents: Vec<Descent>,
}

static FIELDS: [OnceLock<FieldData>; MAX_CONDUCTOR as usize + 1] =
    [const { OnceLock::new() }; MAX_CONDUCTOR as usize + 1];

pub(crate) fn field(n: u32) -> &'static FieldData {
    assert!((1..=MAX_CONDUCTOR).contains(&n) && canonical_conductor(n) == n);
    FIELDS[n as usize].get_or_init(|| FieldData::build(n))
}

fn rational_inverse(m: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero()).expect("singular matrix");
        a.swap(c, p);
        let inv = a[c][c].recip();
        for v in a[c].iter_mut() {
            *v = &*v * &inv;
        }
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                for k in 0..2 * n {
                    let t = &f * &a[c][k];
                    a[r][k] -= t;
                }
            }
        }
    }
    a.into_iter().map(|r| r[n..].to_vec()).collect()
}

impl FieldData {
    fn build(n: u32) -> FieldData {
        let poly = cyclotomic_poly(n);
        let phi = poly.len() - 1;
        let mut powers: Vec<Vec<i64>> = Vec::with_capacity(n as usize);
        let mut cur = vec![0i64; phi];
        cur[0] = 1;
        for _ in 0..n {
            powers.push(cur.clone());
            // multiply by ζ
            let top = cur[phi - 1];
            let mut next = vec![0i64; phi];
            next[1..phi].copy_from_slice(&cur[..(phi - 1)]);
            if top != 0 {
                for i in 0..phi {
                    next[i] -= top * poly[i];
                }
            }
            cur = next;
        }
        let mut fd = FieldData { n, phi, poly, powers, descents: Vec::new() };
        if n > 1 {
            for p in prime_factors(n) {
                let mut sub = canonical_conductor(n / p);
                if sub == 2 {
                    sub = 1;
                }
                fd.descents.push(fd.descent_to(sub));
            }
        }
        fd
    }

    /// Left inverse of the lift map Q[ζ_sub] → Q[ζ_n].
    fn descent_to(&self, sub: u32) -> Descent {
        let sphi = if sub == 1 { 1 } else { totient(sub) };
        let step = self.n / sub;
        // lift matrix L, rows indexed by n-basis, columns by sub-basis
        let cols: Vec<&Vec<i64>> = (0..sphi).map(|j| &self.powers[(j as u32 * step % self.n) as usize]).collect();
        let lrow = |i: usize| -> Vec<BigRational> {
            cols.iter().map(|c| BigRational::from_integer(BigInt::from(c[i]))).collect()
        };
        // greedily pick independent rows
        let mut chosen: Vec<usize> = Vec::new();
        let mut basis: Vec<Vec<BigRational>> = Vec::new();
        for i in 0..self.phi {
            if chosen.len() == sphi {
                break;
            }
            let mut v = lrow(i);
            for b in &basis {
                let lead = b.iter().position(|x| !x.is_zero()).unwrap();
                if !v[lead].is_zero() {
                    let f = &v[lead] / &b[lead];
                    for k in 0..sphi {
                        let t = &f * &b[k];
                        v[k] -= t;
                    }
                }
            }
            if v.iter().any(|x| !x.is_zero()) {
                chosen.push(i);
                basis.push(v);
            }
        }
        let square: Vec<Vec<BigRational>> = chosen.iter().map(|&i| lrow(i)).collect();
        let inv = rational_inverse(&square);
        let mut den = BigInt::one();
        for r in &inv {
            for v in r {
                den = den.lcm(v.denom());
            }
        }
        let mut rows = vec![vec![BigInt::zero(); self.phi]; sphi];
        for (j, r) in inv.iter().enumerate() {
            for (t, &i) in chosen.iter().enumerate() {
                let v = &r[t] * BigRational::from_integer(den.clone());
                rows[j][i] = v.to_integer();
            }
        }
        Descent { sub, rows, den }
    }

    fn reduce(&self, mut p: Vec<BigInt>) -> Vec<BigInt> {
        let phi = self.phi;
        if p.len() > phi {
            for k in (phi..p.len()).rev() {
                if p[k].is_zero() {
                    continue;
                }
                let c = std::mem::take(&mut p[k]);
                for i in 0..phi {
                    if self.poly[i] != 0 {
                        p[k - phi + i] -= &c * self.poly[i];
                    }
                }
            }
            p.truncate(phi);
        }
        p.resize(phi, BigInt::zero());
        p
    }
}

fn lift_int(num: &[BigInt], from: u32, to: u32) -> Vec<BigInt> {
    if from == to {
        return num.to_vec();
    }
    let f = field(to);
    let step = to / from;
    let mut out = vec![BigInt::zero(); f.phi];
    for (j, c) in num.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let pw = &f.powers[((j as u32 * step) % to) as usize];
        for (i, &v) in pw.iter().enumerate() {
            if v != 0 {
                out[i] += c * v;
            }
        }
    }
    out
}

/// Element of a cyclotomic field at its minimal conductor.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cyclotomic {
    n: u32,
    num: Vec<BigInt>,
    den: BigInt,
}

impl Cyclotomic {
    fn make(n: u32, num: Vec<BigInt>, den: BigInt) -> Cyclotomic {
        let (mut n, mut num, mut den) = Self::reduce_gcd(n, num, den);
        loop {
            if num.iter().skip(1).all(|c| c.is_zero()) {
                let c0 = num.into_iter().next().unwrap_or_default();
                let (_, v, d) = Self::reduce_gcd(1, vec![c0], den);
                return Cyclotomic { n: 1, num: v, den: d };
            }
            let f = field(n);
            let mut moved = false;
            for d in &f.descents {
                let y: Vec<BigInt> = d
                    .rows
                    .iter()
                    .map(|r| r.iter().zip(&num).filter(|(a, _)| !a.is_zero()).map(|(a, b)| a * b).sum())
                    .collect();
                let back = lift_int(&y, d.sub, n);
                if back.iter().zip(&num).all(|(a, b)| *a == b * &d.den) {
                    let (n2, v2, d2) = Self::reduce_gcd(d.sub, y, den * &d.den);
                    n = n2;
                    num = v2;
                    den = d2;
                    moved = true;
                    break;
                }
            }
            if !moved {
                return Cyclotomic { n, num, den };
            }
        }
    }

    fn reduce_gcd(n: u32, mut num: Vec<BigInt>, mut den: BigInt) -> (u32, Vec<BigInt>, BigInt) {
        assert!(!den.is_zero());
        if den.is_negative() {
            den = -den;
            for c in num.iter_mut() {
                *c = -&*c;
            }
        }
        let mut g = den.clone();
        for c in &num {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if num.iter().all(|c| c.is_zero()) {
            return (n, num, BigInt::one());
        }
        if !g.is_one() {
            for c in num.iter_mut() {
                *c = &*c / &g;
            }
            den /= g;
        }
        (n, num, den)
    }

    pub fn from_rational(r: &BigRational) -> Cyclotomic {
        Cyclotomic { n: 1, num: vec![r.numer().clone()], den: r.denom().clone() }
    }

    pub fn from_int(v: i64) -> Cyclotomic {
        Cyclotomic { n: 1, num: vec![BigInt::from(v)], den: BigInt::one() }
    }

    pub fn from_frac(a: i64, b: i64) -> Cyclotomic {
        Self::from_rational(&BigRational::new(a.into(), b.into()))
    }

    /// `Σ coeffs[k]·ζ_n^k` for a polynomial of any degree.
    pub fn from_poly(n: u32, coeffs: &[BigRational]) -> Result<Cyclotomic, CycloError> {
        if n == 0 || n > MAX_CONDUCTOR {
            return Err(CycloError::ConductorTooLarge(n as u64));
        }
        let mut den = BigInt::one();
        for c in coeffs {
            den = den.lcm(c.denom());
        }
        let ints: Vec<(usize, BigInt)> = coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k, (c * BigRational::from_integer(den.clone())).to_integer()))
            .collect();
        // ζ_{2m}^k = (-1)^k ζ_m^{k(m+1)/2} for odd m
        let (m, map): (u32, Box<dyn Fn(usize) -> (bool, u64)>) = if n % 4 == 2 {
            let m = n / 2;
            (m, Box::new(move |k: usize| (k % 2 == 1, (k as u64 * (m as u64).div_ceil(2)) % m as u64)))
        } else {
            (n, Box::new(move |k: usize| (false, k as u64 % n as u64)))
        };
        let f = field(m);
        let mut out = vec![BigInt::zero(); f.phi];
        for (k, c) in ints {
            let (neg, e) = map(k);
            let c = if neg { -c } else { c };
            for (i, &v) in f.powers[e as usize].iter().enumerate() {
                if v != 0 {
                    out[i] += &c * v;
                }
            }
        }
        Ok(Self::make(m, out, den))
    }

    /// ζ_n^k.
    pub fn root_of_unity(k: i64, n: u32) -> Cyclotomic {
        let e = k.rem_euclid(n as i64) as usize;
        let mut c = vec![BigRational::zero(); e + 1];
        c[e] = BigRational::one();
        Self::from_poly(n, &c).expect("conductor within range")
    }

    pub fn zeta(n: u32) -> Cyclotomic {
        Self::root_of_unity(1, n)
    }

    /// Root of unity `e^{2πi h}` for a rational `h`.
    pub fn exp_2pi_i(h: &BigRational) -> Cyclotomic {
        let d = h.denom().to_u32().expect("weight denominator fits in u32");
        let k = h.numer().mod_floor(h.denom()).to_i64().unwrap();
        Self::root_of_unity(k, d)
    }

    pub fn conductor(&self) -> u32 {
        self.n
    }

    /// Power-basis coordinates at the own conductor.
    pub fn coeffs(&self) -> Vec<BigRational> {
        self.num.iter().map(|c| BigRational::new(c.clone(), self.den.clone())).collect()
    }

    /// Coordinates in the power basis of Q[ζ_m]; `m` must be a multiple of the
    /// conductor.
    pub fn coeffs_at(&self, m: u32) -> Option<Vec<BigRational>> {
        let m = canonical_conductor(m).max(1);
        if !m.is_multiple_of(self.n) || m > MAX_CONDUCTOR {
            return None;
        }
        Some(lift_int(&self.num, self.n, m).into_iter().map(|c| BigRational::new(c, self.den.clone())).collect())
    }

    pub fn is_zero_value(&self) -> bool {
        self.num.iter().all(|c| c.is_zero())
    }

    pub fn is_rational(&self) -> bool {
        self.n == 1
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        if self.n == 1 {
            Some(BigRational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    pub fn to_integer(&self) -> Option<BigInt> {
        if self.n == 1 && self.den.is_one() {
            Some(self.num[0].clone())
        } else {
            None
        }
    }

    pub fn is_integer(&self) -> bool {
        self.n == 1 && self.den.is_one()
    }

    /// True iff every power-basis coordinate is an integer.
    pub fn is_algebraic_integer(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_real(&self) -> bool {
        *self == self.conj()
    }

    pub fn is_root_of_unity(&self) -> bool {
        self.is_algebraic_integer() && self.abs_squared() == Cyclotomic::one()
    }

    pub fn abs_squared(&self) -> Cyclotomic {
        self * &self.conj()
    }

    pub fn conj(&self) -> Cyclotomic {
        self.galois_unchecked(-1)
    }

    /// σ_ℓ : ζ ↦ ζ^ℓ.
    pub fn galois(&self, ell: i64) -> Result<Cyclotomic, CycloError> {
        if gcd_u64(ell.unsigned_abs(), self.n as u64) != 1 {
            return Err(CycloError::NotCoprime { ell, n: self.n });
        }
        Ok(self.galois_unchecked(ell))
    }

    fn galois_unchecked(&self, ell: i64) -> Cyclotomic {
        if self.n == 1 {
            return self.clone();
        }
        let l = ell.rem_euclid(self.n as i64) as u64;
        if l == 1 {
            return self.clone();
        }
        let f = field(self.n);
        let mut out = vec![BigInt::zero(); f.phi];
        for (k, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = (k as u64 * l) % self.n as u64;
            for (i, &v) in f.powers[e as usize].iter().enumerate() {
                if v != 0 {
                    out[i] += c * v;
                }
            }
        }
        Cyclotomic { n: self.n, num: out, den: self.den.clone() }
    }

    pub fn inverse(&self) -> Result<Cyclotomic, CycloError> {
        if self.is_zero_value() {
            return Err(CycloError::DivisionByZero);
        }
        if self.n == 1 {
            return Ok(Cyclotomic {
                n: 1,
                num: vec![if self.num[0].is_negative() { -&self.den } else { self.den.clone() }],
                den: self.num[0].abs(),
            });
        }
        let f = field(self.n);
        let phi = f.phi;
        // columns: num · ζ^j reduced
        let mut m = vec![vec![BigRational::zero(); phi]; phi];
        for j in 0..phi {
            let mut p = vec![BigInt::zero(); phi + j];
            for (k, c) in self.num.iter().enumerate() {
                p[k + j] = c.clone();
            }
            let col = f.reduce(p);
            for i in 0..phi {
                m[i][j] = BigRational::from_integer(col[i].clone());
            }
        }
        let inv = rational_inverse(&m);
        // y = den · inv · e_0
        let coeffs: Vec<BigRational> =
            (0..phi).map(|i| &inv[i][0] * BigRational::from_integer(self.den.clone())).collect();
        Self::from_poly(self.n, &coeffs)
    }

    pub fn checked_div(&self, other: &Cyclotomic) -> Result<Cyclotomic, CycloError> {
        Ok(self * &other.inverse()?)
    }

    pub fn pow(&self, mut e: u32) -> Cyclotomic {
        let mut base = self.clone();
        let mut acc = Cyclotomic::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Image under the embedding ζ_N ↦ e^{2πi ℓ/N}.
    pub fn embed_sigma<R: Real>(&self, ell: i64, prec: u32) -> Cx<R> {
        let mut acc: Cx<R> = Complex::new(R::from_i64_prec(0, prec), R::from_i64_prec(0, prec));
        for (k, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let z: Cx<R> = cis(k as i64 * ell, self.n as u64, prec);
            let cr = R::from_rational(&BigRational::from_integer(c.clone()), prec);
            acc = acc + z * Complex::new(cr, R::zero());
        }
        let d = R::from_rational(&BigRational::from_integer(self.den.clone()), prec);
        Complex::new(acc.re / d.clone(), acc.im / d)
    }

    /// Canonical embedding ζ_N ↦ e^{2πi/N} at `prec` bits.
    pub fn embed(&self, prec: u32) -> Cx<BigFloat> {
        self.embed_sigma::<BigFloat>(1, prec)
    }

    pub fn to_f64(&self) -> Complex<f64> {
        let z = self.embed(80);
        Complex::new(z.re.to_f64_lossy(), z.im.to_f64_lossy())
    }

    /// Ordering of two real values under the canonical embedding; equal values
    /// compare equal exactly. Returns `None` if either value is not real or
    /// the difference cannot be resolved below 4096 bits.
    pub fn cmp_real(&self, other: &Cyclotomic, prec: u32) -> Option<Ordering> {
        if !self.is_real() || !other.is_real() {
            return None;
        }
        let d = self - other;
        if d.is_zero_value() {
            return Some(Ordering::Equal);
        }
        if let Some(r) = d.to_rational() {
            return Some(if r.is_negative() { Ordering::Less } else { Ordering::Greater });
        }
        let mut p = prec.max(64);
        while p <= 4096 {
            let z = d.embed(p);
            let tol = half_tol::<BigFloat>(p);
            if z.re.abs() > tol {
                return Some(if z.re.is_negative() { Ordering::Less } else { Ordering::Greater });
            }
            p *= 2;
        }
        None
    }

    /// Literal `c0 + c1*z + ...` with coefficients `a/b` where `z = ζ_m`, for
    /// `m` a multiple of the own conductor. For `m ≡ 2 mod 4` only even
    /// powers of `z` occur.
    pub fn to_literal(&self, m: u32) -> Option<String> {
        let coeffs = self.coeffs_at(m)?;
        let step = (m / canonical_conductor(m).max(1)) as usize;
        let mut out = String::new();
        for (j, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let k = j * step;
            let mag = format!("{}/{}", c.numer().abs(), c.denom());
            let body = match k {
                0 => mag,
                1 => format!("{mag}*z"),
                _ => format!("{mag}*z^{k}"),
            };
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
                out.push_str(&body);
            } else {
                out.push_str(if c.is_negative() { " - " } else { " + " });
                out.push_str(&body);
            }
        }
        if out.is_empty() {
            out.push_str("0/1");
        }
        Some(out)
    }

    /// Parses a literal relative to ζ_n.
    pub fn parse_literal(s: &str, n: u32) -> Result<Cyclotomic, CycloError> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(CycloError::Parse("empty literal".into()));
        }
        let bytes = t.as_bytes();
        let mut i = 0;
        let mut coeffs: Vec<BigRational> = Vec::new();
        let err = |msg: &str, at: usize| CycloError::Parse(format!("{msg} at offset {at} in '{s}'"));
        while i < bytes.len() {
            let mut neg = false;
            if bytes[i] == b'+' || bytes[i] == b'-' {
                neg = bytes[i] == b'-';
                i += 1;
            } else if !coeffs.is_empty() || i > 0 {
                return Err(err("expected '+' or '-'", i));
            }
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let mut coef = if i > start {
                let a: BigInt = t[start..i].parse().map_err(|_| err("bad integer", start))?;
                let mut r = BigRational::from_integer(a);
                if i < bytes.len() && bytes[i] == b'/' {
                    i += 1;
                    let s2 = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    if i == s2 {
                        return Err(err("missing denominator", s2));
                    }
                    let b: BigInt = t[s2..i].parse().map_err(|_| err("bad denominator", s2))?;
                    if b.is_zero() {
                        return Err(err("zero denominator", s2));
                    }
                    r /= BigRational::from_integer(b);
                }
                Some(r)
            } else {
                None
            };
            let mut power = 0usize;
            let has_mul = i < bytes.len() && bytes[i] == b'*';
            if has_mul {
                if coef.is_none() {
                    return Err(err("missing coefficient before '*'", i));
                }
                i += 1;
            }
            if i < bytes.len() && bytes[i] == b'z' && (has_mul || coef.is_none()) {
                i += 1;
                power = 1;
                if i < bytes.len() && bytes[i] == b'^' {
                    i += 1;
                    let s3 = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    if i == s3 {
                        return Err(err("missing exponent", s3));
                    }
                    power = t[s3..i].parse().map_err(|_| err("bad exponent", s3))?;
                }
                if coef.is_none() {
                    coef = Some(BigRational::one());
                }
            } else if has_mul {
                return Err(err("expected 'z' after '*'", i));
            }
            let Some(mut c) = coef else {
                return Err(err("expected a term", i));
            };
            if neg {
                c = -c;
            }
            if coeffs.len() <= power {
                coeffs.resize(power + 1, BigRational::zero());
            }
            coeffs[power] += c;
        }
        Self::from_poly(n, &coeffs)
    }
}

/// Reconstructs `x ∈ Q[ζ_n]` from approximations of all its conjugates
/// `σ_ℓ(x)`, ordered as [`units`]`(n)`. Coordinates are rounded to the best
/// rationals with denominators up to `denom_bound` and accepted only if every
/// conjugate is reproduced within `2^{-prec/2}`.
pub fn reconstruct<R: Real>(
    conjugates: &[Cx<R>],
    n: u32,
    denom_bound: &BigInt,
    prec: u32,
) -> Result<Cyclotomic, CycloError> {
    let inv = vandermonde_inverse::<R>(n, prec)?;
    reconstruct_with(&inv, conjugates, n, denom_bound, prec)
}

/// Inverse of the matrix `V[i][k] = e^{2πi ℓ_i k/n}` over the units ℓ_i.
pub fn vandermonde_inverse<R: Real>(n: u32, prec: u32) -> Result<Vec<Vec<Cx<R>>>, CycloError> {
    if n == 0 || n > MAX_CONDUCTOR || canonical_conductor(n) != n && n != 2 {
        return Err(CycloError::ConductorTooLarge(n as u64));
    }
    let us = units(n);
    let phi = us.len();
    let v: Vec<Vec<Cx<R>>> = us
        .iter()
        .map(|&l| (0..phi).map(|k| cis::<R>(l as i64 * k as i64, n as u64, prec)).collect())
        .collect();
    invert_complex(&v, prec).ok_or(CycloError::NoCandidate { n, bound: "singular basis".into() })
}

pub fn reconstruct_with<R: Real>(
    inv: &[Vec<Cx<R>>],
    conjugates: &[Cx<R>],
    n: u32,
    denom_bound: &BigInt,
    prec: u32,
) -> Result<Cyclotomic, CycloError> {
    let fail = || CycloError::NoCandidate { n, bound: denom_bound.to_string() };
    let tol = half_tol::<R>(prec);
    let phi = inv.len();
    if conjugates.len() != phi {
        return Err(fail());
    }
    let mut coeffs = Vec::with_capacity(phi);
    for row in inv {
        let mut acc: Cx<R> = Complex::new(R::zero(), R::zero());
        for (a, b) in row.iter().zip(conjugates) {
            acc = acc + a.clone() * b.clone();
        }
        if acc.im.abs() > tol {
            return Err(fail());
        }
        let exact = acc.re.to_rational();
        let q = limit_denominator(&exact, denom_bound);
        let back = R::from_rational(&q, prec);
        if (back - acc.re).abs() > tol {
            return Err(fail());
        }
        coeffs.push(q);
    }
    let x = Cyclotomic::from_poly(if n == 2 { 1 } else { n }, &coeffs)?;
    for (l, c) in units(n).iter().zip(conjugates) {
        let e: Cx<R> = x.embed_sigma(*l as i64, prec);
        let d = e - c.clone();
        if d.re.abs() > tol.clone() || d.im.abs() > tol.clone() {
            return Err(fail());
        }
    }
    Ok(x)
}

impl Zero for Cyclotomic {
    fn zero() -> Self {
        Cyclotomic { n: 1, num: vec![BigInt::zero()], den: BigInt::one() }
    }
    fn is_zero(&self) -> bool {
        self.is_zero_value()
    }
}

impl One for Cyclotomic {
    fn one() -> Self {
        Cyclotomic::from_int(1)
    }
}

impl Add for &Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        let l = lcm_u64(self.n as u64, rhs.n as u64) as u32;
        let a = lift_int(&self.num, self.n, l);
        let b = lift_int(&rhs.num, rhs.n, l);
        let num: Vec<BigInt> = if self.den == rhs.den {
            a.iter().zip(&b).map(|(x, y)| x + y).collect()
        } else {
            a.iter().zip(&b).map(|(x, y)| x * &rhs.den + y * &self.den).collect()
        };
        let den = if self.den == rhs.den { self.den.clone() } else { &self.den * &rhs.den };
        Cyclotomic::make(l, num, den)
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic { n: self.n, num: self.num.iter().map(|c| -c).collect(), den: self.den.clone() }
    }
}

impl Sub for &Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        self + &(-rhs)
    }
}

impl Mul for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        if self.n == 1 || rhs.n == 1 {
            let (r, x) = if self.n == 1 { (self, rhs) } else { (rhs, self) };
            let c = &r.num[0];
            if c.is_zero() {
                return Cyclotomic::zero();
            }
            return Cyclotomic::make(x.n, x.num.iter().map(|v| v * c).collect(), &x.den * &r.den);
        }
        let l = lcm_u64(self.n as u64, rhs.n as u64) as u32;
        let a = lift_int(&self.num, self.n, l);
        let b = lift_int(&rhs.num, rhs.n, l);
        let mut prod = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        let num = field(l).reduce(prod);
        Cyclotomic::make(l, num, &self.den * &rhs.den)
    }
}

impl Div for &Cyclotomic {
    type Output = Cyclotomic;
    fn div(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.checked_div(rhs).expect("cyclotomic division by zero")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Cyclotomic {
            type Output = Cyclotomic;
            fn $m(self, rhs: Cyclotomic) -> Cyclotomic {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Cyclotomic> for Cyclotomic {
            type Output = Cyclotomic;
            fn $m(self, rhs: &Cyclotomic) -> Cyclotomic {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

impl std::iter::Sum for Cyclotomic {
    fn sum<I: Iterator<Item = Cyclotomic>>(iter: I) -> Cyclotomic {
        iter.fold(Cyclotomic::zero(), |a, b| &a + &b)
    }
}

fn fmt_coeff_term(c: &BigRational, k: usize, n: u32, first: bool, compact: bool) -> String {
    let sep_plus = if compact { "+" } else { " + " };
    let sep_minus = if compact { "-" } else { " - " };
    let mag = c.abs();
    let zpart = match k {
        0 => String::new(),
        1 => format!("z{n}"),
        _ => format!("z{n}^{k}"),
    };
    let body = if k == 0 {
        mag.to_string()
    } else if mag.is_one() {
        zpart
    } else {
        format!("{mag}*{zpart}")
    };
    match (first, c.is_negative()) {
        (true, true) => format!("-{body}"),
        (true, false) => body,
        (false, true) => format!("{sep_minus}{body}"),
        (false, false) => format!("{sep_plus}{body}"),
    }
}

impl Cyclotomic {
    fn render(&self, compact: bool) -> String {
        if let Some(r) = self.to_rational() {
            return r.to_string();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            out.push_str(&fmt_coeff_term(c, k, self.n, out.is_empty(), compact));
        }
        out
    }

    /// Rendering without spaces, for key=value records.
    pub fn compact(&self) -> String {
        self.render(true)
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(false))
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclotomic({})", self.render(false))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(k: i64, n: u32) -> Cyclotomic {
        Cyclotomic::root_of_unity(k, n)
    }

    fn golden() -> Cyclotomic {
        &(&Cyclotomic::one() + &z(1, 5)) + &z(4, 5)
    }

    fn sqrt2() -> Cyclotomic {
        &z(1, 8) - &z(3, 8)
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(5), vec![1, 1, 1, 1, 1]);
        assert_eq!(cyclotomic_poly(8), vec![1, 0, 0, 0, 1]);
        assert_eq!(cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_poly(6), vec![1, -1, 1]);
    }

    #[test]
    fn primitive_fifth_roots_sum_to_minus_one() {
        let a = &z(1, 5) + &z(4, 5);
        let b = &z(2, 5) + &z(3, 5);
        assert_eq!(&a + &b, Cyclotomic::from_int(-1));
    }

    #[test]
    fn zeta8_squared_reduces_to_zeta4() {
        let x = &z(1, 8) * &z(1, 8);
        assert_eq!(x.conductor(), 4);
        assert_eq!(x, z(1, 4));
    }

    #[test]
    fn golden_times_conjugate() {
        let a = golden();
        let b = &(&Cyclotomic::one() + &z(2, 5)) + &z(3, 5);
        assert_eq!(&a * &b, Cyclotomic::from_int(-1));
        // x^2 = x + 1
        assert_eq!(&a * &a, &a + &Cyclotomic::one());
    }

    #[test]
    fn galois_examples() {
        assert_eq!(z(1, 5).galois(2).unwrap(), z(2, 5));
        let g = golden().galois(2).unwrap();
        assert_eq!(g, -(&z(1, 5) + &z(4, 5)));
        assert_eq!(golden().galois(1).unwrap(), golden());
        assert!(matches!(z(1, 5).galois(5), Err(CycloError::NotCoprime { .. })));
        assert_eq!(sqrt2().galois(3).unwrap(), -sqrt2());
        assert_eq!(sqrt2().galois(7).unwrap(), sqrt2());
    }

    #[test]
    fn integrality() {
        assert!(golden().is_algebraic_integer());
        assert!(!Cyclotomic::from_frac(1, 2).is_algebraic_integer());
        let s = &z(1, 8) + &z(-1, 8);
        assert!(s.is_algebraic_integer());
        assert_eq!(&s * &s, Cyclotomic::from_int(2));
    }

    #[test]
    fn embeddings_and_predicates() {
        let i = z(1, 4).embed(64);
        assert!(i.re.abs() < BigFloat::pow2(-63, 64));
        assert!((i.im - BigFloat::from_i64_prec(1, 64)).abs() < BigFloat::pow2(-63, 64));
        assert_eq!(z(1, 5).abs_squared(), Cyclotomic::one());
        assert!(sqrt2().is_real());
        assert!(!z(1, 8).is_real());
        assert!(z(3, 7).is_root_of_unity());
        assert!(!sqrt2().is_root_of_unity());
        assert!((-z(1, 3)).is_root_of_unity());
    }

    #[test]
    fn conductor_normalization_across_fields() {
        // ζ_3 lives in Q[ζ_12]; sum with ζ_4 gives conductor 12
        let x = &z(1, 3) + &z(1, 4);
        assert_eq!(x.conductor(), 12);
        let y = &x - &z(1, 4);
        assert_eq!(y, z(1, 3));
        assert_eq!(y.conductor(), 3);
        // ζ_6 = -ζ_3^2
        assert_eq!(z(1, 6), -z(2, 3));
        // √5 in Q[ζ_5] and √-3 in Q[ζ_3] multiply into Q[ζ_15]
        let s5 = &(&golden() + &golden()) - &Cyclotomic::one();
        assert_eq!(&s5 * &s5, Cyclotomic::from_int(5));
        let sm3 = &z(1, 3) - &z(2, 3);
        let p = &s5 * &sm3;
        assert_eq!(p.conductor(), 15);
        assert_eq!(&p * &p, Cyclotomic::from_int(-15));
    }

    #[test]
    fn inverse_and_division() {
        let g = golden();
        let inv = g.inverse().unwrap();
        assert_eq!(&g * &inv, Cyclotomic::one());
        assert_eq!(inv, &g - &Cyclotomic::one());
        assert!(Cyclotomic::zero().inverse().is_err());
        let x = &z(1, 12) + &Cyclotomic::from_frac(2, 3);
        assert_eq!(&(&x / &sqrt2()) * &sqrt2(), x);
    }

    #[test]
    fn reconstruct_examples() {
        let prec = 192;
        let bound = BigInt::from(1_000_000);
        let g = golden();
        let conj: Vec<Cx<BigFloat>> = units(5).iter().map(|&l| g.embed_sigma(l as i64, prec)).collect();
        assert_eq!(reconstruct(&conj, 5, &bound, prec).unwrap(), g);
        let half = Cyclotomic::from_frac(1, 2);
        for n in [1u32, 3, 8] {
            let c: Vec<Cx<BigFloat>> = units(n).iter().map(|&l| half.embed_sigma(l as i64, prec)).collect();
            assert_eq!(reconstruct(&c, n, &bound, prec).unwrap(), half);
        }
        let s = sqrt2();
        let c: Vec<Cx<BigFloat>> = units(8).iter().map(|&l| s.embed_sigma(l as i64, prec)).collect();
        let r = reconstruct(&c, 8, &bound, prec).unwrap();
        assert_eq!(r, s);
        assert_eq!(r.coeffs_at(8).unwrap()[1], BigRational::one());
        // wrong conjugate assignment fails
        let mut bad = c.clone();
        bad[1] = s.embed_sigma(1, prec);
        assert!(reconstruct(&bad, 8, &bound, prec).is_err());
    }

    #[test]
    fn reconstruct_with_f64() {
        let g = golden();
        let conj: Vec<Cx<f64>> = units(5).iter().map(|&l| g.embed_sigma(l as i64, 53)).collect();
        assert_eq!(reconstruct(&conj, 5, &BigInt::from(1000), 53).unwrap(), g);
    }

    #[test]
    fn literals_round_trip() {
        let x = Cyclotomic::parse_literal("1/2 + 3*z - 2/3*z^3", 8).unwrap();
        let lit = x.to_literal(8).unwrap();
        assert_eq!(lit, "1/2 + 3/1*z - 2/3*z^3");
        assert_eq!(Cyclotomic::parse_literal(&lit, 8).unwrap(), x);
        assert_eq!(Cyclotomic::parse_literal("z^5", 5).unwrap(), Cyclotomic::one());
        assert_eq!(Cyclotomic::parse_literal("-z", 2).unwrap(), Cyclotomic::one());
        assert!(Cyclotomic::parse_literal("1/0", 4).is_err());
        assert!(Cyclotomic::parse_literal("1 z", 4).is_err());
        assert!(Cyclotomic::parse_literal("*z", 4).is_err());
        assert_eq!(Cyclotomic::zero().to_literal(5).unwrap(), "0/1");
    }

    #[test]
    fn real_comparison() {
        let s = sqrt2();
        assert_eq!(s.cmp_real(&Cyclotomic::from_frac(141, 100), 192), Some(Ordering::Greater));
        assert_eq!(s.cmp_real(&Cyclotomic::from_frac(142, 100), 192), Some(Ordering::Less));
        assert_eq!(s.cmp_real(&s, 192), Some(Ordering::Equal));
        assert_eq!(z(1, 4).cmp_real(&s, 192), None);
    }

    #[test]
    fn display_forms() {
        assert_eq!(golden().to_string(), "-z5^2 - z5^3");
        assert_eq!(sqrt2().compact(), "z8-z8^3");
        assert_eq!(Cyclotomic::from_frac(-3, 4).to_string(), "-3/4");
    }
}
