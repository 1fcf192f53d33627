//! Numeric side of the library: an arbitrary-precision binary float, the
//! [`Real`] abstraction shared by `f32`, `f64` and [`BigFloat`], and the
//! small dense routines (complex Gaussian elimination, polynomial roots,
//! eigen-rows of commuting matrices) whose outputs are later certified exactly.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

/// Real scalar usable by the numeric routines.
///
/// `prec` arguments are bit counts; fixed-width types ignore them.
pub trait Real: Num + Clone + PartialOrd + Neg<Output = Self> + fmt::Debug {
    fn from_i64_prec(v: i64, prec: u32) -> Self;
    fn from_rational(r: &BigRational, prec: u32) -> Self;
    /// Exact rational value of this binary number.
    fn to_rational(&self) -> BigRational;
    fn to_f64_lossy(&self) -> f64;
    fn sqrt(&self) -> Self;
    fn abs(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }
    /// `(cos, sin)` of the angle `2π·k/n`.
    fn cis_turns(k: i64, n: u64, prec: u32) -> (Self, Self);
    /// `2^e` at the given precision.
    fn pow2(e: i64, prec: u32) -> Self;
    /// Number of mantissa bits actually carried.
    fn mantissa_bits(prec: u32) -> u32;
}

impl Real for f64 {
    fn from_i64_prec(v: i64, _: u32) -> Self {
        v as f64
    }
    fn from_rational(r: &BigRational, _: u32) -> Self {
        r.to_f64().unwrap_or(f64::NAN)
    }
    fn to_rational(&self) -> BigRational {
        BigRational::from_float(*self).unwrap_or_else(BigRational::zero)
    }
    fn to_f64_lossy(&self) -> f64 {
        *self
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn cis_turns(k: i64, n: u64, _: u32) -> (Self, Self) {
        let r = k.rem_euclid(n as i64) as f64 / n as f64;
        let t = std::f64::consts::TAU * r;
        (t.cos(), t.sin())
    }
    fn pow2(e: i64, _: u32) -> Self {
        2f64.powi(e as i32)
    }
    fn mantissa_bits(_: u32) -> u32 {
        53
    }
}

impl Real for f32 {
    fn from_i64_prec(v: i64, _: u32) -> Self {
        v as f32
    }
    fn from_rational(r: &BigRational, _: u32) -> Self {
        r.to_f32().unwrap_or(f32::NAN)
    }
    fn to_rational(&self) -> BigRational {
        BigRational::from_float(*self).unwrap_or_else(BigRational::zero)
    }
    fn to_f64_lossy(&self) -> f64 {
        *self as f64
    }
    fn sqrt(&self) -> Self {
        f32::sqrt(*self)
    }
    fn cis_turns(k: i64, n: u64, _: u32) -> (Self, Self) {
        let (c, s) = f64::cis_turns(k, n, 53);
        (c as f32, s as f32)
    }
    fn pow2(e: i64, _: u32) -> Self {
        2f32.powi(e as i32)
    }
    fn mantissa_bits(_: u32) -> u32 {
        24
    }
}

/// Binary floating point number `mant · 2^exp` with a mantissa of at most
/// `prec` bits. Operations take the larger precision of their operands.
#[derive(Clone)]
pub struct BigFloat {
    mant: BigInt,
    exp: i64,
    prec: u32,
}

impl fmt::Debug for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.to_f64_lossy())
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_f64_lossy())
    }
}

fn round_shift(m: &BigInt, s: u64) -> BigInt {
    if s == 0 {
        return m.clone();
    }
    let half = BigInt::one() << (s - 1);
    (m + half) >> s
}

impl BigFloat {
    pub fn new(mant: BigInt, exp: i64, prec: u32) -> Self {
        let mut x = BigFloat { mant, exp, prec };
        x.normalize();
        x
    }

    pub fn from_bigint(v: BigInt, prec: u32) -> Self {
        Self::new(v, 0, prec)
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    fn normalize(&mut self) {
        if self.mant.is_zero() {
            self.exp = 0;
            return;
        }
        let bits = self.mant.bits();
        if self.prec > 0 && bits > self.prec as u64 {
            let s = bits - self.prec as u64;
            self.mant = round_shift(&self.mant, s);
            self.exp += s as i64;
        }
        // strip trailing zero bits so equal values share a representation
        let tz = self.mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mant >>= tz;
            self.exp += tz as i64;
        }
    }

    /// Position of the leading bit plus one (`value < 2^top`).
    fn top(&self) -> i64 {
        self.exp + self.mant.bits() as i64
    }

    fn with_prec(mut self, prec: u32) -> Self {
        self.prec = prec;
        self.normalize();
        self
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    /// π to `prec` bits (Machin's formula in fixed point).
    pub fn pi(prec: u32) -> Self {
        let work = prec as u64 + 32;
        let one = BigInt::one() << work;
        let atan_inv = |x: i64| -> BigInt {
            let x2 = BigInt::from(x * x);
            let mut term = &one / BigInt::from(x);
            let mut sum = term.clone();
            let mut k: i64 = 1;
            loop {
                term = &term / &x2;
                if term.is_zero() {
                    break;
                }
                let t = &term / BigInt::from(2 * k + 1);
                if k % 2 == 1 {
                    sum -= t;
                } else {
                    sum += t;
                }
                k += 1;
            }
            sum
        };
        let v = atan_inv(5) * 16 - atan_inv(239) * 4;
        BigFloat::new(v, -(work as i64), prec)
    }
}

impl PartialEq for BigFloat {
    fn eq(&self, other: &Self) -> bool {
        self.mant == other.mant && (self.mant.is_zero() || self.exp == other.exp)
    }
}

impl PartialOrd for BigFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        let d = self.clone() - other.clone();
        Some(match d.mant.sign() {
            num_bigint::Sign::Minus => Ordering::Less,
            num_bigint::Sign::NoSign => Ordering::Equal,
            num_bigint::Sign::Plus => Ordering::Greater,
        })
    }
}

impl Zero for BigFloat {
    fn zero() -> Self {
        BigFloat { mant: BigInt::zero(), exp: 0, prec: 0 }
    }
    fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }
}

impl One for BigFloat {
    fn one() -> Self {
        BigFloat { mant: BigInt::one(), exp: 0, prec: 0 }
    }
}

impl Add for BigFloat {
    type Output = BigFloat;
    fn add(self, rhs: BigFloat) -> BigFloat {
        let prec = self.prec.max(rhs.prec);
        if self.mant.is_zero() {
            return rhs.with_prec(prec);
        }
        if rhs.mant.is_zero() {
            return self.with_prec(prec);
        }
        let guard = prec as i64 + 4;
        if prec > 0 {
            if self.top() > rhs.top() + guard {
                return self.with_prec(prec);
            }
            if rhs.top() > self.top() + guard {
                return rhs.with_prec(prec);
            }
        }
        let e = self.exp.min(rhs.exp);
        let a = self.mant << (self.exp - e) as u64;
        let b = rhs.mant << (rhs.exp - e) as u64;
        BigFloat::new(a + b, e, prec)
    }
}

impl Sub for BigFloat {
    type Output = BigFloat;
    fn sub(self, rhs: BigFloat) -> BigFloat {
        self + (-rhs)
    }
}

impl Neg for BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        BigFloat { mant: -self.mant, exp: self.exp, prec: self.prec }
    }
}

impl Mul for BigFloat {
    type Output = BigFloat;
    fn mul(self, rhs: BigFloat) -> BigFloat {
        let prec = self.prec.max(rhs.prec);
        BigFloat::new(self.mant * rhs.mant, self.exp + rhs.exp, prec)
    }
}

impl Div for BigFloat {
    type Output = BigFloat;
    fn div(self, rhs: BigFloat) -> BigFloat {
        assert!(!rhs.mant.is_zero(), "BigFloat division by zero");
        let prec = self.prec.max(rhs.prec).max(64);
        if self.mant.is_zero() {
            return BigFloat::zero().with_prec(prec);
        }
        let s = (prec as i64 + rhs.mant.bits() as i64 - self.mant.bits() as i64 + 4).max(0);
        let num = self.mant << s as u64;
        BigFloat::new(num / rhs.mant, self.exp - s - rhs.exp, prec)
    }
}

impl Rem for BigFloat {
    type Output = BigFloat;
    fn rem(self, rhs: BigFloat) -> BigFloat {
        let q = (self.clone() / rhs.clone()).to_rational().trunc();
        let qf = BigFloat::from_bigint(q.to_integer(), self.prec.max(rhs.prec));
        self - qf * rhs
    }
}

impl Num for BigFloat {
    type FromStrRadixErr = ();
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, ()> {
        let v = BigInt::parse_bytes(s.as_bytes(), radix).ok_or(())?;
        Ok(BigFloat::from_bigint(v, 0))
    }
}

impl Real for BigFloat {
    fn from_i64_prec(v: i64, prec: u32) -> Self {
        BigFloat::new(BigInt::from(v), 0, prec)
    }

    fn from_rational(r: &BigRational, prec: u32) -> Self {
        let n = BigFloat::new(r.numer().clone(), 0, prec);
        if r.denom().is_one() {
            return n;
        }
        n / BigFloat::new(r.denom().clone(), 0, prec)
    }

    fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(self.mant.clone() << self.exp as u64)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    fn to_f64_lossy(&self) -> f64 {
        if self.mant.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits() as i64;
        let (m, e) = if bits > 62 {
            (&self.mant >> (bits - 62) as u64, self.exp + bits - 62)
        } else {
            (self.mant.clone(), self.exp)
        };
        let mf = m.to_f64().unwrap_or(0.0);
        if e > 2000 {
            return mf.signum() * f64::INFINITY;
        }
        if e < -2200 {
            return 0.0;
        }
        mf * 2f64.powi(e as i32)
    }

    fn sqrt(&self) -> Self {
        assert!(!self.mant.is_negative(), "sqrt of negative BigFloat");
        let prec = self.prec.max(64);
        if self.mant.is_zero() {
            return BigFloat::zero().with_prec(prec);
        }
        let bits = self.mant.bits() as i64;
        let mut s = (2 * prec as i64 + 4 - bits).max(0);
        if (self.exp - s).rem_euclid(2) != 0 {
            s += 1;
        }
        let m = &self.mant << s as u64;
        let e = self.exp - s;
        BigFloat::new(m.sqrt(), e / 2, prec)
    }

    fn cis_turns(k: i64, n: u64, prec: u32) -> (Self, Self) {
        assert!(n > 0);
        let n_i = n as i64;
        let mut r = k.rem_euclid(n_i);
        if 2 * r > n_i {
            r -= n_i;
        }
        if r == 0 {
            return (BigFloat::from_i64_prec(1, prec), BigFloat::zero().with_prec(prec));
        }
        // exact values at the quarter points avoid sign noise
        if 4 * r == n_i {
            return (BigFloat::zero().with_prec(prec), BigFloat::from_i64_prec(1, prec));
        }
        if 4 * r == -n_i {
            return (BigFloat::zero().with_prec(prec), BigFloat::from_i64_prec(-1, prec));
        }
        if 2 * r == n_i || 2 * r == -n_i {
            return (BigFloat::from_i64_prec(-1, prec), BigFloat::zero().with_prec(prec));
        }
        let work = prec as u64 + 40;
        let pi = BigFloat::pi(work as u32);
        // theta in fixed point with `work` fractional bits, |theta| <= pi
        let theta = pi * BigFloat::from_i64_prec(2 * r, work as u32)
            / BigFloat::from_i64_prec(n_i, work as u32);
        let t = {
            let q = theta.to_rational() * BigRational::from_integer(BigInt::one() << work);
            q.round().to_integer()
        };
        let t2 = (&t * &t) >> work;
        let one = BigInt::one() << work;
        let mut cos = one.clone();
        let mut sin = t.clone();
        let mut term_c = one;
        let mut term_s = t;
        let mut j: i64 = 1;
        loop {
            term_c = -((&term_c * &t2) >> work) / BigInt::from((2 * j - 1) * (2 * j));
            term_s = -((&term_s * &t2) >> work) / BigInt::from((2 * j) * (2 * j + 1));
            if term_c.is_zero() && term_s.is_zero() {
                break;
            }
            cos += &term_c;
            sin += &term_s;
            j += 1;
        }
        (
            BigFloat::new(cos, -(work as i64), prec),
            BigFloat::new(sin, -(work as i64), prec),
        )
    }

    fn pow2(e: i64, prec: u32) -> Self {
        BigFloat::new(BigInt::one(), e, prec)
    }

    fn mantissa_bits(prec: u32) -> u32 {
        prec
    }
}

impl FromPrimitive for BigFloat {
    fn from_i64(n: i64) -> Option<Self> {
        Some(BigFloat::from_bigint(BigInt::from(n), 0))
    }
    fn from_u64(n: u64) -> Option<Self> {
        Some(BigFloat::from_bigint(BigInt::from(n), 0))
    }
}

/// Complex number over a [`Real`].
pub type Cx<R> = Complex<R>;

pub fn cx_from_i64<R: Real>(v: i64, prec: u32) -> Cx<R> {
    Complex::new(R::from_i64_prec(v, prec), R::from_i64_prec(0, prec))
}

pub fn cx_abs2<R: Real>(z: &Cx<R>) -> R {
    z.re.clone() * z.re.clone() + z.im.clone() * z.im.clone()
}

pub fn cx_abs<R: Real>(z: &Cx<R>) -> R {
    cx_abs2(z).sqrt()
}

/// `e^{2πi k/n}`.
pub fn cis<R: Real>(k: i64, n: u64, prec: u32) -> Cx<R> {
    let (c, s) = R::cis_turns(k, n, prec);
    Complex::new(c, s)
}

/// Tolerance `2^{-bits/2}` used for "agrees to half the working precision".
pub fn half_tol<R: Real>(prec: u32) -> R {
    let bits = R::mantissa_bits(prec) as i64;
    R::pow2(-(bits / 2), prec)
}

/// Solves `A x = b` by Gaussian elimination with partial pivoting.
/// Returns `None` when a pivot vanishes exactly.
pub fn solve_complex<R: Real>(a: &[Vec<Cx<R>>], b: &[Cx<R>]) -> Option<Vec<Cx<R>>> {
    let n = a.len();
    let mut m: Vec<Vec<Cx<R>>> = a.to_vec();
    let mut rhs: Vec<Cx<R>> = b.to_vec();
    for col in 0..n {
        let mut best = col;
        let mut best_mag = cx_abs2(&m[col][col]);
        for (row, r) in m.iter().enumerate().skip(col + 1) {
            let mag = cx_abs2(&r[col]);
            if mag > best_mag {
                best = row;
                best_mag = mag;
            }
        }
        if best_mag.is_zero() {
            return None;
        }
        m.swap(col, best);
        rhs.swap(col, best);
        let piv = m[col][col].clone();
        for row in col + 1..n {
            if m[row][col].is_zero() {
                continue;
            }
            let f = m[row][col].clone() / piv.clone();
            for k in col..n {
                let t = f.clone() * m[col][k].clone();
                m[row][k] = m[row][k].clone() - t;
            }
            let t = f * rhs[col].clone();
            rhs[row] = rhs[row].clone() - t;
        }
    }
    let mut x = vec![Complex::new(R::zero(), R::zero()); n];
    for row in (0..n).rev() {
        let mut s = rhs[row].clone();
        for k in row + 1..n {
            s = s - m[row][k].clone() * x[k].clone();
        }
        x[row] = s / m[row][row].clone();
    }
    Some(x)
}

/// Inverse of a square complex matrix.
pub fn invert_complex<R: Real>(a: &[Vec<Cx<R>>], prec: u32) -> Option<Vec<Vec<Cx<R>>>> {
    let n = a.len();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let e: Vec<Cx<R>> = (0..n).map(|i| cx_from_i64(i64::from(i == j), prec)).collect();
        cols.push(solve_complex(a, &e)?);
    }
    Some((0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect())
}

fn horner<R: Real>(coeffs: &[Cx<R>], z: &Cx<R>) -> Cx<R> {
    let mut acc = coeffs[coeffs.len() - 1].clone();
    for c in coeffs[..coeffs.len() - 1].iter().rev() {
        acc = acc * z.clone() + c.clone();
    }
    acc
}

/// All complex roots of a monic integer polynomial (`coeffs` ascending,
/// leading coefficient 1) by Durand–Kerner iteration.
pub fn poly_roots<R: Real>(coeffs: &[BigInt], prec: u32) -> Option<Vec<Cx<R>>> {
    let deg = coeffs.len() - 1;
    if deg == 0 {
        return Some(Vec::new());
    }
    let c: Vec<Cx<R>> = coeffs
        .iter()
        .map(|v| Complex::new(R::from_rational(&BigRational::from_integer(v.clone()), prec), R::zero()))
        .collect();
    // Cauchy bound for the initial circle
    let mut bound = 1.0f64;
    for v in &coeffs[..deg] {
        let a = v.to_f64().unwrap_or(f64::MAX).abs();
        bound = bound.max(1.0 + a);
    }
    let radius = R::from_rational(
        &BigRational::from_float(bound.min(1e300)).unwrap_or_else(BigRational::one),
        prec,
    );
    let seed = Complex::new(
        R::from_rational(&BigRational::new(4.into(), 10.into()), prec),
        R::from_rational(&BigRational::new(9.into(), 10.into()), prec),
    );
    let mut z: Vec<Cx<R>> = Vec::with_capacity(deg);
    let mut p = Complex::new(radius.clone(), R::zero());
    for _ in 0..deg {
        p = p * seed.clone();
        z.push(p.clone());
    }
    let tol = R::pow2(-(R::mantissa_bits(prec) as i64) + 16, prec);
    let mut converged_rounds = 0;
    for _ in 0..5000 {
        let mut max_step = R::zero();
        for i in 0..deg {
            let mut den = Complex::new(R::from_i64_prec(1, prec), R::zero());
            for j in 0..deg {
                if i != j {
                    den = den * (z[i].clone() - z[j].clone());
                }
            }
            if den.re.is_zero() && den.im.is_zero() {
                return None;
            }
            let step = horner(&c, &z[i]) / den;
            let mag = cx_abs2(&step);
            let scale = cx_abs2(&z[i]) + R::from_i64_prec(1, prec);
            let rel = mag / scale;
            if rel > max_step {
                max_step = rel;
            }
            z[i] = z[i].clone() - step;
        }
        if max_step < tol.clone() * tol.clone() {
            converged_rounds += 1;
            if converged_rounds >= 2 {
                return Some(z);
            }
        }
    }
    None
}

/// Characteristic polynomial `det(xI - A)` of an integer matrix (ascending
/// coefficients), by the Faddeev–LeVerrier recursion over the rationals.
pub fn charpoly(a: &[Vec<BigInt>]) -> Vec<BigInt> {
    let n = a.len();
    let ar: Vec<Vec<BigRational>> = a
        .iter()
        .map(|r| r.iter().map(|v| BigRational::from_integer(v.clone())).collect())
        .collect();
    let mut c = vec![BigRational::zero(); n + 1];
    c[n] = BigRational::one();
    let mut m: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = vec![vec![BigRational::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = BigRational::zero();
                for t in 0..n {
                    if !ar[i][t].is_zero() && !m[t][j].is_zero() {
                        s += &ar[i][t] * &m[t][j];
                    }
                }
                if i == j {
                    s += &c[n - k + 1];
                }
                next[i][j] = s;
            }
        }
        m = next;
        let mut tr = BigRational::zero();
        for i in 0..n {
            for t in 0..n {
                tr += &ar[i][t] * &m[t][i];
            }
        }
        c[n - k] = -tr / BigRational::from_integer(BigInt::from(k as i64));
    }
    c.into_iter().map(|v| v.to_integer()).collect()
}

/// Common eigenvectors of a commuting family of integer matrices acting on
/// column vectors, normalized so that coordinate 0 equals 1.
///
/// A generic integer combination with coefficients drawn from `rng` is
/// diagonalized; combinations with clustered eigenvalues are redrawn.
pub fn common_eigenrows<R: Real, G: rand::Rng>(
    mats: &[Vec<Vec<i64>>],
    prec: u32,
    rng: &mut G,
) -> Option<Vec<Vec<Cx<R>>>> {
    let n = mats.first()?.len();
    for _attempt in 0..12 {
        let coef: Vec<i64> = mats.iter().map(|_| rng.gen_range(1..=97)).collect();
        let mut comb = vec![vec![BigInt::zero(); n]; n];
        for (m, c) in mats.iter().zip(&coef) {
            for i in 0..n {
                for j in 0..n {
                    comb[i][j] += BigInt::from(m[i][j] * c);
                }
            }
        }
        let cp = charpoly(&comb);
        let Some(roots) = poly_roots::<R>(&cp, prec) else { continue };
        // require well separated eigenvalues
        let sep = R::pow2(-(R::mantissa_bits(prec) as i64) / 4, prec);
        let mut ok = true;
        for i in 0..n {
            for j in i + 1..n {
                if cx_abs(&(roots[i].clone() - roots[j].clone())) < sep {
                    ok = false;
                }
            }
        }
        if !ok {
            continue;
        }
        let combc: Vec<Vec<Cx<R>>> = comb
            .iter()
            .map(|r| {
                r.iter()
                    .map(|v| Complex::new(R::from_rational(&BigRational::from_integer(v.clone()), prec), R::zero()))
                    .collect()
            })
            .collect();
        let shift = R::pow2(-((R::mantissa_bits(prec) as i64) * 3 / 4), prec);
        let mut rows = Vec::with_capacity(n);
        for lam in &roots {
            let mu = lam.clone() + Complex::new(shift.clone(), shift.clone());
            let mut shifted = combc.clone();
            for (i, row) in shifted.iter_mut().enumerate() {
                row[i] = row[i].clone() - mu.clone();
            }
            let mut v: Vec<Cx<R>> = (0..n).map(|i| cx_from_i64((i as i64 % 7) + 1, prec)).collect();
            let mut good = true;
            for _ in 0..3 {
                match solve_complex(&shifted, &v) {
                    Some(x) => {
                        let mut big = R::zero();
                        for e in &x {
                            let m = cx_abs2(e);
                            if m > big {
                                big = m;
                            }
                        }
                        let s = big.sqrt();
                        v = x.into_iter().map(|e| e / Complex::new(s.clone(), R::zero())).collect();
                    }
                    None => {
                        good = false;
                        break;
                    }
                }
            }
            if !good || cx_abs2(&v[0]).is_zero() {
                ok = false;
                break;
            }
            let v0 = v[0].clone();
            rows.push(v.into_iter().map(|e| e / v0.clone()).collect());
        }
        if ok {
            return Some(rows);
        }
    }
    None
}

/// Best rational approximation with denominator at most `bound`.
pub fn limit_denominator(x: &BigRational, bound: &BigInt) -> BigRational {
    use num_integer::Integer;
    if x.denom() <= bound {
        return x.clone();
    }
    let (mut p0, mut q0, mut p1, mut q1) = (BigInt::zero(), BigInt::one(), BigInt::one(), BigInt::zero());
    let mut n = x.numer().clone();
    let mut d = x.denom().clone();
    loop {
        let a = n.div_floor(&d);
        let q2 = &q0 + &a * &q1;
        if &q2 > bound {
            break;
        }
        let p2 = &p0 + &a * &p1;
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
        let r = &n - &a * &d;
        n = std::mem::replace(&mut d, r);
        if d.is_zero() {
            break;
        }
    }
    let k = (bound - &q0).div_floor(&q1);
    let b1 = BigRational::new(&p0 + &k * &p1, &q0 + &k * &q1);
    let b2 = BigRational::new(p1, q1);
    if (&b2 - x).abs() <= (&b1 - x).abs() {
        b2
    } else {
        b1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_to_many_digits() {
        let p = BigFloat::pi(200);
        let diff = (p.to_f64_lossy() - std::f64::consts::PI).abs();
        assert!(diff < 1e-15);
        // 2^-150 agreement with a higher precision computation
        let q = BigFloat::pi(400);
        let d = (p - q).abs();
        assert!(d < BigFloat::pow2(-190, 200));
    }

    #[test]
    fn sqrt_two_squares_back() {
        let two = BigFloat::from_i64_prec(2, 192);
        let r = two.sqrt();
        let err = (r.clone() * r - BigFloat::from_i64_prec(2, 192)).abs();
        assert!(err < BigFloat::pow2(-185, 192));
    }

    #[test]
    fn cis_matches_f64() {
        for (k, n) in [(1, 16), (3, 5), (-2, 7), (5, 12)] {
            let (c, s) = BigFloat::cis_turns(k, n, 192);
            let (cf, sf) = f64::cis_turns(k, n, 53);
            assert!((c.to_f64_lossy() - cf).abs() < 1e-14);
            assert!((s.to_f64_lossy() - sf).abs() < 1e-14);
            let one = c.clone() * c + s.clone() * s;
            assert!((one - BigFloat::from_i64_prec(1, 192)).abs() < BigFloat::pow2(-180, 192));
        }
    }

    #[test]
    fn charpoly_of_fibonacci_matrix() {
        let a = vec![vec![BigInt::from(0), BigInt::from(1)], vec![BigInt::from(1), BigInt::from(1)]];
        let cp = charpoly(&a);
        assert_eq!(cp, vec![BigInt::from(-1), BigInt::from(-1), BigInt::from(1)]);
        let roots = poly_roots::<BigFloat>(&cp, 192).unwrap();
        let mut re: Vec<f64> = roots.iter().map(|z| z.re.to_f64_lossy()).collect();
        re.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((re[1] - 1.618033988749895).abs() < 1e-14);
        assert!((re[0] + 0.618033988749895).abs() < 1e-14);
    }

    #[test]
    fn limit_denominator_recovers_simple_fractions() {
        let x = BigRational::new(BigInt::from(333_333_333_333i64), BigInt::from(1_000_000_000_000i64));
        assert_eq!(limit_denominator(&x, &BigInt::from(1000)), BigRational::new(1.into(), 3.into()));
        let y = BigRational::new(BigInt::from(-7), BigInt::from(2));
        assert_eq!(limit_denominator(&y, &BigInt::from(10)), y);
    }

    #[test]
    fn complex_solve_small_system() {
        let a: Vec<Vec<Cx<f64>>> = vec![
            vec![Complex::new(2.0, 0.0), Complex::new(1.0, 1.0)],
            vec![Complex::new(0.0, -1.0), Complex::new(3.0, 0.0)],
        ];
        let x = [Complex::new(1.0, 2.0), Complex::new(-1.0, 0.5)];
        let b: Vec<Cx<f64>> = (0..2).map(|i| a[i][0] * x[0] + a[i][1] * x[1]).collect();
        let y = solve_complex(&a, &b).unwrap();
        for i in 0..2 {
            assert!((y[i] - x[i]).norm() < 1e-12);
        }
    }
}
