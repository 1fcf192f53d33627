//! Fusion rings, quantum dimensions, and the exact table of Verlinde-algebra
//! irreps `ρ_w(q) = S_qw / S_0w`.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::RunConfig;
use crate::cyclo::{canonical_conductor, reconstruct_with, totient, units, vandermonde_inverse, Cyclotomic};
use crate::error::{Error, Result};
use crate::numeric::{common_eigenrows, half_tol, BigFloat, Cx, Real};

/// Fusion rules `N_pq^r` with labels and conformal weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FusionData {
    name: String,
    labels: Vec<String>,
    weights: Vec<BigRational>,
    rank: usize,
    n: Vec<u32>,
}

impl FusionData {
    /// `fusion` is the dense tensor indexed `(p * rank + q) * rank + r`.
    pub fn new(name: impl Into<String>, labels: Vec<String>, weights: Vec<BigRational>, fusion: Vec<u32>) -> Result<Self> {
        let rank = labels.len();
        if rank == 0 {
            return Err(Error::Validation("a model needs at least the vacuum".into()));
        }
        if weights.len() != rank {
            return Err(Error::Validation(format!("{} labels but {} weights", rank, weights.len())));
        }
        if fusion.len() != rank * rank * rank {
            return Err(Error::Validation(format!("fusion tensor has {} entries, expected {}", fusion.len(), rank.pow(3))));
        }
        let mut seen = HashSet::new();
        for l in &labels {
            if l.is_empty() || !seen.insert(l.as_str()) {
                return Err(Error::Validation(format!("label '{l}' is empty or repeated")));
            }
        }
        Ok(FusionData { name: name.into(), labels, weights, rank, n: fusion })
    }

    /// Builds the tensor from sparse entries `(i, j, k, m)`, mirrored in the
    /// first two indices.
    pub fn from_entries(
        name: impl Into<String>,
        labels: Vec<String>,
        weights: Vec<BigRational>,
        entries: &[(usize, usize, usize, u32)],
    ) -> Result<Self> {
        let rank = labels.len();
        let mut fusion = vec![0u32; rank * rank * rank];
        for &(i, j, k, m) in entries {
            if i >= rank || j >= rank || k >= rank {
                return Err(Error::Validation(format!("fusion entry [{i}, {j}, {k}] out of range")));
            }
            fusion[(i * rank + j) * rank + k] = m;
            fusion[(j * rank + i) * rank + k] = m;
        }
        Self::new(name, labels, weights, fusion)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn weights(&self) -> &[BigRational] {
        &self.weights
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    #[inline]
    pub fn n(&self, p: usize, q: usize, r: usize) -> u32 {
        self.n[(p * self.rank + q) * self.rank + r]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Fusion matrix `N(p)` with entries `[q][r] = N_pq^r`.
    pub fn matrix(&self, p: usize) -> Vec<Vec<i64>> {
        (0..self.rank).map(|q| (0..self.rank).map(|r| self.n(p, q, r) as i64).collect()).collect()
    }

    /// Nonzero `(r, N_pq^r)`.
    pub fn products(&self, p: usize, q: usize) -> impl Iterator<Item = (usize, u32)> + '_ {
        (0..self.rank).filter_map(move |r| {
            let m = self.n(p, q, r);
            (m > 0).then_some((r, m))
        })
    }

    /// The unique `q` with `N_pq^0 = 1`, if any.
    pub fn charge_conjugate(&self, p: usize) -> Option<usize> {
        let hits: Vec<usize> = (0..self.rank).filter(|&q| self.n(p, q, 0) > 0).collect();
        match hits.as_slice() {
            [q] if self.n(p, *q, 0) == 1 => Some(*q),
            _ => None,
        }
    }

    /// Least common multiple of the weight denominators.
    pub fn conductor(&self) -> u32 {
        let mut n = num_bigint::BigInt::one();
        for h in &self.weights {
            n = n.lcm(h.denom());
        }
        n.to_u32().unwrap_or(u32::MAX)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Axiom {
    Vacuum,
    Commutativity,
    Associativity,
    ChargeConjugation,
    VacuumWeight,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axiom::Vacuum => "vacuum",
            Axiom::Commutativity => "commutativity",
            Axiom::Associativity => "associativity",
            Axiom::ChargeConjugation => "charge-conjugation",
            Axiom::VacuumWeight => "vacuum-weight",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub axiom: Axiom,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.axiom, self.detail)
    }
}

/// Every violated fusion-ring axiom; empty means valid.
pub fn validate(fd: &FusionData) -> Vec<Violation> {
    let k = fd.rank;
    let l = |i: usize| fd.labels[i].as_str();
    let mut out = Vec::new();
    for q in 0..k {
        for r in 0..k {
            let want = u32::from(q == r);
            if fd.n(0, q, r) != want {
                out.push(Violation {
                    axiom: Axiom::Vacuum,
                    detail: format!("N_{{0,{}}}^{} = {}, expected {}", l(q), l(r), fd.n(0, q, r), want),
                });
            }
        }
    }
    for p in 0..k {
        for q in p + 1..k {
            for r in 0..k {
                if fd.n(p, q, r) != fd.n(q, p, r) {
                    out.push(Violation {
                        axiom: Axiom::Commutativity,
                        detail: format!("N_{{{},{}}}^{} differs from N_{{{},{}}}^{}", l(p), l(q), l(r), l(q), l(p), l(r)),
                    });
                }
            }
        }
    }
    'assoc: for p in 0..k {
        for q in 0..k {
            for r in 0..k {
                for t in 0..k {
                    let lhs: u64 = (0..k).map(|s| fd.n(p, q, s) as u64 * fd.n(s, r, t) as u64).sum();
                    let rhs: u64 = (0..k).map(|s| fd.n(q, r, s) as u64 * fd.n(p, s, t) as u64).sum();
                    if lhs != rhs {
                        out.push(Violation {
                            axiom: Axiom::Associativity,
                            detail: format!("({}{}){} and {}({}{}) differ at {}", l(p), l(q), l(r), l(p), l(q), l(r), l(t)),
                        });
                        break 'assoc;
                    }
                }
            }
        }
    }
    for p in 0..k {
        let Some(pb) = fd.charge_conjugate(p) else {
            out.push(Violation {
                axiom: Axiom::ChargeConjugation,
                detail: format!("{} has no unique conjugate", l(p)),
            });
            continue;
        };
        if fd.charge_conjugate(pb) != Some(p) {
            out.push(Violation {
                axiom: Axiom::ChargeConjugation,
                detail: format!("conjugation is not an involution at {}", l(p)),
            });
        }
    }
    if !fd.weights[0].is_zero() {
        out.push(Violation { axiom: Axiom::VacuumWeight, detail: format!("h_0 = {}", fd.weights[0]) });
    }
    out
}

/// Quantum dimensions together with notes on any escalation needed.
#[derive(Clone, Debug)]
pub struct Dims {
    pub dims: Vec<Cyclotomic>,
    pub diagnostics: Vec<String>,
}

fn divisors(n: u32) -> Vec<u32> {
    let mut d: Vec<u32> = (1..=n).filter(|k| n.is_multiple_of(*k) && canonical_conductor(*k) == *k).collect();
    d.sort_by_key(|&m| (totient(m), m));
    d
}

fn dims_identity(fd: &FusionData, d: &[Cyclotomic]) -> bool {
    if d.first() != Some(&Cyclotomic::one()) {
        return false;
    }
    let k = fd.rank;
    for p in 0..k {
        for q in p..k {
            let lhs: Cyclotomic = fd.products(p, q).map(|(r, m)| &Cyclotomic::from_int(m as i64) * &d[r]).sum();
            if lhs != &d[p] * &d[q] {
                return false;
            }
        }
    }
    true
}

fn near_integer(x: &BigFloat, tol: &BigFloat) -> Option<i64> {
    let r = x.to_rational().round().to_integer();
    let back = BigFloat::from_rational(&BigRational::from_integer(r.clone()), x.precision());
    ((back - x.clone()).abs() < *tol).then(|| r.to_i64()).flatten()
}

/// Index of the Perron-Frobenius row: the eigen-row with the largest real
/// part sum. Errors unless it is real and positive.
fn pf_row(rows: &[Vec<Cx<BigFloat>>], prec: u32) -> Result<usize> {
    let tol = half_tol::<BigFloat>(prec);
    let mut best: Option<(usize, BigFloat)> = None;
    for (i, r) in rows.iter().enumerate() {
        let s = r.iter().fold(BigFloat::zero(), |a, z| a + z.re.clone());
        if best.as_ref().is_none_or(|(_, b)| s > *b) {
            best = Some((i, s));
        }
    }
    let (i, _) = best.ok_or_else(|| Error::Reconstruction("no eigen-rows".into()))?;
    for z in &rows[i] {
        if z.im.abs() > tol || z.re <= tol {
            return Err(Error::Validation(
                "Perron-Frobenius vector is not real and positive (non-unitary input is unsupported)".into(),
            ));
        }
    }
    Ok(i)
}

const ASSIGNMENT_CAP: usize = 1 << 18;

/// Tries to reconstruct `d` in Q[ζ_m] by assigning an eigen-row to each
/// conjugate σ_ℓ(d), ℓ ∈ (Z/m)^× / ±1.
fn dims_at(
    fd: &FusionData,
    rows: &[Vec<Cx<BigFloat>>],
    pf: usize,
    m: u32,
    prec: u32,
    cfg: &RunConfig,
) -> Option<Vec<Cyclotomic>> {
    let tol = half_tol::<BigFloat>(prec);
    let us = units(m);
    let reps: Vec<u32> = us.iter().copied().filter(|&l| m <= 2 || l < m - l).collect();
    let rep_of = |u: u32| if m <= 2 { u } else { u.min(m - u) };
    let pfr = &rows[pf];
    let ints: Vec<Option<i64>> = pfr.iter().map(|z| near_integer(&z.re, &tol)).collect();
    let real_rows: Vec<usize> = (0..rows.len())
        .filter(|&w| {
            rows[w].iter().zip(&ints).all(|(z, i)| {
                z.im.abs() < tol
                    && i.is_none_or(|v| (z.re.clone() - BigFloat::from_i64_prec(v, prec)).abs() < tol)
            })
        })
        .collect();
    let choices: Vec<Vec<usize>> = reps.iter().map(|&l| if l == 1 { vec![pf] } else { real_rows.clone() }).collect();
    let total = choices.iter().try_fold(1usize, |a, c| a.checked_mul(c.len()))?;
    if total == 0 || total > ASSIGNMENT_CAP {
        return None;
    }
    let inv = vandermonde_inverse::<BigFloat>(m, prec).ok()?;
    let mut idx = vec![0usize; reps.len()];
    for _ in 0..total {
        let assign: BTreeMap<u32, usize> = reps.iter().enumerate().map(|(k, &l)| (l, choices[k][idx[k]])).collect();
        let mut dims = Vec::with_capacity(fd.rank);
        let mut ok = true;
        for p in 0..fd.rank {
            let conj: Vec<Cx<BigFloat>> = us.iter().map(|&u| rows[assign[&rep_of(u)]][p].clone()).collect();
            match reconstruct_with(&inv, &conj, m, &cfg.denom_bound, prec) {
                Ok(x) => dims.push(x),
                Err(_) => {
                    ok = false;
                    break;
                }
            }
        }
        if ok && dims_identity(fd, &dims) {
            return Some(dims);
        }
        // odometer increment
        for (k, c) in idx.iter_mut().zip(&choices) {
            *k += 1;
            if *k < c.len() {
                break;
            }
            *k = 0;
        }
    }
    None
}

/// Exact quantum dimensions: the Perron-Frobenius eigenvector, reconstructed
/// from its Galois conjugates among the numeric common eigenvectors and then
/// verified against `Σ_r N_pq^r d_r = d_p d_q`.
pub fn quantum_dims(fd: &FusionData, cfg: &RunConfig) -> Result<Dims> {
    let base = canonical_conductor(fd.conductor().max(1));
    let mats: Vec<Vec<Vec<i64>>> = (0..fd.rank).map(|p| fd.matrix(p)).collect();
    let mut diagnostics = Vec::new();
    let mut conductors = vec![base];
    for &k in &cfg.conductor_multiples {
        let c = canonical_conductor(base.saturating_mul(k));
        if c <= crate::cyclo::MAX_CONDUCTOR && !conductors.contains(&c) {
            conductors.push(c);
        }
    }
    let mut eigen_cache: Vec<(u32, Vec<Vec<Cx<BigFloat>>>, usize)> = Vec::new();
    for (ci, &n) in conductors.iter().enumerate() {
        let mut prec = cfg.precision;
        while prec <= cfg.max_precision.max(cfg.precision) {
            if !eigen_cache.iter().any(|(p, _, _)| *p == prec) {
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                if let Some(rows) = common_eigenrows::<BigFloat, _>(&mats, prec, &mut rng) {
                    let pf = pf_row(&rows, prec)?;
                    eigen_cache.push((prec, rows, pf));
                }
            }
            if let Some((_, rows, pf)) = eigen_cache.iter().find(|(p, _, _)| *p == prec) {
                for m in divisors(n) {
                    if let Some(d) = dims_at(fd, rows, *pf, m, prec, cfg) {
                        if prec != cfg.precision || ci > 0 {
                            diagnostics.push(format!("dimensions needed precision {prec} and conductor {n}"));
                        }
                        return Ok(Dims { dims: d, diagnostics });
                    }
                }
            }
            prec *= 2;
        }
        diagnostics.push(format!("conductor {n} failed, escalating"));
    }
    Err(Error::Reconstruction(format!(
        "quantum dimensions of '{}' not found up to precision {} and conductors {:?}",
        fd.name, cfg.max_precision, conductors
    )))
}

/// Fusion data enriched with the exact irreps of its Verlinde algebra.
#[derive(Clone, Debug)]
pub struct ModularData {
    base: FusionData,
    conductor: u32,
    field_conductor: u32,
    rho: Vec<Vec<Cyclotomic>>,
    qdims: Vec<Cyclotomic>,
    s2: Vec<Cyclotomic>,
    global_dim: Cyclotomic,
    omegas: Vec<Cyclotomic>,
    conj: Vec<usize>,
    diagnostics: Vec<String>,
}

impl ModularData {
    pub fn base(&self) -> &FusionData {
        &self.base
    }
    pub fn name(&self) -> &str {
        self.base.name()
    }
    pub fn rank(&self) -> usize {
        self.base.rank
    }
    pub fn labels(&self) -> &[String] {
        self.base.labels()
    }
    pub fn label(&self, p: usize) -> &str {
        &self.base.labels[p]
    }
    #[inline]
    pub fn n(&self, p: usize, q: usize, r: usize) -> u32 {
        self.base.n(p, q, r)
    }
    /// Conductor N from the weights.
    pub fn conductor(&self) -> u32 {
        self.conductor
    }
    /// Smallest conductor containing N and every ρ entry.
    pub fn field_conductor(&self) -> u32 {
        self.field_conductor
    }
    /// `ρ_w(q)`.
    #[inline]
    pub fn rho(&self, w: usize, q: usize) -> &Cyclotomic {
        &self.rho[w][q]
    }
    pub fn rho_table(&self) -> &[Vec<Cyclotomic>] {
        &self.rho
    }
    pub fn d(&self, p: usize) -> &Cyclotomic {
        &self.qdims[p]
    }
    pub fn qdims(&self) -> &[Cyclotomic] {
        &self.qdims
    }
    /// `S_0p²`.
    pub fn s2(&self, p: usize) -> &Cyclotomic {
        &self.s2[p]
    }
    pub fn global_dim(&self) -> &Cyclotomic {
        &self.global_dim
    }
    pub fn weight(&self, p: usize) -> &BigRational {
        &self.base.weights[p]
    }
    /// `ω_p = e^{2πi h_p}`.
    pub fn omega(&self, p: usize) -> &Cyclotomic {
        &self.omegas[p]
    }
    pub fn charge_conjugate(&self, p: usize) -> usize {
        self.conj[p]
    }
    pub fn diagnostics(&self) -> &[String] {
        &self.diagnostics
    }
}

fn omegas_of(fd: &FusionData) -> Vec<Cyclotomic> {
    fd.weights.iter().map(Cyclotomic::exp_2pi_i).collect()
}

/// `S_pq / S_00 = Σ_r N_pq^r d_r ω_p ω_q / ω_r`.
fn ver3_matrix(fd: &FusionData, d: &[Cyclotomic], om: &[Cyclotomic]) -> Vec<Vec<Cyclotomic>> {
    let k = fd.rank;
    let mut m = vec![vec![Cyclotomic::zero(); k]; k];
    for p in 0..k {
        for q in p..k {
            let pq = &om[p] * &om[q];
            let v: Cyclotomic =
                fd.products(p, q).map(|(r, c)| &(&Cyclotomic::from_int(c as i64) * &d[r]) * &(&pq * &om[r].conj())).sum();
            m[p][q] = v.clone();
            m[q][p] = v;
        }
    }
    m
}

fn check_verrep(fd: &FusionData, rho: &[Vec<Cyclotomic>]) -> Result<()> {
    let k = fd.rank;
    for (w, row) in rho.iter().enumerate() {
        for p in 0..k {
            for q in p..k {
                let lhs: Cyclotomic = fd.products(p, q).map(|(r, c)| &Cyclotomic::from_int(c as i64) * &row[r]).sum();
                if lhs != &row[p] * &row[q] {
                    return Err(Error::Identity(format!(
                        "irrep {} is not multiplicative at ({}, {})",
                        fd.labels[w], fd.labels[p], fd.labels[q]
                    )));
                }
            }
        }
    }
    Ok(())
}

fn finish(
    fd: &FusionData,
    rho: Vec<Vec<Cyclotomic>>,
    qdims: Vec<Cyclotomic>,
    s2: Vec<Cyclotomic>,
    omegas: Vec<Cyclotomic>,
    mut diagnostics: Vec<String>,
    cfg: &RunConfig,
) -> Result<ModularData> {
    let k = fd.rank;
    check_verrep(fd, &rho)?;
    let mut seen = HashSet::new();
    for (w, row) in rho.iter().enumerate() {
        if !seen.insert(row.clone()) {
            return Err(Error::Validation(format!("irrep of {} duplicates another irrep", fd.labels[w])));
        }
        if row[0] != Cyclotomic::one() {
            return Err(Error::Identity(format!("ρ_{}(0) ≠ 1", fd.labels[w])));
        }
        for (q, x) in row.iter().enumerate() {
            if !x.is_algebraic_integer() {
                return Err(Error::Identity(format!("ρ_{}({}) = {} is not an algebraic integer", fd.labels[w], fd.labels[q], x)));
            }
            let bound = &qdims[q] * &qdims[q];
            if x.abs_squared().cmp_real(&bound, cfg.precision) == Some(std::cmp::Ordering::Greater) {
                return Err(Error::Identity(format!("|ρ_{}({})| exceeds d_{}", fd.labels[w], fd.labels[q], fd.labels[q])));
            }
        }
    }
    let total: Cyclotomic = s2.iter().cloned().sum();
    if total != Cyclotomic::one() {
        return Err(Error::Validation(format!("vacuum column squares sum to {total}, not 1")));
    }
    for (p, d) in qdims.iter().enumerate() {
        if d.cmp_real(&Cyclotomic::zero(), cfg.precision) != Some(std::cmp::Ordering::Greater) {
            return Err(Error::Validation(format!("d_{} is not positive", fd.labels[p])));
        }
        if d.cmp_real(&Cyclotomic::one(), cfg.precision) == Some(std::cmp::Ordering::Less) {
            diagnostics.push(format!("d_{} < 1", fd.labels[p]));
        }
    }
    let global_dim: Cyclotomic = qdims.iter().map(|d| d * d).sum();
    let conductor = canonical_conductor(fd.conductor().max(1));
    let mut field_conductor = conductor as u64;
    for row in &rho {
        for x in row {
            field_conductor = field_conductor.lcm(&(x.conductor() as u64));
        }
    }
    let field_conductor = canonical_conductor(field_conductor as u32);
    if field_conductor != conductor {
        diagnostics.push(format!("irrep entries need conductor {field_conductor} beyond the weight conductor {conductor}"));
    }
    let conj: Vec<usize> = (0..k)
        .map(|p| fd.charge_conjugate(p).ok_or_else(|| Error::Validation(format!("{} has no conjugate", fd.labels[p]))))
        .collect::<Result<_>>()?;
    let md = ModularData {
        base: fd.clone(),
        conductor,
        field_conductor,
        rho,
        qdims,
        s2,
        global_dim,
        omegas,
        conj,
        diagnostics,
    };
    if !verlinde_check(&md) {
        return Err(Error::Identity("Verlinde formula does not reproduce the fusion rules".into()));
    }
    Ok(md)
}

fn ensure_valid(fd: &FusionData) -> Result<()> {
    let v = validate(fd);
    if v.is_empty() {
        Ok(())
    } else {
        Err(Error::Validation(v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")))
    }
}

/// Exact modular data from fusion rules and weights.
pub fn build_modular_data(fd: &FusionData, cfg: &RunConfig) -> Result<ModularData> {
    ensure_valid(fd)?;
    let Dims { dims, diagnostics } = quantum_dims(fd, cfg)?;
    let om = omegas_of(fd);
    let m = ver3_matrix(fd, &dims, &om);
    let k = fd.rank;
    let mut rho = vec![vec![Cyclotomic::zero(); k]; k];
    for w in 0..k {
        let inv = dims[w].inverse()?;
        for q in 0..k {
            rho[w][q] = &m[q][w] * &inv;
        }
    }
    let global: Cyclotomic = dims.iter().map(|d| d * d).sum();
    let ginv = global.inverse()?;
    let s2: Vec<Cyclotomic> = dims.iter().map(|d| &(d * d) * &ginv).collect();
    finish(fd, rho, dims, s2, om, diagnostics, cfg)
}

/// Modular data from fusion rules plus an explicit S-matrix; the weight
/// formula for `S_pq / S_00` is then only checked.
pub fn build_modular_data_with_s(fd: &FusionData, s: &[Vec<Cyclotomic>], cfg: &RunConfig) -> Result<ModularData> {
    ensure_valid(fd)?;
    let k = fd.rank;
    if s.len() != k || s.iter().any(|r| r.len() != k) {
        return Err(Error::Validation(format!("S-matrix must be {k}×{k}")));
    }
    let mut rho = vec![vec![Cyclotomic::zero(); k]; k];
    for w in 0..k {
        let inv = s[0][w]
            .inverse()
            .map_err(|_| Error::Validation(format!("S_0,{} vanishes", fd.labels[w])))?;
        for q in 0..k {
            rho[w][q] = &s[q][w] * &inv;
        }
    }
    let dims = rho[0].clone();
    if !dims_identity(fd, &dims) {
        return Err(Error::Identity("S-matrix dimensions do not satisfy the fusion rules".into()));
    }
    let s2: Vec<Cyclotomic> = (0..k).map(|p| s[0][p].abs_squared()).collect();
    let om = omegas_of(fd);
    let m = ver3_matrix(fd, &dims, &om);
    let s00 = s[0][0].inverse()?;
    let mut diagnostics = Vec::new();
    let direct = (0..k).all(|p| (0..k).all(|q| &s[p][q] * &s00 == m[p][q]));
    if !direct {
        let conj = (0..k).all(|p| (0..k).all(|q| (&s[p][q] * &s00).conj() == m[p][q]));
        if !conj {
            return Err(Error::Identity("S-matrix disagrees with the weight formula for S_pq/S_00".into()));
        }
        diagnostics.push("S-matrix matches the weight formula up to complex conjugation".into());
    }
    finish(fd, rho, dims, s2, om, diagnostics, cfg)
}

/// `Σ_w s2[w] ρ_w(p) ρ_w(q) conj(ρ_w(r)) = N_pq^r` for all triples.
pub fn verlinde_check(md: &ModularData) -> bool {
    let k = md.rank();
    let weighted: Vec<Vec<Cyclotomic>> = (0..k).map(|w| md.rho[w].iter().map(|x| x * &md.s2[w]).collect()).collect();
    let conj: Vec<Vec<Cyclotomic>> = md.rho.iter().map(|r| r.iter().map(|x| x.conj()).collect()).collect();
    for p in 0..k {
        for q in p..k {
            for r in 0..k {
                let v: Cyclotomic = (0..k).map(|w| &(&weighted[w][p] * &md.rho[w][q]) * &conj[w][r]).sum();
                if v != Cyclotomic::from_int(md.n(p, q, r) as i64) {
                    return false;
                }
            }
        }
    }
    true
}

/// For every `p, q` with `|ρ_p(q)| = d_q`: `N_pq^r > 0` implies
/// `ω_p ω_q / ω_r = ρ_p(q) / d_q`.
pub fn omch_check(md: &ModularData) -> bool {
    let k = md.rank();
    for p in 0..k {
        for q in 0..k {
            let x = &md.rho[p][q];
            if x.abs_squared() != &md.qdims[q] * &md.qdims[q] {
                continue;
            }
            let ratio = x / &md.qdims[q];
            for (r, _) in md.base.products(p, q) {
                if &(&md.omegas[p] * &md.omegas[q]) * &md.omegas[r].conj() != ratio {
                    return false;
                }
            }
        }
    }
    true
}

/// Exact `Σ_r N_pq^r ρ_w(r) = ρ_w(p) ρ_w(q)` over all `w, p, q`.
pub fn verrep_check(md: &ModularData) -> bool {
    check_verrep(&md.base, &md.rho).is_ok()
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use num_bigint::BigInt;

    pub(crate) fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    pub(crate) fn ising() -> FusionData {
        FusionData::from_entries(
            "ising",
            vec!["0".into(), "eps".into(), "sigma".into()],
            vec![q(0, 1), q(1, 2), q(1, 16)],
            &[(0, 0, 0, 1), (0, 1, 1, 1), (0, 2, 2, 1), (1, 1, 0, 1), (1, 2, 2, 1), (2, 2, 0, 1), (2, 2, 1, 1)],
        )
        .unwrap()
    }

    pub(crate) fn fibonacci() -> FusionData {
        FusionData::from_entries(
            "fibonacci",
            vec!["0".into(), "tau".into()],
            vec![q(0, 1), q(2, 5)],
            &[(0, 0, 0, 1), (0, 1, 1, 1), (1, 1, 0, 1), (1, 1, 1, 1)],
        )
        .unwrap()
    }

    pub(crate) fn toric() -> FusionData {
        let mut e = Vec::new();
        for a in 0..4usize {
            for b in 0..4usize {
                e.push((a, b, a ^ b, 1));
            }
        }
        FusionData::from_entries("toric", vec!["1".into(), "e".into(), "m".into(), "f".into()], vec![q(0, 1), q(0, 1), q(0, 1), q(1, 2)], &e)
            .unwrap()
    }

    fn sqrt2() -> Cyclotomic {
        &Cyclotomic::root_of_unity(1, 8) - &Cyclotomic::root_of_unity(3, 8)
    }

    #[test]
    fn catalog_style_data_validates() {
        assert!(validate(&ising()).is_empty());
        assert!(validate(&fibonacci()).is_empty());
        assert!(validate(&toric()).is_empty());
    }

    #[test]
    fn broken_vacuum_is_reported() {
        let bad = FusionData::from_entries(
            "bad",
            vec!["0".into(), "a".into(), "b".into()],
            vec![q(0, 1), q(0, 1), q(0, 1)],
            &[(0, 0, 0, 1), (0, 1, 1, 1), (0, 2, 2, 1), (0, 1, 2, 1), (1, 1, 0, 1), (2, 2, 0, 1)],
        )
        .unwrap();
        let v = validate(&bad);
        assert!(v.iter().any(|x| x.axiom == Axiom::Vacuum));
    }

    #[test]
    fn quantum_dims_examples() {
        let cfg = RunConfig::default();
        let d = quantum_dims(&ising(), &cfg).unwrap().dims;
        assert_eq!(d, vec![Cyclotomic::one(), Cyclotomic::one(), sqrt2()]);
        let f = quantum_dims(&fibonacci(), &cfg).unwrap().dims;
        let phi = &(&Cyclotomic::one() + &Cyclotomic::root_of_unity(1, 5)) + &Cyclotomic::root_of_unity(4, 5);
        assert_eq!(f, vec![Cyclotomic::one(), phi]);
        let triv = FusionData::from_entries("trivial", vec!["0".into()], vec![q(0, 1)], &[(0, 0, 0, 1)]).unwrap();
        assert_eq!(quantum_dims(&triv, &cfg).unwrap().dims, vec![Cyclotomic::one()]);
    }

    #[test]
    fn ising_rho_table() {
        let md = build_modular_data(&ising(), &RunConfig::default()).unwrap();
        let one = Cyclotomic::one();
        let m1 = Cyclotomic::from_int(-1);
        assert_eq!(md.rho_table()[0], vec![one.clone(), one.clone(), sqrt2()]);
        assert_eq!(md.rho_table()[1], vec![one.clone(), one.clone(), -sqrt2()]);
        assert_eq!(md.rho_table()[2], vec![one.clone(), m1, Cyclotomic::zero()]);
        assert_eq!(md.s2(0), &Cyclotomic::from_frac(1, 4));
        assert_eq!(md.s2(2), &Cyclotomic::from_frac(1, 2));
        assert_eq!(md.global_dim(), &Cyclotomic::from_int(4));
        assert!(verlinde_check(&md));
        assert!(omch_check(&md));
        assert_eq!(md.omega(2), &Cyclotomic::root_of_unity(1, 16));
        assert_eq!(md.omega(0), &one);
    }

    #[test]
    fn perturbed_table_fails_verlinde() {
        let mut md = build_modular_data(&fibonacci(), &RunConfig::default()).unwrap();
        assert!(verlinde_check(&md));
        md.rho[1][1] = &md.rho[1][1] + &Cyclotomic::one();
        assert!(!verlinde_check(&md));
    }

    #[test]
    fn toric_entries_are_signs() {
        let md = build_modular_data(&toric(), &RunConfig::default()).unwrap();
        for row in md.rho_table() {
            for x in row {
                assert!(*x == Cyclotomic::one() || *x == Cyclotomic::from_int(-1));
            }
        }
    }

    #[test]
    fn explicit_s_matrix_is_checked() {
        let fd = ising();
        let h = Cyclotomic::from_frac(1, 2);
        let r = &sqrt2() * &h;
        let s = vec![
            vec![h.clone(), h.clone(), r.clone()],
            vec![h.clone(), h.clone(), -&r],
            vec![r.clone(), -&r, Cyclotomic::zero()],
        ];
        let md = build_modular_data_with_s(&fd, &s, &RunConfig::default()).unwrap();
        assert!(verlinde_check(&md));
        let mut bad = s.clone();
        bad[1][1] = -&h;
        assert!(build_modular_data_with_s(&fd, &bad, &RunConfig::default()).is_err());
    }
}
