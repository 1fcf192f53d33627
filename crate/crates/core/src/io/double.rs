//! Modular data of the Drinfeld double of a small finite group, used as
//! test input with known answers.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::RunConfig;
use crate::cyclo::{canonical_conductor, gcd_u64, lcm_u64, reconstruct_with, units, vandermonde_inverse, Cyclotomic};
use crate::error::{Error, Result};
use crate::fcsets::FcSet;
use crate::fusion::{build_modular_data_with_s, validate, verlinde_check, FusionData};
use crate::io::{ModelFile, SMatrix};
use crate::numeric::{common_eigenrows, cx_abs2, BigFloat, Real};

/// Largest group order accepted by default.
pub const DOUBLE_MAX_ORDER: usize = 12;

/// A finite group given by its multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Group {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl Group {
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 || table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(Error::Validation("multiplication table must be square with entries in range".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::Validation("no identity element".into()))?;
        let mut inverse = Vec::with_capacity(n);
        for x in 0..n {
            let y = (0..n)
                .find(|&y| table[x][y] == identity)
                .ok_or_else(|| Error::Validation(format!("element {x} has no inverse")))?;
            inverse.push(y);
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::Validation("multiplication is not associative".into()));
                    }
                }
            }
        }
        Ok(Group { table, identity, inverse })
    }

    pub fn cyclic(n: usize) -> Self {
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Group::from_table(table).expect("cyclic groups are groups")
    }

    /// Dihedral group of order `2n`: element `(s, r)` is `s·n + r` meaning
    /// `x^s y^r` with `y^n = x^2 = 1`, `x y x = y^{-1}`.
    pub fn dihedral(n: usize) -> Self {
        let m = 2 * n;
        let mut table = vec![vec![0; m]; m];
        for s1 in 0..2 {
            for r1 in 0..n {
                for s2 in 0..2 {
                    for r2 in 0..n {
                        let r = if s2 == 0 { (r1 + r2) % n } else { (n - r1 % n + r2) % n };
                        table[s1 * n + r1][s2 * n + r2] = ((s1 + s2) % 2) * n + r;
                    }
                }
            }
        }
        Group::from_table(table).expect("dihedral groups are groups")
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn pow(&self, a: usize, e: u64) -> usize {
        (0..e).fold(self.identity, |acc, _| self.mul(acc, a))
    }

    pub fn element_order(&self, a: usize) -> u64 {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn exponent(&self) -> u64 {
        (0..self.order()).map(|a| self.element_order(a)).fold(1, lcm_u64)
    }

    fn conjugate(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    /// Conjugacy classes of the subgroup `h` (sorted elements), identity first.
    pub fn classes_in(&self, h: &[usize]) -> Vec<Vec<usize>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        let mut elems = h.to_vec();
        elems.sort_unstable();
        elems.retain(|&x| x != self.identity);
        elems.insert(0, self.identity);
        for &x in &elems {
            if seen.contains(&x) {
                continue;
            }
            let cls: BTreeSet<usize> = h.iter().map(|&g| self.conjugate(g, x)).collect();
            seen.extend(cls.iter().copied());
            out.push(cls.into_iter().collect());
        }
        out
    }

    pub fn centralizer(&self, a: usize) -> Vec<usize> {
        (0..self.order()).filter(|&g| self.mul(g, a) == self.mul(a, g)).collect()
    }
}

/// Character table of a subgroup.
#[derive(Clone, Debug)]
pub struct CharTable {
    pub elements: Vec<usize>,
    pub classes: Vec<Vec<usize>>,
    /// `chars[χ][k] = χ(K_k)`, trivial character first.
    pub chars: Vec<Vec<Cyclotomic>>,
}

impl CharTable {
    pub fn class_of(&self, x: usize) -> Option<usize> {
        self.classes.iter().position(|c| c.binary_search(&x).is_ok())
    }

    pub fn value(&self, chi: usize, x: usize) -> &Cyclotomic {
        &self.chars[chi][self.class_of(x).expect("element lies in the subgroup")]
    }

    pub fn degree(&self, chi: usize) -> &Cyclotomic {
        &self.chars[chi][0]
    }
}

/// Characters of the subgroup `h` from the common eigenvectors of the class
/// multiplication matrices, made exact through their Galois conjugates
/// `σ_ℓ(χ(g)) = χ(g^ℓ)` and checked by orthogonality.
pub fn character_table(g: &Group, h: &[usize], cfg: &RunConfig) -> Result<CharTable> {
    let classes = g.classes_in(h);
    let r = classes.len();
    let hn = h.len() as i64;
    let class_of = |x: usize| classes.iter().position(|c| c.binary_search(&x).is_ok()).expect("closed subgroup");
    let mut mats = vec![vec![vec![0i64; r]; r]; r];
    for (i, ki) in classes.iter().enumerate() {
        for (j, kj) in classes.iter().enumerate() {
            for (k, kk) in classes.iter().enumerate() {
                let z = kk[0];
                mats[i][j][k] = ki.iter().filter(|&&x| kj.binary_search(&g.mul(g.inv(x), z)).is_ok()).count() as i64;
            }
        }
    }
    let prec = cfg.precision;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let rows = common_eigenrows::<BigFloat, _>(&mats, prec, &mut rng)
        .ok_or_else(|| Error::Reconstruction("class algebra did not diagonalize".into()))?;
    if rows.len() != r {
        return Err(Error::Reconstruction(format!("{} eigenvectors for {r} classes", rows.len())));
    }
    let exp = h.iter().map(|&x| g.element_order(x)).fold(1, lcm_u64);
    let n = canonical_conductor(exp as u32);
    let inv = vandermonde_inverse::<BigFloat>(n, prec)?;
    let lifts: Vec<u64> = units(n)
        .iter()
        .map(|&u| (0..).map(|t| u64::from(u) + t * u64::from(n)).find(|&l| gcd_u64(l, exp) == 1).expect("a lift exists"))
        .collect();
    let bound = cfg.denom_bound.clone();
    let mut chars = Vec::with_capacity(r);
    for row in &rows {
        let mut acc = BigFloat::from_i64_prec(0, prec);
        for (k, w) in row.iter().enumerate() {
            acc = acc + cx_abs2(w) / BigFloat::from_i64_prec(classes[k].len() as i64, prec);
        }
        let deg2 = BigFloat::from_i64_prec(hn, prec) / acc;
        let deg = deg2.to_f64_lossy().sqrt().round() as i64;
        if deg < 1 {
            return Err(Error::Reconstruction("non-positive character degree".into()));
        }
        let numeric: Vec<Complex<BigFloat>> = row
            .iter()
            .enumerate()
            .map(|(k, w)| {
                let f = BigFloat::from_i64_prec(deg, prec) / BigFloat::from_i64_prec(classes[k].len() as i64, prec);
                Complex::new(w.re.clone() * f.clone(), w.im.clone() * f)
            })
            .collect();
        let mut exact = Vec::with_capacity(r);
        for k in 0..r {
            let x = classes[k][0];
            let conj: Vec<Complex<BigFloat>> = lifts.iter().map(|&l| numeric[class_of(g.pow(x, l))].clone()).collect();
            exact.push(reconstruct_with(&inv, &conj, n, &bound, prec)?);
        }
        chars.push(exact);
    }
    // orthogonality, exactly
    let sizes: Vec<Cyclotomic> = classes.iter().map(|c| Cyclotomic::from_int(c.len() as i64)).collect();
    for a in 0..r {
        for b in 0..r {
            let s: Cyclotomic = (0..r).map(|k| &(&chars[a][k] * &chars[b][k].conj()) * &sizes[k]).sum();
            let want = Cyclotomic::from_int(if a == b { hn } else { 0 });
            if s != want {
                return Err(Error::Reconstruction("reconstructed characters are not orthonormal".into()));
            }
        }
    }
    let is_trivial = |c: &Vec<Cyclotomic>| c.iter().all(Cyclotomic::is_one);
    chars.sort_by_cached_key(|c| {
        let deg = c[0].to_integer().unwrap_or_default();
        let key: Vec<String> = c.iter().map(Cyclotomic::compact).collect();
        (!is_trivial(c), deg, key)
    });
    let mut elements = h.to_vec();
    elements.sort_unstable();
    Ok(CharTable { elements, classes, chars })
}

/// The double `D(G)`: primaries `(a, χ)` for class representatives `a` and
/// irreducible characters `χ` of the centralizer, with the standard S and T.
/// Fusion rules come from the Verlinde formula and everything is validated.
pub fn drinfeld_double_data(name: &str, g: &Group, cfg: &RunConfig, cap: usize) -> Result<ModelFile> {
    if g.order() > cap {
        return Err(Error::Budget(cap));
    }
    let all: Vec<usize> = (0..g.order()).collect();
    let classes = g.classes_in(&all);
    let reps: Vec<usize> = classes.iter().map(|c| c[0]).collect();
    let tables: Vec<CharTable> =
        reps.iter().map(|&a| character_table(g, &g.centralizer(a), cfg)).collect::<Result<_>>()?;
    let mut prim: Vec<(usize, usize)> = Vec::new();
    for (ci, t) in tables.iter().enumerate() {
        for chi in 0..t.chars.len() {
            prim.push((ci, chi));
        }
    }
    let k = prim.len();
    let labels: Vec<String> = prim.iter().map(|&(c, x)| format!("a{c}_{x}")).collect();

    let exp = g.exponent();
    let mut weights = Vec::with_capacity(k);
    for &(ci, chi) in &prim {
        let t = &tables[ci];
        let theta = t.value(chi, reps[ci]) / t.degree(chi);
        let e = (0..exp)
            .find(|&e| theta == Cyclotomic::root_of_unity(e as i64, exp as u32))
            .ok_or_else(|| Error::Reconstruction("twist is not a root of unity".into()))?;
        weights.push(BigRational::new(BigInt::from(e), BigInt::from(exp)));
    }

    let mut s = vec![vec![Cyclotomic::zero(); k]; k];
    for (p, &(ca, alpha)) in prim.iter().enumerate() {
        for (q, &(cb, beta)) in prim.iter().enumerate().skip(p) {
            let (a, b) = (reps[ca], reps[cb]);
            let (ta, tb) = (&tables[ca], &tables[cb]);
            let mut acc = Cyclotomic::zero();
            for x in 0..g.order() {
                let gbg = g.conjugate(x, b);
                if g.mul(a, gbg) != g.mul(gbg, a) {
                    continue;
                }
                let gag = g.conjugate(g.inv(x), a);
                acc = acc + &ta.value(alpha, gbg).conj() * &tb.value(beta, gag).conj();
            }
            let norm = Cyclotomic::from_frac(1, (ta.elements.len() * tb.elements.len()) as i64);
            let v = &acc * &norm;
            s[q][p] = v.clone();
            s[p][q] = v;
        }
    }

    // Verlinde in floating point; exactness is re-established below
    let sf: Vec<Vec<Complex<f64>>> = s.iter().map(|r| r.iter().map(Cyclotomic::to_f64).collect()).collect();
    let mut fusion = vec![0u32; k * k * k];
    for p in 0..k {
        for q in 0..k {
            for r in 0..k {
                let v: Complex<f64> = (0..k).map(|w| sf[p][w] * sf[q][w] * sf[r][w].conj() / sf[0][w]).sum();
                let m = v.re.round();
                if (v.re - m).abs() > 1e-6 || v.im.abs() > 1e-6 || m < 0.0 {
                    return Err(Error::Identity(format!("Verlinde gives {v} for ({p}, {q}, {r})")));
                }
                fusion[(p * k + q) * k + r] = m as u32;
            }
        }
    }
    let fd = FusionData::new(name, labels, weights, fusion)?;
    if let Some(v) = validate(&fd).first() {
        return Err(Error::Identity(format!("double fails validation: {v}")));
    }
    let md = build_modular_data_with_s(&fd, &s, cfg)?;
    if !verlinde_check(&md) {
        return Err(Error::Identity("double fails the exact Verlinde check".into()));
    }
    let vac = FcSet::from_indices(k, prim.iter().enumerate().filter(|(_, &(c, _))| c == 0).map(|(i, _)| i));
    if !crate::local::is_local(&vac, &md)? || !crate::local::main_theorem_check(&vac, &md)?.passed {
        return Err(Error::Identity("vacuum twister of the double is not local with integral dimensions".into()));
    }
    let conductor = s.iter().flatten().map(|x| u64::from(x.conductor())).fold(1, lcm_u64) as u32;
    Ok(ModelFile::from_fusion_data(&fd, Some(SMatrix { conductor, entries: s })))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s3_character_table() {
        let g = Group::dihedral(3);
        assert_eq!(g.order(), 6);
        let all: Vec<usize> = (0..6).collect();
        let t = character_table(&g, &all, &RunConfig::default()).unwrap();
        let degs: Vec<i64> = (0..3).map(|c| t.degree(c).to_integer().unwrap().try_into().unwrap()).collect();
        assert_eq!(degs, vec![1, 1, 2]);
        assert_eq!(t.classes.len(), 3);
    }

    #[test]
    fn z3_characters_are_cube_roots() {
        let g = Group::cyclic(3);
        let t = character_table(&g, &[0, 1, 2], &RunConfig::default()).unwrap();
        let vals: BTreeSet<String> = t.chars.iter().map(|c| c[1].compact()).collect();
        assert_eq!(vals.len(), 3);
        assert!(t.chars[1..].iter().all(|c| c[1].is_root_of_unity() && !c[1].is_one()));
    }

    #[test]
    fn z2_double_is_toric() {
        let m = drinfeld_double_data("dz2", &Group::cyclic(2), &RunConfig::default(), 12).unwrap();
        assert_eq!(m.rank(), 4);
        let halves = m.weights.iter().filter(|h| **h == BigRational::new(1.into(), 2.into())).count();
        assert_eq!(halves, 1);
    }

    #[test]
    fn trivial_group_gives_trivial_model() {
        let m = drinfeld_double_data("dz1", &Group::cyclic(1), &RunConfig::default(), 12).unwrap();
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn s3_double_has_eight_primaries() {
        let m = drinfeld_double_data("d_s3", &Group::dihedral(3), &RunConfig::default(), 12).unwrap();
        assert_eq!(m.rank(), 8);
        assert!(matches!(
            drinfeld_double_data("big", &Group::cyclic(13), &RunConfig::default(), 12),
            Err(Error::Budget(12))
        ));
    }
}
