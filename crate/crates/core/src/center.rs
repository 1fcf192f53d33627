//! Central classes, central characters, central quotients and extensions,
//! and the nilpotency and solvability classifiers built on them.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::cyclo::Cyclotomic;
use crate::error::{Error, Result};
use crate::fcsets::{dual, FcLattice, FcSet};
use crate::fusion::ModularData;
use crate::partition::{blocks, classes, extent, overlaps, ClassPartition};
use crate::report::Check;

/// `ϖ_C(α) = (⟦g^⊥⟧ / ⟦C⟧) · α(C) / d_α`.
pub fn central_character(part: &ClassPartition, c: usize, alpha: usize, md: &ModularData) -> Cyclotomic {
    let ratio = &part.extents[part.trivial_class] / &part.extents[c];
    &(&ratio * part.charval(c, alpha)) / md.d(alpha)
}

/// The center of `Cl(g)` as an abelian group acting on classes.
#[derive(Clone, Debug)]
pub struct Center {
    /// Class indices of the central classes, ascending (trivial class first).
    pub central: Vec<usize>,
    /// Products as positions in `central`.
    pub mult: Vec<Vec<usize>>,
    /// `chars[z][i] = ϖ_z(α_i)`.
    pub chars: Vec<Vec<Cyclotomic>>,
    /// `action[z][C] = zC` as class indices.
    pub action: Vec<Vec<usize>>,
}

impl Center {
    pub fn order(&self) -> usize {
        self.central.len()
    }

    pub fn position(&self, class: usize) -> Option<usize> {
        self.central.iter().position(|&c| c == class)
    }

    pub fn element_order(&self, z: usize) -> usize {
        let mut x = z;
        let mut k = 1;
        while x != 0 {
            x = self.mult[x][z];
            k += 1;
        }
        k
    }

    fn power(&self, z: usize, e: usize) -> usize {
        (0..e).fold(0, |acc, _| self.mult[acc][z])
    }

    /// Positions of a subgroup given by class indices, if it is one.
    pub fn subgroup_positions(&self, z: &[usize]) -> Option<Vec<usize>> {
        let pos: Vec<usize> = z.iter().map(|&c| self.position(c)).collect::<Option<_>>()?;
        let set: BTreeSet<usize> = pos.iter().copied().collect();
        if !set.contains(&0) {
            return None;
        }
        for &a in &set {
            for &b in &set {
                if !set.contains(&self.mult[a][b]) {
                    return None;
                }
            }
        }
        Some(set.into_iter().collect())
    }

    /// Every subgroup, as sorted lists of class indices, ordered by size.
    pub fn subgroups(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let close = |s: &BTreeSet<usize>| -> BTreeSet<usize> {
            let mut out = s.clone();
            loop {
                let mut grew = false;
                let cur: Vec<usize> = out.iter().copied().collect();
                for &a in &cur {
                    for &b in &cur {
                        grew |= out.insert(self.mult[a][b]);
                    }
                }
                if !grew {
                    return out;
                }
            }
        };
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let start = close(&BTreeSet::from([0]));
        let mut queue = vec![start];
        while let Some(s) = queue.pop() {
            let key: Vec<usize> = s.iter().copied().collect();
            if !seen.insert(key) {
                continue;
            }
            for z in 0..n {
                if !s.contains(&z) {
                    let mut t = s.clone();
                    t.insert(z);
                    queue.push(close(&t));
                }
            }
        }
        let mut out: Vec<Vec<usize>> =
            seen.into_iter().map(|s| s.into_iter().map(|p| self.central[p]).collect()).collect();
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    /// `#{x ∈ Z : x^m = 1}` for a subgroup given by positions.
    fn count_roots(&self, pos: &[usize], m: usize) -> usize {
        pos.iter().filter(|&&z| self.power(z, m) == 0).count()
    }

    /// Invariant factors `n_1 | n_2 | ...` of a subgroup (class indices).
    pub fn invariant_factors(&self, z: &[usize]) -> Vec<u64> {
        let Some(pos) = self.subgroup_positions(z) else { return Vec::new() };
        let order = pos.len() as u64;
        let mut exps: Vec<(u64, Vec<u32>)> = Vec::new();
        for p in crate::cyclo::prime_factors(order as u32) {
            let p = p as u64;
            let mut counts = vec![1usize];
            let mut pk = 1u64;
            while order.is_multiple_of(pk * p) {
                pk *= p;
                counts.push(self.count_roots(&pos, pk as usize));
            }
            // number of cyclic p-factors of order ≥ p^k
            let ge: Vec<u32> = counts.windows(2).map(|w| ((w[1] / w[0]) as f64).log(p as f64).round() as u32).collect();
            let nfac = ge.first().copied().unwrap_or(0) as usize;
            let mut e = vec![0u32; nfac];
            for (k, &g) in ge.iter().enumerate() {
                for slot in e.iter_mut().take(g as usize) {
                    *slot = k as u32 + 1;
                }
            }
            exps.push((p, e));
        }
        let len = exps.iter().map(|(_, e)| e.len()).max().unwrap_or(0);
        let mut out: Vec<u64> = (0..len)
            .map(|i| exps.iter().map(|(p, e)| e.get(i).map_or(1, |&x| p.pow(x))).product())
            .collect();
        out.sort();
        out
    }

    /// Whether a subgroup (class indices) is isomorphic to `Π Z_{n_i}`.
    pub fn is_isomorphic(&self, z: &[usize], factors: &[u64]) -> bool {
        let Some(pos) = self.subgroup_positions(z) else { return false };
        let order: u64 = factors.iter().product();
        if order != pos.len() as u64 {
            return false;
        }
        (1..=order).filter(|m| order.is_multiple_of(*m)).all(|m| {
            let want: u64 = factors.iter().map(|&n| n.gcd(&m)).product();
            self.count_roots(&pos, m as usize) as u64 == want
        })
    }
}

/// Center of a class partition, with both centrality criteria, the class
/// products `zC`, and the group axioms verified.
pub fn center_of(part: &ClassPartition, md: &ModularData) -> Result<Center> {
    let ext0 = &part.extents[part.trivial_class];
    let d2: Vec<Cyclotomic> = part.alphas.iter().map(|&a| md.d(a) * md.d(a)).collect();
    let mut central = Vec::new();
    for c in 0..part.len() {
        let by_extent = part.extents[c] == *ext0;
        let by_modulus = part.charvals[c].iter().zip(&d2).all(|(x, d)| x.abs_squared() == *d);
        if by_extent != by_modulus {
            return Err(Error::Identity(format!(
                "centrality criteria disagree for class {}",
                part.display_class(c, md)
            )));
        }
        if by_extent {
            central.push(c);
        }
    }
    if central.first() != Some(&part.trivial_class) {
        return Err(Error::Identity("trivial class is not central".into()));
    }
    let chars: Vec<Vec<Cyclotomic>> = central
        .iter()
        .map(|&z| part.alphas.iter().map(|&a| central_character(part, z, a, md)).collect())
        .collect();
    for (zi, row) in chars.iter().enumerate() {
        if let Some(x) = row.iter().find(|x| !x.is_root_of_unity()) {
            return Err(Error::Identity(format!(
                "central character {} of {} is not a root of unity",
                x,
                part.display_class(central[zi], md)
            )));
        }
    }
    let mut action = Vec::with_capacity(central.len());
    for row in &chars {
        let mut act = Vec::with_capacity(part.len());
        for c in 0..part.len() {
            let v: Vec<Cyclotomic> = row.iter().zip(&part.charvals[c]).map(|(w, x)| w * x).collect();
            let target = part.find_by_charvals(&v).ok_or_else(|| {
                Error::Identity(format!("no class matches the product with {}", part.display_class(c, md)))
            })?;
            if part.extents[target] != part.extents[c] {
                return Err(Error::Identity(format!("product class {} changes the extent", part.display_class(c, md))));
            }
            act.push(target);
        }
        action.push(act);
    }
    let mut mult = vec![vec![0usize; central.len()]; central.len()];
    for a in 0..central.len() {
        for b in 0..central.len() {
            let cls = action[a][central[b]];
            mult[a][b] = central
                .iter()
                .position(|&c| c == cls)
                .ok_or_else(|| Error::Identity("center is not closed under products".into()))?;
        }
    }
    let n = central.len();
    for a in 0..n {
        if mult[0][a] != a {
            return Err(Error::Identity("trivial class is not the identity".into()));
        }
        if !(0..n).any(|b| mult[a][b] == 0) {
            return Err(Error::Identity("central class without inverse".into()));
        }
        for b in 0..n {
            if mult[a][b] != mult[b][a] {
                return Err(Error::Identity("center is not commutative".into()));
            }
            for c in 0..n {
                if mult[mult[a][b]][c] != mult[a][mult[b][c]] {
                    return Err(Error::Identity("center is not associative".into()));
                }
            }
        }
    }
    Ok(Center { central, mult, chars, action })
}

/// Algebraic integrality of every central character value, and of
/// `⟦g^⊥⟧ / ⟦C⟧` (the Lagrange analogue).
pub fn conjecture_algint(part: &ClassPartition, md: &ModularData) -> Vec<Check> {
    let mut alg = Vec::new();
    let mut lag = Vec::new();
    for c in 0..part.len() {
        let r = &part.extents[part.trivial_class] / &part.extents[c];
        if !r.is_algebraic_integer() {
            lag.push(format!("⟦g^⊥⟧/⟦{}⟧ = {}", part.display_class(c, md), r.compact()));
        }
        for &a in &part.alphas {
            let w = central_character(part, c, a, md);
            if !w.is_algebraic_integer() {
                alg.push(format!("ϖ_{}({}) = {}", part.display_class(c, md), md.label(a), w.compact()));
            }
        }
    }
    vec![Check::from_witnesses("algint", alg), Check::from_witnesses("lagrange-class", lag)]
}

/// Generalized product rule, multiplicativity of central characters, the
/// weight formula for central characters, the weight description of `g^⊥`,
/// and the action axioms.
pub fn center_checks(part: &ClassPartition, center: &Center, md: &ModularData) -> Vec<Check> {
    let k = md.rank();
    let mut out = Vec::new();
    let mut w = Vec::new();
    for (zi, &z) in center.central.iter().enumerate() {
        for c in 0..part.len() {
            let target = center.action[zi][c];
            for &p in &part.classes[c] {
                for &q in &part.classes[z] {
                    for (r, _) in md.base().products(p, q) {
                        if part.class_of[r] != target {
                            w.push(format!("{}·{} ∋ {}", md.label(p), md.label(q), md.label(r)));
                        }
                    }
                }
            }
        }
    }
    out.push(Check::from_witnesses("genprodrule", w));

    let mut w = Vec::new();
    for (zi, row) in center.chars.iter().enumerate() {
        for (i, &a) in part.alphas.iter().enumerate() {
            for (j, &b) in part.alphas.iter().enumerate() {
                for (g, _) in md.base().products(a, b) {
                    let gi = part.alpha_index(g).expect("g is fusion closed");
                    if row[gi] != &row[i] * &row[j] {
                        w.push(format!("z={} at {}·{}", part.display_class(center.central[zi], md), md.label(a), md.label(b)));
                    }
                }
            }
        }
    }
    out.push(Check::from_witnesses("cechprod", w));

    let mut w = Vec::new();
    for (zi, &z) in center.central.iter().enumerate() {
        for (i, &a) in part.alphas.iter().enumerate() {
            for &p in &part.classes[z] {
                for (q, _) in md.base().products(a, p) {
                    let lhs = &(md.omega(a) * md.omega(p)) * &md.omega(q).conj();
                    if lhs != center.chars[zi][i] {
                        w.push(format!("α={} p={} q={}", md.label(a), md.label(p), md.label(q)));
                    }
                }
            }
        }
    }
    out.push(Check::from_witnesses("centralchar", w));

    let trivial: BTreeSet<usize> = part.classes[part.trivial_class].iter().copied().collect();
    let by_weights: BTreeSet<usize> = (0..k)
        .filter(|&p| {
            part.alphas.iter().all(|&a| md.base().products(a, p).all(|(q, _)| *md.omega(q) == md.omega(a) * md.omega(p)))
        })
        .collect();
    out.push(Check::new("trivclass", trivial == by_weights, "weight description of g^⊥ differs from the trivial class"));

    let mut ok = center.action[0].iter().enumerate().all(|(c, &t)| c == t);
    for a in 0..center.order() {
        for b in 0..center.order() {
            let ab = center.mult[a][b];
            for c in 0..part.len() {
                ok &= center.action[ab][c] == center.action[a][center.action[b][c]];
            }
        }
    }
    out.push(Check::new("center-action", ok, "class products are not a group action"));
    out.push(Check::pass("center-group"));
    out
}

/// `g/Z = {α ∈ g : α(z) = d_α for z ∈ Z}`, with `Z` given as class indices of
/// `classes(g)`; the dual is checked to be the union of the classes in `Z`.
pub fn central_quotient(g: &FcSet, z: &[usize], md: &ModularData) -> Result<FcSet> {
    let part = classes(g, md)?;
    let center = center_of(&part, md)?;
    quotient_in(&part, &center, z, md)
}

fn quotient_in(part: &ClassPartition, center: &Center, z: &[usize], md: &ModularData) -> Result<FcSet> {
    if center.subgroup_positions(z).is_none() {
        return Err(Error::Precondition("the given classes do not form a subgroup of the center".into()));
    }
    let q = FcSet::from_indices(
        md.rank(),
        part.alphas.iter().copied().filter(|&a| z.iter().all(|&c| part.charval(c, a) == md.d(a))),
    );
    let union = FcSet::from_indices(md.rank(), z.iter().flat_map(|&c| part.classes[c].iter().copied()));
    if dual(&q, md)? != union {
        return Err(Error::Identity(format!("dual of the central quotient {} is not the union of Z", q.display(md))));
    }
    Ok(q)
}

/// Decomposition of `g` over the characters of a central subgroup.
#[derive(Clone, Debug)]
pub struct QuotientStructure {
    pub g: FcSet,
    /// Central classes (class indices of `classes(g)`).
    pub z: Vec<usize>,
    pub quotient: FcSet,
    /// `(ξ(z) for z in Z, g_ξ)`; the principal character comes first.
    pub xi_blocks: Vec<(Vec<Cyclotomic>, FcSet)>,
    /// `(classes C in one orbit ZC, [Z : Z_C])`.
    pub class_fusion: Vec<(Vec<usize>, usize)>,
    pub checks: Vec<Check>,
}

pub fn quotient_structure(g: &FcSet, z: &[usize], md: &ModularData) -> Result<QuotientStructure> {
    let part = classes(g, md)?;
    let center = center_of(&part, md)?;
    let quotient = quotient_in(&part, &center, z, md)?;
    let zpos = center.subgroup_positions(z).expect("checked by quotient_in");
    let zord = zpos.len();
    let mut checks = Vec::new();

    let mut xi_map: Vec<(Vec<Cyclotomic>, Vec<usize>)> = Vec::new();
    for (i, &a) in part.alphas.iter().enumerate() {
        let xi: Vec<Cyclotomic> = zpos.iter().map(|&p| center.chars[p][i].clone()).collect();
        match xi_map.iter_mut().find(|(x, _)| *x == xi) {
            Some((_, v)) => v.push(a),
            None => xi_map.push((xi, vec![a])),
        }
    }
    let xi_blocks: Vec<(Vec<Cyclotomic>, FcSet)> =
        xi_map.into_iter().map(|(x, v)| (x, FcSet::from_indices(md.rank(), v))).collect();
    let mut w = Vec::new();
    if xi_blocks.len() != zord {
        w.push(format!("{} characters realized for |Z| = {zord}", xi_blocks.len()));
    }
    if xi_blocks.first().map(|(_, s)| s) != Some(&quotient) {
        w.push("principal component differs from the quotient".into());
    }
    for (xi, _) in &xi_blocks {
        for (ai, &a) in zpos.iter().enumerate() {
            for (bi, &b) in zpos.iter().enumerate() {
                let ab = center.mult[a][b];
                let abi = zpos.iter().position(|&x| x == ab).expect("Z is a subgroup");
                if xi[abi] != &xi[ai] * &xi[bi] {
                    w.push("ξ is not a character of Z".into());
                }
            }
        }
    }
    checks.push(Check::from_witnesses("xi-characters", w));

    let qblocks = blocks(&quotient, md)?;
    let w: Vec<String> = xi_blocks
        .iter()
        .filter(|(_, s)| !(0..qblocks.len()).any(|b| qblocks.class_set(b) == *s))
        .map(|(_, s)| format!("{} is not a block of g/Z", s.display(md)))
        .collect();
    checks.push(Check::from_witnesses("xi-blocks", w));

    let fix: Vec<usize> = zpos.iter().map(|&p| (0..part.len()).filter(|&c| center.action[p][c] == c).count()).collect();
    let mut w = Vec::new();
    let zc = Cyclotomic::from_int(zord as i64);
    for (xi, s) in &xi_blocks {
        let v: Cyclotomic = xi.iter().zip(&fix).map(|(x, &f)| &x.conj() * &Cyclotomic::from_int(f as i64)).sum::<Cyclotomic>() / zc.clone();
        if v != Cyclotomic::from_int(s.len() as i64) {
            w.push(format!("|{}| vs fixed-point count {}", s.display(md), v));
        }
    }
    checks.push(Check::from_witnesses("fixed-point-size", w));

    let ext_g = extent(g, md)?;
    let mut w = Vec::new();
    for (_, s) in &xi_blocks {
        if extent(s, md)? != &zc * &ext_g {
            w.push(format!("⟦{}⟧ ≠ |Z|⟦g⟧", s.display(md)));
        }
    }
    checks.push(Check::from_witnesses("xi-extent", w));

    let mut w = Vec::new();
    let block_of = |p: usize| xi_blocks.iter().position(|(_, s)| s.contains(p));
    for (i, (xi, s)) in xi_blocks.iter().enumerate() {
        for (j, (eta, t)) in xi_blocks.iter().enumerate() {
            let prod: Vec<Cyclotomic> = xi.iter().zip(eta).map(|(a, b)| a * b).collect();
            let k = xi_blocks.iter().position(|(x, _)| *x == prod);
            for a in s.members() {
                for b in t.members() {
                    for (r, _) in md.base().products(a, b) {
                        if block_of(r) != k {
                            w.push(format!("g_{i}·g_{j} leaves g_ξη"));
                        }
                    }
                }
            }
        }
    }
    checks.push(Check::from_witnesses("xi-product", w));

    let qclasses = classes(&quotient, md)?;
    let mut class_fusion = Vec::new();
    let mut seen = vec![false; part.len()];
    let mut w = Vec::new();
    for c in 0..part.len() {
        if seen[c] {
            continue;
        }
        let orbit: BTreeSet<usize> = zpos.iter().map(|&p| center.action[p][c]).collect();
        for &o in &orbit {
            seen[o] = true;
        }
        let stab = zpos.iter().filter(|&&p| center.action[p][c] == c).count();
        let index = zord / stab;
        let members = FcSet::from_indices(md.rank(), orbit.iter().flat_map(|&o| part.classes[o].iter().copied()));
        match (0..qclasses.len()).find(|&k| qclasses.class_set(k) == members) {
            Some(k) => {
                if part.extents[c] != &Cyclotomic::from_int(index as i64) * &qclasses.extents[k] {
                    w.push(format!("extent of {} vs its orbit", part.display_class(c, md)));
                }
            }
            None => w.push(format!("orbit of {} is not a g/Z-class", part.display_class(c, md))),
        }
        class_fusion.push((orbit.into_iter().collect::<Vec<_>>(), index));
    }
    if class_fusion.len() != qclasses.len() {
        w.push("orbit count differs from the g/Z class count".into());
    }
    checks.push(Check::from_witnesses("orbit-classes", w));

    let tab = overlaps(&quotient, md)?;
    let mut w = Vec::new();
    for (xi, s) in &xi_blocks {
        let b = (0..tab.blocks.len()).find(|&b| tab.blocks.class_set(b) == *s);
        for (orbit, _) in &class_fusion {
            let c = orbit[0];
            let members = FcSet::from_indices(md.rank(), orbit.iter().flat_map(|&o| part.classes[o].iter().copied()));
            let k = (0..tab.classes.len()).find(|&k| tab.classes.class_set(k) == members);
            let trivial_on_stab = zpos
                .iter()
                .enumerate()
                .filter(|(_, &p)| center.action[p][c] == c)
                .all(|(i, _)| xi[i].is_one());
            if let (Some(b), Some(k)) = (b, k) {
                if tab.overlaps[b][k] != u64::from(trivial_on_stab) {
                    w.push(format!("⟨{}, Z{}⟩", s.display(md), part.display_class(c, md)));
                }
            }
        }
    }
    checks.push(Check::from_witnesses("ovgxi", w));

    if let Some(c) = checks.iter().find(|c| !c.passed) {
        return Err(Error::Identity(c.to_string()));
    }
    Ok(QuotientStructure { g: g.clone(), z: z.to_vec(), quotient, xi_blocks, class_fusion, checks })
}

/// `dual(dual(g) / Z)` for every central subgroup `Z ≅ Π Z_{n_i}` of
/// `Z(g^⊥)`.
pub fn central_extensions(g: &FcSet, md: &ModularData, factors: &[u64]) -> Result<Vec<FcSet>> {
    let h = dual(g, md)?;
    let part = classes(&h, md)?;
    let center = center_of(&part, md)?;
    let factors: Vec<u64> = factors.iter().copied().filter(|&n| n > 1).collect();
    let mut out = Vec::new();
    for z in center.subgroups() {
        if center.is_isomorphic(&z, &factors) {
            let q = quotient_in(&part, &center, &z, md)?;
            out.push(dual(&q, md)?);
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// The extension obtained from the whole center of `Cl(g^⊥)`.
pub fn maximal_central_extension(g: &FcSet, md: &ModularData) -> Result<FcSet> {
    let h = dual(g, md)?;
    let part = classes(&h, md)?;
    let center = center_of(&part, md)?;
    let q = quotient_in(&part, &center, &center.central, md)?;
    dual(&q, md)
}

/// `central_extensions(g/Z, type of Z)` contains `g`.
pub fn roundtrip_check(g: &FcSet, z: &[usize], md: &ModularData) -> Result<Check> {
    let part = classes(g, md)?;
    let center = center_of(&part, md)?;
    let q = quotient_in(&part, &center, z, md)?;
    let factors = center.invariant_factors(z);
    let ext = central_extensions(&q, md, &factors)?;
    Ok(Check::new(
        "extension-roundtrip",
        ext.contains(g),
        format!("{} not recovered from {}", g.display(md), q.display(md)),
    ))
}

/// Every FC set between `g/Z` and `g` is `g/H` for a subgroup `H ≤ Z`.
pub fn intermediate_check(g: &FcSet, z: &[usize], md: &ModularData, lat: &FcLattice) -> Result<Check> {
    let part = classes(g, md)?;
    let center = center_of(&part, md)?;
    let q = quotient_in(&part, &center, z, md)?;
    let zset: BTreeSet<usize> = z.iter().copied().collect();
    let quotients: Vec<FcSet> = center
        .subgroups()
        .into_iter()
        .filter(|h| h.iter().all(|c| zset.contains(c)))
        .map(|h| quotient_in(&part, &center, &h, md))
        .collect::<Result<_>>()?;
    let w: Vec<String> = lat
        .sets
        .iter()
        .filter(|h| q.is_subset(h) && h.is_subset(g) && !quotients.contains(h))
        .map(|h| h.display(md))
        .collect();
    Ok(Check::from_witnesses("intermediate-quotients", w))
}

/// Agreement of "every class central" with "every d_α = 1".
pub fn is_abelian(g: &FcSet, md: &ModularData) -> Result<bool> {
    let part = classes(g, md)?;
    let center = center_of(&part, md)?;
    let by_center = center.order() == part.len();
    let by_dims = part.alphas.iter().all(|&a| md.d(a).is_one());
    if by_center != by_dims {
        return Err(Error::Identity(format!("abelian criteria disagree for {}", g.display(md))));
    }
    Ok(by_center)
}

/// A chain `{0} ⊂ ... ⊂ g` of central extensions, if `g` is nilpotent.
pub fn is_nilpotent(g: &FcSet, md: &ModularData) -> Result<Option<Vec<FcSet>>> {
    let mut memo = HashMap::new();
    nilpotent_chain(g, md, &mut memo)
}

fn nilpotent_chain(
    g: &FcSet,
    md: &ModularData,
    memo: &mut HashMap<FcSet, Option<Vec<FcSet>>>,
) -> Result<Option<Vec<FcSet>>> {
    if let Some(r) = memo.get(g) {
        return Ok(r.clone());
    }
    let result = if g.len() == 1 {
        Some(vec![g.clone()])
    } else {
        let part = classes(g, md)?;
        let center = center_of(&part, md)?;
        let mut found = None;
        // larger subgroups first: the full center gives the shortest chains
        for z in center.subgroups().into_iter().rev() {
            if z.len() < 2 {
                continue;
            }
            let q = quotient_in(&part, &center, &z, md)?;
            if let Some(mut chain) = nilpotent_chain(&q, md, memo)? {
                chain.push(g.clone());
                found = Some(chain);
                break;
            }
        }
        found
    };
    memo.insert(g.clone(), result.clone());
    Ok(result)
}

fn as_integer(x: &Cyclotomic) -> Option<BigInt> {
    x.to_integer()
}

fn is_prime_power(n: &BigInt) -> Option<bool> {
    let n = n.to_u64()?;
    if n < 2 {
        return Some(false);
    }
    let ps = crate::cyclo::prime_factors(u32::try_from(n).ok()?);
    Some(ps.len() == 1)
}

fn is_prime(n: &BigInt) -> bool {
    n.to_u32().is_some_and(|v| v >= 2 && crate::cyclo::prime_factors(v) == vec![v])
}

/// Solvability data for an FC set with integral `⟦g^⊥⟧`.
#[derive(Clone, Debug)]
pub struct Solvability {
    pub extent_g: Cyclotomic,
    pub extent_dual: Cyclotomic,
    pub in_l_int: bool,
    pub solvable: Option<Vec<FcSet>>,
    pub supersolvable: Option<Vec<FcSet>>,
    pub odd_extent_g: bool,
    pub odd_extent_dual: bool,
}

/// Chains in the lattice whose successive ratios `⟦g_i^⊥⟧ / ⟦g_{i-1}^⊥⟧`
/// are prime powers (primes for supersolvability).
pub fn solvability(g: &FcSet, md: &ModularData, lat: &FcLattice) -> Result<Solvability> {
    let extent_g = extent(g, md)?;
    let dual_ext = |s: &FcSet| -> Cyclotomic { s.members().iter().map(|&a| md.d(a) * md.d(a)).sum() };
    let extent_dual = dual_ext(g);
    let odd = |x: &Cyclotomic| as_integer(x).is_some_and(|v| v.is_odd());
    let in_l_int = extent_dual.is_integer();
    let mut res = Solvability {
        odd_extent_g: odd(&extent_g),
        odd_extent_dual: odd(&extent_dual),
        extent_g,
        extent_dual,
        in_l_int,
        solvable: None,
        supersolvable: None,
    };
    if !in_l_int {
        return Ok(res);
    }
    let subs: Vec<(FcSet, BigInt)> = lat
        .sets
        .iter()
        .filter(|h| h.is_subset(g))
        .filter_map(|h| as_integer(&dual_ext(h)).map(|v| (h.clone(), v)))
        .collect();
    let search = |strict: bool| -> Option<Vec<FcSet>> {
        // longest-path style DFS from {0} upward
        fn go(
            cur: usize,
            target: &FcSet,
            subs: &[(FcSet, BigInt)],
            strict: bool,
            memo: &mut HashMap<usize, Option<Vec<FcSet>>>,
        ) -> Option<Vec<FcSet>> {
            if subs[cur].0 == *target {
                return Some(vec![subs[cur].0.clone()]);
            }
            if let Some(r) = memo.get(&cur) {
                return r.clone();
            }
            let mut out = None;
            for (nxt, (h, v)) in subs.iter().enumerate() {
                if nxt == cur || !subs[cur].0.is_subset(h) {
                    continue;
                }
                let (q, r) = v.div_rem(&subs[cur].1);
                let ok = r.is_zero() && if strict { is_prime(&q) } else { is_prime_power(&q) == Some(true) };
                if ok {
                    if let Some(mut chain) = go(nxt, target, subs, strict, memo) {
                        chain.insert(0, subs[cur].0.clone());
                        out = Some(chain);
                        break;
                    }
                }
            }
            memo.insert(cur, out.clone());
            out
        }
        let start = subs.iter().position(|(h, _)| h.len() == 1)?;
        go(start, g, &subs, strict, &mut HashMap::new())
    };
    res.solvable = search(false);
    res.supersolvable = search(true);
    Ok(res)
}

/// For nilpotent `g`: every divisor of `⟦g^⊥⟧` is `⟦h^⊥⟧` for some FC
/// `h ⊆ g`.
pub fn nilpotent_divisor_check(g: &FcSet, md: &ModularData, lat: &FcLattice) -> Result<Check> {
    let name = "nilpotent-divisor";
    if is_nilpotent(g, md)?.is_none() {
        return Ok(Check::pass(name));
    }
    let dual_ext = |s: &FcSet| -> Cyclotomic { s.members().iter().map(|&a| md.d(a) * md.d(a)).sum() };
    let Some(n) = dual_ext(g).to_integer().and_then(|v| v.to_u64()) else {
        return Ok(Check::fail(name, format!("⟦g^⊥⟧ of nilpotent {} is not an integer", g.display(md))));
    };
    let realized: BTreeSet<u64> = lat
        .sets
        .iter()
        .filter(|h| h.is_subset(g))
        .filter_map(|h| dual_ext(h).to_integer().and_then(|v| v.to_u64()))
        .collect();
    let missing: Vec<String> = (1..=n).filter(|d| n % d == 0 && !realized.contains(d)).map(|d| d.to_string()).collect();
    Ok(Check::from_witnesses(name, missing))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::RunConfig;
    use crate::fcsets::enumerate_fcsets;
    use crate::fusion::build_modular_data;
    use crate::fusion::tests::{fibonacci, ising, toric};

    fn md_of(fd: crate::fusion::FusionData) -> ModularData {
        build_modular_data(&fd, &RunConfig::default()).unwrap()
    }

    #[test]
    fn ising_center_is_z2() {
        let md = md_of(ising());
        let full = FcSet::full(3);
        let part = classes(&full, &md).unwrap();
        let center = center_of(&part, &md).unwrap();
        assert_eq!(center.order(), 2);
        assert_eq!(center.invariant_factors(&center.central), vec![2]);
        assert!(center.is_isomorphic(&center.central, &[2]));
        assert!(center_checks(&part, &center, &md).iter().all(|c| c.passed), "{:?}", center_checks(&part, &center, &md));
        let q = central_quotient(&full, &center.central, &md).unwrap();
        assert_eq!(q, FcSet::from_indices(3, [0, 1]));
        assert!(conjecture_algint(&part, &md).iter().all(|c| c.passed));
    }

    #[test]
    fn sigma_class_character_is_minus_one() {
        let md = md_of(ising());
        let g = FcSet::from_indices(3, [0, 1]);
        let part = classes(&g, &md).unwrap();
        let sigma = part.class_of[2];
        assert_eq!(central_character(&part, sigma, 1, &md), Cyclotomic::from_int(-1));
    }

    #[test]
    fn ising_nilpotent_chain_and_quotient_structure() {
        let md = md_of(ising());
        let full = FcSet::full(3);
        let chain = is_nilpotent(&full, &md).unwrap().unwrap();
        assert_eq!(chain, vec![FcSet::vacuum(3), FcSet::from_indices(3, [0, 1]), full.clone()]);
        let part = classes(&full, &md).unwrap();
        let z = center_of(&part, &md).unwrap().central;
        let qs = quotient_structure(&full, &z, &md).unwrap();
        assert_eq!(qs.xi_blocks.len(), 2);
        assert!(roundtrip_check(&full, &z, &md).unwrap().passed);
        let lat = enumerate_fcsets(&md, &RunConfig::default()).unwrap();
        assert!(intermediate_check(&full, &z, &md, &lat).unwrap().passed);
        assert!(nilpotent_divisor_check(&full, &md, &lat).unwrap().passed);
        let s = solvability(&full, &md, &lat).unwrap();
        assert!(s.supersolvable.is_some());
    }

    #[test]
    fn fibonacci_is_not_nilpotent() {
        let md = md_of(fibonacci());
        let full = FcSet::full(2);
        assert!(is_nilpotent(&full, &md).unwrap().is_none());
        assert!(!is_abelian(&full, &md).unwrap());
        let lat = enumerate_fcsets(&md, &RunConfig::default()).unwrap();
        assert!(!solvability(&full, &md, &lat).unwrap().in_l_int);
    }

    #[test]
    fn toric_is_abelian_with_klein_center() {
        let md = md_of(toric());
        let full = FcSet::full(4);
        assert!(is_abelian(&full, &md).unwrap());
        let part = classes(&full, &md).unwrap();
        let center = center_of(&part, &md).unwrap();
        assert_eq!(center.invariant_factors(&center.central), vec![2, 2]);
        assert!(!center.is_isomorphic(&center.central, &[4]));
        assert_eq!(center.subgroups().len(), 5);
        let part_checks = center_checks(&part, &center, &md);
        assert!(part_checks.iter().all(|c| c.passed), "{part_checks:?}");
        let ext = central_extensions(&FcSet::vacuum(4), &md, &[2]).unwrap();
        assert_eq!(ext.len(), 3);
    }
}
