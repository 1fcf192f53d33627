//! Classes and blocks of an FC set, extents, overlaps, and the exact identity
//! suite relating them.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_traits::{One, ToPrimitive, Zero};

use crate::cyclo::Cyclotomic;
use crate::error::{Error, Result};
use crate::fcsets::{dual, is_fc, FcLattice, FcSet};
use crate::fusion::ModularData;
use crate::linalg::rank;
use crate::report::Check;

/// Partition of all primaries by the restriction of their irreps to `g`.
#[derive(Clone, Debug)]
pub struct ClassPartition {
    pub fcset: FcSet,
    /// Members of `g` in increasing order; columns of `charvals`.
    pub alphas: Vec<usize>,
    /// Classes ordered by smallest member, so the trivial class comes first.
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
    pub extents: Vec<Cyclotomic>,
    /// `charvals[C][i] = α_i(C)`.
    pub charvals: Vec<Vec<Cyclotomic>>,
    pub trivial_class: usize,
}

impl ClassPartition {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Column of `α` in `charvals`.
    pub fn alpha_index(&self, alpha: usize) -> Option<usize> {
        self.alphas.binary_search(&alpha).ok()
    }

    /// `α(C)`.
    pub fn charval(&self, c: usize, alpha: usize) -> &Cyclotomic {
        &self.charvals[c][self.alpha_index(alpha).expect("α must lie in g")]
    }

    pub fn class_set(&self, c: usize) -> FcSet {
        FcSet::from_indices(self.fcset.universe(), self.classes[c].iter().copied())
    }

    pub fn display_class(&self, c: usize, md: &ModularData) -> String {
        self.class_set(c).display(md)
    }

    /// Index of the class whose character vector equals `v`.
    pub fn find_by_charvals(&self, v: &[Cyclotomic]) -> Option<usize> {
        self.charvals.iter().position(|r| r.as_slice() == v)
    }
}

fn extent_of(members: &[usize], md: &ModularData) -> Result<Cyclotomic> {
    let s: Cyclotomic = members.iter().map(|&p| md.s2(p).clone()).sum();
    Ok(s.inverse()?)
}

/// Extent of an arbitrary set of primaries, `1 / Σ_{p} S_0p²`.
pub fn extent(set: &FcSet, md: &ModularData) -> Result<Cyclotomic> {
    extent_of(&set.members(), md)
}

fn partition_by(g: &FcSet, md: &ModularData) -> Result<ClassPartition> {
    let alphas = g.members();
    let mut groups: Vec<(Vec<Cyclotomic>, Vec<usize>)> = Vec::new();
    let mut lookup: HashMap<Vec<Cyclotomic>, usize> = HashMap::new();
    for p in 0..md.rank() {
        let key: Vec<Cyclotomic> = alphas.iter().map(|&a| md.rho(p, a).clone()).collect();
        match lookup.get(&key) {
            Some(&i) => groups[i].1.push(p),
            None => {
                lookup.insert(key.clone(), groups.len());
                groups.push((key, vec![p]));
            }
        }
    }
    let mut class_of = vec![0; md.rank()];
    for (c, (_, members)) in groups.iter().enumerate() {
        for &p in members {
            class_of[p] = c;
        }
    }
    let extents = groups.iter().map(|(_, m)| extent_of(m, md)).collect::<Result<Vec<_>>>()?;
    let (charvals, classes): (Vec<_>, Vec<_>) = groups.into_iter().unzip();
    Ok(ClassPartition { fcset: g.clone(), alphas, classes, class_of, extents, charvals, trivial_class: 0 })
}

/// Checks of the defining invariants of a class partition.
pub fn partition_invariants(part: &ClassPartition, md: &ModularData) -> Vec<Check> {
    let g = &part.alphas;
    let ncl = part.len();
    let mut out = Vec::new();
    out.push(Check::new(
        "classno",
        ncl == g.len(),
        format!("{} classes for |g| = {}", ncl, g.len()),
    ));
    let inv: Vec<Cyclotomic> = part.extents.iter().map(|e| e.inverse().expect("extents are nonzero")).collect();
    let total: Cyclotomic = inv.iter().cloned().sum();
    out.push(Check::new("extsumrule", total.is_one(), format!("Σ 1/⟦C⟧ = {total}")));
    let conj: Vec<Vec<Cyclotomic>> = part.charvals.iter().map(|r| r.iter().map(Cyclotomic::conj).collect()).collect();
    let mut w = Vec::new();
    for i in 0..g.len() {
        for j in 0..g.len() {
            let v: Cyclotomic = (0..ncl).map(|c| &(&part.charvals[c][i] * &conj[c][j]) * &inv[c]).sum();
            let want = Cyclotomic::from_int(i64::from(i == j));
            if v != want {
                w.push(format!("({},{}) gives {}", md.label(g[i]), md.label(g[j]), v));
            }
        }
    }
    out.push(Check::from_witnesses("ortho1", w));
    let mut w = Vec::new();
    for c1 in 0..ncl {
        for c2 in 0..ncl {
            let v: Cyclotomic = (0..g.len()).map(|i| &part.charvals[c1][i] * &conj[c2][i]).sum();
            let want = if c1 == c2 { part.extents[c1].clone() } else { Cyclotomic::zero() };
            if v != want {
                w.push(format!("classes {c1},{c2} give {v}"));
            }
        }
    }
    out.push(Check::from_witnesses("ortho2", w));
    let w: Vec<String> = g
        .iter()
        .enumerate()
        .filter(|(i, &a)| part.charvals[part.trivial_class][*i] != *md.d(a))
        .map(|(_, &a)| format!("α = {}", md.label(a)))
        .collect();
    out.push(Check::from_witnesses("trivial-class-dims", w));
    out
}

fn fail_on(checks: &[Check]) -> Result<()> {
    match checks.iter().find(|c| !c.passed) {
        Some(c) => Err(Error::Identity(c.to_string())),
        None => Ok(()),
    }
}

/// The `g`-classes, verified against their defining identities.
pub fn classes(g: &FcSet, md: &ModularData) -> Result<ClassPartition> {
    if !is_fc(g, md) {
        return Err(Error::Precondition(format!("{} is not an FC set", g.display(md))));
    }
    let part = partition_by(g, md)?;
    fail_on(&partition_invariants(&part, md))?;
    Ok(part)
}

/// The `g`-blocks: classes of `g^⊥`, cross-checked against "some α ∈ g has
/// `N_αp^q > 0`".
pub fn blocks(g: &FcSet, md: &ModularData) -> Result<ClassPartition> {
    let d = dual(g, md)?;
    let part = classes(&d, md)?;
    let gm = g.members();
    for p in 0..md.rank() {
        for q in 0..md.rank() {
            let linked = gm.iter().any(|&a| md.n(a, p, q) > 0);
            if linked != (part.class_of[p] == part.class_of[q]) {
                return Err(Error::Identity(format!(
                    "block criterion disagrees for {} and {}",
                    md.label(p),
                    md.label(q)
                )));
            }
        }
    }
    Ok(part)
}

/// Block × class overlap multiplicities.
#[derive(Clone, Debug)]
pub struct OverlapTable {
    pub classes: ClassPartition,
    pub blocks: ClassPartition,
    /// `overlaps[b][C] = ⟨b, C⟩`.
    pub overlaps: Vec<Vec<u64>>,
    /// `blockreps[b][i][p][q] = N_{α_i p}^q` for `p, q` in block `b`.
    pub blockreps: Vec<Vec<Vec<Vec<u32>>>>,
}

impl OverlapTable {
    pub fn get(&self, b: usize, c: usize) -> u64 {
        self.overlaps[b][c]
    }
}

/// `Σ_{p∈b} Σ_{q∈C} |S_pq|²` with `|S_pq|² = |ρ_q(p)|² S_0q²`.
pub fn overlap_by_sum(b: &[usize], c: &[usize], md: &ModularData) -> Cyclotomic {
    b.iter().flat_map(|&p| c.iter().map(move |&q| &md.rho(q, p).abs_squared() * md.s2(q))).sum()
}

/// Multiplicity of the class character in the block representation: the
/// dimension of the common eigenspace.
fn overlap_by_eigen(block: &[usize], class: usize, part: &ClassPartition, md: &ModularData) -> usize {
    let k = block.len();
    let mut stacked = Vec::with_capacity(k * part.alphas.len());
    for (i, &a) in part.alphas.iter().enumerate() {
        let lam = &part.charvals[class][i];
        for &p in block {
            stacked.push(
                block
                    .iter()
                    .map(|&q| {
                        let v = Cyclotomic::from_int(md.n(a, p, q) as i64);
                        if p == q {
                            &v - lam
                        } else {
                            v
                        }
                    })
                    .collect::<Vec<_>>(),
            );
        }
    }
    k - rank(&stacked)
}

fn overlap_by_rank(b: &[usize], c: &[usize], md: &ModularData) -> usize {
    let minor: Vec<Vec<Cyclotomic>> = b.iter().map(|&p| c.iter().map(|&q| md.rho(q, p).clone()).collect()).collect();
    rank(&minor)
}

/// Overlaps computed three ways (sum of `|S|²`, eigenspace dimension, minor
/// rank) and required to agree.
pub fn overlaps(g: &FcSet, md: &ModularData) -> Result<OverlapTable> {
    let cl = classes(g, md)?;
    let bl = blocks(g, md)?;
    let mut table = vec![vec![0u64; cl.len()]; bl.len()];
    for (bi, b) in bl.classes.iter().enumerate() {
        for (ci, c) in cl.classes.iter().enumerate() {
            let s = overlap_by_sum(b, c, md);
            let sum = s
                .to_integer()
                .and_then(|v| v.to_u64())
                .ok_or_else(|| Error::Identity(format!("overlap sum {s} is not a non-negative integer")))?;
            let eig = overlap_by_eigen(b, ci, &cl, md) as u64;
            let rk = overlap_by_rank(b, c, md) as u64;
            if sum != eig || sum != rk {
                return Err(Error::Identity(format!(
                    "overlap of block {} with class {}: sum {sum}, eigen {eig}, rank {rk}",
                    bl.display_class(bi, md),
                    cl.display_class(ci, md)
                )));
            }
            table[bi][ci] = sum;
        }
    }
    let blockreps = bl
        .classes
        .iter()
        .map(|b| {
            cl.alphas
                .iter()
                .map(|&a| b.iter().map(|&p| b.iter().map(|&q| md.n(a, p, q)).collect()).collect())
                .collect()
        })
        .collect();
    Ok(OverlapTable { classes: cl, blocks: bl, overlaps: table, blockreps })
}

fn exceeds(a: &Cyclotomic, b: &Cyclotomic, prec: u32) -> bool {
    a.cmp_real(b, prec) == Some(Ordering::Greater)
}

/// The full identity suite for one FC set. Failures are returned as checks.
pub fn verify_partition_identities(g: &FcSet, md: &ModularData, prec: u32) -> Vec<Check> {
    let tab = match overlaps(g, md) {
        Ok(t) => t,
        Err(e) => return vec![Check::fail("partition", e.to_string())],
    };
    let mut out = partition_invariants(&tab.classes, md);
    out.extend(partition_invariants(&tab.blocks, md).into_iter().map(|c| Check { name: format!("blocks-{}", c.name), ..c }));
    out.push(Check::pass("overlap-triple"));
    let cl = &tab.classes;
    let bl = &tab.blocks;
    let g_members = &cl.alphas;
    let traces: Vec<Cyclotomic> =
        g_members.iter().map(|&a| Cyclotomic::from_int((0..md.rank()).map(|p| md.n(a, p, p) as i64).sum())).collect();

    let mut w = Vec::new();
    for c in 0..cl.len() {
        let inv = cl.extents[c].inverse().expect("nonzero extent");
        let v: Cyclotomic = (0..g_members.len()).map(|i| &cl.charvals[c][i].conj() * &traces[i]).sum::<Cyclotomic>() * &inv;
        if v != Cyclotomic::from_int(cl.classes[c].len() as i64) {
            w.push(format!("class {} size formula gives {v}", cl.display_class(c, md)));
        }
    }
    out.push(Check::from_witnesses("classsize", w));

    let mut w = Vec::new();
    for c in 0..cl.len() {
        let inv = cl.extents[c].inverse().expect("nonzero extent");
        let conj: Vec<Cyclotomic> = cl.charvals[c].iter().map(Cyclotomic::conj).collect();
        for p in 0..md.rank() {
            let v: Cyclotomic = g_members.iter().zip(&conj).map(|(&a, x)| x * md.rho(p, a)).sum::<Cyclotomic>() * &inv;
            let want = Cyclotomic::from_int(i64::from(cl.class_of[p] == c));
            if v != want {
                w.push(format!("class {} at {}", cl.display_class(c, md), md.label(p)));
            }
        }
    }
    out.push(Check::from_witnesses("classcharfun", w));

    // Σ_{w∈C} s2[w] ρ_w(p) conj(ρ_w(q)) = (1/⟦C⟧) Σ_α conj(α(C)) N_αp^q
    let mut w = Vec::new();
    'wm: for c in 0..cl.len() {
        let inv = cl.extents[c].inverse().expect("nonzero extent");
        let conj: Vec<Cyclotomic> = cl.charvals[c].iter().map(Cyclotomic::conj).collect();
        for p in 0..md.rank() {
            for q in 0..md.rank() {
                let lhs: Cyclotomic =
                    cl.classes[c].iter().map(|&x| &(md.s2(x) * md.rho(x, p)) * &md.rho(x, q).conj()).sum();
                let rhs: Cyclotomic = g_members
                    .iter()
                    .zip(&conj)
                    .filter(|(&a, _)| md.n(a, p, q) > 0)
                    .map(|(&a, x)| x * &Cyclotomic::from_int(md.n(a, p, q) as i64))
                    .sum::<Cyclotomic>()
                    * &inv;
                if lhs != rhs {
                    w.push(format!("class {} at ({}, {})", cl.display_class(c, md), md.label(p), md.label(q)));
                    break 'wm;
                }
            }
        }
    }
    out.push(Check::from_witnesses("wmatelms", w));

    let ext_dual = &cl.extents[cl.trivial_class];
    let ext_g = &bl.extents[bl.trivial_class];
    let sum_d2: Cyclotomic = g_members.iter().map(|&a| md.d(a) * md.d(a)).sum();
    out.push(Check::new("spread", *ext_dual == sum_d2, format!("⟦g^⊥⟧ = {ext_dual}, Σ d² = {sum_d2}")));
    let prod = ext_g * ext_dual;
    out.push(Check::new("recip", prod == *md.global_dim(), format!("⟦g⟧⟦g^⊥⟧ = {prod}")));

    let dual_set = &bl.alphas;
    let mut w = Vec::new();
    for &p in dual_set {
        for q in 0..md.rank() {
            for (r, _) in md.base().products(p, q) {
                if cl.class_of[q] != cl.class_of[r] {
                    w.push(format!("{}·{} ∋ {}", md.label(p), md.label(q), md.label(r)));
                }
            }
        }
    }
    out.push(Check::from_witnesses("product-rule", w));

    let mut w = Vec::new();
    let dual_size = Cyclotomic::from_int(dual_set.len() as i64);
    let cap = &dual_size * ext_dual;
    for c in 0..cl.len() {
        let size = Cyclotomic::from_int(cl.classes[c].len() as i64);
        if exceeds(&size, ext_g, prec) {
            w.push(format!("|C| > ⟦g⟧ for {}", cl.display_class(c, md)));
        }
        if exceeds(&(&size * &cl.extents[c]), &cap, prec) {
            w.push(format!("|C|⟦C⟧ > |g^⊥|⟦g^⊥⟧ for {}", cl.display_class(c, md)));
        }
        if exceeds(&cl.extents[c], ext_dual, prec) {
            w.push(format!("⟦C⟧ > ⟦g^⊥⟧ for {}", cl.display_class(c, md)));
        }
    }
    out.push(Check::from_witnesses("sizebounds", w));

    let mut w = Vec::new();
    for b in 0..bl.len() {
        let s: u64 = tab.overlaps[b].iter().sum();
        if s != bl.classes[b].len() as u64 {
            w.push(format!("row {}", bl.display_class(b, md)));
        }
    }
    for c in 0..cl.len() {
        let s: u64 = (0..bl.len()).map(|b| tab.overlaps[b][c]).sum();
        if s != cl.classes[c].len() as u64 {
            w.push(format!("column {}", cl.display_class(c, md)));
        }
    }
    out.push(Check::from_witnesses("blocksize-clsize", w));

    let mut w = Vec::new();
    for c in 0..cl.len() {
        if tab.overlaps[bl.trivial_class][c] != 1 {
            w.push(format!("⟨g, {}⟩ ≠ 1", cl.display_class(c, md)));
        }
    }
    for b in 0..bl.len() {
        if tab.overlaps[b][cl.trivial_class] != 1 {
            w.push(format!("⟨{}, g^⊥⟩ ≠ 1", bl.display_class(b, md)));
        }
    }
    out.push(Check::from_witnesses("trivoverlap", w));

    let mut w = Vec::new();
    for b in 0..bl.len() {
        for c in 0..cl.len() {
            let ov = Cyclotomic::from_int(tab.overlaps[b][c] as i64);
            let b1 = ext_dual / &cl.extents[c];
            let b2 = ext_g / &bl.extents[b];
            if exceeds(&ov, &b1, prec) || exceeds(&ov, &b2, prec) {
                w.push(format!("⟨{}, {}⟩", bl.display_class(b, md), cl.display_class(c, md)));
            }
        }
    }
    out.push(Check::from_witnesses("overlapbound", w));
    out
}

/// Reciprocity for `g ⊆ h`, given both overlap tables.
pub fn reciprocity(g_tab: &OverlapTable, h_tab: &OverlapTable, md: &ModularData) -> Check {
    let name = "reciprocity";
    if !g_tab.classes.fcset.is_subset(&h_tab.classes.fcset) {
        return Check::fail(name, "first set is not contained in the second");
    }
    let mut w = Vec::new();
    for (bi, b) in h_tab.blocks.classes.iter().enumerate() {
        let bset = FcSet::from_indices(md.rank(), b.iter().copied());
        for (ci, c) in g_tab.classes.classes.iter().enumerate() {
            let cset = FcSet::from_indices(md.rank(), c.iter().copied());
            let lhs: u64 = g_tab
                .blocks
                .classes
                .iter()
                .enumerate()
                .filter(|(_, b2)| b2.iter().all(|&p| bset.contains(p)))
                .map(|(b2i, _)| g_tab.overlaps[b2i][ci])
                .sum();
            let rhs: u64 = h_tab
                .classes
                .classes
                .iter()
                .enumerate()
                .filter(|(_, c2)| c2.iter().all(|&p| cset.contains(p)))
                .map(|(c2i, _)| h_tab.overlaps[bi][c2i])
                .sum();
            if lhs != rhs {
                w.push(format!("block {} class {}: {lhs} vs {rhs}", h_tab.blocks.display_class(bi, md), g_tab.classes.display_class(ci, md)));
            }
        }
    }
    Check::from_witnesses(name, w)
}

/// Reciprocity over every nested pair of the lattice.
pub fn reciprocity_all(lat: &FcLattice, md: &ModularData) -> Result<Check> {
    let tabs = lat.sets.iter().map(|g| overlaps(g, md)).collect::<Result<Vec<_>>>()?;
    let mut w = Vec::new();
    for (i, g) in lat.sets.iter().enumerate() {
        for (j, h) in lat.sets.iter().enumerate() {
            if g.is_subset(h) {
                let c = reciprocity(&tabs[i], &tabs[j], md);
                if !c.passed {
                    w.push(format!("{} ⊆ {}: {}", g.display(md), h.display(md), c.detail));
                }
            }
        }
    }
    Ok(Check::from_witnesses("reciprocity", w))
}
