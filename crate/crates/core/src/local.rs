//! Local FC sets, twisters, the Ramond class, and orbifold deconstruction
//! reports.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::center::{center_of, central_extensions, central_quotient, Center};
use crate::cyclo::Cyclotomic;
use crate::error::{Error, Result};
use crate::fcsets::{dual, FcSet};
use crate::fusion::ModularData;
use crate::partition::{overlaps, ClassPartition, OverlapTable};
use crate::report::Check;

/// `g ⊆ g^⊥`, cross-checked against `ω_γ = ω_α ω_β` on fusion triples in `g`.
pub fn is_local(g: &FcSet, md: &ModularData) -> Result<bool> {
    let by_dual = g.is_subset(&dual(g, md)?);
    let members = g.members();
    let by_weights = members.iter().all(|&a| {
        members.iter().all(|&b| md.base().products(a, b).all(|(c, _)| *md.omega(c) == md.omega(a) * md.omega(b)))
    });
    if by_dual != by_weights {
        return Err(Error::Identity(format!("locality criteria disagree for {}", g.display(md))));
    }
    Ok(by_dual)
}

/// Every weight in `g` is an integer.
pub fn is_twister(g: &FcSet, md: &ModularData) -> bool {
    g.members().iter().all(|&a| md.weight(a).is_integer())
}

fn check_half_integral(g: &FcSet, md: &ModularData) -> Result<()> {
    for a in g.members() {
        let two_h = md.weight(a) * BigInt::from(2);
        if !two_h.is_integer() {
            return Err(Error::Identity(format!(
                "{} has weight {} in the local set {}",
                md.label(a),
                md.weight(a),
                g.display(md)
            )));
        }
    }
    Ok(())
}

/// `{α ∈ g : ω_α = 1}` for local `g`; verified to be a twister, and `g` to
/// be its quotient extension by the Ramond class when it differs from `g`.
pub fn twister_core(g: &FcSet, md: &ModularData) -> Result<FcSet> {
    if !is_local(g, md)? {
        return Err(Error::Precondition(format!("{} is not local", g.display(md))));
    }
    check_half_integral(g, md)?;
    let core = FcSet::from_indices(md.rank(), g.members().into_iter().filter(|&a| md.weight(a).is_integer()));
    if !is_twister(&core, md) || !is_local(&core, md)? {
        return Err(Error::Identity(format!("core {} is not a twister", core.display(md))));
    }
    if core != *g {
        let part = crate::partition::classes(g, md)?;
        let r = ramond_in(&part, md)?;
        let mut z = vec![part.trivial_class, r];
        z.sort_unstable();
        if central_quotient(g, &z, md)? != core {
            return Err(Error::Identity(format!("{} is not the Ramond quotient of {}", core.display(md), g.display(md))));
        }
    }
    Ok(core)
}

fn ramond_in(part: &ClassPartition, md: &ModularData) -> Result<usize> {
    let want: Vec<Cyclotomic> = part.alphas.iter().map(|&a| md.omega(a) * md.d(a)).collect();
    part.find_by_charvals(&want)
        .ok_or_else(|| Error::Identity(format!("no class R with ρ_R(α) = ω_α d_α for {}", part.fcset.display(md))))
}

/// The class `R` with `ρ_R(α) = ω_α d_α`, verified central with `R² = g^⊥`.
pub fn ramond_class(g: &FcSet, md: &ModularData) -> Result<usize> {
    if !is_local(g, md)? {
        return Err(Error::Precondition(format!("{} is not local", g.display(md))));
    }
    let part = crate::partition::classes(g, md)?;
    let center = center_of(&part, md)?;
    let r = ramond_in(&part, md)?;
    let pos = center.position(r).ok_or_else(|| Error::Identity("Ramond class is not central".into()))?;
    if center.mult[pos][pos] != 0 {
        return Err(Error::Identity("R² is not the trivial class".into()));
    }
    Ok(r)
}

/// One twisted sector: a `g`-class with the blocks it contains.
#[derive(Clone, Debug)]
pub struct Sector {
    pub class: usize,
    pub members: Vec<usize>,
    pub extent: Cyclotomic,
    pub central: bool,
    /// Block indices of the blocks inside this class.
    pub blocks: Vec<usize>,
    /// `⟨b, C⟩` for each block `b` in `blocks`.
    pub overlaps: Vec<u64>,
}

#[derive(Clone, Debug)]
pub struct DeconstructionReport {
    pub g: FcSet,
    pub is_local: bool,
    pub is_twister: bool,
    pub ramond_class: usize,
    pub twister_core: FcSet,
    pub table: OverlapTable,
    pub center: Center,
    pub sectors: Vec<Sector>,
    /// `⟦g^⊥⟧`.
    pub twist_group_order: Cyclotomic,
    pub boson_block_count: usize,
    pub fermion_block_count: usize,
    pub checks: Vec<Check>,
}

impl DeconstructionReport {
    pub fn twist_group_order_integer(&self) -> Option<BigInt> {
        self.twist_group_order.to_integer()
    }
}

/// Sector structure of a local FC set. Non-local input is refused.
pub fn deconstruct(g: &FcSet, md: &ModularData) -> Result<DeconstructionReport> {
    if !is_local(g, md)? {
        return Err(Error::Precondition(format!("{} is not local", g.display(md))));
    }
    let core = twister_core(g, md)?;
    let twister = is_twister(g, md);
    let table = overlaps(g, md)?;
    let cl = &table.classes;
    let bl = &table.blocks;
    let center = center_of(cl, md)?;
    let r = ramond_class(g, md)?;
    let rpos = center.position(r).expect("ramond_class checks centrality");
    let mut checks = Vec::new();

    // each block inside exactly one class
    let mut block_class = vec![usize::MAX; bl.len()];
    let mut w = Vec::new();
    for (b, members) in bl.classes.iter().enumerate() {
        let c = cl.class_of[members[0]];
        if members.iter().all(|&p| cl.class_of[p] == c) {
            block_class[b] = c;
        } else {
            w.push(format!("block {} straddles classes", bl.display_class(b, md)));
        }
    }
    checks.push(Check::from_witnesses("block-in-class", w));
    if block_class.contains(&usize::MAX) {
        return Err(Error::Identity(format!("blocks of the local set {} are not inside classes", g.display(md))));
    }

    let sectors: Vec<Sector> = (0..cl.len())
        .map(|c| {
            let blocks: Vec<usize> = (0..bl.len()).filter(|&b| block_class[b] == c).collect();
            let ov = blocks.iter().map(|&b| table.overlaps[b][c]).collect();
            Sector {
                class: c,
                members: cl.classes[c].clone(),
                extent: cl.extents[c].clone(),
                central: center.position(c).is_some(),
                blocks,
                overlaps: ov,
            }
        })
        .collect();

    let triv = cl.trivial_class;
    let mut w = Vec::new();
    for s in &sectors {
        let first: u64 = s.blocks.iter().map(|&b| table.overlaps[b][triv]).sum();
        let second: u64 = (0..bl.len()).filter(|&b| block_class[b] == triv).map(|b| table.overlaps[b][s.class]).sum();
        if s.blocks.len() as u64 != first || first != second {
            w.push(format!("class {}: {} / {first} / {second}", cl.display_class(s.class, md), s.blocks.len()));
        }
    }
    checks.push(Check::from_witnesses("blockcount", w));

    let mut w = Vec::new();
    for s in &sectors {
        let rc = center.action[rpos][s.class];
        for &b in &s.blocks {
            if table.overlaps[b][rc] < 1 {
                w.push(format!("⟨{}, R{}⟩ = 0", bl.display_class(b, md), cl.display_class(s.class, md)));
            }
        }
    }
    checks.push(Check::from_witnesses("ramond-overlap", w));

    let mut w = Vec::new();
    for (zi, &z) in center.central.iter().enumerate() {
        let n = center.element_order(center.mult[zi][rpos]);
        let nq = num_rational::BigRational::from_integer(BigInt::from(n));
        for &b in &sectors[z].blocks {
            let m = &bl.classes[b];
            let h0 = md.weight(m[0]);
            for &p in &m[1..] {
                if !(&(md.weight(p) - h0) * &nq).is_integer() {
                    w.push(format!("block {} in {} with order {n}", bl.display_class(b, md), cl.display_class(z, md)));
                }
            }
        }
    }
    checks.push(Check::from_witnesses("trivblocks", w));

    let mut w = Vec::new();
    for &b in &sectors[r].blocks {
        let m = &bl.classes[b];
        if m.iter().any(|&p| !(md.weight(p) - md.weight(m[0])).is_integer()) {
            w.push(format!("block {}", bl.display_class(b, md)));
        }
    }
    checks.push(Check::from_witnesses("ramond-weights", w));

    let boson = sectors[triv].blocks.len();
    let fermion = sectors[r].blocks.len();
    if r != triv {
        let ones = sectors[triv].blocks.iter().all(|&b| table.overlaps[b][r] == 1);
        checks.push(Check::new(
            "boson-fermion",
            boson == fermion && ones,
            format!("{boson} blocks in the trivial class, {fermion} in R"),
        ));
        let ext = central_extensions(&core, md, &[2])?;
        checks.push(Check::new("twistext", ext.contains(g), format!("{} is not a Z2 extension of its core", g.display(md))));
    } else {
        checks.push(Check::new("twister-ramond", twister, "R is trivial but g is not a twister"));
    }
    checks.push(main_theorem_check(g, md)?);

    Ok(DeconstructionReport {
        g: g.clone(),
        is_local: true,
        is_twister: twister,
        ramond_class: r,
        twister_core: core,
        twist_group_order: cl.extents[triv].clone(),
        table: table.clone(),
        center,
        sectors,
        boson_block_count: boson,
        fermion_block_count: fermion,
        checks,
    })
}

/// Local sets have integral quantum dimensions.
pub fn main_theorem_check(g: &FcSet, md: &ModularData) -> Result<Check> {
    let local = is_local(g, md)?;
    let bad: Vec<String> = if local {
        g.members().iter().filter(|&&a| !md.d(a).is_integer()).map(|&a| format!("d_{} = {}", md.label(a), md.d(a))).collect()
    } else {
        Vec::new()
    };
    Ok(Check::from_witnesses("main-theorem", bad))
}

fn rational_integer(x: &Cyclotomic) -> Option<BigInt> {
    x.to_integer()
}

/// Character-ring properties for `g ∈ L_int`: integral extents dividing
/// `⟦g^⊥⟧`, vanishing of non-linear characters, the center bound, the
/// coprimality vanishing rule, and the main theorem.
pub fn char_ring_checks(g: &FcSet, md: &ModularData) -> Result<Vec<Check>> {
    let part = crate::partition::classes(g, md)?;
    let Some(total) = rational_integer(&part.extents[part.trivial_class]) else {
        return Err(Error::Precondition(format!("⟦g^⊥⟧ is not an integer for {}", g.display(md))));
    };
    let center = center_of(&part, md)?;
    let mut out = Vec::new();

    let mut w = Vec::new();
    let mut index: Vec<Option<BigInt>> = Vec::with_capacity(part.len());
    for c in 0..part.len() {
        match rational_integer(&part.extents[c]) {
            Some(e) if !e.is_zero() && total.is_multiple_of(&e) => index.push(Some(&total / &e)),
            _ => {
                w.push(format!("⟦{}⟧ = {}", part.display_class(c, md), part.extents[c].compact()));
                index.push(None);
            }
        }
    }
    out.push(Check::from_witnesses("charring-extents", w));

    let mut w = Vec::new();
    for &a in &part.alphas {
        let vanishes = (0..part.len()).any(|c| part.charval(c, a).is_zero());
        let big = !md.d(a).is_one();
        if vanishes != big {
            w.push(format!("{} (d = {})", md.label(a), md.d(a).compact()));
        }
    }
    out.push(Check::from_witnesses("charring-vanishing", w));

    let z2 = BigInt::from(center.order() * center.order());
    let total2 = &total * &total;
    let mut w = Vec::new();
    let d2: Vec<Option<BigInt>> = part.alphas.iter().map(|&a| rational_integer(&(md.d(a) * md.d(a)))).collect();
    for (i, &a) in part.alphas.iter().enumerate() {
        match &d2[i] {
            Some(d) if total2.is_multiple_of(&(&z2 * d)) => {}
            _ => w.push(format!("|Z|² d_{}² ∤ ⟦g^⊥⟧²", md.label(a))),
        }
    }
    out.push(Check::from_witnesses("charring-center", w));

    let mut w = Vec::new();
    for (i, &a) in part.alphas.iter().enumerate() {
        let Some(d) = &d2[i] else { continue };
        for c in 0..part.len() {
            let Some(m) = &index[c] else { continue };
            if d.gcd(m).is_one() {
                let v = part.charval(c, a);
                if !v.is_zero() && v.abs_squared() != md.d(a) * md.d(a) {
                    w.push(format!("{} at {}", md.label(a), part.display_class(c, md)));
                }
            }
        }
    }
    out.push(Check::from_witnesses("charring-coprime", w));
    out.push(main_theorem_check(g, md)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::RunConfig;
    use crate::fusion::build_modular_data;
    use crate::fusion::tests::{ising, toric};

    fn md_of(fd: crate::fusion::FusionData) -> ModularData {
        build_modular_data(&fd, &RunConfig::default()).unwrap()
    }

    #[test]
    fn ising_locality() {
        let md = md_of(ising());
        let g = FcSet::from_indices(3, [0, 1]);
        assert!(is_local(&g, &md).unwrap());
        assert!(!is_local(&FcSet::full(3), &md).unwrap());
        assert!(is_local(&FcSet::vacuum(3), &md).unwrap());
        assert!(!is_twister(&g, &md));
        assert_eq!(twister_core(&g, &md).unwrap(), FcSet::vacuum(3));
        let part = crate::partition::classes(&g, &md).unwrap();
        let r = ramond_class(&g, &md).unwrap();
        assert_eq!(part.classes[r], vec![2]);
        let rep = deconstruct(&g, &md).unwrap();
        assert!(rep.checks.iter().all(|c| c.passed), "{:?}", rep.checks);
        assert_eq!(rep.boson_block_count, rep.fermion_block_count);
        assert!(matches!(deconstruct(&FcSet::full(3), &md), Err(Error::Precondition(_))));
    }

    #[test]
    fn toric_twister_sectors() {
        let md = md_of(toric());
        let g = FcSet::from_indices(4, [0, 1]);
        let rep = deconstruct(&g, &md).unwrap();
        assert!(rep.is_twister);
        assert_eq!(rep.sectors.len(), 2);
        assert!(rep.sectors.iter().all(|s| s.blocks.len() == 1));
        assert_eq!(rep.twist_group_order_integer(), Some(BigInt::from(2)));
        assert_eq!(rep.ramond_class, 0);
        assert!(rep.checks.iter().all(|c| c.passed), "{:?}", rep.checks);
        assert!(char_ring_checks(&g, &md).unwrap().iter().all(|c| c.passed));

        let f = FcSet::from_indices(4, [0, 3]);
        assert!(is_local(&f, &md).unwrap());
        let r = ramond_class(&f, &md).unwrap();
        assert_ne!(r, 0);
        let rep = deconstruct(&f, &md).unwrap();
        assert!(rep.checks.iter().all(|c| c.passed), "{:?}", rep.checks);
    }

    #[test]
    fn vacuum_deconstruction() {
        let md = md_of(ising());
        let rep = deconstruct(&FcSet::vacuum(3), &md).unwrap();
        assert_eq!(rep.sectors.len(), 1);
        assert_eq!(rep.sectors[0].blocks.len(), 3);
        assert!(rep.twist_group_order.is_one());
    }
}
