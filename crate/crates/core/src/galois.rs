//! Galois permutations of primaries, the sign characters, the sets `Θ_ℓ`
//! and `Θ_ℓ⁺`, integrality of FC sets, dimension ratios and spectrum
//! polynomials.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_traits::One;

use crate::cyclo::{gcd_u64, lcm_u64, units, Cyclotomic};
use crate::error::{Error, Result};
use crate::fcsets::{dual, is_fc, FcLattice, FcSet};
use crate::fusion::ModularData;
use crate::linalg::Poly;
use crate::partition::{blocks, classes, overlaps, ClassPartition};
use crate::center::{center_of, central_quotient};
use crate::report::Check;

/// `π(ℓ)` and `ε_ℓ` for every unit `ℓ` modulo the field conductor.
#[derive(Clone, Debug)]
pub struct GaloisAction {
    /// `N`, the lcm of the weight denominators.
    pub conductor: u32,
    /// Conductor of the field holding every `ρ` entry; a multiple of `N`.
    pub field: u32,
    pub units: Vec<u32>,
    /// `perms[i][p] = π(units[i]) p`.
    pub perms: Vec<Vec<usize>>,
    /// `signs[i][p] = ε_ℓ(p)`.
    pub signs: Vec<Vec<i8>>,
    /// Congruence violations, reported as data diagnostics.
    pub diagnostics: Vec<String>,
}

impl GaloisAction {
    pub fn index_of(&self, ell: u32) -> Option<usize> {
        if self.field == 1 {
            return Some(0);
        }
        self.units.binary_search(&(ell % self.field)).ok()
    }

    /// Smallest unit mod the field conductor congruent to `ell` mod `N`.
    pub fn lift(&self, ell: i64) -> Option<u32> {
        let n = i64::from(self.conductor);
        let r = ell.rem_euclid(n) as u32;
        self.units.iter().copied().find(|&u| u % self.conductor == r)
    }

    pub fn perm(&self, ell: u32) -> &[usize] {
        &self.perms[self.index_of(ell).expect("ℓ must be a unit")]
    }

    pub fn sign(&self, ell: u32, p: usize) -> i8 {
        self.signs[self.index_of(ell).expect("ℓ must be a unit")][p]
    }

    /// Image of a set of primaries under `π(ℓ)`.
    pub fn image(&self, ell: u32, set: &[usize]) -> Vec<usize> {
        let pi = self.perm(ell);
        let mut v: Vec<usize> = set.iter().map(|&p| pi[p]).collect();
        v.sort_unstable();
        v
    }
}

fn sigma(x: &Cyclotomic, ell: u32) -> Cyclotomic {
    x.galois(i64::from(ell)).expect("ℓ is a unit of the field conductor")
}

/// Builds `π` by matching Galois-transformed irreps against the existing
/// ones, then verifies the homomorphism property, the dimension formula,
/// and that `π(−1)` is charge conjugation. The weight congruence is only
/// recorded in `diagnostics`.
pub fn galois_action(md: &ModularData) -> Result<GaloisAction> {
    let k = md.rank();
    // a multiple of N even when N = 2 canonicalizes to 1
    let n = md.base().conductor();
    let field = lcm_u64(u64::from(md.field_conductor()), u64::from(n)) as u32;
    let us = units(field);
    let mut perms = Vec::with_capacity(us.len());
    let mut signs = Vec::with_capacity(us.len());
    for &ell in &us {
        let mut pi = vec![usize::MAX; k];
        for (p, slot) in pi.iter_mut().enumerate() {
            let row: Vec<Cyclotomic> = (0..k).map(|q| sigma(md.rho(p, q), ell)).collect();
            *slot = (0..k)
                .find(|&w| (0..k).all(|q| *md.rho(w, q) == row[q]))
                .ok_or_else(|| Error::Identity(format!("no irrep matches σ_{ell} ∘ ρ_{}", md.label(p))))?;
        }
        if pi.iter().collect::<BTreeSet<_>>().len() != k {
            return Err(Error::Identity(format!("π({ell}) is not a permutation")));
        }
        let d0 = md.d(pi[0]);
        let mut eps = Vec::with_capacity(k);
        for p in 0..k {
            let ratio = &(&sigma(md.d(p), ell) * d0) / md.d(pi[p]);
            eps.push(if ratio.is_one() {
                1
            } else if (-ratio).is_one() {
                -1
            } else {
                return Err(Error::Identity(format!("σ_{ell}(d_{}) is not ±d_πp/d_π0", md.label(p))));
            });
        }
        perms.push(pi);
        signs.push(eps);
    }
    let ga = GaloisAction { conductor: n, field, units: us, perms, signs, diagnostics: Vec::new() };
    for (i, &l) in ga.units.iter().enumerate() {
        for (j, &m) in ga.units.iter().enumerate() {
            let lm = ((u64::from(l) * u64::from(m)) % u64::from(field)) as u32;
            let comp: Vec<usize> = (0..k).map(|p| ga.perms[i][ga.perms[j][p]]).collect();
            if comp != ga.perm(lm) {
                return Err(Error::Identity(format!("π({l})∘π({m}) ≠ π({lm})")));
            }
        }
    }
    let minus = ga.lift(-1).expect("−1 is a unit");
    if (0..k).any(|p| ga.perm(minus)[p] != md.charge_conjugate(p)) {
        return Err(Error::Identity("π(−1) is not charge conjugation".into()));
    }
    let mut ga = ga;
    ga.diagnostics = omgalpi_violations(&ga, md);
    Ok(ga)
}

/// `h_{πp} − h_{π0} − ℓ² h_p ∈ Z` for every unit and primary.
fn omgalpi_violations(ga: &GaloisAction, md: &ModularData) -> Vec<String> {
    let mut out = Vec::new();
    for (i, &ell) in ga.units.iter().enumerate() {
        let l2 = num_rational::BigRational::from_integer((u64::from(ell) * u64::from(ell)).into());
        let pi = &ga.perms[i];
        for p in 0..md.rank() {
            let v = md.weight(pi[p]) - md.weight(pi[0]) - &l2 * md.weight(p);
            if !v.is_integer() {
                out.push(format!("weight congruence fails for ℓ={ell}, p={}", md.label(p)));
            }
        }
    }
    out
}

/// The action-level checks as a list (homomorphism and galact3 are hard
/// errors in `galois_action`, so they pass whenever it succeeds).
pub fn action_checks(ga: &GaloisAction) -> Vec<Check> {
    vec![
        Check::pass("galois-homomorphism"),
        Check::pass("galact"),
        Check::pass("galact3"),
        Check::pass("conjugation"),
        Check::from_witnesses("omgalpi", ga.diagnostics.clone()),
    ]
}

/// `(Θ_ℓ, Θ_ℓ⁺)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaSets {
    pub theta: FcSet,
    pub theta_plus: FcSet,
}

/// `σ_ℓ(d_p) / d_p` when it is `±1`.
fn dim_sign(md: &ModularData, ell: u32, p: usize) -> Option<i8> {
    let s = sigma(md.d(p), ell);
    if s == *md.d(p) {
        Some(1)
    } else if s == -md.d(p) {
        Some(-1)
    } else {
        None
    }
}

/// `Θ_ℓ` and `Θ_ℓ⁺`, both verified FC, with the sign multiplicative on
/// fusion triples inside `Θ_ℓ`.
pub fn theta_sets(md: &ModularData, ga: &GaloisAction, ell: u32) -> Result<ThetaSets> {
    if ga.index_of(ell).is_none() {
        return Err(Error::Precondition(format!("{ell} is not a unit mod {}", ga.field)));
    }
    let k = md.rank();
    let signs: Vec<Option<i8>> = (0..k).map(|p| dim_sign(md, ell, p)).collect();
    let theta = FcSet::from_indices(k, (0..k).filter(|&p| signs[p].is_some()));
    let theta_plus = FcSet::from_indices(k, (0..k).filter(|&p| signs[p] == Some(1)));
    for s in [&theta, &theta_plus] {
        if !is_fc(s, md) {
            return Err(Error::Identity(format!("Θ set {} for ℓ={ell} is not FC", s.display(md))));
        }
    }
    for a in theta.members() {
        for b in theta.members() {
            for (g, _) in md.base().products(a, b) {
                if signs[g] != Some(signs[a].unwrap() * signs[b].unwrap()) {
                    return Err(Error::Identity(format!(
                        "sign is not multiplicative at {}·{} → {}",
                        md.label(a),
                        md.label(b),
                        md.label(g)
                    )));
                }
            }
        }
    }
    Ok(ThetaSets { theta, theta_plus })
}

/// `Θ_ℓ = Θ_ℓ⁺`, or `Θ_ℓ⁺` is the quotient of `Θ_ℓ` by the order-two central
/// subgroup generated by `ℓΘ_ℓ^⊥`.
pub fn theta_extension_check(md: &ModularData, ga: &GaloisAction, ell: u32) -> Result<Check> {
    let t = theta_sets(md, ga, ell)?;
    let name = "theta-extension";
    if t.theta == t.theta_plus {
        return Ok(Check::pass(name));
    }
    let part = classes(&t.theta, md)?;
    let moved = ga.image(ell, &part.classes[part.trivial_class]);
    let Some(c) = part.classes.iter().position(|cl| *cl == moved) else {
        return Ok(Check::fail(name, "ℓΘ^⊥ is not a Θ-class"));
    };
    let mut z = vec![part.trivial_class, c];
    z.sort_unstable();
    let q = central_quotient(&t.theta, &z, md)?;
    Ok(Check::new(name, q == t.theta_plus, format!("Θ/Z = {} but Θ⁺ = {}", q.display(md), t.theta_plus.display(md))))
}

/// Membership of `g` in `L_int` and `L_int⁺`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMembership {
    pub in_l_int: bool,
    pub in_l_int_plus: bool,
    /// Units `ℓ` with `g ⊆ Θ_ℓ`.
    pub theta_units: Vec<u32>,
}

/// Evaluates the four equivalent conditions for every `ℓ` and requires them
/// to agree, then cross-checks integrality of `⟦g^⊥⟧` and of the dimensions.
pub fn int_lattice_membership(g: &FcSet, md: &ModularData, ga: &GaloisAction) -> Result<IntMembership> {
    let part = classes(g, md)?;
    let center = center_of(&part, md)?;
    let ext = part.extents[part.trivial_class].clone();
    let dual_set = &part.classes[part.trivial_class];
    let alphas = &part.alphas;
    let mut theta_units = Vec::new();
    let mut all_plus = true;
    for &ell in &ga.units {
        let a = alphas.iter().all(|&x| dim_sign(md, ell, x).is_some());
        let b = alphas.iter().all(|&x| {
            let d2 = md.d(x) * md.d(x);
            sigma(&d2, ell) == d2
        });
        let c = sigma(&ext, ell) == ext;
        let moved = ga.image(ell, dual_set);
        let dd = part.classes.iter().position(|cl| *cl == moved).is_some_and(|ci| center.central.contains(&ci));
        if !(a == b && b == c && c == dd) {
            return Err(Error::Identity(format!(
                "integrality conditions disagree for {} at ℓ={ell}: {a} {b} {c} {dd}",
                g.display(md)
            )));
        }
        let plus = alphas.iter().all(|&x| dim_sign(md, ell, x) == Some(1));
        if plus != (moved == *dual_set) {
            return Err(Error::Identity(format!("Θ⁺ criterion disagrees for {} at ℓ={ell}", g.display(md))));
        }
        all_plus &= plus;
        if a {
            theta_units.push(ell);
        }
    }
    let in_l_int = ext.is_integer();
    let in_l_int_plus = alphas.iter().all(|&x| md.d(x).is_integer());
    if in_l_int != (theta_units.len() == ga.units.len()) {
        return Err(Error::Identity(format!("⟦g^⊥⟧ integrality disagrees with Θ containment for {}", g.display(md))));
    }
    if in_l_int_plus != all_plus {
        return Err(Error::Identity(format!("dimension integrality disagrees with Θ⁺ containment for {}", g.display(md))));
    }
    Ok(IntMembership { in_l_int, in_l_int_plus, theta_units })
}

/// Block-level dimension laws for `g ⊆ Θ_ℓ`.
pub fn dimratio_check(g: &FcSet, md: &ModularData, ga: &GaloisAction, ell: u32, prec: u32) -> Result<Vec<Check>> {
    let t = theta_sets(md, ga, ell)?;
    if !g.is_subset(&t.theta) {
        return Err(Error::Precondition(format!("{} is not contained in Θ_{ell}", g.display(md))));
    }
    let plus = g.is_subset(&t.theta_plus);
    let bl = blocks(g, md)?;
    let ratio = |p: usize| &sigma(md.d(p), ell) / md.d(p);
    let mut galpi = Vec::new();
    let mut dimratio = Vec::new();
    let mut integer = Vec::new();
    let int_dims = g.members().iter().all(|&a| md.d(a).is_integer());
    for (bi, b) in bl.classes.iter().enumerate() {
        let r0 = ratio(b[0]);
        for &p in &b[1..] {
            let r = ratio(p);
            // for Θ_ℓ ⊋ Θ_ℓ⁺ a block may be a union of two Θ⁺-blocks whose
            // ratios differ by a sign
            let same = if plus { r == r0 } else { &r * &r == &r0 * &r0 };
            if !same {
                galpi.push(format!("block {} at {}", bl.display_class(bi, md), md.label(p)));
            }
        }
        let image = ga.image(ell, b);
        let Some(ib) = bl.classes.iter().position(|c| *c == image) else {
            dimratio.push(format!("image of block {} is not a block", bl.display_class(bi, md)));
            continue;
        };
        let pi = ga.perm(ell);
        for &p in b {
            let lhs = &(md.d(pi[p]) * md.d(pi[p])) * &bl.extents[ib];
            let rhs = &(md.d(p) * md.d(p)) * &bl.extents[bi];
            if lhs != rhs {
                dimratio.push(format!("{} in block {}", md.label(p), bl.display_class(bi, md)));
            }
        }
        if int_dims {
            let db = b
                .iter()
                .map(|&p| md.d(p))
                .min_by(|x, y| x.cmp_real(y, prec).unwrap_or(Ordering::Equal))
                .expect("blocks are nonempty");
            for &p in b {
                if !(md.d(p) / db).is_rational() {
                    integer.push(format!("{} in block {}", md.label(p), bl.display_class(bi, md)));
                }
            }
        }
    }
    Ok(vec![
        Check::from_witnesses("galpi", galpi),
        Check::from_witnesses("dimratio", dimratio),
        Check::from_witnesses("integer-block", integer),
    ])
}

/// `P_C(x) = Π_{p∈C} (x − 1/S_0p²)`.
pub fn spectrum_poly(members: &[usize], md: &ModularData) -> Poly<Cyclotomic> {
    let roots: Vec<Cyclotomic> = members.iter().map(|&p| md.s2(p).inverse().expect("S_0p² ≠ 0")).collect();
    Poly::from_roots(roots.iter())
}

/// Coefficients from the constant term up, compactly.
pub fn poly_display(p: &Poly<Cyclotomic>) -> String {
    let parts: Vec<String> = p.coeffs().iter().map(Cyclotomic::compact).collect();
    format!("[{}]", parts.join(","))
}

fn poly_eq(a: &Poly<Cyclotomic>, b: &Poly<Cyclotomic>) -> bool {
    a.coeffs() == b.coeffs()
}

/// One row of the spectrum comparison.
#[derive(Clone, Debug)]
pub struct SpectRow {
    pub ell: u32,
    pub class: usize,
    pub image: usize,
    pub poly: Poly<Cyclotomic>,
    pub agree: bool,
}

/// Spectrum-polynomial invariance for every `ℓ` with `g ⊆ Θ_ℓ`, plus the
/// companion identity `σ_ℓ(P_C) = P_{ℓC}`, the rescaling law when
/// `g^⊥ ⊆ Θ_ℓ`, and integrality of the coefficients for `g ∈ L_int`.
pub fn conjecture_spect(g: &FcSet, md: &ModularData, ga: &GaloisAction) -> Result<(Vec<Check>, Vec<SpectRow>)> {
    let part = classes(g, md)?;
    let gd = dual(g, md)?;
    let polys: Vec<Poly<Cyclotomic>> = part.classes.iter().map(|c| spectrum_poly(c, md)).collect();
    let mut rows = Vec::new();
    let mut spect = Vec::new();
    let mut companion = Vec::new();
    let mut trans = Vec::new();
    for &ell in &ga.units {
        let t = theta_sets(md, ga, ell)?;
        let inside = g.is_subset(&t.theta);
        let dual_inside = gd.is_subset(&t.theta);
        for (c, members) in part.classes.iter().enumerate() {
            let image = ga.image(ell, members);
            let ic = part
                .classes
                .iter()
                .position(|x| *x == image)
                .ok_or_else(|| Error::Identity(format!("π({ell}) does not map classes to classes")))?;
            let conj = polys[c].map(|x| sigma(x, ell));
            if !poly_eq(&conj, &polys[ic]) {
                companion.push(format!("ℓ={ell} C={}", part.display_class(c, md)));
            }
            if inside {
                let agree = poly_eq(&polys[c], &polys[ic]);
                if !agree {
                    spect.push(format!(
                        "ℓ={ell} C={} P_C={} P_ℓC={}",
                        part.display_class(c, md),
                        poly_display(&polys[c]),
                        poly_display(&polys[ic])
                    ));
                }
                rows.push(SpectRow { ell, class: c, image: ic, poly: polys[c].clone(), agree });
            }
            if dual_inside {
                let r = &part.extents[ic] / &part.extents[c];
                match polys[c].rescale(&r) {
                    Some(p) if poly_eq(&p, &polys[ic]) => {}
                    _ => trans.push(format!("ℓ={ell} C={}", part.display_class(c, md))),
                }
            }
        }
    }
    let mut checks = vec![
        Check::from_witnesses("spect", spect),
        Check::from_witnesses("spect-companion", companion),
        Check::from_witnesses("spptrans", trans),
    ];
    if part.extents[part.trivial_class].is_integer() {
        let w: Vec<String> = polys
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.coeffs().iter().all(Cyclotomic::is_integer))
            .map(|(c, p)| format!("C={} P={}", part.display_class(c, md), poly_display(p)))
            .collect();
        checks.push(Check::from_witnesses("spect-integral", w));
    }
    Ok((checks, rows))
}

/// Class and block invariances under every `π(ℓ)`.
pub fn galact_invariances(g: &FcSet, md: &ModularData, ga: &GaloisAction) -> Result<Vec<Check>> {
    let tab = overlaps(g, md)?;
    let cl = &tab.classes;
    let bl = &tab.blocks;
    let part_center = center_of(cl, md)?;
    let find = |p: &ClassPartition, set: &[usize]| p.classes.iter().position(|c| c.as_slice() == set);
    let mut classmap = Vec::new();
    let mut zmap = Vec::new();
    let mut ovl = Vec::new();
    let mut ext = Vec::new();
    let mut blockmap = Vec::new();
    for &ell in &ga.units {
        let mut cimg = Vec::with_capacity(cl.len());
        for c in 0..cl.len() {
            match find(cl, &ga.image(ell, &cl.classes[c])) {
                Some(ic) => cimg.push(ic),
                None => {
                    classmap.push(format!("ℓ={ell} C={}", cl.display_class(c, md)));
                    cimg.push(usize::MAX);
                }
            }
        }
        let mut bimg = Vec::with_capacity(bl.len());
        for b in 0..bl.len() {
            match find(bl, &ga.image(ell, &bl.classes[b])) {
                Some(ib) => bimg.push(ib),
                None => {
                    blockmap.push(format!("ℓ={ell} b={}", bl.display_class(b, md)));
                    bimg.push(usize::MAX);
                }
            }
        }
        if cimg.contains(&usize::MAX) || bimg.contains(&usize::MAX) {
            continue;
        }
        for c in 0..cl.len() {
            if cl.extents[cimg[c]] != sigma(&cl.extents[c], ell) {
                ext.push(format!("ℓ={ell} ⟦ℓC⟧ for C={}", cl.display_class(c, md)));
            }
            for b in 0..bl.len() {
                if tab.overlaps[b][cimg[c]] != tab.overlaps[b][c] || tab.overlaps[bimg[b]][c] != tab.overlaps[b][c] {
                    ovl.push(format!("ℓ={ell} b={} C={}", bl.display_class(b, md), cl.display_class(c, md)));
                }
            }
        }
        for b in 0..bl.len() {
            if bl.extents[bimg[b]] != sigma(&bl.extents[b], ell) {
                ext.push(format!("ℓ={ell} ⟦ℓb⟧ for b={}", bl.display_class(b, md)));
            }
        }
        // ℓ(zC) = z^ℓ(ℓC)
        for (zi, _) in part_center.central.iter().enumerate() {
            let ord = part_center.element_order(zi);
            let zl = (0..ell as usize % ord).fold(0usize, |acc, _| part_center.mult[acc][zi]);
            for c in 0..cl.len() {
                let lhs = cimg[part_center.action[zi][c]];
                let rhs = part_center.action[zl][cimg[c]];
                if lhs != rhs {
                    zmap.push(format!("ℓ={ell} z={} C={}", cl.display_class(part_center.central[zi], md), cl.display_class(c, md)));
                }
            }
        }
    }
    Ok(vec![
        Check::from_witnesses("galact-classes", classmap),
        Check::from_witnesses("galact-center", zmap),
        Check::from_witnesses("galact-overlaps", ovl),
        Check::from_witnesses("galact-extents", ext),
        Check::from_witnesses("galactbl", blockmap),
    ])
}

/// `⟦h^⊥⟧` divides `⟦g^⊥⟧` as an algebraic integer for nested `h ⊆ g`.
pub fn lagrange_check(lat: &FcLattice, md: &ModularData) -> Check {
    let ext: Vec<Cyclotomic> =
        lat.sets.iter().map(|s| s.members().iter().map(|&a| md.d(a) * md.d(a)).sum()).collect();
    let mut w = Vec::new();
    for (i, h) in lat.sets.iter().enumerate() {
        for (j, g) in lat.sets.iter().enumerate() {
            if i != j && h.is_subset(g) {
                let q = &ext[j] / &ext[i];
                if !q.is_algebraic_integer() {
                    w.push(format!("{} ⊆ {}: ratio {}", h.display(md), g.display(md), q.compact()));
                }
            }
        }
    }
    Check::from_witnesses("lagrange", w)
}

/// Whether `ℓ` is coprime to `n`.
pub fn is_unit(ell: i64, n: u32) -> bool {
    n == 1 || gcd_u64(ell.unsigned_abs(), u64::from(n)) == 1
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
    fn fibonacci_pi2_swaps_with_sign() {
        let md = md_of(fibonacci());
        let ga = galois_action(&md).unwrap();
        assert_eq!(ga.conductor, 5);
        assert_eq!(ga.perm(2), &[1, 0]);
        assert_eq!(ga.sign(2, 1), -1);
        assert_eq!(ga.perm(1), &[0, 1]);
        let t = theta_sets(&md, &ga, 2).unwrap();
        assert_eq!(t.theta, FcSet::vacuum(2));
        assert_eq!(t.theta_plus, FcSet::vacuum(2));
        let m = int_lattice_membership(&FcSet::full(2), &md, &ga).unwrap();
        assert!(!m.in_l_int && !m.in_l_int_plus);
    }

    #[test]
    fn ising_theta_and_membership() {
        let md = md_of(ising());
        let ga = galois_action(&md).unwrap();
        assert_eq!(ga.conductor, 16);
        assert_eq!(ga.perm(ga.lift(-1).unwrap()), &[0, 1, 2]);
        // σ_7 fixes √2; σ_3 flips it
        assert_eq!(theta_sets(&md, &ga, 7).unwrap().theta_plus, FcSet::full(3));
        let t = theta_sets(&md, &ga, 3).unwrap();
        assert_eq!(t.theta, FcSet::full(3));
        assert_eq!(t.theta_plus, FcSet::from_indices(3, [0, 1]));
        assert!(theta_extension_check(&md, &ga, 3).unwrap().passed);
        let small = FcSet::from_indices(3, [0, 1]);
        let m = int_lattice_membership(&small, &md, &ga).unwrap();
        assert!(m.in_l_int && m.in_l_int_plus);
        let m = int_lattice_membership(&FcSet::full(3), &md, &ga).unwrap();
        assert!(m.in_l_int && !m.in_l_int_plus);
        let checks = dimratio_check(&small, &md, &ga, 3, 192).unwrap();
        assert!(checks.iter().all(|c| c.passed), "{checks:?}");
        assert!(action_checks(&ga).iter().all(|c| c.passed));
    }

    #[test]
    fn spectrum_polynomials() {
        let md = md_of(ising());
        let p = spectrum_poly(&[2], &md);
        assert_eq!(p.coeffs(), &[Cyclotomic::from_int(-2), Cyclotomic::one()]);
        let p0 = spectrum_poly(&[0], &md);
        assert_eq!(p0.coeffs()[0], -md.global_dim().clone());

        let md = md_of(toric());
        let p = spectrum_poly(&[2, 3], &md);
        assert_eq!(p.coeffs(), &[Cyclotomic::from_int(16), Cyclotomic::from_int(-8), Cyclotomic::one()]);
    }

    #[test]
    fn catalog_style_suites_pass() {
        for fd in [ising(), fibonacci(), toric()] {
            let md = md_of(fd);
            let ga = galois_action(&md).unwrap();
            let lat = enumerate_fcsets(&md, &RunConfig::default()).unwrap();
            assert!(lagrange_check(&lat, &md).passed);
            for g in &lat.sets {
                let (checks, _) = conjecture_spect(g, &md, &ga).unwrap();
                assert!(checks.iter().all(|c| c.passed), "{checks:?}");
                let inv = galact_invariances(g, &md, &ga).unwrap();
                assert!(inv.iter().all(|c| c.passed), "{inv:?}");
                let m = int_lattice_membership(g, &md, &ga).unwrap();
                for &ell in &m.theta_units {
                    let d = dimratio_check(g, &md, &ga, ell, 192).unwrap();
                    assert!(d.iter().all(|c| c.passed), "{d:?}");
                }
            }
            for &ell in &ga.units {
                assert!(theta_extension_check(&md, &ga, ell).unwrap().passed);
            }
        }
    }
}
