//! Whole-model check suites: every applicable identity over every FC set.
//! Errors from the underlying computations become failing checks so a run
//! always reports all findings.

use crate::center::{
    center_checks, center_of, conjecture_algint, intermediate_check, nilpotent_divisor_check, quotient_structure,
    roundtrip_check,
};
use crate::config::RunConfig;
use crate::error::Result;
use crate::fcsets::FcLattice;
use crate::fusion::{omch_check, verlinde_check, verrep_check, ModularData};
use crate::galois::{
    action_checks, conjecture_spect, dimratio_check, galact_invariances, int_lattice_membership, lagrange_check,
    theta_extension_check, GaloisAction,
};
use crate::local::{char_ring_checks, deconstruct, is_local, main_theorem_check};
use crate::partition::{classes, reciprocity_all, verify_partition_identities};
use crate::report::{Check, Record};

/// A check together with the FC set it was run on (`-` for model-wide checks).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetCheck {
    pub set: String,
    pub check: Check,
}

impl SetCheck {
    pub fn record(&self, model: &str) -> Record {
        Record::new("check")
            .kv("model", model)
            .kv("set", &self.set)
            .kv("name", &self.check.name)
            .kv("status", if self.check.passed { "PASS" } else { "FAIL" })
            .kv("detail", &self.check.detail)
    }
}

fn push_all(out: &mut Vec<SetCheck>, set: &str, checks: impl IntoIterator<Item = Check>) {
    out.extend(checks.into_iter().map(|check| SetCheck { set: set.to_string(), check }));
}

fn push_res<T: IntoIterator<Item = Check>>(out: &mut Vec<SetCheck>, set: &str, name: &str, r: Result<T>) {
    match r {
        Ok(c) => push_all(out, set, c),
        Err(e) => push_all(out, set, [Check::fail(name, e.to_string())]),
    }
}

/// Fusion-level checks plus the partition identities on every FC set and
/// reciprocity across the lattice.
pub fn identity_suite(md: &ModularData, lat: &FcLattice, cfg: &RunConfig) -> Vec<SetCheck> {
    let mut out = Vec::new();
    push_all(
        &mut out,
        "-",
        [
            Check::new("verlinde", verlinde_check(md), "fusion differs from Verlinde"),
            Check::new("omch", omch_check(md), "ω_p ω_q ρ_r(p,q) mismatch"),
            Check::new("verrep", verrep_check(md), "ρ_q is not a fusion character"),
        ],
    );
    for g in &lat.sets {
        push_all(&mut out, &g.display(md), verify_partition_identities(g, md, cfg.precision));
    }
    push_res(&mut out, "-", "reciprocity", reciprocity_all(lat, md).map(|c| [c]));
    out
}

/// Center structure, central quotients for every subgroup of the center,
/// the extension round trip and the nilpotency divisor test.
pub fn center_suite(md: &ModularData, lat: &FcLattice) -> Vec<SetCheck> {
    let mut out = Vec::new();
    for g in &lat.sets {
        let name = g.display(md);
        let part = match classes(g, md) {
            Ok(p) => p,
            Err(e) => {
                push_all(&mut out, &name, [Check::fail("classes", e.to_string())]);
                continue;
            }
        };
        let center = match center_of(&part, md) {
            Ok(c) => c,
            Err(e) => {
                push_all(&mut out, &name, [Check::fail("center", e.to_string())]);
                continue;
            }
        };
        push_all(&mut out, &name, center_checks(&part, &center, md));
        for z in center.subgroups() {
            push_res(&mut out, &name, "quotient-structure", quotient_structure(g, &z, md).map(|q| q.checks));
            push_res(&mut out, &name, "extension-roundtrip", roundtrip_check(g, &z, md).map(|c| [c]));
            push_res(&mut out, &name, "intermediate", intermediate_check(g, &z, md, lat).map(|c| [c]));
        }
        push_res(&mut out, &name, "nilpotent-divisor", nilpotent_divisor_check(g, md, lat).map(|c| [c]));
    }
    out
}

/// Galois action axioms, Θ sets for every unit, and per-set invariances,
/// membership agreement and dimension ratios.
pub fn galois_suite(md: &ModularData, lat: &FcLattice, ga: &GaloisAction, cfg: &RunConfig) -> Vec<SetCheck> {
    let mut out = Vec::new();
    push_all(&mut out, "-", action_checks(ga));
    for &ell in &ga.units {
        push_res(&mut out, "-", "theta-extension", theta_extension_check(md, ga, ell).map(|c| [c]));
    }
    for g in &lat.sets {
        let name = g.display(md);
        push_res(&mut out, &name, "galact-invariances", galact_invariances(g, md, ga));
        match int_lattice_membership(g, md, ga) {
            Ok(m) => {
                push_all(&mut out, &name, [Check::pass("intspread")]);
                for &ell in &m.theta_units {
                    push_res(&mut out, &name, "dimratio", dimratio_check(g, md, ga, ell, cfg.precision));
                }
            }
            Err(e) => push_all(&mut out, &name, [Check::fail("intspread", e.to_string())]),
        }
    }
    out
}

/// Sector structure, the main theorem and the character-ring properties on
/// every local FC set.
pub fn local_suite(md: &ModularData, lat: &FcLattice) -> Vec<SetCheck> {
    let mut out = Vec::new();
    for g in &lat.sets {
        let name = g.display(md);
        match is_local(g, md) {
            Ok(true) => {}
            Ok(false) => continue,
            Err(e) => {
                push_all(&mut out, &name, [Check::fail("locality", e.to_string())]);
                continue;
            }
        }
        push_res(&mut out, &name, "deconstruct", deconstruct(g, md).map(|r| r.checks));
        push_res(&mut out, &name, "main-theorem", main_theorem_check(g, md).map(|c| [c]));
        push_res(&mut out, &name, "charring", char_ring_checks(g, md));
    }
    out
}

/// Conjecture suites accepted by [`conjecture_suite`].
pub const CONJECTURES: &[&str] = &["algint", "spect", "lagrange", "charring"];

/// Runs the named conjecture tests. Counterexamples are reported as failing
/// checks carrying their witness.
pub fn conjecture_suite(md: &ModularData, lat: &FcLattice, ga: &GaloisAction, suites: &[&str]) -> Vec<SetCheck> {
    let mut out = Vec::new();
    for &s in suites {
        match s {
            "algint" => {
                for g in &lat.sets {
                    let name = g.display(md);
                    push_res(&mut out, &name, "algint", classes(g, md).map(|p| conjecture_algint(&p, md)));
                }
            }
            "spect" => {
                for g in &lat.sets {
                    let name = g.display(md);
                    push_res(&mut out, &name, "spect", conjecture_spect(g, md, ga).map(|(c, _)| c));
                }
            }
            "lagrange" => push_all(&mut out, "-", [lagrange_check(lat, md)]),
            "charring" => {
                for g in &lat.sets {
                    let name = g.display(md);
                    match int_lattice_membership(g, md, ga) {
                        Ok(m) if m.in_l_int => push_res(&mut out, &name, "charring", char_ring_checks(g, md)),
                        Ok(_) => {}
                        Err(e) => push_all(&mut out, &name, [Check::fail("charring", e.to_string())]),
                    }
                }
            }
            other => push_all(&mut out, "-", [Check::fail("suite", format!("unknown suite '{other}'"))]),
        }
    }
    out
}

/// Every suite on one model.
pub fn full_suite(md: &ModularData, lat: &FcLattice, ga: &GaloisAction, cfg: &RunConfig) -> Vec<SetCheck> {
    let mut out = identity_suite(md, lat, cfg);
    out.extend(center_suite(md, lat));
    out.extend(galois_suite(md, lat, ga, cfg));
    out.extend(local_suite(md, lat));
    out.extend(conjecture_suite(md, lat, ga, CONJECTURES));
    out
}

/// Convenience for callers that only need the set list of failures.
pub fn failures(checks: &[SetCheck]) -> Vec<&SetCheck> {
    checks.iter().filter(|c| !c.check.passed).collect()
}
