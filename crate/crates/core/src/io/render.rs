//! Report emission: aligned text tables for people, `key=value` records for
//! machines. Both forms are deterministic functions of their input.

use std::str::FromStr;

use crate::fcsets::{FcLattice, LatticeProps};
use crate::fusion::ModularData;
use crate::galois::{GaloisAction, ThetaSets};
use crate::local::DeconstructionReport;
use crate::partition::{extent, OverlapTable};
use crate::report::Record;
use crate::suite::SetCheck;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Records,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "text" => Ok(Format::Text),
            "records" => Ok(Format::Records),
            _ => Err(format!("unknown output format '{s}' (text or records)")),
        }
    }
}

/// Left-aligned columns separated by two spaces.
fn table(header: &[&str], rows: &[Vec<String>]) -> Vec<String> {
    let mut width: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (i, c) in r.iter().enumerate() {
            width[i] = width[i].max(c.chars().count());
        }
    }
    let line = |cells: Vec<String>| {
        let mut s = String::new();
        for (i, c) in cells.iter().enumerate() {
            if i + 1 == cells.len() {
                s.push_str(c);
            } else {
                s.push_str(c);
                s.push_str(&" ".repeat(width[i] - c.chars().count() + 2));
            }
        }
        s
    };
    let mut out = vec![line(header.iter().map(|h| h.to_string()).collect())];
    out.extend(rows.iter().map(|r| line(r.clone())));
    out
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn count(n: usize, noun: &str) -> String {
    if n == 1 {
        format!("1 {noun}")
    } else if noun.ends_with('s') {
        format!("{n} {noun}es")
    } else {
        format!("{n} {noun}s")
    }
}

fn emit(fmt: Format, text: Vec<String>, records: Vec<Record>) -> Vec<String> {
    match fmt {
        Format::Text => text,
        Format::Records => records.iter().map(Record::to_string).collect(),
    }
}

/// Model summary and the per-primary data.
pub fn info(md: &ModularData, fmt: Format) -> Vec<String> {
    let head = Record::new("model")
        .kv("name", md.name())
        .kv("rank", md.rank())
        .kv("conductor", md.base().conductor())
        .kv("field", md.field_conductor())
        .kv("global_dim", md.global_dim().compact());
    let mut recs = vec![head];
    let mut rows = Vec::new();
    for p in 0..md.rank() {
        let conj = md.label(md.charge_conjugate(p)).to_string();
        recs.push(
            Record::new("primary")
                .kv("index", p)
                .kv("label", md.label(p))
                .kv("weight", md.weight(p))
                .kv("d", md.d(p).compact())
                .kv("conj", &conj),
        );
        rows.push(vec![p.to_string(), md.label(p).to_string(), md.weight(p).to_string(), md.d(p).compact(), conj]);
    }
    let mut text = vec![
        format!("model {}: rank {}, conductor {}", md.name(), md.rank(), md.base().conductor()),
        format!("global dimension {}", md.global_dim().compact()),
        String::new(),
    ];
    text.extend(table(&["#", "label", "h", "d", "conj"], &rows));
    for d in md.diagnostics() {
        text.push(format!("note: {d}"));
        recs.push(Record::new("diagnostic").kv("text", d));
    }
    emit(fmt, text, recs)
}

/// FC sets with size, extent and locality, then the lattice properties.
pub fn fcsets(lat: &FcLattice, props: &LatticeProps, md: &ModularData, fmt: Format) -> Vec<String> {
    let mut recs = Vec::new();
    let mut rows = Vec::new();
    for (i, g) in lat.sets.iter().enumerate() {
        let ext = extent(g, md).map(|e| e.compact()).unwrap_or_else(|e| e.to_string());
        let local = crate::local::is_local(g, md).map(yes).unwrap_or("error");
        recs.push(
            Record::new("fcset")
                .kv("index", i)
                .kv("members", g.display(md))
                .kv("size", g.len())
                .kv("extent", &ext)
                .kv("local", local),
        );
        rows.push(vec![i.to_string(), g.display(md), g.len().to_string(), ext, local.to_string()]);
    }
    let witness = |w: Option<[usize; 3]>| {
        w.map(|[a, b, c]| format!("({},{},{})", lat.sets[a].display(md), lat.sets[b].display(md), lat.sets[c].display(md)))
            .unwrap_or_else(|| "-".into())
    };
    let mut lattice = Record::new("lattice")
        .kv("sets", lat.len())
        .kv("modular", yes(props.is_modular))
        .kv("distributive", yes(props.is_distributive))
        .kv("modular_witness", witness(props.modular_witness))
        .kv("distributive_witness", witness(props.distributive_witness));
    if let Some(a) = props.arguesian {
        lattice = lattice.kv("arguesian", yes(a));
    }
    recs.push(lattice);
    for &(lo, hi) in &lat.hasse {
        recs.push(Record::new("cover").kv("lower", lo).kv("upper", hi));
    }

    let mut text = table(&["#", "set", "size", "extent", "local"], &rows);
    text.push(String::new());
    text.push(format!(
        "{} sets, modular: {}, distributive: {}",
        lat.len(),
        yes(props.is_modular),
        yes(props.is_distributive)
    ));
    if props.modular_witness.is_some() {
        text.push(format!("modular law fails at {}", witness(props.modular_witness)));
    }
    if props.distributive_witness.is_some() {
        text.push(format!("distributive law fails at {}", witness(props.distributive_witness)));
    }
    if let Some(a) = props.arguesian {
        text.push(format!("arguesian: {}", yes(a)));
    }
    emit(fmt, text, recs)
}

/// Classes, blocks and their overlap matrix.
pub fn classes(tab: &OverlapTable, md: &ModularData, fmt: Format) -> Vec<String> {
    let cl = &tab.classes;
    let bl = &tab.blocks;
    let mut recs = Vec::new();
    let mut crow = Vec::new();
    for c in 0..cl.len() {
        let m = cl.display_class(c, md);
        recs.push(Record::new("class").kv("index", c).kv("members", &m).kv("extent", cl.extents[c].compact()));
        crow.push(vec![format!("C{c}"), m, cl.extents[c].compact()]);
    }
    let mut brow = Vec::new();
    for b in 0..bl.len() {
        let m = bl.display_class(b, md);
        recs.push(Record::new("block").kv("index", b).kv("members", &m).kv("extent", bl.extents[b].compact()));
        let mut row = vec![format!("b{b}"), m];
        for c in 0..cl.len() {
            let v = tab.get(b, c);
            row.push(v.to_string());
            if v != 0 {
                recs.push(Record::new("overlap").kv("block", b).kv("class", c).kv("value", v));
            }
        }
        brow.push(row);
    }
    let mut text = vec![format!("{} of {}", count(cl.len(), "class"), cl.fcset.display(md))];
    text.extend(table(&["class", "members", "extent"], &crow));
    text.push(String::new());
    text.push(count(bl.len(), "block"));
    let heads: Vec<String> = (0..cl.len()).map(|c| format!("C{c}")).collect();
    let mut header = vec!["block", "members"];
    header.extend(heads.iter().map(String::as_str));
    text.extend(table(&header, &brow));
    emit(fmt, text, recs)
}

/// Sector table of a deconstruction with its checks.
pub fn deconstruction(rep: &DeconstructionReport, md: &ModularData, fmt: Format) -> Vec<String> {
    let order = rep.twist_group_order_integer();
    let order_s = order.as_ref().map(ToString::to_string).unwrap_or_else(|| rep.twist_group_order.compact());
    let integral = order.is_some();
    let mut recs = vec![Record::new("deconstruction")
        .kv("set", rep.g.display(md))
        .kv("twister", yes(rep.is_twister))
        .kv("core", rep.twister_core.display(md))
        .kv("ramond_class", rep.ramond_class)
        .kv("sectors", rep.sectors.len())
        .kv("blocks", rep.table.blocks.len())
        .kv("group_order", &order_s)
        .kv("group_order_integral", yes(integral))
        .kv("center_order", rep.center.order())
        .kv("boson_blocks", rep.boson_block_count)
        .kv("fermion_blocks", rep.fermion_block_count)];
    let mut rows = Vec::new();
    for s in &rep.sectors {
        let blocks: Vec<String> = s.blocks.iter().map(|&b| rep.table.blocks.display_class(b, md)).collect();
        let ov: Vec<String> = s.overlaps.iter().map(u64::to_string).collect();
        recs.push(
            Record::new("sector")
                .kv("class", s.class)
                .kv("members", rep.table.classes.display_class(s.class, md))
                .kv("extent", s.extent.compact())
                .kv("central", yes(s.central))
                .kv("blocks", blocks.join(","))
                .kv("overlaps", ov.join(",")),
        );
        let name = if s.class == rep.ramond_class && s.class != rep.table.classes.trivial_class {
            format!("C{} (R)", s.class)
        } else {
            format!("C{}", s.class)
        };
        rows.push(vec![
            name,
            rep.table.classes.display_class(s.class, md),
            s.extent.compact(),
            yes(s.central).to_string(),
            blocks.join(" "),
            ov.join(" "),
        ]);
    }
    let mut text = vec![
        format!("deconstruction of {}", rep.g.display(md)),
        format!("twister: {}, core {}", yes(rep.is_twister), rep.twister_core.display(md)),
        format!(
            "{}, {}, twist group order {}{}",
            count(rep.sectors.len(), "sector"),
            count(rep.table.blocks.len(), "block"),
            order_s,
            if integral { "" } else { " (not an integer)" }
        ),
        String::new(),
    ];
    text.extend(table(&["sector", "class", "extent", "central", "blocks", "overlaps"], &rows));
    text.push(String::new());
    for c in &rep.checks {
        text.push(c.to_string());
        recs.push(Record::check(c));
    }
    emit(fmt, text, recs)
}

fn perm_string(md: &ModularData, perm: &[usize]) -> String {
    perm.iter().map(|&p| md.label(p)).collect::<Vec<_>>().join(" ")
}

/// The action of one or all units: permutation, signs and Θ sets.
pub fn galois(ga: &GaloisAction, thetas: &[(u32, ThetaSets)], md: &ModularData, fmt: Format) -> Vec<String> {
    let mut recs = vec![Record::new("galois").kv("conductor", ga.conductor).kv("field", ga.field).kv("units", ga.units.len())];
    let mut rows = Vec::new();
    for (ell, th) in thetas {
        let pi = perm_string(md, ga.perm(*ell));
        let signs: Vec<String> = (0..md.rank()).map(|p| if ga.sign(*ell, p) < 0 { "-" } else { "+" }.to_string()).collect();
        recs.push(
            Record::new("unit")
                .kv("ell", ell)
                .kv("perm", pi.replace(' ', ","))
                .kv("signs", signs.concat())
                .kv("theta", th.theta.display(md))
                .kv("theta_plus", th.theta_plus.display(md)),
        );
        rows.push(vec![ell.to_string(), pi, signs.concat(), th.theta.display(md), th.theta_plus.display(md)]);
    }
    let mut text = vec![format!("conductor {}, field conductor {}", ga.conductor, ga.field), String::new()];
    text.extend(table(&["ell", "pi", "eps", "theta", "theta+"], &rows));
    for d in &ga.diagnostics {
        text.push(format!("note: {d}"));
        recs.push(Record::new("diagnostic").kv("text", d));
    }
    emit(fmt, text, recs)
}

/// Check results, failures with witnesses, then a count.
pub fn checks(model: &str, checks: &[SetCheck], fmt: Format) -> Vec<String> {
    let failed = checks.iter().filter(|c| !c.check.passed).count();
    let mut recs: Vec<Record> = checks.iter().map(|c| c.record(model)).collect();
    recs.push(Record::new("summary").kv("model", model).kv("checks", checks.len()).kv("failed", failed));
    let mut text: Vec<String> = checks
        .iter()
        .map(|c| if c.set == "-" { c.check.to_string() } else { format!("{}  [{}]", c.check, c.set) })
        .collect();
    text.push(format!("{model}: {} checks, {failed} failed", checks.len()));
    emit(fmt, text, recs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_aligns_columns() {
        let t = table(&["a", "bb"], &[vec!["xyz".into(), "1".into()]]);
        assert_eq!(t, vec!["a    bb", "xyz  1"]);
    }

    #[test]
    fn format_parses() {
        assert_eq!("records".parse::<Format>(), Ok(Format::Records));
        assert!("json".parse::<Format>().is_err());
    }
}
