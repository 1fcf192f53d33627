//! Bundled models.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::fusion::FusionData;
use crate::io::double::{drinfeld_double_data, Group, DOUBLE_MAX_ORDER};
use crate::io::ModelFile;

/// Names accepted by [`lookup`], in catalog order.
pub const NAMES: &[&str] = &["trivial", "fibonacci", "ising", "toric", "so16_lvl1", "z2", "z3", "z4", "z5", "d_s3"];

fn q(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

fn labels(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

fn model(name: &str, l: &[&str], w: Vec<BigRational>, e: &[(usize, usize, usize, u32)]) -> ModelFile {
    let fd = FusionData::from_entries(name, labels(l), w, e).expect("catalog data is well formed");
    ModelFile::from_fusion_data(&fd, None)
}

/// Fusion of an abelian group `Z_2 × Z_2` on four labels, bitwise.
fn klein(name: &str, l: &[&str], w: Vec<BigRational>) -> ModelFile {
    let mut e = Vec::new();
    for a in 0..4 {
        for b in a..4 {
            e.push((a, b, a ^ b, 1));
        }
    }
    model(name, l, w, &e)
}

/// `Z_n` anyons with `h_k = k²/n` for odd `n` and `k²/(2n)` for even `n`,
/// reduced mod 1.
pub fn zn(n: usize) -> ModelFile {
    let names: Vec<String> = (0..n).map(|k| k.to_string()).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let den = if n % 2 == 1 { n as i64 } else { 2 * n as i64 };
    let w = (0..n as i64).map(|k| q((k * k) % den, den)).collect();
    let mut e = Vec::new();
    for a in 0..n {
        for b in a..n {
            e.push((a, b, (a + b) % n, 1));
        }
    }
    model(&format!("z{n}"), &refs, w, &e)
}

/// A catalog model by name.
pub fn lookup(name: &str, cfg: &RunConfig) -> Result<ModelFile> {
    Ok(match name {
        "trivial" => model("trivial", &["0"], vec![q(0, 1)], &[(0, 0, 0, 1)]),
        "fibonacci" => model(
            "fibonacci",
            &["0", "tau"],
            vec![q(0, 1), q(2, 5)],
            &[(0, 0, 0, 1), (0, 1, 1, 1), (1, 1, 0, 1), (1, 1, 1, 1)],
        ),
        "ising" => model(
            "ising",
            &["0", "eps", "sigma"],
            vec![q(0, 1), q(1, 2), q(1, 16)],
            &[(0, 0, 0, 1), (0, 1, 1, 1), (0, 2, 2, 1), (1, 1, 0, 1), (1, 2, 2, 1), (2, 2, 0, 1), (2, 2, 1, 1)],
        ),
        "toric" => klein("toric", &["1", "e", "m", "f"], vec![q(0, 1), q(0, 1), q(0, 1), q(1, 2)]),
        "so16_lvl1" => klein("so16_lvl1", &["0", "v", "s", "c"], vec![q(0, 1), q(1, 2), q(1, 1), q(1, 1)]),
        "z2" => zn(2),
        "z3" => zn(3),
        "z4" => zn(4),
        "z5" => zn(5),
        "d_s3" => drinfeld_double_data("d_s3", &Group::dihedral(3), cfg, DOUBLE_MAX_ORDER)?,
        _ => return Err(Error::Validation(format!("unknown catalog model '{name}'; known: {}", NAMES.join(", ")))),
    })
}

/// Every bundled model, in catalog order.
pub fn catalog(cfg: &RunConfig) -> Result<Vec<ModelFile>> {
    NAMES.iter().map(|n| lookup(n, cfg)).collect()
}
