use num_bigint::BigInt;

/// Knobs shared by every computation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    /// Working precision in bits for numeric eigen-solves.
    pub precision: u32,
    /// Precision escalation stops once this is exceeded.
    pub max_precision: u32,
    /// Largest coordinate denominator accepted by reconstruction.
    pub denom_bound: BigInt,
    /// Cap on the number of FC sets an enumeration may produce.
    pub budget: usize,
    /// Seed for the random combinations used in simultaneous diagonalization.
    pub seed: u64,
    /// Conductor multiples tried after precision escalation fails.
    pub conductor_multiples: Vec<u32>,
    /// Run the O(n^6) Arguesian test in lattice checks.
    pub arguesian: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            precision: 192,
            max_precision: 768,
            denom_bound: BigInt::from(1_000_000),
            budget: 100_000,
            seed: 0x5eed_f00d,
            conductor_multiples: vec![2, 3, 4],
            arguesian: false,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.precision < 64 {
            return Err(format!("precision must be at least 64 bits, got {}", self.precision));
        }
        if self.denom_bound < BigInt::from(1) {
            return Err("denominator bound must be positive".into());
        }
        if self.budget == 0 {
            return Err("enumeration budget must be positive".into());
        }
        Ok(())
    }
}
