//! Finite abelian groups in invariant-factor form.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// A finite abelian group `Z_{d_1} + Z_{d_2} + ... + Z_{d_r}` in canonical
/// form: every factor is at least 2 and each divides the next. The trivial
/// group has no factors.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AbelianGroup {
    factors: Vec<BigInt>,
}

impl AbelianGroup {
    /// Builds the canonical form from a divisibility chain; unit factors are
    /// stripped. Rejects factors that are not positive or break the chain.
    pub fn from_factors(factors: Vec<BigInt>) -> Result<Self> {
        let factors: Vec<BigInt> = factors.into_iter().filter(|d| !d.is_one()).collect();
        for d in &factors {
            if *d < BigInt::from(2) {
                return Err(Error::BadParameters(format!(
                    "invariant factor {d} is not at least 2"
                )));
            }
        }
        for w in factors.windows(2) {
            if !w[1].mod_floor(&w[0]).is_zero() {
                return Err(Error::BadParameters(format!(
                    "invariant factors {} and {} break the divisibility chain",
                    w[0], w[1]
                )));
            }
        }
        Ok(AbelianGroup { factors })
    }

    pub fn trivial() -> Self {
        AbelianGroup {
            factors: Vec::new(),
        }
    }

    /// The cyclic group of order `n` (the trivial group for `n = 1`).
    pub fn cyclic(n: BigInt) -> Result<Self> {
        if n < BigInt::one() {
            return Err(Error::BadParameters(format!(
                "cyclic group order {n} is not positive"
            )));
        }
        if n.is_one() {
            return Ok(AbelianGroup::trivial());
        }
        Ok(AbelianGroup { factors: vec![n] })
    }

    pub fn factors(&self) -> &[BigInt] {
        &self.factors
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    /// A group is cyclic when it needs at most one generator.
    pub fn is_cyclic(&self) -> bool {
        self.factors.len() <= 1
    }

    /// Minimum number of generators: the number of non-trivial invariant
    /// factors.
    pub fn min_generators(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> BigInt {
        self.factors.iter().product::<BigInt>().max(BigInt::one())
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "Z_1");
        }
        for (i, d) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " \u{2295} ")?;
            }
            write!(f, "Z_{d}")?;
        }
        Ok(())
    }
}

impl FromStr for AbelianGroup {
    type Err = Error;

    /// Parses the display form, e.g. `Z_3 ⊕ Z_18` or `Z_1`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::BadParameters(format!("cannot parse group {s:?}"));
        let mut factors = Vec::new();
        for part in s.split('\u{2295}') {
            let part = part.trim();
            let digits = part.strip_prefix("Z_").ok_or_else(bad)?;
            let n: BigInt = digits.parse().map_err(|_| bad())?;
            if n.is_one() && s.trim() == "Z_1" {
                return Ok(AbelianGroup::trivial());
            }
            factors.push(n);
        }
        AbelianGroup::from_factors(factors)
    }
}
