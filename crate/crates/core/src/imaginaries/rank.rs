use std::fmt;
use std::ops::{Add, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A geometric rank `ω·n + z`, ordered lexicographically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct GeomRank {
    pub omega: i64,
    pub finite: i64,
}

impl GeomRank {
    pub const ZERO: GeomRank = GeomRank { omega: 0, finite: 0 };

    pub fn new(omega: i64, finite: i64) -> GeomRank {
        GeomRank { omega, finite }
    }

    pub fn is_nonnegative(&self) -> bool {
        *self >= GeomRank::ZERO
    }

    /// Difference that must stay non-negative.
    pub fn checked_relative(self, base: GeomRank, what: &str) -> Result<GeomRank> {
        let d = self - base;
        if !d.is_nonnegative() {
            return Err(Error::NegativeRank(format!("{what} = {d}")));
        }
        Ok(d)
    }
}

impl Add for GeomRank {
    type Output = GeomRank;
    fn add(self, o: GeomRank) -> GeomRank {
        GeomRank::new(self.omega + o.omega, self.finite + o.finite)
    }
}

impl Sub for GeomRank {
    type Output = GeomRank;
    fn sub(self, o: GeomRank) -> GeomRank {
        GeomRank::new(self.omega - o.omega, self.finite - o.finite)
    }
}

impl fmt::Display for GeomRank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n, z) = (self.omega, self.finite);
        if n == 0 {
            return write!(f, "{z}");
        }
        let head = match n {
            1 => "ω".to_string(),
            -1 => "-ω".to_string(),
            _ => format!("ω·{n}"),
        };
        match z {
            0 => write!(f, "{head}"),
            z if z > 0 => write!(f, "{head}+{z}"),
            z => write!(f, "{head}{z}"),
        }
    }
}
