//! Charges `(rank, degree)` in the numerical K-group of an elliptic curve.
//!
//! Ranks are unsigned 32-bit and degrees signed 64-bit, so every product of a
//! rank with a degree fits in an `i128`. Pairings are computed in `i128` and
//! never overflow; operations producing a new charge are checked.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Charge {
    pub rank: u32,
    pub degree: i64,
}

impl Charge {
    pub const fn new(rank: u32, degree: i64) -> Self {
        Charge { rank, degree }
    }

    pub const fn is_torsion(&self) -> bool {
        self.rank == 0
    }

    pub fn slope(&self) -> Result<Slope> {
        slope(*self)
    }

    /// Componentwise sum; `None` on overflow.
    pub fn checked_add(self, other: Charge) -> Option<Charge> {
        Some(Charge {
            rank: self.rank.checked_add(other.rank)?,
            degree: self.degree.checked_add(other.degree)?,
        })
    }

    pub fn checked_scale(self, m: u32) -> Option<Charge> {
        Some(Charge {
            rank: self.rank.checked_mul(m)?,
            degree: self.degree.checked_mul(i64::from(m))?,
        })
    }

    /// `gcd(rank, |degree|)`, the number of stable pieces of an indecomposable
    /// bundle with this charge.
    pub fn gcd(&self) -> u64 {
        gcd(u64::from(self.rank), self.degree.unsigned_abs())
    }
}

impl fmt::Display for Charge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.rank, self.degree)
    }
}

/// `gcd(0, d) = d`, `gcd(r, 0) = r`.
pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// A reduced fraction with positive denominator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Slope {
    numerator: i64,
    denominator: i64,
}

impl Slope {
    pub fn numerator(&self) -> i64 {
        self.numerator
    }

    pub fn denominator(&self) -> i64 {
        self.denominator
    }
}

impl Ord for Slope {
    fn cmp(&self, other: &Self) -> Ordering {
        let lhs = i128::from(self.numerator) * i128::from(other.denominator);
        let rhs = i128::from(other.numerator) * i128::from(self.denominator);
        lhs.cmp(&rhs)
    }
}

impl PartialOrd for Slope {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator)
    }
}

pub fn slope(c: Charge) -> Result<Slope> {
    if c.rank == 0 {
        return Err(Error::TorsionSlope(c));
    }
    let g = c.gcd();
    // g divides both entries and g >= 1, so the quotients stay in range.
    let g = g as i128;
    let numerator = (i128::from(c.degree) / g) as i64;
    let denominator = (i128::from(c.rank) / g) as i64;
    Ok(Slope {
        numerator,
        denominator,
    })
}

/// Compares `degree / rank` of two charges of positive rank by cross
/// multiplication.
pub fn cmp_slopes(a: Charge, b: Charge) -> Ordering {
    debug_assert!(a.rank > 0 && b.rank > 0);
    let lhs = i128::from(a.degree) * i128::from(b.rank);
    let rhs = i128::from(b.degree) * i128::from(a.rank);
    lhs.cmp(&rhs)
}

/// `rk(a) deg(b) - deg(a) rk(b)`, which is `dim Hom(a,b) - dim Ext^1(a,b)`.
pub fn euler_pairing(a: Charge, b: Charge) -> i128 {
    i128::from(a.rank) * i128::from(b.degree) - i128::from(a.degree) * i128::from(b.rank)
}

pub fn tensor(a: Charge, b: Charge) -> Result<Charge> {
    let rank = a
        .rank
        .checked_mul(b.rank)
        .ok_or(Error::Overflow("tensor rank"))?;
    let degree =
        i128::from(a.rank) * i128::from(b.degree) + i128::from(a.degree) * i128::from(b.rank);
    let degree = i64::try_from(degree).map_err(|_| Error::Overflow("tensor degree"))?;
    Ok(Charge { rank, degree })
}

pub fn dual(a: Charge) -> Result<Charge> {
    let degree = a
        .degree
        .checked_neg()
        .ok_or(Error::Overflow("dual degree"))?;
    Ok(Charge {
        rank: a.rank,
        degree,
    })
}

/// Stable bundles exist with this charge iff rank and degree are coprime.
pub fn is_stable_charge(c: Charge) -> Result<bool> {
    if c.rank == 0 {
        return Err(Error::TorsionSlope(c));
    }
    Ok(c.gcd() == 1)
}
