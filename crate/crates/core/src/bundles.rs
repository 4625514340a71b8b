//! Formal generic bundles on an elliptic curve.
//!
//! A [`BundleType`] is a multiset of indecomposable classes. Each instance is
//! taken at a generic modulus, pairwise distinct from every other instance, so
//! two distinct summands of equal slope have no morphisms in either direction.
//!
//! Type strings: `r,d` pairs joined by `;`, each with an optional `*m`
//! multiplicity, e.g. `1,2*2;1,1`. Whitespace is ignored and parsing
//! canonicalizes the order.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::charges::{cmp_slopes, euler_pairing, Charge, Slope};
use crate::error::{Error, Result};

/// An indecomposable bundle class, determined up to its modulus by its charge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct IndecClass {
    charge: Charge,
}

impl IndecClass {
    pub fn new(charge: Charge) -> Result<Self> {
        if charge.rank == 0 {
            return Err(Error::Malformed {
                what: "indecomposable class",
                reason: format!("rank must be at least 1, got {charge}"),
            });
        }
        Ok(IndecClass { charge })
    }

    pub fn charge(&self) -> Charge {
        self.charge
    }

    pub fn slope(&self) -> Slope {
        self.charge
            .slope()
            .expect("indecomposable classes have positive rank")
    }

    /// `h = gcd(rank, |degree|)`; also `dim End` of the indecomposable.
    pub fn h(&self) -> u64 {
        self.charge.gcd()
    }

    pub fn is_stable(&self) -> bool {
        self.h() == 1
    }
}

/// Canonical summand order: slope descending, then rank ascending, then degree ascending.
fn canonical_cmp(a: &Charge, b: &Charge) -> Ordering {
    cmp_slopes(*b, *a)
        .then(a.rank.cmp(&b.rank))
        .then(a.degree.cmp(&b.degree))
}

/// A multiset of indecomposable classes with multiplicities, kept in canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BundleType {
    summands: Vec<(IndecClass, u32)>,
    total: Charge,
}

impl BundleType {
    /// Builds a canonical bundle type, merging repeated classes.
    ///
    /// Fails on rank-0 summands, zero multiplicities, or a total charge that
    /// does not fit the charge representation.
    pub fn new<I>(summands: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Charge, u32)>,
    {
        let mut items: Vec<(Charge, u32)> = Vec::new();
        for (charge, mult) in summands {
            IndecClass::new(charge)?;
            if mult == 0 {
                return Err(Error::Malformed {
                    what: "bundle type",
                    reason: format!("multiplicity of {charge} must be at least 1"),
                });
            }
            items.push((charge, mult));
        }
        items.sort_by(|a, b| canonical_cmp(&a.0, &b.0));

        let mut merged: Vec<(IndecClass, u32)> = Vec::with_capacity(items.len());
        let mut total = Charge::new(0, 0);
        for (charge, mult) in items {
            total = charge
                .checked_scale(mult)
                .and_then(|c| total.checked_add(c))
                .ok_or(Error::Overflow("bundle total charge"))?;
            match merged.last_mut() {
                Some((last, m)) if last.charge == charge => {
                    *m = m.checked_add(mult).ok_or(Error::Overflow("multiplicity"))?;
                }
                _ => merged.push((IndecClass { charge }, mult)),
            }
        }
        Ok(BundleType {
            summands: merged,
            total,
        })
    }

    /// One instance per listed charge.
    pub fn from_charges<I>(charges: I) -> Result<Self>
    where
        I: IntoIterator<Item = Charge>,
    {
        Self::new(charges.into_iter().map(|c| (c, 1)))
    }

    pub fn summands(&self) -> &[(IndecClass, u32)] {
        &self.summands
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    pub fn total_charge(&self) -> Charge {
        self.total
    }

    /// Number of summand instances, counting multiplicity.
    pub fn instance_count(&self) -> u64 {
        self.summands.iter().map(|(_, m)| u64::from(*m)).sum()
    }

    /// Instances expanded in canonical order.
    pub fn instances(&self) -> impl Iterator<Item = IndecClass> + '_ {
        self.summands
            .iter()
            .flat_map(|(c, m)| std::iter::repeat_n(*c, *m as usize))
    }
}

impl fmt::Display for BundleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (class, mult)) in self.summands.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            let c = class.charge;
            write!(f, "{},{}", c.rank, c.degree)?;
            if *mult > 1 {
                write!(f, "*{mult}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for BundleType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let fail = |reason: String| Error::Parse {
            input: s.to_string(),
            reason,
        };
        if compact.is_empty() {
            return BundleType::new(std::iter::empty());
        }
        let mut summands = Vec::new();
        for item in compact.split(';') {
            if item.is_empty() {
                return Err(fail("empty summand".into()));
            }
            let (pair, mult) = match item.split_once('*') {
                Some((pair, m)) => {
                    let m: u32 = m
                        .parse()
                        .map_err(|_| fail(format!("bad multiplicity {m:?}")))?;
                    if m == 0 {
                        return Err(fail("multiplicity must be at least 1".into()));
                    }
                    (pair, m)
                }
                None => (item, 1),
            };
            let (r, d) = pair
                .split_once(',')
                .ok_or_else(|| fail(format!("expected \"rank,degree\", got {pair:?}")))?;
            let rank: u32 = r.parse().map_err(|_| fail(format!("bad rank {r:?}")))?;
            let degree: i64 = d.parse().map_err(|_| fail(format!("bad degree {d:?}")))?;
            if rank == 0 {
                return Err(fail(format!("rank must be at least 1 in {pair:?}")));
            }
            summands.push((Charge::new(rank, degree), mult));
        }
        BundleType::new(summands).map_err(|e| fail(e.to_string()))
    }
}

/// Harder-Narasimhan type: charges of the graded pieces, slopes strictly decreasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HNType {
    pieces: Vec<Charge>,
}

impl HNType {
    pub fn new(pieces: Vec<Charge>) -> Result<Self> {
        let bad = |reason: String| Error::Malformed {
            what: "HN type",
            reason,
        };
        let mut total = Charge::new(0, 0);
        for (i, p) in pieces.iter().enumerate() {
            if p.rank == 0 {
                return Err(bad(format!("piece {p} has rank 0")));
            }
            if i > 0 && cmp_slopes(pieces[i - 1], *p) != Ordering::Greater {
                return Err(bad(format!(
                    "slopes must strictly decrease, {} then {}",
                    pieces[i - 1],
                    p
                )));
            }
            total = total
                .checked_add(*p)
                .ok_or(Error::Overflow("HN type total charge"))?;
        }
        Ok(HNType { pieces })
    }

    pub fn pieces(&self) -> &[Charge] {
        &self.pieces
    }

    pub fn total_charge(&self) -> Charge {
        self.pieces.iter().fold(Charge::new(0, 0), |acc, p| {
            Charge::new(acc.rank + p.rank, acc.degree + p.degree)
        })
    }

    pub fn is_semistable(&self) -> bool {
        self.pieces.len() == 1
    }

    /// The coarsest refinement: every piece as a single indecomposable.
    pub fn coarsest_bundle(&self) -> BundleType {
        BundleType::from_charges(self.pieces.iter().copied())
            .expect("HN pieces are valid indecomposable charges")
    }
}

impl fmt::Display for HNType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.pieces.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            write!(f, "{},{}", p.rank, p.degree)?;
        }
        Ok(())
    }
}

/// Groups summands by slope; the HN filtration splits on an elliptic curve.
pub fn hn_decompose(t: &BundleType) -> HNType {
    let mut pieces: Vec<Charge> = Vec::new();
    let mut last: Option<IndecClass> = None;
    for (class, mult) in t.summands() {
        let c = class.charge();
        // Totals were checked at construction, so partial sums fit.
        let scaled = Charge::new(c.rank * mult, c.degree * i64::from(*mult));
        match (last, pieces.last_mut()) {
            (Some(prev), Some(piece)) if cmp_slopes(prev.charge(), c) == Ordering::Equal => {
                piece.rank += scaled.rank;
                piece.degree += scaled.degree;
            }
            _ => pieces.push(scaled),
        }
        last = Some(*class);
    }
    HNType { pieces }
}

/// Generic `(h^0, h^1)`: a summand of degree `d > 0` has `h^0 = d`, `d < 0`
/// gives `h^1 = -d`, and generic degree 0 has no cohomology.
pub fn h0_h1_generic(t: &BundleType) -> (u128, u128) {
    let mut h0 = 0u128;
    let mut h1 = 0u128;
    for (class, mult) in t.summands() {
        let d = class.charge().degree;
        let contribution = u128::from(d.unsigned_abs()) * u128::from(*mult);
        match d.cmp(&0) {
            Ordering::Greater => h0 += contribution,
            Ordering::Less => h1 += contribution,
            Ordering::Equal => {}
        }
    }
    (h0, h1)
}

/// Generic `(dim Hom(x,y), dim Ext^1(x,y))`.
///
/// `same_instance` means `x` and `y` are literally the same summand; it only
/// matters when the two classes are equal.
pub fn hom_ext_generic(x: IndecClass, y: IndecClass, same_instance: bool) -> (u128, u128) {
    let chi = euler_pairing(x.charge(), y.charge());
    match cmp_slopes(x.charge(), y.charge()) {
        Ordering::Less => (chi.unsigned_abs(), 0),
        Ordering::Greater => (0, chi.unsigned_abs()),
        Ordering::Equal if same_instance && x == y => {
            let h = u128::from(x.h());
            (h, h)
        }
        Ordering::Equal => (0, 0),
    }
}

/// `dim End(E)` at generic moduli.
///
/// Each instance contributes its own `h`; an ordered pair of classes with
/// strictly increasing slope contributes `m_i m_j chi`. Everything else vanishes.
pub fn end_dim_generic(t: &BundleType) -> Result<u128> {
    let overflow = || Error::Overflow("endomorphism dimension");
    let mut total: u128 = 0;
    for (class, mult) in t.summands() {
        total = total
            .checked_add(u128::from(class.h()) * u128::from(*mult))
            .ok_or_else(overflow)?;
    }
    // Canonical order is slope-descending, so increasing slope means j before i.
    let s = t.summands();
    for (i, (low, m_low)) in s.iter().enumerate() {
        for (high, m_high) in &s[..i] {
            if cmp_slopes(low.charge(), high.charge()) != Ordering::Less {
                continue;
            }
            let chi = euler_pairing(low.charge(), high.charge()).unsigned_abs();
            let pair = chi
                .checked_mul(u128::from(*m_low) * u128::from(*m_high))
                .ok_or_else(overflow)?;
            total = total.checked_add(pair).ok_or_else(overflow)?;
        }
    }
    Ok(total)
}

pub fn det_degree(t: &BundleType) -> i64 {
    t.total_charge().degree
}
