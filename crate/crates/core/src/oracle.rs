//! Brute-force counterparts of the optimized routines, for differential testing.
//!
//! Nothing here reuses the enumerator, the HN decomposition or the polygon
//! predicates; only the charge arithmetic is shared.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use crate::atlas::{enumerate_hn_types, refine_to_indec, validate_input};
use crate::bundles::{end_dim_generic, hom_ext_generic, BundleType};
use crate::charges::{cmp_slopes, Charge};
use crate::error::{Error, Result};
use crate::polygons::{hn_polygon, polygon_leq, HNPolygon};

/// Every multiset of charges with total `(k+1, n)` whose HN vertices are
/// strictly inside the triangle, checked by direct inequalities.
pub fn naive_enumerate(k: i64, n: i64) -> Result<Vec<BundleType>> {
    validate_input(k, n)?;
    let total_rank = (k + 1) as u32;

    let mut candidates = Vec::new();
    for rank in 1..=total_rank {
        for degree in (-n + 1..n).chain(std::iter::once(n)) {
            candidates.push(Charge::new(rank, degree));
        }
    }
    // slope descending, then rank, then degree; picks are non-decreasing in
    // this order so each multiset is generated once, already slope-sorted
    candidates.sort_by(|a, b| {
        cmp_slopes(*b, *a)
            .then(a.rank.cmp(&b.rank))
            .then(a.degree.cmp(&b.degree))
    });

    let mut found = Vec::new();
    let mut picked = Vec::new();
    search(
        &candidates,
        0,
        total_rank,
        n,
        0,
        0,
        &mut picked,
        &mut |multiset| {
            if admissible(multiset, k, n) {
                found.push(multiset.to_vec());
            }
        },
    );

    let mut out: Vec<(Vec<(i64, i64)>, BundleType)> = found
        .into_iter()
        .map(|m| {
            (
                vertices_of(&m),
                BundleType::from_charges(m).expect("candidate charges have rank >= 1"),
            )
        })
        .collect();
    out.sort_by(|a, b| {
        a.0.cmp(&b.0)
            .then_with(|| a.1.to_string().cmp(&b.1.to_string()))
    });
    Ok(out.into_iter().map(|(_, t)| t).collect())
}

#[allow(clippy::too_many_arguments)]
fn search(
    candidates: &[Charge],
    from: usize,
    total_rank: u32,
    n: i64,
    rank: u32,
    degree: i64,
    picked: &mut Vec<Charge>,
    emit: &mut dyn FnMut(&[Charge]),
) {
    if rank == total_rank {
        if degree == n {
            emit(picked);
        }
        return;
    }
    // a proper prefix is a point of the chain strictly between its ends,
    // so its degree lies in the open interval (0, n)
    if !picked.is_empty() && (degree <= 0 || degree >= n) {
        return;
    }
    for (i, c) in candidates.iter().enumerate().skip(from) {
        if rank + c.rank > total_rank {
            continue;
        }
        picked.push(*c);
        search(
            candidates,
            i,
            total_rank,
            n,
            rank + c.rank,
            degree + c.degree,
            picked,
            emit,
        );
        picked.pop();
    }
}

/// Cumulative points after each slope class, for a slope-sorted list.
fn vertices_of(sorted: &[Charge]) -> Vec<(i64, i64)> {
    let mut out = vec![(0, 0)];
    let (mut x, mut y) = (0i64, 0i64);
    for (i, c) in sorted.iter().enumerate() {
        x += i64::from(c.rank);
        y += c.degree;
        let closes_class = sorted
            .get(i + 1)
            .is_none_or(|next| cmp_slopes(*c, *next) != Ordering::Equal);
        if closes_class {
            out.push((x, y));
        }
    }
    out
}

fn admissible(sorted: &[Charge], k: i64, n: i64) -> bool {
    let v = vertices_of(sorted);
    if v.last() != Some(&(k + 1, n)) {
        return false;
    }
    v[1..v.len() - 1]
        .iter()
        .all(|&(x, y)| y * (k + 1) > n * x && y * k < n * x && y < n)
}

/// Ordinate of the chain at integer abscissa `x`, as `(numerator, denominator)`.
fn ordinate(chain: &[(i64, i64)], x: i64) -> (i128, i128) {
    if chain.len() == 1 {
        return (i128::from(chain[0].1), 1);
    }
    for w in chain.windows(2) {
        let ((x0, y0), (x1, y1)) = (w[0], w[1]);
        if x0 <= x && x <= x1 {
            let dx = i128::from(x1 - x0);
            let num = i128::from(y0) * dx + i128::from(y1 - y0) * i128::from(x - x0);
            return (num, dx);
        }
    }
    unreachable!("x = {x} outside the chain")
}

/// Pointwise containment at every integer abscissa.
pub fn naive_polygon_leq(a: &HNPolygon, b: &HNPolygon) -> Result<bool> {
    let pts = |p: &HNPolygon| p.vertices().iter().map(|v| (v.x, v.y)).collect::<Vec<_>>();
    let (a, b) = (pts(a), pts(b));
    if a.first() != b.first() || a.last() != b.last() {
        return Err(Error::Incomparable);
    }
    let (x_start, x_end) = (a[0].0, a[a.len() - 1].0);
    for x in x_start..=x_end {
        let (an, ad) = ordinate(&a, x);
        let (bn, bd) = ordinate(&b, x);
        if an * bd > bn * ad {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Sum of generic Hom dimensions over all ordered pairs of instances.
pub fn naive_end_dim(t: &BundleType) -> u128 {
    let instances: Vec<_> = t.instances().collect();
    let mut total = 0;
    for (i, x) in instances.iter().enumerate() {
        for (j, y) in instances.iter().enumerate() {
            total += hom_ext_generic(*x, *y, i == j).0;
        }
    }
    total
}

/// Disagreements between the brute-force and optimized routines for one `(k, n)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DiffReport {
    pub k: i64,
    pub n: i64,
    pub types_checked: usize,
    pub pairs_checked: usize,
    pub mismatches: Vec<String>,
}

impl DiffReport {
    pub fn agrees(&self) -> bool {
        self.mismatches.is_empty()
    }
}

pub fn differential_check(k: i64, n: i64) -> Result<DiffReport> {
    let input = validate_input(k, n)?;
    let mut report = DiffReport {
        k,
        n,
        ..DiffReport::default()
    };

    let hn_types = enumerate_hn_types(&input, 1);
    let refined: Vec<BundleType> = hn_types.iter().flat_map(refine_to_indec).collect();
    let naive = naive_enumerate(k, n)?;
    let fast_ids: BTreeSet<String> = refined.iter().map(|t| t.to_string()).collect();
    let naive_ids: BTreeSet<String> = naive.iter().map(|t| t.to_string()).collect();
    if fast_ids.len() != refined.len() {
        report.mismatches.push("duplicate refinements".into());
    }
    for id in fast_ids.difference(&naive_ids) {
        report
            .mismatches
            .push(format!("{id}: enumerated but rejected by brute force"));
    }
    for id in naive_ids.difference(&fast_ids) {
        report
            .mismatches
            .push(format!("{id}: found by brute force but not enumerated"));
    }

    for t in &refined {
        let fast = end_dim_generic(t)?;
        let slow = naive_end_dim(t);
        if fast != slow {
            report
                .mismatches
                .push(format!("{t}: dim End {fast} vs pair sum {slow}"));
        }
    }
    report.types_checked = refined.len();

    let polygons: Vec<_> = hn_types.iter().map(hn_polygon).collect();
    for (i, a) in polygons.iter().enumerate() {
        for (j, b) in polygons.iter().enumerate() {
            let fast = polygon_leq(a, b)?;
            let slow = naive_polygon_leq(a, b)?;
            if fast != slow {
                report.mismatches.push(format!(
                    "{} <= {}: chain test {fast}, pointwise {slow}",
                    hn_types[i], hn_types[j]
                ));
            }
            report.pairs_checked += 1;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polygons::LatticePoint;

    fn ids(v: &[BundleType]) -> Vec<String> {
        v.iter().map(|t| t.to_string()).collect()
    }

    fn poly(v: &[(i64, i64)]) -> HNPolygon {
        HNPolygon::from_vertices(v.iter().map(|&(x, y)| LatticePoint::new(x, y)).collect()).unwrap()
    }

    #[test]
    fn naive_enumerate_hand_fixtures() {
        assert_eq!(ids(&naive_enumerate(1, 3).unwrap()), vec!["1,2;1,1", "2,3"]);
        assert_eq!(
            ids(&naive_enumerate(2, 5).unwrap()),
            vec!["1,2;2,3", "1,2*2;1,1", "2,4;1,1", "3,5"]
        );
        assert!(naive_enumerate(2, 4).is_err());
    }

    #[test]
    fn naive_enumerate_k1_n4() {
        // vertex (1,3); vertex-free (2,4) splits as 2,4 or 1,2*2
        assert_eq!(
            ids(&naive_enumerate(1, 4).unwrap()),
            vec!["1,3;1,1", "1,2*2", "2,4"]
        );
    }

    #[test]
    fn naive_polygon_leq_fixtures() {
        let base = poly(&[(0, 0), (3, 5)]);
        let a = poly(&[(0, 0), (1, 2), (3, 5)]);
        let b = poly(&[(0, 0), (2, 4), (3, 5)]);
        assert!(naive_polygon_leq(&base, &a).unwrap());
        assert!(naive_polygon_leq(&a, &b).unwrap());
        assert!(!naive_polygon_leq(&b, &a).unwrap());
        assert!(naive_polygon_leq(&a, &poly(&[(0, 0), (3, 4)])).is_err());
    }

    #[test]
    fn naive_end_dim_fixtures() {
        let bt = |s: &str| s.parse::<BundleType>().unwrap();
        assert_eq!(naive_end_dim(&bt("3,5")), 1);
        assert_eq!(naive_end_dim(&bt("1,2;2,3")), 3);
        assert_eq!(naive_end_dim(&bt("2,4")), 2);
        assert_eq!(naive_end_dim(&bt("1,2*2;1,1")), 5);
    }

    #[test]
    fn differential_small() {
        for (k, n) in [(1, 3), (2, 5), (3, 7)] {
            let r = differential_check(k, n).unwrap();
            assert!(r.agrees(), "{r:?}");
        }
    }
}
