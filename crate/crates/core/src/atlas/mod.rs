//! Admissible middle-term types for a stable bundle of charge `(k, n)` and
//! the dimensions of their leaves and strata.
//!
//! A bundle `E` of charge `(k+1, n)` is an admissible middle term iff the
//! interior vertices of its HN polygon lie strictly inside the triangle
//! `(0,0), (k+1,n), (k,n)`. Its generic leaf has dimension `n - dim End(E)`.

mod enumerate;
mod export;

pub use enumerate::{enumerate_hn_types, validate_enumeration};

use std::fmt;

use crate::bundles::{end_dim_generic, hn_decompose, BundleType, HNType};
use crate::charges::{gcd, Charge};
use crate::error::{Error, Result};
use crate::polygons::{hn_polygon, LatticePoint, Location, Triangle};

pub const SMALL_N_WARNING: &str =
    "n < 3: outside the range 1 <= k < n >= 3; results are combinatorial only";

/// Validated `(k, n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtlasInput {
    triangle: Triangle,
    warning: Option<&'static str>,
}

impl AtlasInput {
    pub fn k(&self) -> i64 {
        self.triangle.k()
    }

    pub fn n(&self) -> i64 {
        self.triangle.n()
    }

    pub fn triangle(&self) -> &Triangle {
        &self.triangle
    }

    /// Charge `(k+1, n)` of the middle term.
    pub fn target(&self) -> Charge {
        Charge::new((self.k() + 1) as u32, self.n())
    }

    pub fn warning(&self) -> Option<&'static str> {
        self.warning
    }
}

pub fn validate_input(k: i64, n: i64) -> Result<AtlasInput> {
    if k < 1 || k >= n || k >= i64::from(u32::MAX) {
        return Err(Error::OutOfRange { k, n });
    }
    if gcd(k as u64, n as u64) != 1 {
        return Err(Error::NotCoprime { k, n });
    }
    let warning = (n < 3).then_some(SMALL_N_WARNING);
    Ok(AtlasInput {
        triangle: Triangle::new(k, n)?,
        warning,
    })
}

/// Tangent dimension of the moduli of `E` with a section, and `dim P Ext^1(F,O)`.
pub fn ambient_dims(input: &AtlasInput) -> (i64, i64) {
    (input.n() + 1, input.n() - 1)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub admissible: bool,
    pub expected_charge: Charge,
    pub actual_charge: Charge,
    /// Interior HN vertices that are not strictly inside the triangle.
    pub vertex_failures: Vec<(LatticePoint, Location)>,
    /// Summands of non-positive degree. Never present in an admissible type.
    pub nonpositive_summands: Vec<Charge>,
    /// `det E = det F` can be met by a generic choice of moduli.
    pub det_satisfiable: bool,
}

impl Verdict {
    pub fn diagnostics(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.actual_charge != self.expected_charge {
            out.push(format!(
                "total charge {} differs from required {}",
                self.actual_charge, self.expected_charge
            ));
        }
        for (p, loc) in &self.vertex_failures {
            let where_ = match loc {
                Location::Boundary => "on triangle boundary",
                _ => "outside triangle",
            };
            out.push(format!("vertex {p} {where_}"));
        }
        for c in &self.nonpositive_summands {
            out.push(format!("summand degree {} violates positivity", c.degree));
        }
        out
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.admissible {
            f.write_str("admissible")
        } else {
            write!(f, "not admissible: {}", self.diagnostics().join("; "))
        }
    }
}

pub fn check_middle_term(t: &BundleType, input: &AtlasInput) -> Verdict {
    let expected_charge = input.target();
    let actual_charge = t.total_charge();
    let polygon = hn_polygon(&hn_decompose(t));
    let vertex_failures: Vec<_> = polygon
        .interior_vertices()
        .iter()
        .map(|&p| (p, input.triangle().locate(p)))
        .filter(|(_, loc)| *loc != Location::Interior)
        .collect();
    let nonpositive_summands = t
        .summands()
        .iter()
        .map(|(c, _)| c.charge())
        .filter(|c| c.degree <= 0)
        .collect();
    let charge_ok = actual_charge == expected_charge;
    Verdict {
        admissible: charge_ok && vertex_failures.is_empty(),
        expected_charge,
        actual_charge,
        vertex_failures,
        nonpositive_summands,
        det_satisfiable: actual_charge.degree == expected_charge.degree,
    }
}

/// Partitions of `m` with parts in non-increasing order, listed from `[m]`
/// down to `[1, 1, ..., 1]` in reverse lexicographic order.
pub(crate) fn partitions(m: u32) -> Vec<Vec<u32>> {
    fn go(rest: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            prefix.push(part);
            go(rest - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(m, m, &mut Vec::new(), &mut out);
    out
}

/// All bundle types with HN type `nu`: each piece `m (r0, d0)` with `(r0, d0)`
/// primitive splits along a partition of `m`.
pub fn refine_to_indec(nu: &HNType) -> Vec<BundleType> {
    let mut per_piece: Vec<Vec<Vec<(Charge, u32)>>> = Vec::new();
    for piece in nu.pieces() {
        let m = piece.gcd() as u32;
        let primitive = Charge::new(piece.rank / m, piece.degree / i64::from(m));
        let options = partitions(m)
            .into_iter()
            .map(|parts| {
                parts
                    .into_iter()
                    .map(|p| {
                        (
                            Charge::new(primitive.rank * p, primitive.degree * i64::from(p)),
                            1,
                        )
                    })
                    .collect()
            })
            .collect();
        per_piece.push(options);
    }

    let mut out = Vec::new();
    let mut chosen: Vec<(Charge, u32)> = Vec::new();
    fn product(
        per_piece: &[Vec<Vec<(Charge, u32)>>],
        chosen: &mut Vec<(Charge, u32)>,
        out: &mut Vec<BundleType>,
    ) {
        let Some((first, rest)) = per_piece.split_first() else {
            out.push(
                BundleType::new(chosen.iter().copied()).expect("refinement of a valid HN type"),
            );
            return;
        };
        for option in first {
            let len = chosen.len();
            chosen.extend_from_slice(option);
            product(rest, chosen, out);
            chosen.truncate(len);
        }
    }
    product(&per_piece, &mut chosen, &mut out);
    out
}

/// `dim L(E) = dim Gamma(E) - dim End(E) = n - dim End(E)`.
pub fn leaf_dimension(t: &BundleType, n: i64) -> Result<u64> {
    let end = end_dim_generic(t)?;
    let n = u128::try_from(n).map_err(|_| Error::NotAdmissibleAtN(format!("{t} at n={n}")))?;
    n.checked_sub(end)
        .map(|d| d as u64)
        .ok_or_else(|| Error::NotAdmissibleAtN(format!("{t} has dim End {end} > n={n}")))
}

/// Generic leaf of one bundle type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeafRecord {
    pub id: String,
    pub bundle_type: BundleType,
    pub hn_type: HNType,
    pub vertices: Vec<LatticePoint>,
    pub end_dim: u64,
    pub leaf_dim: u64,
    pub moduli_dim: u64,
    pub stratum_dim: u64,
    pub is_semistable: bool,
    pub is_stable_type: bool,
    pub det_satisfiable: bool,
}

impl LeafRecord {
    pub fn new(bundle_type: BundleType, n: i64) -> Result<Self> {
        let hn_type = hn_decompose(&bundle_type);
        let vertices = hn_polygon(&hn_type).vertices().to_vec();
        let end_dim = end_dim_generic(&bundle_type)? as u64;
        let leaf_dim = leaf_dimension(&bundle_type, n)?;
        // one modulus per instance, minus the determinant constraint
        let moduli_dim = bundle_type.instance_count().saturating_sub(1);
        let is_stable_type = bundle_type.instance_count() == 1
            && bundle_type
                .summands()
                .first()
                .is_some_and(|(c, _)| c.is_stable());
        Ok(LeafRecord {
            id: bundle_type.to_string(),
            is_semistable: hn_type.is_semistable(),
            is_stable_type,
            det_satisfiable: true,
            stratum_dim: leaf_dim + moduli_dim,
            bundle_type,
            hn_type,
            vertices,
            end_dim,
            leaf_dim,
            moduli_dim,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Atlas {
    pub k: i64,
    pub n: i64,
    pub ambient_dim: i64,
    pub warning: Option<&'static str>,
    /// HN types in canonical (vertex-list) order.
    pub hn_types: Vec<HNType>,
    pub records: Vec<LeafRecord>,
    /// Covering relations `(low, high)` of the Shatz order, by HN type id.
    pub poset_edges: Vec<(String, String)>,
}

pub fn build_atlas(input: &AtlasInput, refine: bool, jobs: usize) -> Result<Atlas> {
    let hn_types = enumerate_hn_types(input, jobs);
    validate_enumeration(input, &hn_types)?;

    let mut records = Vec::new();
    for nu in &hn_types {
        let types = if refine {
            refine_to_indec(nu)
        } else {
            vec![nu.coarsest_bundle()]
        };
        for t in types {
            records.push(LeafRecord::new(t, input.n())?);
        }
    }

    let polygons: Vec<_> = hn_types.iter().map(hn_polygon).collect();
    let poset_edges = shatz_covers(&polygons)?
        .into_iter()
        .map(|(lo, hi)| (hn_types[lo].to_string(), hn_types[hi].to_string()))
        .collect();

    Ok(Atlas {
        k: input.k(),
        n: input.n(),
        ambient_dim: ambient_dims(input).1,
        warning: input.warning(),
        hn_types,
        records,
        poset_edges,
    })
}

/// Covering pairs `(i, j)` with `polygons[i] < polygons[j]` and nothing strictly between.
pub fn shatz_covers(polygons: &[crate::polygons::HNPolygon]) -> Result<Vec<(usize, usize)>> {
    let len = polygons.len();
    let words = len.div_ceil(64);
    let mut above = vec![vec![0u64; words]; len];
    for i in 0..len {
        for j in 0..len {
            if i != j && crate::polygons::polygon_leq(&polygons[i], &polygons[j])? {
                above[i][j / 64] |= 1 << (j % 64);
            }
        }
    }
    let mut covers = Vec::new();
    for i in 0..len {
        let mut reachable_in_two = vec![0u64; words];
        for j in 0..len {
            if above[i][j / 64] >> (j % 64) & 1 == 1 {
                for (acc, w) in reachable_in_two.iter_mut().zip(&above[j]) {
                    *acc |= w;
                }
            }
        }
        for j in 0..len {
            let bit = 1 << (j % 64);
            if above[i][j / 64] & bit != 0 && reachable_in_two[j / 64] & bit == 0 {
                covers.push((i, j));
            }
        }
    }
    Ok(covers)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bt(s: &str) -> BundleType {
        s.parse().unwrap()
    }

    fn ids(types: &[BundleType]) -> Vec<String> {
        types.iter().map(|t| t.to_string()).collect()
    }

    #[test]
    fn validate_input_examples() {
        let ok = validate_input(2, 5).unwrap();
        assert_eq!(ok.warning(), None);
        assert!(matches!(
            validate_input(2, 4),
            Err(Error::NotCoprime { .. })
        ));
        assert_eq!(
            validate_input(1, 2).unwrap().warning(),
            Some(SMALL_N_WARNING)
        );
        assert!(matches!(
            validate_input(3, 3),
            Err(Error::OutOfRange { .. })
        ));
        assert!(matches!(
            validate_input(0, 5),
            Err(Error::OutOfRange { .. })
        ));
        assert!(matches!(
            validate_input(5, 3),
            Err(Error::OutOfRange { .. })
        ));
        assert_eq!(
            validate_input(2, 4).unwrap_err().to_string(),
            "no stable F of charge (2,4)"
        );
    }

    #[test]
    fn check_middle_term_examples() {
        let i13 = validate_input(1, 3).unwrap();
        assert!(check_middle_term(&bt("1,2;1,1"), &i13).admissible);
        assert!(check_middle_term(&bt("2,3"), &i13).admissible);

        let v = check_middle_term(&bt("1,3;1,0"), &i13);
        assert!(!v.admissible);
        assert_eq!(
            v.diagnostics(),
            vec![
                "vertex (1,3) on triangle boundary".to_string(),
                "summand degree 0 violates positivity".to_string(),
            ]
        );
    }

    #[test]
    fn check_middle_term_charge_mismatch() {
        let i25 = validate_input(2, 5).unwrap();
        let v = check_middle_term(&bt("2,3"), &i25);
        assert!(!v.admissible);
        assert!(!v.det_satisfiable);
        assert!(v.diagnostics()[0].contains("differs from required (3,5)"));
        let outside = check_middle_term(&bt("1,4;2,1"), &i25);
        assert_eq!(outside.vertex_failures.len(), 1);
        assert_eq!(outside.vertex_failures[0].1, Location::Exterior);
    }

    #[test]
    fn partitions_in_reverse_lex_order() {
        assert_eq!(partitions(1), vec![vec![1]]);
        assert_eq!(
            partitions(4),
            vec![
                vec![4],
                vec![3, 1],
                vec![2, 2],
                vec![2, 1, 1],
                vec![1, 1, 1, 1]
            ]
        );
        assert_eq!(partitions(7).len(), 15);
    }

    #[test]
    fn refine_examples() {
        let nu = |s: &str| hn_decompose(&bt(s));
        assert_eq!(ids(&refine_to_indec(&nu("2,3"))), vec!["2,3"]);
        assert_eq!(
            ids(&refine_to_indec(&nu("2,4;1,1"))),
            vec!["2,4;1,1", "1,2*2;1,1"]
        );
        assert_eq!(ids(&refine_to_indec(&nu("3,5"))), vec!["3,5"]);
        assert_eq!(
            ids(&refine_to_indec(&nu("2,4;2,2"))),
            vec!["2,4;2,2", "2,4;1,1*2", "1,2*2;2,2", "1,2*2;1,1*2"]
        );
    }

    #[test]
    fn leaf_dimension_examples() {
        assert_eq!(leaf_dimension(&bt("3,5"), 5).unwrap(), 4);
        assert_eq!(leaf_dimension(&bt("1,2;1,1"), 3).unwrap(), 0);
        assert_eq!(leaf_dimension(&bt("1,2*2;1,1"), 5).unwrap(), 0);
        assert!(matches!(
            leaf_dimension(&bt("1,2*2;1,1"), 4),
            Err(Error::NotAdmissibleAtN(_))
        ));
    }

    #[test]
    fn ambient_dims_examples() {
        assert_eq!(ambient_dims(&validate_input(1, 3).unwrap()), (4, 2));
        assert_eq!(ambient_dims(&validate_input(2, 5).unwrap()), (6, 4));
    }

    #[test]
    fn atlas_1_3() {
        let atlas = build_atlas(&validate_input(1, 3).unwrap(), true, 1).unwrap();
        let leaf: Vec<_> = atlas
            .records
            .iter()
            .map(|r| (r.id.as_str(), r.leaf_dim))
            .collect();
        assert_eq!(leaf, vec![("1,2;1,1", 0), ("2,3", 2)]);
        assert_eq!(
            atlas.poset_edges,
            vec![("2,3".to_string(), "1,2;1,1".to_string())]
        );
        assert_eq!(atlas.ambient_dim, 2);
    }

    #[test]
    fn atlas_2_5() {
        let atlas = build_atlas(&validate_input(2, 5).unwrap(), true, 1).unwrap();
        let rows: Vec<_> = atlas
            .records
            .iter()
            .map(|r| {
                (
                    r.id.as_str(),
                    r.end_dim,
                    r.leaf_dim,
                    r.moduli_dim,
                    r.stratum_dim,
                )
            })
            .collect();
        assert_eq!(
            rows,
            vec![
                ("1,2;2,3", 3, 2, 1, 3),
                ("2,4;1,1", 5, 0, 1, 1),
                ("1,2*2;1,1", 5, 0, 2, 2),
                ("3,5", 1, 4, 0, 4),
            ]
        );
        let edge = |a: &str, b: &str| (a.to_string(), b.to_string());
        assert_eq!(
            atlas.poset_edges,
            vec![edge("1,2;2,3", "2,4;1,1"), edge("3,5", "1,2;2,3")]
        );
    }

    #[test]
    fn unrefined_atlas_has_one_record_per_hn_type() {
        let atlas = build_atlas(&validate_input(2, 5).unwrap(), false, 1).unwrap();
        assert_eq!(atlas.records.len(), atlas.hn_types.len());
        for (r, nu) in atlas.records.iter().zip(&atlas.hn_types) {
            assert_eq!(r.id, nu.to_string());
        }
    }
}
