//! Depth-first enumeration of strictly concave lattice chains from `(0,0)` to
//! `(k+1, n)` whose interior vertices lie strictly inside the triangle.

use std::cmp::Ordering;
use std::collections::HashSet;

use rayon::prelude::*;

use super::AtlasInput;
use crate::bundles::HNType;
use crate::error::{Error, Result};
use crate::polygons::{hn_polygon, orient, strictly_inside, HNPolygon, LatticePoint, Triangle};

struct Search {
    triangle: Triangle,
    target: LatticePoint,
}

impl Search {
    fn new(input: &AtlasInput) -> Self {
        Search {
            triangle: *input.triangle(),
            target: LatticePoint::new(input.k() + 1, input.n()),
        }
    }

    /// Strictly interior lattice points with the given abscissa, bottom to top.
    fn column(&self, x: i64) -> std::ops::RangeInclusive<i64> {
        let (k, n) = (i128::from(self.triangle.k()), i128::from(self.triangle.n()));
        let nx = n * i128::from(x);
        // y (k+1) > n x  and  y k < n x  and  y < n
        let lo = nx / (k + 1) + 1;
        let hi = ((nx - 1) / k).min(n - 1);
        (lo as i64)..=(hi as i64)
    }

    /// Admissible next vertices after `path`, which ends at `p`.
    fn successors<'a>(
        &'a self,
        path: &'a [LatticePoint],
    ) -> impl Iterator<Item = LatticePoint> + 'a {
        let p = *path.last().expect("paths start at the origin");
        let prev = path.len().checked_sub(2).map(|i| path[i]);
        (p.x + 1..self.target.x)
            .flat_map(move |x| self.column(x).map(move |y| LatticePoint::new(x, y)))
            // the rest of the chain must still be able to bend down to the target
            .filter(move |&q| orient(p, self.target, q) == Ordering::Greater)
            .filter(move |&q| prev.is_none_or(|a| orient(a, q, p) == Ordering::Greater))
    }

    fn can_finish(&self, path: &[LatticePoint]) -> bool {
        match path {
            [_] => true,
            [.., a, p] => orient(*a, self.target, *p) == Ordering::Greater,
            [] => false,
        }
    }

    fn extend(&self, path: &mut Vec<LatticePoint>, out: &mut Vec<Vec<LatticePoint>>) {
        if self.can_finish(path) {
            let mut done = path.clone();
            done.push(self.target);
            out.push(done);
        }
        let next: Vec<_> = self.successors(path).collect();
        for q in next {
            debug_assert!(strictly_inside(q, &self.triangle));
            path.push(q);
            self.extend(path, out);
            path.pop();
        }
    }

    /// All chains through the first interior vertex `first`.
    fn subtree(&self, first: LatticePoint) -> Vec<Vec<LatticePoint>> {
        let mut path = vec![LatticePoint::ORIGIN, first];
        let mut out = Vec::new();
        self.extend(&mut path, &mut out);
        out
    }
}

/// All HN types of admissible middle terms, sorted by vertex list.
///
/// The search is split by first interior vertex; with `jobs > 1` the branches
/// run on a dedicated thread pool. The result does not depend on `jobs`.
pub fn enumerate_hn_types(input: &AtlasInput, jobs: usize) -> Vec<HNType> {
    let search = Search::new(input);
    let origin = [LatticePoint::ORIGIN];
    let firsts: Vec<LatticePoint> = search.successors(&origin).collect();

    let mut chains: Vec<Vec<LatticePoint>> = vec![vec![LatticePoint::ORIGIN, search.target]];
    if jobs <= 1 {
        for q in firsts {
            chains.extend(search.subtree(q));
        }
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .expect("failed to build worker pool");
        let branches: Vec<Vec<Vec<LatticePoint>>> =
            pool.install(|| firsts.par_iter().map(|&q| search.subtree(q)).collect());
        chains.extend(branches.into_iter().flatten());
    }
    chains.sort();
    chains
        .into_iter()
        .map(|v| {
            HNPolygon::from_vertices(v)
                .expect("enumerated chains are strictly concave")
                .to_hn_type()
        })
        .collect()
}

/// Re-checks enumerator output: correct endpoint, strict concavity, strict
/// interiority, no duplicates, and positive degree on every piece.
pub fn validate_enumeration(input: &AtlasInput, types: &[HNType]) -> Result<()> {
    let target = input.target();
    let mut seen = HashSet::new();
    for nu in types {
        let fail = |why: &str| Err(Error::InvalidEnumeration(format!("{nu}: {why}")));
        if nu.total_charge() != target {
            return fail("wrong total charge");
        }
        let polygon = hn_polygon(nu);
        if HNPolygon::from_vertices(polygon.vertices().to_vec()).is_err() {
            return fail("not strictly concave");
        }
        if !polygon
            .interior_vertices()
            .iter()
            .all(|&p| strictly_inside(p, input.triangle()))
        {
            return fail("vertex not strictly inside the triangle");
        }
        if nu.pieces().iter().any(|p| p.degree < 1) {
            return fail("piece of non-positive degree");
        }
        if !seen.insert(nu.clone()) {
            return fail("duplicate");
        }
    }
    Ok(())
}
