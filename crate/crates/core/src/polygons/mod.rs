//! Harder-Narasimhan polygons as lattice chains, the admissibility triangle,
//! and the Shatz containment order.
//!
//! Abscissas are cumulative ranks and ordinates cumulative degrees. All tests
//! are integer cross products evaluated in `i128`.

mod svg;

pub use svg::render_svg;

use std::cmp::Ordering;
use std::fmt;

use crate::bundles::HNType;
use crate::charges::Charge;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticePoint {
    pub x: i64,
    pub y: i64,
}

impl LatticePoint {
    pub const ORIGIN: LatticePoint = LatticePoint { x: 0, y: 0 };

    pub const fn new(x: i64, y: i64) -> Self {
        LatticePoint { x, y }
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// Sign of the cross product `(b - a) x (p - a)`: positive when `p` lies to
/// the left of (above, for increasing x) the directed line `a -> b`.
pub(crate) fn orient(a: LatticePoint, b: LatticePoint, p: LatticePoint) -> Ordering {
    let bx = i128::from(b.x) - i128::from(a.x);
    let by = i128::from(b.y) - i128::from(a.y);
    let px = i128::from(p.x) - i128::from(a.x);
    let py = i128::from(p.y) - i128::from(a.y);
    (bx * py - by * px).cmp(&0)
}

/// A strictly concave lattice chain from the origin to the total charge.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HNPolygon {
    vertices: Vec<LatticePoint>,
}

impl HNPolygon {
    /// Validates a vertex list: starts at the origin, x strictly increasing,
    /// edge slopes strictly decreasing.
    pub fn from_vertices(vertices: Vec<LatticePoint>) -> Result<Self> {
        let bad = |reason: String| Error::Malformed {
            what: "HN polygon",
            reason,
        };
        match vertices.first() {
            Some(&LatticePoint::ORIGIN) => {}
            _ => return Err(bad("first vertex must be (0,0)".into())),
        }
        for w in vertices.windows(2) {
            if w[1].x <= w[0].x {
                return Err(bad(format!("x must strictly increase at {}", w[1])));
            }
        }
        for w in vertices.windows(3) {
            if orient(w[0], w[2], w[1]) != Ordering::Greater {
                return Err(bad(format!("not strictly concave at {}", w[1])));
            }
        }
        Ok(HNPolygon { vertices })
    }

    pub fn vertices(&self) -> &[LatticePoint] {
        &self.vertices
    }

    pub fn start(&self) -> LatticePoint {
        self.vertices[0]
    }

    pub fn end(&self) -> LatticePoint {
        *self
            .vertices
            .last()
            .expect("polygons have at least one vertex")
    }

    /// Vertices other than the two endpoints.
    pub fn interior_vertices(&self) -> &[LatticePoint] {
        match self.vertices.len() {
            0..=2 => &[],
            len => &self.vertices[1..len - 1],
        }
    }

    /// Edge vectors, which are the charges of the HN pieces.
    pub fn edges(&self) -> Vec<Charge> {
        self.vertices
            .windows(2)
            .map(|w| Charge::new((w[1].x - w[0].x) as u32, w[1].y - w[0].y))
            .collect()
    }

    pub fn to_hn_type(&self) -> HNType {
        HNType::new(self.edges()).expect("strictly concave chains have decreasing edge slopes")
    }
}

pub fn hn_polygon(nu: &HNType) -> HNPolygon {
    let mut vertices = Vec::with_capacity(nu.pieces().len() + 1);
    let mut p = LatticePoint::ORIGIN;
    vertices.push(p);
    for piece in nu.pieces() {
        p = LatticePoint::new(p.x + i64::from(piece.rank), p.y + piece.degree);
        vertices.push(p);
    }
    HNPolygon { vertices }
}

/// The triangle with corners `(0,0)`, `(k+1,n)`, `(k,n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Triangle {
    k: i64,
    n: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Location {
    Interior,
    Boundary,
    Exterior,
}

impl Triangle {
    pub fn new(k: i64, n: i64) -> Result<Self> {
        if k < 1 || k >= n {
            return Err(Error::OutOfRange { k, n });
        }
        Ok(Triangle { k, n })
    }

    pub fn k(&self) -> i64 {
        self.k
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn corners(&self) -> [LatticePoint; 3] {
        [
            LatticePoint::ORIGIN,
            LatticePoint::new(self.k + 1, self.n),
            LatticePoint::new(self.k, self.n),
        ]
    }

    /// Signs of the three edge tests: above the base, below the steep side,
    /// below the top edge.
    fn edge_tests(&self, p: LatticePoint) -> [Ordering; 3] {
        let (x, y) = (i128::from(p.x), i128::from(p.y));
        let (k, n) = (i128::from(self.k), i128::from(self.n));
        [
            (y * (k + 1)).cmp(&(n * x)),
            (n * x).cmp(&(y * k)),
            n.cmp(&y),
        ]
    }

    pub fn locate(&self, p: LatticePoint) -> Location {
        let tests = self.edge_tests(p);
        if tests.iter().all(|t| *t == Ordering::Greater) {
            Location::Interior
        } else if tests.iter().all(|t| *t != Ordering::Less) {
            Location::Boundary
        } else {
            Location::Exterior
        }
    }
}

pub fn strictly_inside(p: LatticePoint, triangle: &Triangle) -> bool {
    triangle.locate(p) == Location::Interior
}

/// Shatz order: `a <= b` iff the polygon of `a` lies inside that of `b`, i.e.
/// every vertex of `a` is on or below the top chain of `b`.
pub fn polygon_leq(a: &HNPolygon, b: &HNPolygon) -> Result<bool> {
    if a.start() != b.start() || a.end() != b.end() {
        return Err(Error::Incomparable);
    }
    let top = b.vertices();
    let mut seg = 0;
    for &v in a.vertices() {
        while seg + 1 < top.len() && top[seg + 1].x < v.x {
            seg += 1;
        }
        if seg + 1 == top.len() {
            // Single-vertex polygons: both are the origin.
            continue;
        }
        if orient(top[seg], top[seg + 1], v) == Ordering::Greater {
            return Ok(false);
        }
    }
    Ok(true)
}
