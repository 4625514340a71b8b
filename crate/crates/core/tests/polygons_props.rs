use leafatlas::atlas::{enumerate_hn_types, validate_input};
use leafatlas::oracle::naive_polygon_leq;
use leafatlas::polygons::{hn_polygon, polygon_leq, strictly_inside, HNPolygon};

fn polygons(k: i64, n: i64) -> Vec<HNPolygon> {
    let input = validate_input(k, n).unwrap();
    enumerate_hn_types(&input, 1)
        .iter()
        .map(hn_polygon)
        .collect()
}

fn coprime_pairs(max_n: i64) -> impl Iterator<Item = (i64, i64)> {
    (2..=max_n)
        .flat_map(|n| (1..n).map(move |k| (k, n)))
        .filter(|&(k, n)| validate_input(k, n).is_ok())
}

#[test]
fn shatz_order_is_a_partial_order() {
    for (k, n) in coprime_pairs(10) {
        let ps = polygons(k, n);
        for a in &ps {
            assert!(polygon_leq(a, a).unwrap());
            for b in &ps {
                let ab = polygon_leq(a, b).unwrap();
                let ba = polygon_leq(b, a).unwrap();
                if ab && ba {
                    assert_eq!(a, b, "antisymmetry at k={k} n={n}");
                }
                for c in &ps {
                    if ab && polygon_leq(b, c).unwrap() {
                        assert!(polygon_leq(a, c).unwrap(), "transitivity at k={k} n={n}");
                    }
                }
            }
        }
    }
}

#[test]
fn chain_test_agrees_with_pointwise_test() {
    for (k, n) in coprime_pairs(10) {
        let ps = polygons(k, n);
        for a in &ps {
            for b in &ps {
                assert_eq!(polygon_leq(a, b).unwrap(), naive_polygon_leq(a, b).unwrap());
            }
        }
    }
}

#[test]
fn enumerated_polygons_are_valid_and_rising() {
    for (k, n) in coprime_pairs(10) {
        let input = validate_input(k, n).unwrap();
        for nu in enumerate_hn_types(&input, 1) {
            let p = hn_polygon(&nu);
            assert!(HNPolygon::from_vertices(p.vertices().to_vec()).is_ok());
            assert_eq!(p.to_hn_type(), nu);
            assert!(p
                .interior_vertices()
                .iter()
                .all(|&v| strictly_inside(v, input.triangle())));
            // every edge climbs: summands of admissible middle terms have positive degree
            assert!(
                p.edges().iter().all(|e| e.degree >= 1),
                "{nu} at k={k} n={n}"
            );
        }
    }
}
