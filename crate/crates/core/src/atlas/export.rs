use std::fmt::Write;

use serde::Serialize;

use super::{Atlas, LeafRecord};

pub const TSV_HEADER: &str = "id\tvertices\tend_dim\tleaf_dim\tmoduli_dim\tstratum_dim\tflags";

#[derive(Serialize)]
struct AtlasDoc<'a> {
    k: i64,
    n: i64,
    ambient_dim: i64,
    warning: Option<&'a str>,
    records: Vec<RecordDoc<'a>>,
    poset: Vec<[&'a str; 2]>,
}

#[derive(Serialize)]
struct RecordDoc<'a> {
    id: &'a str,
    hn_type: Vec<(u32, i64)>,
    summands: Vec<(u32, i64, u32)>,
    vertices: Vec<(i64, i64)>,
    end_dim: u64,
    leaf_dim: u64,
    moduli_dim: u64,
    stratum_dim: u64,
    is_semistable: bool,
    is_stable_type: bool,
    det_satisfiable: bool,
}

impl<'a> From<&'a LeafRecord> for RecordDoc<'a> {
    fn from(r: &'a LeafRecord) -> Self {
        RecordDoc {
            id: &r.id,
            hn_type: r
                .hn_type
                .pieces()
                .iter()
                .map(|c| (c.rank, c.degree))
                .collect(),
            summands: r
                .bundle_type
                .summands()
                .iter()
                .map(|(c, m)| (c.charge().rank, c.charge().degree, *m))
                .collect(),
            vertices: r.vertices.iter().map(|p| (p.x, p.y)).collect(),
            end_dim: r.end_dim,
            leaf_dim: r.leaf_dim,
            moduli_dim: r.moduli_dim,
            stratum_dim: r.stratum_dim,
            is_semistable: r.is_semistable,
            is_stable_type: r.is_stable_type,
            det_satisfiable: r.det_satisfiable,
        }
    }
}

fn flags(r: &LeafRecord) -> String {
    let mut out = Vec::new();
    if r.is_semistable {
        out.push("semistable");
    }
    if r.is_stable_type {
        out.push("stable");
    }
    if r.det_satisfiable {
        out.push("det");
    }
    if out.is_empty() {
        "-".to_string()
    } else {
        out.join(",")
    }
}

impl Atlas {
    pub fn to_json(&self) -> String {
        let doc = AtlasDoc {
            k: self.k,
            n: self.n,
            ambient_dim: self.ambient_dim,
            warning: self.warning,
            records: self.records.iter().map(RecordDoc::from).collect(),
            poset: self
                .poset_edges
                .iter()
                .map(|(lo, hi)| [lo.as_str(), hi.as_str()])
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("atlas documents always serialize");
        s.push('\n');
        s
    }

    /// One header line, then one row per record.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        out.push_str(TSV_HEADER);
        out.push('\n');
        for r in &self.records {
            let vertices = r
                .vertices
                .iter()
                .map(|p| p.to_string())
                .collect::<Vec<_>>()
                .join(" ");
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}",
                r.id,
                vertices,
                r.end_dim,
                r.leaf_dim,
                r.moduli_dim,
                r.stratum_dim,
                flags(r)
            );
        }
        out
    }

    /// Shatz order as a DOT digraph, edges from lower to higher type.
    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "digraph shatz_k{}_n{} {{", self.k, self.n);
        let _ = writeln!(
            out,
            "  label=\"specialization order (upper bound), k={} n={}\";",
            self.k, self.n
        );
        out.push_str("  rankdir=BT;\n  node [shape=box, fontname=\"monospace\"];\n");
        for nu in &self.hn_types {
            let id = nu.to_string();
            let leaf = self
                .records
                .iter()
                .filter(|r| r.hn_type == *nu)
                .map(|r| r.leaf_dim.to_string())
                .collect::<Vec<_>>()
                .join(",");
            let _ = writeln!(out, "  \"{id}\" [label=\"{id}\\nleaf_dim={leaf}\"];");
        }
        for (lo, hi) in &self.poset_edges {
            let _ = writeln!(out, "  \"{lo}\" -> \"{hi}\";");
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use crate::atlas::{build_atlas, validate_input};

    #[test]
    fn json_key_order() {
        let atlas = build_atlas(&validate_input(1, 3).unwrap(), true, 1).unwrap();
        let json = atlas.to_json();
        let keys = [
            "\"k\"",
            "\"n\"",
            "\"ambient_dim\"",
            "\"warning\"",
            "\"records\"",
            "\"poset\"",
        ];
        let pos: Vec<usize> = keys.iter().map(|k| json.find(k).unwrap()).collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]), "{json}");

        let record_keys = [
            "\"id\"",
            "\"hn_type\"",
            "\"summands\"",
            "\"vertices\"",
            "\"end_dim\"",
            "\"leaf_dim\"",
            "\"moduli_dim\"",
            "\"stratum_dim\"",
            "\"is_semistable\"",
            "\"is_stable_type\"",
            "\"det_satisfiable\"",
        ];
        let first = &json[json.find("\"records\"").unwrap()..];
        let pos: Vec<usize> = record_keys.iter().map(|k| first.find(k).unwrap()).collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]));

        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(
            v["records"][0]["summands"],
            serde_json::json!([[1, 2, 1], [1, 1, 1]])
        );
        assert_eq!(
            v["records"][0]["vertices"],
            serde_json::json!([[0, 0], [1, 2], [2, 3]])
        );
        assert_eq!(v["poset"], serde_json::json!([["2,3", "1,2;1,1"]]));
        assert_eq!(v["warning"], serde_json::Value::Null);
    }

    #[test]
    fn tsv_rows() {
        let atlas = build_atlas(&validate_input(1, 3).unwrap(), true, 1).unwrap();
        assert_eq!(
            atlas.to_tsv(),
            "id\tvertices\tend_dim\tleaf_dim\tmoduli_dim\tstratum_dim\tflags\n\
             1,2;1,1\t(0,0) (1,2) (2,3)\t3\t0\t1\t1\tdet\n\
             2,3\t(0,0) (2,3)\t1\t2\t0\t2\tsemistable,stable,det\n"
        );
    }

    #[test]
    fn dot_quotes_ids() {
        let atlas = build_atlas(&validate_input(2, 5).unwrap(), true, 1).unwrap();
        let dot = atlas.to_dot();
        assert!(dot.contains("\"3,5\" -> \"1,2;2,3\";"));
        assert!(dot.contains("\"1,2;2,3\" -> \"2,4;1,1\";"));
        assert!(dot.contains("\"2,4;1,1\" [label=\"2,4;1,1\\nleaf_dim=0,0\"];"));
        assert!(dot.starts_with("digraph shatz_k2_n5 {"));
    }
}
