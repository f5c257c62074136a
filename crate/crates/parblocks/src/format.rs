//! JSON documents read and written by the command line.
//!
//! Rationals are strings `"p/q"`, big integers are decimal strings.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigUint;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use parblocks_core::curves::{StableGraph, Vertex};
use parblocks_core::fusion::{FusionTable, LevelContext, WeightPartition};
use parblocks_core::picard::DivisorClass;
use parblocks_core::weights::{DestabilizingDatum, ParabolicWeight, WallSpec};

use crate::error::{CliError, CliResult};

pub const TABLE_FORMAT_VERSION: u32 = 1;

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexDoc {
    pub genus: u32,
    #[serde(default)]
    pub legs: Vec<u32>,
}

/// `{vertices: [{genus, legs}], edges: [[v, v]], labels: {leg: partition}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDoc {
    pub vertices: Vec<VertexDoc>,
    #[serde(default)]
    pub edges: Vec<[usize; 2]>,
    #[serde(default)]
    pub labels: BTreeMap<u32, Vec<u32>>,
}

impl GraphDoc {
    pub fn from_graph(graph: &StableGraph) -> Self {
        Self {
            vertices: graph.vertices.iter().map(|v| VertexDoc { genus: v.genus, legs: v.legs.clone() }).collect(),
            edges: graph.edges.iter().map(|&(a, b)| [a, b]).collect(),
            labels: graph.labels.iter().map(|(&leg, w)| (leg, w.parts().to_vec())).collect(),
        }
    }

    /// Builds and validates the graph. Labels are read as `sl_rank` weights.
    pub fn to_graph(&self, rank: usize) -> CliResult<StableGraph> {
        let mut labels = BTreeMap::new();
        for (&leg, parts) in &self.labels {
            let w = WeightPartition::new(rank, parts).map_err(|e| invalid(format!("label on leg {leg}: {e}")))?;
            labels.insert(leg, w);
        }
        let graph = StableGraph::new(
            self.vertices.iter().map(|v| Vertex::new(v.genus, &v.legs)).collect(),
            self.edges.iter().map(|&[a, b]| (a, b)).collect(),
        )
        .with_labels(labels);
        graph.validate().map_err(|v| invalid(v.to_string()))?;
        Ok(graph)
    }
}

pub fn rational_to_string(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Accepts `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> CliResult<BigRational> {
    BigRational::from_str(s.trim()).map_err(|e| invalid(format!("bad fraction {s:?}: {e}")))
}

/// One array of fraction strings per marked point.
pub type WeightsDoc = Vec<Vec<String>>;

pub fn weights_to_doc(points: &[Vec<BigRational>]) -> WeightsDoc {
    points.iter().map(|p| p.iter().map(rational_to_string).collect()).collect()
}

/// The rank is `rank` when given, otherwise one more than the point length.
/// With no points the rank must be given.
pub fn weights_from_doc(doc: &WeightsDoc, rank: Option<usize>) -> CliResult<ParabolicWeight> {
    let rank = match (rank, doc.first()) {
        (Some(r), _) => r,
        (None, Some(p)) => p.len() + 1,
        (None, None) => return Err(invalid("a weight with no points needs --rank")),
    };
    let points = doc
        .iter()
        .map(|p| p.iter().map(|s| parse_rational(s)).collect::<CliResult<Vec<_>>>())
        .collect::<CliResult<Vec<_>>>()?;
    Ok(ParabolicWeight::new(rank, points)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WallDoc {
    pub s: usize,
    pub d: i64,
    #[serde(rename = "J")]
    pub subsets: Vec<Vec<usize>>,
}

impl From<&WallSpec> for WallDoc {
    fn from(w: &WallSpec) -> Self {
        Self { s: w.s, d: w.d, subsets: w.subsets.clone() }
    }
}

impl From<WallDoc> for WallSpec {
    fn from(w: WallDoc) -> Self {
        WallSpec { s: w.s, d: w.d, subsets: w.subsets }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatumDoc {
    pub r1: usize,
    pub d1: i64,
    #[serde(rename = "J")]
    pub subsets: Vec<Vec<usize>>,
}

impl From<&DestabilizingDatum> for DatumDoc {
    fn from(d: &DestabilizingDatum) -> Self {
        Self { r1: d.r1, d1: d.d1, subsets: d.subsets.clone() }
    }
}

/// `{level, d: [[int]]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DivisorDoc {
    pub level: i64,
    #[serde(default)]
    pub d: Vec<Vec<i64>>,
}

impl DivisorDoc {
    pub fn from_class(div: &DivisorClass) -> Self {
        Self { level: div.level(), d: div.d().to_vec() }
    }

    pub fn to_class(&self, rank: Option<usize>) -> CliResult<DivisorClass> {
        let rank = match (rank, self.d.first()) {
            (Some(r), _) => r,
            (None, Some(row)) => row.len() + 1,
            (None, None) => return Err(invalid("a divisor with no points needs --rank")),
        };
        Ok(DivisorClass::new(rank, self.level, self.d.clone())?)
    }
}

pub fn hilbert_to_doc(h: &[BigUint]) -> Vec<String> {
    h.iter().map(|x| x.to_string()).collect()
}

pub fn hilbert_from_doc(doc: &[String]) -> CliResult<Vec<BigUint>> {
    doc.iter().map(|s| BigUint::from_str(s).map_err(|e| invalid(format!("bad integer {s:?}: {e}")))).collect()
}

/// `[λ, μ, ν, N]`.
pub type TableEntry = (Vec<u32>, Vec<u32>, Vec<u32>, u64);

/// Persisted fusion table. Entries are `[λ, μ, ν, N]` with `λ ≤ μ ≤ ν`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableDoc {
    pub format_version: u32,
    pub r: usize,
    pub level: u32,
    pub entries: Vec<TableEntry>,
}

impl TableDoc {
    pub fn from_table(table: &FusionTable) -> Self {
        let ctx = table.context();
        Self {
            format_version: TABLE_FORMAT_VERSION,
            r: ctx.rank,
            level: ctx.level,
            entries: table
                .entries()
                .into_iter()
                .map(|(a, b, c, n)| (a.parts().to_vec(), b.parts().to_vec(), c.parts().to_vec(), n))
                .collect(),
        }
    }

    /// Rebuilds the table, rejecting unsorted keys, weights above the level,
    /// values that break the mod-`r` rule and conflicting duplicates.
    pub fn to_table(&self) -> CliResult<FusionTable> {
        if self.format_version != TABLE_FORMAT_VERSION {
            return Err(invalid(format!("unsupported fusion table format_version {}", self.format_version)));
        }
        let ctx = LevelContext::new(self.r, self.level)?;
        let table = FusionTable::new(ctx);
        for (a, b, c, n) in &self.entries {
            let w = |p: &[u32]| WeightPartition::new(self.r, p);
            table.insert_checked(w(a)?, w(b)?, w(c)?, *n)?;
        }
        Ok(table)
    }
}

/// Parses a document given either inline (text starting with `{` or `[`) or
/// as a path to a file.
pub fn read_document<T: for<'de> Deserialize<'de>>(source: &str) -> CliResult<T> {
    let trimmed = source.trim_start();
    let text = if trimmed.starts_with('{') || trimmed.starts_with('[') {
        source.to_string()
    } else {
        std::fs::read_to_string(source).map_err(|e| CliError::Io(format!("cannot read {source}: {e}")))?
    };
    let value: Value = serde_json::from_str(&text)?;
    Ok(serde_json::from_value(value)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use parblocks_core::curves::stable_graphs;
    use parblocks_core::fusion::FusionTable;

    #[test]
    fn graph_round_trip() {
        for g in stable_graphs(1, 2).into_iter().chain(stable_graphs(2, 0)) {
            let doc = GraphDoc::from_graph(&g);
            let text = serde_json::to_string(&doc).unwrap();
            let back: GraphDoc = serde_json::from_str(&text).unwrap();
            assert_eq!(back.to_graph(2).unwrap(), g);
        }
        let labelled = r#"{"vertices":[{"genus":0,"legs":[1,2,3]}],"labels":{"1":[1],"2":[1],"3":[0]}}"#;
        let doc: GraphDoc = serde_json::from_str(labelled).unwrap();
        let g = doc.to_graph(2).unwrap();
        assert_eq!(GraphDoc::from_graph(&g), doc);
    }

    #[test]
    fn unstable_graph_is_rejected() {
        let doc: GraphDoc = serde_json::from_str(r#"{"vertices":[{"genus":0,"legs":[1,2]}]}"#).unwrap();
        assert_eq!(doc.to_graph(2).unwrap_err().to_string(), "stability violated at vertex 0");
        assert!(serde_json::from_str::<GraphDoc>(r#"{"vertices":[],"extra":1}"#).is_err());
    }

    #[test]
    fn weights_round_trip() {
        let doc: WeightsDoc = vec![vec!["2/3".into(), "1/3".into()], vec!["1/2".into(), "1/5".into()]];
        let a = weights_from_doc(&doc, None).unwrap();
        assert_eq!(a.rank(), 3);
        assert_eq!(weights_to_doc(a.points()), doc);
        assert!(weights_from_doc(&vec![vec!["1/0".into()]], None).is_err());
        assert!(weights_from_doc(&vec![vec!["1/3".into(), "2/3".into()]], None).is_err());
        assert!(weights_from_doc(&vec![], None).is_err());
        assert_eq!(weights_from_doc(&vec![], Some(2)).unwrap().n(), 0);
        assert_eq!(rational_to_string(&parse_rational("4").unwrap()), "4/1");
    }

    #[test]
    fn wall_doc_uses_capital_j() {
        let w = WallSpec { s: 1, d: 0, subsets: vec![vec![1], vec![2]] };
        let text = serde_json::to_string(&WallDoc::from(&w)).unwrap();
        assert_eq!(text, r#"{"s":1,"d":0,"J":[[1],[2]]}"#);
        let back: WallDoc = serde_json::from_str(&text).unwrap();
        assert_eq!(WallSpec::from(back), w);
    }

    #[test]
    fn divisor_and_hilbert_docs() {
        let doc: DivisorDoc = serde_json::from_str(r#"{"level":4,"d":[[1,1]]}"#).unwrap();
        let div = doc.to_class(None).unwrap();
        assert_eq!((div.rank(), div.level()), (3, 4));
        assert_eq!(DivisorDoc::from_class(&div), doc);
        assert!(DivisorDoc { level: 1, d: vec![] }.to_class(None).is_err());
        assert!(DivisorDoc { level: 1, d: vec![vec![1], vec![1, 1]] }.to_class(None).is_err());
        let h: Vec<BigUint> = vec![1u32.into(), "123456789012345678901234567890".parse().unwrap()];
        assert_eq!(hilbert_from_doc(&hilbert_to_doc(&h)).unwrap(), h);
    }

    #[test]
    fn table_round_trip_and_validation() {
        let table = FusionTable::new(LevelContext::new(3, 2).unwrap());
        table.fill().unwrap();
        let doc = TableDoc::from_table(&table);
        let text = serde_json::to_string(&doc).unwrap();
        let back: TableDoc = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_table().unwrap().entries(), table.entries());

        let mut bad = doc.clone();
        bad.entries.push((vec![0, 0], vec![0, 0], vec![1, 0], 1));
        assert!(bad.to_table().is_err());
        let mut over = doc.clone();
        over.entries.push((vec![0, 0], vec![0, 0], vec![3, 0], 0));
        assert!(over.to_table().is_err());
        let mut unsorted = doc.clone();
        unsorted.entries.push((vec![1, 0], vec![0, 0], vec![1, 1], 0));
        assert!(unsorted.to_table().is_err());
        let mut version = doc;
        version.format_version = 99;
        assert!(version.to_table().is_err());
    }

    #[test]
    fn inline_and_file_documents() {
        let inline: DivisorDoc = read_document(r#"{"level":2,"d":[]}"#).unwrap();
        assert_eq!(inline.level, 2);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("w.json");
        std::fs::write(&path, r#"[["1/2"]]"#).unwrap();
        let doc: WeightsDoc = read_document(path.to_str().unwrap()).unwrap();
        assert_eq!(doc, vec![vec!["1/2".to_string()]]);
        assert!(matches!(read_document::<WeightsDoc>("/no/such/file"), Err(CliError::Io(_))));
        assert!(matches!(read_document::<WeightsDoc>("[1,"), Err(CliError::Validation(_))));
    }
}
