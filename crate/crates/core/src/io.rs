//! Edge-list ingestion, canonical edge-list output, CSV reports and the
//! dataset manifest.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiments::{
    aggregate_sweep, Bucket, CurvePoint, PositivenessReport, StrengthCdf, SweepAggregate,
    SweepRecord,
};
use crate::graph::{EdgeRef, Graph, NodeId};

/// Environment variable naming the directory that holds downloaded datasets.
pub const DATA_DIR_ENV: &str = "TIE_ENTROPY_DATA";

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeListFormat {
    /// Whitespace-separated pairs, extra columns ignored.
    #[default]
    SnapTsv,
    /// Comma-separated pairs, extra columns ignored.
    CsvPairs,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Directedness {
    Directed,
    #[default]
    Undirected,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeListFile {
    pub path: PathBuf,
    pub format: EdgeListFormat,
    /// Informational only: directed inputs are symmetrized either way.
    pub directedness_hint: Directedness,
}

impl EdgeListFile {
    pub fn snap(path: impl Into<PathBuf>) -> Self {
        EdgeListFile {
            path: path.into(),
            format: EdgeListFormat::SnapTsv,
            directedness_hint: Directedness::Undirected,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoadedGraph {
    pub graph: Graph,
    /// Original label of every dense node id.
    pub labels: Vec<String>,
    pub skipped_self_loops: usize,
    pub raw_pairs: usize,
}

const HEADER_NODES: &str = "# nodes=";

/// Reads an edge list into a simple undirected graph.
///
/// Comment lines (`#` or `%`) and blank lines are skipped, self-loops are
/// dropped and repeated or reciprocal pairs merge into one edge. Labels are
/// densified in ascending numeric order when every label is a non-negative
/// integer and in order of first appearance otherwise. A `# nodes=N` header
/// written by [`save_edge_list`] keeps integer labels as ids, so isolated
/// nodes survive a round trip.
pub fn load_edge_list(file: &EdgeListFile) -> Result<LoadedGraph> {
    let handle = fs::File::open(&file.path)
        .map_err(|e| std::io::Error::new(e.kind(), format!("{}: {e}", file.path.display())))?;
    parse_edge_list(BufReader::new(handle), file.format)
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| std::io::Error::new(e.kind(), format!("{}: {e}", path.display())).into())
}

pub fn parse_edge_list(reader: impl BufRead, format: EdgeListFormat) -> Result<LoadedGraph> {
    let mut declared_nodes: Option<usize> = None;
    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let mut raw_pairs = 0;
    let mut skipped_self_loops = 0;
    let mut intern = |label: &str, labels: &mut Vec<String>| -> usize {
        *ids.entry(label.to_owned()).or_insert_with(|| {
            labels.push(label.to_owned());
            labels.len() - 1
        })
    };
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let trimmed = line.trim();
        if let Some(rest) = trimmed.strip_prefix(HEADER_NODES) {
            declared_nodes = rest.split_whitespace().next().and_then(|t| t.parse().ok());
            continue;
        }
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('%') {
            continue;
        }
        let mut fields: Box<dyn Iterator<Item = &str>> = match format {
            EdgeListFormat::SnapTsv => Box::new(trimmed.split_whitespace()),
            EdgeListFormat::CsvPairs => Box::new(trimmed.split(',').map(str::trim)),
        };
        let (a, b) = match (fields.next(), fields.next()) {
            (Some(a), Some(b)) if !a.is_empty() && !b.is_empty() => (a, b),
            _ => {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("expected two node labels, got {trimmed:?}"),
                })
            }
        };
        raw_pairs += 1;
        if a == b {
            skipped_self_loops += 1;
            continue;
        }
        let ia = intern(a, &mut labels);
        let ib = intern(b, &mut labels);
        pairs.push((ia, ib));
    }
    if raw_pairs == 0 && declared_nodes.is_none() {
        return Err(Error::EmptyInput("edge list contains no edges".into()));
    }

    let numeric: Option<Vec<u64>> = labels.iter().map(|l| l.parse::<u64>().ok()).collect();
    let (node_count, remap, labels) = match (numeric, declared_nodes) {
        (Some(nums), Some(n)) if nums.iter().all(|&x| (x as usize) < n) => {
            let remap: Vec<usize> = nums.iter().map(|&x| x as usize).collect();
            (n, remap, (0..n).map(|v| v.to_string()).collect())
        }
        (Some(nums), _) => {
            let mut order: Vec<usize> = (0..nums.len()).collect();
            order.sort_by_key(|&k| nums[k]);
            let mut remap = vec![0; nums.len()];
            for (new, &old) in order.iter().enumerate() {
                remap[old] = new;
            }
            let sorted = order.iter().map(|&k| labels[k].clone()).collect();
            (nums.len(), remap, sorted)
        }
        (None, _) => {
            let n = labels.len();
            (n, (0..n).collect(), labels)
        }
    };
    let graph = Graph::from_edges_lossy(node_count, pairs.into_iter().map(|(a, b)| (remap[a], remap[b])))?;
    Ok(LoadedGraph {
        graph,
        labels,
        skipped_self_loops,
        raw_pairs,
    })
}

/// Writes one `i<TAB>j` line per edge with `i < j`, sorted, after a header.
pub fn save_edge_list(g: &Graph, path: &Path) -> Result<()> {
    let mut out = BufWriter::new(fs::File::create(path)?);
    write_edge_list(g, &mut out)?;
    out.flush()?;
    Ok(())
}

pub fn write_edge_list(g: &Graph, out: &mut impl Write) -> Result<()> {
    writeln!(out, "# undirected simple graph")?;
    writeln!(out, "{HEADER_NODES}{} edges={}", g.node_count(), g.edge_count())?;
    for EdgeRef { i, j } in g.edges() {
        writeln!(out, "{i}\t{j}")?;
    }
    Ok(())
}

/// `%.12g`-style formatting: 12 significant digits, trailing zeros trimmed.
pub fn fmt_real(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_owned()
    } else {
        s.to_owned()
    }
}

pub const SWEEP_HEADER: &[&str] = &["i", "j", "c_ij", "delta_pair"];
pub const AGGREGATE_HEADER: &[&str] = &["c_ij", "count", "min", "mean", "max"];
pub const CDF_HEADER: &[&str] = &["w", "cum_frac"];
pub const POSITIVENESS_HEADER: &[&str] = &["tau", "positive", "total", "clustering"];
pub const CURVE_HEADER: &[&str] = &["knob", "c", "tau"];

fn write_rows(path: &Path, header: &[&str], rows: impl Iterator<Item = String>) -> Result<()> {
    let mut buf = String::new();
    buf.push_str(&header.join(","));
    buf.push('\n');
    for row in rows {
        buf.push_str(&row);
        buf.push('\n');
    }
    fs::write(path, buf)?;
    Ok(())
}

pub fn write_sweep_csv(records: &[SweepRecord], path: &Path) -> Result<()> {
    let rows = records.iter().map(|r| {
        format!("{},{},{},{}", r.edge.i, r.edge.j, r.c_ij, fmt_real(r.delta_pair))
    });
    write_rows(path, SWEEP_HEADER, rows)
}

pub fn write_aggregate_csv(agg: &SweepAggregate, path: &Path) -> Result<()> {
    let rows = agg.buckets.iter().map(|b| {
        let mut s = String::new();
        let _ = write!(
            s,
            "{},{},{},{},{}",
            b.c_ij,
            b.count,
            fmt_real(b.min),
            fmt_real(b.mean),
            fmt_real(b.max)
        );
        s
    });
    write_rows(path, AGGREGATE_HEADER, rows)
}

pub fn write_cdf_csv(cdf: &StrengthCdf, path: &Path) -> Result<()> {
    if cdf.points.is_empty() {
        return Err(Error::EmptyInput("empty CDF".into()));
    }
    let rows = cdf.points.iter().map(|&(w, f)| format!("{},{}", fmt_real(w), fmt_real(f)));
    write_rows(path, CDF_HEADER, rows)
}

pub fn write_positiveness_csv(report: &PositivenessReport, path: &Path) -> Result<()> {
    let row = format!(
        "{},{},{},{}",
        fmt_real(report.tau),
        report.positive_count,
        report.total(),
        fmt_real(report.clustering)
    );
    write_rows(path, POSITIVENESS_HEADER, std::iter::once(row))
}

pub fn write_curve_csv(points: &[CurvePoint], path: &Path) -> Result<()> {
    let rows = points
        .iter()
        .map(|p| format!("{},{},{}", fmt_real(p.knob), fmt_real(p.clustering), fmt_real(p.tau)));
    write_rows(path, CURVE_HEADER, rows)
}

/// Parses a CSV file whose header must equal `header`, returning the data rows.
pub fn read_table(path: &Path, header: &[&str]) -> Result<Vec<Vec<String>>> {
    let text = read_text(path)?;
    let mut lines = text.lines();
    let found: Vec<&str> = lines
        .next()
        .ok_or_else(|| Error::Schema(format!("{}: missing header row", path.display())))?
        .split(',')
        .map(str::trim)
        .collect();
    for (k, want) in header.iter().enumerate() {
        match found.get(k) {
            Some(got) if got == want => {}
            Some(got) => {
                return Err(Error::Schema(format!(
                    "{}: column {} is {got:?}, expected {want:?}",
                    path.display(),
                    k + 1
                )))
            }
            None => {
                return Err(Error::Schema(format!(
                    "{}: missing column {want:?}",
                    path.display()
                )))
            }
        }
    }
    if found.len() > header.len() {
        return Err(Error::Schema(format!(
            "{}: unexpected column {:?}",
            path.display(),
            found[header.len()]
        )));
    }
    let mut rows = Vec::new();
    for (idx, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<String> = line.split(',').map(|c| c.trim().to_owned()).collect();
        if cells.len() != header.len() {
            return Err(Error::Parse {
                line: idx + 2,
                message: format!("expected {} fields, got {}", header.len(), cells.len()),
            });
        }
        rows.push(cells);
    }
    Ok(rows)
}

fn cell<T: std::str::FromStr>(value: &str, line: usize, column: &str) -> Result<T> {
    value.parse().map_err(|_| Error::Parse {
        line,
        message: format!("column {column}: cannot parse {value:?}"),
    })
}

pub fn read_sweep_csv(path: &Path) -> Result<Vec<SweepRecord>> {
    read_table(path, SWEEP_HEADER)?
        .iter()
        .enumerate()
        .map(|(k, r)| {
            let line = k + 2;
            let i: NodeId = cell(&r[0], line, "i")?;
            let j: NodeId = cell(&r[1], line, "j")?;
            Ok(SweepRecord {
                edge: EdgeRef::new(i, j)?,
                c_ij: cell(&r[2], line, "c_ij")?,
                delta_pair: cell(&r[3], line, "delta_pair")?,
            })
        })
        .collect()
}

pub fn read_aggregate_csv(path: &Path) -> Result<SweepAggregate> {
    let buckets = read_table(path, AGGREGATE_HEADER)?
        .iter()
        .enumerate()
        .map(|(k, r)| {
            let line = k + 2;
            Ok(Bucket {
                c_ij: cell(&r[0], line, "c_ij")?,
                count: cell(&r[1], line, "count")?,
                min: cell(&r[2], line, "min")?,
                mean: cell(&r[3], line, "mean")?,
                max: cell(&r[4], line, "max")?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepAggregate { buckets })
}

pub fn read_cdf_csv(path: &Path) -> Result<StrengthCdf> {
    let points = read_table(path, CDF_HEADER)?
        .iter()
        .enumerate()
        .map(|(k, r)| Ok((cell(&r[0], k + 2, "w")?, cell(&r[1], k + 2, "cum_frac")?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(StrengthCdf { points })
}

pub fn read_curve_csv(path: &Path) -> Result<Vec<CurvePoint>> {
    read_table(path, CURVE_HEADER)?
        .iter()
        .enumerate()
        .map(|(k, r)| {
            let line = k + 2;
            Ok(CurvePoint {
                knob: cell(&r[0], line, "knob")?,
                clustering: cell(&r[1], line, "c")?,
                tau: cell(&r[2], line, "tau")?,
            })
        })
        .collect()
}

/// Re-aggregates a sweep CSV.
pub fn aggregate_from_sweep_csv(path: &Path) -> Result<SweepAggregate> {
    aggregate_sweep(&read_sweep_csv(path)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetManifestEntry {
    pub name: String,
    pub url: String,
    /// File name inside the data directory, after decompression.
    pub file: String,
    pub expected_nodes: usize,
    pub expected_edges: usize,
    /// Allowed relative deviation of the normalized counts; 0 means exact.
    #[serde(default)]
    pub count_tolerance: f64,
    #[serde(default)]
    pub format: EdgeListFormat,
    #[serde(default)]
    pub directedness: Directedness,
    pub checksum: Option<String>,
    /// Published clustering and τ, for comparison.
    pub clustering: Option<f64>,
    pub tau: Option<f64>,
}

impl DatasetManifestEntry {
    pub fn edge_list(&self, data_dir: &Path) -> EdgeListFile {
        EdgeListFile {
            path: data_dir.join(&self.file),
            format: self.format,
            directedness_hint: self.directedness,
        }
    }

    pub fn counts_match(&self, g: &Graph) -> bool {
        let within = |got: usize, want: usize| {
            let diff = got.abs_diff(want) as f64;
            diff <= self.count_tolerance * want as f64
        };
        within(g.node_count(), self.expected_nodes) && within(g.edge_count(), self.expected_edges)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetManifest {
    #[serde(rename = "dataset")]
    pub datasets: Vec<DatasetManifestEntry>,
}

impl DatasetManifest {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Schema(format!("manifest: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&read_text(path)?)
    }

    pub fn get(&self, name: &str) -> Option<&DatasetManifestEntry> {
        self.datasets.iter().find(|d| d.name.eq_ignore_ascii_case(name))
    }
}

/// The manifest shipped with the repository.
pub fn builtin_manifest() -> DatasetManifest {
    DatasetManifest::parse(include_str!("../../../datasets/manifest.toml"))
        .expect("bundled manifest parses")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::complete;
    use proptest::prelude::*;

    fn parse(text: &str) -> Result<LoadedGraph> {
        parse_edge_list(text.as_bytes(), EdgeListFormat::SnapTsv)
    }

    #[test]
    fn dedupe_and_self_loops() {
        let loaded = parse("1 2\n2 1\n1 1").unwrap();
        assert_eq!(loaded.graph.node_count(), 2);
        assert_eq!(loaded.graph.edge_count(), 1);
        assert_eq!(loaded.skipped_self_loops, 1);
        // a node seen only in a self-loop is not kept
        let loaded = parse("1 2\n3 3\n").unwrap();
        assert_eq!(loaded.graph.node_count(), 2);
    }

    #[test]
    fn comments_labels_and_extra_columns() {
        let loaded = parse("# FromNodeId\tToNodeId\n10\t30\t1234\n\n30 20\n").unwrap();
        assert_eq!(loaded.labels, vec!["10", "20", "30"]);
        assert!(loaded.graph.has_edge(0, 2) && loaded.graph.has_edge(1, 2));
        let loaded = parse("bob alice\nalice carol\n").unwrap();
        assert_eq!(loaded.labels, vec!["bob", "alice", "carol"]);
        let loaded = parse_edge_list("a, b\nb,c\n".as_bytes(), EdgeListFormat::CsvPairs).unwrap();
        assert_eq!(loaded.graph.edge_count(), 2);
    }

    #[test]
    fn malformed_and_empty() {
        match parse("1 2\n3\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse(""), Err(Error::EmptyInput(_))));
        assert!(matches!(parse("# only a comment\n"), Err(Error::EmptyInput(_))));
    }

    #[test]
    fn canonical_output() {
        let mut buf = Vec::new();
        write_edge_list(&complete(3), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let body: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(body, vec!["0\t1", "0\t2", "1\t2"]);

        let mut buf = Vec::new();
        write_edge_list(&Graph::new(0), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.lines().all(|l| l.starts_with('#')));
        assert_eq!(parse(&text).unwrap().graph, Graph::new(0));
    }

    #[test]
    fn real_formatting() {
        assert_eq!(fmt_real(0.0), "0");
        assert_eq!(fmt_real(1.0), "1");
        assert_eq!(fmt_real(-0.1), "-0.1");
        assert_eq!(fmt_real(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_real(5f64.ln()), "1.60943791243");
        assert_eq!(fmt_real(123456.0), "123456");
        assert_eq!(fmt_real(1.5e-7), "1.5e-7");
        assert_eq!(fmt_real(9.9999999999999), "10");
        assert_eq!(fmt_real(2.5e15), "2.5e15");
    }

    #[test]
    fn manifest_parses() {
        let m = builtin_manifest();
        for name in ["CA-HepPh", "Email-Enron", "NewOrleans"] {
            assert!(m.get(name).is_some(), "{name}");
        }
        assert_eq!(m.get("email-enron").unwrap().expected_edges, 183831);
    }

    fn arb_graph() -> impl Strategy<Value = Graph> {
        (1usize..40).prop_flat_map(|n| {
            proptest::collection::vec((0..n, 0..n), 0..(n * 2))
                .prop_map(move |pairs| Graph::from_edges_lossy(n, pairs).unwrap())
        })
    }

    proptest! {
        #[test]
        fn save_load_round_trip(g in arb_graph()) {
            let mut buf = Vec::new();
            write_edge_list(&g, &mut buf).unwrap();
            let loaded = parse(std::str::from_utf8(&buf).unwrap()).unwrap();
            prop_assert_eq!(&loaded.graph, &g);
            let mut again = Vec::new();
            write_edge_list(&loaded.graph, &mut again).unwrap();
            prop_assert_eq!(buf, again);
        }

        #[test]
        fn real_formatting_round_trips_to_12_digits(x in -1e6f64..1e6) {
            let back: f64 = fmt_real(x).parse().unwrap();
            prop_assert!((back - x).abs() <= 1e-11 * x.abs().max(1e-300));
        }
    }
}
