//! Text loaders: SNAP-style edge lists, LFR `network.dat`/`community.dat`,
//! and one-community-per-line ground-truth files.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use super::{Graph, NodeId, NodeSet};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GraphFormat {
    /// Whitespace-separated id pairs, `#` comments.
    #[default]
    EdgeList,
    /// LFR benchmark output: tab-separated 1-based pairs in `network.dat`.
    Lfr,
}

#[derive(Debug, Clone, Default)]
pub struct LoaderOptions {
    pub format: GraphFormat,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn parse_id(path: &Path, line: usize, token: &str) -> Result<u64> {
    token.parse::<u64>().map_err(|_| Error::Parse {
        path: path.to_path_buf(),
        line,
        message: format!("expected a non-negative integer node id, found {token:?}"),
    })
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#') && !l.starts_with('%'))
}

/// Loads an undirected graph. Labels are remapped to `0..n` in ascending label
/// order; self-loops are dropped and repeated edges collapsed.
pub fn load_edge_list(path: impl AsRef<Path>, options: &LoaderOptions) -> Result<Graph> {
    let path = path.as_ref();
    let text = read(path)?;
    let _ = options.format;
    parse_edge_list(path, &text)
}

/// Both formats are a pair of ids per line; 1-based LFR ids are kept as labels.
pub(crate) fn parse_edge_list(path: &Path, text: &str) -> Result<Graph> {
    let mut pairs = Vec::new();
    for (lineno, line) in data_lines(text) {
        let mut tokens = line.split_whitespace();
        let (Some(a), Some(b)) = (tokens.next(), tokens.next()) else {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line: lineno,
                message: "expected two node ids".into(),
            });
        };
        pairs.push((parse_id(path, lineno, a)?, parse_id(path, lineno, b)?));
    }
    if !pairs.iter().any(|(a, b)| a != b) {
        return Err(Error::EmptyGraph);
    }
    let labels: Vec<u64> = pairs
        .iter()
        .flat_map(|&(a, b)| [a, b])
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let index: BTreeMap<u64, NodeId> = labels
        .iter()
        .enumerate()
        .map(|(i, &l)| (l, i as NodeId))
        .collect();
    let edges = pairs.iter().map(|(a, b)| (index[a], index[b]));
    Ok(Graph::build(labels, edges))
}

/// One community per line, whitespace-separated source labels. Communities
/// smaller than `min_size` are skipped.
pub fn load_communities(path: impl AsRef<Path>, graph: &Graph, min_size: usize) -> Result<Vec<NodeSet>> {
    let path = path.as_ref();
    let text = read(path)?;
    let mut out = Vec::new();
    for (lineno, line) in data_lines(&text) {
        let labels = line
            .split_whitespace()
            .map(|t| parse_id(path, lineno, t))
            .collect::<Result<Vec<_>>>()?;
        let set = graph.node_set_of(&labels)?;
        if set.len() >= min_size {
            out.push(set);
        }
    }
    Ok(out)
}

/// LFR `community.dat`: a node label followed by the ids of every community it
/// belongs to. Communities are returned in ascending community-id order.
pub fn load_lfr_communities(path: impl AsRef<Path>, graph: &Graph, min_size: usize) -> Result<Vec<NodeSet>> {
    let path = path.as_ref();
    let text = read(path)?;
    let mut groups: BTreeMap<u64, Vec<NodeId>> = BTreeMap::new();
    for (lineno, line) in data_lines(&text) {
        let mut tokens = line.split_whitespace();
        let node = parse_id(path, lineno, tokens.next().unwrap_or_default())?;
        let node = graph.node_of(node)?;
        for t in tokens {
            groups.entry(parse_id(path, lineno, t)?).or_default().push(node);
        }
    }
    Ok(groups
        .into_values()
        .map(NodeSet::new)
        .filter(|s| s.len() >= min_size)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Adjacency;
    use std::io::Write;

    fn write(text: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(text.as_bytes()).unwrap();
        f
    }

    fn load(text: &str) -> Result<Graph> {
        let f = write(text);
        load_edge_list(f.path(), &LoaderOptions::default())
    }

    #[test]
    fn triangle() {
        let g = load("0 1\n1 2\n2 0").unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.total_volume(), 6);
        assert!((0..3).all(|v| g.degree(v) == 2));
    }

    #[test]
    fn self_loop_dropped() {
        let g = load("0 0\n0 1").unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.total_volume(), 2);
    }

    #[test]
    fn duplicates_collapse() {
        let g = load("# comment\n0 1\n1 0\n").unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn sparse_labels_are_remapped() {
        let g = load("10 500\n500 7\n").unwrap();
        assert_eq!(g.labels(), &[7, 10, 500]);
        assert_eq!(g.node_of(500).unwrap(), 2);
        assert_eq!(g.degree(2), 2);
    }

    #[test]
    fn errors() {
        assert!(matches!(load("0 x\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(load("# nothing\n"), Err(Error::EmptyGraph)));
        assert!(matches!(load("3 3\n"), Err(Error::EmptyGraph)));
        assert!(matches!(load("1\n"), Err(Error::Parse { .. })));
        let missing = load_edge_list("/nonexistent/graph.txt", &LoaderOptions::default());
        assert!(matches!(missing, Err(Error::Io { .. })));
    }

    #[test]
    fn community_files() {
        let g = load("1 2\n2 3\n3 1\n3 4\n").unwrap();
        let f = write("1 2 3\n4\n");
        let comms = load_communities(f.path(), &g, 3).unwrap();
        assert_eq!(comms, vec![NodeSet::new([0, 1, 2])]);
        let bad = write("1 99\n");
        assert!(matches!(load_communities(bad.path(), &g, 1), Err(Error::UnknownNode(99))));
    }

    #[test]
    fn lfr_files() {
        let net = write("1\t2\n2\t3\n3\t1\n3\t4\n");
        let g = load_edge_list(net.path(), &LoaderOptions { format: GraphFormat::Lfr }).unwrap();
        let comm = write("1\t1\n2\t1\n3\t1 2\n4\t2\n");
        let comms = load_lfr_communities(comm.path(), &g, 2).unwrap();
        assert_eq!(comms, vec![NodeSet::new([0, 1, 2]), NodeSet::new([2, 3])]);
    }
}
