//! Undirected weighted graphs and their construction from a corpus: the
//! author network (edges weighted by co-authored paper counts), the
//! publication network (edges weighted by shared-author counts), and the
//! per-year author networks.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::io::Write;

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::util::fmt_sig;

/// Undirected weighted graph with opaque string node ids and sorted
/// adjacency for deterministic iteration. No self-loops; weights > 0.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    pub node_ids: Vec<String>,
    /// Per node: (neighbor index, weight), sorted by neighbor index.
    pub adjacency: Vec<Vec<(usize, f64)>>,
    index: HashMap<String, usize>,
}

impl WeightedGraph {
    /// Build from nodes and undirected edges given as (u, v, w) index
    /// triples. Symmetric entries are stored for both endpoints.
    pub fn from_edges(node_ids: Vec<String>, edges: &[(usize, usize, f64)]) -> WeightedGraph {
        let n = node_ids.len();
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v, w) in edges {
            assert!(u != v, "self-loop");
            assert!(w > 0.0, "non-positive weight");
            adjacency[u].push((v, w));
            adjacency[v].push((u, w));
        }
        for adj in &mut adjacency {
            adj.sort_by_key(|a| a.0);
        }
        let index = node_ids.iter().cloned().enumerate().map(|(i, id)| (id, i)).collect();
        WeightedGraph { node_ids, adjacency, index }
    }

    pub fn node_count(&self) -> usize {
        self.node_ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(|a| a.len()).sum::<usize>() / 2
    }

    pub fn node_index(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn degree_weight(&self, node: usize) -> f64 {
        self.adjacency[node].iter().map(|&(_, w)| w).sum()
    }

    pub fn neighbors(&self, node: usize) -> &[(usize, f64)] {
        &self.adjacency[node]
    }

    pub fn edge_weight(&self, u: usize, v: usize) -> Option<f64> {
        self.adjacency[u]
            .binary_search_by(|probe| probe.0.cmp(&v))
            .ok()
            .map(|pos| self.adjacency[u][pos].1)
    }

    /// Edge list "u v w", one edge per line, endpoints as original ids with
    /// the lexicographically smaller id first, lines sorted.
    pub fn write_edge_list(&self, mut w: impl Write) -> std::io::Result<()> {
        let mut lines = Vec::with_capacity(self.edge_count());
        for (u, adj) in self.adjacency.iter().enumerate() {
            for &(v, weight) in adj {
                if u < v {
                    let (a, b) = if self.node_ids[u] <= self.node_ids[v] {
                        (&self.node_ids[u], &self.node_ids[v])
                    } else {
                        (&self.node_ids[v], &self.node_ids[u])
                    };
                    lines.push(format!("{} {} {}", a, b, fmt_sig(weight)));
                }
            }
        }
        lines.sort();
        for line in lines {
            writeln!(w, "{line}")?;
        }
        Ok(())
    }
}

fn check_years(corpus: &Corpus, years: &HashSet<i32>) -> Result<()> {
    if years.is_empty() {
        return Err(Error::EmptyYearSelection);
    }
    let (min, max) = corpus.year_window;
    for &y in years {
        if y < min || y > max {
            return Err(Error::YearOutOfWindow { year: y, min, max });
        }
    }
    Ok(())
}

/// Author network over the selected years: one node per author appearing in
/// the selection, edge weight = number of selected publications listing both
/// endpoints. Solo authors appear as isolated nodes.
pub fn build_author_network(corpus: &Corpus, years: &HashSet<i32>) -> Result<WeightedGraph> {
    check_years(corpus, years)?;
    let mut authors: Vec<&String> = corpus
        .records
        .iter()
        .filter(|r| years.contains(&r.year))
        .flat_map(|r| r.author_ids.iter())
        .collect::<HashSet<_>>()
        .into_iter()
        .collect();
    authors.sort();
    let node_ids: Vec<String> = authors.into_iter().cloned().collect();
    let index: HashMap<&str, usize> =
        node_ids.iter().enumerate().map(|(i, id)| (id.as_str(), i)).collect();

    let mut weights: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for rec in corpus.records.iter().filter(|r| years.contains(&r.year)) {
        let byline: Vec<usize> = rec.author_ids.iter().map(|a| index[a.as_str()]).collect();
        for i in 0..byline.len() {
            for j in (i + 1)..byline.len() {
                let key = (byline[i].min(byline[j]), byline[i].max(byline[j]));
                *weights.entry(key).or_insert(0.0) += 1.0;
            }
        }
    }
    let edges: Vec<(usize, usize, f64)> =
        weights.into_iter().map(|((u, v), w)| (u, v, w)).collect();
    Ok(WeightedGraph::from_edges(node_ids, &edges))
}

/// Publication network over the selected years: one node per publication,
/// edge weight = number of shared authors, edge present only when the
/// bylines intersect.
pub fn build_publication_network(corpus: &Corpus, years: &HashSet<i32>) -> Result<WeightedGraph> {
    check_years(corpus, years)?;
    let selected: Vec<&crate::corpus::PublicationRecord> =
        corpus.records.iter().filter(|r| years.contains(&r.year)).collect();
    let mut node_ids: Vec<String> = selected.iter().map(|r| r.pub_id.clone()).collect();
    node_ids.sort();
    let index: HashMap<&str, usize> =
        node_ids.iter().enumerate().map(|(i, id)| (id.as_str(), i)).collect();

    // accumulate shared-author counts via the author -> publications map
    let mut by_author: HashMap<&str, Vec<usize>> = HashMap::new();
    for rec in &selected {
        let node = index[rec.pub_id.as_str()];
        for author in &rec.author_ids {
            by_author.entry(author.as_str()).or_default().push(node);
        }
    }
    let mut weights: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for pubs in by_author.values() {
        for i in 0..pubs.len() {
            for j in (i + 1)..pubs.len() {
                let key = (pubs[i].min(pubs[j]), pubs[i].max(pubs[j]));
                *weights.entry(key).or_insert(0.0) += 1.0;
            }
        }
    }
    let edges: Vec<(usize, usize, f64)> =
        weights.into_iter().map(|((u, v), w)| (u, v, w)).collect();
    Ok(WeightedGraph::from_edges(node_ids, &edges))
}

/// One author network per calendar year in the corpus window, each built
/// only from that year's publications. Years with no publications yield
/// empty graphs.
pub fn yearly_author_networks(corpus: &Corpus) -> Result<BTreeMap<i32, WeightedGraph>> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let mut out = BTreeMap::new();
    for year in corpus.years() {
        let years: HashSet<i32> = [year].into_iter().collect();
        let graph = build_author_network(corpus, &years)?;
        out.insert(year, graph);
    }
    Ok(out)
}
