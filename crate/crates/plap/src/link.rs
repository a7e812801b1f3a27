//! Link graphs of length-3 presentations: one vertex per symmetrized
//! generator, three labeled edges per relator, plus structural diagnostics
//! on each label class.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::Multigraph;
use crate::words::{Presentation, Word};

/// Link multigraph on 2m vertices (vertex 2g is generator g, vertex 2g+1
/// its inverse), with edges kept per label class. A relator s t u
/// contributes (s^-1, t) to class 1, (t^-1, u) to class 2, and (u^-1, s)
/// to class 3.
#[derive(Debug, Clone)]
pub struct LinkGraph {
    pub generators: usize,
    classes: [Vec<(usize, usize)>; 3],
}

fn class_edge(w: &Word, class: usize) -> (usize, usize) {
    let a = w.0[class - 1].inverse().index();
    let b = w.0[class % 3].index();
    (a.min(b), a.max(b))
}

pub fn build_link_graph(p: &Presentation) -> Result<LinkGraph> {
    for w in &p.relators {
        if w.len() != 3 {
            return Err(Error::RelatorLength {
                expected: 3,
                got: w.len(),
            });
        }
    }
    let mut classes: [Vec<(usize, usize)>; 3] = Default::default();
    for w in &p.relators {
        for (c, store) in classes.iter_mut().enumerate() {
            store.push(class_edge(w, c + 1));
        }
    }
    Ok(LinkGraph {
        generators: p.generators,
        classes,
    })
}

impl LinkGraph {
    pub fn vertex_count(&self) -> usize {
        2 * self.generators
    }

    pub fn relator_count(&self) -> usize {
        self.classes[0].len()
    }

    pub fn class_edges(&self, class: usize) -> Result<&[(usize, usize)]> {
        if !(1..=3).contains(&class) {
            return Err(Error::Parameter(format!(
                "edge class must be 1, 2, or 3, got {class}"
            )));
        }
        Ok(&self.classes[class - 1])
    }
}

/// One class as a multigraph on the full vertex set.
pub fn link_class(l: &LinkGraph, class: usize) -> Result<Multigraph> {
    Multigraph::new(l.vertex_count(), l.class_edges(class)?.to_vec())
}

/// All three classes merged into one multigraph.
pub fn link_full(l: &LinkGraph) -> Result<Multigraph> {
    let mut edges = Vec::with_capacity(3 * l.relator_count());
    for c in &l.classes {
        edges.extend_from_slice(c);
    }
    Multigraph::new(l.vertex_count(), edges)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassReport {
    pub class: usize,
    /// Edge count after collapsing multiplicities.
    pub distinct_pairs: usize,
    /// Pairs carried by more than one relator.
    pub duplicated_pairs: usize,
    pub max_multiplicity: usize,
    /// The duplicated pairs are pairwise vertex-disjoint non-loops and
    /// nothing exceeds multiplicity two, so the class splits into a simple
    /// graph plus a matching.
    pub duplicates_form_matching: bool,
    /// Edges with both endpoints in the same part, when a vertex partition
    /// is supplied.
    pub within_part_edges: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinkReport {
    pub per_class: Vec<ClassReport>,
    pub total_edges: usize,
}

/// Structural diagnostics per class; `parts` assigns each of the 2m
/// vertices to a partition class when within-part counts are wanted.
pub fn link_structure_report(l: &LinkGraph, parts: Option<&[usize]>) -> Result<LinkReport> {
    if let Some(parts) = parts {
        if parts.len() != l.vertex_count() {
            return Err(Error::Dimension {
                expected: l.vertex_count(),
                got: parts.len(),
            });
        }
    }
    let mut per_class = Vec::with_capacity(3);
    for class in 1..=3 {
        let edges = l.class_edges(class)?;
        let mut mult: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for &e in edges {
            *mult.entry(e).or_insert(0) += 1;
        }
        let max_multiplicity = mult.values().copied().max().unwrap_or(0);
        let doubled: Vec<(usize, usize)> = mult
            .iter()
            .filter(|&(_, &c)| c >= 2)
            .map(|(&e, _)| e)
            .collect();
        let mut matching = max_multiplicity <= 2;
        let mut seen = vec![false; l.vertex_count()];
        for &(u, v) in &doubled {
            if u == v || seen[u] || seen[v] {
                matching = false;
                break;
            }
            seen[u] = true;
            seen[v] = true;
        }
        let within_part_edges = parts.map(|parts| {
            edges.iter().filter(|&&(u, v)| parts[u] == parts[v]).count()
        });
        per_class.push(ClassReport {
            class,
            distinct_pairs: mult.len(),
            duplicated_pairs: doubled.len(),
            max_multiplicity,
            duplicates_form_matching: matching,
            within_part_edges,
        });
    }
    Ok(LinkReport {
        per_class,
        total_edges: 3 * l.relator_count(),
    })
}
