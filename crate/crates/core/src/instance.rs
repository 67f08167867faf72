use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::classify::{is_chordal, is_cluster, split_partition, CliqueCover, SplitPartition};
use crate::error::{CvcError, Result};
use crate::graph::{Graph, Vertex, VertexSet};

/// The graph class that `G - S` is promised to belong to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModulatorKind {
    Split,
    Clique,
    Cluster,
    Degree1,
    Chordal,
    CliqueCover,
}

impl ModulatorKind {
    pub const ALL: [ModulatorKind; 6] = [
        ModulatorKind::Split,
        ModulatorKind::Clique,
        ModulatorKind::Cluster,
        ModulatorKind::Degree1,
        ModulatorKind::Chordal,
        ModulatorKind::CliqueCover,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModulatorKind::Split => "split",
            ModulatorKind::Clique => "clique",
            ModulatorKind::Cluster => "cluster",
            ModulatorKind::Degree1 => "degree1",
            ModulatorKind::Chordal => "chordal",
            ModulatorKind::CliqueCover => "cliquecover",
        }
    }
}

impl fmt::Display for ModulatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModulatorKind {
    type Err = CvcError;

    fn from_str(s: &str) -> Result<Self> {
        ModulatorKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| CvcError::InvalidParameter(format!("unknown modulator kind {s:?}")))
    }
}

/// Whether `G - s` lies in the class named by `kind`. For clique covers the
/// supplied cover must partition `V(G) - s` into cliques.
pub fn kind_holds(
    g: &Graph,
    s: &VertexSet,
    kind: ModulatorKind,
    cover: Option<&CliqueCover>,
) -> bool {
    if s.iter().any(|&v| v >= g.n()) {
        return false;
    }
    let (h, _) = g.without(s);
    match kind {
        ModulatorKind::Split => split_partition(&h).is_some(),
        ModulatorKind::Clique => h.is_clique(&h.vertex_set()),
        ModulatorKind::Cluster => is_cluster(&h),
        ModulatorKind::Degree1 => h.max_degree() <= 1,
        ModulatorKind::Chordal => is_chordal(&h),
        ModulatorKind::CliqueCover => {
            let rest: VertexSet = g.vertices().filter(|v| !s.contains(v)).collect();
            cover.is_some_and(|c| c.covers(g, &rest))
        }
    }
}

/// A graph with an annotated modulator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub graph: Graph,
    pub modulator: VertexSet,
    pub kind: ModulatorKind,
    /// Clique cover of `G - S` (original ids); clique-cover kind only.
    pub cover: Option<CliqueCover>,
}

impl Instance {
    /// Builds an instance after checking the class invariant.
    pub fn new(graph: Graph, modulator: VertexSet, kind: ModulatorKind) -> Result<Self> {
        let inst = Instance {
            graph,
            modulator,
            kind,
            cover: None,
        };
        inst.check()?;
        Ok(inst)
    }

    pub fn with_cover(graph: Graph, modulator: VertexSet, cover: CliqueCover) -> Result<Self> {
        let inst = Instance {
            graph,
            modulator,
            kind: ModulatorKind::CliqueCover,
            cover: Some(cover),
        };
        inst.check()?;
        Ok(inst)
    }

    pub fn is_valid(&self) -> bool {
        kind_holds(&self.graph, &self.modulator, self.kind, self.cover.as_ref())
    }

    pub fn check(&self) -> Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            Err(CvcError::KindMismatch(format!(
                "G - S is not in class {} (|S| = {})",
                self.kind,
                self.modulator.len()
            )))
        }
    }

    /// `G - S` and the original id of each of its vertices.
    pub fn residual(&self) -> (Graph, Vec<Vertex>) {
        self.graph.without(&self.modulator)
    }

    /// Split partition of `G - S` in original ids.
    pub fn split_partition(&self) -> Option<SplitPartition> {
        let (h, old) = self.residual();
        split_partition(&h).map(|p| SplitPartition {
            clique: p.clique.iter().map(|&v| old[v]).collect(),
            independent: p.independent.iter().map(|&v| old[v]).collect(),
        })
    }

    pub fn k(&self) -> usize {
        self.modulator.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kind_checks() {
        let p4 = Graph::path(4);
        assert!(kind_holds(
            &p4,
            &VertexSet::new(),
            ModulatorKind::Split,
            None
        ));
        assert!(!kind_holds(
            &p4,
            &VertexSet::new(),
            ModulatorKind::Cluster,
            None
        ));
        assert!(kind_holds(
            &p4,
            &VertexSet::from([1]),
            ModulatorKind::Cluster,
            None
        ));
        assert!(kind_holds(
            &p4,
            &VertexSet::from([1]),
            ModulatorKind::Degree1,
            None
        ));
        assert!(!kind_holds(
            &p4,
            &VertexSet::from([0]),
            ModulatorKind::Clique,
            None
        ));
        assert!(kind_holds(
            &Graph::cycle(4),
            &VertexSet::from([0]),
            ModulatorKind::Chordal,
            None
        ));
        let inst = Instance::new(Graph::cycle(5), VertexSet::new(), ModulatorKind::Split);
        assert!(matches!(inst, Err(CvcError::KindMismatch(_))));
    }

    #[test]
    fn kind_names_round_trip() {
        for k in ModulatorKind::ALL {
            assert_eq!(k.name().parse::<ModulatorKind>().unwrap(), k);
        }
        assert!("bogus".parse::<ModulatorKind>().is_err());
    }
}
