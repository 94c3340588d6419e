//! Statistics of cell-unions: groups of cells whose counts add up.

use std::collections::BTreeMap;

use crate::estimate::Q;
use crate::faces::Face;

/// Summed Euler Entity, edge- and side-counts of one union.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize)]
pub struct UnionSums {
    pub members: usize,
    pub chi: i64,
    pub e: i64,
    pub s: i64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UnionStats {
    pub groups: BTreeMap<usize, UnionSums>,
    pub mu_chi: Q,
    pub mu_e: Q,
    pub mu_s: Q,
}

impl UnionStats {
    pub fn group_count(&self) -> usize {
        self.groups.len()
    }

    /// `(χ, E, S)` of each union, ordered by group id.
    pub fn triples(&self) -> Vec<(i64, i64, i64)> {
        self.groups.values().map(|g| (g.chi, g.e, g.s)).collect()
    }
}

/// Sums counts within each group and averages over groups. `grouping[i]` is the group of `cells[i]`.
///
/// # Panics
/// If the slices differ in length or there are no cells.
pub fn cell_union_stats(cells: &[&Face], grouping: &[usize]) -> UnionStats {
    assert_eq!(cells.len(), grouping.len(), "one group id per cell");
    assert!(!cells.is_empty(), "no cells to group");
    let mut groups: BTreeMap<usize, UnionSums> = BTreeMap::new();
    for (f, &gid) in cells.iter().zip(grouping) {
        let u = groups.entry(gid).or_default();
        u.members += 1;
        u.chi += f.chi;
        u.e += f.edge_count as i64;
        u.s += f.side_count as i64;
    }
    let count = groups.len() as i64;
    let total = |pick: fn(&UnionSums) -> i64| Q::new(groups.values().map(pick).sum(), count);
    UnionStats { mu_chi: total(|u| u.chi), mu_e: total(|u| u.e), mu_s: total(|u| u.s), groups }
}
