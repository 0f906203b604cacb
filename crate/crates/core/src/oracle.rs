//! Exhaustive uniform-cost search over the (cell, window) state graph.
//!
//! This is a verification oracle: it re-derives admissibility from direction
//! deltas and matches windows against the catalog by direct signature
//! comparison, sharing no machinery with [`crate::astar::plan`]. No
//! heuristic is used; the first closed target state is the global minimum of
//! the accumulated objective. Intended for small maps.

use crate::catalog::{Catalog, TurnSymbol};
use crate::cost::{CostTable, Weights};
use crate::hexgrid::{neighbors, HexCell, MapGrid};
use alloc::collections::{BTreeMap, BinaryHeap};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

/// Optimal objective value and one optimal path.
#[derive(Debug, Clone, PartialEq)]
pub struct OraclePlan {
    pub objective: f64,
    pub cells: Vec<HexCell>,
}

/// The oracle exhausted the state graph without reaching the target.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleNoPath;

impl fmt::Display for OracleNoPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "oracle found no admissible path")
    }
}

#[cfg(feature = "std")]
impl std::error::Error for OracleNoPath {}

#[derive(Debug, Clone)]
struct Node {
    cell: HexCell,
    window: Vec<u8>,
    parent: Option<usize>,
    n_cells: u32,
    acc_kappa: f64,
    cost: f64,
}

struct QueueEntry {
    cost: f64,
    seq: u64,
    node: usize,
}

impl PartialEq for QueueEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for QueueEntry {}

impl Ord for QueueEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .cost
            .total_cmp(&self.cost)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

impl PartialOrd for QueueEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Curvature cost of a full trailing window of move directions: compute the
/// turn letters from consecutive deltas and scan the catalog for a matching
/// canonical or mirrored signature.
fn window_cost(window: &[u8], catalog: &Catalog, table: &CostTable) -> f64 {
    let mut turns: Vec<TurnSymbol> = Vec::with_capacity(window.len() - 1);
    for pair in window.windows(2) {
        let delta = (i32::from(pair[1]) - i32::from(pair[0])).rem_euclid(6);
        turns.push(match delta {
            0 => TurnSymbol::S,
            1 => TurnSymbol::L,
            5 => TurnSymbol::R,
            _ => unreachable!("inadmissible window reached cost evaluation"),
        });
    }
    for p in catalog.primitives() {
        if p.canonical.turns() == turns.as_slice() || p.mirror.turns() == turns.as_slice() {
            return table.c_kappa(p.id).expect("table covers catalog ids");
        }
    }
    unreachable!("catalog partitions all admissible windows")
}

/// Exhaustive minimum of the accumulated objective over all admissible paths
/// from the map's start to its target.
pub fn oracle_plan(
    map: &MapGrid,
    catalog: &Catalog,
    table: &CostTable,
    weights: &Weights,
) -> Result<OraclePlan, OracleNoPath> {
    let start = map.start();
    let target = map.target();
    let window_moves = catalog.window_moves();
    let pair_rule = catalog.turns_len() >= 2;

    let mut nodes: Vec<Node> = Vec::new();
    let mut queue: BinaryHeap<QueueEntry> = BinaryHeap::new();
    let mut settled: BTreeMap<(HexCell, Vec<u8>), f64> = BTreeMap::new();
    let mut seq = 0u64;

    nodes.push(Node {
        cell: start,
        window: Vec::new(),
        parent: None,
        n_cells: 1,
        acc_kappa: 0.0,
        cost: weights.w_n * 1.0 + weights.w_kappa * 0.0,
    });
    queue.push(QueueEntry {
        cost: nodes[0].cost,
        seq,
        node: 0,
    });

    while let Some(entry) = queue.pop() {
        let (cell, window, cost) = {
            let n = &nodes[entry.node];
            (n.cell, n.window.clone(), n.cost)
        };
        let state = (cell, window.clone());
        if let Some(&best) = settled.get(&state) {
            if best <= cost {
                continue;
            }
        }
        settled.insert(state, cost);

        if cell == target {
            let mut cells = Vec::new();
            let mut cursor = Some(entry.node);
            while let Some(i) = cursor {
                cells.push(nodes[i].cell);
                cursor = nodes[i].parent;
            }
            cells.reverse();
            return Ok(OraclePlan {
                objective: cost,
                cells,
            });
        }

        let (n_cells, acc_kappa) = (nodes[entry.node].n_cells, nodes[entry.node].acc_kappa);
        for (dir, next) in neighbors(cell).into_iter().enumerate() {
            if !map.is_free(next) {
                continue;
            }
            let dir = dir as u8;
            if let Some(&last) = window.last() {
                let delta = (i32::from(dir) - i32::from(last)).rem_euclid(6);
                if !(delta == 0 || delta == 1 || delta == 5) {
                    continue;
                }
                if pair_rule && window.len() >= 2 {
                    let prev_delta = (i32::from(last) - i32::from(window[window.len() - 2]))
                        .rem_euclid(6);
                    if prev_delta == delta && delta != 0 {
                        continue;
                    }
                }
            }
            let mut next_window = window.clone();
            next_window.push(dir);
            if next_window.len() > window_moves {
                next_window.remove(0);
            }
            let step_kappa = if next_window.len() == window_moves {
                window_cost(&next_window, catalog, table)
            } else {
                0.0
            };
            let acc = acc_kappa + step_kappa;
            let n = n_cells + 1;
            let next_cost = weights.w_n * f64::from(n) + weights.w_kappa * acc;
            let next_state = (next, next_window.clone());
            if let Some(&best) = settled.get(&next_state) {
                if best <= next_cost {
                    continue;
                }
            }
            let idx = nodes.len();
            nodes.push(Node {
                cell: next,
                window: next_window,
                parent: Some(entry.node),
                n_cells: n,
                acc_kappa: acc,
                cost: next_cost,
            });
            seq += 1;
            queue.push(QueueEntry {
                cost: next_cost,
                seq,
                node: idx,
            });
        }
    }
    Err(OracleNoPath)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::Catalog;
    use crate::cost::{CostTable, TableVariant};
    use crate::hexgrid::{Bounds, GridSpec, MapGrid};
    use alloc::vec::Vec;

    #[test]
    fn straight_line_on_open_map() {
        let spec = GridSpec::new(1.0, 3.329).unwrap();
        let bounds = Bounds {
            q_min: -4,
            q_max: 8,
            r_min: -4,
            r_max: 4,
        };
        let map = MapGrid::new(spec, bounds, [], HexCell::new(0, 0), HexCell::new(6, 0)).unwrap();
        let catalog = Catalog::builtin_c3();
        let table = CostTable::builtin(TableVariant::CurvaturePenalty);
        let plan = oracle_plan(&map, &catalog, &table, &Weights::default()).unwrap();
        assert_eq!(plan.objective, 7.0);
        assert_eq!(plan.cells.len(), 7);
    }

    #[test]
    fn enclosed_target() {
        let spec = GridSpec::new(1.0, 3.329).unwrap();
        let target = HexCell::new(2, 0);
        let bounds = Bounds {
            q_min: -3,
            q_max: 5,
            r_min: -3,
            r_max: 3,
        };
        let map = MapGrid::new(
            spec,
            bounds,
            neighbors(target),
            HexCell::new(0, 0),
            target,
        )
        .unwrap();
        let catalog = Catalog::builtin_c3();
        let table = CostTable::builtin(TableVariant::CurvaturePenalty);
        assert_eq!(
            oracle_plan(&map, &catalog, &table, &Weights::default()),
            Err(OracleNoPath)
        );
    }

    #[test]
    fn oracle_path_is_admissible() {
        let spec = GridSpec::new(1.0, 3.329).unwrap();
        let bounds = Bounds {
            q_min: -5,
            q_max: 5,
            r_min: -5,
            r_max: 5,
        };
        // A wall forcing a bend.
        let wall: Vec<HexCell> = (-3..=3).map(|r| HexCell::new(1, r)).collect();
        let map = MapGrid::new(spec, bounds, wall, HexCell::new(-2, 0), HexCell::new(4, 0))
            .unwrap();
        let catalog = Catalog::builtin_c3();
        let table = CostTable::builtin(TableVariant::CurvaturePenalty);
        let plan = oracle_plan(&map, &catalog, &table, &Weights::default()).unwrap();
        crate::astar::check_path_admissible(&plan.cells, &map, &catalog).unwrap();
    }
}
