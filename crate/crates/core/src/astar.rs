//! Best-first search over (cell, trailing move window) states.
//!
//! Because admissibility and the trailing-primitive cost depend only on the
//! last few move directions, the pair (cell, window) is a Markov state: one
//! cell can carry several simultaneous nodes, one per distinct trailing
//! window, and a path may revisit a cell as long as it never repeats a
//! state. Per-state cost dominance replaces keeping lists of similar paths
//! per cell.

use crate::catalog::{Catalog, TurnSignature, MAX_TURNS};
use crate::cost::{cost_to_come, cost_to_go, CostBreakdown, CostTable, KappaAccumulation, Weights};
use crate::hexgrid::{step, Direction, HexCell, MapError, MapGrid};
use alloc::collections::{BTreeMap, BTreeSet, BinaryHeap};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

const MAX_WINDOW_MOVES: usize = MAX_TURNS + 1;

/// The most recent move directions of a path, oldest first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct DirWindow {
    len: u8,
    dirs: [u8; MAX_WINDOW_MOVES],
}

impl DirWindow {
    pub const EMPTY: DirWindow = DirWindow {
        len: 0,
        dirs: [0; MAX_WINDOW_MOVES],
    };

    /// Appends a move, keeping at most `cap` directions.
    pub fn push(mut self, d: Direction, cap: usize) -> Self {
        let cap = cap.min(MAX_WINDOW_MOVES);
        let len = self.len as usize;
        if len < cap {
            self.dirs[len] = d.index();
            self.len += 1;
        } else {
            for i in 1..cap {
                self.dirs[i - 1] = self.dirs[i];
            }
            self.dirs[cap - 1] = d.index();
        }
        self
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn directions(&self) -> Vec<Direction> {
        self.dirs[..self.len as usize]
            .iter()
            .map(|&i| Direction::new(i32::from(i)))
            .collect()
    }

    /// Packed form: 4 bits of length, 3 bits per direction.
    fn key(&self) -> u32 {
        let mut k = u32::from(self.len);
        for (i, d) in self.dirs[..self.len as usize].iter().enumerate() {
            k |= u32::from(*d) << (4 + 3 * i);
        }
        k
    }
}

/// A search node: the cell plus the trailing move window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SearchState {
    pub cell: HexCell,
    pub window: DirWindow,
}

impl SearchState {
    fn key(&self) -> u128 {
        let cell = (u128::from(self.cell.q as u32) << 32) | u128::from(self.cell.r as u32);
        (cell << 32) | u128::from(self.window.key())
    }
}

/// Termination rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum TerminationMode {
    /// Stop when a target state is closed; with accumulated costs this
    /// returns the exact optimum.
    #[default]
    Optimal,
    /// Stop as soon as an expansion step generates a target candidate and
    /// pick the cheapest target path generated so far.
    Paper,
}

/// Planner configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PlanConfig {
    pub mode: TerminationMode,
    pub kappa_accumulation: KappaAccumulation,
    pub dead_cell_pruning: bool,
    /// Restricts the first move out of the start cell.
    pub initial_heading: Option<Direction>,
    pub trace: bool,
}

impl Default for PlanConfig {
    fn default() -> Self {
        Self {
            mode: TerminationMode::Optimal,
            kappa_accumulation: KappaAccumulation::Accumulated,
            dead_cell_pruning: true,
            initial_heading: None,
            trace: false,
        }
    }
}

/// Planner failure.
#[derive(Debug, Clone, PartialEq)]
pub enum PlanError {
    NoPath,
    UnsupportedRatio { ratio: f64, max: f64 },
    InvalidMap(MapError),
    MissingCost { id: u8 },
}

impl fmt::Display for PlanError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlanError::NoPath => write!(f, "no admissible path exists"),
            PlanError::UnsupportedRatio { ratio, max } => write!(
                f,
                "ratio r_min/r_c = {ratio} exceeds the catalog regime (max {max})"
            ),
            PlanError::InvalidMap(e) => write!(f, "invalid map: {e}"),
            PlanError::MissingCost { id } => {
                write!(f, "cost table has no entry for primitive {id}")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for PlanError {}

impl From<MapError> for PlanError {
    fn from(e: MapError) -> Self {
        PlanError::InvalidMap(e)
    }
}

/// Search counters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PlanStats {
    /// States closed.
    pub iterations: u64,
    /// Candidates generated.
    pub expansions: u64,
    /// Largest open-list size.
    pub peak_open: usize,
    /// Cells marked dead.
    pub dead_cells: usize,
}

/// Trailing primitive matched when a cell was appended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WindowPrimitive {
    /// Index into the result path of the cell this window led to.
    pub cell_index: usize,
    pub id: u8,
    pub mirrored: bool,
}

/// One closed state and what it opened.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TraceEvent {
    pub iteration: u64,
    pub closed_cell: HexCell,
    pub closed_window: Vec<u8>,
    pub closed_cost: f64,
    /// (parent cell, opened cell, total cost) per new candidate.
    pub opened: Vec<(HexCell, HexCell, f64)>,
    /// Cells newly marked dead in this iteration.
    pub dead: Vec<HexCell>,
}

/// Search trace for rendering and debugging.
#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SearchTrace {
    pub events: Vec<TraceEvent>,
}

/// A successful plan.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PlanResult {
    /// Grid path from start to target.
    pub cells: Vec<HexCell>,
    /// Trailing primitive per appended cell, from the fifth cell on.
    pub window_primitives: Vec<WindowPrimitive>,
    pub objective: CostBreakdown,
    pub stats: PlanStats,
    pub warnings: Vec<String>,
    pub trace: Option<SearchTrace>,
}

#[derive(Debug, Clone)]
struct Candidate {
    state: SearchState,
    parent: Option<u32>,
    n_cells: u32,
    /// Sum of window costs along the path, including this candidate's.
    acc_kappa: f64,
    kappa_term: f64,
    c_c: f64,
    c_g: f64,
    c: f64,
    primitive: Option<(u8, bool)>,
}

struct HeapEntry {
    c: f64,
    n_cells: u32,
    state: SearchState,
    seq: u64,
    index: u32,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // Reversed: BinaryHeap pops the maximum, we want the cheapest with
        // ties broken by fewer cells, then cell coordinates, then window,
        // then insertion order.
        other
            .c
            .total_cmp(&self.c)
            .then_with(|| other.n_cells.cmp(&self.n_cells))
            .then_with(|| other.state.cell.cmp(&self.state.cell))
            .then_with(|| other.state.window.cmp(&self.state.window))
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Upper bound on distinct states per cell for a given window length:
/// the empty window, plus 6 rotations of every valid turn sequence of each
/// shorter length.
fn states_per_cell_bound(turns_len: usize) -> u64 {
    // Valid sequences of length k: after S any symbol, after L/R no repeat.
    let mut ending_s: u64 = 1; // length 0: the empty sequence
    let mut ending_turn: u64 = 0;
    let mut windows: u64 = 1 + 6; // empty window + single moves
    for _ in 1..=turns_len {
        let s = ending_s + ending_turn;
        let t = 2 * ending_s + ending_turn;
        ending_s = s;
        ending_turn = t;
        windows += 6 * (s + t);
    }
    windows
}

/// Plans a grid path from the map's start to its target.
pub fn plan(
    map: &MapGrid,
    catalog: &Catalog,
    table: &CostTable,
    weights: &Weights,
    config: &PlanConfig,
) -> Result<PlanResult, PlanError> {
    let mut search = Search::new(map, catalog, table, weights, config)?;
    search.run()
}

/// Checks that a path visits only free cells, makes only adjacent moves, and
/// that every full window classifies into the catalog. Used by tests and the
/// scenario reports.
pub fn check_path_admissible(
    cells: &[HexCell],
    map: &MapGrid,
    catalog: &Catalog,
) -> Result<(), String> {
    if cells.is_empty() {
        return Err("empty path".into());
    }
    for c in cells {
        if !map.is_free(*c) {
            return Err(format!("cell {c} is not free"));
        }
    }
    let window = catalog.window_cells();
    for i in 0..cells.len().saturating_sub(1) {
        crate::hexgrid::direction_between(cells[i], cells[i + 1])
            .map_err(|e| format!("{e}"))?;
    }
    if cells.len() >= 3 {
        for start in 0..=cells.len().saturating_sub(window.min(cells.len())) {
            let end = (start + window).min(cells.len());
            if end - start < 3 {
                continue;
            }
            match crate::catalog::window_signature(&cells[start..end]) {
                Ok(Some(sig)) => {
                    if end - start == window && catalog.classify(&sig).is_err() {
                        return Err(format!("window at {start} not in catalog"));
                    }
                }
                Ok(None) => return Err(format!("window at {start} is inadmissible")),
                Err(e) => return Err(format!("{e}")),
            }
        }
    }
    Ok(())
}

struct Search<'a> {
    map: &'a MapGrid,
    catalog: &'a Catalog,
    table: &'a CostTable,
    weights: &'a Weights,
    config: PlanConfig,
    arena: Vec<Candidate>,
    heap: BinaryHeap<HeapEntry>,
    best: BTreeMap<u128, f64>,
    closed: BTreeMap<u128, f64>,
    dead: BTreeSet<HexCell>,
    stats: PlanStats,
    warnings: Vec<String>,
    trace: Option<SearchTrace>,
    seq: u64,
    /// Cheapest target-reaching candidate generated so far (paper mode).
    best_target: Option<u32>,
    iteration_cap: u64,
}

impl<'a> Search<'a> {
    fn new(
        map: &'a MapGrid,
        catalog: &'a Catalog,
        table: &'a CostTable,
        weights: &'a Weights,
        config: &PlanConfig,
    ) -> Result<Self, PlanError> {
        let ratio = map.spec().ratio();
        let (ratio_min, ratio_max) = catalog.ratio_regime();
        if ratio > ratio_max {
            return Err(PlanError::UnsupportedRatio {
                ratio,
                max: ratio_max,
            });
        }
        let mut warnings = Vec::new();
        if ratio <= ratio_min {
            warnings.push(format!(
                "ratio r_min/r_c = {ratio} is at or below the catalog regime minimum \
                 {ratio_min}; the catalog is feasible but conservative"
            ));
        }
        for p in catalog.primitives() {
            if table.c_kappa(p.id).is_none() {
                return Err(PlanError::MissingCost { id: p.id });
            }
        }
        if !map.is_free(map.start()) {
            return Err(PlanError::InvalidMap(MapError::StartOccupied(map.start())));
        }
        if !map.is_free(map.target()) {
            return Err(PlanError::InvalidMap(MapError::TargetOccupied(map.target())));
        }
        let cells = map.bounds().cell_count() as u64;
        let iteration_cap = 10 * cells * states_per_cell_bound(catalog.turns_len()).max(1);
        Ok(Self {
            map,
            catalog,
            table,
            weights,
            config: *config,
            arena: Vec::new(),
            heap: BinaryHeap::new(),
            best: BTreeMap::new(),
            closed: BTreeMap::new(),
            dead: BTreeSet::new(),
            stats: PlanStats::default(),
            warnings,
            trace: if config.trace {
                Some(SearchTrace::default())
            } else {
                None
            },
            seq: 0,
            best_target: None,
            iteration_cap,
        })
    }

    fn run(&mut self) -> Result<PlanResult, PlanError> {
        let start = self.map.start();
        let target = self.map.target();
        if start == target {
            let c_c = cost_to_come(
                1,
                None,
                self.table,
                self.weights,
                self.config.kappa_accumulation,
                0.0,
            );
            return Ok(PlanResult {
                cells: alloc::vec![start],
                window_primitives: Vec::new(),
                objective: CostBreakdown::new(1, 0.0, c_c, 0.0),
                stats: self.stats,
                warnings: core::mem::take(&mut self.warnings),
                trace: self.trace.take(),
            });
        }

        let root = Candidate {
            state: SearchState {
                cell: start,
                window: DirWindow::EMPTY,
            },
            parent: None,
            n_cells: 1,
            acc_kappa: 0.0,
            kappa_term: 0.0,
            c_c: cost_to_come(
                1,
                None,
                self.table,
                self.weights,
                self.config.kappa_accumulation,
                0.0,
            ),
            c_g: cost_to_go(start, target, self.map.spec()),
            c: 0.0,
            primitive: None,
        };
        self.push_candidate(root);

        while let Some(entry) = self.heap.pop() {
            let index = entry.index;
            let (state, cost) = {
                let cand = &self.arena[index as usize];
                (cand.state, cand.c)
            };
            if self.dead.contains(&state.cell) {
                continue;
            }
            if let Some(&closed_cost) = self.closed.get(&state.key()) {
                if closed_cost <= cost {
                    continue;
                }
            }
            self.closed.insert(state.key(), cost);
            self.stats.iterations += 1;
            assert!(
                self.stats.iterations <= self.iteration_cap,
                "search exceeded its termination bound"
            );

            if self.config.mode == TerminationMode::Optimal && state.cell == target {
                return Ok(self.finish(index));
            }

            let opened = self.expand(index);
            let mut dead_now = Vec::new();
            if opened.is_empty()
                && self.config.dead_cell_pruning
                && self.mark_dead(state.cell)
            {
                dead_now.push(state.cell);
            }
            if let Some(trace) = self.trace.as_mut() {
                trace.events.push(TraceEvent {
                    iteration: self.stats.iterations,
                    closed_cell: state.cell,
                    closed_window: state.window.directions().iter().map(|d| d.index()).collect(),
                    closed_cost: cost,
                    opened: opened
                        .iter()
                        .map(|&i| {
                            let c = &self.arena[i as usize];
                            (state.cell, c.state.cell, c.c)
                        })
                        .collect(),
                    dead: dead_now,
                });
            }
            if self.config.mode == TerminationMode::Paper {
                let hit_target = opened
                    .iter()
                    .any(|&i| self.arena[i as usize].state.cell == target);
                if hit_target {
                    let best = self.best_target.expect("target candidate recorded");
                    return Ok(self.finish(best));
                }
            }
        }
        Err(PlanError::NoPath)
    }

    /// Generates one candidate per admissible free neighbor; returns arena
    /// indices of the accepted ones.
    fn expand(&mut self, index: u32) -> Vec<u32> {
        let parent = self.arena[index as usize].clone();
        let window_dirs = parent.state.window.directions();
        let mut opened = Vec::new();
        for d in Direction::ALL {
            if parent.n_cells == 1 {
                if let Some(pinned) = self.config.initial_heading {
                    if d != pinned {
                        continue;
                    }
                }
            }
            let next = step(parent.state.cell, d);
            if !self.map.is_free(next) || self.dead.contains(&next) {
                continue;
            }
            if !self.catalog.admits_extension(&window_dirs, d) {
                continue;
            }
            let window = parent.state.window.push(d, self.catalog.window_moves());
            let state = SearchState { cell: next, window };
            if self.on_ancestor_chain(index, &state) {
                continue;
            }
            let n_cells = parent.n_cells + 1;
            let primitive = if n_cells as usize >= self.catalog.window_cells() {
                let turns: Vec<_> = window
                    .directions()
                    .windows(2)
                    .map(|w| {
                        crate::catalog::turn_between(w[0], w[1])
                            .expect("window admissibility was checked")
                    })
                    .collect();
                let sig = TurnSignature::new(turns).expect("window has no repeated turn pair");
                Some(
                    self.catalog
                        .classify(&sig)
                        .expect("catalog partitions all admissible signatures"),
                )
            } else {
                None
            };
            let prim_id = primitive.map(|(id, _)| id);
            let step_kappa = prim_id
                .and_then(|id| self.table.c_kappa(id))
                .unwrap_or(0.0);
            let c_c = cost_to_come(
                n_cells,
                prim_id,
                self.table,
                self.weights,
                self.config.kappa_accumulation,
                parent.acc_kappa,
            );
            let kappa_term = match self.config.kappa_accumulation {
                KappaAccumulation::Literal => step_kappa,
                KappaAccumulation::Accumulated => parent.acc_kappa + step_kappa,
            };
            let c_g = cost_to_go(next, self.map.target(), self.map.spec());
            let candidate = Candidate {
                state,
                parent: Some(index),
                n_cells,
                acc_kappa: parent.acc_kappa + step_kappa,
                kappa_term,
                c_c,
                c_g,
                c: 0.0,
                primitive,
            };
            if let Some(i) = self.push_candidate(candidate) {
                opened.push(i);
            }
        }
        opened
    }

    /// Inserts a candidate unless a path to the same state at no greater
    /// cost already exists. Returns the arena index when accepted.
    fn push_candidate(&mut self, mut candidate: Candidate) -> Option<u32> {
        candidate.c = candidate.c_c + candidate.c_g;
        let key = candidate.state.key();
        if let Some(&known) = self.best.get(&key) {
            if known <= candidate.c {
                return None;
            }
        }
        if let Some(&closed_cost) = self.closed.get(&key) {
            if closed_cost <= candidate.c {
                return None;
            }
        }
        self.best.insert(key, candidate.c);
        let index = self.arena.len() as u32;
        let is_target = candidate.state.cell == self.map.target();
        let entry = HeapEntry {
            c: candidate.c,
            n_cells: candidate.n_cells,
            state: candidate.state,
            seq: self.seq,
            index,
        };
        self.seq += 1;
        self.arena.push(candidate);
        self.heap.push(entry);
        self.stats.expansions += 1;
        self.stats.peak_open = self.stats.peak_open.max(self.heap.len());
        if is_target {
            let better = match self.best_target {
                None => true,
                Some(prev) => {
                    let p = &self.arena[prev as usize];
                    let n = &self.arena[index as usize];
                    match n.c.total_cmp(&p.c) {
                        Ordering::Less => true,
                        Ordering::Greater => false,
                        Ordering::Equal => (n.n_cells, n.state) < (p.n_cells, p.state),
                    }
                }
            };
            if better {
                self.best_target = Some(index);
            }
        }
        Some(index)
    }

    /// True iff `state` already occurs on the candidate's ancestor chain.
    fn on_ancestor_chain(&self, mut index: u32, state: &SearchState) -> bool {
        loop {
            let cand = &self.arena[index as usize];
            if cand.state == *state {
                return true;
            }
            match cand.parent {
                Some(p) => index = p,
                None => return false,
            }
        }
    }

    /// Marks a cell dead when no continuation can exist for any entry
    /// window: at most one free neighbor (the entry) remains. The target is
    /// never marked.
    fn mark_dead(&mut self, cell: HexCell) -> bool {
        if cell == self.map.target() {
            return false;
        }
        if self.map.free_neighbor_count(cell) > 1 {
            return false;
        }
        if self.dead.insert(cell) {
            self.stats.dead_cells += 1;
            true
        } else {
            false
        }
    }

    fn finish(&mut self, index: u32) -> PlanResult {
        let mut chain = Vec::new();
        let mut cursor = Some(index);
        while let Some(i) = cursor {
            chain.push(i);
            cursor = self.arena[i as usize].parent;
        }
        chain.reverse();
        let cells: Vec<HexCell> = chain
            .iter()
            .map(|&i| self.arena[i as usize].state.cell)
            .collect();
        let window_primitives: Vec<WindowPrimitive> = chain
            .iter()
            .enumerate()
            .filter_map(|(pos, &i)| {
                self.arena[i as usize]
                    .primitive
                    .map(|(id, mirrored)| WindowPrimitive {
                        cell_index: pos,
                        id,
                        mirrored,
                    })
            })
            .collect();
        let last = &self.arena[index as usize];
        let objective = CostBreakdown::new(last.n_cells, last.kappa_term, last.c_c, last.c_g);
        PlanResult {
            cells,
            window_primitives,
            objective,
            stats: self.stats,
            warnings: core::mem::take(&mut self.warnings),
            trace: self.trace.take(),
        }
    }
}
