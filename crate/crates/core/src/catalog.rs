//! Motion-primitive catalogs encoded as direction-change signatures.
//!
//! A primitive is identified by its sequence of per-step turns rather than an
//! absolute cell layout, which makes the catalog rotation-invariant; only the
//! left/right mirror of each signature is stored explicitly. The built-in
//! catalog covers the regime where a full turn needs twelve cells: windows of
//! five cells (three turns) in which a 60 degree turn must be followed by a
//! straight step or by a turn in the other direction.

use crate::hexgrid::{direction_between, Direction, HexCell, NotAdjacent};
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

/// A single admissible direction change: straight, +60, or -60 degrees.
///
/// Direction changes of 120 or 180 degrees are not symbols; windows that
/// contain them are inadmissible outright.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum TurnSymbol {
    S,
    L,
    R,
}

impl TurnSymbol {
    pub fn mirrored(self) -> Self {
        match self {
            TurnSymbol::S => TurnSymbol::S,
            TurnSymbol::L => TurnSymbol::R,
            TurnSymbol::R => TurnSymbol::L,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            TurnSymbol::S => 'S',
            TurnSymbol::L => 'L',
            TurnSymbol::R => 'R',
        }
    }

    fn from_char(c: char) -> Option<Self> {
        match c {
            'S' => Some(TurnSymbol::S),
            'L' => Some(TurnSymbol::L),
            'R' => Some(TurnSymbol::R),
            _ => None,
        }
    }

    /// Signed direction-index change: S -> 0, L -> +1, R -> -1.
    pub fn delta(self) -> i32 {
        match self {
            TurnSymbol::S => 0,
            TurnSymbol::L => 1,
            TurnSymbol::R => -1,
        }
    }
}

/// The turn between two consecutive move directions, or `None` when the
/// change (120 or 180 degrees) cannot be driven.
pub fn turn_between(d_prev: Direction, d_next: Direction) -> Option<TurnSymbol> {
    match (i32::from(d_next.index()) - i32::from(d_prev.index())).rem_euclid(6) {
        0 => Some(TurnSymbol::S),
        1 => Some(TurnSymbol::L),
        5 => Some(TurnSymbol::R),
        _ => None,
    }
}

/// A sequence of turns identifying a primitive up to rotation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TurnSignature(Vec<TurnSymbol>);

impl TurnSignature {
    /// Builds a signature, rejecting adjacent same-direction turn pairs
    /// (LL or RR), which no catalog window may contain.
    pub fn new(turns: impl Into<Vec<TurnSymbol>>) -> Result<Self, CatalogError> {
        let turns = turns.into();
        if turns.is_empty() {
            return Err(CatalogError::InvalidCatalog("empty turn signature".into()));
        }
        if has_same_turn_pair(&turns) {
            return Err(CatalogError::InvalidCatalog(format!(
                "signature {} repeats a turn direction without a separating step",
                fmt_turns(&turns)
            )));
        }
        Ok(Self(turns))
    }

    pub fn turns(&self) -> &[TurnSymbol] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The left/right swapped signature.
    pub fn mirrored(&self) -> Self {
        Self(self.0.iter().map(|t| t.mirrored()).collect())
    }

    pub fn parse(text: &str) -> Result<Self, CatalogError> {
        let turns: Option<Vec<TurnSymbol>> = text.chars().map(TurnSymbol::from_char).collect();
        match turns {
            Some(t) => Self::new(t),
            None => Err(CatalogError::InvalidCatalog(format!(
                "signature `{text}` contains symbols outside S/L/R"
            ))),
        }
    }
}

impl fmt::Display for TurnSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_turns(&self.0))
    }
}

fn fmt_turns(turns: &[TurnSymbol]) -> String {
    turns.iter().map(|t| t.as_char()).collect()
}

fn has_same_turn_pair(turns: &[TurnSymbol]) -> bool {
    turns.windows(2).any(|w| {
        w[0] == w[1] && w[0] != TurnSymbol::S
    })
}

/// One catalog entry: an id as labeled in the cost tables, the canonical
/// signature, and its mirror.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Primitive {
    pub id: u8,
    pub canonical: TurnSignature,
    pub mirror: TurnSignature,
}

/// Errors from catalog loading and classification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CatalogError {
    InvalidCatalog(String),
    NotInCatalog(TurnSignature),
    NotAPath(NotAdjacent),
}

impl fmt::Display for CatalogError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatalogError::InvalidCatalog(reason) => write!(f, "invalid catalog: {reason}"),
            CatalogError::NotInCatalog(sig) => {
                write!(f, "signature {sig} matches no catalog primitive")
            }
            CatalogError::NotAPath(e) => write!(f, "not a path: {e}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for CatalogError {}

impl From<NotAdjacent> for CatalogError {
    fn from(e: NotAdjacent) -> Self {
        CatalogError::NotAPath(e)
    }
}

/// An immutable set of primitives partitioning all admissible signatures of
/// one window length, plus the grid-to-turn-radius regime it supports.
#[derive(Debug, Clone, PartialEq)]
pub struct Catalog {
    primitives: Vec<Primitive>,
    turns_len: usize,
    ratio_min: f64,
    ratio_max: f64,
}

/// The shipped catalog document for the twelve-cell-turn regime.
pub const BUILTIN_C3: &str = include_str!("../data/catalog_c3.txt");

impl Catalog {
    /// Loads and validates a catalog document.
    ///
    /// The format is line based: optional `regime <min> <max>`, then one
    /// `<id> <turns>` entry per line; `#` starts a comment.
    pub fn load(source: &str) -> Result<Self, CatalogError> {
        let mut ratio_min = 0.0;
        let mut ratio_max = f64::INFINITY;
        let mut entries: Vec<(u8, TurnSignature)> = Vec::new();
        for (lineno, raw) in source.lines().enumerate() {
            let line = match raw.find('#') {
                Some(i) => &raw[..i],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let head = parts.next().unwrap();
            if head == "regime" {
                let lo = parts.next().and_then(|v| v.parse::<f64>().ok());
                let hi = parts.next().and_then(|v| v.parse::<f64>().ok());
                match (lo, hi) {
                    (Some(lo), Some(hi)) if lo >= 0.0 && hi > lo => {
                        ratio_min = lo;
                        ratio_max = hi;
                    }
                    _ => {
                        return Err(CatalogError::InvalidCatalog(format!(
                            "line {}: malformed regime line",
                            lineno + 1
                        )))
                    }
                }
                continue;
            }
            let id: u8 = head.parse().map_err(|_| {
                CatalogError::InvalidCatalog(format!("line {}: bad id `{head}`", lineno + 1))
            })?;
            let turns = parts.next().ok_or_else(|| {
                CatalogError::InvalidCatalog(format!("line {}: missing turns", lineno + 1))
            })?;
            if parts.next().is_some() {
                return Err(CatalogError::InvalidCatalog(format!(
                    "line {}: trailing tokens",
                    lineno + 1
                )));
            }
            entries.push((id, TurnSignature::parse(turns)?));
        }
        Self::from_entries(entries, ratio_min, ratio_max)
    }

    /// The built-in catalog (window of five cells, three turns).
    pub fn builtin_c3() -> Self {
        Self::load(BUILTIN_C3).expect("built-in catalog is valid")
    }

    fn from_entries(
        entries: Vec<(u8, TurnSignature)>,
        ratio_min: f64,
        ratio_max: f64,
    ) -> Result<Self, CatalogError> {
        if entries.is_empty() {
            return Err(CatalogError::InvalidCatalog("no entries".into()));
        }
        let turns_len = entries[0].1.len();
        if turns_len == 0 || turns_len > MAX_TURNS {
            return Err(CatalogError::InvalidCatalog(format!(
                "unsupported signature length {turns_len}"
            )));
        }
        for (_, sig) in &entries {
            if sig.len() != turns_len {
                return Err(CatalogError::InvalidCatalog(
                    "entries mix signature lengths".into(),
                ));
            }
        }

        let mut ids: Vec<u8> = entries.iter().map(|(id, _)| *id).collect();
        ids.sort_unstable();
        ids.dedup();
        if ids.len() != entries.len() {
            return Err(CatalogError::InvalidCatalog("duplicate id".into()));
        }

        let universe = admissible_signatures(turns_len);
        let classes = mirror_class_count(&universe);
        if entries.len() != classes {
            return Err(CatalogError::InvalidCatalog(format!(
                "expected {classes} entries (one per mirror class), found {}",
                entries.len()
            )));
        }
        let expect_ids: Vec<u8> = (1..=classes as u8).collect();
        if ids != expect_ids {
            return Err(CatalogError::InvalidCatalog(format!(
                "ids must cover 1..={classes}"
            )));
        }

        let mut primitives: Vec<Primitive> = entries
            .into_iter()
            .map(|(id, canonical)| {
                let mirror = canonical.mirrored();
                Primitive {
                    id,
                    canonical,
                    mirror,
                }
            })
            .collect();
        primitives.sort_by_key(|p| p.id);

        let straight = primitives[0]
            .canonical
            .turns()
            .iter()
            .all(|t| *t == TurnSymbol::S);
        if !straight {
            return Err(CatalogError::InvalidCatalog(
                "id 1 must be the straight line".into(),
            ));
        }

        let mut expanded: BTreeSet<TurnSignature> = BTreeSet::new();
        for p in &primitives {
            let fresh = expanded.insert(p.canonical.clone());
            let mirror_fresh = expanded.insert(p.mirror.clone());
            if !fresh || (p.mirror != p.canonical && !mirror_fresh) {
                return Err(CatalogError::InvalidCatalog(format!(
                    "id {} shares a mirror class with another entry",
                    p.id
                )));
            }
        }
        if expanded != universe.iter().cloned().collect::<BTreeSet<_>>() {
            return Err(CatalogError::InvalidCatalog(
                "entries do not partition the admissible signatures".into(),
            ));
        }

        Ok(Self {
            primitives,
            turns_len,
            ratio_min,
            ratio_max,
        })
    }

    pub fn primitives(&self) -> &[Primitive] {
        &self.primitives
    }

    pub fn primitive(&self, id: u8) -> Option<&Primitive> {
        self.primitives.iter().find(|p| p.id == id)
    }

    /// Number of turns per window (window cell count minus two).
    pub fn turns_len(&self) -> usize {
        self.turns_len
    }

    /// Number of moves in a full trailing window (turns + 1).
    pub fn window_moves(&self) -> usize {
        self.turns_len + 1
    }

    /// Number of cells in a full window (moves + 1).
    pub fn window_cells(&self) -> usize {
        self.turns_len + 2
    }

    /// Supported r_min / r_c interval (min exclusive, max inclusive).
    pub fn ratio_regime(&self) -> (f64, f64) {
        (self.ratio_min, self.ratio_max)
    }

    /// Total number of expanded signatures (canonicals plus distinct mirrors).
    pub fn expanded_signature_count(&self) -> usize {
        let mut set = BTreeSet::new();
        for p in &self.primitives {
            set.insert(&p.canonical);
            set.insert(&p.mirror);
        }
        set.len()
    }

    /// Finds the primitive whose canonical or mirrored signature equals
    /// `sig`; the flag reports a mirror match.
    pub fn classify(&self, sig: &TurnSignature) -> Result<(u8, bool), CatalogError> {
        for p in &self.primitives {
            if *sig == p.canonical {
                return Ok((p.id, false));
            }
            if *sig == p.mirror {
                return Ok((p.id, true));
            }
        }
        Err(CatalogError::NotInCatalog(sig.clone()))
    }

    /// Incremental admissibility: may a path whose trailing move directions
    /// are `window` (oldest first) continue with move `next`?
    ///
    /// Checks the turns that exist in the trailing window of this catalog's
    /// length: the new turn must be S/L/R, and for windows of two or more
    /// turns the new turn must not repeat the previous one in the same
    /// direction.
    pub fn admits_extension(&self, window: &[Direction], next: Direction) -> bool {
        let last = match window.last() {
            Some(d) => *d,
            None => return true,
        };
        let new_turn = match turn_between(last, next) {
            Some(t) => t,
            None => return false,
        };
        if self.turns_len >= 2 && window.len() >= 2 {
            let prev_turn = turn_between(window[window.len() - 2], last)
                .expect("window turns were validated on construction");
            if prev_turn == new_turn && new_turn != TurnSymbol::S {
                return false;
            }
        }
        true
    }
}

/// Longest supported signature; windows are kept in fixed-size buffers.
pub const MAX_TURNS: usize = 7;

/// All admissible signatures of a given length: every turn is S/L/R and no
/// two adjacent turns repeat a direction.
fn admissible_signatures(len: usize) -> Vec<TurnSignature> {
    let mut out = Vec::new();
    let mut stack: Vec<TurnSymbol> = Vec::with_capacity(len);
    fn rec(stack: &mut Vec<TurnSymbol>, len: usize, out: &mut Vec<TurnSignature>) {
        if stack.len() == len {
            out.push(TurnSignature::new(stack.clone()).unwrap());
            return;
        }
        for sym in [TurnSymbol::S, TurnSymbol::L, TurnSymbol::R] {
            if let Some(&prev) = stack.last() {
                if prev == sym && sym != TurnSymbol::S {
                    continue;
                }
            }
            stack.push(sym);
            rec(stack, len, out);
            stack.pop();
        }
    }
    rec(&mut stack, len, &mut out);
    out
}

fn mirror_class_count(universe: &[TurnSignature]) -> usize {
    let mut seen: BTreeSet<TurnSignature> = BTreeSet::new();
    let mut classes = 0;
    for sig in universe {
        if seen.contains(sig) {
            continue;
        }
        seen.insert(sig.clone());
        seen.insert(sig.mirrored());
        classes += 1;
    }
    classes
}

/// The move directions along a cell path.
pub fn path_directions(cells: &[HexCell]) -> Result<Vec<Direction>, NotAdjacent> {
    cells
        .windows(2)
        .map(|w| direction_between(w[0], w[1]))
        .collect()
}

/// The turn signature of a window of consecutive path cells.
///
/// Returns `Ok(None)` when the window is inadmissible: a 120 or 180 degree
/// direction change, or two adjacent turns in the same direction.
pub fn window_signature(cells: &[HexCell]) -> Result<Option<TurnSignature>, CatalogError> {
    let moves = path_directions(cells)?;
    if moves.len() < 2 {
        return Err(CatalogError::InvalidCatalog(
            "window needs at least three cells".to_string(),
        ));
    }
    let mut turns = Vec::with_capacity(moves.len() - 1);
    for w in moves.windows(2) {
        match turn_between(w[0], w[1]) {
            Some(t) => turns.push(t),
            None => return Ok(None),
        }
    }
    if has_same_turn_pair(&turns) {
        return Ok(None);
    }
    Ok(Some(TurnSignature(turns)))
}

/// Whether appending `candidate` to the most recent `trailing` path cells
/// keeps the visible window admissible. `trailing` holds at most the last
/// four cells, oldest first; shorter prefixes check only the turns that
/// exist.
pub fn admissible_extension(trailing: &[HexCell], candidate: HexCell) -> bool {
    let last = match trailing.last() {
        Some(c) => *c,
        None => return true,
    };
    let new_move = match direction_between(last, candidate) {
        Ok(d) => d,
        Err(_) => return false,
    };
    let moves = match path_directions(trailing) {
        Ok(m) => m,
        Err(_) => return false,
    };
    let last_move = match moves.last() {
        Some(d) => *d,
        None => return true,
    };
    let new_turn = match turn_between(last_move, new_move) {
        Some(t) => t,
        None => return false,
    };
    if moves.len() >= 2 {
        if let Some(prev_turn) = turn_between(moves[moves.len() - 2], last_move) {
            if prev_turn == new_turn && new_turn != TurnSymbol::S {
                return false;
            }
        }
    }
    true
}
