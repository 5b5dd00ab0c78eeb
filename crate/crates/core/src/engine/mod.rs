//! Game states, move generation and end-rule evaluation.
//!
//! A [`Move`] is an ordered list of [`AtomicAction`]s together with the
//! concepts it triggers. Move lists are sorted by `(from, to)` with the
//! generation order as tie-break, so a seeded playout replays identically on
//! every platform and thread count.

mod end;
mod moves;

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use thiserror::Error;

use crate::board::SiteId;
use crate::compiler::{EndCondition, GameSpec};
use crate::concepts::{ids, ConceptId};
use crate::union_find::UnionFind;

pub use end::is_loop;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("the game is already over")]
    TerminalState,
    #[error("move is not legal in this state")]
    IllegalMove,
}

/// A set of concept ids, stored as a bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct TagSet(u128);

impl TagSet {
    pub fn new() -> Self {
        TagSet(0)
    }

    pub fn insert(&mut self, id: ConceptId) {
        assert!(id.0 < 128, "concept id {id} out of tag range");
        self.0 |= 1 << id.0;
    }

    pub fn with(mut self, id: ConceptId) -> Self {
        self.insert(id);
        self
    }

    pub fn contains(&self, id: ConceptId) -> bool {
        id.0 < 128 && self.0 & (1 << id.0) != 0
    }

    pub fn union(self, other: TagSet) -> TagSet {
        TagSet(self.0 | other.0)
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    /// Ids in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = ConceptId> + '_ {
        (0..128u16).filter(|&i| self.0 & (1 << i) != 0).map(ConceptId)
    }
}

impl FromIterator<ConceptId> for TagSet {
    fn from_iter<I: IntoIterator<Item = ConceptId>>(iter: I) -> Self {
        let mut t = TagSet::new();
        for id in iter {
            t.insert(id);
        }
        t
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AtomicAction {
    AddPiece { site: SiteId, piece: usize, owner: usize },
    RemovePiece { site: SiteId },
    MovePiece { from: SiteId, to: SiteId },
    SetMoveAgain,
    SetDiceResult { value: u32 },
}

impl std::fmt::Display for AtomicAction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AtomicAction::AddPiece { site, piece, owner } => write!(f, "Add({site},{piece},{owner})"),
            AtomicAction::RemovePiece { site } => write!(f, "Remove({site})"),
            AtomicAction::MovePiece { from, to } => write!(f, "Move({from},{to})"),
            AtomicAction::SetMoveAgain => write!(f, "MoveAgain"),
            AtomicAction::SetDiceResult { value } => write!(f, "Dice({value})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Move {
    pub actions: Vec<AtomicAction>,
    pub tags: TagSet,
    pub from: Option<SiteId>,
    pub to: Option<SiteId>,
}

impl Move {
    /// The single movement-type concept of this move.
    pub fn movement_type(&self) -> Option<ConceptId> {
        ids::MOVEMENT_TYPES.iter().copied().find(|&t| self.tags.contains(t))
    }
}

pub type MoveList = Vec<Move>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutcomeKind {
    Win(usize),
    Draw,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Outcome {
    pub kind: OutcomeKind,
    pub end_tags: TagSet,
}

/// What a state offers: either the legal moves or the final outcome.
#[derive(Debug, Clone, PartialEq)]
pub enum Status {
    Ongoing(MoveList),
    Over(Outcome),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GameState {
    occupancy: Vec<Option<(u16, u8)>>,
    mover: usize,
    last_mover: usize,
    move_number: usize,
    move_again_pending: bool,
    last_to: Option<SiteId>,
    last_dice: Option<u32>,
    dice_seed: u64,
    /// Track positions of race pieces, indexed by player - 1.
    counters: Vec<Option<usize>>,
    history: Vec<u64>,
    groups: UnionFind,
    groups_stale: bool,
}

/// Whether end rules need piece groups kept up to date.
fn uses_groups(spec: &GameSpec) -> bool {
    fn walk(c: &EndCondition) -> bool {
        match c {
            EndCondition::Connected { .. } | EndCondition::ConnectedOpposite(_) => true,
            EndCondition::Any(v) | EndCondition::All(v) => v.iter().any(walk),
            EndCondition::Not(c) => walk(c),
            _ => false,
        }
    }
    spec.end_rules.iter().any(|r| walk(&r.condition))
}

pub fn initial_state(spec: &GameSpec, seed: u64) -> GameState {
    let n = spec.board.num_sites();
    let mut state = GameState {
        occupancy: vec![None; n],
        mover: 1,
        last_mover: 0,
        move_number: 0,
        move_again_pending: false,
        last_to: None,
        last_dice: None,
        dice_seed: seed,
        counters: vec![None; spec.num_players],
        history: Vec::new(),
        groups: UnionFind::new(n),
        groups_stale: false,
    };
    for p in &spec.start {
        let owner = spec.piece_types[p.piece].owner.index();
        for &site in &p.sites {
            state.place(spec, site, p.piece, owner);
        }
    }
    state.last_to = None;
    if spec.meta.no_repeat {
        state.history.push(state.position_hash());
    }
    state
}

impl GameState {
    /// The player to move.
    pub fn mover(&self) -> usize {
        self.mover
    }

    /// The player who made the last move, 0 before the first move.
    pub fn last_mover(&self) -> usize {
        self.last_mover
    }

    pub fn move_number(&self) -> usize {
        self.move_number
    }

    pub fn move_again_pending(&self) -> bool {
        self.move_again_pending
    }

    /// Site of the most recently added or moved piece.
    pub fn last_to(&self) -> Option<SiteId> {
        self.last_to
    }

    pub fn last_dice(&self) -> Option<u32> {
        self.last_dice
    }

    /// `(piece type, owner)` at a site.
    pub fn at(&self, site: SiteId) -> Option<(usize, usize)> {
        self.occupancy[site.0].map(|(p, o)| (p as usize, o as usize))
    }

    pub fn owner(&self, site: SiteId) -> Option<usize> {
        self.occupancy[site.0].map(|(_, o)| o as usize)
    }

    pub fn num_pieces(&self) -> usize {
        self.occupancy.iter().filter(|o| o.is_some()).count()
    }

    /// Track position of a player's race piece.
    pub fn counter(&self, player: usize) -> Option<usize> {
        self.counters[player - 1]
    }

    /// Whether two occupied sites belong to one same-owner connected group.
    pub fn same_group(&self, a: SiteId, b: SiteId) -> bool {
        self.owner(a).is_some() && self.owner(a) == self.owner(b) && self.groups.root(a.0) == self.groups.root(b.0)
    }

    /// Overwrites a site, for building test positions. Keeps groups consistent.
    pub fn set_site(&mut self, spec: &GameSpec, site: SiteId, content: Option<(usize, usize)>) {
        self.occupancy[site.0] = content.map(|(p, o)| (p as u16, o as u8));
        self.rebuild_groups(spec);
    }

    pub fn set_mover(&mut self, mover: usize) {
        self.mover = mover;
    }

    pub fn position_hash(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.occupancy.hash(&mut h);
        self.counters.hash(&mut h);
        self.mover.hash(&mut h);
        h.finish()
    }

    fn place(&mut self, spec: &GameSpec, site: SiteId, piece: usize, owner: usize) {
        self.occupancy[site.0] = Some((piece as u16, owner as u8));
        self.last_to = Some(site);
        for (_, n) in spec.board.neighbours(site) {
            if self.owner(n) == Some(owner) {
                self.groups.union(site.0, n.0);
            }
        }
    }

    fn rebuild_groups(&mut self, spec: &GameSpec) {
        self.groups = UnionFind::new(self.occupancy.len());
        for site in spec.board.sites() {
            if let Some(o) = self.owner(site) {
                for (_, n) in spec.board.neighbours(site) {
                    if n > site && self.owner(n) == Some(o) {
                        self.groups.union(site.0, n.0);
                    }
                }
            }
        }
        self.groups_stale = false;
    }

    fn track_index(spec: &GameSpec, site: SiteId) -> Option<usize> {
        spec.tracks.iter().find_map(|t| t.sites.iter().position(|&s| s == site))
    }

    /// Applies a move without checking that it is legal.
    pub fn apply_unchecked(&mut self, spec: &GameSpec, mv: &Move) {
        let race = spec.is_race();
        let mut again = false;
        for action in &mv.actions {
            match *action {
                AtomicAction::AddPiece { site, piece, owner } => {
                    if race && owner >= 1 {
                        self.counters[owner - 1] = Self::track_index(spec, site);
                        self.last_to = Some(site);
                    } else {
                        self.place(spec, site, piece, owner);
                    }
                }
                AtomicAction::RemovePiece { site } => {
                    self.occupancy[site.0] = None;
                    self.groups_stale = true;
                }
                AtomicAction::MovePiece { from, to } => {
                    if race {
                        self.counters[self.mover - 1] = Self::track_index(spec, to);
                    } else {
                        self.occupancy[to.0] = self.occupancy[from.0].take();
                        self.groups_stale = true;
                    }
                    self.last_to = Some(to);
                }
                AtomicAction::SetMoveAgain => again = true,
                AtomicAction::SetDiceResult { value } => self.last_dice = Some(value),
            }
        }
        if self.groups_stale && uses_groups(spec) {
            self.rebuild_groups(spec);
        }
        self.move_number += 1;
        self.last_mover = self.mover;
        self.move_again_pending = again;
        if !again {
            self.mover = spec.next_player(self.mover);
        }
        if spec.meta.no_repeat {
            self.history.push(self.position_hash());
        }
    }
}

/// Legal moves of the player to move, or an error once an end rule has fired.
pub fn legal_moves(spec: &GameSpec, state: &GameState) -> Result<MoveList, EngineError> {
    match evaluate(spec, state) {
        Status::Ongoing(moves) => Ok(moves),
        Status::Over(_) => Err(EngineError::TerminalState),
    }
}

/// Returns the successor state. Legality is verified in debug builds.
pub fn apply(spec: &GameSpec, state: &GameState, mv: &Move) -> Result<GameState, EngineError> {
    if cfg!(debug_assertions) && !legal_moves(spec, state)?.contains(mv) {
        return Err(EngineError::IllegalMove);
    }
    let mut next = state.clone();
    next.apply_unchecked(spec, mv);
    Ok(next)
}

/// The outcome if the game is over.
pub fn outcome(spec: &GameSpec, state: &GameState) -> Option<Outcome> {
    match evaluate(spec, state) {
        Status::Over(o) => Some(o),
        Status::Ongoing(_) => None,
    }
}

/// Evaluates end rules in declaration order, then generates moves.
///
/// End rules are only checked after complete turns. A state where nothing
/// fired and the player to move has no legal move is a draw.
pub fn evaluate(spec: &GameSpec, state: &GameState) -> Status {
    let mut moves = None;
    if state.move_number > 0 && !state.move_again_pending {
        for rule in &spec.end_rules {
            if let Some(tags) = end::check(spec, state, &rule.condition, &mut moves) {
                return Status::Over(end::resolve(spec, state, rule, tags));
            }
        }
    }
    let moves = moves.unwrap_or_else(|| moves::generate(spec, state, state.mover));
    if moves.is_empty() {
        Status::Over(Outcome { kind: OutcomeKind::Draw, end_tags: TagSet::new().with(ids::DRAW_POSSIBLE) })
    } else {
        Status::Ongoing(moves)
    }
}

#[cfg(test)]
mod tests;
