//! Legal move generation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{AtomicAction, GameState, Move, MoveList, TagSet};
use crate::board::{Direction, SiteId};
use crate::compiler::{GameSpec, MoveKind, MoveRule, PlayCondition, PlayRule, Quantity};
use crate::concepts::ids;

struct Gen<'a> {
    spec: &'a GameSpec,
    state: &'a GameState,
    player: usize,
    out: MoveList,
}

/// All legal moves for `player` in canonical order.
pub(super) fn generate(spec: &GameSpec, state: &GameState, player: usize) -> MoveList {
    let mut g = Gen { spec, state, player, out: Vec::new() };
    g.rule(&spec.play);
    let mut moves = g.out;
    if spec.meta.no_repeat {
        moves.retain(|m| {
            let mut next = state.clone();
            next.mover = player;
            next.apply_unchecked(spec, m);
            !state.history.contains(&next.position_hash())
        });
    }
    moves.sort_by_key(|m| (m.from, m.to));
    moves
}

impl Gen<'_> {
    fn condition(&self, c: &PlayCondition) -> bool {
        let value = |q: &Quantity| match q {
            Quantity::Moves => self.state.move_number,
        };
        match c {
            PlayCondition::Even(q) => value(q) % 2 == 0,
            PlayCondition::Odd(q) => value(q) % 2 == 1,
            PlayCondition::Not(c) => !self.condition(c),
        }
    }

    fn rule(&mut self, rule: &PlayRule) {
        match rule {
            PlayRule::Move(m) => self.move_rule(m, None),
            PlayRule::ForEachPiece => {
                for site in self.spec.board.sites() {
                    if let Some((piece, owner)) = self.state.at(site) {
                        if owner == self.player {
                            if let Some(m) = &self.spec.piece_types[piece].move_rule {
                                self.move_rule(m, Some(site));
                            }
                        }
                    }
                }
            }
            PlayRule::If { condition, then, otherwise } => {
                if self.condition(condition) {
                    self.rule(then);
                } else if let Some(o) = otherwise {
                    self.rule(o);
                }
            }
            PlayRule::Or(alternatives) => {
                for r in alternatives {
                    self.rule(r);
                }
            }
        }
    }

    fn is_enemy(&self, site: SiteId) -> bool {
        matches!(self.state.owner(site), Some(o) if o != 0 && o != self.player)
    }

    fn is_empty(&self, site: SiteId) -> bool {
        self.state.owner(site).is_none()
    }

    fn push(&mut self, rule: &MoveRule, mut actions: Vec<AtomicAction>, mut tags: TagSet, from: Option<SiteId>, to: Option<SiteId>) {
        if rule.move_again {
            actions.push(AtomicAction::SetMoveAgain);
            tags.insert(ids::MOVE_AGAIN);
        }
        self.out.push(Move { actions, tags, from, to });
    }

    /// Sites the rule moves from: the given one, or every piece of the mover.
    fn origins(&self, from: Option<SiteId>) -> Vec<SiteId> {
        match from {
            Some(s) => vec![s],
            None => self.spec.board.sites().filter(|&s| self.state.owner(s) == Some(self.player)).collect(),
        }
    }

    fn move_rule(&mut self, rule: &MoveRule, from: Option<SiteId>) {
        let board = &self.spec.board;
        match &rule.kind {
            MoveKind::Add { piece } => {
                let Some(piece) = self.spec.add_piece_for(piece.as_deref(), self.player) else { return };
                let tags = TagSet::new().with(ids::ADD_MOVE);
                for site in board.sites() {
                    if self.is_empty(site) {
                        let add = AtomicAction::AddPiece { site, piece, owner: self.player };
                        self.push(rule, vec![add], tags, None, Some(site));
                    }
                }
            }
            MoveKind::Slide { directions, capture } => {
                let dirs = directions.resolve(board, self.player);
                for origin in self.origins(from) {
                    for &d in &dirs {
                        let mut cur = origin;
                        while let Some(next) = board.step(cur, d) {
                            if self.is_empty(next) {
                                let tags = TagSet::new().with(ids::SLIDE_MOVE);
                                self.push(rule, vec![AtomicAction::MovePiece { from: origin, to: next }], tags, Some(origin), Some(next));
                                cur = next;
                                continue;
                            }
                            if *capture && self.is_enemy(next) {
                                self.replacement(rule, ids::SLIDE_MOVE, origin, next);
                            }
                            break;
                        }
                    }
                }
            }
            MoveKind::Step { directions, capture } => {
                let dirs = directions.resolve(board, self.player);
                for origin in self.origins(from) {
                    for &d in &dirs {
                        let Some(next) = board.step(origin, d) else { continue };
                        if self.is_empty(next) {
                            let tags = TagSet::new().with(ids::STEP_MOVE);
                            self.push(rule, vec![AtomicAction::MovePiece { from: origin, to: next }], tags, Some(origin), Some(next));
                        } else if *capture && self.is_enemy(next) {
                            self.replacement(rule, ids::STEP_MOVE, origin, next);
                        }
                    }
                }
            }
            MoveKind::Hop { directions, capture } => {
                let dirs = directions.resolve(board, self.player);
                for origin in self.origins(from) {
                    for &d in &dirs {
                        self.hop(rule, origin, d, *capture);
                    }
                }
            }
            MoveKind::Shoot { piece, directions } => {
                let Some(origin) = from.or(self.state.last_to) else { return };
                let owner = self.spec.piece_types[*piece].owner.index();
                let tags = TagSet::new().with(ids::SHOOT_MOVE);
                for d in directions.resolve(board, self.player) {
                    let mut cur = origin;
                    while let Some(next) = board.step(cur, d) {
                        if !self.is_empty(next) {
                            break;
                        }
                        let add = AtomicAction::AddPiece { site: next, piece: *piece, owner };
                        self.push(rule, vec![add], tags, Some(origin), Some(next));
                        cur = next;
                    }
                }
            }
            MoveKind::Roll { track, jumps } => self.roll(rule, *track, jumps.as_deref()),
        }
    }

    fn replacement(&mut self, rule: &MoveRule, kind: crate::concepts::ConceptId, from: SiteId, to: SiteId) {
        let tags = TagSet::new().with(kind).with(ids::CAPTURE).with(ids::REPLACEMENT_CAPTURE);
        let actions = vec![AtomicAction::RemovePiece { site: to }, AtomicAction::MovePiece { from, to }];
        self.push(rule, actions, tags, Some(from), Some(to));
    }

    fn hop(&mut self, rule: &MoveRule, origin: SiteId, d: Direction, capture: bool) {
        let board = &self.spec.board;
        let Some(over) = board.step(origin, d) else { return };
        let Some(land) = board.step(over, d) else { return };
        if self.is_empty(over) || !self.is_empty(land) {
            return;
        }
        let mut tags = TagSet::new().with(ids::HOP_MOVE);
        let mut actions = Vec::new();
        if capture {
            if !self.is_enemy(over) {
                return;
            }
            tags = tags.with(ids::CAPTURE).with(ids::HOP_CAPTURE).with(ids::REMOVE_EFFECT);
            actions.push(AtomicAction::RemovePiece { site: over });
        }
        actions.push(AtomicAction::MovePiece { from: origin, to: land });
        self.push(rule, actions, tags, Some(origin), Some(land));
    }

    /// One die roll advancing the mover's race piece; the roll is part of
    /// the move, drawn from the state's stream at this move number.
    fn roll(&mut self, rule: &MoveRule, track: usize, jumps: Option<&str>) {
        let spec = self.spec;
        let Some(piece) = spec.add_piece_for(None, self.player) else { return };
        let faces = spec.dice_faces.unwrap_or(6);
        let mut rng = ChaCha8Rng::seed_from_u64(self.state.dice_seed);
        rng.set_stream(self.state.move_number as u64);
        let value = rng.gen_range(1..=faces);
        let sites = &spec.tracks[track].sites;
        let current = self.state.counters[self.player - 1];
        let index = match current {
            None => value as usize - 1,
            Some(c) => c + value as usize,
        }
        .min(sites.len() - 1);
        let mut to = sites[index];
        if let Some(target) = jumps.and_then(|j| spec.jumps[j].get(&to)) {
            to = *target;
        }
        let from = current.map(|c| sites[c]);
        let mut actions = vec![AtomicAction::SetDiceResult { value }];
        match from {
            None => actions.push(AtomicAction::AddPiece { site: to, piece, owner: self.player }),
            Some(f) if f != to => actions.push(AtomicAction::MovePiece { from: f, to }),
            Some(_) => {}
        }
        let tags = TagSet::new().with(ids::ROLL_MOVE);
        self.push(rule, actions, tags, from, Some(to));
    }
}
