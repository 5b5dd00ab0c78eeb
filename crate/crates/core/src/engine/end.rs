//! End-condition evaluators.

use std::collections::VecDeque;

use super::{moves, GameState, MoveList, Outcome, OutcomeKind, TagSet};
use crate::board::SiteId;
use crate::compiler::{EndCondition, EndRule, GameSpec, ResultKind, Role};
use crate::concepts::ids;

fn role_player(spec: &GameSpec, state: &GameState, role: Role) -> usize {
    match role {
        Role::Mover => state.last_mover,
        Role::Next => state.mover,
        Role::Prev => spec.prev_player(state.last_mover),
    }
}

/// The concepts witnessed if `cond` holds for the player who just moved.
pub(super) fn check(spec: &GameSpec, state: &GameState, cond: &EndCondition, next_moves: &mut Option<MoveList>) -> Option<TagSet> {
    let player = state.last_mover;
    let holds = |b: bool, tag| b.then(|| TagSet::new().with(tag));
    match cond {
        EndCondition::NoMoves(role) => {
            let who = role_player(spec, state, *role);
            let empty = if who == state.mover {
                next_moves.get_or_insert_with(|| moves::generate(spec, state, who)).is_empty()
            } else {
                let mut view = state.clone();
                view.mover = who;
                moves::generate(spec, &view, who).is_empty()
            };
            holds(empty, ids::NO_MOVES_END)
        }
        EndCondition::Line(n) => holds(has_line(spec, state, player, *n), ids::LINE_END),
        EndCondition::Connected { count, regions } => {
            let last = state.last_to.filter(|&s| state.owner(s) == Some(player))?;
            let root = state.groups.root(last.0);
            let touched = regions
                .iter()
                .filter(|r| r.iter().any(|&s| state.owner(s) == Some(player) && state.groups.root(s.0) == root))
                .count();
            holds(touched >= *count, ids::CONNECTION_END)
        }
        EndCondition::ConnectedOpposite(pairs) => {
            let [a, b] = pairs.get(player.checked_sub(1)?)?;
            let roots = |side: &[SiteId]| -> Vec<usize> {
                side.iter().filter(|&&s| state.owner(s) == Some(player)).map(|s| state.groups.root(s.0)).collect()
            };
            let ra = roots(a);
            let joined = roots(b).iter().any(|r| ra.contains(r));
            holds(joined, ids::CONNECTION_END)
        }
        EndCondition::Loop => {
            let last = state.last_to.filter(|&s| state.owner(s) == Some(player))?;
            holds(is_loop(spec, state, last), ids::LOOP_END)
        }
        EndCondition::Reach(name) => {
            let region = spec.region_for(name, player)?;
            let reached = if spec.is_race() {
                state.counters[player - 1].is_some_and(|c| {
                    spec.tracks.iter().any(|t| t.sites.get(c).is_some_and(|s| region.sites.contains(s)))
                })
            } else {
                region.sites.iter().any(|&s| state.owner(s) == Some(player))
            };
            holds(reached, ids::REACH_END)
        }
        EndCondition::Any(parts) => parts.iter().find_map(|c| check(spec, state, c, next_moves)),
        EndCondition::All(parts) => {
            let mut tags = TagSet::new();
            for c in parts {
                tags = tags.union(check(spec, state, c, next_moves)?);
            }
            Some(tags)
        }
        EndCondition::Not(c) => match check(spec, state, c, next_moves) {
            Some(_) => None,
            None => Some(TagSet::new()),
        },
    }
}

pub(super) fn resolve(spec: &GameSpec, state: &GameState, rule: &EndRule, tags: TagSet) -> Outcome {
    let who = role_player(spec, state, rule.who);
    let kind = match rule.result {
        ResultKind::Win => OutcomeKind::Win(who),
        ResultKind::Loss => OutcomeKind::Win(spec.next_player(who)),
        ResultKind::Draw => OutcomeKind::Draw,
    };
    let end_tags = if kind == OutcomeKind::Draw { tags.with(ids::DRAW_POSSIBLE) } else { tags };
    Outcome { kind, end_tags }
}

fn has_line(spec: &GameSpec, state: &GameState, player: usize, n: usize) -> bool {
    let board = &spec.board;
    let through = |site: SiteId| {
        board.axes().iter().any(|&d| {
            let run = |dir| {
                let mut count = 0;
                let mut cur = site;
                while let Some(next) = board.step(cur, dir) {
                    if state.owner(next) != Some(player) {
                        break;
                    }
                    count += 1;
                    cur = next;
                }
                count
            };
            1 + run(d) + run(d.opposite()) >= n
        })
    };
    match state.last_to.filter(|&s| state.owner(s) == Some(player)) {
        Some(last) => through(last),
        None => board.sites().filter(|&s| state.owner(s) == Some(player)).any(through),
    }
}

/// Whether the stone on `last` closes a ring: some region of cells not owned
/// by its owner, adjacent to `last`, is cut off from the board edge. The
/// enclosed cells may be empty or hold enemy stones.
pub fn is_loop(spec: &GameSpec, state: &GameState, last: SiteId) -> bool {
    let board = &spec.board;
    let Some(player) = state.owner(last) else { return false };
    let own = |s: SiteId| state.owner(s) == Some(player);
    if board.neighbours(last).filter(|&(_, n)| own(n)).count() < 2 {
        return false;
    }
    // Cells reached by earlier searches all belong to regions that escaped.
    let mut seen = vec![0u8; board.num_sites()];
    let mut queue = VecDeque::new();
    for (search, (_, start)) in (1u8..).zip(board.neighbours(last)) {
        if own(start) || seen[start.0] != 0 {
            continue;
        }
        seen[start.0] = search;
        queue.clear();
        queue.push_back(start);
        let mut escaped = false;
        'bfs: while let Some(cell) = queue.pop_front() {
            if board.is_boundary(cell) {
                escaped = true;
                break;
            }
            for (_, n) in board.neighbours(cell) {
                if own(n) {
                    continue;
                }
                match seen[n.0] {
                    0 => {
                        seen[n.0] = search;
                        queue.push_back(n);
                    }
                    s if s != search => {
                        escaped = true;
                        break 'bfs;
                    }
                    _ => {}
                }
            }
        }
        if !escaped {
            return true;
        }
    }
    false
}
