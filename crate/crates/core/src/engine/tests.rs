use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::board::{BoardGraph, SiteId};
use crate::compile_source;
use crate::concepts::ids;

const AMAZONS: &str = include_str!("../../../../games/Amazons.lud");
const HAVANNAH: &str = include_str!("../../../../games/Havannah.lud");
const HEX: &str = include_str!("../../../../games/Hex.lud");
const TTT: &str = include_str!("../../../../games/TicTacToe.lud");
const SNAKES: &str = include_str!("../../../../games/SnakesAndLadders.lud");
const BREAKTHROUGH: &str = include_str!("../../../../games/Breakthrough.lud");

fn spec(src: &str) -> GameSpec {
    compile_source(src).unwrap()
}

fn add(site: SiteId, owner: usize) -> Move {
    Move {
        actions: vec![AtomicAction::AddPiece { site, piece: owner - 1, owner }],
        tags: TagSet::new().with(ids::ADD_MOVE),
        from: None,
        to: Some(site),
    }
}

fn site_at(board: &BoardGraph, q: i32, r: i32) -> SiteId {
    board.sites().find(|&s| board.coords(s) == (q, r)).unwrap()
}

#[test]
fn initial_states() {
    let amazons = spec(AMAZONS);
    let s = initial_state(&amazons, 0);
    assert_eq!(s.num_pieces(), 8);
    assert_eq!(amazons.board.num_sites() - s.num_pieces(), 92);
    for label in ["A4", "D1", "G1", "J4"] {
        assert_eq!(s.owner(amazons.board.site(label).unwrap()), Some(1));
    }
    for label in ["A7", "D10", "G10", "J7"] {
        assert_eq!(s.owner(amazons.board.site(label).unwrap()), Some(2));
    }
    assert_eq!((s.mover(), s.move_number()), (1, 0));

    let havannah = spec(HAVANNAH);
    let s = initial_state(&havannah, 0);
    assert_eq!((havannah.board.num_sites(), s.num_pieces()), (169, 0));

    let ttt = spec(TTT);
    let s = initial_state(&ttt, 0);
    assert_eq!((ttt.board.num_sites(), s.num_pieces(), s.mover()), (9, 0, 1));
    let moves = legal_moves(&ttt, &s).unwrap();
    assert_eq!(moves.len(), 9);
    assert!(moves.iter().all(|m| m.tags == TagSet::new().with(ids::ADD_MOVE)));
}

/// Queen moves from the start position, counted on a plain 10x10 array.
fn amazons_ray_oracle() -> usize {
    let mut grid = [[false; 10]; 10];
    let queens = [(0, 3), (3, 0), (6, 0), (9, 3), (0, 6), (3, 9), (6, 9), (9, 6)];
    for &(c, r) in &queens {
        grid[c][r] = true;
    }
    let mut count = 0;
    for &(c, r) in &queens[..4] {
        for (dc, dr) in [(-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1)] {
            let (mut x, mut y) = (c as i32 + dc, r as i32 + dr);
            while (0..10).contains(&x) && (0..10).contains(&y) && !grid[x as usize][y as usize] {
                count += 1;
                x += dc;
                y += dr;
            }
        }
    }
    count
}

#[test]
fn amazons_first_moves_match_ray_oracle() {
    let g = spec(AMAZONS);
    let s = initial_state(&g, 0);
    let moves = legal_moves(&g, &s).unwrap();
    assert_eq!(moves.len(), amazons_ray_oracle());
    assert!(moves.iter().all(|m| m.movement_type() == Some(ids::SLIDE_MOVE)));
    assert!(moves.iter().all(|m| m.tags.contains(ids::MOVE_AGAIN)));
    let mut sorted = moves.clone();
    sorted.sort_by_key(|m| (m.from, m.to));
    assert_eq!(sorted, moves);
}

#[test]
fn amazons_slide_then_shoot() {
    let g = spec(AMAZONS);
    let s = initial_state(&g, 0);
    let moves = legal_moves(&g, &s).unwrap();
    for m in moves.iter().step_by(7) {
        let next = apply(&g, &s, m).unwrap();
        assert_eq!((next.mover(), next.move_number()), (1, 1));
        assert!(next.move_again_pending());
        let shots = legal_moves(&g, &next).unwrap();
        assert!(!shots.is_empty());
        for shot in &shots {
            assert_eq!(shot.movement_type(), Some(ids::SHOOT_MOVE));
            assert_eq!(shot.from, m.to);
        }
        let after = apply(&g, &next, &shots[0]).unwrap();
        assert_eq!((after.mover(), after.move_number()), (2, 2));
        assert_eq!(after.owner(shots[0].to.unwrap()), Some(0));
    }
}

#[test]
fn apply_has_value_semantics() {
    let g = spec(TTT);
    let s = initial_state(&g, 0);
    let centre = g.board.site("B2").unwrap();
    let m = add(centre, 1);
    let next = apply(&g, &s, &m).unwrap();
    assert_eq!((next.num_pieces(), next.mover()), (1, 2));
    assert_eq!((s.num_pieces(), s.mover()), (0, 1));
    assert_eq!(apply(&g, &next, &m), Err(EngineError::IllegalMove));
}

#[test]
fn tic_tac_toe_draw_and_terminal() {
    let g = spec(TTT);
    let mut s = initial_state(&g, 0);
    // X O X / X O O / O X X: full board without a line
    for label in ["A1", "B1", "C1", "B2", "A2", "C2", "B3", "A3", "C3"] {
        let mv = add(g.board.site(label).unwrap(), s.mover());
        s = apply(&g, &s, &mv).unwrap();
    }
    let o = outcome(&g, &s).unwrap();
    assert_eq!(o.kind, OutcomeKind::Draw);
    assert!(o.end_tags.contains(ids::DRAW_POSSIBLE));
    assert_eq!(legal_moves(&g, &s), Err(EngineError::TerminalState));

    let mut s = initial_state(&g, 0);
    for label in ["A1", "A2", "B1", "B2", "C1"] {
        let mv = add(g.board.site(label).unwrap(), s.mover());
        s = apply(&g, &s, &mv).unwrap();
    }
    let o = outcome(&g, &s).unwrap();
    assert_eq!(o.kind, OutcomeKind::Win(1));
    assert_eq!(o.end_tags, TagSet::new().with(ids::LINE_END));
}

/// Plays `ring` for player 1 while player 2 plays `replies`.
fn play_ring(g: &GameSpec, ring: &[SiteId], replies: &[SiteId]) -> GameState {
    let mut s = initial_state(g, 0);
    for (i, &site) in ring.iter().enumerate() {
        assert_eq!(outcome(g, &s), None, "ended before ring stone {i}");
        s = apply(g, &s, &add(site, 1)).unwrap();
        if i + 1 < ring.len() {
            s = apply(g, &s, &add(replies[i], 2)).unwrap();
        }
    }
    s
}

#[test]
fn minimal_ring_around_empty_cell() {
    let g = spec(HAVANNAH);
    let centre = site_at(&g.board, 0, 0);
    let ring: Vec<SiteId> = g.board.neighbours(centre).map(|(_, n)| n).collect();
    assert_eq!(ring.len(), 6);
    // the oracle: a single enclosed cell whose six neighbours are the mover's
    let far: Vec<SiteId> = [(-7, 2), (-7, 4), (-7, 6), (2, -7), (4, -7)].iter().map(|&(q, r)| site_at(&g.board, q, r)).collect();
    let s = play_ring(&g, &ring, &far);
    assert!(g.board.neighbours(centre).all(|(_, n)| s.owner(n) == Some(1)));
    assert!(s.owner(centre).is_none());
    assert!(is_loop(&g, &s, *ring.last().unwrap()));
    let o = outcome(&g, &s).unwrap();
    assert_eq!(o.kind, OutcomeKind::Win(1));
    assert_eq!(o.end_tags, TagSet::new().with(ids::LOOP_END));
}

#[test]
fn ring_around_enemy_stone() {
    let g = spec(HAVANNAH);
    let centre = site_at(&g.board, 0, 0);
    let ring: Vec<SiteId> = g.board.neighbours(centre).map(|(_, n)| n).collect();
    let mut replies = vec![centre];
    replies.extend([(-7, 2), (-7, 4), (-7, 6), (2, -7)].iter().map(|&(q, r)| site_at(&g.board, q, r)));
    let s = play_ring(&g, &ring, &replies);
    assert_eq!(s.owner(centre), Some(2));
    let o = outcome(&g, &s).unwrap();
    assert_eq!(o.kind, OutcomeKind::Win(1));
    assert!(o.end_tags.contains(ids::LOOP_END));
}

#[test]
fn chains_are_not_loops() {
    let g = spec(HAVANNAH);
    let mut s = initial_state(&g, 0);
    let line: Vec<SiteId> = (-3..=3).map(|q| site_at(&g.board, q, 0)).collect();
    for &site in &line {
        s.set_site(&g, site, Some((0, 1)));
        assert!(!is_loop(&g, &s, site));
    }
    // five of the six stones around a cell leave it open
    let centre = site_at(&g.board, 2, 2);
    let mut s = initial_state(&g, 0);
    let around: Vec<SiteId> = g.board.neighbours(centre).map(|(_, n)| n).collect();
    for &site in &around[..5] {
        s.set_site(&g, site, Some((0, 1)));
        assert!(!is_loop(&g, &s, site));
    }
}

#[test]
fn edge_cells_cannot_be_enclosed() {
    let g = spec(HAVANNAH);
    let mut s = initial_state(&g, 0);
    // a corner cell cut off by its three neighbours is not a ring
    let corner = g.board.corners()[0];
    let around: Vec<SiteId> = g.board.neighbours(corner).map(|(_, n)| n).collect();
    for &site in &around {
        s.set_site(&g, site, Some((0, 1)));
    }
    assert!(!is_loop(&g, &s, *around.last().unwrap()));
}

fn bfs_connected(board: &BoardGraph, owner: impl Fn(SiteId) -> Option<usize>, a: SiteId, b: SiteId) -> bool {
    let Some(p) = owner(a) else { return false };
    if owner(b) != Some(p) {
        return false;
    }
    let mut seen = vec![false; board.num_sites()];
    let mut queue = VecDeque::from([a]);
    seen[a.0] = true;
    while let Some(c) = queue.pop_front() {
        if c == b {
            return true;
        }
        for (_, n) in board.neighbours(c) {
            if !seen[n.0] && owner(n) == Some(p) {
                seen[n.0] = true;
                queue.push_back(n);
            }
        }
    }
    false
}

#[test]
fn union_find_matches_bfs_on_random_positions() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for trial in 0..1000 {
        let n = 2 + trial % 3;
        let g = spec(&HAVANNAH.replace("(hex 8)", &format!("(hex {n})")));
        let mut s = initial_state(&g, 0);
        let mut sites: Vec<SiteId> = g.board.sites().collect();
        let stones = rng.gen_range(0..=sites.len());
        for _ in 0..stones {
            let site = sites.swap_remove(rng.gen_range(0..sites.len()));
            s.mover = rng.gen_range(1..=2);
            s.apply_unchecked(&g, &add(site, s.mover));
        }
        for a in g.board.sites() {
            for b in g.board.sites() {
                assert_eq!(s.same_group(a, b), bfs_connected(&g.board, |x| s.owner(x), a, b), "hex {n}, {a} {b}");
            }
        }
    }
}

#[test]
fn filled_hex_boards_have_exactly_one_winner() {
    let g = spec(HEX);
    let b = &g.board;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..10_000 {
        let owners: Vec<usize> = (0..b.num_sites()).map(|_| rng.gen_range(1..=2)).collect();
        let own = |s: SiteId| Some(owners[s.0]);
        let joins = |p: usize, x: &str, y: &str| {
            b.side(x).unwrap().iter().filter(|&&s| owners[s.0] == p).any(|&s| {
                b.side(y).unwrap().iter().any(|&t| bfs_connected(b, own, s, t))
            })
        };
        let first = joins(1, "N", "S");
        let second = joins(2, "E", "W");
        assert!(first ^ second);
    }
}

#[test]
fn hex_fill_outcome_agrees_with_oracle() {
    let g = spec(HEX);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..200 {
        let mut s = initial_state(&g, 0);
        let o = loop {
            match evaluate(&g, &s) {
                Status::Over(o) => break o,
                Status::Ongoing(moves) => {
                    let m = &moves[rng.gen_range(0..moves.len())];
                    s.apply_unchecked(&g, m);
                }
            }
        };
        let OutcomeKind::Win(p) = o.kind else { panic!("draw in Hex") };
        assert_eq!(p, s.last_mover());
        let (x, y) = if p == 1 { ("N", "S") } else { ("E", "W") };
        let b = &g.board;
        let connected = b.side(x).unwrap().iter().any(|&a| b.side(y).unwrap().iter().any(|&c| bfs_connected(b, |t| s.owner(t), a, c) && s.owner(a) == Some(p)));
        assert!(connected);
    }
}

fn random_trial(g: &GameSpec, seed: u64, mut visit: impl FnMut(&GameState, &Move, &GameState)) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = initial_state(g, seed);
    loop {
        match evaluate(g, &s) {
            Status::Over(o) => return o,
            Status::Ongoing(moves) => {
                let m = &moves[rng.gen_range(0..moves.len())];
                let next = apply(g, &s, m).unwrap();
                visit(&s, m, &next);
                s = next;
            }
        }
    }
}

#[test]
fn tag_partition_and_alternation() {
    for src in [TTT, HEX, HAVANNAH, SNAKES, BREAKTHROUGH] {
        let g = spec(src);
        for seed in 0..20 {
            random_trial(&g, seed, |before, m, after| {
                let movement = ids::MOVEMENT_TYPES.iter().filter(|&&t| m.tags.contains(t)).count();
                assert_eq!(movement, 1);
                assert_eq!(after.mover(), g.next_player(before.mover()));
            });
        }
    }
    let g = spec(AMAZONS);
    for seed in 0..10 {
        let mut movers = Vec::new();
        random_trial(&g, seed, |before, m, _| {
            assert_eq!(m.movement_type().into_iter().count(), 1);
            movers.push(before.mover());
        });
        for (i, &p) in movers.iter().enumerate() {
            assert_eq!(p, 1 + (i / 2) % 2);
        }
    }
}

#[test]
fn legality_closure_fuzz() {
    let games: Vec<GameSpec> = [TTT, HEX, HAVANNAH, SNAKES, BREAKTHROUGH, AMAZONS].map(spec).into();
    let mut steps = 0usize;
    let mut seed = 0;
    while steps < 100_000 {
        let g = &games[seed as usize % games.len()];
        random_trial(g, seed, |before, m, after| {
            steps += 1;
            let mut expected = before.num_pieces() as isize;
            for a in &m.actions {
                match *a {
                    AtomicAction::AddPiece { site, .. } if !g.is_race() => {
                        assert!(before.owner(site).is_none());
                        expected += 1;
                    }
                    AtomicAction::RemovePiece { site } => {
                        assert!(before.owner(site).is_some());
                        expected -= 1;
                    }
                    AtomicAction::MovePiece { from, to } => {
                        assert_ne!(from, to);
                        if !g.is_race() {
                            assert_eq!(before.owner(from), Some(before.mover()));
                        }
                    }
                    _ => {}
                }
            }
            assert_eq!(after.num_pieces() as isize, expected);
            assert!((1..=g.num_players).contains(&after.mover()));
        });
        seed += 1;
    }
}

#[test]
fn dice_rolls_are_part_of_the_state() {
    let g = spec(SNAKES);
    let s = initial_state(&g, 77);
    let a = legal_moves(&g, &s).unwrap();
    assert_eq!(a, legal_moves(&g, &s).unwrap());
    assert_eq!(a.len(), 1);
    assert!(matches!(a[0].actions[0], AtomicAction::SetDiceResult { value } if (1..=6).contains(&value)));
    let values: std::collections::BTreeSet<u32> = (0..200)
        .map(|seed| match legal_moves(&g, &initial_state(&g, seed)).unwrap()[0].actions[0] {
            AtomicAction::SetDiceResult { value } => value,
            _ => unreachable!(),
        })
        .collect();
    assert_eq!(values.into_iter().collect::<Vec<_>>(), [1, 2, 3, 4, 5, 6]);
}

#[test]
fn snakes_and_ladders_reaches_the_goal() {
    let g = spec(SNAKES);
    for seed in 0..50 {
        let o = random_trial(&g, seed, |_, _, _| {});
        assert!(matches!(o.kind, OutcomeKind::Win(_)));
        assert_eq!(o.end_tags, TagSet::new().with(ids::REACH_END));
    }
}

#[test]
fn breakthrough_captures() {
    let g = spec(BREAKTHROUGH);
    let mut captures = 0;
    for seed in 0..30 {
        let o = random_trial(&g, seed, |_, m, _| {
            if m.tags.contains(ids::CAPTURE) {
                assert!(m.tags.contains(ids::REPLACEMENT_CAPTURE));
                captures += 1;
            }
        });
        assert!(matches!(o.kind, OutcomeKind::Win(_)));
    }
    assert!(captures > 0);
}

#[test]
fn tag_set_basics() {
    let t: TagSet = [ids::LOOP_END, ids::ADD_MOVE].into_iter().collect();
    assert_eq!(t.iter().collect::<Vec<_>>(), [ids::ADD_MOVE, ids::LOOP_END]);
    assert_eq!(t.len(), 2);
    assert!(!t.contains(ids::SLIDE_MOVE));
    assert!(TagSet::new().is_empty());
}
