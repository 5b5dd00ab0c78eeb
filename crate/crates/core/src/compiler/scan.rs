//! Syntactic concept detection.
//!
//! The scan never needs the rules to be playable. Apart from building the
//! board (for site counts and directions) it only asks which ludemes occur
//! and where. Trigger table:
//!
//! | concept                | trigger                                                        |
//! |------------------------|----------------------------------------------------------------|
//! | Num Players            | `(players n)`                                                  |
//! | Two Player/Multiplayer | n = 2 / n > 2                                                  |
//! | Alternating Turns      | n ≥ 2 (all supported games are sequential)                     |
//! | Stochastic             | `(dice ..)`, `(roll)`, `(move Roll ..)`, `(value Random ..)`   |
//! | Deterministic          | not Stochastic                                                 |
//! | Square/Hex Tiling      | board shape `square`/`rectangle` or `hex`                      |
//! | *Shape                 | the board shape constructor                                    |
//! | Neutral Piece          | equipment `(piece "x" Neutral)`                                |
//! | Dice Used, Track       | equipment `(dice ..)`, `(track ..)`                            |
//! | Num Playable Sites     | sites of the built board                                       |
//! | Num Directions         | mean neighbour count of the built board                        |
//! | Num Component Types    | equipment pieces, `Each` counted once per player               |
//! | Pieces Placed On Board | `(place ..)` in `start`                                        |
//! | Num Start Pieces       | sites listed by the placements                                 |
//! | X Move                 | `(move X ..)` for X in Add, Slide, Shoot, Hop, Step, Roll      |
//! | Add Move               | also `(move Shoot ..)`, which adds the shot piece              |
//! | Roll Move              | also `(roll)`                                                  |
//! | Remove Effect          | `(remove ..)`                                                  |
//! | Move Again             | `(moveAgain)`                                                  |
//! | Hop Capture            | `(move Hop ..)` containing `(remove ..)`                       |
//! | Replacement Capture    | `(move Step|Slide ..)` containing `(sites Enemy)`              |
//! | Capture                | Remove Effect or Hop Capture or Replacement Capture            |
//! | No Repetition          | `(no Repeat)` inside `meta`                                    |
//! | Line/Connection/Loop/Reach/Checkmate End | `(is Line|Connected|Loop|Reach|Checkmate ..)` inside `end` |
//! | No Moves End           | `(no Moves ..)` inside `end`                                   |
//! | Draw Possible          | a `Draw` result, or an end section that cannot rule out a full board: no `(no Moves ..)` condition, no dice race and no opposite-sides connection goal |
//! | Logic                  | `or`, `and`, `not`                                             |
//! | Parity                 | `(is Even ..)`, `(is Odd ..)`                                  |
//! | Counting               | `(count ..)`                                                   |
//! | Arithmetic             | `add`, `sub`, `mul`, `div`, `mod`                              |

use std::collections::{BTreeMap, BTreeSet};

use super::{board_from_shape, CompileError};
use crate::board::{BoardGraph, BoardShape, Tiling};
use crate::concepts::{ids, ConceptVector};
use crate::ludeme::{LudemeNode, NodeKind};

/// Result of a static scan.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ScanReport {
    /// Compilation concepts only.
    pub vector: ConceptVector,
    /// Heads the scanner does not recognise, sorted and deduplicated.
    pub unknown_constructors: Vec<String>,
    /// Declared values from `//@ annotation Key=Value` comments.
    pub table_annotations: BTreeMap<String, f64>,
}

/// Ludemes the scanner recognises. Some occur only in scan-only descriptions.
const VOCABULARY: &[&str] = &[
    "game", "players", "equipment", "board", "square", "rectangle", "hex", "piece", "dice",
    "track", "map", "pair", "regions", "sites", "rules", "meta", "start", "place", "play", "move",
    "forEach", "if", "is", "count", "then", "moveAgain", "remove", "end", "result", "or", "and",
    "not", "no", "to", "from", "between", "union", "value", "roll", "directions", "jumps", "add",
    "sub", "mul", "div", "mod",
    // recognised but not playable
    "promote", "fromTo", "enclose", "sow", "byScore", "all", "hand", "handSite", "mancalaBoard",
    "who", "pass", "leap", "last", "score", "set", "state", "graph", "capture", "trigger",
];

pub fn static_scan(tree: &LudemeNode) -> Result<ScanReport, CompileError> {
    if !tree.is("game") {
        return Err(CompileError::NotAGame);
    }
    let mut v = ConceptVector::new();

    let players = tree
        .find_child("players")
        .and_then(|p| p.children().first())
        .and_then(LudemeNode::as_count);
    if let Some(n) = players {
        v.set(ids::NUM_PLAYERS, n as f64).expect("integer");
        if n == 2 {
            v.activate(ids::TWO_PLAYER);
        }
        if n > 2 {
            v.activate(ids::MULTIPLAYER);
        }
        if n >= 2 {
            v.activate(ids::ALTERNATING_TURNS);
        }
    }

    let equipment: Vec<&LudemeNode> = tree
        .find_children("equipment")
        .flat_map(|e| e.children())
        .flat_map(|c| if c.is_set() { c.children().iter().collect() } else { vec![c] })
        .collect();

    let board = scan_board(&equipment, &mut v)?;
    scan_pieces(&equipment, players.unwrap_or(1), &mut v);

    let rules = tree.find_child("rules");
    if let Some(start) = rules.and_then(|r| r.find_child("start")) {
        let places: Vec<&LudemeNode> = start.descendants().filter(|n| n.is("place")).collect();
        if !places.is_empty() {
            v.activate(ids::PIECES_PLACED_ON_BOARD);
            let count: Option<usize> = places
                .iter()
                .map(|p| p.children().get(1).and_then(|s| placement_size(s, board.as_ref())))
                .sum();
            if let Some(count) = count {
                v.set(ids::NUM_START_PIECES, count as f64).expect("integer");
            }
        }
    }

    let mut stochastic = equipment.iter().any(|e| e.is("dice"));
    let mut remove = false;
    let mut hop_capture = false;
    let mut replacement = false;
    for node in tree.descendants() {
        let Some(head) = node.head() else { continue };
        let sym = node.first_symbol();
        match (head, sym) {
            ("move", Some(kind)) => {
                let id = match kind {
                    "Add" => Some(ids::ADD_MOVE),
                    "Slide" => Some(ids::SLIDE_MOVE),
                    "Shoot" => {
                        v.activate(ids::ADD_MOVE);
                        Some(ids::SHOOT_MOVE)
                    }
                    "Hop" => {
                        hop_capture |= node.contains(|n| n.is("remove"));
                        Some(ids::HOP_MOVE)
                    }
                    "Step" => Some(ids::STEP_MOVE),
                    "Roll" => {
                        stochastic = true;
                        Some(ids::ROLL_MOVE)
                    }
                    _ => None,
                };
                if let Some(id) = id {
                    v.activate(id);
                }
                if matches!(kind, "Step" | "Slide") {
                    replacement |= node.contains(|n| n.is("sites") && n.first_symbol() == Some("Enemy"));
                }
            }
            ("roll", _) => {
                stochastic = true;
                v.activate(ids::ROLL_MOVE);
            }
            ("value", Some("Random")) => stochastic = true,
            ("remove", _) => {
                remove = true;
                v.activate(ids::REMOVE_EFFECT);
            }
            ("moveAgain", _) => v.activate(ids::MOVE_AGAIN),
            ("or" | "and" | "not", _) => v.activate(ids::LOGIC),
            ("is", Some("Even" | "Odd")) => v.activate(ids::PARITY),
            ("count", _) => v.activate(ids::COUNTING),
            ("add" | "sub" | "mul" | "div" | "mod", _) => v.activate(ids::ARITHMETIC),
            _ => {}
        }
    }
    if hop_capture {
        v.activate(ids::HOP_CAPTURE);
    }
    if replacement {
        v.activate(ids::REPLACEMENT_CAPTURE);
    }
    if remove || hop_capture || replacement {
        v.activate(ids::CAPTURE);
    }
    if stochastic {
        v.activate(ids::STOCHASTIC);
    } else {
        v.activate(ids::DETERMINISTIC);
    }

    if let Some(rules) = rules {
        for meta in rules.find_children("meta") {
            if meta.contains(|n| n.is("no") && n.first_symbol() == Some("Repeat")) {
                v.activate(ids::NO_REPETITION);
            }
        }
        scan_end(rules, &mut v);
    }

    let mut unknown = BTreeSet::new();
    for node in tree.descendants() {
        if let Some(head) = node.head() {
            if !VOCABULARY.contains(&head) {
                unknown.insert(head.to_string());
            }
        }
    }

    Ok(ScanReport {
        vector: v,
        unknown_constructors: unknown.into_iter().collect(),
        table_annotations: BTreeMap::new(),
    })
}

fn scan_board(equipment: &[&LudemeNode], v: &mut ConceptVector) -> Result<Option<BoardGraph>, CompileError> {
    let Some(shape) = equipment
        .iter()
        .find(|e| e.is("board"))
        .and_then(|b| b.children().first())
        .filter(|s| s.head().is_some())
    else {
        return Ok(None);
    };
    let Some(board) = board_from_shape(shape)? else {
        return Ok(None);
    };
    v.activate(match board.tiling() {
        Tiling::Square => ids::SQUARE_TILING,
        Tiling::Hex => ids::HEX_TILING,
    });
    v.activate(match board.shape() {
        BoardShape::Square(_) => ids::SQUARE_SHAPE,
        BoardShape::Rectangle { .. } => ids::RECTANGLE_SHAPE,
        BoardShape::Hexagon(_) => ids::HEXAGON_SHAPE,
        BoardShape::Rhombus(_) => ids::DIAMOND_SHAPE,
        BoardShape::Star(_) => ids::STAR_SHAPE,
    });
    v.set(ids::NUM_PLAYABLE_SITES, board.num_sites() as f64).expect("integer");
    v.set(ids::NUM_DIRECTIONS, board.mean_degree()).expect("finite");
    Ok(Some(board))
}

fn scan_pieces(equipment: &[&LudemeNode], players: usize, v: &mut ConceptVector) {
    let mut types = 0;
    for piece in equipment.iter().filter(|e| e.is("piece")) {
        match piece.children().get(1).and_then(LudemeNode::as_symbol) {
            Some("Each") => types += players,
            Some("Neutral") => {
                v.activate(ids::NEUTRAL_PIECE);
                types += 1;
            }
            _ => types += 1,
        }
    }
    if types > 0 {
        v.set(ids::NUM_COMPONENT_TYPES, types as f64).expect("integer");
    }
    if equipment.iter().any(|e| e.is("dice")) {
        v.activate(ids::DICE_USED);
    }
    if equipment.iter().any(|e| e.is("track")) {
        v.activate(ids::TRACK);
    }
}

fn placement_size(sites: &LudemeNode, board: Option<&BoardGraph>) -> Option<usize> {
    match &sites.kind {
        NodeKind::String(_) => Some(1),
        NodeKind::Set(items) => Some(items.len()),
        NodeKind::Constructor { head, children } if head == "sites" => {
            let board = board?;
            match (sites.first_symbol(), children.get(1).and_then(LudemeNode::as_count)) {
                (Some("Row"), Some(row)) => Some(board.row(row as i32).len()),
                _ => None,
            }
        }
        _ => None,
    }
}

fn scan_end(rules: &LudemeNode, v: &mut ConceptVector) {
    let ends: Vec<&LudemeNode> = rules.find_children("end").collect();
    if ends.is_empty() {
        return;
    }
    let mut no_moves = false;
    let mut opposite = false;
    let mut explicit_draw = false;
    for node in ends.iter().flat_map(|e| e.descendants()) {
        match (node.head(), node.first_symbol()) {
            (Some("is"), Some("Line")) => v.activate(ids::LINE_END),
            (Some("is"), Some("Connected")) => {
                v.activate(ids::CONNECTION_END);
                opposite |= node.children().iter().any(|c| c.as_symbol() == Some("OppositeSides"));
            }
            (Some("is"), Some("Loop")) => v.activate(ids::LOOP_END),
            (Some("is"), Some("Reach")) => v.activate(ids::REACH_END),
            (Some("is"), Some("Checkmate")) => v.activate(ids::CHECKMATE_END),
            (Some("no"), Some("Moves")) => {
                no_moves = true;
                v.activate(ids::NO_MOVES_END);
            }
            (Some("result"), _) => {
                explicit_draw |= node.children().iter().any(|c| c.as_symbol() == Some("Draw"));
            }
            _ => {}
        }
    }
    let race = v.is_active(ids::ROLL_MOVE);
    if explicit_draw || !(no_moves || opposite || race) {
        v.activate(ids::DRAW_POSSIBLE);
    }
}

/// Reads `//@ annotation Key=Value` header comments. Values must be numbers;
/// malformed pairs are ignored.
pub fn parse_annotations(source: &str) -> BTreeMap<String, f64> {
    let mut out = BTreeMap::new();
    for line in source.lines() {
        let Some(rest) = line.trim_start().strip_prefix("//@") else { continue };
        let Some(rest) = rest.trim_start().strip_prefix("annotation") else { continue };
        for pair in rest.split_whitespace() {
            if let Some((k, val)) = pair.split_once('=') {
                if let Ok(x) = val.parse::<f64>() {
                    out.insert(k.to_string(), x);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ludeme::parse_source;

    fn scan(src: &str) -> ScanReport {
        static_scan(&parse_source(src).unwrap()).unwrap()
    }

    #[test]
    fn minimal_tic_tac_toe() {
        let r = scan(
            "(game \"X\" (players 2) (equipment {(board (square 3))}) (rules (play (move Add (to (sites Empty)))) (end (if (is Line 3) (result Mover Win)))))",
        );
        assert!(r.vector.is_active(ids::LINE_END));
        assert!(r.vector.is_active(ids::ADD_MOVE));
        assert!(r.vector.is_active(ids::SQUARE_TILING));
        assert_eq!(r.vector.get(ids::NUM_PLAYABLE_SITES), Some(9.0));
        assert!(r.vector.is_active(ids::DRAW_POSSIBLE));
        assert!(r.unknown_constructors.is_empty());
    }

    #[test]
    fn not_a_game() {
        let tree = parse_source("(match (players 2))").unwrap();
        assert_eq!(static_scan(&tree), Err(CompileError::NotAGame));
    }

    #[test]
    fn board_errors_propagate() {
        let tree = parse_source("(game \"X\" (players 2) (equipment {(board (square 0))}))").unwrap();
        assert!(matches!(static_scan(&tree), Err(CompileError::Board(_))));
    }

    #[test]
    fn unknown_board_and_heads_are_collected() {
        let r = scan("(game \"X\" (players 2) (equipment {(board (spiral 4)) (widget)}) (rules (play (zap))))");
        assert_eq!(r.unknown_constructors, ["spiral", "widget", "zap"]);
        assert_eq!(r.vector.get(ids::NUM_PLAYABLE_SITES), None);
    }

    #[test]
    fn stochastic_triggers() {
        for body in ["(roll)", "(value Random 1 5)", "(move Roll (track \"T\"))"] {
            let r = scan(&format!("(game \"X\" (players 2) (rules (play {body})))"));
            assert!(r.vector.is_active(ids::STOCHASTIC), "{body}");
            assert!(!r.vector.is_active(ids::DETERMINISTIC));
        }
        let r = scan("(game \"X\" (players 2) (rules (play (move Add))))");
        assert!(r.vector.is_active(ids::DETERMINISTIC));
    }

    #[test]
    fn hop_capture_needs_remove_inside_hop() {
        let r = scan("(game \"X\" (players 2) (rules (play (move Hop All (then (remove))))))");
        assert!(r.vector.is_active(ids::HOP_CAPTURE));
        assert!(r.vector.is_active(ids::CAPTURE));
        let r = scan("(game \"X\" (players 2) (rules (play (or {(move Hop All) (move Step All)}))))");
        assert!(r.vector.is_active(ids::HOP_MOVE));
        assert!(!r.vector.is_active(ids::HOP_CAPTURE));
        assert!(!r.vector.is_active(ids::CAPTURE));
    }

    #[test]
    fn replacement_capture() {
        let r = scan("(game \"X\" (players 2) (rules (play (move Step All (to (sites Empty) (sites Enemy))))))");
        assert!(r.vector.is_active(ids::REPLACEMENT_CAPTURE));
        assert!(r.vector.is_active(ids::CAPTURE));
        assert!(!r.vector.is_active(ids::REMOVE_EFFECT));
    }

    #[test]
    fn annotations() {
        let a = parse_annotations("//@ annotation PlayableSites=95\n//@ annotation A=1 B=x\n(game)");
        assert_eq!(a.get("PlayableSites"), Some(&95.0));
        assert_eq!(a.get("A"), Some(&1.0));
        assert!(!a.contains_key("B"));
        assert!(parse_annotations("// annotation X=1").is_empty());
    }
}
