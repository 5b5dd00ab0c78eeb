//! Front end from ludeme trees to games.
//!
//! Two independent passes share this module. [`static_scan`] looks only at
//! which ludemes appear (plus the board they describe) and works on any
//! parseable tree. [`compile`] lowers the supported subset into a
//! [`GameSpec`] that the engine can play, and rejects everything else.

mod compile;
mod scan;

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::board::{BoardError, BoardGraph, Direction, DirectionClass, SiteId};
use crate::ludeme::{LudemeNode, SourceSpan};

pub use compile::compile;
pub use scan::{parse_annotations, static_scan, ScanReport};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CompileError {
    #[error("root expression is not a (game ...) description")]
    NotAGame,
    #[error(transparent)]
    Board(#[from] BoardError),
    #[error("unsupported ludemes: {}", .0.iter().map(|u| u.to_string()).collect::<Vec<_>>().join(", "))]
    UnsupportedLudeme(Vec<Unsupported>),
    #[error("{message} at {span}")]
    Semantic { message: String, span: SourceSpan },
}

/// A construct outside the playable subset, with where it occurs.
#[derive(Debug, Clone, PartialEq)]
pub struct Unsupported {
    pub ludeme: String,
    pub span: SourceSpan,
}

impl std::fmt::Display for Unsupported {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} (line {})", self.ludeme, self.span.line)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Owner {
    /// 1-based player index.
    Player(usize),
    Neutral,
}

impl Owner {
    /// 0 for neutral pieces, otherwise the player index.
    pub fn index(self) -> usize {
        match self {
            Owner::Player(p) => p,
            Owner::Neutral => 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PieceType {
    /// Expanded name with owner index appended, e.g. `Queen1` or `Dot0`.
    pub name: String,
    pub owner: Owner,
    pub move_rule: Option<MoveRule>,
}

/// Direction sets as written in a description. Player-relative sets are
/// resolved when moves are generated.
#[derive(Debug, Clone, PartialEq)]
pub enum Directions {
    Class(DirectionClass),
    /// Straight ahead for the moving player.
    Forward,
    /// Straight ahead and the two forward diagonals.
    Forwards,
    Explicit(Vec<Direction>),
}

impl Directions {
    /// Concrete directions for `player` on `board`.
    pub fn resolve(&self, board: &BoardGraph, player: usize) -> Vec<Direction> {
        use Direction::*;
        let south = player.is_multiple_of(2);
        match self {
            Directions::Class(c) => board.directions(*c).map(<[_]>::to_vec).unwrap_or_default(),
            Directions::Forward => vec![if south { S } else { N }],
            Directions::Forwards => {
                if south {
                    vec![SW, S, SE]
                } else {
                    vec![NW, N, NE]
                }
            }
            Directions::Explicit(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MoveKind {
    /// Place the mover's piece (or the named family) on an empty site.
    Add { piece: Option<String> },
    Slide { directions: Directions, capture: bool },
    /// Add a piece on a site along a ray from the last moved piece.
    Shoot { piece: usize, directions: Directions },
    /// Jump over an adjacent piece; with `capture` only enemies, which are removed.
    Hop { directions: Directions, capture: bool },
    Step { directions: Directions, capture: bool },
    /// Roll the dice and advance the mover's counter along a track.
    Roll { track: usize, jumps: Option<String> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct MoveRule {
    pub kind: MoveKind,
    pub move_again: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    /// Completed moves so far.
    Moves,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PlayCondition {
    Even(Quantity),
    Odd(Quantity),
    Not(Box<PlayCondition>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum PlayRule {
    Move(MoveRule),
    /// Every move rule of every piece owned by the mover.
    ForEachPiece,
    If {
        condition: PlayCondition,
        then: Box<PlayRule>,
        otherwise: Option<Box<PlayRule>>,
    },
    /// Union of the alternatives' moves.
    Or(Vec<PlayRule>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    /// The player who made the last move.
    Mover,
    /// The player to move next.
    Next,
    /// The player before the mover in turn order.
    Prev,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResultKind {
    Win,
    Loss,
    Draw,
}

#[derive(Debug, Clone, PartialEq)]
pub enum EndCondition {
    NoMoves(Role),
    Line(usize),
    /// The group of the last placed piece touches at least `count` of `regions`.
    Connected { count: usize, regions: Vec<Vec<SiteId>> },
    /// Per-player pair of opposite sides, indexed by player - 1.
    ConnectedOpposite(Vec<[Vec<SiteId>; 2]>),
    Loop,
    Reach(String),
    Any(Vec<EndCondition>),
    All(Vec<EndCondition>),
    Not(Box<EndCondition>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct EndRule {
    pub condition: EndCondition,
    pub who: Role,
    pub result: ResultKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Region {
    pub name: String,
    /// `None` for regions shared by every player.
    pub owner: Option<usize>,
    pub sites: Vec<SiteId>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Track {
    pub name: String,
    pub sites: Vec<SiteId>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Placement {
    pub piece: usize,
    pub sites: Vec<SiteId>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MetaRules {
    pub no_repeat: bool,
}

/// A compiled, playable game.
#[derive(Debug, Clone)]
pub struct GameSpec {
    pub name: String,
    pub num_players: usize,
    pub board: BoardGraph,
    pub piece_types: Vec<PieceType>,
    pub start: Vec<Placement>,
    pub play: PlayRule,
    pub end_rules: Vec<EndRule>,
    pub meta: MetaRules,
    pub regions: Vec<Region>,
    pub tracks: Vec<Track>,
    pub jumps: BTreeMap<String, HashMap<SiteId, SiteId>>,
    pub dice_faces: Option<u32>,
}

impl GameSpec {
    pub fn piece_index(&self, name: &str) -> Option<usize> {
        self.piece_types.iter().position(|p| p.name == name)
    }

    /// The piece an Add move places for `player`: the named family member, or
    /// the player's first piece type.
    pub fn add_piece_for(&self, family: Option<&str>, player: usize) -> Option<usize> {
        match family {
            Some(f) => self
                .piece_index(&format!("{f}{player}"))
                .or_else(|| self.piece_index(f)),
            None => self.piece_types.iter().position(|p| p.owner == Owner::Player(player)),
        }
    }

    /// A player's region of the given name, falling back to a shared one.
    pub fn region_for(&self, name: &str, player: usize) -> Option<&Region> {
        self.regions
            .iter()
            .find(|r| r.name == name && r.owner == Some(player))
            .or_else(|| self.regions.iter().find(|r| r.name == name && r.owner.is_none()))
    }

    /// Race games move one counter per player along a track.
    pub fn is_race(&self) -> bool {
        fn has_roll(rule: &PlayRule) -> bool {
            match rule {
                PlayRule::Move(m) => matches!(m.kind, MoveKind::Roll { .. }),
                PlayRule::ForEachPiece => false,
                PlayRule::If { then, otherwise, .. } => {
                    has_roll(then) || otherwise.as_deref().is_some_and(has_roll)
                }
                PlayRule::Or(v) => v.iter().any(has_roll),
            }
        }
        has_roll(&self.play)
    }

    /// Next player after `player` in turn order.
    pub fn next_player(&self, player: usize) -> usize {
        player % self.num_players + 1
    }

    pub fn prev_player(&self, player: usize) -> usize {
        (player + self.num_players - 2) % self.num_players + 1
    }

    /// Default playout move cap.
    pub fn default_move_cap(&self) -> usize {
        2 * self.board.num_sites() * self.num_players
    }
}

/// Builds the board named by a `(board ...)` argument such as `(square 10)`
/// or `(hex Diamond 11)`. `Ok(None)` when the shape is not one we know.
pub fn board_from_shape(shape: &LudemeNode) -> Result<Option<BoardGraph>, BoardError> {
    let args = shape.children();
    let nums: Vec<usize> = args.iter().filter_map(|a| a.as_count()).collect();
    let syms: Vec<&str> = args.iter().filter_map(|a| a.as_symbol()).collect();
    if nums.len() + syms.len() != args.len() {
        return Ok(None);
    }
    let board = match (shape.head(), syms.as_slice(), nums.as_slice()) {
        (Some("square"), [], [n]) => BoardGraph::build_square(*n)?,
        (Some("rectangle"), [], [rows, cols]) => BoardGraph::build_rectangle(*rows, *cols)?,
        (Some("hex"), [], [n]) | (Some("hex"), ["Hexagon"], [n]) => BoardGraph::build_hex_hexagon(*n)?,
        (Some("hex"), ["Diamond"], [n]) => BoardGraph::build_hex_rhombus(*n)?,
        (Some("hex"), ["Star"], [n]) => BoardGraph::build_hex_star(*n)?,
        _ => return Ok(None),
    };
    Ok(Some(board))
}
