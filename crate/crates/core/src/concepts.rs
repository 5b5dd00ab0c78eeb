//! The concept catalog and per-game concept vectors.
//!
//! Every concept has a stable numeric id. Ids are never reused or renumbered
//! so that persisted corpus matrices stay comparable across versions.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::playout::PlayoutConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ConceptCategory {
    Properties,
    Equipment,
    Rules,
    Math,
    Metrics,
    Visual,
    Implementation,
}

impl ConceptCategory {
    pub const ALL: [ConceptCategory; 7] = [
        ConceptCategory::Properties,
        ConceptCategory::Equipment,
        ConceptCategory::Rules,
        ConceptCategory::Math,
        ConceptCategory::Metrics,
        ConceptCategory::Visual,
        ConceptCategory::Implementation,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ConceptDataType {
    Binary,
    NumericalInt,
    NumericalFloat,
}

impl ConceptDataType {
    pub fn is_numeric(self) -> bool {
        self != ConceptDataType::Binary
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ConceptComputation {
    Compilation,
    Playout,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ConceptId(pub u16);

impl fmt::Display for ConceptId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ConceptDef {
    pub id: ConceptId,
    pub name: &'static str,
    pub category: ConceptCategory,
    pub data_type: ConceptDataType,
    pub computation: ConceptComputation,
    pub description: &'static str,
    /// For frequency concepts, the binary concept whose frequency they measure.
    #[serde(skip)]
    pub frequency_of: Option<ConceptId>,
}

impl ConceptDef {
    pub fn is_frequency(&self) -> bool {
        self.frequency_of.is_some()
    }
}

/// Named ids for concepts the engine refers to directly.
pub mod ids {
    use super::ConceptId;

    pub const NUM_PLAYERS: ConceptId = ConceptId(1);
    pub const TWO_PLAYER: ConceptId = ConceptId(2);
    pub const MULTIPLAYER: ConceptId = ConceptId(3);
    pub const STOCHASTIC: ConceptId = ConceptId(4);
    pub const DETERMINISTIC: ConceptId = ConceptId(5);
    pub const ALTERNATING_TURNS: ConceptId = ConceptId(6);

    pub const SQUARE_TILING: ConceptId = ConceptId(7);
    pub const HEX_TILING: ConceptId = ConceptId(8);
    pub const NEUTRAL_PIECE: ConceptId = ConceptId(9);
    pub const DICE_USED: ConceptId = ConceptId(10);
    pub const NUM_PLAYABLE_SITES: ConceptId = ConceptId(11);
    pub const NUM_COMPONENT_TYPES: ConceptId = ConceptId(12);
    pub const NUM_DIRECTIONS: ConceptId = ConceptId(13);

    pub const PIECES_PLACED_ON_BOARD: ConceptId = ConceptId(14);
    pub const NUM_START_PIECES: ConceptId = ConceptId(15);

    pub const ADD_MOVE: ConceptId = ConceptId(16);
    pub const SLIDE_MOVE: ConceptId = ConceptId(17);
    pub const SHOOT_MOVE: ConceptId = ConceptId(18);
    pub const HOP_MOVE: ConceptId = ConceptId(19);
    pub const STEP_MOVE: ConceptId = ConceptId(20);
    pub const ROLL_MOVE: ConceptId = ConceptId(21);
    pub const REMOVE_EFFECT: ConceptId = ConceptId(22);
    pub const MOVE_AGAIN: ConceptId = ConceptId(23);
    pub const CAPTURE: ConceptId = ConceptId(24);
    pub const HOP_CAPTURE: ConceptId = ConceptId(25);
    pub const REPLACEMENT_CAPTURE: ConceptId = ConceptId(26);
    pub const NO_REPETITION: ConceptId = ConceptId(27);

    pub const LINE_END: ConceptId = ConceptId(28);
    pub const CONNECTION_END: ConceptId = ConceptId(29);
    pub const LOOP_END: ConceptId = ConceptId(30);
    pub const NO_MOVES_END: ConceptId = ConceptId(31);
    pub const REACH_END: ConceptId = ConceptId(32);
    pub const CHECKMATE_END: ConceptId = ConceptId(33);
    pub const DRAW_POSSIBLE: ConceptId = ConceptId(34);

    pub const LOGIC: ConceptId = ConceptId(35);
    pub const PARITY: ConceptId = ConceptId(36);
    pub const COUNTING: ConceptId = ConceptId(37);
    pub const ARITHMETIC: ConceptId = ConceptId(38);

    pub const GAME_LENGTH: ConceptId = ConceptId(39);
    pub const BRANCHING_FACTOR: ConceptId = ConceptId(40);
    pub const BALANCE: ConceptId = ConceptId(41);
    pub const DRAWISHNESS: ConceptId = ConceptId(42);

    pub const FREQ_ADD: ConceptId = ConceptId(43);
    pub const FREQ_SLIDE: ConceptId = ConceptId(44);
    pub const FREQ_SHOOT: ConceptId = ConceptId(45);
    pub const FREQ_HOP: ConceptId = ConceptId(46);
    pub const FREQ_STEP: ConceptId = ConceptId(47);
    pub const FREQ_ROLL: ConceptId = ConceptId(48);
    pub const FREQ_REMOVE_EFFECT: ConceptId = ConceptId(49);
    pub const FREQ_CAPTURE: ConceptId = ConceptId(50);
    pub const FREQ_MOVE_AGAIN: ConceptId = ConceptId(51);
    pub const FREQ_LINE_END: ConceptId = ConceptId(52);
    pub const FREQ_CONNECTION_END: ConceptId = ConceptId(53);
    pub const FREQ_LOOP_END: ConceptId = ConceptId(54);
    pub const FREQ_NO_MOVES_END: ConceptId = ConceptId(55);
    pub const FREQ_REACH_END: ConceptId = ConceptId(56);

    pub const SQUARE_SHAPE: ConceptId = ConceptId(57);
    pub const RECTANGLE_SHAPE: ConceptId = ConceptId(58);
    pub const HEXAGON_SHAPE: ConceptId = ConceptId(59);
    pub const DIAMOND_SHAPE: ConceptId = ConceptId(60);
    pub const STAR_SHAPE: ConceptId = ConceptId(61);
    pub const TRACK: ConceptId = ConceptId(62);

    pub const FREQ_HOP_CAPTURE: ConceptId = ConceptId(63);
    pub const FREQ_REPLACEMENT_CAPTURE: ConceptId = ConceptId(64);

    /// Movement kinds; every generated move carries exactly one of these.
    pub const MOVEMENT_TYPES: [ConceptId; 6] =
        [ADD_MOVE, SLIDE_MOVE, SHOOT_MOVE, HOP_MOVE, STEP_MOVE, ROLL_MOVE];

    /// Concepts an outcome can be attributed to.
    pub const END_TYPES: [ConceptId; 5] =
        [LINE_END, CONNECTION_END, LOOP_END, NO_MOVES_END, REACH_END];
}

use ConceptCategory::*;
use ConceptComputation::*;
use ConceptDataType::*;

const fn def(
    id: u16,
    name: &'static str,
    category: ConceptCategory,
    data_type: ConceptDataType,
    computation: ConceptComputation,
    description: &'static str,
) -> ConceptDef {
    ConceptDef {
        id: ConceptId(id),
        name,
        category,
        data_type,
        computation,
        description,
        frequency_of: None,
    }
}

const fn freq(id: u16, name: &'static str, base: ConceptId, description: &'static str) -> ConceptDef {
    ConceptDef {
        id: ConceptId(id),
        name,
        category: Rules,
        data_type: NumericalFloat,
        computation: Playout,
        description,
        frequency_of: Some(base),
    }
}

static REGISTRY: [ConceptDef; 64] = [
    def(1, "Num Players", Properties, NumericalInt, Compilation, "Number of players."),
    def(2, "Two Player", Properties, Binary, Compilation, "Game played by exactly two players."),
    def(3, "Multiplayer", Properties, Binary, Compilation, "Game played by more than two players."),
    def(4, "Stochastic", Properties, Binary, Compilation, "Game involves chance elements such as dice or random values."),
    def(5, "Deterministic", Properties, Binary, Compilation, "Game has no chance elements."),
    def(6, "Alternating Turns", Properties, Binary, Compilation, "Players take turns one after another."),
    def(7, "Square Tiling", Equipment, Binary, Compilation, "Board made of square cells."),
    def(8, "Hex Tiling", Equipment, Binary, Compilation, "Board made of hexagonal cells."),
    def(9, "Neutral Piece", Equipment, Binary, Compilation, "A piece type owned by no player."),
    def(10, "Dice Used", Equipment, Binary, Compilation, "Game equipment includes dice."),
    def(11, "Num Playable Sites", Equipment, NumericalInt, Compilation, "Number of sites on the board."),
    def(12, "Num Component Types", Equipment, NumericalInt, Compilation, "Number of distinct piece types."),
    def(13, "Num Directions", Equipment, NumericalFloat, Compilation, "Average number of adjacent directions per site."),
    def(14, "Pieces Placed On Board", Rules, Binary, Compilation, "Pieces are on the board at the start."),
    def(15, "Num Start Pieces", Rules, NumericalInt, Compilation, "Number of pieces on the board at the start."),
    def(16, "Add Move", Rules, Binary, Compilation, "A piece is added to an empty site."),
    def(17, "Slide Move", Rules, Binary, Compilation, "A piece moves any distance in a straight line."),
    def(18, "Shoot Move", Rules, Binary, Compilation, "A piece is shot along a line from a moved piece."),
    def(19, "Hop Move", Rules, Binary, Compilation, "A piece jumps over an adjacent piece."),
    def(20, "Step Move", Rules, Binary, Compilation, "A piece moves to an adjacent site."),
    def(21, "Roll Move", Rules, Binary, Compilation, "Dice are rolled to decide the move."),
    def(22, "Remove Effect", Rules, Binary, Compilation, "Pieces are removed from the board."),
    def(23, "Move Again", Rules, Binary, Compilation, "The same player moves again."),
    def(24, "Capture", Rules, Binary, Compilation, "Enemy pieces can be captured."),
    def(25, "Hop Capture", Rules, Binary, Compilation, "Capture by jumping over an enemy piece."),
    def(26, "Replacement Capture", Rules, Binary, Compilation, "Capture by moving onto an enemy piece."),
    def(27, "No Repetition", Rules, Binary, Compilation, "Repeating an earlier position is forbidden."),
    def(28, "Line End", Rules, Binary, Compilation, "Game ends when a line of pieces is made."),
    def(29, "Connection End", Rules, Binary, Compilation, "Game ends when regions are connected by a group."),
    def(30, "Loop End", Rules, Binary, Compilation, "Game ends when a group forms a ring."),
    def(31, "No Moves End", Rules, Binary, Compilation, "Game ends when a player cannot move."),
    def(32, "Reach End", Rules, Binary, Compilation, "Game ends when a piece reaches a region."),
    def(33, "Checkmate End", Rules, Binary, Compilation, "Game ends when a king is checkmated."),
    def(34, "Draw Possible", Rules, Binary, Compilation, "The game can end in a draw."),
    def(35, "Logic", Math, Binary, Compilation, "Rules combine conditions with and, or or not."),
    def(36, "Parity", Math, Binary, Compilation, "Rules test whether a value is even or odd."),
    def(37, "Counting", Math, Binary, Compilation, "Rules count things."),
    def(38, "Arithmetic", Math, Binary, Compilation, "Rules use arithmetic operations."),
    def(39, "Game Length", Metrics, NumericalFloat, Playout, "Average number of moves per game."),
    def(40, "Branching Factor", Metrics, NumericalFloat, Playout, "Average number of legal moves per decision."),
    def(41, "Balance", Metrics, NumericalFloat, Playout, "First player's win rate minus the mean win rate."),
    def(42, "Drawishness", Metrics, NumericalFloat, Playout, "Fraction of games ending in a draw."),
    freq(43, "Frequency:Add Move", ids::ADD_MOVE, "Average fraction of moves that add a piece."),
    freq(44, "Frequency:Slide Move", ids::SLIDE_MOVE, "Average fraction of moves that slide."),
    freq(45, "Frequency:Shoot Move", ids::SHOOT_MOVE, "Average fraction of moves that shoot."),
    freq(46, "Frequency:Hop Move", ids::HOP_MOVE, "Average fraction of moves that hop."),
    freq(47, "Frequency:Step Move", ids::STEP_MOVE, "Average fraction of moves that step."),
    freq(48, "Frequency:Roll Move", ids::ROLL_MOVE, "Average fraction of moves decided by dice."),
    freq(49, "Frequency:Remove Effect", ids::REMOVE_EFFECT, "Average fraction of moves removing pieces."),
    freq(50, "Frequency:Capture", ids::CAPTURE, "Average fraction of moves capturing."),
    freq(51, "Frequency:Move Again", ids::MOVE_AGAIN, "Average fraction of moves granting another move."),
    freq(52, "Frequency:Line End", ids::LINE_END, "Fraction of games won by a line."),
    freq(53, "Frequency:Connection End", ids::CONNECTION_END, "Fraction of games won by a connection."),
    freq(54, "Frequency:Loop End", ids::LOOP_END, "Fraction of games won by a ring."),
    freq(55, "Frequency:No Moves End", ids::NO_MOVES_END, "Fraction of games ended by a player unable to move."),
    freq(56, "Frequency:Reach End", ids::REACH_END, "Fraction of games won by reaching a region."),
    def(57, "Square Shape", Equipment, Binary, Compilation, "Board is a square."),
    def(58, "Rectangle Shape", Equipment, Binary, Compilation, "Board is a non-square rectangle."),
    def(59, "Hexagon Shape", Equipment, Binary, Compilation, "Board is a hexagon."),
    def(60, "Diamond Shape", Equipment, Binary, Compilation, "Board is a rhombus."),
    def(61, "Star Shape", Equipment, Binary, Compilation, "Board is a six-pointed star."),
    def(62, "Track", Equipment, Binary, Compilation, "Pieces follow a track around the board."),
    freq(63, "Frequency:Hop Capture", ids::HOP_CAPTURE, "Average fraction of moves capturing by hopping."),
    freq(64, "Frequency:Replacement Capture", ids::REPLACEMENT_CAPTURE, "Average fraction of moves capturing by replacement."),
];

/// The full catalog, ordered by id.
pub fn registry() -> &'static [ConceptDef] {
    &REGISTRY
}

pub fn lookup(id: ConceptId) -> Option<&'static ConceptDef> {
    // ids are dense and start at 1
    REGISTRY.get((id.0 as usize).checked_sub(1)?).filter(|d| d.id == id)
}

pub fn lookup_name(name: &str) -> Option<&'static ConceptDef> {
    REGISTRY.iter().find(|d| d.name == name)
}

/// The playout frequency concept paired with a binary move or end concept.
pub fn frequency_concept_of(base: ConceptId) -> Result<ConceptId, ConceptError> {
    REGISTRY
        .iter()
        .find(|d| d.frequency_of == Some(base))
        .map(|d| d.id)
        .ok_or(ConceptError::NoFrequencyPair(base))
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConceptError {
    #[error("unknown concept id {0}")]
    UnknownConcept(ConceptId),
    #[error("value {value} is not valid for concept {name}")]
    InvalidValue { name: &'static str, value: f64 },
    #[error("concept {0} has no frequency pair")]
    NoFrequencyPair(ConceptId),
    #[error("concept {0} present in both vectors")]
    OverlappingDomains(ConceptId),
}

/// Sparse map from concept id to value. Binary concepts are stored only when
/// active (value 1); absence means the concept was not detected.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ConceptVector {
    values: BTreeMap<ConceptId, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<PlayoutConfig>,
}

impl ConceptVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, id: ConceptId, value: f64) -> Result<(), ConceptError> {
        let def = lookup(id).ok_or(ConceptError::UnknownConcept(id))?;
        let valid = value.is_finite()
            && match def.data_type {
                Binary => value == 0.0 || value == 1.0,
                NumericalInt => value.fract() == 0.0,
                NumericalFloat => !def.is_frequency() || (0.0..=1.0).contains(&value),
            };
        if !valid {
            return Err(ConceptError::InvalidValue { name: def.name, value });
        }
        self.values.insert(id, value);
        Ok(())
    }

    /// Activates a binary concept.
    pub fn activate(&mut self, id: ConceptId) {
        self.set(id, 1.0).expect("binary concept from the registry");
    }

    pub fn remove(&mut self, id: ConceptId) -> Option<f64> {
        self.values.remove(&id)
    }

    pub fn get(&self, id: ConceptId) -> Option<f64> {
        self.values.get(&id).copied()
    }

    pub fn is_active(&self, id: ConceptId) -> bool {
        self.get(id) == Some(1.0)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Entries in id order.
    pub fn iter(&self) -> impl Iterator<Item = (ConceptId, f64)> + '_ {
        self.values.iter().map(|(k, v)| (*k, *v))
    }

    /// Union of a compilation vector and a playout vector. The playout side's
    /// provenance is kept.
    pub fn merge(compilation: &ConceptVector, playout: &ConceptVector) -> Result<ConceptVector, ConceptError> {
        if let Some(id) = compilation.values.keys().find(|k| playout.values.contains_key(k)) {
            return Err(ConceptError::OverlappingDomains(*id));
        }
        let mut values = compilation.values.clone();
        values.extend(playout.iter());
        Ok(ConceptVector {
            values,
            provenance: playout.provenance.clone().or_else(|| compilation.provenance.clone()),
        })
    }
}
