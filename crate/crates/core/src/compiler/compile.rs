//! Lowering of the playable subset into a [`GameSpec`].
//!
//! Unsupported constructs are collected rather than failing on the first one,
//! so the error names every ludeme that keeps a description from being
//! playable.

use std::collections::{BTreeMap, HashMap};

use super::*;
use crate::board::{BoardGraph, Direction, DirectionClass, SiteId, Tiling};
use crate::ludeme::{LudemeNode, NodeKind, SourceSpan};

pub fn compile(tree: &LudemeNode) -> Result<GameSpec, CompileError> {
    if !tree.is("game") {
        return Err(CompileError::NotAGame);
    }
    let mut c = Compiler::default();
    let spec = c.game(tree)?;
    if !c.unsupported.is_empty() {
        return Err(CompileError::UnsupportedLudeme(c.unsupported));
    }
    spec.ok_or_else(|| CompileError::Semantic {
        message: "incomplete game description".into(),
        span: tree.span,
    })
}

#[derive(Default)]
struct Compiler {
    unsupported: Vec<Unsupported>,
    num_players: usize,
    board: Option<BoardGraph>,
    pieces: Vec<PieceType>,
    tracks: Vec<Track>,
    regions: Vec<Region>,
    jumps: BTreeMap<String, HashMap<SiteId, SiteId>>,
}

fn semantic(message: impl Into<String>, span: SourceSpan) -> CompileError {
    CompileError::Semantic { message: message.into(), span }
}

/// Items of a clause written either as a set `{a b}` or inline.
fn items(node: &LudemeNode) -> Vec<&LudemeNode> {
    node.children()
        .iter()
        .flat_map(|c| if c.is_set() { c.children().iter().collect() } else { vec![c] })
        .collect()
}

fn player_symbol(s: &str) -> Option<usize> {
    s.strip_prefix('P').and_then(|n| n.parse().ok()).filter(|&n| n >= 1)
}

impl Compiler {
    fn unsupported(&mut self, node: &LudemeNode) {
        let ludeme = node.qualified_name().unwrap_or_else(|| match &node.kind {
            NodeKind::Symbol(s) => s.clone(),
            NodeKind::String(s) => format!("{s:?}"),
            NodeKind::Number(n) => n.to_string(),
            NodeKind::Set(_) => "{...}".to_string(),
            NodeKind::Constructor { .. } => unreachable!(),
        });
        self.unsupported.push(Unsupported { ludeme, span: node.span });
    }

    fn board(&self) -> &BoardGraph {
        self.board.as_ref().expect("board compiled before rules")
    }

    fn game(&mut self, tree: &LudemeNode) -> Result<Option<GameSpec>, CompileError> {
        let mut name = None;
        let mut equipment = None;
        let mut rules = None;
        for child in tree.children() {
            match (&child.kind, child.head()) {
                (NodeKind::String(s), _) if name.is_none() => name = Some(s.clone()),
                (_, Some("players")) => match child.children() {
                    [n] if n.as_count().is_some_and(|n| n >= 1) => {
                        self.num_players = n.as_count().unwrap()
                    }
                    _ => self.unsupported(child),
                },
                (_, Some("equipment")) => equipment = Some(child),
                (_, Some("rules")) => rules = Some(child),
                _ => self.unsupported(child),
            }
        }
        let (Some(name), Some(equipment), Some(rules)) = (name, equipment, rules) else {
            return Err(semantic("a game needs a name, equipment and rules", tree.span));
        };
        if self.num_players == 0 {
            return Err(semantic("missing (players n)", tree.span));
        }
        self.equipment(equipment)?;
        if self.board.is_none() {
            return Ok(None);
        }
        let mut start = Vec::new();
        let mut play = None;
        let mut end_rules = Vec::new();
        let mut meta = MetaRules::default();
        for part in rules.children() {
            match part.head() {
                Some("start") => {
                    for place in items(part) {
                        if let Some(p) = self.placement(place)? {
                            start.push(p);
                        }
                    }
                }
                Some("play") => match part.children() {
                    [rule] => play = self.play_rule(rule)?,
                    _ => self.unsupported(part),
                },
                Some("end") => {
                    for rule in items(part) {
                        if let Some(r) = self.end_rule(rule)? {
                            end_rules.push(r);
                        }
                    }
                }
                Some("meta") => {
                    for m in items(part) {
                        if m.is("no") && m.first_symbol() == Some("Repeat") && m.children().len() == 1 {
                            meta.no_repeat = true;
                        } else {
                            self.unsupported(m);
                        }
                    }
                }
                _ => self.unsupported(part),
            }
        }
        let Some(play) = play else {
            if self.unsupported.is_empty() {
                return Err(semantic("missing play rules", rules.span));
            }
            return Ok(None);
        };
        let dice_faces = None;
        let mut spec = GameSpec {
            name,
            num_players: self.num_players,
            board: self.board.take().expect("checked"),
            piece_types: std::mem::take(&mut self.pieces),
            start,
            play,
            end_rules,
            meta,
            regions: std::mem::take(&mut self.regions),
            tracks: std::mem::take(&mut self.tracks),
            jumps: std::mem::take(&mut self.jumps),
            dice_faces,
        };
        spec.dice_faces = dice_faces_of(equipment);
        if spec.is_race() && spec.dice_faces.is_none() {
            return Err(semantic("a roll move needs (dice n) equipment", equipment.span));
        }
        Ok(Some(spec))
    }

    fn equipment(&mut self, node: &LudemeNode) -> Result<(), CompileError> {
        let list = items(node);
        // board first: other items refer to its labels
        for item in &list {
            if item.is("board") {
                match item.children() {
                    [shape] if shape.head().is_some() => match board_from_shape(shape)? {
                        Some(b) => self.board = Some(b),
                        None => self.unsupported(shape),
                    },
                    _ => self.unsupported(item),
                }
            }
        }
        if self.board.is_none() {
            if self.unsupported.is_empty() {
                return Err(semantic("missing board", node.span));
            }
            return Ok(());
        }
        for item in &list {
            match item.head() {
                Some("board") => {}
                Some("piece") => self.piece(item)?,
                Some("dice") => match item.children() {
                    [n] if n.as_count().is_some_and(|f| f >= 1) => {}
                    _ => self.unsupported(item),
                },
                Some("track") => self.track(item),
                Some("map") => self.jump_map(item)?,
                Some("regions") => self.region_decl(item)?,
                _ => self.unsupported(item),
            }
        }
        Ok(())
    }

    fn piece(&mut self, node: &LudemeNode) -> Result<(), CompileError> {
        let args = node.children();
        let (Some(name), Some(owner)) = (args.first().and_then(LudemeNode::as_string), args.get(1).and_then(LudemeNode::as_symbol)) else {
            self.unsupported(node);
            return Ok(());
        };
        let move_rule = match args.get(2..) {
            Some([]) | None => None,
            Some([rule]) => match rule.head() {
                Some("move") => self.move_rule(rule)?,
                _ => {
                    self.unsupported(rule);
                    None
                }
            },
            Some(_) => {
                self.unsupported(node);
                None
            }
        };
        let owners: Vec<Owner> = match owner {
            "Each" => (1..=self.num_players).map(Owner::Player).collect(),
            "Neutral" => vec![Owner::Neutral],
            other => match player_symbol(other) {
                Some(p) if p <= self.num_players => vec![Owner::Player(p)],
                Some(_) => return Err(semantic(format!("no player {other}"), node.span)),
                None => {
                    self.unsupported(&args[1]);
                    return Ok(());
                }
            },
        };
        for owner in owners {
            self.pieces.push(PieceType {
                name: format!("{name}{}", owner.index()),
                owner,
                move_rule: move_rule.clone(),
            });
        }
        Ok(())
    }

    fn track(&mut self, node: &LudemeNode) {
        match node.children() {
            [name, kind] if name.as_string().is_some() && kind.as_symbol() == Some("Boustrophedon") => {
                let board = self.board();
                if board.tiling() != Tiling::Square {
                    self.unsupported(kind);
                    return;
                }
                let rows = board.sites().map(|s| board.coords(s).1).max().unwrap_or(0) + 1;
                let mut sites = Vec::new();
                for r in 0..rows {
                    let mut row = board.row(r);
                    if r % 2 == 1 {
                        row.reverse();
                    }
                    sites.extend(row);
                }
                self.tracks.push(Track { name: name.as_string().unwrap().to_string(), sites });
            }
            _ => self.unsupported(node),
        }
    }

    fn jump_map(&mut self, node: &LudemeNode) -> Result<(), CompileError> {
        let args = node.children();
        let Some(name) = args.first().and_then(LudemeNode::as_string) else {
            self.unsupported(node);
            return Ok(());
        };
        let mut map = HashMap::new();
        for pair in args[1..].iter().flat_map(|a| if a.is_set() { a.children().iter().collect() } else { vec![a] }) {
            match pair.children() {
                [a, b] if pair.is("pair") => {
                    let from = self.label(a)?;
                    let to = self.label(b)?;
                    map.insert(from, to);
                }
                _ => self.unsupported(pair),
            }
        }
        self.jumps.insert(name.to_string(), map);
        Ok(())
    }

    fn region_decl(&mut self, node: &LudemeNode) -> Result<(), CompileError> {
        let args = node.children();
        let Some(name) = args.first().and_then(LudemeNode::as_string) else {
            self.unsupported(node);
            return Ok(());
        };
        let (owner, sites) = match &args[1..] {
            [sites] => (None, sites),
            [who, sites] => match who.as_symbol().and_then(player_symbol) {
                Some(p) if p <= self.num_players => (Some(p), sites),
                _ => {
                    self.unsupported(who);
                    return Ok(());
                }
            },
            _ => {
                self.unsupported(node);
                return Ok(());
            }
        };
        if let Some(sites) = self.site_list(sites)? {
            self.regions.push(Region { name: name.to_string(), owner, sites });
        }
        Ok(())
    }

    fn label(&self, node: &LudemeNode) -> Result<SiteId, CompileError> {
        let label = node
            .as_string()
            .ok_or_else(|| semantic("expected a site label", node.span))?;
        self.board()
            .site(label)
            .ok_or_else(|| semantic(format!("unknown site {label:?}"), node.span))
    }

    /// Static site sets: labels, `(sites Top|Bottom|Left|Right)`,
    /// `(sites Row k)` and `(sites {labels})`.
    fn site_list(&mut self, node: &LudemeNode) -> Result<Option<Vec<SiteId>>, CompileError> {
        let board = self.board();
        let sites = match &node.kind {
            NodeKind::String(_) => vec![self.label(node)?],
            NodeKind::Set(items) => items.iter().map(|l| self.label(l)).collect::<Result<_, _>>()?,
            NodeKind::Constructor { head, children } if head == "sites" => match children.as_slice() {
                [side] if side.as_symbol().is_some() => {
                    let name = match side.as_symbol().unwrap() {
                        "Top" => "N",
                        "Bottom" => "S",
                        "Left" => "W",
                        "Right" => "E",
                        _ => {
                            self.unsupported(node);
                            return Ok(None);
                        }
                    };
                    match board.side_with_corners(name) {
                        Some(s) => s.to_vec(),
                        None => {
                            self.unsupported(node);
                            return Ok(None);
                        }
                    }
                }
                [row, k] if row.as_symbol() == Some("Row") && k.as_count().is_some() => {
                    board.row(k.as_count().unwrap() as i32)
                }
                [set] if set.is_set() => return self.site_list(set),
                _ => {
                    self.unsupported(node);
                    return Ok(None);
                }
            },
            _ => {
                self.unsupported(node);
                return Ok(None);
            }
        };
        Ok(Some(sites))
    }

    fn placement(&mut self, node: &LudemeNode) -> Result<Option<Placement>, CompileError> {
        match node.children() {
            [piece, sites] if node.is("place") && piece.as_string().is_some() => {
                let name = piece.as_string().unwrap();
                let piece = self
                    .pieces
                    .iter()
                    .position(|p| p.name == name)
                    .ok_or_else(|| semantic(format!("unknown piece {name:?}"), piece.span))?;
                Ok(self.site_list(sites)?.map(|sites| Placement { piece, sites }))
            }
            _ => {
                self.unsupported(node);
                Ok(None)
            }
        }
    }

    fn directions(&mut self, node: &LudemeNode) -> Option<Directions> {
        let d = match &node.kind {
            NodeKind::Symbol(s) => match s.as_str() {
                "Orthogonal" => Directions::Class(DirectionClass::Orthogonal),
                "Diagonal" => Directions::Class(DirectionClass::Diagonal),
                "All" | "Adjacent" => Directions::Class(DirectionClass::All),
                "Forward" => Directions::Forward,
                "Forwards" => Directions::Forwards,
                other => Directions::Explicit(vec![Direction::parse(other)?]),
            },
            NodeKind::Set(items) => {
                Directions::Explicit(items.iter().map(|i| i.as_symbol().and_then(Direction::parse)).collect::<Option<_>>()?)
            }
            NodeKind::Constructor { head, children } if head == "directions" && children.len() == 1 => {
                return self.directions(&children[0]);
            }
            _ => return None,
        };
        let board = self.board();
        let valid = match &d {
            Directions::Class(c) => board.directions(*c).is_some(),
            Directions::Forward | Directions::Forwards => board.tiling() == Tiling::Square,
            Directions::Explicit(v) => v.iter().all(|d| board.tiling() == Tiling::Square || Direction::HEX.contains(d)),
        };
        valid.then_some(d)
    }

    /// Destination filter `(to (sites Empty) [(sites Enemy)])`; returns
    /// whether enemy-occupied destinations are allowed.
    fn destinations(&mut self, node: &LudemeNode) -> Option<bool> {
        let mut empty = false;
        let mut enemy = false;
        for f in node.children() {
            let f = if f.is("union") { f.children() } else { std::slice::from_ref(f) };
            for s in f {
                match (s.head(), s.first_symbol(), s.children().len()) {
                    (Some("sites"), Some("Empty"), 1) => empty = true,
                    (Some("sites"), Some("Enemy"), 1) => enemy = true,
                    _ => return None,
                }
            }
        }
        empty.then_some(enemy)
    }

    fn move_rule(&mut self, node: &LudemeNode) -> Result<Option<MoveRule>, CompileError> {
        let args = node.children();
        let Some(kind) = node.first_symbol() else {
            self.unsupported(node);
            return Ok(None);
        };
        let mut directions = None;
        let mut capture = false;
        let mut move_again = false;
        let mut piece_arg: Option<&LudemeNode> = None;
        let mut track_arg = None;
        let mut jumps_arg = None;
        let mut ok = true;
        for arg in &args[1..] {
            match arg.head() {
                Some("then") => {
                    for effect in items(arg) {
                        match (effect.head(), kind) {
                            (Some("moveAgain"), _) if effect.children().is_empty() => move_again = true,
                            (Some("remove"), "Hop") => capture = true,
                            _ => {
                                self.unsupported(effect);
                                ok = false;
                            }
                        }
                    }
                }
                Some("to") if matches!(kind, "Add" | "Slide" | "Step") => match self.destinations(arg) {
                    Some(enemy) if kind != "Add" || !enemy => capture |= enemy,
                    _ => {
                        self.unsupported(arg);
                        ok = false;
                    }
                },
                Some("piece") if matches!(kind, "Add" | "Shoot") => piece_arg = Some(arg),
                Some("track") if kind == "Roll" => track_arg = Some(arg),
                Some("jumps") if kind == "Roll" => jumps_arg = Some(arg),
                Some("remove") if kind == "Hop" => capture = true,
                _ if matches!(kind, "Slide" | "Shoot" | "Hop" | "Step") && directions.is_none() => {
                    match self.directions(arg) {
                        Some(d) => directions = Some(d),
                        None => {
                            self.unsupported(arg);
                            ok = false;
                        }
                    }
                }
                _ => {
                    self.unsupported(arg);
                    ok = false;
                }
            }
        }
        let directions = directions.unwrap_or(Directions::Class(DirectionClass::All));
        let piece_name = |n: &LudemeNode| n.children().first().and_then(LudemeNode::as_string).map(str::to_string);
        let kind = match kind {
            "Add" => MoveKind::Add { piece: piece_arg.and_then(piece_name) },
            "Slide" => MoveKind::Slide { directions, capture },
            "Step" => MoveKind::Step { directions, capture },
            "Hop" => MoveKind::Hop { directions, capture },
            "Shoot" => {
                let Some(arg) = piece_arg else {
                    return Err(semantic("shoot needs (piece name)", node.span));
                };
                let name = piece_name(arg).ok_or_else(|| semantic("expected a piece name", arg.span))?;
                let piece = self
                    .pieces
                    .iter()
                    .position(|p| p.name == name)
                    .ok_or_else(|| semantic(format!("unknown piece {name:?}"), arg.span))?;
                MoveKind::Shoot { piece, directions }
            }
            "Roll" => {
                let name = track_arg
                    .and_then(|t| t.children().first())
                    .and_then(LudemeNode::as_string)
                    .ok_or_else(|| semantic("roll needs (track name)", node.span))?;
                let track = self
                    .tracks
                    .iter()
                    .position(|t| t.name == name)
                    .ok_or_else(|| semantic(format!("unknown track {name:?}"), node.span))?;
                let jumps = match jumps_arg {
                    None => None,
                    Some(j) => {
                        let name = j
                            .children()
                            .first()
                            .and_then(LudemeNode::as_string)
                            .ok_or_else(|| semantic("expected a map name", j.span))?;
                        if !self.jumps.contains_key(name) {
                            return Err(semantic(format!("unknown map {name:?}"), j.span));
                        }
                        Some(name.to_string())
                    }
                };
                MoveKind::Roll { track, jumps }
            }
            _ => {
                self.unsupported(node);
                return Ok(None);
            }
        };
        Ok(ok.then_some(MoveRule { kind, move_again }))
    }

    fn play_rule(&mut self, node: &LudemeNode) -> Result<Option<PlayRule>, CompileError> {
        let args = node.children();
        let rule = match node.head() {
            Some("move") => self.move_rule(node)?.map(PlayRule::Move),
            Some("forEach") if node.first_symbol() == Some("Piece") && args.len() == 1 => Some(PlayRule::ForEachPiece),
            Some("if") if (2..=3).contains(&args.len()) => {
                let condition = self.play_condition(&args[0]);
                let then = self.play_rule(&args[1])?;
                let otherwise = match args.get(2) {
                    Some(o) => Some(self.play_rule(o)?),
                    None => None,
                };
                match (condition, then, otherwise) {
                    (Some(condition), Some(then), None) if args.len() == 2 => {
                        Some(PlayRule::If { condition, then: Box::new(then), otherwise: None })
                    }
                    (Some(condition), Some(then), Some(Some(o))) => Some(PlayRule::If {
                        condition,
                        then: Box::new(then),
                        otherwise: Some(Box::new(o)),
                    }),
                    _ => None,
                }
            }
            Some("or") => {
                let alts: Vec<_> = items(node).into_iter().map(|a| self.play_rule(a)).collect::<Result<_, _>>()?;
                alts.into_iter().collect::<Option<Vec<_>>>().map(PlayRule::Or)
            }
            _ => {
                self.unsupported(node);
                None
            }
        };
        Ok(rule)
    }

    fn play_condition(&mut self, node: &LudemeNode) -> Option<PlayCondition> {
        let args = node.children();
        match (node.head(), node.first_symbol()) {
            (Some("is"), Some(parity @ ("Even" | "Odd"))) if args.len() == 2 => {
                let q = &args[1];
                if q.is("count") && q.first_symbol() == Some("Moves") && q.children().len() == 1 {
                    let q = Quantity::Moves;
                    Some(if parity == "Even" { PlayCondition::Even(q) } else { PlayCondition::Odd(q) })
                } else {
                    self.unsupported(q);
                    None
                }
            }
            (Some("not"), _) if args.len() == 1 => {
                self.play_condition(&args[0]).map(|c| PlayCondition::Not(Box::new(c)))
            }
            _ => {
                self.unsupported(node);
                None
            }
        }
    }

    fn end_rule(&mut self, node: &LudemeNode) -> Result<Option<EndRule>, CompileError> {
        let args = node.children();
        if !node.is("if") || args.len() != 2 {
            self.unsupported(node);
            return Ok(None);
        }
        let condition = self.end_condition(&args[0])?;
        let result = &args[1];
        let parsed = match result.children() {
            [who, kind] if result.is("result") => {
                let who = match who.as_symbol() {
                    Some("Mover") => Some(Role::Mover),
                    Some("Next") => Some(Role::Next),
                    Some("Prev") => Some(Role::Prev),
                    _ => None,
                };
                let kind = match kind.as_symbol() {
                    Some("Win") => Some(ResultKind::Win),
                    Some("Loss") => Some(ResultKind::Loss),
                    Some("Draw") => Some(ResultKind::Draw),
                    _ => None,
                };
                who.zip(kind)
            }
            _ => None,
        };
        let Some((who, kind)) = parsed else {
            self.unsupported(result);
            return Ok(None);
        };
        if kind == ResultKind::Loss && self.num_players != 2 {
            return Err(semantic("loss results need exactly two players", result.span));
        }
        Ok(condition.map(|condition| EndRule { condition, who, result: kind }))
    }

    fn end_condition(&mut self, node: &LudemeNode) -> Result<Option<EndCondition>, CompileError> {
        let args = node.children();
        let cond = match (node.head(), node.first_symbol()) {
            (Some("no"), Some("Moves")) if args.len() == 2 => match args[1].as_symbol() {
                Some("Next") => Some(EndCondition::NoMoves(Role::Next)),
                Some("Mover") => Some(EndCondition::NoMoves(Role::Mover)),
                Some("Prev") => Some(EndCondition::NoMoves(Role::Prev)),
                _ => None,
            },
            (Some("is"), Some("Line")) if args.len() == 2 => {
                args[1].as_count().filter(|&n| n >= 2).map(EndCondition::Line)
            }
            (Some("is"), Some("Loop")) if args.len() == 1 => Some(EndCondition::Loop),
            (Some("is"), Some("Reach")) if args.len() == 2 => match args[1].as_string() {
                Some(name) if self.regions.iter().any(|r| r.name == name) => {
                    Some(EndCondition::Reach(name.to_string()))
                }
                Some(name) => return Err(semantic(format!("unknown region {name:?}"), args[1].span)),
                None => None,
            },
            (Some("is"), Some("Connected")) => self.connection(&args[1..]),
            (Some("or" | "and"), _) => {
                let parts: Vec<_> = items(node).into_iter().map(|a| self.end_condition(a)).collect::<Result<_, _>>()?;
                let parts: Option<Vec<_>> = parts.into_iter().collect();
                match (node.head(), parts) {
                    (_, None) => return Ok(None),
                    (_, Some(p)) if p.is_empty() => None,
                    (Some("or"), Some(p)) => Some(EndCondition::Any(p)),
                    (_, Some(p)) => Some(EndCondition::All(p)),
                }
            }
            (Some("not"), _) if args.len() == 1 => {
                return Ok(self.end_condition(&args[0])?.map(|c| EndCondition::Not(Box::new(c))));
            }
            _ => None,
        };
        if cond.is_none() {
            self.unsupported(node);
        }
        Ok(cond)
    }

    fn connection(&self, args: &[LudemeNode]) -> Option<EndCondition> {
        let board = self.board();
        let (count, kind) = match args {
            [kind] => (None, kind.as_symbol()?),
            [n, kind] => (Some(n.as_count()?), kind.as_symbol()?),
            _ => return None,
        };
        let regions: Vec<Vec<SiteId>> = match kind {
            "OppositeSides" => {
                if count.is_some_and(|c| c != 2) || self.num_players != 2 {
                    return None;
                }
                let n = board.side("N")?.to_vec();
                let s = board.side("S")?.to_vec();
                let e = board.side("E")?.to_vec();
                let w = board.side("W")?.to_vec();
                return Some(EndCondition::ConnectedOpposite(vec![[n, s], [e, w]]));
            }
            "Sides" => board.sides().keys().map(|k| board.side_with_corners(k).unwrap().to_vec()).collect(),
            "SidesNoCorners" => board.sides().values().cloned().collect(),
            "Corners" => board.corners().iter().map(|&c| vec![c]).collect(),
            _ => return None,
        };
        let count = count.unwrap_or(regions.len());
        (count >= 1 && count <= regions.len()).then_some(EndCondition::Connected { count, regions })
    }
}

fn dice_faces_of(equipment: &LudemeNode) -> Option<u32> {
    items(equipment)
        .into_iter()
        .find(|e| e.is("dice"))
        .and_then(|d| d.children().first())
        .and_then(LudemeNode::as_count)
        .map(|f| f as u32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ludeme::parse_source;

    const TTT: &str = "(game \"Tic-Tac-Toe\" (players 2) (equipment {(board (square 3)) (piece \"Disc\" P1) (piece \"Cross\" P2)}) (rules (play (move Add (to (sites Empty)))) (end (if (is Line 3) (result Mover Win)))))";

    fn compile_src(src: &str) -> Result<GameSpec, CompileError> {
        compile(&parse_source(src).unwrap())
    }

    #[test]
    fn tic_tac_toe() {
        let spec = compile_src(TTT).unwrap();
        assert_eq!(spec.num_players, 2);
        assert_eq!(spec.board.num_sites(), 9);
        let names: Vec<_> = spec.piece_types.iter().map(|p| p.name.as_str()).collect();
        assert_eq!(names, ["Disc1", "Cross2"]);
        assert_eq!(spec.end_rules.len(), 1);
        assert_eq!(spec.end_rules[0].condition, EndCondition::Line(3));
        assert_eq!(spec.add_piece_for(None, 2), Some(1));
    }

    #[test]
    fn unsupported_are_all_listed() {
        let err = compile_src(
            "(game \"X\" (players 2) (equipment {(board (square 3)) (piece \"K\" Each (move Leap))}) (rules (play (forEach Piece)) (end (if (is Checkmate \"K\") (result Mover Win)))))",
        )
        .unwrap_err();
        let CompileError::UnsupportedLudeme(list) = err else { panic!("{err:?}") };
        let names: Vec<_> = list.iter().map(|u| u.ludeme.as_str()).collect();
        assert_eq!(names, ["move Leap", "is Checkmate"]);
    }

    #[test]
    fn semantic_errors() {
        let bad_label = "(game \"X\" (players 2) (equipment {(board (square 3)) (piece \"D\" Each)}) (rules (start (place \"D1\" {\"Z9\"})) (play (move Add (to (sites Empty))))))";
        assert!(matches!(compile_src(bad_label), Err(CompileError::Semantic { .. })));
        let bad_piece = "(game \"X\" (players 2) (equipment {(board (square 3)) (piece \"D\" Each)}) (rules (start (place \"Q1\" {\"A1\"})) (play (move Add (to (sites Empty))))))";
        assert!(matches!(compile_src(bad_piece), Err(CompileError::Semantic { .. })));
        let not_game = parse_source("(players 2)").unwrap();
        assert_eq!(compile(&not_game).unwrap_err(), CompileError::NotAGame);
    }

    #[test]
    fn hex_opposite_sides() {
        let spec = compile_src(
            "(game \"Hex\" (players 2) (equipment {(board (hex Diamond 3)) (piece \"Marker\" Each)}) (rules (play (move Add (to (sites Empty)))) (end (if (is Connected OppositeSides) (result Mover Win)))))",
        )
        .unwrap();
        let EndCondition::ConnectedOpposite(pairs) = &spec.end_rules[0].condition else { panic!() };
        assert_eq!(pairs.len(), 2);
        assert!(pairs.iter().all(|p| p[0].len() == 3 && p[1].len() == 3));
    }

    #[test]
    fn diagonal_on_hex_is_rejected() {
        let err = compile_src(
            "(game \"X\" (players 2) (equipment {(board (hex 3)) (piece \"M\" Each (move Slide Diagonal))}) (rules (play (forEach Piece))))",
        )
        .unwrap_err();
        assert!(matches!(err, CompileError::UnsupportedLudeme(_)));
    }
}
