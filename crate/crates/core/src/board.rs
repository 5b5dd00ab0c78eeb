//! Board graphs for square and hexagonal tilings.
//!
//! Sites are numbered row by row from the bottom-left. Coordinate labels use
//! column letters (`A`, `B`, ... `Z`, `AA`, ...) and 1-based row numbers, so
//! `A1` is the bottom-left site of a square board.
//!
//! Hex boards use axial coordinates `(q, r)`: `q` grows towards the east and
//! `r` towards the north-east. The six neighbour offsets are named after the
//! compass direction they point to on a pointy-top layout.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

type SideTest = (&'static str, fn(i32, i32, i32) -> bool);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SiteId(pub usize);

impl fmt::Display for SiteId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Direction {
    N,
    NE,
    E,
    SE,
    S,
    SW,
    W,
    NW,
}

impl Direction {
    pub const ALL: [Direction; 8] = [
        Direction::N,
        Direction::NE,
        Direction::E,
        Direction::SE,
        Direction::S,
        Direction::SW,
        Direction::W,
        Direction::NW,
    ];
    pub const SQUARE_ORTHOGONAL: [Direction; 4] = [Direction::N, Direction::E, Direction::S, Direction::W];
    pub const SQUARE_DIAGONAL: [Direction; 4] = [Direction::NE, Direction::SE, Direction::SW, Direction::NW];
    pub const HEX: [Direction; 6] = [
        Direction::NE,
        Direction::E,
        Direction::SE,
        Direction::SW,
        Direction::W,
        Direction::NW,
    ];

    pub fn opposite(self) -> Direction {
        Direction::ALL[(self as usize + 4) % 8]
    }

    pub fn parse(s: &str) -> Option<Direction> {
        Direction::ALL.into_iter().find(|d| d.to_string() == s)
    }

    fn square_offset(self) -> (i32, i32) {
        // (column, row)
        match self {
            Direction::N => (0, 1),
            Direction::NE => (1, 1),
            Direction::E => (1, 0),
            Direction::SE => (1, -1),
            Direction::S => (0, -1),
            Direction::SW => (-1, -1),
            Direction::W => (-1, 0),
            Direction::NW => (-1, 1),
        }
    }

    fn hex_offset(self) -> Option<(i32, i32)> {
        // axial (q, r)
        match self {
            Direction::NE => Some((0, 1)),
            Direction::E => Some((1, 0)),
            Direction::SE => Some((1, -1)),
            Direction::SW => Some((0, -1)),
            Direction::W => Some((-1, 0)),
            Direction::NW => Some((-1, 1)),
            Direction::N | Direction::S => None,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DirectionClass {
    Orthogonal,
    Diagonal,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Tiling {
    Square,
    Hex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BoardShape {
    Square(usize),
    Rectangle { rows: usize, columns: usize },
    Hexagon(usize),
    Rhombus(usize),
    /// Six-pointed star around a hexagon of the given side.
    Star(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoardError {
    #[error("invalid board size {0}")]
    InvalidSize(usize),
}

#[derive(Debug, Clone)]
pub struct BoardGraph {
    tiling: Tiling,
    shape: BoardShape,
    coords: Vec<(i32, i32)>,
    labels: Vec<String>,
    by_label: HashMap<String, SiteId>,
    neighbours: Vec<[Option<SiteId>; 8]>,
    sides: BTreeMap<String, Vec<SiteId>>,
    sides_inclusive: BTreeMap<String, Vec<SiteId>>,
    corners: Vec<SiteId>,
    boundary: Vec<bool>,
}

/// Spreadsheet-style column name: 0 → A, 25 → Z, 26 → AA.
pub fn column_letters(mut index: usize) -> String {
    let mut out = Vec::new();
    loop {
        out.push(b'A' + (index % 26) as u8);
        if index < 26 {
            break;
        }
        index = index / 26 - 1;
    }
    out.reverse();
    String::from_utf8(out).expect("ascii")
}

impl BoardGraph {
    pub fn build_square(n: usize) -> Result<BoardGraph, BoardError> {
        if n < 1 {
            return Err(BoardError::InvalidSize(n));
        }
        Self::build_rectangle_shape(n, n, BoardShape::Square(n))
    }

    pub fn build_rectangle(rows: usize, columns: usize) -> Result<BoardGraph, BoardError> {
        if rows < 1 || columns < 1 {
            return Err(BoardError::InvalidSize(rows.min(columns)));
        }
        let shape = if rows == columns {
            BoardShape::Square(rows)
        } else {
            BoardShape::Rectangle { rows, columns }
        };
        Self::build_rectangle_shape(rows, columns, shape)
    }

    fn build_rectangle_shape(rows: usize, columns: usize, shape: BoardShape) -> Result<BoardGraph, BoardError> {
        let coords: Vec<(i32, i32)> = (0..rows as i32)
            .flat_map(|r| (0..columns as i32).map(move |c| (c, r)))
            .collect();
        let (maxc, maxr) = (columns as i32 - 1, rows as i32 - 1);
        let mut sides = BTreeMap::new();
        let pick = |f: &dyn Fn(i32, i32) -> bool| -> Vec<SiteId> {
            coords.iter().enumerate().filter(|(_, &(c, r))| f(c, r)).map(|(i, _)| SiteId(i)).collect()
        };
        sides.insert("N".to_string(), pick(&|_, r| r == maxr));
        sides.insert("S".to_string(), pick(&|_, r| r == 0));
        sides.insert("E".to_string(), pick(&|c, _| c == maxc));
        sides.insert("W".to_string(), pick(&|c, _| c == 0));
        let corners = pick(&|c, r| (c == 0 || c == maxc) && (r == 0 || r == maxr));
        let labels = coords
            .iter()
            .map(|&(c, r)| format!("{}{}", column_letters(c as usize), r + 1))
            .collect();
        Ok(Self::assemble(Tiling::Square, shape, coords, labels, sides, corners, |d| {
            Some(d.square_offset())
        }))
    }

    pub fn build_hex_hexagon(n: usize) -> Result<BoardGraph, BoardError> {
        if n < 1 {
            return Err(BoardError::InvalidSize(n));
        }
        let m = n as i32 - 1;
        let coords = hex_cells(|q, r| q.abs().max(r.abs()).max((q + r).abs()) <= m, m, m);
        // named by the direction the side faces
        let side_tests: [SideTest; 6] = [
            ("E", |q, _, m| q == m),
            ("NE", |_, r, m| r == m),
            ("NW", |q, r, m| -(q + r) == m),
            ("W", |q, _, m| q == -m),
            ("SW", |_, r, m| r == -m),
            ("SE", |q, r, m| q + r == m),
        ];
        let is_corner = |q: i32, r: i32| {
            let s = -q - r;
            let at_max = [q, r, s].iter().filter(|v| v.abs() == m).count();
            m == 0 || at_max >= 2
        };
        let mut sides = BTreeMap::new();
        let mut inclusive = BTreeMap::new();
        for (name, test) in side_tests {
            let line: Vec<SiteId> = coords
                .iter()
                .enumerate()
                .filter(|(_, &(q, r))| test(q, r, m))
                .map(|(i, _)| SiteId(i))
                .collect();
            let inner = line.iter().copied().filter(|s| !is_corner(coords[s.0].0, coords[s.0].1)).collect();
            sides.insert(name.to_string(), inner);
            inclusive.insert(name.to_string(), line);
        }
        let corners = coords
            .iter()
            .enumerate()
            .filter(|(_, &(q, r))| is_corner(q, r))
            .map(|(i, _)| SiteId(i))
            .collect();
        let labels = hex_labels(&coords);
        let mut board =
            Self::assemble(Tiling::Hex, BoardShape::Hexagon(n), coords, labels, sides, corners, Direction::hex_offset);
        board.sides_inclusive = inclusive;
        Ok(board)
    }

    pub fn build_hex_rhombus(n: usize) -> Result<BoardGraph, BoardError> {
        if n < 1 {
            return Err(BoardError::InvalidSize(n));
        }
        let m = n as i32 - 1;
        let coords = hex_cells(|_, _| true, 0, m).into_iter().filter(|&(q, r)| (0..=m).contains(&q) && (0..=m).contains(&r)).collect::<Vec<_>>();
        let pick = |f: &dyn Fn(i32, i32) -> bool| -> Vec<SiteId> {
            coords.iter().enumerate().filter(|(_, &(q, r))| f(q, r)).map(|(i, _)| SiteId(i)).collect()
        };
        let mut sides = BTreeMap::new();
        sides.insert("N".to_string(), pick(&|_, r| r == m));
        sides.insert("S".to_string(), pick(&|_, r| r == 0));
        sides.insert("E".to_string(), pick(&|q, _| q == m));
        sides.insert("W".to_string(), pick(&|q, _| q == 0));
        let corners = pick(&|q, r| (q == 0 || q == m) && (r == 0 || r == m));
        let labels = coords
            .iter()
            .map(|&(q, r)| format!("{}{}", column_letters(q as usize), r + 1))
            .collect();
        Ok(Self::assemble(Tiling::Hex, BoardShape::Rhombus(n), coords, labels, sides, corners, Direction::hex_offset))
    }

    /// Star of David over a hexagon of side `n`: 6n² − 6n + 1 cells.
    pub fn build_hex_star(n: usize) -> Result<BoardGraph, BoardError> {
        if n < 2 {
            return Err(BoardError::InvalidSize(n));
        }
        let m = n as i32 - 1;
        let up = |q: i32, r: i32| q >= -m && r >= -m && -q - r >= -m;
        let down = |q: i32, r: i32| q <= m && r <= m && -q - r <= m;
        let coords = hex_cells(|q, r| up(q, r) || down(q, r), 2 * m, 2 * m);
        let corners = coords
            .iter()
            .enumerate()
            .filter(|(_, &(q, r))| [q, r, -q - r].iter().any(|v| v.abs() == 2 * m))
            .map(|(i, _)| SiteId(i))
            .collect();
        let labels = hex_labels(&coords);
        Ok(Self::assemble(Tiling::Hex, BoardShape::Star(n), coords, labels, BTreeMap::new(), corners, Direction::hex_offset))
    }

    fn assemble(
        tiling: Tiling,
        shape: BoardShape,
        coords: Vec<(i32, i32)>,
        labels: Vec<String>,
        sides: BTreeMap<String, Vec<SiteId>>,
        corners: Vec<SiteId>,
        offset: impl Fn(Direction) -> Option<(i32, i32)>,
    ) -> BoardGraph {
        let index: HashMap<(i32, i32), SiteId> =
            coords.iter().enumerate().map(|(i, &c)| (c, SiteId(i))).collect();
        let neighbours: Vec<[Option<SiteId>; 8]> = coords
            .iter()
            .map(|&(x, y)| {
                let mut row = [None; 8];
                for d in Direction::ALL {
                    if let Some((dx, dy)) = offset(d) {
                        row[d as usize] = index.get(&(x + dx, y + dy)).copied();
                    }
                }
                row
            })
            .collect();
        let full_degree = match tiling {
            Tiling::Square => 8,
            Tiling::Hex => 6,
        };
        let boundary = neighbours
            .iter()
            .map(|row| row.iter().flatten().count() < full_degree)
            .collect();
        let by_label = labels.iter().enumerate().map(|(i, l)| (l.clone(), SiteId(i))).collect();
        BoardGraph {
            tiling,
            shape,
            coords,
            labels,
            by_label,
            neighbours,
            sides,
            sides_inclusive: BTreeMap::new(),
            corners,
            boundary,
        }
    }

    pub fn tiling(&self) -> Tiling {
        self.tiling
    }

    pub fn shape(&self) -> BoardShape {
        self.shape
    }

    pub fn num_sites(&self) -> usize {
        self.coords.len()
    }

    pub fn sites(&self) -> impl Iterator<Item = SiteId> {
        (0..self.num_sites()).map(SiteId)
    }

    pub fn label(&self, site: SiteId) -> &str {
        &self.labels[site.0]
    }

    pub fn site(&self, label: &str) -> Option<SiteId> {
        self.by_label.get(label).copied()
    }

    /// Column/row (square) or axial q/r (hex) coordinates.
    pub fn coords(&self, site: SiteId) -> (i32, i32) {
        self.coords[site.0]
    }

    pub fn step(&self, site: SiteId, dir: Direction) -> Option<SiteId> {
        self.neighbours[site.0][dir as usize]
    }

    /// Neighbours with their directions, in compass order.
    pub fn neighbours(&self, site: SiteId) -> impl Iterator<Item = (Direction, SiteId)> + '_ {
        Direction::ALL
            .into_iter()
            .filter_map(move |d| self.step(site, d).map(|s| (d, s)))
    }

    pub fn degree(&self, site: SiteId) -> usize {
        self.neighbours[site.0].iter().flatten().count()
    }

    /// Concrete directions of a class on this tiling; `None` for diagonal
    /// directions on hex boards.
    pub fn directions(&self, class: DirectionClass) -> Option<&'static [Direction]> {
        match (self.tiling, class) {
            (Tiling::Square, DirectionClass::Orthogonal) => Some(&Direction::SQUARE_ORTHOGONAL),
            (Tiling::Square, DirectionClass::Diagonal) => Some(&Direction::SQUARE_DIAGONAL),
            (Tiling::Square, DirectionClass::All) => Some(&Direction::ALL),
            (Tiling::Hex, DirectionClass::Diagonal) => None,
            (Tiling::Hex, _) => Some(&Direction::HEX),
        }
    }

    /// Line axes (one direction per opposite pair).
    pub fn axes(&self) -> &'static [Direction] {
        match self.tiling {
            Tiling::Square => &[Direction::N, Direction::NE, Direction::E, Direction::SE],
            Tiling::Hex => &[Direction::NE, Direction::E, Direction::SE],
        }
    }

    /// Side regions. On hexagons these exclude the corners.
    pub fn sides(&self) -> &BTreeMap<String, Vec<SiteId>> {
        &self.sides
    }

    pub fn side(&self, name: &str) -> Option<&[SiteId]> {
        self.sides.get(name).map(Vec::as_slice)
    }

    /// A side together with the corners at its ends.
    pub fn side_with_corners(&self, name: &str) -> Option<&[SiteId]> {
        self.sides_inclusive.get(name).or_else(|| self.sides.get(name)).map(Vec::as_slice)
    }

    pub fn corners(&self) -> &[SiteId] {
        &self.corners
    }

    pub fn is_boundary(&self, site: SiteId) -> bool {
        self.boundary[site.0]
    }

    pub fn boundary_sites(&self) -> impl Iterator<Item = SiteId> + '_ {
        self.sites().filter(|&s| self.is_boundary(s))
    }

    /// Sites in 0-based row `row` (square boards) or with `r == row` (hex).
    pub fn row(&self, row: i32) -> Vec<SiteId> {
        let min_r = self.coords.iter().map(|c| c.1).min().unwrap_or(0);
        self.sites().filter(|&s| self.coords(s).1 - min_r == row).collect()
    }

    pub fn mean_degree(&self) -> f64 {
        if self.num_sites() == 0 {
            return 0.0;
        }
        let total: usize = self.sites().map(|s| self.degree(s)).sum();
        total as f64 / self.num_sites() as f64
    }

    /// Number of sites per neighbour count.
    pub fn degree_histogram(&self) -> BTreeMap<usize, usize> {
        let mut hist = BTreeMap::new();
        for s in self.sites() {
            *hist.entry(self.degree(s)).or_insert(0) += 1;
        }
        hist
    }
}

/// Cells with `keep(q, r)` inside the bounding box `-lo..=hi` on both axes,
/// ordered by `r` then `q`.
fn hex_cells(keep: impl Fn(i32, i32) -> bool, lo: i32, hi: i32) -> Vec<(i32, i32)> {
    let mut out = Vec::new();
    for r in -lo..=hi {
        for q in -lo..=hi {
            if keep(q, r) {
                out.push((q, r));
            }
        }
    }
    out
}

fn hex_labels(coords: &[(i32, i32)]) -> Vec<String> {
    let min_q = coords.iter().map(|c| c.0).min().unwrap_or(0);
    let min_r = coords.iter().map(|c| c.1).min().unwrap_or(0);
    coords
        .iter()
        .map(|&(q, r)| format!("{}{}", column_letters((q - min_q) as usize), r - min_r + 1))
        .collect()
}
