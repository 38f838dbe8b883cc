//! VLR-zone cell grids, location-area partitions and adjacency queries.
//!
//! A zone is an `m x m` block of cells. Square cells use the 8-cell Moore
//! neighbourhood; hexagonal cells are laid out as an axial-coordinate
//! parallelogram with the six axial offsets. Cell ids are row-major: for the
//! hexagonal layout a row is a line of constant `r` and the column is `q`.
//!
//! The zone is assumed to sit inside an infinite tiling of identical zones,
//! each served by its own VLR. A neighbour coordinate that falls outside
//! `0..m` therefore belongs to another VLR; wrapping it modulo `m` gives the
//! matching cell of that neighbouring copy.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{LmError, Result};

const SQUARE_OFFSETS: [(i64, i64); 8] = [
    (-1, -1),
    (-1, 0),
    (-1, 1),
    (0, -1),
    (0, 1),
    (1, -1),
    (1, 0),
    (1, 1),
];

// (drow, dcol) == (dr, dq): axial (dq, dr) in {(+-1,0), (0,+-1), (+1,-1), (-1,+1)}.
const HEX_OFFSETS: [(i64, i64); 6] = [(0, 1), (0, -1), (1, 0), (-1, 0), (-1, 1), (1, -1)];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Geometry {
    Square,
    Hexagonal,
}

impl Geometry {
    /// Neighbour offsets as `(drow, dcol)`.
    pub fn offsets(self) -> &'static [(i64, i64)] {
        match self {
            Geometry::Square => &SQUARE_OFFSETS,
            Geometry::Hexagonal => &HEX_OFFSETS,
        }
    }

    pub fn degree(self) -> usize {
        self.offsets().len()
    }

    /// Surface of one cell of side `r` (km^2).
    pub fn cell_area(self, side: f64) -> f64 {
        match self {
            Geometry::Square => side * side,
            Geometry::Hexagonal => 1.5 * 3f64.sqrt() * side * side,
        }
    }

    /// Perimeter of one cell of side `r` (km).
    pub fn cell_perimeter(self, side: f64) -> f64 {
        match self {
            Geometry::Square => 4.0 * side,
            Geometry::Hexagonal => 6.0 * side,
        }
    }

    /// Closed-form count of directed out-of-zone adjacencies for an `m x m` zone.
    pub fn boundary_closed_form(self, m: usize) -> u64 {
        let m = m as u64;
        match self {
            Geometry::Square => 20 + 12 * (m - 2),
            Geometry::Hexagonal => 14 + 8 * (m - 2),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Geometry::Square => "square",
            Geometry::Hexagonal => "hexagonal",
        }
    }
}

impl fmt::Display for Geometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Geometry {
    type Err = LmError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "square" | "sq" => Ok(Geometry::Square),
            "hexagonal" | "hex" => Ok(Geometry::Hexagonal),
            other => Err(LmError::Domain(format!("unknown geometry {other:?}"))),
        }
    }
}

/// Row-major cell index inside a zone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellId(pub usize);

/// `(row, col)` coordinate, possibly outside the zone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Coord {
    pub row: i64,
    pub col: i64,
}

impl Coord {
    pub const fn new(row: i64, col: i64) -> Self {
        Coord { row, col }
    }
}

/// Target of one directed adjacency.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Neighbor {
    InZone(CellId),
    /// Lies in a neighbouring VLR's copy; `wrapped` is the matching cell of the copy.
    OutOfZone { coord: Coord, wrapped: CellId },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NeighborClass {
    SameLa,
    OtherLaSameVlr,
    OtherVlr,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellGrid {
    geometry: Geometry,
    m: usize,
}

impl CellGrid {
    pub fn new(geometry: Geometry, m: usize) -> Result<Self> {
        if m < 2 {
            return Err(LmError::InvalidDimension(m));
        }
        Ok(CellGrid { geometry, m })
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn cell_count(&self) -> usize {
        self.m * self.m
    }

    pub fn degree(&self) -> usize {
        self.geometry.degree()
    }

    pub fn cells(&self) -> impl Iterator<Item = CellId> {
        (0..self.cell_count()).map(CellId)
    }

    pub fn coord(&self, cell: CellId) -> Coord {
        Coord::new((cell.0 / self.m) as i64, (cell.0 % self.m) as i64)
    }

    pub fn contains(&self, c: Coord) -> bool {
        let m = self.m as i64;
        (0..m).contains(&c.row) && (0..m).contains(&c.col)
    }

    pub fn cell_at(&self, c: Coord) -> Option<CellId> {
        self.contains(c)
            .then(|| CellId(c.row as usize * self.m + c.col as usize))
    }

    /// Cell of the zone copy that `c` falls into.
    pub fn wrap(&self, c: Coord) -> CellId {
        let m = self.m as i64;
        let row = c.row.rem_euclid(m) as usize;
        let col = c.col.rem_euclid(m) as usize;
        CellId(row * self.m + col)
    }

    /// All `degree()` directed adjacencies out of `cell`, in offset order.
    pub fn neighbors(&self, cell: CellId) -> impl Iterator<Item = Neighbor> + '_ {
        let origin = self.coord(cell);
        self.geometry.offsets().iter().map(move |&(dr, dc)| {
            let c = Coord::new(origin.row + dr, origin.col + dc);
            match self.cell_at(c) {
                Some(id) => Neighbor::InZone(id),
                None => Neighbor::OutOfZone {
                    coord: c,
                    wrapped: self.wrap(c),
                },
            }
        })
    }

    pub fn is_adjacent(&self, a: Coord, b: Coord) -> bool {
        let d = (b.row - a.row, b.col - a.col);
        self.geometry.offsets().contains(&d)
    }

    pub fn in_zone_degree(&self, cell: CellId) -> usize {
        self.neighbors(cell)
            .filter(|n| matches!(n, Neighbor::InZone(_)))
            .count()
    }

    pub fn out_of_zone_degree(&self, cell: CellId) -> usize {
        self.degree() - self.in_zone_degree(cell)
    }

    /// Cells with at least one neighbour in another VLR's zone.
    pub fn is_border_cell(&self, cell: CellId) -> bool {
        self.out_of_zone_degree(cell) > 0
    }

    /// Directed adjacencies from in-zone cells to cells of surrounding zones.
    pub fn boundary_adjacency_count(&self) -> u64 {
        self.cells().map(|c| self.out_of_zone_degree(c) as u64).sum()
    }

    pub fn classify(&self, partition: &Partition, cell: CellId, target: Neighbor) -> NeighborClass {
        match target {
            Neighbor::OutOfZone { .. } => NeighborClass::OtherVlr,
            Neighbor::InZone(other) if partition.la_of(other) == partition.la_of(cell) => {
                NeighborClass::SameLa
            }
            Neighbor::InZone(_) => NeighborClass::OtherLaSameVlr,
        }
    }

    /// Classifies the directed adjacency `cell -> neighbor`; `neighbor` may lie outside the zone.
    pub fn classify_adjacency(
        &self,
        partition: &Partition,
        cell: Coord,
        neighbor: Coord,
    ) -> Result<NeighborClass> {
        let id = self
            .cell_at(cell)
            .ok_or(LmError::CellOutOfRange(cell.row, cell.col))?;
        if !self.is_adjacent(cell, neighbor) {
            return Err(LmError::NotAdjacent {
                from: (cell.row, cell.col),
                to: (neighbor.row, neighbor.col),
            });
        }
        let target = match self.cell_at(neighbor) {
            Some(n) => Neighbor::InZone(n),
            None => Neighbor::OutOfZone {
                coord: neighbor,
                wrapped: self.wrap(neighbor),
            },
        };
        Ok(self.classify(partition, id, target))
    }
}

/// How to carve a zone into location areas.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PartitionScheme {
    /// One LA covering the whole zone.
    Single,
    /// Four equal square blocks; needs even `m`.
    Quadrants,
    /// Left and right halves; needs even `m`.
    Halves,
    /// `n` equal vertical strips.
    VerticalStrips(usize),
    /// `rows x cols` equal blocks.
    Blocks { rows: usize, cols: usize },
    /// Row-major LA ids.
    Explicit(Vec<u32>),
}

impl fmt::Display for PartitionScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PartitionScheme::Single => f.write_str("single"),
            PartitionScheme::Quadrants => f.write_str("quadrants"),
            PartitionScheme::Halves => f.write_str("halves"),
            PartitionScheme::VerticalStrips(n) => write!(f, "strips:{n}"),
            PartitionScheme::Blocks { rows, cols } => write!(f, "blocks:{rows}x{cols}"),
            PartitionScheme::Explicit(_) => f.write_str("explicit"),
        }
    }
}

impl FromStr for PartitionScheme {
    type Err = LmError;

    /// Parses `single`, `quadrants`, `halves`, `strips:N` or `blocks:RxC`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        let bad = || LmError::Domain(format!("unknown partition scheme {s:?}"));
        match s.as_str() {
            "single" => return Ok(PartitionScheme::Single),
            "quadrants" => return Ok(PartitionScheme::Quadrants),
            "halves" => return Ok(PartitionScheme::Halves),
            _ => {}
        }
        if let Some(n) = s.strip_prefix("strips:") {
            let n = n.parse().map_err(|_| bad())?;
            return Ok(PartitionScheme::VerticalStrips(n));
        }
        if let Some(spec) = s.strip_prefix("blocks:") {
            let (r, c) = spec.split_once('x').ok_or_else(bad)?;
            return Ok(PartitionScheme::Blocks {
                rows: r.parse().map_err(|_| bad())?,
                cols: c.parse().map_err(|_| bad())?,
            });
        }
        Err(bad())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    assignment: Vec<u32>,
    la_count: usize,
}

impl Partition {
    /// Validates an explicit row-major assignment against `grid`.
    pub fn from_assignment(grid: &CellGrid, assignment: Vec<u32>) -> Result<Self> {
        if assignment.len() != grid.cell_count() {
            return Err(LmError::Coverage(format!(
                "assignment covers {} cells, zone has {}",
                assignment.len(),
                grid.cell_count()
            )));
        }
        let ids: BTreeSet<u32> = assignment.iter().copied().collect();
        let la_count = ids.len();
        if let Some(&max) = ids.iter().next_back() {
            if max as usize != la_count - 1 {
                let missing: Vec<u32> = (0..=max).filter(|i| !ids.contains(i)).collect();
                return Err(LmError::Coverage(format!(
                    "LA ids must be dense 0..{}; empty LA ids {:?}",
                    la_count, missing
                )));
            }
        }
        Ok(Partition {
            assignment,
            la_count,
        })
    }

    pub fn la_of(&self, cell: CellId) -> u32 {
        self.assignment[cell.0]
    }

    pub fn la_count(&self) -> usize {
        self.la_count
    }

    pub fn assignment(&self) -> &[u32] {
        &self.assignment
    }

    /// Cells per LA, indexed by LA id.
    pub fn la_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.la_count];
        for &la in &self.assignment {
            sizes[la as usize] += 1;
        }
        sizes
    }

    /// Joins LA `b` into LA `a` and renumbers ids densely.
    pub fn merge(&self, a: u32, b: u32) -> Result<Partition> {
        if a as usize >= self.la_count || b as usize >= self.la_count || a == b {
            return Err(LmError::Domain(format!("cannot merge LAs {a} and {b}")));
        }
        let assignment = self
            .assignment
            .iter()
            .map(|&la| {
                let la = if la == b { a } else { la };
                if la > b {
                    la - 1
                } else {
                    la
                }
            })
            .collect();
        Ok(Partition {
            assignment,
            la_count: self.la_count - 1,
        })
    }
}

pub fn make_partition(grid: &CellGrid, scheme: &PartitionScheme) -> Result<Partition> {
    let m = grid.m();
    let err = || LmError::Partition {
        scheme: scheme.to_string(),
        m,
    };
    let assign = |f: &dyn Fn(usize, usize) -> u32| -> Vec<u32> {
        (0..m * m).map(|i| f(i / m, i % m)).collect()
    };
    let assignment = match scheme {
        PartitionScheme::Single => vec![0; m * m],
        PartitionScheme::Quadrants => {
            if !m.is_multiple_of(2) {
                return Err(err());
            }
            let h = m / 2;
            assign(&|r, c| (2 * (r / h) + c / h) as u32)
        }
        PartitionScheme::Halves => {
            if !m.is_multiple_of(2) {
                return Err(err());
            }
            assign(&|_, c| (c / (m / 2)) as u32)
        }
        PartitionScheme::VerticalStrips(n) => {
            if *n == 0 || !m.is_multiple_of(*n) {
                return Err(err());
            }
            let w = m / n;
            assign(&|_, c| (c / w) as u32)
        }
        PartitionScheme::Blocks { rows, cols } => {
            if *rows == 0 || *cols == 0 || !m.is_multiple_of(*rows) || !m.is_multiple_of(*cols) {
                return Err(err());
            }
            let (bh, bw) = (m / rows, m / cols);
            assign(&|r, c| ((r / bh) * cols + c / bw) as u32)
        }
        PartitionScheme::Explicit(ids) => ids.clone(),
    };
    Partition::from_assignment(grid, assignment)
}

/// Parses the explicit partition file format:
/// a header `geometry m la_count` followed by `m` rows of `m` LA ids.
pub fn parse_partition_file(text: &str) -> Result<(CellGrid, Partition)> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines.next().ok_or(LmError::Parse {
        line: 1,
        msg: "empty partition file".into(),
    })?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 3 {
        return Err(LmError::Parse {
            line: hline,
            msg: format!("expected 'geometry m la_count', got {header:?}"),
        });
    }
    let geometry: Geometry = fields[0].parse().map_err(|e: LmError| LmError::Parse {
        line: hline,
        msg: e.to_string(),
    })?;
    let parse_num = |s: &str| -> Result<usize> {
        s.parse().map_err(|_| LmError::Parse {
            line: hline,
            msg: format!("not an integer: {s:?}"),
        })
    };
    let m = parse_num(fields[1])?;
    let la_count = parse_num(fields[2])?;
    let grid = CellGrid::new(geometry, m)?;

    let mut assignment = Vec::with_capacity(m * m);
    let mut rows = 0;
    for (line, l) in lines {
        let row: Vec<u32> = l
            .split_whitespace()
            .map(|t| {
                t.parse().map_err(|_| LmError::Parse {
                    line,
                    msg: format!("bad LA id {t:?}"),
                })
            })
            .collect::<Result<_>>()?;
        if row.len() != m {
            return Err(LmError::Coverage(format!(
                "line {line}: expected {m} LA ids, found {}",
                row.len()
            )));
        }
        assignment.extend(row);
        rows += 1;
    }
    if rows != m {
        return Err(LmError::Coverage(format!("expected {m} rows, found {rows}")));
    }
    let partition = Partition::from_assignment(&grid, assignment)?;
    if partition.la_count() != la_count {
        return Err(LmError::Coverage(format!(
            "header declares {la_count} LAs, map uses {}",
            partition.la_count()
        )));
    }
    Ok((grid, partition))
}

/// Inverse of [`parse_partition_file`].
pub fn write_partition_file(grid: &CellGrid, partition: &Partition) -> String {
    let m = grid.m();
    let mut out = format!("{} {} {}\n", grid.geometry(), m, partition.la_count());
    for row in partition.assignment().chunks(m) {
        let line: Vec<String> = row.iter().map(u32::to_string).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_boundary(g: Geometry, m: usize) -> u64 {
        // Independent recount: enumerate offsets and test the coordinate box directly.
        let mut n = 0;
        for r in 0..m as i64 {
            for c in 0..m as i64 {
                for &(dr, dc) in g.offsets() {
                    let (nr, nc) = (r + dr, c + dc);
                    if nr < 0 || nc < 0 || nr >= m as i64 || nc >= m as i64 {
                        n += 1;
                    }
                }
            }
        }
        n
    }

    #[test]
    fn build_grid_examples() {
        let sq = CellGrid::new(Geometry::Square, 7).unwrap();
        assert_eq!(sq.cell_count(), 49);
        assert_eq!(sq.in_zone_degree(sq.cell_at(Coord::new(3, 3)).unwrap()), 8);

        let hex = CellGrid::new(Geometry::Hexagonal, 7).unwrap();
        assert_eq!(hex.cell_count(), 49);
        assert_eq!(hex.in_zone_degree(hex.cell_at(Coord::new(3, 3)).unwrap()), 6);

        let tiny = CellGrid::new(Geometry::Square, 2).unwrap();
        assert!(tiny.cells().all(|c| tiny.in_zone_degree(c) == 3));
    }

    #[test]
    fn rejects_small_dimension() {
        assert_eq!(
            CellGrid::new(Geometry::Square, 1),
            Err(LmError::InvalidDimension(1))
        );
        assert!(CellGrid::new(Geometry::Hexagonal, 0).is_err());
    }

    #[test]
    fn boundary_counts() {
        let count = |g, m| CellGrid::new(g, m).unwrap().boundary_adjacency_count();
        assert_eq!(count(Geometry::Square, 7), 80);
        assert_eq!(count(Geometry::Square, 10), 116);
        assert_eq!(count(Geometry::Hexagonal, 7), 54);
        assert_eq!(count(Geometry::Hexagonal, 10), 78);
        assert_eq!(count(Geometry::Square, 2), 20);
        for g in [Geometry::Square, Geometry::Hexagonal] {
            for m in 2..=20 {
                assert_eq!(count(g, m), brute_boundary(g, m));
                assert_eq!(count(g, m), g.boundary_closed_form(m));
            }
        }
    }

    #[test]
    fn adjacency_symmetric_irreflexive() {
        for g in [Geometry::Square, Geometry::Hexagonal] {
            let grid = CellGrid::new(g, 6).unwrap();
            let mut directed = 0;
            for a in grid.cells() {
                for n in grid.neighbors(a) {
                    if let Neighbor::InZone(b) = n {
                        assert_ne!(a, b);
                        assert!(grid.neighbors(b).any(|x| x == Neighbor::InZone(a)));
                        directed += 1;
                    }
                }
            }
            assert_eq!(directed % 2, 0);
        }
    }

    #[test]
    fn partition_schemes() {
        let g = CellGrid::new(Geometry::Square, 10).unwrap();
        let q = make_partition(&g, &PartitionScheme::Quadrants).unwrap();
        assert_eq!(q.la_sizes(), vec![25; 4]);
        let h = make_partition(&g, &PartitionScheme::Halves).unwrap();
        assert_eq!(h.la_sizes(), vec![50, 50]);
        let s = make_partition(&g, &PartitionScheme::VerticalStrips(5)).unwrap();
        assert_eq!(s.la_sizes(), vec![20; 5]);
        let b = make_partition(&g, &PartitionScheme::Blocks { rows: 2, cols: 5 }).unwrap();
        assert_eq!(b.la_sizes(), vec![10; 10]);

        let g7 = CellGrid::new(Geometry::Square, 7).unwrap();
        assert!(matches!(
            make_partition(&g7, &PartitionScheme::Quadrants),
            Err(LmError::Partition { .. })
        ));
        assert!(make_partition(&g7, &PartitionScheme::VerticalStrips(3)).is_err());
        let one = make_partition(&g7, &PartitionScheme::Explicit(vec![0; 49])).unwrap();
        assert_eq!(one.la_sizes(), vec![49]);
    }

    #[test]
    fn explicit_partition_coverage_errors() {
        let g = CellGrid::new(Geometry::Square, 3).unwrap();
        assert!(matches!(
            Partition::from_assignment(&g, vec![0; 8]),
            Err(LmError::Coverage(_))
        ));
        // LA 1 is empty.
        assert!(matches!(
            Partition::from_assignment(&g, vec![0, 0, 0, 2, 2, 2, 0, 0, 0]),
            Err(LmError::Coverage(_))
        ));
    }

    #[test]
    fn classify_examples() {
        let g = CellGrid::new(Geometry::Square, 10).unwrap();
        let p = make_partition(&g, &PartitionScheme::Quadrants).unwrap();
        let c = |a: (i64, i64), b: (i64, i64)| {
            g.classify_adjacency(&p, Coord::new(a.0, a.1), Coord::new(b.0, b.1))
        };
        assert_eq!(c((0, 0), (-1, -1)).unwrap(), NeighborClass::OtherVlr);
        assert_eq!(c((1, 1), (2, 2)).unwrap(), NeighborClass::SameLa);
        assert_eq!(c((4, 4), (5, 5)).unwrap(), NeighborClass::OtherLaSameVlr);
        assert!(matches!(c((0, 0), (2, 2)), Err(LmError::NotAdjacent { .. })));
    }

    #[test]
    fn class_counts_sum_to_degree() {
        for g in [Geometry::Square, Geometry::Hexagonal] {
            let grid = CellGrid::new(g, 10).unwrap();
            let p = make_partition(&grid, &PartitionScheme::Quadrants).unwrap();
            let mut counts = [0usize; 3];
            for c in grid.cells() {
                for n in grid.neighbors(c) {
                    let idx = match grid.classify(&p, c, n) {
                        NeighborClass::SameLa => 0,
                        NeighborClass::OtherLaSameVlr => 1,
                        NeighborClass::OtherVlr => 2,
                    };
                    counts[idx] += 1;
                }
            }
            assert_eq!(counts.iter().sum::<usize>(), g.degree() * 100);
        }
    }

    #[test]
    fn partition_file_round_trip() {
        let g = CellGrid::new(Geometry::Hexagonal, 4).unwrap();
        let p = make_partition(&g, &PartitionScheme::Quadrants).unwrap();
        let text = write_partition_file(&g, &p);
        assert!(text.starts_with("hexagonal 4 4\n"));
        let (g2, p2) = parse_partition_file(&text).unwrap();
        assert_eq!(g, g2);
        assert_eq!(p, p2);
    }

    #[test]
    fn partition_file_errors() {
        assert!(parse_partition_file("square 3 1\n0 0 0\n0 0\n0 0 0\n").is_err());
        assert!(parse_partition_file("square 3 2\n0 0 0\n0 0 0\n0 0 0\n").is_err());
        assert!(matches!(
            parse_partition_file("square 2 1\n0 0\n"),
            Err(LmError::Coverage(_))
        ));
        assert!(matches!(
            parse_partition_file("triangle 2 1\n0 0\n0 0\n"),
            Err(LmError::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn merge_renumbers() {
        let g = CellGrid::new(Geometry::Square, 4).unwrap();
        let p = make_partition(&g, &PartitionScheme::Quadrants).unwrap();
        let merged = p.merge(1, 2).unwrap();
        assert_eq!(merged.la_count(), 3);
        assert_eq!(merged.la_sizes(), vec![4, 8, 4]);
    }
}
