//! Edge colors and per-color connectivity.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::partition::Partition;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Color {
    X,
    Y,
    Z,
}

impl Color {
    pub const ALL: [Color; 3] = [Color::X, Color::Y, Color::Z];

    pub fn bit(self) -> u8 {
        1 << (self as u8)
    }

    /// Y and Z trade places; X is fixed.
    pub fn mirror(self) -> Color {
        match self {
            Color::X => Color::X,
            Color::Y => Color::Z,
            Color::Z => Color::Y,
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Color::X => "x",
            Color::Y => "y",
            Color::Z => "z",
        })
    }
}

impl FromStr for Color {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "x" | "X" => Ok(Color::X),
            "y" | "Y" => Ok(Color::Y),
            "z" | "Z" => Ok(Color::Z),
            _ => Err(format!("unknown color `{s}`")),
        }
    }
}

/// A set of colors as a bit mask.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct ColorSet(pub u8);

impl ColorSet {
    pub const EMPTY: ColorSet = ColorSet(0);
    pub const ALL: ColorSet = ColorSet(0b111);

    pub fn of(colors: &[Color]) -> Self {
        ColorSet(colors.iter().fold(0, |m, c| m | c.bit()))
    }

    pub fn single(c: Color) -> Self {
        ColorSet(c.bit())
    }

    pub fn contains(self, c: Color) -> bool {
        self.0 & c.bit() != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = Color> {
        Color::ALL.into_iter().filter(move |&c| self.contains(c))
    }
}

/// An undirected edge with one color. Parallel edges are allowed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub color: Color,
}

impl Edge {
    pub fn new(a: usize, b: usize, color: Color) -> Self {
        Self { a, b, color }
    }
}

/// Connected components of the subgraph formed by edges with a color in `colors`.
pub fn color_closure(vertex_count: usize, edges: &[Edge], colors: ColorSet) -> Result<Partition> {
    let sets: Vec<[usize; 2]> = edges
        .iter()
        .filter(|e| colors.contains(e.color))
        .map(|e| [e.a, e.b])
        .collect();
    Partition::collapse(vertex_count, &sets)
}

/// `x`, `y`, `z`: the monochromatic connectivity relations.
pub fn color_relations(vertex_count: usize, edges: &[Edge]) -> Result<[Partition; 3]> {
    Ok([
        color_closure(vertex_count, edges, ColorSet::single(Color::X))?,
        color_closure(vertex_count, edges, ColorSet::single(Color::Y))?,
        color_closure(vertex_count, edges, ColorSet::single(Color::Z))?,
    ])
}

pub(crate) fn check_edges(vertex_count: usize, edges: &[Edge]) -> Result<()> {
    for e in edges {
        for v in [e.a, e.b] {
            if v >= vertex_count {
                return Err(Error::OutOfRange {
                    elem: v,
                    n: vertex_count,
                });
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_examples() {
        let edges = [Edge::new(0, 1, Color::X), Edge::new(1, 2, Color::Y)];
        assert!(color_closure(3, &edges, ColorSet::single(Color::Z))
            .unwrap()
            .is_bottom());
        assert!(color_closure(3, &edges, ColorSet::ALL).unwrap().is_top());
        assert_eq!(
            color_closure(3, &edges, ColorSet::single(Color::X)).unwrap(),
            Partition::from_blocks(3, &[[0, 1]]).unwrap()
        );
    }

    #[test]
    fn closure_rejects_bad_endpoint() {
        let edges = [Edge::new(0, 4, Color::X)];
        assert!(color_closure(3, &edges, ColorSet::ALL).is_err());
    }

    #[test]
    fn color_parsing() {
        assert_eq!("y".parse::<Color>().unwrap(), Color::Y);
        assert!("w".parse::<Color>().is_err());
        assert_eq!(Color::Y.mirror(), Color::Z);
        assert_eq!(ColorSet::of(&[Color::X, Color::Z]).iter().count(), 2);
    }
}
