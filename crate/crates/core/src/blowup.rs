//! Blowing a ground set up with gadget copies.
//!
//! For every relation letter and every eligible pair `(u, v)` of that
//! relation, one fresh copy of the letter's gadget is inserted with its
//! anchors identified with `u` and `v`. The base set contributes no edges of
//! its own. Vertices are numbered base first, then copies in
//! `(letter, pair)` order, interiors in template order.

use std::fmt::Write as _;

use crate::error::{parse_err, Error, Result};
use crate::gadgets::{GadgetSet, GadgetTemplate};
use crate::genlib::GeneratorQuadruple;
use crate::graph::{color_relations, Color, Edge};
use crate::partition::{GroundMap, Partition};
use crate::terms::Letter;

/// Where a vertex of the blown-up set came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Origin {
    Base(usize),
    Gadget {
        letter: Letter,
        pair: (usize, usize),
        label: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredGraph {
    pub vertex_count: usize,
    pub edges: Vec<Edge>,
    pub origin: Vec<Origin>,
}

impl ColoredGraph {
    /// `[x, y, z]`: connectivity along edges of each single color.
    pub fn relations(&self) -> [Partition; 3] {
        color_relations(self.vertex_count, &self.edges).expect("edges validated at construction")
    }

    /// The same graph with colors Y and Z exchanged.
    pub fn mirror(&self) -> ColoredGraph {
        ColoredGraph {
            vertex_count: self.vertex_count,
            edges: self
                .edges
                .iter()
                .map(|e| Edge::new(e.a, e.b, e.color.mirror()))
                .collect(),
            origin: self.origin.clone(),
        }
    }

    pub fn base_count(&self) -> usize {
        self.origin
            .iter()
            .filter(|o| matches!(o, Origin::Base(_)))
            .count()
    }

    /// Witness dump: `origin` comment lines, a header, then edge lines.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, o) in self.origin.iter().enumerate() {
            match o {
                Origin::Base(k) => writeln!(out, "# origin {i} base {k}").unwrap(),
                Origin::Gadget { letter, pair, label } => writeln!(
                    out,
                    "# origin {i} {letter} {} {} {label}",
                    pair.0, pair.1
                )
                .unwrap(),
            }
        }
        writeln!(
            out,
            "witness vertices={} base={}",
            self.vertex_count,
            self.base_count()
        )
        .unwrap();
        for e in &self.edges {
            writeln!(out, "edge {} {} {}", e.a, e.b, e.color).unwrap();
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut origin_lines: Vec<(usize, Origin)> = Vec::new();
        let mut header: Option<(usize, usize)> = None;
        let mut edges = Vec::new();
        for (ln, raw) in text.lines().enumerate() {
            let ln = ln + 1;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                let toks: Vec<&str> = rest.split_whitespace().collect();
                if toks.first() != Some(&"origin") {
                    continue;
                }
                let num = |s: &str| {
                    s.parse::<usize>()
                        .map_err(|_| parse_err(ln, format!("bad number `{s}`")))
                };
                let o = match toks.as_slice() {
                    ["origin", i, "base", k] => (num(i)?, Origin::Base(num(k)?)),
                    ["origin", i, letter, u, v, label] => (
                        num(i)?,
                        Origin::Gadget {
                            letter: letter.parse().map_err(|e: Error| parse_err(ln, e.to_string()))?,
                            pair: (num(u)?, num(v)?),
                            label: label.to_string(),
                        },
                    ),
                    _ => return Err(parse_err(ln, "malformed origin line")),
                };
                origin_lines.push(o);
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            match toks.as_slice() {
                ["witness", vs, bs] => {
                    let v = kv(vs, "vertices", ln)?;
                    let b = kv(bs, "base", ln)?;
                    header = Some((v, b));
                }
                ["edge", a, b, c] => {
                    let a = a.parse().map_err(|_| parse_err(ln, "bad endpoint"))?;
                    let b = b.parse().map_err(|_| parse_err(ln, "bad endpoint"))?;
                    let c: Color = c.parse().map_err(|e: String| parse_err(ln, e))?;
                    edges.push(Edge::new(a, b, c));
                }
                _ => return Err(parse_err(ln, format!("unrecognised line `{line}`"))),
            }
        }
        let (vertex_count, _) = header.ok_or_else(|| parse_err(0, "missing witness header"))?;
        crate::graph::check_edges(vertex_count, &edges)?;
        let mut origin: Vec<Option<Origin>> = vec![None; vertex_count];
        for (i, o) in origin_lines {
            if i >= vertex_count {
                return Err(Error::OutOfRange {
                    elem: i,
                    n: vertex_count,
                });
            }
            origin[i] = Some(o);
        }
        let origin = origin
            .into_iter()
            .enumerate()
            .map(|(i, o)| o.ok_or_else(|| parse_err(0, format!("vertex {i} has no origin line"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            vertex_count,
            edges,
            origin,
        })
    }
}

pub(crate) fn kv(tok: &str, key: &str, ln: usize) -> Result<usize> {
    tok.strip_prefix(key)
        .and_then(|r| r.strip_prefix('='))
        .and_then(|r| r.parse().ok())
        .ok_or_else(|| parse_err(ln, format!("expected {key}=<int>, got `{tok}`")))
}

/// One inserted gadget copy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetCopy {
    pub letter: Letter,
    pub pair: (usize, usize),
    /// Template vertex index to vertex of the blown-up set.
    pub table: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct BlowupWitness {
    pub graph: ColoredGraph,
    /// Inclusion of the base set as vertices `0..base`.
    pub base_map: GroundMap,
    pub copies: Vec<GadgetCopy>,
    /// Vertex sets collapsed by theta, one group per gamma/delta copy.
    theta_sets: Vec<Vec<usize>>,
}

impl BlowupWitness {
    pub fn a0_size(&self) -> usize {
        self.base_map.from_n()
    }

    pub fn size(&self) -> usize {
        self.graph.vertex_count
    }

    pub fn theta_sets(&self) -> &[Vec<usize>] {
        &self.theta_sets
    }
}

/// Pairs `u < v` related by `p`, in lexicographic order.
pub fn eligible_pairs(p: &Partition) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for block in p.blocks() {
        for (k, &u) in block.iter().enumerate() {
            for &v in &block[k + 1..] {
                out.push((u, v));
            }
        }
    }
    out.sort_unstable();
    out
}

/// `|A0| + 24 (e_alpha + e_beta) + 8 (e_gamma + e_delta)` for the shipped gadget sizes.
pub fn expected_size(relations: &[Partition; 4]) -> usize {
    let e: Vec<usize> = relations.iter().map(|p| eligible_pairs(p).len()).collect();
    relations[0].len() + 24 * (e[0] + e[1]) + 8 * (e[2] + e[3])
}

/// Labels of the sets theta collapses inside one gamma or delta copy.
fn theta_labels(letter: Letter) -> Option<[Vec<String>; 4]> {
    let pre = match letter {
        Letter::Gamma => "c",
        Letter::Delta => "d",
        _ => return None,
    };
    let l = |s: &str| format!("{pre}_{s}");
    Some([
        vec!["u".into(), l("dn1"), l("up1")],
        vec!["v".into(), l("dn4"), l("up4")],
        vec![l("dn2"), l("dn3")],
        vec![l("up2"), l("up3")],
    ])
}

/// Builds the blow-up from explicit templates, one optional template per
/// letter. A letter whose relation has eligible pairs must have a template.
pub fn assemble(
    relations: &[Partition; 4],
    templates: [Option<&GadgetTemplate>; 4],
) -> Result<BlowupWitness> {
    let a0 = relations[0].len();
    for r in &relations[1..] {
        if r.len() != a0 {
            return Err(Error::SizeMismatch {
                left: a0,
                right: r.len(),
            });
        }
    }
    let mut origin: Vec<Origin> = (0..a0).map(Origin::Base).collect();
    let mut edges = Vec::new();
    let mut copies = Vec::new();
    let mut theta_sets = Vec::new();

    for letter in Letter::ALL {
        let pairs = eligible_pairs(&relations[letter.index()]);
        if pairs.is_empty() {
            continue;
        }
        let t = templates[letter.index()]
            .ok_or_else(|| Error::InvalidGadget(format!("no template for {letter}")))?;
        if t.letter != letter {
            return Err(Error::InvalidGadget(format!(
                "template for {} supplied in the {letter} slot",
                t.letter
            )));
        }
        let collapse_idx = match theta_labels(letter) {
            Some(sets) => Some(
                sets.iter()
                    .map(|s| s.iter().map(|l| t.index_of(l)).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?,
            ),
            None => None,
        };
        for (u, v) in pairs {
            let mut table = vec![0usize; t.vertex_count];
            for i in 0..t.vertex_count {
                table[i] = if i == t.u {
                    u
                } else if i == t.v {
                    v
                } else {
                    origin.push(Origin::Gadget {
                        letter,
                        pair: (u, v),
                        label: t.labels[i].clone(),
                    });
                    origin.len() - 1
                };
            }
            edges.extend(
                t.edges
                    .iter()
                    .map(|e| Edge::new(table[e.a], table[e.b], e.color)),
            );
            if let Some(sets) = &collapse_idx {
                for s in sets {
                    theta_sets.push(s.iter().map(|&i| table[i]).collect());
                }
            }
            copies.push(GadgetCopy {
                letter,
                pair: (u, v),
                table,
            });
        }
    }

    let vertex_count = origin.len();
    Ok(BlowupWitness {
        graph: ColoredGraph {
            vertex_count,
            edges,
            origin,
        },
        base_map: GroundMap::prefix(a0, vertex_count)?,
        copies,
        theta_sets,
    })
}

/// The blow-up of a quadruple with a verified gadget set.
pub fn build(quad: &GeneratorQuadruple, gadgets: &GadgetSet) -> Result<BlowupWitness> {
    if !gadgets.is_verified() {
        return Err(Error::Unverified);
    }
    let t = gadgets.templates();
    assemble(quad.relations(), [Some(&t[0]), Some(&t[1]), Some(&t[2]), Some(&t[3])])
}

/// `(x1, y1, z1)` of the blown-up graph.
pub fn xyz(w: &BlowupWitness) -> [Partition; 3] {
    w.graph.relations()
}

/// Least equivalence collapsing the designated sets of every gamma and delta copy.
pub fn theta(w: &BlowupWitness) -> Partition {
    Partition::collapse(w.size(), &w.theta_sets).expect("theta sets lie inside the blow-up")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets::GadgetSet;

    fn quad(parts: [Partition; 4]) -> GeneratorQuadruple {
        GeneratorQuadruple::user(parts).unwrap()
    }

    #[test]
    fn eligible_pairs_examples() {
        assert!(eligible_pairs(&Partition::bottom(4)).is_empty());
        assert_eq!(
            eligible_pairs(&Partition::top(3)),
            vec![(0, 1), (0, 2), (1, 2)]
        );
        let p = Partition::from_blocks(4, &[[0, 1, 2]]).unwrap();
        assert_eq!(eligible_pairs(&p), vec![(0, 1), (0, 2), (1, 2)]);
        let p = Partition::from_blocks(4, &[[0, 3], [1, 2]]).unwrap();
        assert_eq!(eligible_pairs(&p), vec![(0, 3), (1, 2)]);
    }

    #[test]
    fn build_sizes() {
        let g = GadgetSet::builtin();
        let (t, b) = (Partition::top(2), Partition::bottom(2));
        let w = build(&quad([t.clone(), t.clone(), t.clone(), t.clone()]), g).unwrap();
        assert_eq!(w.size(), 66);
        let w = build(&quad([b.clone(), b.clone(), t.clone(), t.clone()]), g).unwrap();
        assert_eq!(w.size(), 18);
        let bb = Partition::bottom(5);
        let w = build(&quad([bb.clone(), bb.clone(), bb.clone(), bb.clone()]), g).unwrap();
        assert_eq!(w.size(), 5);
        assert!(w.graph.edges.is_empty());
    }

    #[test]
    fn build_rejects_unverified() {
        let g = GadgetSet::builtin().clone().into_unverified();
        let t = Partition::top(2);
        let err = build(&quad([t.clone(), t.clone(), t.clone(), t]), &g).unwrap_err();
        assert_eq!(err, Error::Unverified);
    }

    #[test]
    fn xyz_of_edgeless_graph() {
        let g = GadgetSet::builtin();
        let b = Partition::bottom(3);
        let w = build(&quad([b.clone(), b.clone(), b.clone(), b]), g).unwrap();
        for r in xyz(&w) {
            assert!(r.is_bottom());
        }
    }

    #[test]
    fn theta_examples() {
        let g = GadgetSet::builtin();
        let (t, b) = (Partition::top(2), Partition::bottom(2));
        let w = build(&quad([t.clone(), t.clone(), b.clone(), b.clone()]), g).unwrap();
        assert!(theta(&w).is_bottom());

        let w = build(&quad([b.clone(), b, t.clone(), t]), g).unwrap();
        let th = theta(&w);
        // gamma copy interiors are 2..10 (c_dn1..4, c_up1..4), delta 10..18
        let expect = Partition::from_blocks(
            18,
            &[
                vec![0, 2, 6, 10, 14],
                vec![1, 5, 9, 13, 17],
                vec![3, 4],
                vec![7, 8],
                vec![11, 12],
                vec![15, 16],
            ],
        )
        .unwrap();
        assert_eq!(th, expect);
        assert!(th.restrict(&w.base_map).unwrap().is_bottom());
    }

    #[test]
    fn witness_text_round_trip() {
        let g = GadgetSet::builtin();
        let t = Partition::top(2);
        let b = Partition::bottom(2);
        let w = build(&quad([t.clone(), b.clone(), b, t]), g).unwrap();
        let text = w.graph.to_text();
        assert_eq!(ColoredGraph::parse(&text).unwrap(), w.graph);
    }
}
