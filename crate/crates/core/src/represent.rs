//! Small finite lattices given by their covers, and a search for
//! representations of them inside some `Equ(m)`.

use std::collections::HashMap;

use crate::error::{parse_err, Error, Result};
use crate::genlib::all_partitions;
use crate::partition::Partition;

/// Largest lattice accepted.
pub const MAX_ELEMENTS: usize = 8;
/// Largest `m` tried by default.
pub const MAX_M: usize = 6;

/// A finite lattice with precomputed meet and join tables.
#[derive(Clone, Debug)]
pub struct FiniteLattice {
    pub names: Vec<String>,
    leq: Vec<Vec<bool>>,
    meet: Vec<Vec<usize>>,
    join: Vec<Vec<usize>>,
}

impl FiniteLattice {
    /// `covers` lists pairs `(a, b)` with `a` covered by `b`.
    pub fn from_covers(names: Vec<String>, covers: &[(usize, usize)]) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::NotALattice("no elements".into()));
        }
        if n > MAX_ELEMENTS {
            return Err(Error::TooLarge {
                n,
                max: MAX_ELEMENTS,
            });
        }
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in covers {
            for x in [a, b] {
                if x >= n {
                    return Err(Error::OutOfRange { elem: x, n });
                }
            }
            leq[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && leq[i][j] && leq[j][i] {
                    return Err(Error::NotALattice(format!(
                        "{} and {} lie on a cycle",
                        names[i], names[j]
                    )));
                }
            }
        }
        let bound = |i: usize, j: usize, lower: bool| -> Option<usize> {
            let common: Vec<usize> = (0..n)
                .filter(|&k| if lower { leq[k][i] && leq[k][j] } else { leq[i][k] && leq[j][k] })
                .collect();
            common.iter().copied().find(|&c| {
                common
                    .iter()
                    .all(|&d| if lower { leq[d][c] } else { leq[c][d] })
            })
        };
        let mut meet = vec![vec![0; n]; n];
        let mut join = vec![vec![0; n]; n];
        for i in 0..n {
            for j in 0..n {
                meet[i][j] = bound(i, j, true).ok_or_else(|| {
                    Error::NotALattice(format!("{} and {} have no meet", names[i], names[j]))
                })?;
                join[i][j] = bound(i, j, false).ok_or_else(|| {
                    Error::NotALattice(format!("{} and {} have no join", names[i], names[j]))
                })?;
            }
        }
        Ok(Self {
            names,
            leq,
            meet,
            join,
        })
    }

    /// Reads `elements <name>...` followed by `cover <lower> <upper>` lines.
    pub fn parse(text: &str) -> Result<Self> {
        let mut names: Option<Vec<String>> = None;
        let mut covers = Vec::new();
        for (ln, raw) in text.lines().enumerate() {
            let ln = ln + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            match toks.as_slice() {
                ["elements", rest @ ..] => {
                    if names.is_some() {
                        return Err(parse_err(ln, "duplicate `elements` line"));
                    }
                    let v: Vec<String> = rest.iter().map(|s| s.to_string()).collect();
                    let mut seen = std::collections::HashSet::new();
                    for s in &v {
                        if !seen.insert(s) {
                            return Err(parse_err(ln, format!("element `{s}` listed twice")));
                        }
                    }
                    names = Some(v);
                }
                ["cover", a, b] => {
                    let names = names
                        .as_ref()
                        .ok_or_else(|| parse_err(ln, "`cover` before `elements`"))?;
                    let idx = |s: &str| {
                        names
                            .iter()
                            .position(|n| n == s)
                            .ok_or_else(|| parse_err(ln, format!("unknown element `{s}`")))
                    };
                    covers.push((idx(a)?, idx(b)?));
                }
                _ => return Err(parse_err(ln, format!("unrecognised line `{line}`"))),
            }
        }
        let names = names.ok_or_else(|| parse_err(0, "missing `elements` line"))?;
        Self::from_covers(names, &covers)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a][b]
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a][b]
    }

    /// Elements sorted so that every element follows everything below it.
    fn linear_extension(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&i| (0..self.len()).filter(|&j| self.leq[j][i]).count());
        order
    }
}

/// A lattice embedding into `Equ(m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    pub m: usize,
    /// Image of each lattice element, in input order.
    pub images: Vec<Partition>,
}

impl Representation {
    pub fn to_text(&self, lattice: &FiniteLattice) -> String {
        let mut out = format!("m={}\n", self.m);
        for (name, p) in lattice.names.iter().zip(&self.images) {
            out.push_str(&format!("{name}: {p}\n"));
        }
        out
    }
}

/// Tries `m = 1..=max_m` in turn and returns the first embedding found.
/// `budget` bounds the total number of partial assignments; running out,
/// or finding nothing up to `max_m`, gives [`Error::Exhausted`], which is
/// not a proof that no representation exists.
pub fn represent(lattice: &FiniteLattice, max_m: usize, budget: usize) -> Result<Representation> {
    let order = lattice.linear_extension();
    let mut nodes = 0usize;
    for m in 1..=max_m {
        let cands = all_partitions(m);
        if cands.len() < lattice.len() {
            continue;
        }
        let index: HashMap<&Partition, usize> = cands.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let mut images: Vec<Option<usize>> = vec![None; lattice.len()];
        let mut ctx = Ctx {
            l: lattice,
            order: &order,
            cands: &cands,
            index: &index,
            nodes: &mut nodes,
            budget,
        };
        if search(&mut ctx, 0, &mut images)? {
            return Ok(Representation {
                m,
                images: images.into_iter().map(|i| cands[i.expect("all assigned")].clone()).collect(),
            });
        }
    }
    Err(Error::Exhausted)
}

struct Ctx<'a> {
    l: &'a FiniteLattice,
    order: &'a [usize],
    cands: &'a [Partition],
    index: &'a HashMap<&'a Partition, usize>,
    nodes: &'a mut usize,
    budget: usize,
}

fn search(ctx: &mut Ctx<'_>, depth: usize, images: &mut Vec<Option<usize>>) -> Result<bool> {
    let Some(&e) = ctx.order.get(depth) else {
        return Ok(true);
    };
    let (l, cands) = (ctx.l, ctx.cands);
    'cand: for c in 0..cands.len() {
        *ctx.nodes += 1;
        if *ctx.nodes > ctx.budget {
            return Err(Error::Exhausted);
        }
        if images.contains(&Some(c)) {
            continue;
        }
        images[e] = Some(c);
        for a in 0..l.len() {
            let Some(ia) = images[a] else { continue };
            for b in 0..l.len() {
                let Some(ib) = images[b] else { continue };
                if l.leq(a, b) != cands[ia].leq_unchecked(&cands[ib]) {
                    continue 'cand;
                }
                for (target, value) in [
                    (l.meet(a, b), cands[ia].meet_unchecked(&cands[ib])),
                    (l.join(a, b), cands[ia].join_unchecked(&cands[ib])),
                ] {
                    if let Some(it) = images[target] {
                        if ctx.index.get(&value) != Some(&it) {
                            continue 'cand;
                        }
                    }
                }
            }
        }
        if search(ctx, depth + 1, images)? {
            return Ok(true);
        }
    }
    images[e] = None;
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    const DIAMOND: &str = "elements 0 a b c 1\ncover 0 a\ncover 0 b\ncover 0 c\ncover a 1\ncover b 1\ncover c 1\n";

    #[test]
    fn chain_of_two() {
        let l = FiniteLattice::parse("elements lo hi\ncover lo hi\n").unwrap();
        let r = represent(&l, MAX_M, 1_000_000).unwrap();
        assert!(r.images[0].leq(&r.images[1]).unwrap());
        assert_ne!(r.images[0], r.images[1]);
    }

    #[test]
    fn diamond_goes_to_equ3() {
        let l = FiniteLattice::parse(DIAMOND).unwrap();
        let r = represent(&l, MAX_M, 1_000_000).unwrap();
        assert_eq!(r.m, 3);
        assert!(r.images[0].is_bottom());
        assert!(r.images[4].is_top());
        for i in 1..4 {
            assert_eq!(r.images[i].block_count(), 2);
        }
    }

    #[test]
    fn pentagon_is_represented() {
        let l = FiniteLattice::parse(
            "elements 0 a b c 1\ncover 0 a\ncover a b\ncover b 1\ncover 0 c\ncover c 1\n",
        )
        .unwrap();
        let r = represent(&l, MAX_M, 1_000_000).unwrap();
        for a in 0..5 {
            for b in 0..5 {
                assert_eq!(r.images[a].meet(&r.images[b]).unwrap(), r.images[l.meet(a, b)]);
                assert_eq!(r.images[a].join(&r.images[b]).unwrap(), r.images[l.join(a, b)]);
            }
        }
    }

    #[test]
    fn rejects_nine_elements() {
        let names: Vec<String> = (0..9).map(|i| i.to_string()).collect();
        let covers: Vec<(usize, usize)> = (0..8).map(|i| (i, i + 1)).collect();
        assert!(matches!(
            FiniteLattice::from_covers(names, &covers),
            Err(Error::TooLarge { n: 9, max: 8 })
        ));
    }

    #[test]
    fn rejects_non_lattices() {
        // two maximal elements
        assert!(matches!(
            FiniteLattice::parse("elements 0 a b\ncover 0 a\ncover 0 b\n"),
            Err(Error::NotALattice(_))
        ));
        assert!(matches!(
            FiniteLattice::parse("elements a b\ncover a b\ncover b a\n"),
            Err(Error::NotALattice(_))
        ));
        assert!(FiniteLattice::parse("elements a\ncover a z\n").is_err());
    }
}
