//! Canonical partitions of `{0..n-1}` and the lattice operations of `Equ(n)`.
//!
//! A partition is stored as its representative sequence: `rep[i]` is the
//! smallest element of the block containing `i`. Two partitions are equal
//! exactly when their sequences are equal, which makes them cheap to hash
//! and compare inside the closure engine.

use std::fmt;

use crate::error::{parse_err, Error, Result};

/// An equivalence relation on `{0..n-1}` in minimum-representative form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    rep: Vec<u32>,
}

/// An injective map from `{0..from_n-1}` into `{0..to_n-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundMap {
    to_n: usize,
    img: Vec<u32>,
}

impl GroundMap {
    pub fn new(to_n: usize, img: Vec<usize>) -> Result<Self> {
        let mut hit = vec![false; to_n];
        for &t in &img {
            if t >= to_n {
                return Err(Error::OutOfRange { elem: t, n: to_n });
            }
            if hit[t] {
                return Err(Error::NotInjective(t));
            }
            hit[t] = true;
        }
        Ok(Self {
            to_n,
            img: img.into_iter().map(|t| t as u32).collect(),
        })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            to_n: n,
            img: (0..n as u32).collect(),
        }
    }

    /// The inclusion of `{0..from_n-1}` as the initial segment of `{0..to_n-1}`.
    pub fn prefix(from_n: usize, to_n: usize) -> Result<Self> {
        Self::new(to_n, (0..from_n).collect())
    }

    pub fn from_n(&self) -> usize {
        self.img.len()
    }

    pub fn to_n(&self) -> usize {
        self.to_n
    }

    pub fn image(&self, i: usize) -> usize {
        self.img[i] as usize
    }

    pub fn images(&self) -> impl Iterator<Item = usize> + '_ {
        self.img.iter().map(|&t| t as usize)
    }
}

/// Minimal union-find used by `join` and `collapse`.
struct Dsu {
    parent: Vec<u32>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n as u32).collect(),
        }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            if ra < rb {
                self.parent[rb as usize] = ra;
            } else {
                self.parent[ra as usize] = rb;
            }
        }
    }

    fn into_partition(mut self) -> Partition {
        let n = self.parent.len();
        // union by smaller root keeps every root the minimum of its class
        let rep = (0..n as u32).map(|i| self.find(i)).collect();
        Partition { rep }
    }
}

/// Turns an arbitrary labelling (`labels[i] < bound`) into canonical form.
fn canonical_from_labels(labels: impl Iterator<Item = usize>, bound: usize) -> Partition {
    let mut first = vec![u32::MAX; bound];
    let rep = labels
        .enumerate()
        .map(|(i, l)| {
            if first[l] == u32::MAX {
                first[l] = i as u32;
            }
            first[l]
        })
        .collect();
    Partition { rep }
}

impl Partition {
    /// The least partition: all singletons.
    pub fn bottom(n: usize) -> Self {
        Self {
            rep: (0..n as u32).collect(),
        }
    }

    /// The greatest partition: one block.
    pub fn top(n: usize) -> Self {
        Self { rep: vec![0; n] }
    }

    /// Builds a partition from disjoint blocks; unlisted elements stay singletons.
    pub fn from_blocks<B: AsRef<[usize]>>(n: usize, blocks: &[B]) -> Result<Self> {
        let mut owner = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            for &e in block.as_ref() {
                if e >= n {
                    return Err(Error::OutOfRange { elem: e, n });
                }
                if owner[e] != usize::MAX {
                    return Err(Error::BlockOverlap(e));
                }
                owner[e] = b;
            }
        }
        let k = blocks.len();
        Ok(canonical_from_labels(
            owner
                .iter()
                .enumerate()
                .map(|(i, &o)| if o == usize::MAX { k + i } else { o }),
            k + n,
        ))
    }

    /// Validates and wraps a representative sequence.
    pub fn from_rep(rep: Vec<u32>) -> Result<Self> {
        for (i, &r) in rep.iter().enumerate() {
            let r = r as usize;
            if r > i || rep[r] as usize != r {
                return Err(Error::NotCanonical(i));
            }
        }
        Ok(Self { rep })
    }

    /// Canonical partition from a block labelling such as a restricted growth string.
    pub fn from_labels(labels: &[usize]) -> Self {
        let bound = labels.iter().copied().max().map_or(0, |m| m + 1);
        canonical_from_labels(labels.iter().copied(), bound)
    }

    /// The least partition of `{0..n-1}` collapsing every listed set.
    /// Sets may overlap; elements must be `< n`.
    pub fn collapse<S: AsRef<[usize]>>(n: usize, sets: &[S]) -> Result<Self> {
        let mut dsu = Dsu::new(n);
        for set in sets {
            let set = set.as_ref();
            for &e in set {
                if e >= n {
                    return Err(Error::OutOfRange { elem: e, n });
                }
            }
            for w in set.windows(2) {
                dsu.union(w[0] as u32, w[1] as u32);
            }
        }
        Ok(dsu.into_partition())
    }

    pub fn len(&self) -> usize {
        self.rep.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rep.is_empty()
    }

    pub fn rep(&self) -> &[u32] {
        &self.rep
    }

    pub fn rep_of(&self, i: usize) -> usize {
        self.rep[i] as usize
    }

    pub fn related(&self, i: usize, j: usize) -> bool {
        self.rep[i] == self.rep[j]
    }

    pub fn is_bottom(&self) -> bool {
        self.rep.iter().enumerate().all(|(i, &r)| r as usize == i)
    }

    pub fn is_top(&self) -> bool {
        self.rep.iter().all(|&r| r == 0)
    }

    pub fn block_count(&self) -> usize {
        self.rep
            .iter()
            .enumerate()
            .filter(|&(i, &r)| r as usize == i)
            .count()
    }

    /// Blocks, each sorted, listed in order of their representatives.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut slot = vec![usize::MAX; self.len()];
        let mut out: Vec<Vec<usize>> = Vec::new();
        for (i, &r) in self.rep.iter().enumerate() {
            let r = r as usize;
            if r == i {
                slot[i] = out.len();
                out.push(vec![i]);
            } else {
                out[slot[r]].push(i);
            }
        }
        out
    }

    /// Blocks with at least two elements.
    pub fn nontrivial_blocks(&self) -> Vec<Vec<usize>> {
        self.blocks().into_iter().filter(|b| b.len() > 1).collect()
    }

    fn check_size(&self, other: &Self) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::SizeMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        Ok(())
    }

    pub fn meet(&self, other: &Self) -> Result<Self> {
        self.check_size(other)?;
        Ok(self.meet_unchecked(other))
    }

    pub fn join(&self, other: &Self) -> Result<Self> {
        self.check_size(other)?;
        Ok(self.join_unchecked(other))
    }

    pub fn leq(&self, other: &Self) -> Result<bool> {
        self.check_size(other)?;
        Ok(self.leq_unchecked(other))
    }

    pub(crate) fn meet_unchecked(&self, other: &Self) -> Self {
        let n = self.len();
        // Bucket elements by their `other` block (counting sort, stable), then
        // within one `other` block the `self` representative decides the meet block.
        let mut count = vec![0u32; n + 1];
        for &q in &other.rep {
            count[q as usize + 1] += 1;
        }
        for k in 0..n {
            count[k + 1] += count[k];
        }
        let mut order = vec![0u32; n];
        for (i, &q) in other.rep.iter().enumerate() {
            let slot = &mut count[q as usize];
            order[*slot as usize] = i as u32;
            *slot += 1;
        }
        let mut stamp = vec![u32::MAX; n];
        let mut first = vec![0u32; n];
        let mut rep = vec![0u32; n];
        for &i in &order {
            let q = other.rep[i as usize];
            let p = self.rep[i as usize] as usize;
            if stamp[p] != q {
                stamp[p] = q;
                first[p] = i;
            }
            rep[i as usize] = first[p];
        }
        Self { rep }
    }

    pub(crate) fn join_unchecked(&self, other: &Self) -> Self {
        let n = self.len();
        let mut dsu = Dsu::new(n);
        for i in 0..n as u32 {
            dsu.union(i, self.rep[i as usize]);
            dsu.union(i, other.rep[i as usize]);
        }
        dsu.into_partition()
    }

    pub(crate) fn leq_unchecked(&self, other: &Self) -> bool {
        self.rep
            .iter()
            .enumerate()
            .all(|(i, &r)| other.rep[i] == other.rep[r as usize])
    }

    /// Trace of `self` on the image of `map`, pulled back to `{0..map.from_n()-1}`.
    pub fn restrict(&self, map: &GroundMap) -> Result<Self> {
        if map.to_n() != self.len() {
            return Err(Error::SizeMismatch {
                left: self.len(),
                right: map.to_n(),
            });
        }
        Ok(canonical_from_labels(
            map.images().map(|t| self.rep[t] as usize),
            self.len(),
        ))
    }

    /// `self / theta` on the set of theta-blocks, numbered densely in
    /// increasing order of their representatives.
    pub fn quotient(&self, theta: &Self) -> Result<Self> {
        self.check_size(theta)?;
        if !theta.leq_unchecked(self) {
            return Err(Error::NotBelow);
        }
        let reps: Vec<usize> = (0..self.len())
            .filter(|&i| theta.rep[i] as usize == i)
            .collect();
        Ok(canonical_from_labels(
            reps.iter().map(|&r| self.rep[r] as usize),
            self.len(),
        ))
    }

    /// Index of the theta-block of `i` in the numbering used by [`Partition::quotient`].
    pub fn block_index(&self) -> Vec<usize> {
        let mut idx = vec![0usize; self.len()];
        let mut k = 0;
        for i in 0..self.len() {
            let r = self.rep[i] as usize;
            if r == i {
                idx[i] = k;
                k += 1;
            } else {
                idx[i] = idx[r];
            }
        }
        idx
    }

    /// Applies a permutation of the ground set: `i` is sent to `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        let n = self.len();
        let mut labels = vec![0usize; n];
        for i in 0..n {
            labels[perm[i]] = self.rep[i] as usize;
        }
        canonical_from_labels(labels.into_iter(), n)
    }

    /// Extends to `{0..n'-1}` by adding singleton blocks.
    pub fn pad(&self, new_n: usize) -> Self {
        let mut rep = self.rep.clone();
        rep.extend(self.len() as u32..new_n as u32);
        Self { rep }
    }

    /// Parses one line of the partition text format, e.g. `0 1 | 2 3`.
    pub fn parse_line(n: usize, line: &str) -> std::result::Result<Self, String> {
        let mut blocks = Vec::new();
        for chunk in line.split('|') {
            let block = chunk
                .split_whitespace()
                .map(|t| t.parse::<usize>().map_err(|_| format!("bad element `{t}`")))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            if !block.is_empty() {
                blocks.push(block);
            }
        }
        Self::from_blocks(n, &blocks).map_err(|e| e.to_string())
    }
}

/// Reads a header `n=<int>` followed by one partition per line.
/// Blank lines and lines starting with `#` are skipped.
pub fn parse_partition_list(text: &str) -> Result<(usize, Vec<Partition>)> {
    let mut n: Option<usize> = None;
    let mut parts = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let ln = ln + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match n {
            None => {
                let v = line
                    .strip_prefix("n=")
                    .and_then(|v| v.trim().parse().ok())
                    .ok_or_else(|| parse_err(ln, "expected header `n=<int>`"))?;
                n = Some(v);
            }
            Some(n) => parts.push(Partition::parse_line(n, line).map_err(|m| parse_err(ln, m))?),
        }
    }
    let n = n.ok_or_else(|| parse_err(0, "missing header `n=<int>`"))?;
    Ok((n, parts))
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, block) in self.blocks().iter().enumerate() {
            if k > 0 {
                f.write_str(" | ")?;
            }
            for (j, e) in block.iter().enumerate() {
                if j > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: usize, blocks: &[&[usize]]) -> Partition {
        Partition::from_blocks(n, blocks).unwrap()
    }

    #[test]
    fn from_blocks_examples() {
        assert_eq!(p(3, &[&[0, 1]]).rep(), &[0, 0, 2]);
        assert_eq!(p(3, &[]).rep(), &[0, 1, 2]);
        assert_eq!(p(4, &[&[0, 2], &[1, 3]]).rep(), &[0, 1, 0, 1]);
    }

    #[test]
    fn from_blocks_errors() {
        assert_eq!(
            Partition::from_blocks(3, &[vec![0, 1], vec![1, 2]]),
            Err(Error::BlockOverlap(1))
        );
        assert_eq!(
            Partition::from_blocks(3, &[vec![0, 3]]),
            Err(Error::OutOfRange { elem: 3, n: 3 })
        );
    }

    #[test]
    fn meet_examples() {
        let a = p(3, &[&[0, 1]]);
        let b = p(3, &[&[0, 2]]);
        assert!(a.meet(&b).unwrap().is_bottom());
        assert_eq!(
            p(4, &[&[0, 1, 2]]).meet(&p(4, &[&[0, 1], &[2, 3]])).unwrap(),
            p(4, &[&[0, 1]])
        );
        assert_eq!(a.meet(&Partition::top(3)).unwrap(), a);
    }

    #[test]
    fn join_examples() {
        let a = p(3, &[&[0, 1]]);
        let b = p(3, &[&[0, 2]]);
        assert!(a.join(&b).unwrap().is_top());
        assert_eq!(a.join(&Partition::bottom(3)).unwrap(), a);
        assert_eq!(
            p(4, &[&[0, 1]]).join(&p(4, &[&[2, 3]])).unwrap(),
            p(4, &[&[0, 1], &[2, 3]])
        );
    }

    #[test]
    fn size_mismatch() {
        let e = Partition::top(3).meet(&Partition::top(4)).unwrap_err();
        assert_eq!(e, Error::SizeMismatch { left: 3, right: 4 });
        assert!(Partition::top(3).join(&Partition::top(4)).is_err());
        assert!(Partition::top(3).leq(&Partition::top(4)).is_err());
    }

    #[test]
    fn leq_examples() {
        let a = p(3, &[&[0, 1]]);
        assert!(a.leq(&Partition::top(3)).unwrap());
        assert!(Partition::bottom(3).leq(&a).unwrap());
        assert!(!a.leq(&p(3, &[&[0, 2]])).unwrap());
    }

    #[test]
    fn restrict_examples() {
        let m = GroundMap::new(5, vec![3, 1]).unwrap();
        assert!(Partition::top(5).restrict(&m).unwrap().is_top());
        let q = p(5, &[&[0, 3], &[1, 2]]);
        assert_eq!(q.restrict(&GroundMap::identity(5)).unwrap(), q);
        let m = GroundMap::new(5, vec![0, 1, 4]).unwrap();
        assert!(q.restrict(&m).unwrap().is_bottom());
        let m = GroundMap::new(5, vec![2, 3, 0]).unwrap();
        assert_eq!(q.restrict(&m).unwrap(), p(3, &[&[1, 2]]));
    }

    #[test]
    fn ground_map_errors() {
        assert_eq!(GroundMap::new(3, vec![0, 0]), Err(Error::NotInjective(0)));
        assert_eq!(
            GroundMap::new(3, vec![5]),
            Err(Error::OutOfRange { elem: 5, n: 3 })
        );
    }

    #[test]
    fn quotient_examples() {
        let q = p(4, &[&[0, 3], &[1, 2]]);
        assert_eq!(q.quotient(&Partition::bottom(4)).unwrap(), q);
        let t = q.quotient(&q).unwrap();
        assert_eq!(t.len(), 2);
        assert!(t.is_bottom());
        let big = p(6, &[&[0, 1, 2, 3], &[4, 5]]);
        let theta = p(6, &[&[0, 1], &[2, 3]]);
        assert_eq!(big.quotient(&theta).unwrap(), p(4, &[&[0, 1], &[2, 3]]));
        assert_eq!(theta.quotient(&big), Err(Error::NotBelow));
    }

    #[test]
    fn blocks_examples() {
        assert_eq!(
            Partition::bottom(3).blocks(),
            vec![vec![0], vec![1], vec![2]]
        );
        assert_eq!(Partition::top(3).blocks(), vec![vec![0, 1, 2]]);
        assert_eq!(p(3, &[&[0, 1]]).blocks(), vec![vec![0, 1], vec![2]]);
    }

    #[test]
    fn collapse_merges_overlapping_sets() {
        let c = Partition::collapse(6, &[vec![0, 2], vec![2, 4], vec![1, 5]]).unwrap();
        assert_eq!(c, p(6, &[&[0, 2, 4], &[1, 5]]));
    }

    #[test]
    fn text_round_trip() {
        let q = p(5, &[&[0, 1], &[2, 3]]);
        assert_eq!(q.to_string(), "0 1 | 2 3 | 4");
        assert_eq!(Partition::parse_line(5, "0 1 | 2 3").unwrap(), q);
        assert!(Partition::parse_line(5, "0 x").is_err());
    }

    #[test]
    fn permute_and_pad() {
        let q = p(3, &[&[0, 1]]);
        assert_eq!(q.permute(&[2, 0, 1]), p(3, &[&[2, 0]]));
        assert_eq!(q.pad(4), p(4, &[&[0, 1]]));
    }
}
