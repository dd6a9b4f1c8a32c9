//! The four ternary terms, their stage-two refinement, and finite sublattice
//! generation by saturation.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::partition::Partition;

/// Names the four relations of a generator quadruple and the matching gadgets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    Alpha,
    Beta,
    Gamma,
    Delta,
}

impl Letter {
    pub const ALL: [Letter; 4] = [Letter::Alpha, Letter::Beta, Letter::Gamma, Letter::Delta];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Letter::Alpha => "alpha",
            Letter::Beta => "beta",
            Letter::Gamma => "gamma",
            Letter::Delta => "delta",
        }
    }

    /// Image under the y-z symmetry.
    pub fn mirror(self) -> Letter {
        match self {
            Letter::Alpha => Letter::Beta,
            Letter::Beta => Letter::Alpha,
            Letter::Gamma => Letter::Delta,
            Letter::Delta => Letter::Gamma,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Letter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "alpha" => Ok(Letter::Alpha),
            "beta" => Ok(Letter::Beta),
            "gamma" => Ok(Letter::Gamma),
            "delta" => Ok(Letter::Delta),
            _ => Err(Error::UnknownGadget(s.to_string())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Stage {
    One,
    Two,
}

impl Stage {
    fn name(self) -> &'static str {
        match self {
            Stage::One => "stage1",
            Stage::Two => "stage2",
        }
    }
}

/// Values of the four terms at some `(x, y, z)`, tagged with the stage.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HQuadruple {
    h: [Partition; 4],
    stage: Stage,
}

impl HQuadruple {
    pub fn stage(&self) -> Stage {
        self.stage
    }

    pub fn get(&self, letter: Letter) -> &Partition {
        &self.h[letter.index()]
    }

    pub fn as_array(&self) -> &[Partition; 4] {
        &self.h
    }

    pub fn to_vec(&self) -> Vec<Partition> {
        self.h.to_vec()
    }

    pub fn len(&self) -> usize {
        self.h[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.h[0].is_empty()
    }
}

fn same_size(parts: &[&Partition]) -> Result<usize> {
    let n = parts[0].len();
    for p in &parts[1..] {
        if p.len() != n {
            return Err(Error::SizeMismatch {
                left: n,
                right: p.len(),
            });
        }
    }
    Ok(n)
}

/// Evaluates the four ternary terms at `(x, y, z)`.
pub fn eval_h1(x: &Partition, y: &Partition, z: &Partition) -> Result<HQuadruple> {
    same_size(&[x, y, z])?;
    let yz_join = y.join_unchecked(z);
    let xz_join = x.join_unchecked(z);
    let xy_join = x.join_unchecked(y);
    let yz_meet = y.meet_unchecked(z);
    let xz_meet = x.meet_unchecked(z);
    let xy_meet = x.meet_unchecked(y);

    let sigma1 = x.meet_unchecked(&yz_join);
    let h_alpha = sigma1.join_unchecked(&y.meet_unchecked(&xz_join));
    let h_beta = sigma1.join_unchecked(&z.meet_unchecked(&xy_join));
    let h_gamma = x
        .join_unchecked(&yz_meet)
        .meet_unchecked(&y.join_unchecked(&xz_meet));
    let h_delta = x
        .join_unchecked(&yz_meet)
        .meet_unchecked(&z.join_unchecked(&xy_meet));
    Ok(HQuadruple {
        h: [h_alpha, h_beta, h_gamma, h_delta],
        stage: Stage::One,
    })
}

/// Meets every stage-one value with `h_gamma v h_delta`.
pub fn eval_h2(h1: &HQuadruple) -> Result<HQuadruple> {
    if h1.stage != Stage::One {
        return Err(Error::WrongStage {
            expected: Stage::One.name(),
            found: h1.stage.name(),
        });
    }
    let gd = h1.h[2].join_unchecked(&h1.h[3]);
    Ok(HQuadruple {
        h: [
            h1.h[0].meet_unchecked(&gd),
            h1.h[1].meet_unchecked(&gd),
            h1.h[2].meet_unchecked(&gd),
            h1.h[3].meet_unchecked(&gd),
        ],
        stage: Stage::Two,
    })
}

/// The named ternary terms that gadget block lists refer to.
///
/// The set is closed under the y-z symmetry so that specs for one gadget
/// can be mirrored onto its partner.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    YJoinZ,
    XJoinZ,
    XJoinY,
    /// `x * (y + z)`
    Sigma1,
    /// `y * (x + z)`
    Sigma2,
    /// `z * (x + y)`
    Sigma2Mirror,
    XJoinYMeetZ,
    YJoinXMeetZ,
    ZJoinXMeetY,
    H(Letter, Stage),
}

impl Term {
    pub fn stage(self) -> Stage {
        match self {
            Term::H(_, s) => s,
            _ => Stage::One,
        }
    }

    pub fn mirror(self) -> Term {
        match self {
            Term::XJoinZ => Term::XJoinY,
            Term::XJoinY => Term::XJoinZ,
            Term::Sigma2 => Term::Sigma2Mirror,
            Term::Sigma2Mirror => Term::Sigma2,
            Term::YJoinXMeetZ => Term::ZJoinXMeetY,
            Term::ZJoinXMeetY => Term::YJoinXMeetZ,
            Term::H(l, s) => Term::H(l.mirror(), s),
            t => t,
        }
    }

    pub fn eval(self, x: &Partition, y: &Partition, z: &Partition) -> Result<Partition> {
        same_size(&[x, y, z])?;
        Ok(match self {
            Term::YJoinZ => y.join_unchecked(z),
            Term::XJoinZ => x.join_unchecked(z),
            Term::XJoinY => x.join_unchecked(y),
            Term::Sigma1 => x.meet_unchecked(&y.join_unchecked(z)),
            Term::Sigma2 => y.meet_unchecked(&x.join_unchecked(z)),
            Term::Sigma2Mirror => z.meet_unchecked(&x.join_unchecked(y)),
            Term::XJoinYMeetZ => x.join_unchecked(&y.meet_unchecked(z)),
            Term::YJoinXMeetZ => y.join_unchecked(&x.meet_unchecked(z)),
            Term::ZJoinXMeetY => z.join_unchecked(&x.meet_unchecked(y)),
            Term::H(l, Stage::One) => eval_h1(x, y, z)?.get(l).clone(),
            Term::H(l, Stage::Two) => eval_h2(&eval_h1(x, y, z)?)?.get(l).clone(),
        })
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Term::YJoinZ => "y+z",
            Term::XJoinZ => "x+z",
            Term::XJoinY => "x+y",
            Term::Sigma1 => "x*(y+z)",
            Term::Sigma2 => "y*(x+z)",
            Term::Sigma2Mirror => "z*(x+y)",
            Term::XJoinYMeetZ => "x+(y*z)",
            Term::YJoinXMeetZ => "y+(x*z)",
            Term::ZJoinXMeetY => "z+(x*y)",
            Term::H(l, s) => {
                let k = if *s == Stage::One { 1 } else { 2 };
                return write!(f, "h_{}{k}", l.name());
            }
        };
        f.write_str(s)
    }
}

impl FromStr for Term {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = match s {
            "y+z" | "z+y" => Term::YJoinZ,
            "x+z" | "z+x" => Term::XJoinZ,
            "x+y" | "y+x" => Term::XJoinY,
            "x*(y+z)" | "sigma1" => Term::Sigma1,
            "y*(x+z)" | "sigma2" => Term::Sigma2,
            "z*(x+y)" => Term::Sigma2Mirror,
            "x+(y*z)" => Term::XJoinYMeetZ,
            "y+(x*z)" => Term::YJoinXMeetZ,
            "z+(x*y)" => Term::ZJoinXMeetY,
            _ => {
                let rest = s
                    .strip_prefix("h_")
                    .ok_or_else(|| Error::UnknownTerm(s.to_string()))?;
                let (name, stage) = match rest.strip_suffix('1') {
                    Some(name) => (name, Stage::One),
                    None => match rest.strip_suffix('2') {
                        Some(name) => (name, Stage::Two),
                        None => return Err(Error::UnknownTerm(s.to_string())),
                    },
                };
                let letter = name
                    .parse::<Letter>()
                    .map_err(|_| Error::UnknownTerm(s.to_string()))?;
                Term::H(letter, stage)
            }
        };
        Ok(t)
    }
}

/// A finite sublattice of some `Equ(n)` together with how it was generated.
#[derive(Clone, Debug)]
pub struct SublatticeResult {
    /// Distinct elements in deterministic discovery order; generators come first.
    pub elements: Vec<Partition>,
    pub generators: Vec<Partition>,
    /// Number of saturation layers that produced new elements.
    pub rounds: usize,
    /// Set when the element cap stopped saturation early.
    pub capped: bool,
}

impl SublatticeResult {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, p: &Partition) -> bool {
        self.elements.contains(p)
    }

    pub fn index_map(&self) -> HashMap<&Partition, usize> {
        self.elements.iter().enumerate().map(|(i, p)| (p, i)).collect()
    }
}

pub const DEFAULT_CAP: usize = 1_000_000;

/// Rows of the pair triangle handed to one rayon task.
const CHUNK_ROWS: usize = 16;

/// Least set containing `gens` and closed under binary meet and join.
///
/// Saturation proceeds in layers: layer `k` holds the products of pairs in
/// which at least one factor is from layer `k-1`. Products are computed in
/// parallel but merged in sequential `(i, j, meet, join)` order, so the
/// element order does not depend on scheduling.
pub fn closure(gens: &[Partition], cap: usize) -> Result<SublatticeResult> {
    if cap == 0 {
        return Err(Error::ZeroCap);
    }
    if gens.is_empty() {
        return Err(Error::NoGenerators);
    }
    let refs: Vec<&Partition> = gens.iter().collect();
    same_size(&refs)?;

    let mut elements: Vec<Partition> = Vec::new();
    let mut seen: HashSet<Partition> = HashSet::new();
    for g in gens {
        if seen.insert(g.clone()) {
            elements.push(g.clone());
        }
    }
    if elements.len() > cap {
        elements.truncate(cap);
        return Ok(SublatticeResult {
            elements,
            generators: gens.to_vec(),
            rounds: 0,
            capped: true,
        });
    }

    let mut rounds = 0;
    let mut start = 0;
    let mut capped = false;
    'layers: while start < elements.len() {
        let end = elements.len();
        let rows: Vec<usize> = (start..end).collect();
        let fresh: Vec<Vec<Partition>> = rows
            .par_chunks(CHUNK_ROWS)
            .map(|chunk| {
                let mut local = Vec::new();
                let mut local_seen = HashSet::new();
                for &i in chunk {
                    let a = &elements[i];
                    for b in &elements[..i] {
                        for c in [a.meet_unchecked(b), a.join_unchecked(b)] {
                            if !seen.contains(&c) && local_seen.insert(c.clone()) {
                                local.push(c);
                            }
                        }
                    }
                }
                local
            })
            .collect();
        let mut grew = false;
        for c in fresh.into_iter().flatten() {
            if seen.insert(c.clone()) {
                elements.push(c);
                grew = true;
                if elements.len() > cap {
                    elements.pop();
                    capped = true;
                    rounds += 1;
                    break 'layers;
                }
            }
        }
        if grew {
            rounds += 1;
        }
        start = end;
    }

    Ok(SublatticeResult {
        elements,
        generators: gens.to_vec(),
        rounds,
        capped,
    })
}

/// Independent cross-check for [`closure`]: all values of lattice terms of
/// rank at most `depth` in the generators.
///
/// Works on explicit boolean relation matrices with Warshall transitive
/// closure and shares no code with [`Partition`]'s operations; intended for
/// small instances only.
pub fn term_reachability_oracle(gens: &[Partition], depth: usize) -> BTreeSet<Partition> {
    type Matrix = Vec<Vec<bool>>;

    fn to_matrix(p: &Partition) -> Matrix {
        let n = p.len();
        (0..n)
            .map(|i| (0..n).map(|j| p.rep()[i] == p.rep()[j]).collect())
            .collect()
    }

    fn from_matrix(m: &Matrix) -> Partition {
        let n = m.len();
        let rep = (0..n)
            .map(|i| (0..n).find(|&j| m[i][j]).unwrap_or(i) as u32)
            .collect();
        Partition::from_rep(rep).expect("equivalence matrix yields canonical reps")
    }

    fn meet(a: &Matrix, b: &Matrix) -> Matrix {
        a.iter()
            .zip(b)
            .map(|(ra, rb)| ra.iter().zip(rb).map(|(&x, &y)| x && y).collect())
            .collect()
    }

    fn join(a: &Matrix, b: &Matrix) -> Matrix {
        let n = a.len();
        let mut m: Matrix = a
            .iter()
            .zip(b)
            .map(|(ra, rb)| ra.iter().zip(rb).map(|(&x, &y)| x || y).collect())
            .collect();
        for k in 0..n {
            for i in 0..n {
                if m[i][k] {
                    for j in 0..n {
                        if m[k][j] {
                            m[i][j] = true;
                        }
                    }
                }
            }
        }
        m
    }

    let mut level: BTreeSet<Vec<Vec<bool>>> = gens.iter().map(to_matrix).collect();
    for _ in 0..depth {
        let current: Vec<Matrix> = level.iter().cloned().collect();
        let mut next = level.clone();
        for a in &current {
            for b in &current {
                next.insert(meet(a, b));
                next.insert(join(a, b));
            }
        }
        if next.len() == level.len() {
            break;
        }
        level = next;
    }
    level.iter().map(from_matrix).collect()
}
