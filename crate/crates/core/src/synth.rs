//! Backtracking search for gadget templates that meet a set of block lists.
//!
//! Every term only sees the three color relations, never the individual
//! edges, so the search runs over triples `(x, y, z)` of partitions and
//! realizes each block as a path at the end. Gamma and delta are searched
//! on all ten vertices. Alpha and beta are searched on one six-vertex
//! segment for the even segments and one for the odd segments, the five
//! segments sharing their end hubs. Vertices are placed one at a time,
//! choosing a class in each of the three relations, and two kinds of
//! pruning keep this small:
//!
//! * pairwise rules read off the lists: `x` must refine `(x+y) * (x+z)`,
//!   and inside a block of `y+z` two vertices are `x`-related exactly when
//!   `x*(y+z)` relates them (likewise for `y` and `z`);
//! * terms are monotone in the edge set, so every term evaluated on the
//!   edges placed so far must lie below its expected value.

use crate::error::{Error, Result};
use crate::gadgets::{gadget_size, verify_gadget, BlockListSpec, GadgetTemplate};
use crate::graph::{Color, Edge};
use crate::partition::Partition;
use crate::terms::{Letter, Stage, Term};

/// Colors in nesting order of the option loops. The beta and delta orders
/// are the y-z images of the alpha and gamma orders, so mirrored lists lead
/// to mirrored solutions.
fn color_order(letter: Letter) -> [Color; 3] {
    match letter {
        Letter::Alpha | Letter::Gamma => [Color::X, Color::Y, Color::Z],
        Letter::Beta | Letter::Delta => [Color::X, Color::Z, Color::Y],
    }
}

/// Where the search variables live. Each class is a list of segments, each
/// segment a list of gadget vertices; local vertex `i` of a class stands for
/// vertex `segment[i]` of every segment in the class, so all segments of a
/// class get the same coloring.
struct Geometry {
    classes: Vec<Vec<Vec<usize>>>,
}

impl Geometry {
    fn for_letter(letter: Letter) -> Self {
        let n = gadget_size(letter);
        match letter {
            Letter::Gamma | Letter::Delta => Self {
                classes: vec![vec![(0..n).collect()]],
            },
            // five six-vertex segments sharing hubs; even and odd segments alternate
            Letter::Alpha | Letter::Beta => Self {
                classes: (0..2)
                    .map(|class| {
                        (0..5)
                            .filter(|s| s % 2 == class)
                            .map(|s| (5 * s..=5 * s + 5).collect())
                            .collect()
                    })
                    .collect(),
            },
        }
    }

    fn local_len(&self, class: usize) -> usize {
        self.classes[class][0].len()
    }
}

/// Pair rule for one color inside one class: `None` if free, otherwise the
/// required value of "related".
type Rule = Vec<Vec<Option<bool>>>;

/// Labels of the local vertices of one class, per color.
type Labels = [Vec<usize>; 3];

struct Search<'a> {
    letter: Letter,
    n: usize,
    order: [Color; 3],
    geometry: Geometry,
    specs: &'a [BlockListSpec],
    companion: Option<&'a GadgetTemplate>,
    /// Stage-one specs with their expected partitions, used for pruning.
    pruning: Vec<(Term, Partition)>,
    /// `rules[class][color]`
    rules: Vec<[Rule; 3]>,
    nodes: usize,
    budget: usize,
}

impl Search<'_> {
    /// Pair rules on the whole gadget.
    fn global_rules(n: usize, specs: &[(Term, Partition)]) -> [Rule; 3] {
        let find = |t: Term| specs.iter().find(|(s, _)| *s == t).map(|(_, p)| p);
        let top = Partition::top(n);
        // (the two joins containing the color, the join of the other two, the meet with it)
        let shape = [
            (Term::XJoinY, Term::XJoinZ, Term::YJoinZ, Term::Sigma1),
            (Term::XJoinY, Term::YJoinZ, Term::XJoinZ, Term::Sigma2),
            (Term::XJoinZ, Term::YJoinZ, Term::XJoinY, Term::Sigma2Mirror),
        ];
        shape.map(|(j1, j2, other, meet)| {
            let up1 = find(j1).unwrap_or(&top);
            let up2 = find(j2).unwrap_or(&top);
            let exact = find(other).zip(find(meet));
            let mut rule = vec![vec![None; n]; n];
            for (i, row) in rule.iter_mut().enumerate() {
                for (j, r) in row.iter_mut().enumerate() {
                    if !(up1.related(i, j) && up2.related(i, j)) {
                        *r = Some(false);
                    } else if let Some((k, m)) = exact {
                        if k.related(i, j) {
                            *r = Some(m.related(i, j));
                        }
                    }
                }
            }
            rule
        })
    }

    /// Local rules of a class. A local relation holds in every segment of
    /// the class, so "must not relate" carries over; "must relate" only
    /// carries over when the class is the whole gadget, since otherwise the
    /// relation may come from elsewhere.
    fn class_rules(global: &[Rule; 3], segments: &[Vec<usize>], whole: bool) -> [Rule; 3] {
        let len = segments[0].len();
        std::array::from_fn(|c| {
            let mut rule = vec![vec![None; len]; len];
            for (i, row) in rule.iter_mut().enumerate() {
                for (j, r) in row.iter_mut().enumerate() {
                    for seg in segments {
                        match global[c][seg[i]][seg[j]] {
                            Some(false) => *r = Some(false),
                            Some(true) if whole => *r = Some(true),
                            _ => {}
                        }
                    }
                }
            }
            rule
        })
    }

    /// Vertex sets joined by color `c`, given the labels placed so far.
    fn lifted(&self, labels: &[Labels], placed: &[usize], c: usize) -> Vec<Vec<usize>> {
        let mut sets = Vec::new();
        for (class, segments) in self.geometry.classes.iter().enumerate() {
            let lab = &labels[class][c][..placed[class]];
            let blocks = Partition::from_labels(lab).nontrivial_blocks();
            for seg in segments {
                for b in &blocks {
                    sets.push(b.iter().map(|&i| seg[i]).collect());
                }
            }
        }
        sets
    }

    fn template(&self, labels: &[Labels]) -> GadgetTemplate {
        let full: Vec<usize> = (0..self.geometry.classes.len()).map(|k| self.geometry.local_len(k)).collect();
        let mut edges = Vec::new();
        for (c, color) in Color::ALL.into_iter().enumerate() {
            for set in self.lifted(labels, &full, c) {
                edges.extend(set.windows(2).map(|w| Edge::new(w[0], w[1], color)));
            }
        }
        edges.sort();
        GadgetTemplate::new(self.letter, 0, self.n - 1, edges, None).expect("edges lie inside the gadget")
    }

    /// Checks the pair rules for local vertex `i` of `class` against earlier ones.
    fn pairs_ok(&self, labels: &Labels, class: usize, i: usize) -> bool {
        (0..3).all(|c| {
            (0..i).all(|j| match self.rules[class][c][i][j] {
                Some(forced) => (labels[c][i] == labels[c][j]) == forced,
                None => true,
            })
        })
    }

    /// Every pruning term on the edges placed so far lies below its expected value.
    fn partial_ok(&self, labels: &[Labels], placed: &[usize]) -> Result<bool> {
        let [x, y, z] = [0, 1, 2].map(|c| {
            Partition::collapse(self.n, &self.lifted(labels, placed, c)).expect("vertices in range")
        });
        for (t, e) in &self.pruning {
            if !t.eval(&x, &y, &z)?.leq_unchecked(e) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn run(
        &mut self,
        labels: &mut Vec<Labels>,
        placed: &mut Vec<usize>,
        counts: [usize; 3],
    ) -> Result<Option<GadgetTemplate>> {
        let Some(class) = (0..placed.len()).find(|&k| placed[k] < self.geometry.local_len(k)) else {
            let t = self.template(labels);
            let ok = verify_gadget(&t, self.specs, self.companion)?.all_passed();
            return Ok(ok.then_some(t));
        };
        let i = placed[class];
        // class labels restart at zero for each class
        let counts = if i == 0 { [0; 3] } else { counts };
        let idx = self.order.map(|c| c as usize);
        for a in 0..=counts[idx[0]] {
            for b in 0..=counts[idx[1]] {
                for c in 0..=counts[idx[2]] {
                    self.nodes += 1;
                    if self.nodes > self.budget {
                        return Err(Error::Exhausted);
                    }
                    let mut next = counts;
                    for (k, choice) in [a, b, c].into_iter().enumerate() {
                        labels[class][idx[k]][i] = choice;
                        if choice == counts[idx[k]] {
                            next[idx[k]] += 1;
                        }
                    }
                    if !self.pairs_ok(&labels[class], class, i) {
                        continue;
                    }
                    placed[class] += 1;
                    if self.partial_ok(labels, placed)? {
                        if let Some(t) = self.run(labels, placed, next)? {
                            return Ok(Some(t));
                        }
                    }
                    placed[class] -= 1;
                }
            }
        }
        Ok(None)
    }
}

/// Searches for a template of `letter` passing every spec in `specs`.
///
/// The first solution in search order is returned, so the output is
/// deterministic; each color class is realized as a path through its
/// vertices in increasing order. `budget` bounds the number of nodes
/// visited, and running out or exhausting the tree gives
/// [`Error::Exhausted`]. Stage-two specs for alpha and beta need the
/// companion template.
pub fn synth_gadget(
    letter: Letter,
    specs: &[BlockListSpec],
    budget: usize,
    companion: Option<&GadgetTemplate>,
) -> Result<GadgetTemplate> {
    if budget == 0 {
        return Err(Error::Exhausted);
    }
    let n = gadget_size(letter);
    let probe = GadgetTemplate::new(letter, 0, n - 1, Vec::new(), None)?;
    let mut pruning = Vec::new();
    for s in specs {
        if s.letter != letter {
            return Err(Error::InvalidGadget(format!(
                "spec for {} given to the {letter} search",
                s.letter
            )));
        }
        let e = s.expected(&probe)?;
        if s.term.stage() == Stage::One {
            pruning.push((s.term, e));
        }
    }
    let geometry = Geometry::for_letter(letter);
    let global = Search::global_rules(n, &pruning);
    let whole = geometry.classes.len() == 1 && geometry.classes[0].len() == 1;
    let rules = geometry
        .classes
        .iter()
        .map(|segments| Search::class_rules(&global, segments, whole))
        .collect();
    let mut labels: Vec<Labels> = (0..geometry.classes.len())
        .map(|k| std::array::from_fn(|_| vec![0; geometry.local_len(k)]))
        .collect();
    let mut placed = vec![0; geometry.classes.len()];
    let mut search = Search {
        letter,
        n,
        order: color_order(letter),
        geometry,
        specs,
        companion,
        pruning,
        rules,
        nodes: 0,
        budget,
    };
    search.run(&mut labels, &mut placed, [0; 3])?.ok_or(Error::Exhausted)
}
