//! Gadget templates, their restriction block lists, and the verifier.
//!
//! Gadgets are plain data. A template is checked by building a small
//! instance containing one copy, evaluating each listed term at the color
//! relations, and comparing the trace on the copy with the expected blocks.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;
use std::sync::OnceLock;

use crate::blowup::{assemble, kv, BlowupWitness};
use crate::error::{parse_err, Error, Result};
use crate::graph::{check_edges, color_relations, Color, Edge};
use crate::partition::{GroundMap, Partition};
use crate::terms::{eval_h1, eval_h2, HQuadruple, Letter, Stage, Term};

/// Vertex count of each gadget; the blow-up size formula depends on these.
pub fn gadget_size(letter: Letter) -> usize {
    match letter {
        Letter::Alpha | Letter::Beta => 26,
        Letter::Gamma | Letter::Delta => 10,
    }
}

/// Conventional labels: `a0..a25`, `b0..b25`, and
/// `u, c_dn1..4, c_up1..4, v` (resp. `d_`) for the small gadgets.
pub fn default_labels(letter: Letter) -> Vec<String> {
    match letter {
        Letter::Alpha => (0..26).map(|i| format!("a{i}")).collect(),
        Letter::Beta => (0..26).map(|i| format!("b{i}")).collect(),
        Letter::Gamma | Letter::Delta => {
            let p = if letter == Letter::Gamma { "c" } else { "d" };
            let mut v = vec!["u".to_string()];
            v.extend((1..=4).map(|i| format!("{p}_dn{i}")));
            v.extend((1..=4).map(|i| format!("{p}_up{i}")));
            v.push("v".to_string());
            v
        }
    }
}

/// Label of the y-z partner vertex.
pub fn mirror_label(label: &str) -> String {
    if let Some(r) = label.strip_prefix("c_") {
        format!("d_{r}")
    } else if let Some(r) = label.strip_prefix("d_") {
        format!("c_{r}")
    } else if let Some(r) = label.strip_prefix('a').filter(|r| r.parse::<u32>().is_ok()) {
        format!("b{r}")
    } else if let Some(r) = label.strip_prefix('b').filter(|r| r.parse::<u32>().is_ok()) {
        format!("a{r}")
    } else {
        label.to_string()
    }
}

/// One auxiliary graph with its two anchors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetTemplate {
    pub letter: Letter,
    pub vertex_count: usize,
    pub u: usize,
    pub v: usize,
    pub edges: Vec<Edge>,
    pub labels: Vec<String>,
}

impl GadgetTemplate {
    pub fn new(
        letter: Letter,
        u: usize,
        v: usize,
        edges: Vec<Edge>,
        labels: Option<Vec<String>>,
    ) -> Result<Self> {
        let vertex_count = gadget_size(letter);
        let labels = labels.unwrap_or_else(|| default_labels(letter));
        if labels.len() != vertex_count {
            return Err(Error::InvalidGadget(format!(
                "{letter}: {} labels for {vertex_count} vertices",
                labels.len()
            )));
        }
        if u == v {
            return Err(Error::InvalidGadget(format!("{letter}: anchors coincide")));
        }
        for a in [u, v] {
            if a >= vertex_count {
                return Err(Error::OutOfRange {
                    elem: a,
                    n: vertex_count,
                });
            }
        }
        check_edges(vertex_count, &edges)?;
        Ok(Self {
            letter,
            vertex_count,
            u,
            v,
            edges,
            labels,
        })
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        match label {
            "u" => return Ok(self.u),
            "v" => return Ok(self.v),
            _ => {}
        }
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel {
                gadget: self.letter.name().to_string(),
                label: label.to_string(),
            })
    }

    pub fn is_anchor(&self, i: usize) -> bool {
        i == self.u || i == self.v
    }

    /// `[x, y, z]` on the template's own vertices.
    pub fn relations(&self) -> [Partition; 3] {
        color_relations(self.vertex_count, &self.edges).expect("edges validated at construction")
    }

    /// Template of the partner letter obtained by exchanging colors Y and Z.
    /// Edges come out sorted.
    pub fn mirror(&self) -> GadgetTemplate {
        let mut edges: Vec<Edge> = self
            .edges
            .iter()
            .map(|e| Edge::new(e.a, e.b, e.color.mirror()))
            .collect();
        edges.sort();
        GadgetTemplate {
            letter: self.letter.mirror(),
            vertex_count: self.vertex_count,
            u: self.u,
            v: self.v,
            edges,
            labels: self.labels.iter().map(|l| mirror_label(l)).collect(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, l) in self.labels.iter().enumerate() {
            writeln!(out, "# {i}: {l}").unwrap();
        }
        writeln!(
            out,
            "gadget {} vertices={} u={} v={}",
            self.letter, self.vertex_count, self.u, self.v
        )
        .unwrap();
        for e in &self.edges {
            writeln!(out, "edge {} {} {}", e.a, e.b, e.color).unwrap();
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut header: Option<(Letter, usize, usize, usize)> = None;
        let mut labels: Vec<(usize, String)> = Vec::new();
        let mut edges = Vec::new();
        for (ln, raw) in text.lines().enumerate() {
            let ln = ln + 1;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                // label lines look like `# 3: c_dn3`; anything else is a comment
                if let Some((idx, label)) = rest.split_once(':') {
                    if let Ok(i) = idx.trim().parse::<usize>() {
                        let label = label.trim();
                        if !label.is_empty() && !label.contains(char::is_whitespace) {
                            labels.push((i, label.to_string()));
                        }
                    }
                }
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            match toks.as_slice() {
                ["gadget", name, vs, us, ws] => {
                    if header.is_some() {
                        return Err(parse_err(ln, "duplicate gadget header"));
                    }
                    let letter: Letter = name.parse().map_err(|e: Error| parse_err(ln, e.to_string()))?;
                    header = Some((letter, kv(vs, "vertices", ln)?, kv(us, "u", ln)?, kv(ws, "v", ln)?));
                }
                ["edge", a, b, c] => {
                    let a = a.parse().map_err(|_| parse_err(ln, format!("bad endpoint `{a}`")))?;
                    let b = b.parse().map_err(|_| parse_err(ln, format!("bad endpoint `{b}`")))?;
                    let c: Color = c.parse().map_err(|e: String| parse_err(ln, e))?;
                    edges.push(Edge::new(a, b, c));
                }
                _ => return Err(parse_err(ln, format!("unrecognised line `{line}`"))),
            }
        }
        let (letter, count, u, v) = header.ok_or_else(|| parse_err(0, "missing gadget header"))?;
        if count != gadget_size(letter) {
            return Err(Error::InvalidGadget(format!(
                "{letter} must have {} vertices, file says {count}",
                gadget_size(letter)
            )));
        }
        let labels = if labels.is_empty() {
            None
        } else {
            let mut table = vec![None; count];
            for (i, l) in labels {
                if i >= count {
                    return Err(Error::OutOfRange { elem: i, n: count });
                }
                table[i] = Some(l);
            }
            Some(
                table
                    .into_iter()
                    .enumerate()
                    .map(|(i, l)| {
                        l.ok_or_else(|| Error::InvalidGadget(format!("vertex {i} has no label")))
                    })
                    .collect::<Result<Vec<_>>>()?,
            )
        };
        Self::new(letter, u, v, edges, labels)
    }
}

/// Expected restriction blocks of one term on one gadget.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockListSpec {
    pub letter: Letter,
    pub term: Term,
    /// Non-singleton blocks, as vertex labels.
    pub blocks: Vec<Vec<String>>,
    pub perfect: bool,
}

impl BlockListSpec {
    pub fn mirror(&self) -> BlockListSpec {
        BlockListSpec {
            letter: self.letter.mirror(),
            term: self.term.mirror(),
            blocks: self
                .blocks
                .iter()
                .map(|b| b.iter().map(|l| mirror_label(l)).collect())
                .collect(),
            perfect: self.perfect,
        }
    }

    /// The expected restriction as a partition on template indices.
    pub fn expected(&self, t: &GadgetTemplate) -> Result<Partition> {
        let blocks = self
            .blocks
            .iter()
            .map(|b| b.iter().map(|l| t.index_of(l)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Partition::from_blocks(t.vertex_count, &blocks)
    }

    pub fn parse_all(text: &str) -> Result<Vec<Self>> {
        let mut out = Vec::new();
        let mut open: Option<(Letter, Term, Vec<Vec<String>>)> = None;
        for (ln, raw) in text.lines().enumerate() {
            let ln = ln + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            match toks.as_slice() {
                ["spec", name, term] => {
                    if open.is_some() {
                        return Err(parse_err(ln, "previous spec lacks a `perfect` line"));
                    }
                    let letter: Letter = name.parse().map_err(|e: Error| parse_err(ln, e.to_string()))?;
                    let term: Term = term.parse()?;
                    open = Some((letter, term, Vec::new()));
                }
                ["block", labels @ ..] => {
                    let (_, _, blocks) = open
                        .as_mut()
                        .ok_or_else(|| parse_err(ln, "`block` outside a spec"))?;
                    blocks.push(labels.iter().map(|s| s.to_string()).collect());
                }
                ["perfect", flag] => {
                    let perfect = match *flag {
                        "true" => true,
                        "false" => false,
                        _ => return Err(parse_err(ln, format!("bad perfect flag `{flag}`"))),
                    };
                    let (letter, term, blocks) = open
                        .take()
                        .ok_or_else(|| parse_err(ln, "`perfect` outside a spec"))?;
                    let mut seen = HashSet::new();
                    for l in blocks.iter().flatten() {
                        if !seen.insert(l.clone()) {
                            return Err(parse_err(ln, format!("label `{l}` listed twice")));
                        }
                    }
                    out.push(BlockListSpec {
                        letter,
                        term,
                        blocks,
                        perfect,
                    });
                }
                _ => return Err(parse_err(ln, format!("unrecognised line `{line}`"))),
            }
        }
        if open.is_some() {
            return Err(parse_err(0, "last spec lacks a `perfect` line"));
        }
        Ok(out)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("spec {} {}\n", self.letter, self.term);
        for b in &self.blocks {
            writeln!(out, "block {}", b.join(" ")).unwrap();
        }
        writeln!(out, "perfect {}", self.perfect).unwrap();
        out
    }
}

/// Result of checking one spec.
#[derive(Clone, Debug)]
pub struct SpecOutcome {
    pub term: Term,
    pub passed: bool,
    /// Observed non-singleton blocks, as labels.
    pub observed: Vec<Vec<String>>,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct GadgetReport {
    pub letter: Letter,
    pub outcomes: Vec<SpecOutcome>,
}

impl GadgetReport {
    pub fn all_passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }

    pub fn failures(&self) -> usize {
        self.outcomes.iter().filter(|o| !o.passed).count()
    }
}

/// How the anchors' mutual relation is treated when comparing a trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum AnchorMode {
    /// The expected list is compared literally.
    Strict,
    /// An anchors-only block `{u, v}` in the list is ignored and `u`, `v`
    /// are merged exactly when the full relation relates them.
    FollowInstance,
}

/// Compares the trace of `value` on one copy with `expected`.
pub(crate) fn compare_trace(
    value: &Partition,
    table: &[usize],
    t: &GadgetTemplate,
    expected: &Partition,
    perfect: bool,
    mode: AnchorMode,
) -> std::result::Result<(), String> {
    let map = GroundMap::new(value.len(), table.to_vec()).map_err(|e| e.to_string())?;
    let trace = value.restrict(&map).map_err(|e| e.to_string())?;
    let target = match mode {
        AnchorMode::Strict => expected.clone(),
        AnchorMode::FollowInstance => {
            let mut blocks = expected.blocks();
            blocks.retain(|b| !(b.len() == 2 && t.is_anchor(b[0]) && t.is_anchor(b[1])));
            let mut sets: Vec<Vec<usize>> = blocks;
            if value.related(table[t.u], table[t.v]) {
                sets.push(vec![t.u, t.v]);
            }
            Partition::collapse(t.vertex_count, &sets).map_err(|e| e.to_string())?
        }
    };
    if trace != target {
        return Err(format!(
            "observed {} expected {}",
            label_blocks(&trace, t)
                .iter()
                .map(|b| b.join(" "))
                .collect::<Vec<_>>()
                .join(" | "),
            label_blocks(&target, t)
                .iter()
                .map(|b| b.join(" "))
                .collect::<Vec<_>>()
                .join(" | ")
        ));
    }
    if perfect {
        let mut full_size = vec![0usize; value.len()];
        for i in 0..value.len() {
            full_size[value.rep_of(i)] += 1;
        }
        for block in trace.blocks() {
            if block.iter().any(|&i| t.is_anchor(i)) {
                continue;
            }
            let rep = value.rep_of(table[block[0]]);
            if full_size[rep] != block.len() {
                return Err(format!(
                    "block {{{}}} is not a full block of the unrestricted relation",
                    block
                        .iter()
                        .map(|&i| t.labels[i].as_str())
                        .collect::<Vec<_>>()
                        .join(" ")
                ));
            }
        }
    }
    Ok(())
}

fn label_blocks(p: &Partition, t: &GadgetTemplate) -> Vec<Vec<String>> {
    p.nontrivial_blocks()
        .into_iter()
        .map(|b| b.into_iter().map(|i| t.labels[i].clone()).collect())
        .collect()
}

/// The letters that hold the top relation in the instance used to check
/// a spec of `letter` at `stage`.
fn instance_letters(letter: Letter, stage: Stage) -> Vec<Letter> {
    match (stage, letter) {
        (Stage::One, l) => vec![l],
        (Stage::Two, Letter::Alpha) => vec![Letter::Alpha, Letter::Gamma],
        (Stage::Two, Letter::Beta) => vec![Letter::Beta, Letter::Delta],
        (Stage::Two, l) => vec![l],
    }
}

/// The letter whose template a stage-two check of `letter` needs besides its own.
pub fn companion_letter(letter: Letter) -> Option<Letter> {
    match letter {
        Letter::Alpha => Some(Letter::Gamma),
        Letter::Beta => Some(Letter::Delta),
        _ => None,
    }
}

/// Two-element base set with the given letters set to the top relation.
fn instance(
    template: &GadgetTemplate,
    companion: Option<&GadgetTemplate>,
    stage: Stage,
) -> Result<BlowupWitness> {
    let letters = instance_letters(template.letter, stage);
    let mut relations: [Partition; 4] = std::array::from_fn(|_| Partition::bottom(2));
    let mut templates: [Option<&GadgetTemplate>; 4] = [None; 4];
    for &l in &letters {
        relations[l.index()] = Partition::top(2);
        if l == template.letter {
            templates[l.index()] = Some(template);
        } else {
            let c = companion.filter(|c| c.letter == l).ok_or_else(|| {
                Error::InvalidGadget(format!(
                    "stage-two check of {} needs the {l} template",
                    template.letter
                ))
            })?;
            templates[l.index()] = Some(c);
        }
    }
    assemble(&relations, templates)
}

/// Checks every spec against `template`.
///
/// Stage-one specs use the instance with a single copy of the gadget on a
/// two-element base set. Stage-two specs for alpha (beta) use the instance
/// that also carries a gamma (delta) copy on the same pair, so that the join
/// hypotheses hold; `companion` supplies that template.
pub fn verify_gadget(
    template: &GadgetTemplate,
    specs: &[BlockListSpec],
    companion: Option<&GadgetTemplate>,
) -> Result<GadgetReport> {
    let mut cached: [Option<Instance>; 2] = [None, None];
    let mut outcomes = Vec::with_capacity(specs.len());
    for spec in specs {
        if spec.letter != template.letter {
            return Err(Error::InvalidGadget(format!(
                "spec for {} checked against the {} template",
                spec.letter, template.letter
            )));
        }
        let stage = spec.term.stage();
        let slot = (stage == Stage::Two) as usize;
        if cached[slot].is_none() {
            cached[slot] = Some(Instance::new(
                instance(template, companion, stage)?,
                template.letter,
            ));
        }
        let inst = cached[slot].as_mut().expect("filled above");
        let value = inst.eval(spec.term)?;
        let expected = spec.expected(template)?;
        let verdict = compare_trace(
            &value,
            &inst.table,
            template,
            &expected,
            spec.perfect,
            AnchorMode::Strict,
        );
        let trace = value.restrict(&GroundMap::new(inst.size, inst.table.clone())?)?;
        outcomes.push(SpecOutcome {
            term: spec.term,
            passed: verdict.is_ok(),
            observed: label_blocks(&trace, template),
            detail: verdict.err().unwrap_or_default(),
        });
    }
    Ok(GadgetReport {
        letter: template.letter,
        outcomes,
    })
}

/// Color relations of one instance with the `h` values computed on demand.
struct Instance {
    size: usize,
    /// Where the checked gadget's vertices sit.
    table: Vec<usize>,
    xyz: [Partition; 3],
    h1: Option<HQuadruple>,
    h2: Option<HQuadruple>,
}

impl Instance {
    fn new(witness: BlowupWitness, letter: Letter) -> Self {
        let table = witness
            .copies
            .iter()
            .find(|c| c.letter == letter)
            .expect("instance holds a copy of the gadget")
            .table
            .clone();
        let xyz = witness.graph.relations();
        Self {
            size: witness.size(),
            table,
            xyz,
            h1: None,
            h2: None,
        }
    }

    fn eval(&mut self, term: Term) -> Result<Partition> {
        let [x, y, z] = &self.xyz;
        let Term::H(l, stage) = term else {
            return term.eval(x, y, z);
        };
        if self.h1.is_none() {
            self.h1 = Some(eval_h1(x, y, z)?);
        }
        let h1 = self.h1.as_ref().expect("filled above");
        if stage == Stage::One {
            return Ok(h1.get(l).clone());
        }
        if self.h2.is_none() {
            self.h2 = Some(eval_h2(h1)?);
        }
        Ok(self.h2.as_ref().expect("filled above").get(l).clone())
    }
}

/// Re-checks the block lists on every copy inside an arbitrary blow-up.
///
/// Anchor-to-anchor relations depend on the rest of the blow-up, so they are
/// taken from the instance; everything else, including perfectness, must
/// match the lists. Stage-two lists are only meaningful when the join
/// hypotheses hold, which the caller signals with `hypotheses_hold`.
/// Returns one message per mismatch.
pub fn check_lists_in_blowup(
    w: &BlowupWitness,
    gadgets: &GadgetSet,
    hypotheses_hold: bool,
) -> Result<Vec<String>> {
    let [x, y, z] = w.graph.relations();
    let mut values: Vec<(Term, Partition)> = Vec::new();
    let mut failures = Vec::new();
    for spec in gadgets.specs() {
        if spec.term.stage() == Stage::Two && !hypotheses_hold {
            continue;
        }
        let value = match values.iter().find(|(t, _)| *t == spec.term) {
            Some((_, v)) => v.clone(),
            None => {
                let v = spec.term.eval(&x, &y, &z)?;
                values.push((spec.term, v.clone()));
                v
            }
        };
        let t = gadgets.template(spec.letter);
        let expected = spec.expected(t)?;
        for copy in w.copies.iter().filter(|c| c.letter == spec.letter) {
            if let Err(msg) = compare_trace(
                &value,
                &copy.table,
                t,
                &expected,
                spec.perfect,
                AnchorMode::FollowInstance,
            ) {
                failures.push(format!(
                    "{} copy on ({}, {}), {}: {msg}",
                    copy.letter, copy.pair.0, copy.pair.1, spec.term
                ));
            }
        }
    }
    Ok(failures)
}

/// The four templates with their block lists.
#[derive(Clone, Debug)]
pub struct GadgetSet {
    templates: [GadgetTemplate; 4],
    specs: Vec<BlockListSpec>,
    verified: bool,
}

const BUILTIN_GADGETS: [&str; 4] = [
    include_str!("../data/gadgets/alpha.gadget"),
    include_str!("../data/gadgets/beta.gadget"),
    include_str!("../data/gadgets/gamma.gadget"),
    include_str!("../data/gadgets/delta.gadget"),
];

const BUILTIN_SPECS: [&str; 4] = [
    include_str!("../data/gadgets/alpha.spec"),
    include_str!("../data/gadgets/beta.spec"),
    include_str!("../data/gadgets/gamma.spec"),
    include_str!("../data/gadgets/delta.spec"),
];

impl GadgetSet {
    /// Unverified set; `templates` may be given in any order.
    pub fn new(templates: Vec<GadgetTemplate>, specs: Vec<BlockListSpec>) -> Result<Self> {
        let mut slots: [Option<GadgetTemplate>; 4] = [None, None, None, None];
        for t in templates {
            let i = t.letter.index();
            if slots[i].is_some() {
                return Err(Error::InvalidGadget(format!("two templates for {}", t.letter)));
            }
            slots[i] = Some(t);
        }
        let mut out = Vec::with_capacity(4);
        for (l, s) in Letter::ALL.into_iter().zip(slots) {
            out.push(s.ok_or_else(|| Error::InvalidGadget(format!("missing {l} template")))?);
        }
        let templates: [GadgetTemplate; 4] = out.try_into().expect("exactly four");
        Ok(Self {
            templates,
            specs,
            verified: false,
        })
    }

    /// Parses `alpha.gadget` .. `delta.gadget` and every `*.spec` file in `dir`.
    pub fn load_dir(dir: &Path) -> std::io::Result<Result<Self>> {
        let mut templates = Vec::new();
        for l in Letter::ALL {
            let text = std::fs::read_to_string(dir.join(format!("{l}.gadget")))?;
            match GadgetTemplate::parse(&text) {
                Ok(t) => templates.push(t),
                Err(e) => return Ok(Err(e)),
            }
        }
        let mut spec_files: Vec<_> = std::fs::read_dir(dir)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "spec"))
            .collect();
        spec_files.sort();
        let mut specs = Vec::new();
        for p in spec_files {
            match BlockListSpec::parse_all(&std::fs::read_to_string(p)?) {
                Ok(s) => specs.extend(s),
                Err(e) => return Ok(Err(e)),
            }
        }
        Ok(Self::new(templates, specs))
    }

    /// The shipped gadgets, verified once per process.
    pub fn builtin() -> &'static GadgetSet {
        static SET: OnceLock<GadgetSet> = OnceLock::new();
        SET.get_or_init(|| {
            let templates = BUILTIN_GADGETS
                .iter()
                .map(|s| GadgetTemplate::parse(s))
                .collect::<Result<Vec<_>>>()
                .expect("shipped gadget files parse");
            let specs = BUILTIN_SPECS
                .iter()
                .map(|s| BlockListSpec::parse_all(s))
                .collect::<Result<Vec<_>>>()
                .expect("shipped spec files parse")
                .into_iter()
                .flatten()
                .collect();
            let set = GadgetSet::new(templates, specs).expect("four shipped templates");
            let (set, reports) = set.verify().expect("shipped specs are well formed");
            assert!(
                reports.iter().all(GadgetReport::all_passed),
                "shipped gadgets fail their block lists: {reports:?}"
            );
            set
        })
    }

    /// Runs every spec; the returned set is marked verified iff all pass.
    pub fn verify(mut self) -> Result<(Self, Vec<GadgetReport>)> {
        let reports = self.reports()?;
        self.verified = reports.iter().all(GadgetReport::all_passed);
        Ok((self, reports))
    }

    pub fn reports(&self) -> Result<Vec<GadgetReport>> {
        Letter::ALL
            .into_iter()
            .map(|l| {
                let specs: Vec<BlockListSpec> = self.specs_for(l).cloned().collect();
                let companion = companion_letter(l).map(|c| self.template(c));
                verify_gadget(self.template(l), &specs, companion)
            })
            .collect()
    }

    pub fn into_unverified(mut self) -> Self {
        self.verified = false;
        self
    }

    pub fn is_verified(&self) -> bool {
        self.verified
    }

    pub fn templates(&self) -> &[GadgetTemplate; 4] {
        &self.templates
    }

    pub fn template(&self, l: Letter) -> &GadgetTemplate {
        &self.templates[l.index()]
    }

    pub fn specs(&self) -> &[BlockListSpec] {
        &self.specs
    }

    pub fn specs_for(&self, l: Letter) -> impl Iterator<Item = &BlockListSpec> {
        self.specs.iter().filter(move |s| s.letter == l)
    }

    /// Replaces one template; the result is unverified.
    pub fn with_template(&self, t: GadgetTemplate) -> Self {
        let mut out = self.clone();
        let i = t.letter.index();
        out.templates[i] = t;
        out.verified = false;
        out
    }
}

/// Every single-edge recoloring of `template` together with whether the
/// spec suite caught it. Used to measure how tightly the lists pin the gadget.
pub fn mutation_sweep(
    template: &GadgetTemplate,
    specs: &[BlockListSpec],
    companion: Option<&GadgetTemplate>,
) -> Result<Vec<(usize, Color, bool)>> {
    let mut out = Vec::new();
    for (k, e) in template.edges.iter().enumerate() {
        for c in Color::ALL {
            if c == e.color {
                continue;
            }
            let mut m = template.clone();
            m.edges[k].color = c;
            let caught = !verify_gadget(&m, specs, companion)?.all_passed();
            out.push((k, c, caught));
        }
    }
    Ok(out)
}
