//! Certificates for the embedding of `L0` into the sublattice generated by
//! `x1, y1, z1`, and the auxiliary checks on theta.

use std::collections::{HashMap, HashSet};
use std::fmt::{self, Write as _};

use rayon::prelude::*;

use crate::blowup::{build, theta, xyz, BlowupWitness};
use crate::error::{parse_err, Error, Result};
use crate::gadgets::GadgetSet;
use crate::genlib::{all_partitions, GeneratorQuadruple};
use crate::partition::{GroundMap, Partition};
use crate::terms::{closure, eval_h1, eval_h2, Letter, SublatticeResult};

/// `alpha0 <= gamma0 \/ delta0` and `beta0 <= gamma0 \/ delta0`.
pub fn check_join_conditions(q: &GeneratorQuadruple) -> bool {
    let gd = q.get(Letter::Gamma).join_unchecked(q.get(Letter::Delta));
    q.get(Letter::Alpha).leq_unchecked(&gd) && q.get(Letter::Beta).leq_unchecked(&gd)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaReport {
    /// The supplied theta equals the one induced by the construction.
    pub matches_construction: bool,
    /// (a) theta separates the base elements.
    pub separates_base: bool,
    /// (b) theta lies below every stage-two value.
    pub below_h2: bool,
    /// (c) whenever a stage-two value joins two distinct theta blocks,
    /// both of them contain a base element.
    pub joined_blocks_anchored: bool,
    pub detail: Vec<String>,
}

impl ThetaReport {
    pub fn passed(&self) -> bool {
        self.matches_construction && self.separates_base && self.below_h2 && self.joined_blocks_anchored
    }
}

/// Runs checks (a)-(c) for `theta` against the four stage-two values `h2`.
pub fn check_theta(w: &BlowupWitness, th: &Partition, h2: &[Partition; 4]) -> Result<ThetaReport> {
    if th.len() != w.size() {
        return Err(Error::SizeMismatch {
            left: w.size(),
            right: th.len(),
        });
    }
    let base: Vec<usize> = w.base_map.images().collect();
    let mut r = theta_checks(th, &base, h2)?;
    r.matches_construction = *th == theta(w);
    if !r.matches_construction {
        r.detail.push("theta differs from the construction".into());
    }
    Ok(r)
}

fn theta_checks(th: &Partition, base: &[usize], h2: &[Partition; 4]) -> Result<ThetaReport> {
    let mut detail = Vec::new();
    let restricted = th.restrict(&GroundMap::new(th.len(), base.to_vec())?)?;
    let separates_base = restricted.is_bottom();
    if !separates_base {
        detail.push(format!("theta relates base elements: {restricted}"));
    }

    let mut below_h2 = true;
    let mut joined_blocks_anchored = true;
    let bi = th.block_index();
    let mut anchored = vec![false; th.block_count()];
    for &b in base {
        anchored[bi[b]] = true;
    }
    for (l, h) in Letter::ALL.into_iter().zip(h2) {
        if !th.leq(h)? {
            below_h2 = false;
            detail.push(format!("theta is not below h_{l}2"));
        }
        // theta blocks met by each h block
        let mut groups: HashMap<usize, HashSet<usize>> = HashMap::new();
        for i in 0..h.len() {
            groups.entry(h.rep_of(i)).or_default().insert(bi[i]);
        }
        for (rep, g) in groups {
            if g.len() > 1 && g.iter().any(|&b| !anchored[b]) {
                joined_blocks_anchored = false;
                detail.push(format!(
                    "h_{l}2 block of {rep} joins {} theta blocks, not all holding a base element",
                    g.len()
                ));
            }
        }
    }
    Ok(ThetaReport {
        matches_construction: true,
        separates_base,
        below_h2,
        joined_blocks_anchored,
        detail,
    })
}

/// Pass/fail of each certificate check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdicts {
    pub join_conditions: bool,
    /// (i) each stage-two value restricts to its base relation.
    pub generators: bool,
    /// (ii) restriction is injective on `L2`.
    pub injective: bool,
    /// (iii) restriction preserves meets and joins on `L2`.
    pub homomorphism: bool,
    /// (iv) restriction maps `L2` onto `L0`.
    pub onto: bool,
    /// Quotient of each stage-two value by theta, traced on the base blocks.
    pub quotient: bool,
    pub theta: ThetaReport,
}

impl Verdicts {
    pub fn passed(&self) -> bool {
        self.join_conditions
            && self.generators
            && self.injective
            && self.homomorphism
            && self.onto
            && self.quotient
            && self.theta.passed()
    }

    fn lines(&self) -> [(&'static str, bool); 10] {
        [
            ("join_conditions", self.join_conditions),
            ("generators", self.generators),
            ("injective", self.injective),
            ("homomorphism", self.homomorphism),
            ("onto", self.onto),
            ("quotient", self.quotient),
            ("theta_construction", self.theta.matches_construction),
            ("theta_separates_base", self.theta.separates_base),
            ("theta_below_h2", self.theta.below_h2),
            ("theta_joined_anchored", self.theta.joined_blocks_anchored),
        ]
    }
}

#[derive(Clone, Debug)]
pub struct EmbeddingCertificate {
    pub a0_size: usize,
    pub b_size: usize,
    /// Base element `k` sits at vertex `base[k]`.
    pub base: Vec<usize>,
    pub generators: [Partition; 3],
    pub h2: [Partition; 4],
    pub theta: Partition,
    pub l0: SublatticeResult,
    pub l2: SublatticeResult,
    /// `(index in L2, index in L0)` for every element of `L2` whose trace lies in `L0`.
    pub pair_table: Vec<(usize, usize)>,
    pub verdicts: Verdicts,
}

impl EmbeddingCertificate {
    pub fn passed(&self) -> bool {
        self.verdicts.passed()
    }
}

/// Builds the blow-up of `quad` and certifies `L2 = <h2>` against `L0 = <quad>`.
pub fn check_embedding(
    quad: &GeneratorQuadruple,
    gadgets: &GadgetSet,
    cap: usize,
) -> Result<EmbeddingCertificate> {
    if !check_join_conditions(quad) {
        return Err(Error::JoinConditions);
    }
    let w = build(quad, gadgets)?;
    let [x, y, z] = xyz(&w);
    let h2 = eval_h2(&eval_h1(&x, &y, &z)?)?.as_array().clone();
    let th = theta(&w);
    let theta_report = check_theta(&w, &th, &h2)?;
    let base: Vec<usize> = w.base_map.images().collect();
    certify(quad.relations(), base, [x, y, z], h2, th, theta_report, cap)
}

/// Core of the certificate; shared with [`recheck`].
fn certify(
    eps0: &[Partition; 4],
    base: Vec<usize>,
    generators: [Partition; 3],
    h2: [Partition; 4],
    th: Partition,
    theta_report: ThetaReport,
    cap: usize,
) -> Result<EmbeddingCertificate> {
    let b = generators[0].len();
    let map = GroundMap::new(b, base.clone())?;
    let r = |p: &Partition| p.restrict(&map).expect("same ground set");

    let l0 = closure(eps0, cap)?;
    if l0.capped {
        return Err(Error::Capped(cap));
    }
    let l2 = closure(&h2, cap)?;
    if l2.capped {
        return Err(Error::Capped(cap));
    }

    let generators_ok = h2.iter().zip(eps0).all(|(h, e)| r(h) == *e);
    let traces: Vec<Partition> = l2.elements.par_iter().map(r).collect();
    let distinct: HashSet<&Partition> = traces.iter().collect();
    let injective = distinct.len() == traces.len();

    let l2_elems = &l2.elements;
    let homomorphism = (0..l2_elems.len()).into_par_iter().all(|i| {
        (i..l2_elems.len()).all(|j| {
            let (m, n) = (&l2_elems[i], &l2_elems[j]);
            r(&m.meet_unchecked(n)) == traces[i].meet_unchecked(&traces[j])
                && r(&m.join_unchecked(n)) == traces[i].join_unchecked(&traces[j])
        })
    });

    let l0_index = l0.index_map();
    let l0_set: HashSet<&Partition> = l0.elements.iter().collect();
    let onto = distinct == l0_set;
    let pair_table: Vec<(usize, usize)> = traces
        .iter()
        .enumerate()
        .filter_map(|(i, t)| l0_index.get(t).map(|&j| (i, j)))
        .collect();

    let quotient = quotient_check(&th, &base, &h2, eps0);

    let join_conditions = {
        let gd = eps0[2].join_unchecked(&eps0[3]);
        eps0[0].leq_unchecked(&gd) && eps0[1].leq_unchecked(&gd)
    };

    Ok(EmbeddingCertificate {
        a0_size: base.len(),
        b_size: b,
        base,
        generators,
        h2,
        theta: th,
        l0,
        l2,
        pair_table,
        verdicts: Verdicts {
            join_conditions,
            generators: generators_ok,
            injective,
            homomorphism,
            onto,
            quotient,
            theta: theta_report,
        },
    })
}

/// `h / theta`, traced on the theta blocks of the base elements, equals `eps0`.
fn quotient_check(th: &Partition, base: &[usize], h2: &[Partition; 4], eps0: &[Partition; 4]) -> bool {
    let bi = th.block_index();
    let Ok(map) = GroundMap::new(th.block_count(), base.iter().map(|&v| bi[v]).collect()) else {
        return false;
    };
    h2.iter().zip(eps0).all(|(h, e)| {
        h.quotient(th)
            .and_then(|q| q.restrict(&map))
            .is_ok_and(|t| t == *e)
    })
}

impl fmt::Display for EmbeddingCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

const H2_NAMES: [&str; 4] = ["h_alpha2", "h_beta2", "h_gamma2", "h_delta2"];
const XYZ_NAMES: [&str; 3] = ["x", "y", "z"];

fn pass(b: bool) -> &'static str {
    if b {
        "pass"
    } else {
        "fail"
    }
}

impl EmbeddingCertificate {
    /// Line-oriented dump: sizes and verdicts, then the generators, the
    /// stage-two values and theta as partitions of the blow-up, then the
    /// pair table.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "certificate a0={} b={}", self.a0_size, self.b_size).unwrap();
        writeln!(out, "l0 {}", self.l0.len()).unwrap();
        writeln!(out, "l2 {}", self.l2.len()).unwrap();
        for (name, ok) in self.verdicts.lines() {
            writeln!(out, "verdict {name} {}", pass(ok)).unwrap();
        }
        writeln!(out, "verdict overall {}", pass(self.passed())).unwrap();
        let base: Vec<String> = self.base.iter().map(|v| v.to_string()).collect();
        writeln!(out, "base {}", base.join(" ")).unwrap();
        for (name, p) in XYZ_NAMES.iter().zip(&self.generators) {
            writeln!(out, "{name} {p}").unwrap();
        }
        for (name, p) in H2_NAMES.iter().zip(&self.h2) {
            writeln!(out, "{name} {p}").unwrap();
        }
        writeln!(out, "theta {}", self.theta).unwrap();
        for (i, j) in &self.pair_table {
            writeln!(out, "pair {i} {j}").unwrap();
        }
        out
    }
}

/// A certificate as read back from text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateFile {
    pub a0_size: usize,
    pub b_size: usize,
    pub l0: usize,
    pub l2: usize,
    pub verdicts: Vec<(String, bool)>,
    pub base: Vec<usize>,
    pub generators: [Partition; 3],
    pub h2: [Partition; 4],
    pub theta: Partition,
    pub pair_table: Vec<(usize, usize)>,
}

impl CertificateFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut sizes: Option<(usize, usize)> = None;
        let (mut l0, mut l2) = (None, None);
        let mut verdicts = Vec::new();
        let mut base = None;
        let mut gens: [Option<Partition>; 3] = [None, None, None];
        let mut h2: [Option<Partition>; 4] = [None, None, None, None];
        let mut th = None;
        let mut pair_table = Vec::new();
        for (ln, raw) in text.lines().enumerate() {
            let ln = ln + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, rest) = line.split_once(' ').unwrap_or((line, ""));
            let num = |s: &str| -> Result<usize> {
                s.trim().parse().map_err(|_| parse_err(ln, format!("bad number `{s}`")))
            };
            let part = |rest: &str| -> Result<Partition> {
                let (_, b) = sizes.ok_or_else(|| parse_err(ln, "partition before header"))?;
                Partition::parse_line(b, rest).map_err(|m| parse_err(ln, m))
            };
            match key {
                "certificate" => {
                    let toks: Vec<&str> = rest.split_whitespace().collect();
                    let [a, b] = toks.as_slice() else {
                        return Err(parse_err(ln, "expected `certificate a0=<n> b=<n>`"));
                    };
                    sizes = Some((
                        crate::blowup::kv(a, "a0", ln)?,
                        crate::blowup::kv(b, "b", ln)?,
                    ));
                }
                "l0" => l0 = Some(num(rest)?),
                "l2" => l2 = Some(num(rest)?),
                "verdict" => {
                    let (name, v) = rest
                        .split_once(' ')
                        .ok_or_else(|| parse_err(ln, "expected `verdict <name> <pass|fail>`"))?;
                    let ok = match v.trim() {
                        "pass" => true,
                        "fail" => false,
                        other => return Err(parse_err(ln, format!("bad verdict `{other}`"))),
                    };
                    verdicts.push((name.to_string(), ok));
                }
                "base" => {
                    base = Some(rest.split_whitespace().map(num).collect::<Result<Vec<_>>>()?);
                }
                "theta" => th = Some(part(rest)?),
                "pair" => {
                    let toks: Vec<&str> = rest.split_whitespace().collect();
                    let [i, j] = toks.as_slice() else {
                        return Err(parse_err(ln, "expected `pair <i> <j>`"));
                    };
                    pair_table.push((num(i)?, num(j)?));
                }
                k => {
                    if let Some(i) = XYZ_NAMES.iter().position(|n| *n == k) {
                        gens[i] = Some(part(rest)?);
                    } else if let Some(i) = H2_NAMES.iter().position(|n| *n == k) {
                        h2[i] = Some(part(rest)?);
                    } else {
                        return Err(parse_err(ln, format!("unrecognised line `{line}`")));
                    }
                }
            }
        }
        let missing = |what: &str| parse_err(0, format!("missing {what}"));
        let (a0_size, b_size) = sizes.ok_or_else(|| missing("header"))?;
        let generators = gens
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| missing("generator line"))?
            .try_into()
            .expect("three");
        let h2 = h2
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| missing("stage-two line"))?
            .try_into()
            .expect("four");
        Ok(Self {
            a0_size,
            b_size,
            l0: l0.ok_or_else(|| missing("l0 line"))?,
            l2: l2.ok_or_else(|| missing("l2 line"))?,
            verdicts,
            base: base.ok_or_else(|| missing("base line"))?,
            generators,
            h2,
            theta: th.ok_or_else(|| missing("theta line"))?,
            pair_table,
        })
    }
}

/// Outcome of re-checking a certificate file from its generators alone.
#[derive(Clone, Debug)]
pub struct Recheck {
    pub certificate: EmbeddingCertificate,
    /// Recorded facts that disagree with the recomputation.
    pub mismatches: Vec<String>,
}

impl Recheck {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty() && self.certificate.passed()
    }
}

/// Recomputes the stage-two values from the recorded `x, y, z`, takes the
/// base relations to be their traces, and redoes every check except the
/// comparison of theta with the gadget construction, which is trusted.
pub fn recheck(file: &CertificateFile, cap: usize) -> Result<Recheck> {
    let [x, y, z] = &file.generators;
    if x.len() != file.b_size {
        return Err(Error::SizeMismatch {
            left: file.b_size,
            right: x.len(),
        });
    }
    if file.base.len() != file.a0_size {
        return Err(Error::SizeMismatch {
            left: file.a0_size,
            right: file.base.len(),
        });
    }
    let h2 = eval_h2(&eval_h1(x, y, z)?)?.as_array().clone();
    let mut mismatches = Vec::new();
    for (k, name) in H2_NAMES.iter().enumerate() {
        if h2[k] != file.h2[k] {
            mismatches.push(format!("{name} differs from the value recomputed from x, y, z"));
        }
    }
    let map = GroundMap::new(file.b_size, file.base.clone())?;
    let eps0: [Partition; 4] = std::array::from_fn(|k| h2[k].restrict(&map).expect("checked sizes"));
    let report = theta_checks(&file.theta, &file.base, &h2)?;
    let cert = certify(
        &eps0,
        file.base.clone(),
        file.generators.clone(),
        h2,
        file.theta.clone(),
        report,
        cap,
    )?;
    if cert.l0.len() != file.l0 {
        mismatches.push(format!("l0 recorded {} recomputed {}", file.l0, cert.l0.len()));
    }
    if cert.l2.len() != file.l2 {
        mismatches.push(format!("l2 recorded {} recomputed {}", file.l2, cert.l2.len()));
    }
    if cert.pair_table != file.pair_table {
        mismatches.push("pair table differs".into());
    }
    let mut fresh: Vec<(String, bool)> = cert
        .verdicts
        .lines()
        .iter()
        .map(|(n, v)| (n.to_string(), *v))
        .collect();
    fresh.push(("overall".into(), cert.passed()));
    for (name, recorded) in &file.verdicts {
        if let Some((_, now)) = fresh.iter().find(|(n, _)| n == name) {
            if now != recorded {
                mismatches.push(format!(
                    "verdict {name} recorded {} recomputed {}",
                    pass(*recorded),
                    pass(*now)
                ));
            }
        } else {
            mismatches.push(format!("unknown verdict `{name}`"));
        }
    }
    Ok(Recheck {
        certificate: cert,
        mismatches,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generated {
    Yes,
    No,
    /// The cap stopped the closure before every target was found.
    Indeterminate,
}

/// Whether every target lies in the sublattice generated by `x1, y1, z1`.
pub fn check_three_generated(w: &BlowupWitness, targets: &[Partition], cap: usize) -> Result<Generated> {
    let gens = xyz(w);
    if targets.iter().all(|t| gens.contains(t)) {
        return Ok(Generated::Yes);
    }
    let k = closure(&gens, cap)?;
    let set: HashSet<&Partition> = k.elements.iter().collect();
    Ok(if targets.iter().all(|t| set.contains(t)) {
        Generated::Yes
    } else if k.capped {
        Generated::Indeterminate
    } else {
        Generated::No
    })
}

/// Classification of every quadruple over `Equ(n)`.
#[derive(Clone, Debug, Default)]
pub struct SweepSummary {
    pub total: usize,
    pub hypotheses_hold: usize,
    pub passed: usize,
    /// Quadruples whose certificate failed or could not be produced.
    pub failures: Vec<(GeneratorQuadruple, String)>,
    /// Size of `L2` for each certified quadruple, in enumeration order.
    pub l2_sizes: Vec<usize>,
}

/// Certifies every quadruple over `Equ(n)` that satisfies the join hypotheses.
/// Work is spread over the rayon pool; results keep enumeration order.
pub fn exhaustive_sweep(n: usize, gadgets: &GadgetSet, cap: usize) -> Result<SweepSummary> {
    let all = all_partitions(n);
    let k = all.len();
    let quads: Vec<GeneratorQuadruple> = (0..k.pow(4))
        .map(|mut idx| {
            let parts = std::array::from_fn(|_| {
                let p = all[idx % k].clone();
                idx /= k;
                p
            });
            GeneratorQuadruple::user(parts).expect("common size")
        })
        .collect();
    let outcomes: Vec<Option<std::result::Result<usize, String>>> = quads
        .par_iter()
        .map(|q| {
            if !check_join_conditions(q) {
                return None;
            }
            Some(match check_embedding(q, gadgets, cap) {
                Ok(c) if c.passed() => Ok(c.l2.len()),
                Ok(c) => Err(format!("{:?}", c.verdicts)),
                Err(e) => Err(e.to_string()),
            })
        })
        .collect();
    let mut s = SweepSummary {
        total: quads.len(),
        ..Default::default()
    };
    for (q, o) in quads.into_iter().zip(outcomes) {
        match o {
            None => {}
            Some(Ok(l2)) => {
                s.hypotheses_hold += 1;
                s.passed += 1;
                s.l2_sizes.push(l2);
            }
            Some(Err(msg)) => {
                s.hypotheses_hold += 1;
                s.failures.push((q, msg));
            }
        }
    }
    Ok(s)
}
