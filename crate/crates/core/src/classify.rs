use crate::action::PermAction;
use crate::autiso::{are_isomorphic, canonical_form_budgeted, SearchBudget};
use crate::drg::{drg_check, IntersectionArray, SrgParams};
use crate::error::{Error, Result};
use crate::graphs::{build_graph, enumerate_candidates, lambda_probe, Graph};
use crate::orbitals::orbital_decomposition;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Run limits mirroring the cost drivers: action degree and pairing-block
/// count (2^B candidates), plus a rank cut-off.
#[derive(Clone, Copy, Debug)]
pub struct Limits {
    pub max_degree: usize,
    pub max_blocks: usize,
    pub max_rank: usize,
}

impl Limits {
    pub fn default_profile() -> Limits {
        Limits {
            max_degree: 1024,
            max_blocks: 16,
            max_rank: 25,
        }
    }

    pub fn extended_profile() -> Limits {
        Limits {
            max_degree: 2048,
            max_blocks: 24,
            max_rank: 30,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub enum GraphKind {
    Srg(SrgParams),
    Drg(IntersectionArray),
}

impl std::fmt::Display for GraphKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GraphKind::Srg(p) => write!(f, "SRG{}", p),
            GraphKind::Drg(a) => write!(f, "DRG{}", a),
        }
    }
}

pub struct GraphRecord {
    pub action_label: String,
    pub n: usize,
    pub degree: usize,
    pub orbital_indices: Vec<usize>,
    pub kind: GraphKind,
    pub graph: Graph,
}

pub struct ClassificationReport {
    pub action_label: String,
    pub degree: usize,
    pub rank: usize,
    pub pairing_blocks: usize,
    pub candidates: usize,
    pub pruned_by_probe: usize,
    pub records: Vec<GraphRecord>,
}

/// The per-action pipeline: orbital decomposition → candidate unions →
/// λ-probe → full distance-regularity check. Diameter-2 accepts become SRGs
/// (μ ≥ 1 holds for every connected diameter-2 graph).
pub fn classify_action(action: &PermAction, limits: Limits) -> Result<ClassificationReport> {
    let dec = orbital_decomposition(action, limits.max_degree)?;
    if dec.rank() > limits.max_rank {
        return Err(Error::Resource(format!(
            "rank {} exceeds limit {}",
            dec.rank(),
            limits.max_rank
        )));
    }
    let candidates = enumerate_candidates(&dec, limits.max_blocks)?;
    let total = candidates.len();
    let results: Vec<GraphRecord> = candidates
        .par_iter()
        .filter_map(|sel| {
            if !lambda_probe(&dec, sel) {
                return None;
            }
            let g = build_graph(&dec, sel);
            let arr = drg_check(&g).ok()?;
            if arr.diameter() < 2 {
                return None;
            }
            let kind = if arr.diameter() == 2 {
                GraphKind::Srg(SrgParams {
                    v: g.n,
                    k: sel.degree,
                    lambda: sel.degree - 1 - arr.b[1],
                    mu: arr.c[1],
                })
            } else {
                GraphKind::Drg(arr)
            };
            Some(GraphRecord {
                action_label: action.label.clone(),
                n: g.n,
                degree: sel.degree,
                orbital_indices: sel.orbital_indices.clone(),
                kind,
                graph: g,
            })
        })
        .collect();
    let mut records = results;
    records.sort_by(|a, b| {
        (a.n, a.degree, &a.orbital_indices).cmp(&(b.n, b.degree, &b.orbital_indices))
    });
    let survivors = candidates
        .par_iter()
        .filter(|sel| lambda_probe(&dec, sel))
        .count();
    Ok(ClassificationReport {
        action_label: action.label.clone(),
        degree: dec.degree,
        rank: dec.rank(),
        pairing_blocks: dec.pairing_classes().len(),
        candidates: total,
        pruned_by_probe: total - survivors,
        records,
    })
}

/// The convention used when quoting "exactly N strongly regular graphs":
/// one representative per complement pair — the smaller degree, since the
/// complement of every reported union is itself a candidate union — which
/// also drops the trivial complete-multipartite graphs (their complements
/// are disconnected, so only the large-degree member ever shows up).
/// DRGs of diameter ≥ 3 pass unchanged.
pub fn reported_classes(classes: &[(GraphRecord, usize)]) -> Vec<&GraphRecord> {
    classes
        .iter()
        .filter_map(|(r, _)| match &r.kind {
            GraphKind::Srg(p) => {
                if 2 * p.k < p.v - 1 {
                    Some(r)
                } else {
                    None
                }
            }
            GraphKind::Drg(_) => Some(r),
        })
        .collect()
}

/// Deduplicate records up to graph isomorphism. Records are first grouped by
/// the cheap invariant (order, degree, DRG/SRG certificate); a class that is
/// still ambiguous is split by canonical forms (≤ 1024 vertices) or pairwise
/// isomorphism tests with verified witnesses. Returns one representative per
/// class with its multiplicity.
pub fn dedup_up_to_iso(
    records: Vec<GraphRecord>,
    budget: SearchBudget,
) -> Result<Vec<(GraphRecord, usize)>> {
    let mut classes: Vec<(GraphRecord, usize)> = Vec::new();
    // group indices by fingerprint
    let mut by_fp: std::collections::BTreeMap<String, Vec<GraphRecord>> =
        std::collections::BTreeMap::new();
    for r in records {
        let fp = format!("{}|{}|{}", r.n, r.degree, r.kind);
        by_fp.entry(fp).or_default().push(r);
    }
    for (_, group) in by_fp {
        if group.len() == 1 {
            for r in group {
                classes.push((r, 1));
            }
            continue;
        }
        let mut reps: Vec<(GraphRecord, usize, Option<String>)> = Vec::new();
        for r in group {
            let cert = if r.n <= 1024 {
                Some(canonical_form_budgeted(&r.graph, budget)?)
            } else {
                None
            };
            let mut matched = false;
            for (rep, count, rep_cert) in reps.iter_mut() {
                let same = match (&cert, rep_cert.as_ref()) {
                    (Some(a), Some(b)) => a == b,
                    _ => are_isomorphic(&rep.graph, &r.graph, budget)?.is_some(),
                };
                if same {
                    *count += 1;
                    matched = true;
                    break;
                }
            }
            if !matched {
                reps.push((r, 1, cert));
            }
        }
        for (rep, count, _) in reps {
            classes.push((rep, count));
        }
    }
    classes.sort_by(|a, b| {
        (a.0.n, a.0.degree, &a.0.action_label, &a.0.orbital_indices).cmp(&(
            b.0.n,
            b.0.degree,
            &b.0.action_label,
            &b.0.orbital_indices,
        ))
    });
    Ok(classes)
}
