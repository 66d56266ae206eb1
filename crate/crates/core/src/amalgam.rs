//! Labeled amalgams for the ranked frame classes.
//!
//! Given two models of the same class whose points stand in the class's
//! rank-n transfer relation, `build_amalgam` assembles a single frame whose
//! worlds each carry a label into both models, such that the frame stays in
//! the class, both label maps are p-morphisms, and every label pair passes
//! rank-0 transfer. `nip_report`/`verify_nip` check those conditions clause
//! by clause. The construction leans on a small theory of matching between
//! final clusters (`cluster_matches`, `marriage_pick`, the `MatchingLemma`
//! oracles), and `lip_failure_report` reproduces a fixed two-model argument
//! showing that a band of height-two logics admits no polarity-respecting
//! interpolant for one concrete provable implication.

use std::collections::BTreeSet;

use crate::decide::{provable, Ls12Class};
use crate::formula::{and, bx, dia, implies, not, or, var, Formula, PolaritySet};
use crate::interp::{n_implies, rank0_pair};
use crate::kripke::{
    clusters, in_class, layered_model, satisfies, Frame, LogicId, Model, PointedModel,
};
use crate::{Error, Result};

/// A frame whose worlds carry a label into each of two source models.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledAmalgam {
    /// The combined frame.
    pub frame: Frame,
    /// The designated world standing for the two evaluation points.
    pub point: usize,
    /// Per world, its label in the first model.
    pub label0: Vec<usize>,
    /// Per world, its label in the second model.
    pub label1: Vec<usize>,
}

impl LabeledAmalgam {
    /// Label pairs in world order.
    pub fn label_pairs(&self) -> Vec<(usize, usize)> {
        self.label0.iter().copied().zip(self.label1.iter().copied()).collect()
    }
}

/// One matched pair of final clusters with the worlds realizing both
/// coverage clauses; every listed pair passes rank-0 transfer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterMatch {
    /// Worlds of the cluster in the first model.
    pub cluster0: Vec<usize>,
    /// Worlds of the cluster in the second model.
    pub cluster1: Vec<usize>,
    /// For each world of `cluster0`, its first partner in `cluster1`.
    pub forth: Vec<(usize, usize)>,
    /// For each world of `cluster1`, its first partner in `cluster0`,
    /// stored left model first.
    pub back: Vec<(usize, usize)>,
}

/// Matched cluster pairs collected by the lemma oracles.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MatchReport {
    pub pairs: Vec<ClusterMatch>,
}

/// Whether every world of `c0` has a rank-0 partner in `c1` and every world
/// of `c1` is some `c0` world's partner.
pub fn cluster_matches(
    m0: &Model,
    c0: &[usize],
    m1: &Model,
    c1: &[usize],
    ps: &PolaritySet,
) -> bool {
    c0.iter().all(|&u0| c1.iter().any(|&u1| rank0_pair(m0, u0, m1, u1, ps)))
        && c1.iter().all(|&u1| c0.iter().any(|&u0| rank0_pair(m0, u0, m1, u1, ps)))
}

/// Witnesses for `cluster_matches`, if it holds.
pub fn match_witnesses(
    m0: &Model,
    c0: &[usize],
    m1: &Model,
    c1: &[usize],
    ps: &PolaritySet,
) -> Option<ClusterMatch> {
    let mut forth = Vec::new();
    for &u0 in c0 {
        let u1 = c1.iter().copied().find(|&u1| rank0_pair(m0, u0, m1, u1, ps))?;
        forth.push((u0, u1));
    }
    let mut back = Vec::new();
    for &u1 in c1 {
        let u0 = c0.iter().copied().find(|&u0| rank0_pair(m0, u0, m1, u1, ps))?;
        back.push((u0, u1));
    }
    Some(ClusterMatch {
        cluster0: c0.to_vec(),
        cluster1: c1.to_vec(),
        forth,
        back,
    })
}

/// Picks distinct right-hand partners for the two left elements of a 2-by-2
/// relation, provided both totality conditions hold.
///
/// Entries are index pairs over `{0, 1} x {0, 1}`. Returns `(c, d)` with
/// `c != d`, `(0, c)` and `(1, d)` in the relation: `(0, 1)` when the
/// diagonal is present, `(1, 0)` otherwise.
pub fn marriage_pick(relation: &[(usize, usize)]) -> Result<(usize, usize)> {
    let mut has = [[false; 2]; 2];
    for &(a, b) in relation {
        if a > 1 || b > 1 {
            return Err(Error::Precondition(format!(
                "pair ({a}, {b}) lies outside the two-by-two grid"
            )));
        }
        has[a][b] = true;
    }
    for (a, row) in has.iter().enumerate() {
        if !row[0] && !row[1] {
            return Err(Error::Precondition(format!("left element {a} has no partner")));
        }
    }
    for b in 0..2 {
        if !has[0][b] && !has[1][b] {
            return Err(Error::Precondition(format!("right element {b} has no partner")));
        }
    }
    if has[0][0] && has[1][1] {
        Ok((0, 1))
    } else {
        // Both totality conditions force the anti-diagonal here.
        Ok((1, 0))
    }
}

/// An optional root element strictly below disjoint final clusters.
struct Fan {
    root: Option<usize>,
    finals: Vec<Vec<usize>>,
}

fn fan(m: &Model) -> Option<Fan> {
    let part = clusters(m);
    let nb = part.blocks.len();
    match part.root_block {
        Some(rb) if !part.is_final[rb] => {
            if part.blocks[rb].len() != 1 || !(0..nb).all(|b| b == rb || part.is_final[b]) {
                return None;
            }
            Some(Fan {
                root: Some(part.blocks[rb][0]),
                finals: (0..nb).filter(|&b| b != rb).map(|b| part.blocks[b].clone()).collect(),
            })
        }
        _ => {
            if (0..nb).all(|b| part.is_final[b]) {
                Some(Fan { root: None, finals: part.blocks.clone() })
            } else {
                None
            }
        }
    }
}

/// Whether the frame is an optional single root element below disjoint
/// final clusters, the shape all matching arguments assume.
pub fn fan_shape(m: &Model) -> bool {
    fan(m).is_some()
}

fn final_cluster_of<'a>(f: &'a Fan, w: usize) -> Option<&'a Vec<usize>> {
    f.finals.iter().find(|c| c.contains(&w))
}

fn missing_witness(msg: String) -> Error {
    Error::Internal(format!(
        "{msg}; a witness the construction guarantees is absent, so the underlying result fails \
         on this instance"
    ))
}

fn assemble(
    labels: Vec<(usize, usize)>,
    arrows: &[(usize, usize)],
    point: usize,
) -> Result<LabeledAmalgam> {
    let frame = Frame::closed(labels.len(), arrows)?;
    let label0 = labels.iter().map(|&(a, _)| a).collect();
    let label1 = labels.iter().map(|&(_, b)| b).collect();
    Ok(LabeledAmalgam { frame, point, label0, label1 })
}

/// Root world 0 labeled `root`, then each cluster complete and final, worlds
/// within a cluster sorted by label pair.
fn rooted(root: (usize, usize), tops: Vec<Vec<(usize, usize)>>) -> Result<LabeledAmalgam> {
    let mut labels = vec![root];
    let mut arrows = Vec::new();
    for mut c in tops {
        c.sort_unstable();
        let base = labels.len();
        for (i, lab) in c.into_iter().enumerate() {
            labels.push(lab);
            if i > 0 {
                arrows.push((base, base + i));
                arrows.push((base + i, base));
            }
        }
    }
    for w in 1..labels.len() {
        arrows.push((0, w));
    }
    assemble(labels, &arrows, 0)
}

/// All rank-0 pairs of `c0 x c1`, required to cover both sides.
fn matched_product(
    m0: &Model,
    c0: &[usize],
    m1: &Model,
    c1: &[usize],
    ps: &PolaritySet,
) -> Result<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    for &u0 in c0 {
        for &u1 in c1 {
            if rank0_pair(m0, u0, m1, u1, ps) {
                out.push((u0, u1));
            }
        }
    }
    for &u0 in c0 {
        if !out.iter().any(|&(a, _)| a == u0) {
            return Err(missing_witness(format!("left world {u0} has no rank-0 partner")));
        }
    }
    for &u1 in c1 {
        if !out.iter().any(|&(_, b)| b == u1) {
            return Err(missing_witness(format!("right world {u1} has no rank-0 partner")));
        }
    }
    Ok(out)
}

/// A two-world cluster pairing the left 2-cluster with distinct partners in
/// the right 2-cluster.
fn marriage_cluster(
    m0: &Model,
    c0: &[usize],
    m1: &Model,
    c1: &[usize],
    ps: &PolaritySet,
) -> Result<Vec<(usize, usize)>> {
    if c0.len() != 2 || c1.len() != 2 {
        return Err(Error::Internal(format!(
            "expected two-element clusters, got {} and {}",
            c0.len(),
            c1.len()
        )));
    }
    let mut rel = Vec::new();
    for a in 0..2 {
        for b in 0..2 {
            if rank0_pair(m0, c0[a], m1, c1[b], ps) {
                rel.push((a, b));
            }
        }
    }
    let (c, d) = marriage_pick(&rel).map_err(|_| {
        missing_witness(format!("clusters {c0:?} and {c1:?} lack two-sided rank-0 coverage"))
    })?;
    Ok(vec![(c0[0], c1[c]), (c0[1], c1[d])])
}

/// Like `marriage_cluster` but with the distinct partners on the left.
fn marriage_cluster_rev(
    m0: &Model,
    c0: &[usize],
    m1: &Model,
    c1: &[usize],
    ps: &PolaritySet,
) -> Result<Vec<(usize, usize)>> {
    if c0.len() != 2 || c1.len() != 2 {
        return Err(Error::Internal(format!(
            "expected two-element clusters, got {} and {}",
            c0.len(),
            c1.len()
        )));
    }
    let mut rel = Vec::new();
    for b in 0..2 {
        for a in 0..2 {
            if rank0_pair(m0, c0[a], m1, c1[b], ps) {
                rel.push((b, a));
            }
        }
    }
    let (c, d) = marriage_pick(&rel).map_err(|_| {
        missing_witness(format!("clusters {c0:?} and {c1:?} lack two-sided rank-0 coverage"))
    })?;
    Ok(vec![(c0[c], c1[0]), (c0[d], c1[1])])
}

/// Distinct right-cluster indices matched by the two left clusters.
fn cluster_assignment(
    m0: &Model,
    f0: &Fan,
    m1: &Model,
    f1: &Fan,
    ps: &PolaritySet,
) -> Result<(usize, usize)> {
    let mut rel = Vec::new();
    for a in 0..2 {
        for b in 0..2 {
            if cluster_matches(m0, &f0.finals[a], m1, &f1.finals[b], ps) {
                rel.push((a, b));
            }
        }
    }
    marriage_pick(&rel)
        .map_err(|_| missing_witness("the final clusters lack two-sided matching coverage".into()))
}

/// Builds the class's amalgam for a pair of points related at the class's
/// rank. The frame, the labels, and the designated world follow one fixed
/// construction per class, with first-in-canonical-order witness choices.
pub fn build_amalgam(
    l: LogicId,
    pm0: &PointedModel,
    pm1: &PointedModel,
    ps: &PolaritySet,
) -> Result<LabeledAmalgam> {
    let rank = l.nip_rank().ok_or_else(|| {
        Error::Precondition(format!("{} supports no amalgam construction", l.display_name()))
    })?;
    let (m0, m1) = (pm0.model(), pm1.model());
    if !in_class(m0, l) || !in_class(m1, l) {
        return Err(Error::Precondition(format!(
            "both models must lie in the {} class",
            l.display_name()
        )));
    }
    if !n_implies(pm0, pm1, ps, rank, l) {
        return Err(Error::Precondition(format!(
            "the points do not stand in the rank-{rank} transfer relation"
        )));
    }
    let (w0, w1) = (pm0.point(), pm1.point());
    if matches!(l, LogicId::Triv) {
        return assemble(vec![(w0, w1)], &[], 0);
    }
    if matches!(l, LogicId::S5) {
        let mut labels = Vec::new();
        for x0 in 0..m0.world_count() {
            for x1 in 0..m1.world_count() {
                if rank0_pair(m0, x0, m1, x1, ps) {
                    labels.push((x0, x1));
                }
            }
        }
        for x0 in 0..m0.world_count() {
            if !labels.iter().any(|&(a, _)| a == x0) {
                return Err(missing_witness(format!("left world {x0} has no rank-0 partner")));
            }
        }
        for x1 in 0..m1.world_count() {
            if !labels.iter().any(|&(_, b)| b == x1) {
                return Err(missing_witness(format!("right world {x1} has no rank-0 partner")));
            }
        }
        let point = labels
            .iter()
            .position(|&lab| lab == (w0, w1))
            .ok_or_else(|| missing_witness("the evaluation pair itself fails rank-0".into()))?;
        let mut arrows = Vec::new();
        for i in 0..labels.len() {
            for j in 0..labels.len() {
                arrows.push((i, j));
            }
        }
        return assemble(labels, &arrows, point);
    }

    let f0 = fan(m0).ok_or_else(|| Error::Internal("class member is not a fan".into()))?;
    let f1 = fan(m1).ok_or_else(|| Error::Internal("class member is not a fan".into()))?;
    let tops: Vec<Vec<(usize, usize)>> = match l {
        LogicId::GW2 => {
            let (y0, y1) = (f0.finals[0][0], f1.finals[0][0]);
            if !rank0_pair(m0, y0, m1, y1, ps) {
                return Err(missing_witness("the final points fail rank-0 transfer".into()));
            }
            vec![vec![(y0, y1)]]
        }
        LogicId::LS_2_1 => vec![marriage_cluster(m0, &f0.finals[0], m1, &f1.finals[0], ps)?],
        LogicId::S4_4 => vec![matched_product(m0, &f0.finals[0], m1, &f1.finals[0], ps)?],
        LogicId::GV => {
            let fin0: Vec<usize> = f0.finals.iter().map(|c| c[0]).collect();
            let fin1: Vec<usize> = f1.finals.iter().map(|c| c[0]).collect();
            match (final_cluster_of(&f0, w0).is_some(), final_cluster_of(&f1, w1).is_some()) {
                (true, true) => vec![vec![(w0, w1)], vec![(w0, w1)]],
                (true, false) => {
                    for &u1 in &fin1 {
                        if !rank0_pair(m0, w0, m1, u1, ps) {
                            return Err(missing_witness(format!(
                                "final point {w0} fails rank-0 into {u1}"
                            )));
                        }
                    }
                    vec![vec![(w0, fin1[0])], vec![(w0, fin1[1])]]
                }
                (false, true) => {
                    for &u0 in &fin0 {
                        if !rank0_pair(m0, u0, m1, w1, ps) {
                            return Err(missing_witness(format!(
                                "final point {u0} fails rank-0 into {w1}"
                            )));
                        }
                    }
                    vec![vec![(fin0[0], w1)], vec![(fin0[1], w1)]]
                }
                (false, false) => {
                    let mut rel = Vec::new();
                    for a in 0..2 {
                        for b in 0..2 {
                            if rank0_pair(m0, fin0[a], m1, fin1[b], ps) {
                                rel.push((a, b));
                            }
                        }
                    }
                    let (c, d) = marriage_pick(&rel).map_err(|_| {
                        missing_witness("the final points lack two-sided rank-0 coverage".into())
                    })?;
                    vec![vec![(fin0[0], fin1[c])], vec![(fin0[1], fin1[d])]]
                }
            }
        }
        LogicId::LV_2_1 => match (final_cluster_of(&f0, w0), final_cluster_of(&f1, w1)) {
            (Some(a0), Some(a1)) => {
                let k = marriage_cluster(m0, a0, m1, a1, ps)?;
                vec![k.clone(), k]
            }
            (Some(a0), None) => f1
                .finals
                .iter()
                .map(|c1| marriage_cluster(m0, a0, m1, c1, ps))
                .collect::<Result<_>>()?,
            (None, Some(a1)) => f0
                .finals
                .iter()
                .map(|c0| marriage_cluster(m0, c0, m1, a1, ps))
                .collect::<Result<_>>()?,
            (None, None) => {
                let (c, d) = cluster_assignment(m0, &f0, m1, &f1, ps)?;
                vec![
                    marriage_cluster(m0, &f0.finals[0], m1, &f1.finals[c], ps)?,
                    marriage_cluster(m0, &f0.finals[1], m1, &f1.finals[d], ps)?,
                ]
            }
        },
        LogicId::LV_w_1 => match (final_cluster_of(&f0, w0), final_cluster_of(&f1, w1)) {
            (Some(a0), Some(a1)) => {
                let k = matched_product(m0, a0, m1, a1, ps)?;
                vec![k.clone(), k]
            }
            (Some(a0), None) => f1
                .finals
                .iter()
                .map(|c1| matched_product(m0, a0, m1, c1, ps))
                .collect::<Result<_>>()?,
            (None, Some(a1)) => f0
                .finals
                .iter()
                .map(|c0| matched_product(m0, c0, m1, a1, ps))
                .collect::<Result<_>>()?,
            (None, None) => {
                let (c, d) = cluster_assignment(m0, &f0, m1, &f1, ps)?;
                vec![
                    matched_product(m0, &f0.finals[0], m1, &f1.finals[c], ps)?,
                    matched_product(m0, &f0.finals[1], m1, &f1.finals[d], ps)?,
                ]
            }
        },
        LogicId::GW => {
            let fin0: Vec<usize> = f0.finals.iter().map(|c| c[0]).collect();
            let fin1: Vec<usize> = f1.finals.iter().map(|c| c[0]).collect();
            match (final_cluster_of(&f0, w0).is_some(), final_cluster_of(&f1, w1).is_some()) {
                (true, true) => vec![vec![(w0, w1)]],
                (true, false) => fin1
                    .iter()
                    .map(|&u1| {
                        if rank0_pair(m0, w0, m1, u1, ps) {
                            Ok(vec![(w0, u1)])
                        } else {
                            Err(missing_witness(format!(
                                "final point {w0} fails rank-0 into {u1}"
                            )))
                        }
                    })
                    .collect::<Result<_>>()?,
                (false, true) => fin0
                    .iter()
                    .map(|&u0| {
                        if rank0_pair(m0, u0, m1, w1, ps) {
                            Ok(vec![(u0, w1)])
                        } else {
                            Err(missing_witness(format!(
                                "final point {u0} fails rank-0 into {w1}"
                            )))
                        }
                    })
                    .collect::<Result<_>>()?,
                (false, false) => matched_product(m0, &fin0, m1, &fin1, ps)?
                    .into_iter()
                    .map(|pair| vec![pair])
                    .collect(),
            }
        }
        LogicId::LP2_2_1 => match (final_cluster_of(&f0, w0), final_cluster_of(&f1, w1)) {
            (Some(a0), Some(a1)) => vec![marriage_cluster(m0, a0, m1, a1, ps)?],
            (Some(a0), None) => f1
                .finals
                .iter()
                .map(|c1| marriage_cluster(m0, a0, m1, c1, ps))
                .collect::<Result<_>>()?,
            (None, Some(a1)) => f0
                .finals
                .iter()
                .map(|c0| marriage_cluster(m0, c0, m1, a1, ps))
                .collect::<Result<_>>()?,
            (None, None) => {
                let mut tops = Vec::new();
                for c0 in &f0.finals {
                    let c1 = f1
                        .finals
                        .iter()
                        .find(|c1| cluster_matches(m0, c0, m1, c1, ps))
                        .ok_or_else(|| {
                            missing_witness(format!("no cluster matches the left cluster {c0:?}"))
                        })?;
                    tops.push(marriage_cluster(m0, c0, m1, c1, ps)?);
                }
                for c1 in &f1.finals {
                    let c0 = f0
                        .finals
                        .iter()
                        .find(|c0| cluster_matches(m0, c0, m1, c1, ps))
                        .ok_or_else(|| {
                            missing_witness(format!("no cluster matches the right cluster {c1:?}"))
                        })?;
                    tops.push(marriage_cluster_rev(m0, c0, m1, c1, ps)?);
                }
                tops
            }
        },
        LogicId::LP2_w_1 => match (final_cluster_of(&f0, w0), final_cluster_of(&f1, w1)) {
            (Some(a0), Some(a1)) => vec![matched_product(m0, a0, m1, a1, ps)?],
            (Some(a0), None) => f1
                .finals
                .iter()
                .map(|c1| matched_product(m0, a0, m1, c1, ps))
                .collect::<Result<_>>()?,
            (None, Some(a1)) => f0
                .finals
                .iter()
                .map(|c0| matched_product(m0, c0, m1, a1, ps))
                .collect::<Result<_>>()?,
            (None, None) => {
                let mut tops = Vec::new();
                for c0 in &f0.finals {
                    let c1 = f1
                        .finals
                        .iter()
                        .find(|c1| cluster_matches(m0, c0, m1, c1, ps))
                        .ok_or_else(|| {
                            missing_witness(format!("no cluster matches the left cluster {c0:?}"))
                        })?;
                    tops.push(matched_product(m0, c0, m1, c1, ps)?);
                }
                for c1 in &f1.finals {
                    let c0 = f0
                        .finals
                        .iter()
                        .find(|c0| cluster_matches(m0, c0, m1, c1, ps))
                        .ok_or_else(|| {
                            missing_witness(format!("no cluster matches the right cluster {c1:?}"))
                        })?;
                    tops.push(matched_product(m0, c0, m1, c1, ps)?);
                }
                tops
            }
        },
        LogicId::Triv | LogicId::S5 | LogicId::LS_1_2 | LogicId::LP2_1_w => unreachable!(),
    };
    rooted((w0, w1), tops)
}

/// Names of the amalgam conditions, in checking order.
pub const NIP_CLAUSES: [&str; 6] = [
    "frame_in_class",
    "point_labels",
    "labels_forth",
    "label0_back",
    "label1_back",
    "pairs_rank0",
];

/// Clause-by-clause outcome of checking an amalgam against its sources.
#[derive(Debug, Clone)]
pub struct NipReport {
    /// Pass flag per clause, aligned with `NIP_CLAUSES`.
    pub passed: [bool; 6],
    /// Description of the first failed clause, if any.
    pub first_violation: Option<String>,
}

impl NipReport {
    /// Whether every clause passed.
    pub fn all_pass(&self) -> bool {
        self.passed.iter().all(|&b| b)
    }
}

/// Checks all six amalgam conditions, recording the first failure.
pub fn nip_report(
    am: &LabeledAmalgam,
    l: LogicId,
    pm0: &PointedModel,
    pm1: &PointedModel,
    ps: &PolaritySet,
    w_star: usize,
) -> NipReport {
    let (m0, m1) = (pm0.model(), pm1.model());
    let n = am.frame.world_count();
    let mut passed = [false; 6];
    let mut notes: Vec<Option<String>> = vec![None; 6];

    let shape = Model::new(am.frame.clone(), vec![BTreeSet::new(); n]);
    passed[0] = shape.map(|m| in_class(&m, l)).unwrap_or(false);
    if !passed[0] {
        notes[0] = Some(format!("the frame is not a {} frame", l.display_name()));
    }

    let labels_ok = am.label0.len() == n
        && am.label1.len() == n
        && am.label0.iter().all(|&w| w < m0.world_count())
        && am.label1.iter().all(|&w| w < m1.world_count());
    if !labels_ok {
        let msg = "label maps do not cover the frame with valid world indices".to_string();
        for i in 1..6 {
            notes[i] = Some(msg.clone());
        }
    } else {
        passed[1] = w_star < n
            && am.label0[w_star] == pm0.point()
            && am.label1[w_star] == pm1.point();
        if !passed[1] {
            notes[1] = Some(format!(
                "world {w_star} is not labeled ({}, {})",
                pm0.point(),
                pm1.point()
            ));
        }

        passed[2] = true;
        'forth: for i in 0..n {
            for j in am.frame.successors(i) {
                if !m0.frame().sees(am.label0[i], am.label0[j])
                    || !m1.frame().sees(am.label1[i], am.label1[j])
                {
                    passed[2] = false;
                    notes[2] = Some(format!(
                        "arrow {i} -> {j} is not matched by both label arrows"
                    ));
                    break 'forth;
                }
            }
        }

        passed[3] = true;
        'back0: for i in 0..n {
            for y0 in m0.frame().successors(am.label0[i]) {
                if !am.frame.successors(i).any(|j| am.label0[j] == y0) {
                    passed[3] = false;
                    notes[3] = Some(format!(
                        "world {i} cannot follow the first model's arrow {} -> {y0}",
                        am.label0[i]
                    ));
                    break 'back0;
                }
            }
        }

        passed[4] = true;
        'back1: for i in 0..n {
            for y1 in m1.frame().successors(am.label1[i]) {
                if !am.frame.successors(i).any(|j| am.label1[j] == y1) {
                    passed[4] = false;
                    notes[4] = Some(format!(
                        "world {i} cannot follow the second model's arrow {} -> {y1}",
                        am.label1[i]
                    ));
                    break 'back1;
                }
            }
        }

        passed[5] = true;
        for i in 0..n {
            if !rank0_pair(m0, am.label0[i], m1, am.label1[i], ps) {
                passed[5] = false;
                notes[5] = Some(format!(
                    "world {i} carries the pair ({}, {}) which fails rank-0 transfer",
                    am.label0[i], am.label1[i]
                ));
                break;
            }
        }
    }

    let first_violation = (0..6).find(|&i| !passed[i]).map(|i| {
        let detail = notes[i].clone().unwrap_or_default();
        if detail.is_empty() {
            NIP_CLAUSES[i].to_string()
        } else {
            format!("{}: {detail}", NIP_CLAUSES[i])
        }
    });
    NipReport { passed, first_violation }
}

/// Conjunction of all six amalgam conditions.
pub fn verify_nip(
    am: &LabeledAmalgam,
    l: LogicId,
    pm0: &PointedModel,
    pm1: &PointedModel,
    ps: &PolaritySet,
    w_star: usize,
) -> bool {
    nip_report(am, l, pm0, pm1, ps, w_star).all_pass()
}

/// The cluster-matching facts used as property-test oracles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatchingLemma {
    /// Rank-1 transfer between final points forces their clusters to match.
    PointMatch,
    /// Rank-2 transfer from a final point to the other root forces its
    /// cluster to match every final cluster on the right.
    RootMatch,
    /// Rank-3 transfer between roots forces two-sided cluster coverage.
    MutualMatch,
    /// Matching two-element clusters admit distinct per-element witnesses.
    PairWitnesses,
    /// Two-cluster models related at rank 3 between roots admit a distinct
    /// cluster assignment.
    ClusterAssignment,
}

/// Two pointed models and a polarity context for one lemma check.
#[derive(Debug, Clone)]
pub struct LemmaInstance {
    pub pm0: PointedModel,
    pub pm1: PointedModel,
    pub ps: PolaritySet,
}

/// Checks a matching lemma's conclusion on a hypothesis-satisfying instance;
/// instances violating the hypothesis are rejected.
pub fn check_matching_lemma(which: MatchingLemma, inst: &LemmaInstance) -> Result<bool> {
    let (m0, m1) = (inst.pm0.model(), inst.pm1.model());
    let f0 = fan(m0).ok_or_else(|| {
        Error::Precondition("the first model is not a root-below-final-clusters fan".into())
    })?;
    let f1 = fan(m1).ok_or_else(|| {
        Error::Precondition("the second model is not a root-below-final-clusters fan".into())
    })?;
    let ps = &inst.ps;
    let (w0, w1) = (inst.pm0.point(), inst.pm1.point());
    let related = |n: u32| n_implies(&inst.pm0, &inst.pm1, ps, n, LogicId::LP2_w_1);
    let final0 = final_cluster_of(&f0, w0);
    let final1 = final_cluster_of(&f1, w1);

    match which {
        MatchingLemma::PointMatch => {
            let c0 = final0
                .ok_or_else(|| Error::Precondition("the first point is not final".into()))?;
            let c1 = final1
                .ok_or_else(|| Error::Precondition("the second point is not final".into()))?;
            if !related(1) {
                return Err(Error::Precondition("rank-1 transfer does not hold".into()));
            }
            Ok(cluster_matches(m0, c0, m1, c1, ps))
        }
        MatchingLemma::RootMatch => {
            let c0 = final0
                .ok_or_else(|| Error::Precondition("the first point is not final".into()))?;
            if f1.root != Some(w1) {
                return Err(Error::Precondition(
                    "the second point is not the root element".into(),
                ));
            }
            if !related(2) {
                return Err(Error::Precondition("rank-2 transfer does not hold".into()));
            }
            Ok(f1.finals.iter().all(|c1| cluster_matches(m0, c0, m1, c1, ps)))
        }
        MatchingLemma::MutualMatch => {
            if f0.root != Some(w0) || f1.root != Some(w1) {
                return Err(Error::Precondition("both points must be root elements".into()));
            }
            if !related(3) {
                return Err(Error::Precondition("rank-3 transfer does not hold".into()));
            }
            let left = f0
                .finals
                .iter()
                .all(|c0| f1.finals.iter().any(|c1| cluster_matches(m0, c0, m1, c1, ps)));
            let right = f1
                .finals
                .iter()
                .all(|c1| f0.finals.iter().any(|c0| cluster_matches(m0, c0, m1, c1, ps)));
            Ok(left && right)
        }
        MatchingLemma::PairWitnesses => {
            let c0 = final0
                .ok_or_else(|| Error::Precondition("the first point is not final".into()))?;
            let c1 = final1
                .ok_or_else(|| Error::Precondition("the second point is not final".into()))?;
            if c0.len() != 2 || c1.len() != 2 {
                return Err(Error::Precondition("both clusters must have two elements".into()));
            }
            if !cluster_matches(m0, c0, m1, c1, ps) {
                return Err(Error::Precondition("the clusters do not match".into()));
            }
            let ok = [(0, 1), (1, 0)].iter().any(|&(a, b)| {
                rank0_pair(m0, c0[0], m1, c1[a], ps) && rank0_pair(m0, c0[1], m1, c1[b], ps)
            });
            Ok(ok)
        }
        MatchingLemma::ClusterAssignment => {
            if f0.finals.len() != 2 || f1.finals.len() != 2 {
                return Err(Error::Precondition(
                    "both models must have exactly two final clusters".into(),
                ));
            }
            if f0.root != Some(w0) || f1.root != Some(w1) {
                return Err(Error::Precondition("both points must be root elements".into()));
            }
            if !related(3) {
                return Err(Error::Precondition("rank-3 transfer does not hold".into()));
            }
            let ok = [(0, 1), (1, 0)].iter().any(|&(a, b)| {
                cluster_matches(m0, &f0.finals[0], m1, &f1.finals[a], ps)
                    && cluster_matches(m0, &f0.finals[1], m1, &f1.finals[b], ps)
            });
            Ok(ok)
        }
    }
}

/// The fixed two-model argument that one provable implication admits no
/// polarity-respecting interpolant for any logic in a height-two band.
#[derive(Debug, Clone)]
pub struct LipFailureReport {
    /// The left side `p & [](([]!p) | p)`.
    pub premise: Formula,
    /// The right side `[](p | q | []!q)`.
    pub conclusion: Formula,
    /// The implication is valid over the widest class of the band.
    pub implication_valid: bool,
    /// Model satisfying the premise at its point while refuting `[]<>p`.
    pub premise_model: PointedModel,
    pub premise_side_ok: bool,
    /// The one-positive-variable classes the premise provably entails.
    pub survivors: Vec<Ls12Class>,
    pub survivors_as_expected: bool,
    /// Model satisfying every survivor at its point yet refuting the
    /// conclusion there.
    pub refuting_model: PointedModel,
    pub refutation_ok: bool,
    /// Conjunction of the clauses above: no candidate interpolant works.
    pub no_interpolant: bool,
}

/// Reproduces the interpolant-exclusion argument, clause by clause.
pub fn lip_failure_report() -> Result<LipFailureReport> {
    let p = var("p");
    let q = var("q");
    let premise = and(p.clone(), bx(or(bx(not(p.clone())), p.clone())));
    let conclusion = bx(or(p.clone(), or(q.clone(), bx(not(q)))));
    let implication_valid =
        provable(LogicId::LP2_1_w, &implies(premise.clone(), conclusion.clone()))?;

    let vars = ["p".to_string(), "q".to_string()];
    let premise_model = PointedModel::new(layered_model(&vars, Some(&[1, 1]), &[&[0]]), 0)?;
    let premise_side_ok = satisfies(&premise_model, &premise)
        && !satisfies(&premise_model, &bx(dia(p)));

    let mut survivors = Vec::new();
    for c in Ls12Class::all() {
        if provable(LogicId::LS_1_2, &implies(premise.clone(), c.representative()))? {
            survivors.push(c);
        }
    }
    let survivors_as_expected = survivors
        == [Ls12Class::P, Ls12Class::POrBoxDiaP, Ls12Class::DiaP, Ls12Class::Top];

    let refuting_model = PointedModel::new(layered_model(&vars, Some(&[1, 0]), &[&[2]]), 0)?;
    let mut refutation_ok = !satisfies(&refuting_model, &conclusion);
    for c in &survivors {
        refutation_ok &= satisfies(&refuting_model, &c.representative());
        refutation_ok &=
            !provable(LogicId::LS_1_2, &implies(c.representative(), conclusion.clone()))?;
    }

    let no_interpolant =
        implication_valid && premise_side_ok && survivors_as_expected && refutation_ok;
    Ok(LipFailureReport {
        premise,
        conclusion,
        implication_valid,
        premise_model,
        premise_side_ok,
        survivors,
        survivors_as_expected,
        refuting_model,
        refutation_ok,
        no_interpolant,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kripke::Val;

    fn names() -> Vec<String> {
        vec!["p".to_string(), "q".to_string()]
    }

    fn pset(pos: &[&str], neg: &[&str]) -> PolaritySet {
        PolaritySet::new(pos.iter().copied(), neg.iter().copied())
    }

    fn point(m: Model, w: usize) -> PointedModel {
        PointedModel::new(m, w).unwrap()
    }

    fn layered(lower: Option<&[Val]>, uppers: &[&[Val]], w: usize) -> PointedModel {
        point(layered_model(&names(), lower, uppers), w)
    }

    #[test]
    fn marriage_follows_the_case_split() {
        assert_eq!(marriage_pick(&[(0, 0), (1, 1)]).unwrap(), (0, 1));
        assert_eq!(marriage_pick(&[(0, 1), (1, 0)]).unwrap(), (1, 0));
        assert_eq!(marriage_pick(&[(0, 0), (0, 1), (1, 0), (1, 1)]).unwrap(), (0, 1));
        assert_eq!(marriage_pick(&[(0, 0), (1, 0), (1, 1)]).unwrap(), (0, 1));
        assert!(matches!(
            marriage_pick(&[(0, 0), (0, 1)]),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            marriage_pick(&[(0, 0), (1, 0)]),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(marriage_pick(&[(2, 0)]), Err(Error::Precondition(_))));
    }

    #[test]
    fn cluster_matching_basics() {
        let a = layered(None, &[&[1]], 0);
        let b = layered(None, &[&[1]], 0);
        let c = layered(None, &[&[0]], 0);
        let ps = pset(&["p"], &[]);
        assert!(cluster_matches(a.model(), &[0], b.model(), &[0], &ps));
        assert!(!cluster_matches(a.model(), &[0], c.model(), &[0], &ps));
        let w = match_witnesses(a.model(), &[0], b.model(), &[0], &ps).unwrap();
        assert_eq!(w.forth, vec![(0, 0)]);
        assert_eq!(w.back, vec![(0, 0)]);
        assert!(match_witnesses(a.model(), &[0], c.model(), &[0], &ps).is_none());
    }

    #[test]
    fn triv_amalgam_is_a_single_labeled_point() {
        let a = layered(None, &[&[1]], 0);
        let b = layered(None, &[&[3]], 0);
        let ps = pset(&["p"], &[]);
        let am = build_amalgam(LogicId::Triv, &a, &b, &ps).unwrap();
        assert_eq!(am.frame.world_count(), 1);
        assert_eq!(am.label_pairs(), vec![(0, 0)]);
        assert!(verify_nip(&am, LogicId::Triv, &a, &b, &ps, am.point));
    }

    #[test]
    fn s5_amalgam_collects_all_rank0_pairs() {
        // Left cluster: {p}, {}. Right cluster: {p, q}, {q}.
        let a = layered(None, &[&[1, 0]], 0);
        let b = layered(None, &[&[3, 2]], 0);
        let ps = pset(&["p"], &[]);
        assert!(n_implies(&a, &b, &ps, 1, LogicId::S5));
        let am = build_amalgam(LogicId::S5, &a, &b, &ps).unwrap();
        assert_eq!(am.label_pairs(), vec![(0, 0), (1, 0), (1, 1)]);
        assert_eq!(am.point, 0);
        assert!(verify_nip(&am, LogicId::S5, &a, &b, &ps, am.point));
    }

    #[test]
    fn gv_root_case_uses_the_marriage_pick() {
        // Tops: left y {p}, z {}; right y {}, z {p}. Forces the anti-diagonal.
        let a = layered(Some(&[0]), &[&[1], &[0]], 0);
        let b = layered(Some(&[0]), &[&[0], &[1]], 0);
        let ps = pset(&["p"], &[]);
        assert!(n_implies(&a, &b, &ps, 3, LogicId::GV));
        let am = build_amalgam(LogicId::GV, &a, &b, &ps).unwrap();
        assert_eq!(am.label_pairs(), vec![(0, 0), (1, 2), (2, 1)]);
        assert!(verify_nip(&am, LogicId::GV, &a, &b, &ps, am.point));
    }

    #[test]
    fn every_ranked_class_amalgamates_a_model_with_itself() {
        let ps = pset(&["p"], &["q"]);
        let cases: Vec<(LogicId, PointedModel)> = vec![
            (LogicId::Triv, layered(None, &[&[1]], 0)),
            (LogicId::S5, layered(None, &[&[1, 2]], 0)),
            (LogicId::GW2, layered(Some(&[1]), &[&[3]], 0)),
            (LogicId::LS_2_1, layered(Some(&[0]), &[&[1, 2]], 0)),
            (LogicId::S4_4, layered(Some(&[0]), &[&[1, 2, 3]], 1)),
            (LogicId::GV, layered(Some(&[0]), &[&[1], &[2]], 0)),
            (LogicId::LV_2_1, layered(Some(&[0]), &[&[1, 2], &[0, 3]], 0)),
            (LogicId::LV_w_1, layered(Some(&[0]), &[&[1], &[2, 3]], 0)),
            (LogicId::GW, layered(Some(&[0]), &[&[1], &[2], &[3]], 0)),
            (LogicId::LP2_2_1, layered(Some(&[0]), &[&[1, 2]], 1)),
            (LogicId::LP2_w_1, layered(Some(&[0]), &[&[1, 2, 3], &[0]], 0)),
        ];
        for (l, pm) in cases {
            let rank = l.nip_rank().unwrap();
            assert!(n_implies(&pm, &pm, &ps, rank, l), "{l:?} self pair");
            let am = build_amalgam(l, &pm, &pm, &ps).unwrap();
            let rep = nip_report(&am, l, &pm, &pm, &ps, am.point);
            assert!(rep.all_pass(), "{l:?}: {:?}", rep.first_violation);
        }
    }

    #[test]
    fn mixed_point_positions_amalgamate() {
        let ps = pset(&["p"], &[]);
        // Same two-cluster model, evaluated at a top on the left and at the
        // root on the right, and vice versa.
        let m = layered_model(&names(), Some(&[0]), &[&[1, 0], &[1, 1]]);
        for l in [LogicId::LP2_2_1, LogicId::LV_2_1] {
            for (a, b) in [(1, 0), (0, 1), (1, 1)] {
                let pm0 = point(m.clone(), a);
                let pm1 = point(m.clone(), b);
                if !n_implies(&pm0, &pm1, &ps, l.nip_rank().unwrap(), l) {
                    continue;
                }
                let am = build_amalgam(l, &pm0, &pm1, &ps).unwrap();
                let rep = nip_report(&am, l, &pm0, &pm1, &ps, am.point);
                assert!(rep.all_pass(), "{l:?} ({a},{b}): {:?}", rep.first_violation);
            }
        }
    }

    #[test]
    fn premise_violations_are_rejected() {
        let a = layered(None, &[&[1]], 0);
        let b = layered(None, &[&[0]], 0);
        let ps = pset(&["p"], &[]);
        assert!(matches!(
            build_amalgam(LogicId::Triv, &a, &b, &ps),
            Err(Error::Precondition(_))
        ));
        let chain = layered(Some(&[1]), &[&[1]], 0);
        assert!(matches!(
            build_amalgam(LogicId::Triv, &chain, &chain, &ps),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            build_amalgam(LogicId::LS_1_2, &chain, &chain, &ps),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn verification_flags_the_first_broken_clause() {
        let ps = pset(&["p"], &[]);
        let a = layered(Some(&[0]), &[&[1]], 0);
        let b = layered(Some(&[1]), &[&[1]], 0);
        assert!(n_implies(&a, &b, &ps, 2, LogicId::GW2));
        let am = build_amalgam(LogicId::GW2, &a, &b, &ps).unwrap();
        assert!(verify_nip(&am, LogicId::GW2, &a, &b, &ps, am.point));

        // Swapping the sources breaks rank-0 transfer at the root.
        let rep = nip_report(&am, LogicId::GW2, &b, &a, &ps, am.point);
        assert!(!rep.all_pass());
        assert!(rep.first_violation.unwrap().starts_with("pairs_rank0"));

        // A three-chain is not a two-chain frame.
        let chain3 = Frame::closed(3, &[(0, 1), (1, 2)]).unwrap();
        let bad = LabeledAmalgam {
            frame: chain3,
            point: 0,
            label0: vec![0, 1, 1],
            label1: vec![0, 1, 1],
        };
        let rep = nip_report(&bad, LogicId::GW2, &a, &b, &ps, 0);
        assert!(!rep.passed[0]);
        assert!(rep.first_violation.unwrap().starts_with("frame_in_class"));
    }

    #[test]
    fn matching_lemmas_hold_on_hand_instances() {
        let ps = pset(&["p"], &[]);
        let s5 = layered(None, &[&[1, 0]], 0);
        let inst = LemmaInstance { pm0: s5.clone(), pm1: s5.clone(), ps: ps.clone() };
        assert!(check_matching_lemma(MatchingLemma::PointMatch, &inst).unwrap());
        assert!(check_matching_lemma(MatchingLemma::PairWitnesses, &inst).unwrap());

        let fork = layered(Some(&[0]), &[&[1], &[0]], 0);
        let inst = LemmaInstance { pm0: fork.clone(), pm1: fork.clone(), ps: ps.clone() };
        assert!(check_matching_lemma(MatchingLemma::MutualMatch, &inst).unwrap());
        assert!(check_matching_lemma(MatchingLemma::ClusterAssignment, &inst).unwrap());

        // A p-everywhere fan lets the final point reach the root at rank 2.
        let shrub = layered_model(&names(), Some(&[1]), &[&[1], &[1]]);
        let inst = LemmaInstance {
            pm0: point(shrub.clone(), 1),
            pm1: point(shrub, 0),
            ps,
        };
        assert!(check_matching_lemma(MatchingLemma::RootMatch, &inst).unwrap());
    }

    #[test]
    fn lemma_hypothesis_violations_are_rejected() {
        let ps = pset(&["p"], &[]);
        let s5 = layered(None, &[&[1, 0]], 0);
        let singleton = layered(None, &[&[1]], 0);
        let inst = LemmaInstance { pm0: singleton.clone(), pm1: singleton.clone(), ps: ps.clone() };
        assert!(matches!(
            check_matching_lemma(MatchingLemma::PairWitnesses, &inst),
            Err(Error::Precondition(_))
        ));
        // A final point where the root is required.
        let inst = LemmaInstance { pm0: s5.clone(), pm1: s5.clone(), ps: ps.clone() };
        assert!(matches!(
            check_matching_lemma(MatchingLemma::RootMatch, &inst),
            Err(Error::Precondition(_))
        ));
        // Rank-1 transfer failing blocks the point-match hypothesis.
        let without_p = layered(None, &[&[0]], 0);
        let inst = LemmaInstance { pm0: s5, pm1: without_p, ps };
        assert!(matches!(
            check_matching_lemma(MatchingLemma::PointMatch, &inst),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn the_failure_report_reproduces_every_clause() {
        let rep = lip_failure_report().unwrap();
        assert!(rep.implication_valid);
        assert!(rep.premise_side_ok);
        assert_eq!(
            rep.survivors,
            vec![Ls12Class::P, Ls12Class::POrBoxDiaP, Ls12Class::DiaP, Ls12Class::Top]
        );
        assert!(rep.survivors_as_expected);
        assert!(rep.refutation_ok);
        assert!(rep.no_interpolant);
    }
}
