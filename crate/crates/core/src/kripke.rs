//! Finite reflexive-transitive Kripke frames and models.
//!
//! Everything downstream works over the thirteen frame classes named by
//! [`LogicId`]. A frame here is a reflexive transitive relation on at most
//! [`MAX_WORLDS`] worlds, stored as one bitset row per world. Models attach a
//! valuation to every world. This module provides satisfaction, the cluster
//! partition (equivalence classes of mutual reachability), p-morphism
//! checking, per-class shape recognizers, and the canonical model
//! enumerations that make validity checking finite.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::bits::Bits;
use crate::formula::Formula;
use crate::{Error, Result};

/// Hard ceiling on frame size; keeps bitset rows and closure loops cheap.
pub const MAX_WORLDS: usize = 256;

/// Valuation bitmask over a sorted variable list (bit i = variable i true).
pub(crate) type Val = u8;

/// A finite S4 frame: reflexive transitive relation over `0..world_count`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    n: usize,
    rows: Vec<Bits>,
}

impl Frame {
    /// Builds a frame, rejecting relations that are not reflexive and transitive.
    pub fn new(world_count: usize, pairs: &[(usize, usize)]) -> Result<Frame> {
        let mut f = Frame::empty(world_count)?;
        for &(i, j) in pairs {
            if i >= world_count || j >= world_count {
                return Err(Error::InvalidModel(format!(
                    "relation pair ({i}, {j}) out of range for {world_count} worlds"
                )));
            }
            f.rows[i].set(j, true);
        }
        f.check_s4()?;
        Ok(f)
    }

    /// Builds a frame from arbitrary arrows by closing reflexively and transitively.
    pub fn closed(world_count: usize, pairs: &[(usize, usize)]) -> Result<Frame> {
        let mut f = Frame::empty(world_count)?;
        for &(i, j) in pairs {
            if i >= world_count || j >= world_count {
                return Err(Error::InvalidModel(format!(
                    "relation pair ({i}, {j}) out of range for {world_count} worlds"
                )));
            }
            f.rows[i].set(j, true);
        }
        for i in 0..world_count {
            f.rows[i].set(i, true);
        }
        // Floyd-Warshall reachability: whenever i sees k, i absorbs k's row.
        loop {
            let mut changed = false;
            for i in 0..world_count {
                let mut row = f.rows[i].clone();
                for k in f.rows[i].iter_ones() {
                    row = row.or(&f.rows[k]);
                }
                if row != f.rows[i] {
                    f.rows[i] = row;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        Ok(f)
    }

    fn empty(world_count: usize) -> Result<Frame> {
        if world_count == 0 {
            return Err(Error::InvalidModel("a frame needs at least one world".into()));
        }
        if world_count > MAX_WORLDS {
            return Err(Error::InvalidModel(format!(
                "{world_count} worlds exceeds the supported maximum of {MAX_WORLDS}"
            )));
        }
        Ok(Frame { n: world_count, rows: vec![Bits::zeros(world_count); world_count] })
    }

    fn check_s4(&self) -> Result<()> {
        for i in 0..self.n {
            if !self.rows[i].get(i) {
                return Err(Error::InvalidModel(format!("relation is not reflexive at world {i}")));
            }
        }
        for i in 0..self.n {
            for k in self.rows[i].iter_ones() {
                if !self.rows[k].subset_of(&self.rows[i]) {
                    return Err(Error::InvalidModel(format!(
                        "relation is not transitive through {i} -> {k}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Number of worlds.
    pub fn world_count(&self) -> usize {
        self.n
    }

    /// Whether world `i` sees world `j`.
    pub fn sees(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    /// Iterates the successors of `i` in ascending order.
    pub fn successors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.rows[i].iter_ones()
    }

    pub(crate) fn row(&self, i: usize) -> &Bits {
        &self.rows[i]
    }

    /// All related pairs, lexicographically ordered.
    pub fn relation_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in self.rows[i].iter_ones() {
                out.push((i, j));
            }
        }
        out
    }
}

/// A Kripke model: frame plus a valuation for every world.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    frame: Frame,
    valuation: Vec<BTreeSet<String>>,
}

impl Model {
    /// Pairs a frame with per-world variable sets; one set per world required.
    pub fn new(frame: Frame, valuation: Vec<BTreeSet<String>>) -> Result<Model> {
        if valuation.len() != frame.world_count() {
            return Err(Error::InvalidModel(format!(
                "valuation covers {} worlds but the frame has {}",
                valuation.len(),
                frame.world_count()
            )));
        }
        Ok(Model { frame, valuation })
    }

    /// The underlying frame.
    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    /// Number of worlds.
    pub fn world_count(&self) -> usize {
        self.frame.world_count()
    }

    /// Variables true at world `w`.
    pub fn val(&self, w: usize) -> &BTreeSet<String> {
        &self.valuation[w]
    }

    /// Worlds where `f` is true, as a bitset.
    pub(crate) fn truth_set(&self, f: &Formula) -> Bits {
        let n = self.world_count();
        match f {
            Formula::Var(p) => {
                let mut b = Bits::zeros(n);
                for w in 0..n {
                    if self.valuation[w].contains(p) {
                        b.set(w, true);
                    }
                }
                b
            }
            Formula::Bottom => Bits::zeros(n),
            Formula::Top => Bits::ones(n),
            Formula::Not(a) => self.truth_set(a).not(),
            Formula::And(a, b) => self.truth_set(a).and(&self.truth_set(b)),
            Formula::Or(a, b) => self.truth_set(a).or(&self.truth_set(b)),
            Formula::Implies(a, b) => self.truth_set(a).not().or(&self.truth_set(b)),
            Formula::Box_(a) => {
                let ta = self.truth_set(a);
                let mut b = Bits::zeros(n);
                for w in 0..n {
                    if self.frame.rows[w].subset_of(&ta) {
                        b.set(w, true);
                    }
                }
                b
            }
        }
    }

    /// Parses the documented JSON model schema.
    pub fn from_json(text: &str) -> Result<Model> {
        let raw: ModelJson = serde_json::from_str(text)
            .map_err(|e| Error::InvalidModel(format!("bad model JSON: {e}")))?;
        let frame = if raw.closure {
            Frame::closed(raw.worlds, &raw.relation)?
        } else {
            Frame::new(raw.worlds, &raw.relation)?
        };
        let mut valuation = vec![BTreeSet::new(); raw.worlds];
        for (k, vars) in &raw.valuation {
            let w: usize = k
                .parse()
                .map_err(|_| Error::InvalidModel(format!("valuation key {k:?} is not a world index")))?;
            if w >= raw.worlds {
                return Err(Error::InvalidModel(format!("valuation key {w} out of range")));
            }
            valuation[w] = vars.iter().cloned().collect();
        }
        Model::new(frame, valuation)
    }

    /// Emits the documented JSON model schema (closure flag false, relation explicit).
    pub fn to_json(&self) -> String {
        let raw = ModelJson {
            worlds: self.world_count(),
            relation: self.frame.relation_pairs(),
            closure: false,
            valuation: (0..self.world_count())
                .map(|w| (w.to_string(), self.valuation[w].iter().cloned().collect()))
                .collect(),
        };
        serde_json::to_string(&raw).expect("model serialization cannot fail")
    }
}

#[derive(Serialize, Deserialize)]
struct ModelJson {
    worlds: usize,
    relation: Vec<(usize, usize)>,
    #[serde(default)]
    closure: bool,
    #[serde(default)]
    valuation: BTreeMap<String, Vec<String>>,
}

/// A model with a designated evaluation world.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointedModel {
    model: Model,
    point: usize,
}

impl PointedModel {
    /// Designates `point` in `model`; the index must be in range.
    pub fn new(model: Model, point: usize) -> Result<PointedModel> {
        if point >= model.world_count() {
            return Err(Error::InvalidModel(format!(
                "point {point} out of range for {} worlds",
                model.world_count()
            )));
        }
        Ok(PointedModel { model, point })
    }

    /// The underlying model.
    pub fn model(&self) -> &Model {
        &self.model
    }

    /// The designated world.
    pub fn point(&self) -> usize {
        self.point
    }
}

/// Truth of `f` at the designated world, with Box ranging over all successors.
pub fn satisfies(pm: &PointedModel, f: &Formula) -> bool {
    pm.model().truth_set(f).get(pm.point())
}

/// The thirteen frame classes the workbench decides.
#[allow(non_camel_case_types)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LogicId {
    Triv,
    S5,
    GW2,
    LS_2_1,
    S4_4,
    GV,
    LV_2_1,
    LV_w_1,
    GW,
    LP2_2_1,
    LP2_w_1,
    LS_1_2,
    LP2_1_w,
}

impl LogicId {
    /// All supported logics in a fixed order.
    pub fn all() -> [LogicId; 13] {
        use LogicId::*;
        [Triv, S5, GW2, LS_2_1, S4_4, GV, LV_2_1, LV_w_1, GW, LP2_2_1, LP2_w_1, LS_1_2, LP2_1_w]
    }

    /// Lowercase command-line tag.
    pub fn tag(&self) -> &'static str {
        use LogicId::*;
        match self {
            Triv => "triv",
            S5 => "s5",
            GW2 => "gw2",
            LS_2_1 => "ls21",
            S4_4 => "s44",
            GV => "gv",
            LV_2_1 => "lv21",
            LV_w_1 => "lvw1",
            GW => "gw",
            LP2_2_1 => "lp2_21",
            LP2_w_1 => "lp2_w1",
            LS_1_2 => "ls12",
            LP2_1_w => "lp2_1w",
        }
    }

    /// Conventional display name of the logic.
    pub fn display_name(&self) -> &'static str {
        use LogicId::*;
        match self {
            Triv => "Triv",
            S5 => "S5",
            GW2 => "GW.2",
            LS_2_1 => "Gamma(LS,2,1)",
            S4_4 => "S4.4",
            GV => "GV",
            LV_2_1 => "Gamma(LV,2,1)",
            LV_w_1 => "Gamma(LV,w,1)",
            GW => "GW",
            LP2_2_1 => "Gamma(LP2,2,1)",
            LP2_w_1 => "Gamma(LP2,w,1)",
            LS_1_2 => "Gamma(LS,1,2)",
            LP2_1_w => "Gamma(LP2,1,w)",
        }
    }

    /// Parses a command-line tag.
    pub fn from_tag(tag: &str) -> Result<LogicId> {
        LogicId::all()
            .into_iter()
            .find(|l| l.tag() == tag)
            .ok_or_else(|| Error::UnknownLogic(tag.to_string()))
    }

    /// The amalgamation rank the class supports, if any.
    pub fn nip_rank(&self) -> Option<u32> {
        use LogicId::*;
        match self {
            Triv => Some(0),
            S5 => Some(1),
            GW2 | LS_2_1 | S4_4 => Some(2),
            GV | LV_2_1 | LV_w_1 | GW | LP2_2_1 | LP2_w_1 => Some(3),
            LS_1_2 | LP2_1_w => None,
        }
    }
}

/// The partition of a frame into clusters, with root and final flags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterPartition {
    /// Disjoint blocks covering all worlds, ordered by least member.
    pub blocks: Vec<Vec<usize>>,
    /// Block index of each world.
    pub cluster_of: Vec<usize>,
    /// Whether each block's worlds relate only within the block.
    pub is_final: Vec<bool>,
    /// Index of the block that reaches every world, when one exists.
    pub root_block: Option<usize>,
}

impl ClusterPartition {
    /// Indices of the final blocks, in block order.
    pub fn final_blocks(&self) -> Vec<usize> {
        (0..self.blocks.len()).filter(|&b| self.is_final[b]).collect()
    }
}

/// Computes the cluster partition of a model's frame.
pub fn clusters(m: &Model) -> ClusterPartition {
    let f = m.frame();
    let n = f.world_count();
    let mut cluster_of = vec![usize::MAX; n];
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for w in 0..n {
        if cluster_of[w] != usize::MAX {
            continue;
        }
        let id = blocks.len();
        let mut block = Vec::new();
        for u in f.successors(w) {
            if f.sees(u, w) {
                cluster_of[u] = id;
                block.push(u);
            }
        }
        blocks.push(block);
    }
    let is_final: Vec<bool> = blocks
        .iter()
        .map(|b| b.iter().all(|&w| f.successors(w).all(|u| cluster_of[u] == cluster_of[w])))
        .collect();
    let root_block = (0..blocks.len()).find(|&b| {
        let w = blocks[b][0];
        f.row(w).count_ones() == n
    });
    ClusterPartition { blocks, cluster_of, is_final, root_block }
}

/// Whether the model's frame has the shape of class `l`.
pub fn in_class(m: &Model, l: LogicId) -> bool {
    let part = clusters(m);
    let nblocks = part.blocks.len();
    let singleton = |b: usize| part.blocks[b].len() == 1;
    let pair = |b: usize| part.blocks[b].len() == 2;
    // Shape "single root world strictly below final clusters": one singleton
    // root block seeing everything, every other block final.
    let rooted_finals = || -> Option<Vec<usize>> {
        let r = part.root_block?;
        if !singleton(r) || part.is_final[r] || nblocks < 2 {
            return None;
        }
        let finals: Vec<usize> = (0..nblocks).filter(|&b| b != r).collect();
        if finals.iter().all(|&b| part.is_final[b]) {
            Some(finals)
        } else {
            None
        }
    };
    match l {
        LogicId::Triv => m.world_count() == 1,
        LogicId::S5 => nblocks == 1,
        LogicId::GW2 => rooted_finals().map_or(false, |f| f.len() == 1 && singleton(f[0])),
        LogicId::LS_2_1 => rooted_finals().map_or(false, |f| f.len() == 1 && pair(f[0])),
        LogicId::S4_4 => rooted_finals().map_or(false, |f| f.len() == 1),
        LogicId::GV => rooted_finals().map_or(false, |f| f.len() == 2 && f.iter().all(|&b| singleton(b))),
        LogicId::LV_2_1 => rooted_finals().map_or(false, |f| f.len() == 2 && f.iter().all(|&b| pair(b))),
        LogicId::LV_w_1 => rooted_finals().map_or(false, |f| f.len() == 2),
        LogicId::GW => rooted_finals().map_or(false, |f| f.iter().all(|&b| singleton(b))),
        LogicId::LP2_2_1 => rooted_finals().map_or(false, |f| f.iter().all(|&b| pair(b))),
        LogicId::LP2_w_1 => rooted_finals().is_some(),
        LogicId::LS_1_2 => {
            // One 2-cluster strictly below one final singleton.
            nblocks == 2
                && part.root_block.map_or(false, |r| {
                    pair(r) && !part.is_final[r] && {
                        let other = 1 - r;
                        singleton(other) && part.is_final[other]
                    }
                })
        }
        LogicId::LP2_1_w => {
            // One inner cluster seeing every world, all other blocks final singletons.
            part.root_block.map_or(false, |r| {
                !part.is_final[r]
                    && nblocks >= 2
                    && (0..nblocks).all(|b| b == r || (part.is_final[b] && singleton(b)))
            })
        }
    }
}

/// Checks the forth and back conditions for `f` as a map of worlds.
pub fn check_pmorphism(f: &[usize], source: &Frame, target: &Frame) -> bool {
    if f.len() != source.world_count() || f.iter().any(|&w| w >= target.world_count()) {
        return false;
    }
    for x in 0..source.world_count() {
        for y in source.successors(x) {
            if !target.sees(f[x], f[y]) {
                return false;
            }
        }
        for w in target.successors(f[x]) {
            if !source.successors(x).any(|z| f[z] == w) {
                return false;
            }
        }
    }
    true
}

/// Expands a valuation bitmask over a sorted variable slice.
pub(crate) fn val_set(vars: &[String], v: Val) -> BTreeSet<String> {
    vars.iter()
        .enumerate()
        .filter(|(i, _)| v >> i & 1 == 1)
        .map(|(_, p)| p.clone())
        .collect()
}

/// Builds a model from an optional lower cluster below a row of final clusters.
///
/// The lower cluster (when present) occupies the first world indices and sees
/// everything; each upper cluster is internally complete and final. World
/// order is lower cluster first, then upper clusters left to right, values in
/// the given order.
pub(crate) fn layered_model(vars: &[String], lower: Option<&[Val]>, uppers: &[&[Val]]) -> Model {
    let lower_n = lower.map_or(0, |c| c.len());
    let upper_n: usize = uppers.iter().map(|c| c.len()).sum();
    let n = lower_n + upper_n;
    assert!(n >= 1, "layered model needs at least one world");
    let mut pairs = Vec::new();
    for i in 0..lower_n {
        for j in 0..n {
            pairs.push((i, j));
        }
    }
    let mut base = lower_n;
    for c in uppers {
        for i in 0..c.len() {
            for j in 0..c.len() {
                pairs.push((base + i, base + j));
            }
        }
        base += c.len();
    }
    let frame = Frame::new(n, &pairs).expect("layered frames are reflexive and transitive");
    let mut valuation = Vec::with_capacity(n);
    if let Some(c) = lower {
        valuation.extend(c.iter().map(|&v| val_set(vars, v)));
    }
    for c in uppers {
        valuation.extend(c.iter().map(|&v| val_set(vars, v)));
    }
    Model::new(frame, valuation).expect("layered valuation matches world count")
}

fn nonempty_subsets(nv: usize) -> Vec<Vec<Val>> {
    let count = 1usize << (1 << nv);
    (1..count)
        .map(|mask| (0..(1u16 << nv) as usize).filter(|v| mask >> v & 1 == 1).map(|v| v as Val).collect())
        .collect()
}

fn multisets2(nv: usize) -> Vec<(Val, Val)> {
    let nvals = 1u16 << nv;
    let mut out = Vec::new();
    for a in 0..nvals {
        for b in a..nvals {
            out.push((a as Val, b as Val));
        }
    }
    out
}

fn check_vars(vars: &BTreeSet<String>) -> Result<Vec<String>> {
    if vars.len() > 4 {
        return Err(Error::ResourceLimit(format!(
            "canonical enumeration supports at most 4 variables, got {}",
            vars.len()
        )));
    }
    Ok(vars.iter().cloned().collect())
}

/// Closed-form size of `canonical_models(l, vars)`.
pub fn canonical_count(l: LogicId, vars: &BTreeSet<String>) -> Result<u128> {
    let nv = check_vars(vars)?.len();
    let nvals = 1u128 << nv;
    let sets = (1u128 << nvals) - 1;
    let multis = nvals * (nvals + 1) / 2;
    let pow2 = |e: u128| -> Result<u128> {
        if e >= 127 {
            Err(Error::ResourceLimit(format!("canonical family of {l:?} too large at {nv} variables")))
        } else {
            Ok((1u128 << e) - 1)
        }
    };
    Ok(match l {
        LogicId::Triv => nvals,
        LogicId::S5 => sets,
        LogicId::GW2 => nvals * nvals,
        LogicId::LS_2_1 => nvals * multis,
        LogicId::S4_4 => nvals * sets,
        LogicId::GV => nvals * nvals * nvals,
        LogicId::LV_2_1 => nvals * multis * multis,
        LogicId::LV_w_1 => nvals * sets * sets,
        LogicId::GW => nvals * sets,
        LogicId::LP2_2_1 => nvals * pow2(multis)?,
        LogicId::LP2_w_1 => nvals * pow2(sets)?,
        LogicId::LS_1_2 => multis * nvals,
        LogicId::LP2_1_w => sets * sets,
    })
}

const CANONICAL_CAP: u128 = 200_000;

/// Streams every canonical model of the class in a fixed order.
///
/// The callback returns `false` to stop early. The enumeration is the finite
/// validity-complete list behind the provability routines: duplicate
/// valuations inside arbitrary-size clusters are collapsed, arbitrary-count
/// cluster rows keep one cluster per valuation signature, and fixed-size
/// shapes enumerate valuations exhaustively.
pub fn for_each_canonical_model<F: FnMut(Model) -> bool>(
    l: LogicId,
    vars: &BTreeSet<String>,
    mut f: F,
) -> Result<()> {
    let vlist = check_vars(vars)?;
    let nv = vlist.len();
    let nvals = 1u16 << nv;
    let vals: Vec<Val> = (0..nvals).rev().map(|v| v as Val).collect();
    let subsets = nonempty_subsets(nv);
    let multis = multisets2(nv);
    // Guard astronomically large enumerations before looping.
    let total = canonical_count(l, vars)?;
    if total > CANONICAL_CAP {
        return Err(Error::ResourceLimit(format!(
            "canonical family of {:?} over {} variables has {} models (cap {})",
            l, nv, total, CANONICAL_CAP
        )));
    }
    let vr = &vlist;
    macro_rules! emit {
        ($m:expr) => {
            if !f($m) {
                return Ok(());
            }
        };
    }
    match l {
        LogicId::Triv => {
            for &v in &vals {
                emit!(layered_model(vr, None, &[&[v]]));
            }
        }
        LogicId::S5 => {
            for s in &subsets {
                emit!(layered_model(vr, None, &[s]));
            }
        }
        LogicId::GW2 => {
            for &root in &vals {
                for &t in &vals {
                    emit!(layered_model(vr, Some(&[root]), &[&[t]]));
                }
            }
        }
        LogicId::LS_2_1 => {
            for &root in &vals {
                for &(a, b) in &multis {
                    emit!(layered_model(vr, Some(&[root]), &[&[a, b]]));
                }
            }
        }
        LogicId::S4_4 => {
            for &root in &vals {
                for s in &subsets {
                    emit!(layered_model(vr, Some(&[root]), &[s]));
                }
            }
        }
        LogicId::GV => {
            for &root in &vals {
                for &t1 in &vals {
                    for &t2 in &vals {
                        emit!(layered_model(vr, Some(&[root]), &[&[t1], &[t2]]));
                    }
                }
            }
        }
        LogicId::LV_2_1 => {
            for &root in &vals {
                for &(a, b) in &multis {
                    for &(c, d) in &multis {
                        emit!(layered_model(vr, Some(&[root]), &[&[a, b], &[c, d]]));
                    }
                }
            }
        }
        LogicId::LV_w_1 => {
            for &root in &vals {
                for s1 in &subsets {
                    for s2 in &subsets {
                        emit!(layered_model(vr, Some(&[root]), &[s1, s2]));
                    }
                }
            }
        }
        LogicId::GW => {
            for &root in &vals {
                for tops in &subsets {
                    let row: Vec<&[Val]> = tops.iter().map(std::slice::from_ref).collect();
                    emit!(layered_model(vr, Some(&[root]), &row));
                }
            }
        }
        LogicId::LP2_2_1 => {
            for &root in &vals {
                for mask in 1usize..1 << multis.len() {
                    let chosen: Vec<[Val; 2]> = multis
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask >> i & 1 == 1)
                        .map(|(_, &(a, b))| [a, b])
                        .collect();
                    let row: Vec<&[Val]> = chosen.iter().map(|c| c.as_slice()).collect();
                    emit!(layered_model(vr, Some(&[root]), &row));
                }
            }
        }
        LogicId::LP2_w_1 => {
            for &root in &vals {
                for mask in 1usize..1 << subsets.len() {
                    let row: Vec<&[Val]> = subsets
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask >> i & 1 == 1)
                        .map(|(_, s)| s.as_slice())
                        .collect();
                    emit!(layered_model(vr, Some(&[root]), &row));
                }
            }
        }
        LogicId::LS_1_2 => {
            for &(a, b) in &multis {
                for &t in &vals {
                    emit!(layered_model(vr, Some(&[a, b]), &[&[t]]));
                }
            }
        }
        LogicId::LP2_1_w => {
            for inner in &subsets {
                for tops in &subsets {
                    let row: Vec<&[Val]> = tops.iter().map(std::slice::from_ref).collect();
                    emit!(layered_model(vr, Some(inner), &row));
                }
            }
        }
    }
    Ok(())
}

/// Collects the canonical model list; errors above the enumeration cap.
pub fn canonical_models(l: LogicId, vars: &BTreeSet<String>) -> Result<Vec<Model>> {
    let mut out = Vec::new();
    for_each_canonical_model(l, vars, |m| {
        out.push(m);
        true
    })?;
    Ok(out)
}
