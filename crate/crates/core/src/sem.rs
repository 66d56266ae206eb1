//! Finite evaluation spaces that decide validity over a whole frame class.
//!
//! Every class in [`LogicId`] consists of models whose worlds fall into two
//! sorts: worlds inside a final cluster, whose theory depends only on the
//! cluster they inhabit, and a bottom world (root or inner-cluster member)
//! whose boxed subformulas range over the entire model. The evaluator keeps a
//! concrete configuration for every possible final-cluster world, and an
//! abstract configuration for every bottom world: a valuation paired with an
//! achievable "box environment", the bit-vector recording which boxed
//! subformulas hold throughout all clusters of some model. Environments are
//! computed as meets of per-cluster seed vectors, closed under the class's
//! cluster-count discipline, and each carries a witness cluster list so that
//! failing configurations can be materialized as honest countermodels.
//!
//! Truth of a formula at every configuration equals its truth at the
//! corresponding world of any witnessing model, so a formula is valid in the
//! class iff it holds at every configuration. The box alphabet grows as
//! formulas are added; environments are then recomputed, which refines the
//! abstraction without disturbing distinctions already established.

use std::collections::{BTreeSet, HashMap};

use crate::bits::Bits;
use crate::formula::Formula;
use crate::kripke::{layered_model, LogicId, PointedModel, Val, MAX_WORLDS};
use crate::{Error, Result};

const FIXED_CAP: usize = 8192;
const BOX_CAP: usize = 4096;
const DEFAULT_CLOSURE_CAP: usize = 8192;
const ROOT_CAP: usize = 131072;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) enum NodeOp {
    Bot,
    Top,
    Var(u8),
    Not(u32),
    And(u32, u32),
    Or(u32, u32),
    Box_(u32),
}

#[derive(Debug, Clone)]
struct Node {
    op: NodeOp,
    fixed: Bits,
    root: Bits,
}

/// How the class constrains the multiset of final clusters in one model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum RootKind {
    /// Triv, S5, and the two-layer fixed shapes: no abstract bottom needed.
    NoRoot,
    /// Exactly one final cluster below the root.
    One,
    /// Exactly two final clusters below the root.
    TwoExact,
    /// Any positive number of final clusters below the root.
    Many,
    /// Inner cluster below any positive number of final singletons.
    InnerMany,
}

/// What a concrete configuration stands for; drives materialization.
#[derive(Debug, Clone)]
enum CfgShape {
    /// A one-world model (Triv).
    TrivPoint,
    /// World with valuation `val` inside final cluster `sig` of the universe.
    ClusterWorld { sig: u32 },
    /// Bottom-cluster world of the two-layer 2-cluster shape.
    Ls12Bottom { pair: (Val, Val), top: Val },
    /// Top world of the two-layer 2-cluster shape.
    Ls12Top { top: Val },
    /// Final singleton above an inner cluster.
    TopWorld,
}

#[derive(Debug, Clone)]
struct FixedCfg {
    val: Val,
    /// Configuration indices a box at this world quantifies over (self included).
    scope: Vec<u32>,
    shape: CfgShape,
}

#[derive(Debug, Clone)]
struct ClosureElem {
    /// Bit per box node: operand holds throughout every cluster of the witness.
    vec: Bits,
    /// Universe indices of clusters realizing this environment.
    witness: Vec<u32>,
}

#[derive(Debug, Clone, Copy)]
struct RootCfg {
    val: Val,
    elem: u32,
    /// Index into `inner_sigs` (InnerMany only; 0 elsewhere).
    inner: u32,
}

/// Shared formula DAG evaluated over all configurations of one class.
#[derive(Debug, Clone)]
pub(crate) struct Evaluator {
    logic: LogicId,
    vars: Vec<String>,
    kind: RootKind,
    /// Cluster valuation signatures a final cluster may carry.
    universe: Vec<Vec<Val>>,
    /// Fixed configuration indices forming each universe cluster.
    groups: Vec<Vec<u32>>,
    /// Inner-cluster signatures (InnerMany only).
    inner_sigs: Vec<Vec<Val>>,
    fixed_cfgs: Vec<FixedCfg>,
    nodes: Vec<Node>,
    cons: HashMap<NodeOp, u32>,
    /// Box node ids in creation order; positions index environment vectors.
    boxes: Vec<u32>,
    box_pos: HashMap<u32, u32>,
    closure: Vec<ClosureElem>,
    root_cfgs: Vec<RootCfg>,
    dirty: bool,
    generation: u64,
    pub(crate) closure_cap: usize,
}

fn subsets_nonempty(nv: usize) -> Vec<Vec<Val>> {
    let nvals = 1usize << nv;
    (1..1usize << nvals)
        .map(|mask| (0..nvals).filter(|v| mask >> v & 1 == 1).map(|v| v as Val).collect())
        .collect()
}

fn pair_multisets(nv: usize) -> Vec<Vec<Val>> {
    let nvals = 1u16 << nv;
    let mut out = Vec::new();
    for a in 0..nvals {
        for b in a..nvals {
            out.push(vec![a as Val, b as Val]);
        }
    }
    out
}

fn singletons(nv: usize) -> Vec<Vec<Val>> {
    (0..1u16 << nv).map(|v| vec![v as Val]).collect()
}

impl Evaluator {
    pub fn new(logic: LogicId, vars: &BTreeSet<String>) -> Result<Evaluator> {
        let vars: Vec<String> = vars.iter().cloned().collect();
        if vars.len() > 8 {
            return Err(Error::ResourceLimit(format!(
                "evaluation supports at most 8 variables, got {}",
                vars.len()
            )));
        }
        let nv = vars.len();
        let nvals = 1u16 << nv;
        use LogicId::*;
        let kind = match logic {
            Triv | S5 | LS_1_2 => RootKind::NoRoot,
            GW2 | LS_2_1 | S4_4 => RootKind::One,
            GV | LV_2_1 | LV_w_1 => RootKind::TwoExact,
            GW | LP2_2_1 | LP2_w_1 => RootKind::Many,
            LP2_1_w => RootKind::InnerMany,
        };
        let universe: Vec<Vec<Val>> = match logic {
            Triv => Vec::new(),
            S5 | S4_4 | LV_w_1 | LP2_w_1 => subsets_nonempty(nv),
            GW2 | GV | GW | LP2_1_w => singletons(nv),
            LS_2_1 | LV_2_1 | LP2_2_1 => pair_multisets(nv),
            LS_1_2 => Vec::new(),
        };
        let inner_sigs = if kind == RootKind::InnerMany { subsets_nonempty(nv) } else { Vec::new() };

        let mut fixed_cfgs: Vec<FixedCfg> = Vec::new();
        let mut groups: Vec<Vec<u32>> = vec![Vec::new(); universe.len()];
        match logic {
            Triv => {
                for v in 0..nvals {
                    let i = fixed_cfgs.len() as u32;
                    fixed_cfgs.push(FixedCfg { val: v as Val, scope: vec![i], shape: CfgShape::TrivPoint });
                }
            }
            LS_1_2 => {
                // Top worlds first so bottom scopes can reference them.
                for t in 0..nvals {
                    let i = fixed_cfgs.len() as u32;
                    fixed_cfgs.push(FixedCfg {
                        val: t as Val,
                        scope: vec![i],
                        shape: CfgShape::Ls12Top { top: t as Val },
                    });
                }
                for a in 0..nvals {
                    for b in a..nvals {
                        for t in 0..nvals {
                            let base = fixed_cfgs.len() as u32;
                            let members: Vec<Val> =
                                if a == b { vec![a as Val] } else { vec![a as Val, b as Val] };
                            let mut scope: Vec<u32> =
                                (0..members.len() as u32).map(|j| base + j).collect();
                            scope.push(t as u32);
                            for &v in &members {
                                fixed_cfgs.push(FixedCfg {
                                    val: v,
                                    scope: scope.clone(),
                                    shape: CfgShape::Ls12Bottom { pair: (a as Val, b as Val), top: t as Val },
                                });
                            }
                        }
                    }
                }
            }
            LP2_1_w => {
                for t in 0..nvals {
                    let i = fixed_cfgs.len() as u32;
                    fixed_cfgs.push(FixedCfg { val: t as Val, scope: vec![i], shape: CfgShape::TopWorld });
                    groups[t as usize].push(i);
                }
            }
            _ => {
                for (si, sig) in universe.iter().enumerate() {
                    let distinct: Vec<Val> = {
                        let mut d = sig.clone();
                        d.dedup();
                        d
                    };
                    let base = fixed_cfgs.len() as u32;
                    let scope: Vec<u32> = (0..distinct.len() as u32).map(|j| base + j).collect();
                    for &v in &distinct {
                        groups[si].push(fixed_cfgs.len() as u32);
                        fixed_cfgs.push(FixedCfg {
                            val: v,
                            scope: scope.clone(),
                            shape: CfgShape::ClusterWorld { sig: si as u32 },
                        });
                    }
                }
            }
        }
        if fixed_cfgs.len() > FIXED_CAP {
            return Err(Error::ResourceLimit(format!(
                "{logic:?} over {nv} variables needs {} cluster configurations (cap {FIXED_CAP})",
                fixed_cfgs.len()
            )));
        }
        Ok(Evaluator {
            logic,
            vars,
            kind,
            universe,
            groups,
            inner_sigs,
            fixed_cfgs,
            nodes: Vec::new(),
            cons: HashMap::new(),
            boxes: Vec::new(),
            box_pos: HashMap::new(),
            closure: Vec::new(),
            root_cfgs: Vec::new(),
            dirty: true,
            generation: 0,
            closure_cap: DEFAULT_CLOSURE_CAP,
        })
    }

    /// Interns a formula, returning its node id.
    pub fn add(&mut self, f: &Formula) -> Result<u32> {
        let op = match f {
            Formula::Var(p) => {
                let i = self
                    .vars
                    .iter()
                    .position(|q| q == p)
                    .ok_or_else(|| Error::Internal(format!("variable {p} outside evaluation vocabulary")))?;
                NodeOp::Var(i as u8)
            }
            Formula::Bottom => NodeOp::Bot,
            Formula::Top => NodeOp::Top,
            Formula::Not(a) => NodeOp::Not(self.add(a)?),
            Formula::And(a, b) => NodeOp::And(self.add(a)?, self.add(b)?),
            Formula::Or(a, b) => NodeOp::Or(self.add(a)?, self.add(b)?),
            Formula::Implies(a, b) => {
                let na = self.add(a)?;
                let not_a = self.intern(NodeOp::Not(na))?;
                let nb = self.add(b)?;
                NodeOp::Or(not_a, nb)
            }
            Formula::Box_(a) => NodeOp::Box_(self.add(a)?),
        };
        self.intern(op)
    }

    fn intern(&mut self, op: NodeOp) -> Result<u32> {
        if let Some(&id) = self.cons.get(&op) {
            return Ok(id);
        }
        let fixed = self.eval_fixed(&op);
        let root = self.eval_root_pointwise(&op);
        let id = self.nodes.len() as u32;
        self.nodes.push(Node { op, fixed, root });
        self.cons.insert(op, id);
        if let NodeOp::Box_(_) = op {
            if self.boxes.len() >= BOX_CAP {
                return Err(Error::ResourceLimit(format!(
                    "box alphabet exceeded {BOX_CAP} distinct boxed subformulas"
                )));
            }
            self.box_pos.insert(id, self.boxes.len() as u32);
            self.boxes.push(id);
            self.dirty = true;
        }
        Ok(id)
    }

    fn eval_fixed(&self, op: &NodeOp) -> Bits {
        let n = self.fixed_cfgs.len();
        match *op {
            NodeOp::Bot => Bits::zeros(n),
            NodeOp::Top => Bits::ones(n),
            NodeOp::Var(i) => {
                let mut b = Bits::zeros(n);
                for (c, cfg) in self.fixed_cfgs.iter().enumerate() {
                    if cfg.val >> i & 1 == 1 {
                        b.set(c, true);
                    }
                }
                b
            }
            NodeOp::Not(a) => self.nodes[a as usize].fixed.not(),
            NodeOp::And(a, b) => self.nodes[a as usize].fixed.and(&self.nodes[b as usize].fixed),
            NodeOp::Or(a, b) => self.nodes[a as usize].fixed.or(&self.nodes[b as usize].fixed),
            NodeOp::Box_(a) => {
                let ta = &self.nodes[a as usize].fixed;
                let mut b = Bits::zeros(n);
                for (c, cfg) in self.fixed_cfgs.iter().enumerate() {
                    if cfg.scope.iter().all(|&s| ta.get(s as usize)) {
                        b.set(c, true);
                    }
                }
                b
            }
        }
    }

    /// Root bits for operators that act pointwise; boxes are filled by rebuild.
    fn eval_root_pointwise(&self, op: &NodeOp) -> Bits {
        let n = self.root_cfgs.len();
        match *op {
            NodeOp::Bot => Bits::zeros(n),
            NodeOp::Top => Bits::ones(n),
            NodeOp::Var(i) => {
                let mut b = Bits::zeros(n);
                for (c, rc) in self.root_cfgs.iter().enumerate() {
                    if rc.val >> i & 1 == 1 {
                        b.set(c, true);
                    }
                }
                b
            }
            NodeOp::Not(a) => self.nodes[a as usize].root.not(),
            NodeOp::And(a, b) => self.nodes[a as usize].root.and(&self.nodes[b as usize].root),
            NodeOp::Or(a, b) => self.nodes[a as usize].root.or(&self.nodes[b as usize].root),
            NodeOp::Box_(_) => Bits::zeros(n),
        }
    }

    /// Recomputes environments and root bits after box-alphabet growth.
    pub fn rebuild(&mut self) -> Result<()> {
        if !self.dirty {
            return Ok(());
        }
        if self.kind != RootKind::NoRoot {
            let seeds = self.compute_seeds();
            self.closure = self.close_environments(&seeds)?;
            self.root_cfgs = self.enumerate_root_cfgs()?;
            self.recompute_root_bits();
        }
        self.dirty = false;
        self.generation += 1;
        Ok(())
    }

    /// Per-cluster environment seed: bit b set iff box b's operand holds at
    /// every world of the cluster.
    fn compute_seeds(&self) -> Vec<Bits> {
        self.groups
            .iter()
            .map(|grp| {
                let mut v = Bits::zeros(self.boxes.len());
                for (bpos, &bid) in self.boxes.iter().enumerate() {
                    let operand = match self.nodes[bid as usize].op {
                        NodeOp::Box_(o) => o,
                        _ => unreachable!("boxes list holds box nodes"),
                    };
                    let t = &self.nodes[operand as usize].fixed;
                    if grp.iter().all(|&c| t.get(c as usize)) {
                        v.set(bpos, true);
                    }
                }
                v
            })
            .collect()
    }

    fn close_environments(&self, seeds: &[Bits]) -> Result<Vec<ClosureElem>> {
        let mut elems: Vec<ClosureElem> = Vec::new();
        let mut index: HashMap<Bits, usize> = HashMap::new();
        let push = |elems: &mut Vec<ClosureElem>,
                        index: &mut HashMap<Bits, usize>,
                        vec: Bits,
                        witness: Vec<u32>|
         -> bool {
            if index.contains_key(&vec) {
                return false;
            }
            index.insert(vec.clone(), elems.len());
            elems.push(ClosureElem { vec, witness });
            true
        };
        match self.kind {
            RootKind::NoRoot => {}
            RootKind::One => {
                for (si, s) in seeds.iter().enumerate() {
                    push(&mut elems, &mut index, s.clone(), vec![si as u32]);
                }
            }
            RootKind::TwoExact => {
                for i in 0..seeds.len() {
                    for j in i..seeds.len() {
                        let vec = seeds[i].and(&seeds[j]);
                        push(&mut elems, &mut index, vec, vec![i as u32, j as u32]);
                    }
                }
            }
            RootKind::Many | RootKind::InnerMany => {
                for (si, s) in seeds.iter().enumerate() {
                    push(&mut elems, &mut index, s.clone(), vec![si as u32]);
                }
                let mut lo = 0;
                loop {
                    let hi = elems.len();
                    if lo == hi {
                        break;
                    }
                    for i in lo..hi {
                        for j in 0..hi {
                            let vec = elems[i].vec.and(&elems[j].vec);
                            if index.contains_key(&vec) {
                                continue;
                            }
                            let mut witness: Vec<u32> = elems[i]
                                .witness
                                .iter()
                                .chain(elems[j].witness.iter())
                                .copied()
                                .collect();
                            witness.sort_unstable();
                            witness.dedup();
                            let witness = self.minimize_witness(seeds, &vec, witness);
                            push(&mut elems, &mut index, vec, witness);
                            if elems.len() > self.closure_cap {
                                return Err(Error::ResourceLimit(format!(
                                    "environment closure for {:?} exceeded {} elements",
                                    self.logic, self.closure_cap
                                )));
                            }
                        }
                    }
                    lo = hi;
                }
            }
        }
        Ok(elems)
    }

    /// Greedily drops clusters whose removal keeps the environment meet intact.
    fn minimize_witness(&self, seeds: &[Bits], vec: &Bits, witness: Vec<u32>) -> Vec<u32> {
        let mut keep = witness;
        let mut i = 0;
        while i < keep.len() {
            if keep.len() == 1 {
                break;
            }
            let mut meet = Bits::ones(self.boxes.len());
            for (k, &si) in keep.iter().enumerate() {
                if k != i {
                    meet = meet.and(&seeds[si as usize]);
                }
            }
            if meet == *vec {
                keep.remove(i);
            } else {
                i += 1;
            }
        }
        keep
    }

    fn enumerate_root_cfgs(&self) -> Result<Vec<RootCfg>> {
        let nvals = 1u16 << self.vars.len();
        let mut out = Vec::new();
        match self.kind {
            RootKind::NoRoot => {}
            RootKind::InnerMany => {
                for (ii, sig) in self.inner_sigs.iter().enumerate() {
                    for e in 0..self.closure.len() {
                        for &v in sig {
                            out.push(RootCfg { val: v, elem: e as u32, inner: ii as u32 });
                        }
                    }
                }
            }
            _ => {
                for e in 0..self.closure.len() {
                    for v in 0..nvals {
                        out.push(RootCfg { val: v as Val, elem: e as u32, inner: 0 });
                    }
                }
            }
        }
        if out.len() > ROOT_CAP {
            return Err(Error::ResourceLimit(format!(
                "{:?} needs {} bottom configurations (cap {ROOT_CAP})",
                self.logic,
                out.len()
            )));
        }
        Ok(out)
    }

    fn recompute_root_bits(&mut self) {
        let n = self.root_cfgs.len();
        // Contiguous runs sharing (inner, elem); boxes at inner-cluster worlds
        // quantify over the whole run.
        let mut runs: Vec<(usize, usize)> = Vec::new();
        if self.kind == RootKind::InnerMany {
            let mut start = 0;
            for i in 1..=n {
                let split = i == n || {
                    let a = self.root_cfgs[i - 1];
                    let b = self.root_cfgs[i];
                    (a.inner, a.elem) != (b.inner, b.elem)
                };
                if split {
                    runs.push((start, i));
                    start = i;
                }
            }
        }
        for id in 0..self.nodes.len() {
            let bits = match self.nodes[id].op {
                NodeOp::Bot => Bits::zeros(n),
                NodeOp::Top => Bits::ones(n),
                NodeOp::Var(i) => {
                    let mut b = Bits::zeros(n);
                    for (c, rc) in self.root_cfgs.iter().enumerate() {
                        if rc.val >> i & 1 == 1 {
                            b.set(c, true);
                        }
                    }
                    b
                }
                NodeOp::Not(a) => self.nodes[a as usize].root.not(),
                NodeOp::And(a, b) => self.nodes[a as usize].root.and(&self.nodes[b as usize].root),
                NodeOp::Or(a, b) => self.nodes[a as usize].root.or(&self.nodes[b as usize].root),
                NodeOp::Box_(operand) => {
                    let bpos = self.box_pos[&(id as u32)] as usize;
                    let t = &self.nodes[operand as usize].root;
                    let mut b = Bits::zeros(n);
                    match self.kind {
                        RootKind::InnerMany => {
                            for &(s, e) in &runs {
                                let env = self.closure[self.root_cfgs[s].elem as usize].vec.get(bpos);
                                let all = (s..e).all(|c| t.get(c));
                                if env && all {
                                    for c in s..e {
                                        b.set(c, true);
                                    }
                                }
                            }
                        }
                        _ => {
                            for (c, rc) in self.root_cfgs.iter().enumerate() {
                                if t.get(c) && self.closure[rc.elem as usize].vec.get(bpos) {
                                    b.set(c, true);
                                }
                            }
                        }
                    }
                    b
                }
            };
            self.nodes[id].root = bits;
        }
    }

    /// True iff the node holds at every configuration of the class.
    pub fn valid(&mut self, id: u32) -> Result<bool> {
        self.rebuild()?;
        let node = &self.nodes[id as usize];
        Ok(node.fixed.is_all_ones() && node.root.is_all_ones())
    }

    /// Signature: fixed-configuration bits followed by bottom-configuration bits.
    pub fn sig(&mut self, id: u32) -> Result<Bits> {
        self.rebuild()?;
        let node = &self.nodes[id as usize];
        let mut out = Bits::zeros(self.fixed_cfgs.len() + self.root_cfgs.len());
        for i in 0..self.fixed_cfgs.len() {
            if node.fixed.get(i) {
                out.set(i, true);
            }
        }
        for i in 0..self.root_cfgs.len() {
            if node.root.get(i) {
                out.set(self.fixed_cfgs.len() + i, true);
            }
        }
        Ok(out)
    }

    /// Entailment over all configurations: everywhere `a` holds, `b` holds.
    pub fn entails(&mut self, a: u32, b: u32) -> Result<bool> {
        self.rebuild()?;
        let (na, nb) = (&self.nodes[a as usize], &self.nodes[b as usize]);
        Ok(na.fixed.subset_of(&nb.fixed) && na.root.subset_of(&nb.root))
    }

    /// A pointed in-class model falsifying the node, when one exists.
    pub fn countermodel(&mut self, id: u32) -> Result<Option<PointedModel>> {
        self.rebuild()?;
        let node = &self.nodes[id as usize];
        if let Some(c) = node.fixed.first_zero() {
            return self.materialize_fixed(c).map(Some);
        }
        if let Some(c) = node.root.first_zero() {
            return self.materialize_root(c).map(Some);
        }
        Ok(None)
    }

    fn guard_size(&self, worlds: usize) -> Result<()> {
        if worlds > MAX_WORLDS {
            return Err(Error::ResourceLimit(format!(
                "countermodel needs {worlds} worlds (cap {MAX_WORLDS})"
            )));
        }
        Ok(())
    }

    fn materialize_fixed(&self, c: usize) -> Result<PointedModel> {
        let cfg = &self.fixed_cfgs[c];
        let vars = &self.vars;
        let (model, point) = match &cfg.shape {
            CfgShape::TrivPoint => (layered_model(vars, None, &[&[cfg.val]]), 0),
            CfgShape::ClusterWorld { sig } => {
                let s: &[Val] = &self.universe[*sig as usize];
                let pos = s.iter().position(|&v| v == cfg.val).expect("config value inside its cluster");
                match self.kind {
                    RootKind::NoRoot => (layered_model(vars, None, &[s]), pos),
                    RootKind::TwoExact => (layered_model(vars, Some(&[0]), &[s, s]), 1 + pos),
                    _ => (layered_model(vars, Some(&[0]), &[s]), 1 + pos),
                }
            }
            CfgShape::Ls12Bottom { pair, top } => {
                let (a, b) = *pair;
                let point = if cfg.val == a { 0 } else { 1 };
                let lower = [a, b];
                (layered_model(vars, Some(&lower), &[&[*top]]), point)
            }
            CfgShape::Ls12Top { top } => (layered_model(vars, Some(&[0, 0]), &[&[*top]]), 2),
            CfgShape::TopWorld => (layered_model(vars, Some(&[0]), &[&[cfg.val]]), 1),
        };
        PointedModel::new(model, point)
    }

    fn materialize_root(&self, c: usize) -> Result<PointedModel> {
        let rc = self.root_cfgs[c];
        let elem = &self.closure[rc.elem as usize];
        let vars = &self.vars;
        match self.kind {
            RootKind::InnerMany => {
                let inner = &self.inner_sigs[rc.inner as usize];
                let tops: Vec<&[Val]> =
                    elem.witness.iter().map(|&si| self.universe[si as usize].as_slice()).collect();
                self.guard_size(inner.len() + tops.len())?;
                let model = layered_model(vars, Some(inner.as_slice()), &tops);
                let pos = inner.iter().position(|&v| v == rc.val).expect("inner value inside inner cluster");
                PointedModel::new(model, pos)
            }
            _ => {
                let clusters: Vec<&[Val]> =
                    elem.witness.iter().map(|&si| self.universe[si as usize].as_slice()).collect();
                let worlds = 1 + clusters.iter().map(|c| c.len()).sum::<usize>();
                self.guard_size(worlds)?;
                let model = layered_model(vars, Some(&[rc.val]), &clusters);
                PointedModel::new(model, 0)
            }
        }
    }

}
