//! Uniform Lyndon interpolation machinery.
//!
//! The pipeline: enumerate the finite family of polarity-restricted formulas
//! of bounded modal depth up to provable equivalence, then compute a uniform
//! interpolant as the conjunction of the family members the input provably
//! implies. Because the family is closed under conjunction up to equivalence,
//! that conjunction collapses back to a single member, which is what gets
//! returned. The same family supports characteristic formulas of pointed
//! models and the bounded implication relation between pointed models, and a
//! one-world embedding reuses all of it for classical truth assignments.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Mutex, OnceLock};

use crate::bits::Bits;
use crate::decide::Signature;
use crate::formula::{
    and, bx, depth, dia, display_key, not, or, polarities, var, variables,
    Formula, PolaritySet,
};
use crate::kripke::{satisfies, LogicId, Model, PointedModel};
use crate::sem::Evaluator;
use crate::{Error, Result};

pub const DEFAULT_MEMBER_CAP: usize = 20000;

/// The finite set of polarity-restricted formulas of depth at most `rank`,
/// one representative per provable-equivalence class of `logic`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormulaFamily {
    logic: LogicId,
    polarity: PolaritySet,
    rank: u32,
    vars: BTreeSet<String>,
    members: Vec<(Formula, Signature)>,
}

impl FormulaFamily {
    pub fn logic(&self) -> LogicId {
        self.logic
    }

    pub fn polarity(&self) -> &PolaritySet {
        &self.polarity
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn vars(&self) -> &BTreeSet<String> {
        &self.vars
    }

    /// Representatives paired with their truth bits over the evaluation
    /// configurations of the logic at this family's vocabulary.
    pub fn members(&self) -> &[(Formula, Signature)] {
        &self.members
    }
}

/// A total classical valuation of a finite variable universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthAssignment {
    values: BTreeMap<String, bool>,
}

impl TruthAssignment {
    pub fn new(values: BTreeMap<String, bool>) -> TruthAssignment {
        TruthAssignment { values }
    }

    pub fn get(&self, name: &str) -> Option<bool> {
        self.values.get(name).copied()
    }

    pub fn universe(&self) -> impl Iterator<Item = &String> {
        self.values.keys()
    }

    pub fn values(&self) -> &BTreeMap<String, bool> {
        &self.values
    }
}

/// Three positive/negative variable-set pairs, pairwise disjoint per sign.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergeContext {
    pub p0: PolaritySet,
    pub p1: PolaritySet,
    pub p2: PolaritySet,
}

impl MergeContext {
    fn check_disjoint(&self) -> Result<()> {
        let pos = [&self.p0.positive, &self.p1.positive, &self.p2.positive];
        let neg = [&self.p0.negative, &self.p1.negative, &self.p2.negative];
        for (label, sets) in [("positive", pos), ("negative", neg)] {
            for i in 0..3 {
                for j in i + 1..3 {
                    if let Some(v) = sets[i].intersection(sets[j]).next() {
                        return Err(Error::Precondition(format!(
                            "{label} context sets {i} and {j} overlap on {v}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

fn fold_and(parts: Vec<Formula>) -> Formula {
    let mut it = parts.into_iter();
    match it.next() {
        None => Formula::Top,
        Some(first) => it.fold(first, and),
    }
}

fn fold_or(parts: Vec<Formula>) -> Formula {
    let mut it = parts.into_iter();
    match it.next() {
        None => Formula::Bottom,
        Some(first) => it.fold(first, or),
    }
}

fn family_cache() -> &'static Mutex<HashMap<String, FormulaFamily>> {
    static CACHE: OnceLock<Mutex<HashMap<String, FormulaFamily>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn cache_key(l: LogicId, ps: &PolaritySet, n: u32, vars: &BTreeSet<String>) -> String {
    let pos: Vec<&str> = ps.positive.iter().map(String::as_str).collect();
    let neg: Vec<&str> = ps.negative.iter().map(String::as_str).collect();
    let vs: Vec<&str> = vars.iter().map(String::as_str).collect();
    format!("{}|{}|{}|{}|{}", l.tag(), pos.join(","), neg.join(","), n, vs.join(","))
}

/// The rank-`n` family over `ps`, deduplicated by provable equivalence in `l`.
pub fn enumerate_family(
    l: LogicId,
    ps: &PolaritySet,
    n: u32,
    vars: &BTreeSet<String>,
) -> Result<FormulaFamily> {
    enumerate_family_capped(l, ps, n, vars, DEFAULT_MEMBER_CAP)
}

/// As [`enumerate_family`] with an explicit member cap.
pub fn enumerate_family_capped(
    l: LogicId,
    ps: &PolaritySet,
    n: u32,
    vars: &BTreeSet<String>,
    cap: usize,
) -> Result<FormulaFamily> {
    if !ps.positive.is_subset(vars) || !ps.negative.is_subset(vars) {
        return Err(Error::Precondition(
            "polarity sets must be contained in the variable universe".into(),
        ));
    }
    let key = cache_key(l, ps, n, vars);
    if cap == DEFAULT_MEMBER_CAP {
        if let Some(fam) = family_cache().lock().unwrap().get(&key) {
            return Ok(fam.clone());
        }
    }
    let fam = build_family(l, ps, n, vars, cap)?;
    if cap == DEFAULT_MEMBER_CAP {
        family_cache().lock().unwrap().insert(key, fam.clone());
    }
    Ok(fam)
}

fn build_family(
    l: LogicId,
    ps: &PolaritySet,
    n: u32,
    vars: &BTreeSet<String>,
    cap: usize,
) -> Result<FormulaFamily> {
    let mut ev = Evaluator::new(l, vars)?;
    let mut atoms: Vec<Formula> = vec![Formula::Bottom, Formula::Top];
    atoms.extend(ps.positive.iter().map(|p| var(p)));
    atoms.extend(ps.negative.iter().map(|p| not(var(p))));

    // Rank 0 members, then per rank: box/diamond every member, re-close.
    let mut members: Vec<Formula> = Vec::new();
    for rank in 0..=n {
        let mut gens = atoms.clone();
        if rank > 0 {
            gens.extend(members.iter().map(|m| bx(m.clone())));
            gens.extend(members.iter().map(|m| dia(m.clone())));
        }
        members = lattice_close(&mut ev, gens, cap)?;
    }

    let mut out = Vec::with_capacity(members.len());
    for m in members {
        let id = ev.add(&m)?;
        let bits = ev.sig(id)?;
        let sig = Signature((0..bits.len()).map(|i| bits.get(i)).collect());
        out.push((m, sig));
    }
    Ok(FormulaFamily {
        logic: l,
        polarity: ps.clone(),
        rank: n,
        vars: vars.clone(),
        members: out,
    })
}

/// Closes the generator list under binary meets and joins, one representative
/// per distinct signature, smallest representative kept.
fn lattice_close(ev: &mut Evaluator, gens: Vec<Formula>, cap: usize) -> Result<Vec<Formula>> {
    let mut reps: Vec<Formula> = Vec::new();
    let mut sigs: Vec<Bits> = Vec::new();
    let mut seen: HashMap<Bits, usize> = HashMap::new();
    // Interning every generator up front keeps the box alphabet fixed for the
    // rest of the closure, so the signatures below all stay comparable.
    let mut gen_sigs = Vec::with_capacity(gens.len());
    for g in &gens {
        let id = ev.add(g)?;
        gen_sigs.push(id);
    }
    for (g, id) in gens.into_iter().zip(gen_sigs) {
        let s = ev.sig(id)?;
        if let Some(&at) = seen.get(&s) {
            if display_key(&g) < display_key(&reps[at]) {
                reps[at] = g;
            }
            continue;
        }
        seen.insert(s.clone(), reps.len());
        reps.push(g);
        sigs.push(s);
    }
    let mut i = 0;
    while i < sigs.len() {
        for j in 0..=i {
            for meet in [true, false] {
                let s = if meet { sigs[i].and(&sigs[j]) } else { sigs[i].or(&sigs[j]) };
                if seen.contains_key(&s) {
                    continue;
                }
                if reps.len() >= cap {
                    return Err(Error::ResourceLimit(format!(
                        "family exceeded member cap {cap}"
                    )));
                }
                let f = if meet {
                    and(reps[j].clone(), reps[i].clone())
                } else {
                    or(reps[j].clone(), reps[i].clone())
                };
                seen.insert(s.clone(), reps.len());
                reps.push(f);
                sigs.push(s);
            }
        }
        i += 1;
    }
    Ok(reps)
}

/// Conjunction of the family members satisfied at the pointed model.
pub fn characteristic(pm: &PointedModel, fam: &FormulaFamily) -> Formula {
    let parts: Vec<Formula> = fam
        .members
        .iter()
        .filter(|(m, _)| satisfies(pm, m))
        .map(|(m, _)| m.clone())
        .collect();
    fold_and(parts)
}

/// Characteristic formula of a pointed model at resolution `n`: a pointed
/// model satisfies the result exactly when the source pointed model
/// `n`-implies it under `ps`.
pub fn bounded_profile(pm: &PointedModel, ps: &PolaritySet, n: u32) -> Formula {
    fn chi(
        m: &Model,
        ps: &PolaritySet,
        k: u32,
        w: usize,
        memo: &mut HashMap<(u32, usize), Formula>,
    ) -> Formula {
        if let Some(f) = memo.get(&(k, w)) {
            return f.clone();
        }
        let val = m.val(w);
        let mut base: Vec<Formula> = Vec::new();
        for p in &ps.positive {
            if val.contains(p) {
                base.push(var(p));
            }
        }
        for p in &ps.negative {
            if !val.contains(p) {
                base.push(not(var(p)));
            }
        }
        let f = if k == 0 {
            fold_and(base)
        } else {
            let mut succ_profiles: Vec<Formula> = Vec::new();
            let mut seen = BTreeSet::new();
            for y in m.frame().successors(w) {
                let c = chi(m, ps, k - 1, y, memo);
                if seen.insert(display_key(&c)) {
                    succ_profiles.push(c);
                }
            }
            let mut parts = vec![fold_and(base)];
            parts.extend(succ_profiles.iter().cloned().map(dia));
            parts.push(bx(fold_or(succ_profiles)));
            fold_and(parts)
        };
        memo.insert((k, w), f.clone());
        f
    }
    let mut memo = HashMap::new();
    chi(pm.model(), ps, n, pm.point(), &mut memo)
}

/// Rank-0 transfer between two worlds: positive variables carry left to
/// right, negative variables carry right to left.
pub(crate) fn rank0_pair(
    m0: &Model,
    w0: usize,
    m1: &Model,
    w1: usize,
    ps: &PolaritySet,
) -> bool {
    ps.positive.iter().all(|p| !m0.val(w0).contains(p) || m1.val(w1).contains(p))
        && ps.negative.iter().all(|p| !m1.val(w1).contains(p) || m0.val(w0).contains(p))
}

/// The bounded polarity-respecting implication between pointed models: every
/// `ps`-formula of depth at most `n` true at `pm0` is true at `pm1`.
///
/// The relation itself does not depend on the logic; the parameter is kept so
/// call sites can carry the ambient class alongside the check.
pub fn n_implies(
    pm0: &PointedModel,
    pm1: &PointedModel,
    ps: &PolaritySet,
    n: u32,
    _l: LogicId,
) -> bool {
    let (m0, m1) = (pm0.model(), pm1.model());
    let (n0, n1) = (m0.world_count(), m1.world_count());
    let base = |w0: usize, w1: usize| -> bool { rank0_pair(m0, w0, m1, w1, ps) };
    let mut cur: Vec<Vec<bool>> = (0..n0).map(|a| (0..n1).map(|b| base(a, b)).collect()).collect();
    for _ in 0..n {
        let prev = cur;
        cur = (0..n0)
            .map(|a| {
                (0..n1)
                    .map(|b| {
                        base(a, b)
                            && m0
                                .frame()
                                .successors(a)
                                .all(|y0| m1.frame().successors(b).any(|y1| prev[y0][y1]))
                            && m1
                                .frame()
                                .successors(b)
                                .all(|y1| m0.frame().successors(a).any(|y0| prev[y0][y1]))
                    })
                    .collect()
            })
            .collect();
    }
    cur[pm0.point()][pm1.point()]
}

/// Embeds a truth assignment as a one-world reflexive pointed model.
pub fn assignment_model(v: &TruthAssignment) -> PointedModel {
    let val: BTreeSet<String> =
        v.values.iter().filter(|(_, &b)| b).map(|(p, _)| p.clone()).collect();
    let frame = crate::kripke::Frame::new(1, &[(0, 0)]).expect("one reflexive world");
    let model = Model::new(frame, vec![val]).expect("one valuation");
    PointedModel::new(model, 0).expect("point in range")
}

/// The strongest polarity-bounded consequence: conjunction of all family
/// members over the kept polarities that the input provably implies.
pub fn uniform_interpolant(l: LogicId, f: &Formula, removal: &PolaritySet) -> Result<Formula> {
    uniform_interpolant_capped(l, f, removal, DEFAULT_MEMBER_CAP)
}

/// As [`uniform_interpolant`] with an explicit family member cap.
pub fn uniform_interpolant_capped(
    l: LogicId,
    f: &Formula,
    removal: &PolaritySet,
    cap: usize,
) -> Result<Formula> {
    let n = l.nip_rank().ok_or_else(|| {
        Error::Precondition(format!(
            "{} carries no finite interpolation rank",
            l.display_name()
        ))
    })?;
    let pol = polarities(f);
    let keep = PolaritySet {
        positive: pol.positive.difference(&removal.positive).cloned().collect(),
        negative: pol.negative.difference(&removal.negative).cloned().collect(),
    };
    // Nothing to forget and the input already fits the depth bound: its own
    // equivalence class would be a family member, so it is its own strongest
    // consequence.
    if keep == pol && depth(f) <= n {
        return Ok(f.clone());
    }
    let vars = variables(f).union(&keep.positive.union(&keep.negative).cloned().collect()).cloned().collect();
    let fam = enumerate_family_capped(l, &keep, n, &vars, cap)?;
    let mut ev = Evaluator::new(l, &vars)?;
    let f_id = ev.add(f)?;
    let mut implied: Vec<usize> = Vec::new();
    let mut member_ids = Vec::with_capacity(fam.members.len());
    for (m, _) in &fam.members {
        member_ids.push(ev.add(m)?);
    }
    let mut theta_sig: Option<Bits> = None;
    for (k, &mid) in member_ids.iter().enumerate() {
        if ev.entails(f_id, mid)? {
            implied.push(k);
            let s = ev.sig(mid)?;
            theta_sig = Some(match theta_sig {
                None => s,
                Some(t) => t.and(&s),
            });
        }
    }
    let theta_sig = match theta_sig {
        Some(s) => s,
        None => return Ok(Formula::Top),
    };
    // The family is closed under conjunction up to equivalence, so the
    // conjunction's class has a representative; return that member.
    for (k, &mid) in member_ids.iter().enumerate() {
        if ev.sig(mid)? == theta_sig {
            return Ok(fam.members[k].0.clone());
        }
    }
    let parts: Vec<Formula> = implied.iter().map(|&k| fam.members[k].0.clone()).collect();
    Ok(fold_and(parts))
}

/// An interpolant for a provable implication, with polarities bounded by
/// both sides.
pub fn lyndon_interpolant(l: LogicId, f: &Formula, g: &Formula) -> Result<Formula> {
    lyndon_interpolant_capped(l, f, g, DEFAULT_MEMBER_CAP)
}

/// As [`lyndon_interpolant`] with an explicit family member cap.
pub fn lyndon_interpolant_capped(
    l: LogicId,
    f: &Formula,
    g: &Formula,
    cap: usize,
) -> Result<Formula> {
    if !crate::decide::provable(l, &crate::formula::implies(f.clone(), g.clone()))? {
        return Err(Error::Precondition(format!(
            "implication not provable in {}: {f} -> {g}",
            l.display_name()
        )));
    }
    let pf = polarities(f);
    let pg = polarities(g);
    let removal = PolaritySet {
        positive: pf.positive.difference(&pg.positive).cloned().collect(),
        negative: pf.negative.difference(&pg.negative).cloned().collect(),
    };
    uniform_interpolant_capped(l, f, &removal, cap)
}

/// Uniform interpolation for box-free formulas under classical consequence.
pub fn cl_uniform_interpolant(f: &Formula, removal: &PolaritySet) -> Result<Formula> {
    if depth(f) != 0 {
        return Err(Error::Precondition(format!(
            "classical interpolation needs a box-free formula, got depth {}",
            depth(f)
        )));
    }
    uniform_interpolant(LogicId::Triv, f, removal)
}

/// Merges two truth assignments into one witnessing both context arrows.
pub fn merge_assignments(
    v0: &TruthAssignment,
    v1: &TruthAssignment,
    ctx: &MergeContext,
) -> Result<TruthAssignment> {
    if v0.values.keys().ne(v1.values.keys()) {
        return Err(Error::Precondition(
            "assignments must share one variable universe".into(),
        ));
    }
    ctx.check_disjoint()?;
    for (name, sets) in [
        ("P0", &ctx.p0),
        ("P1", &ctx.p1),
        ("P2", &ctx.p2),
    ] {
        for v in sets.positive.iter().chain(sets.negative.iter()) {
            if !v0.values.contains_key(v) {
                return Err(Error::Precondition(format!(
                    "{name} mentions {v}, which is outside the assignment universe"
                )));
            }
        }
    }
    if !n_implies(&assignment_model(v0), &assignment_model(v1), &ctx.p1, 0, LogicId::Triv) {
        return Err(Error::Precondition(
            "assignments violate the middle-context arrow premise".into(),
        ));
    }
    let pos = [&ctx.p0.positive, &ctx.p1.positive, &ctx.p2.positive];
    let neg = [&ctx.p0.negative, &ctx.p1.negative, &ctx.p2.negative];
    let mut out = BTreeMap::new();
    for (q, &b0) in &v0.values {
        let b1 = v1.values[q];
        let i = pos.iter().position(|s| s.contains(q));
        let j = neg.iter().position(|s| s.contains(q));
        let b = match (i, j) {
            (Some(0), Some(0)) => b0,
            (Some(0), Some(1)) => b0,
            (Some(0), Some(2)) => b0 || b1,
            (Some(0), None) => b0,
            (Some(1), Some(0)) => b0,
            (Some(1), Some(1)) => b1,
            (Some(1), Some(2)) => b1,
            (Some(1), None) => b0,
            (Some(2), Some(0)) => b0 && b1,
            (Some(2), Some(1)) => b1,
            (Some(2), Some(2)) => b1,
            (Some(2), None) => b1,
            (None, Some(0)) => b0,
            (None, Some(1)) => b1,
            (None, Some(2)) => b1,
            (None, None) => b0,
            _ => unreachable!("positions range over 0..3"),
        };
        out.insert(q.clone(), b);
    }
    Ok(TruthAssignment::new(out))
}
