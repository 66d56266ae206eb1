//! Intuitionistic semantics over finite posets and the modal-companion
//! bridge.
//!
//! Four locally tabular intermediate logics are supported, each decided
//! through its modal companion by translating every variable under a box:
//! `Cl` (companion the one-cluster class), `Ls` (two-chains), `Lv` (forks),
//! and `Lp2` (a root below finitely many maximal points). Each logic also
//! carries a direct poset semantics over its skeleton frames, used to
//! cross-check the bridge, and a fixpoint enumeration of its finitely many
//! formula classes, used to compute uniform interpolants directly and to
//! pull modal interpolants back through the translation.

use std::collections::BTreeSet;

use crate::decide::{self, provable, Signature};
use crate::formula::{
    bx, godel_translate, int_polarities, int_variables, iimplies, subst_box, variables, Formula,
    IntFormula, PolaritySet,
};
use crate::kripke::{Frame, LogicId};
use crate::{Error, Result};

/// Cap on distinct formula classes tracked during fixpoint enumeration.
pub const INT_CLASS_CAP: usize = 20000;

/// Maximal points allowed in a `Lp2` skeleton frame.
const LP2_TOP_CAP: usize = 4;

/// The four intermediate logics with a computable companion bridge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IntLogicId {
    Cl,
    Ls,
    Lv,
    Lp2,
}

impl IntLogicId {
    /// All supported logics, weakest companion class last.
    pub fn all() -> [IntLogicId; 4] {
        [IntLogicId::Cl, IntLogicId::Ls, IntLogicId::Lv, IntLogicId::Lp2]
    }

    /// Stable lowercase tag used by the CLI.
    pub fn tag(self) -> &'static str {
        match self {
            IntLogicId::Cl => "cl",
            IntLogicId::Ls => "ls",
            IntLogicId::Lv => "lv",
            IntLogicId::Lp2 => "lp2",
        }
    }

    /// Human-facing name.
    pub fn display_name(self) -> &'static str {
        match self {
            IntLogicId::Cl => "Cl",
            IntLogicId::Ls => "LS",
            IntLogicId::Lv => "LV",
            IntLogicId::Lp2 => "LP2",
        }
    }

    /// Parses a CLI tag.
    pub fn from_tag(s: &str) -> Option<IntLogicId> {
        IntLogicId::all().into_iter().find(|l| l.tag() == s)
    }

    /// The modal logic through which provability is decided.
    pub fn companion(self) -> LogicId {
        match self {
            IntLogicId::Cl => LogicId::S5,
            IntLogicId::Ls => LogicId::GW2,
            IntLogicId::Lv => LogicId::GV,
            IntLogicId::Lp2 => LogicId::GW,
        }
    }
}

/// A finite poset with a persistent valuation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntModel {
    frame: Frame,
    val: Vec<BTreeSet<String>>,
}

impl IntModel {
    /// Wraps a reflexive-transitive frame as a poset model, rejecting
    /// symmetric pairs and valuations that are not upward closed.
    pub fn new(frame: Frame, val: Vec<BTreeSet<String>>) -> Result<IntModel> {
        let n = frame.world_count();
        if val.len() != n {
            return Err(Error::InvalidModel(format!(
                "{} worlds but {} valuation entries",
                n,
                val.len()
            )));
        }
        for a in 0..n {
            for b in 0..n {
                if a != b && frame.sees(a, b) && frame.sees(b, a) {
                    return Err(Error::InvalidModel(format!(
                        "order is not antisymmetric: {a} and {b} are comparable both ways"
                    )));
                }
                if frame.sees(a, b) && !val[a].is_subset(&val[b]) {
                    return Err(Error::InvalidModel(format!(
                        "valuation is not persistent along {a} <= {b}"
                    )));
                }
            }
        }
        Ok(IntModel { frame, val })
    }

    /// Builds the poset as the reflexive-transitive closure of `order`.
    pub fn from_order(
        n: usize,
        order: &[(usize, usize)],
        val: Vec<BTreeSet<String>>,
    ) -> Result<IntModel> {
        IntModel::new(Frame::closed(n, order)?, val)
    }

    pub fn world_count(&self) -> usize {
        self.frame.world_count()
    }

    /// Whether `a <= b` in the order.
    pub fn le(&self, a: usize, b: usize) -> bool {
        self.frame.sees(a, b)
    }

    /// Variables true at `w`.
    pub fn val(&self, w: usize) -> &BTreeSet<String> {
        &self.val[w]
    }
}

/// Intuitionistic forcing at a world; implication quantifies over the
/// upward cone.
pub fn int_satisfies(m: &IntModel, w: usize, f: &IntFormula) -> bool {
    match f {
        IntFormula::Var(s) => m.val(w).contains(s),
        IntFormula::Bottom => false,
        IntFormula::Top => true,
        IntFormula::And(a, b) => int_satisfies(m, w, a) && int_satisfies(m, w, b),
        IntFormula::Or(a, b) => int_satisfies(m, w, a) || int_satisfies(m, w, b),
        IntFormula::Implies(a, b) => (0..m.world_count())
            .filter(|&v| m.le(w, v))
            .all(|v| !int_satisfies(m, v, a) || int_satisfies(m, v, b)),
    }
}

fn subsets(vars: &[String]) -> Vec<BTreeSet<String>> {
    (0..1usize << vars.len())
        .map(|mask| {
            vars.iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, v)| v.clone())
                .collect()
        })
        .collect()
}

/// The skeleton poset models of a logic over an alphabet: every persistent
/// valuation on the logic's skeleton frames (a point for `Cl`, a two-chain
/// for `Ls`, a fork for `Lv`, a root below up to four distinct maximal
/// points for `Lp2`).
pub fn skeleton_models(il: IntLogicId, vars: &BTreeSet<String>) -> Vec<IntModel> {
    let names: Vec<String> = vars.iter().cloned().collect();
    let vals = subsets(&names);
    let mut out = Vec::new();
    let model = |n: usize, order: &[(usize, usize)], val: Vec<BTreeSet<String>>| {
        IntModel::from_order(n, order, val).expect("skeleton models are persistent by choice")
    };
    match il {
        IntLogicId::Cl => {
            for v in &vals {
                out.push(model(1, &[], vec![v.clone()]));
            }
        }
        IntLogicId::Ls => {
            for lo in &vals {
                for hi in vals.iter().filter(|hi| lo.is_subset(hi)) {
                    out.push(model(2, &[(0, 1)], vec![lo.clone(), hi.clone()]));
                }
            }
        }
        IntLogicId::Lv => {
            for root in &vals {
                let ups: Vec<_> = vals.iter().filter(|v| root.is_subset(v)).collect();
                for a in &ups {
                    for b in &ups {
                        out.push(model(
                            3,
                            &[(0, 1), (0, 2)],
                            vec![root.clone(), (*a).clone(), (*b).clone()],
                        ));
                    }
                }
            }
        }
        IntLogicId::Lp2 => {
            for root in &vals {
                let ups: Vec<_> = vals.iter().filter(|v| root.is_subset(v)).collect();
                for mask in 1..1usize << ups.len() {
                    let tops: Vec<_> = ups
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask >> i & 1 == 1)
                        .map(|(_, v)| (*v).clone())
                        .collect();
                    if tops.len() > LP2_TOP_CAP {
                        continue;
                    }
                    let order: Vec<_> = (1..=tops.len()).map(|t| (0, t)).collect();
                    let mut val = vec![root.clone()];
                    val.extend(tops);
                    out.push(model(val.len(), &order, val));
                }
            }
        }
    }
    out
}

/// Forcing bits of a formula at every world of every skeleton model, in
/// enumeration order. All ones is exactly skeleton validity.
pub fn int_signature(il: IntLogicId, vars: &BTreeSet<String>, f: &IntFormula) -> Signature {
    let models = skeleton_models(il, vars);
    sig_formula(&models, f)
}

/// Provability through the companion: the boxed translation must hold in
/// the companion class.
pub fn int_provable(il: IntLogicId, f: &IntFormula) -> Result<bool> {
    provable(il.companion(), &godel_translate(f))
}

/// Provability read off the skeleton poset semantics directly.
pub fn int_provable_direct(il: IntLogicId, f: &IntFormula) -> bool {
    int_signature(il, &int_variables(f), f).is_all_ones()
}

fn sig_formula(models: &[IntModel], f: &IntFormula) -> Signature {
    let mut bits = Vec::new();
    for m in models {
        for w in 0..m.world_count() {
            bits.push(int_satisfies(m, w, f));
        }
    }
    Signature(bits)
}

fn sig_pointwise(a: &Signature, b: &Signature, op: impl Fn(bool, bool) -> bool) -> Signature {
    Signature(a.0.iter().zip(b.0.iter()).map(|(&x, &y)| op(x, y)).collect())
}

/// Implication is evaluated over each world's upward cone, so it needs the
/// model boundaries, not just the operand bits.
fn sig_implies(models: &[IntModel], a: &Signature, b: &Signature) -> Signature {
    let mut bits = Vec::with_capacity(a.0.len());
    let mut base = 0;
    for m in models {
        let n = m.world_count();
        for w in 0..n {
            bits.push(
                (0..n)
                    .filter(|&v| m.le(w, v))
                    .all(|v| !a.0[base + v] || b.0[base + v]),
            );
        }
        base += n;
    }
    Signature(bits)
}

fn sig_le(a: &Signature, b: &Signature) -> bool {
    a.0.iter().zip(b.0.iter()).all(|(&x, &y)| !x || y)
}

/// Every class of formulas of a logic within a polarity bound, enumerated
/// to a fixpoint over the skeleton models of a fixed alphabet. One smallest
/// representative is kept per class.
#[derive(Debug, Clone)]
pub struct IntFamily {
    logic: IntLogicId,
    vars: BTreeSet<String>,
    admissible: PolaritySet,
    models: Vec<IntModel>,
    members: Vec<(IntFormula, Signature)>,
}

impl IntFamily {
    pub fn logic(&self) -> IntLogicId {
        self.logic
    }

    pub fn vars(&self) -> &BTreeSet<String> {
        &self.vars
    }

    pub fn admissible(&self) -> &PolaritySet {
        &self.admissible
    }

    /// Class representatives with their skeleton signatures, in discovery
    /// order.
    pub fn members(&self) -> &[(IntFormula, Signature)] {
        &self.members
    }
}

fn push_class(
    pool: &mut Vec<(IntFormula, Signature)>,
    seen: &mut BTreeSet<Vec<bool>>,
    f: IntFormula,
    sig: Signature,
) -> Result<bool> {
    if !seen.insert(sig.0.clone()) {
        return Ok(false);
    }
    if pool.len() >= INT_CLASS_CAP {
        return Err(Error::ResourceLimit(format!(
            "more than {INT_CLASS_CAP} formula classes in the fixpoint enumeration"
        )));
    }
    pool.push((f, sig));
    Ok(true)
}

/// Enumerates the classes of formulas whose positive variables stay within
/// `admissible.positive` and negative within `admissible.negative`, closing
/// seeds under conjunction, disjunction, and implication from the mirror
/// family until no new class appears. Termination comes from the logics
/// being locally tabular; a cap guards against misuse on large alphabets.
pub fn int_family(
    il: IntLogicId,
    vars: &BTreeSet<String>,
    admissible: &PolaritySet,
) -> Result<IntFamily> {
    let models = skeleton_models(il, vars);
    let seed = |names: &BTreeSet<String>| -> Result<_> {
        let mut pool = Vec::new();
        let mut seen = BTreeSet::new();
        for f in [IntFormula::Bottom, IntFormula::Top] {
            let sig = sig_formula(&models, &f);
            push_class(&mut pool, &mut seen, f, sig)?;
        }
        for name in names {
            let f = IntFormula::Var(name.clone());
            let sig = sig_formula(&models, &f);
            push_class(&mut pool, &mut seen, f, sig)?;
        }
        Ok((pool, seen))
    };
    let (mut primal, mut primal_seen) = seed(&admissible.positive)?;
    let (mut dual, mut dual_seen) = seed(&admissible.negative)?;

    loop {
        let mut changed = false;
        let (np, nd) = (primal.len(), dual.len());
        let grow = |into: &mut Vec<(IntFormula, Signature)>,
                        seen: &mut BTreeSet<Vec<bool>>,
                        from: &[(IntFormula, Signature)],
                        n_into: usize,
                        n_from: usize|
         -> Result<bool> {
            let mut any = false;
            for i in 0..n_into {
                for j in 0..n_into {
                    let sig = sig_pointwise(&into[i].1, &into[j].1, |x, y| x && y);
                    let f = crate::formula::iand(into[i].0.clone(), into[j].0.clone());
                    any |= push_class(into, seen, f, sig)?;
                    let sig = sig_pointwise(&into[i].1, &into[j].1, |x, y| x || y);
                    let f = crate::formula::ior(into[i].0.clone(), into[j].0.clone());
                    any |= push_class(into, seen, f, sig)?;
                }
            }
            for a in from.iter().take(n_from) {
                for i in 0..n_into {
                    let sig = sig_implies(&models, &a.1, &into[i].1);
                    let f = iimplies(a.0.clone(), into[i].0.clone());
                    any |= push_class(into, seen, f, sig)?;
                }
            }
            Ok(any)
        };
        changed |= grow(&mut primal, &mut primal_seen, &dual, np, nd)?;
        changed |= grow(&mut dual, &mut dual_seen, &primal, nd, np)?;
        if !changed {
            break;
        }
    }
    Ok(IntFamily {
        logic: il,
        vars: vars.clone(),
        admissible: admissible.clone(),
        models,
        members: primal,
    })
}

/// The strongest consequence of `f` expressible without the removed
/// polarized variables, read off the class family.
pub fn int_uniform_interpolant(
    il: IntLogicId,
    f: &IntFormula,
    removal: &PolaritySet,
) -> Result<IntFormula> {
    let pol = int_polarities(f);
    let admissible = PolaritySet {
        positive: pol.positive.difference(&removal.positive).cloned().collect(),
        negative: pol.negative.difference(&removal.negative).cloned().collect(),
    };
    if admissible == pol {
        return Ok(f.clone());
    }
    let vars = int_variables(f);
    let fam = int_family(il, &vars, &admissible)?;
    let fsig = sig_formula(&fam.models, f);
    let mut meet = vec![true; fsig.0.len()];
    for (_, sig) in &fam.members {
        if sig_le(&fsig, sig) {
            for (m, &s) in meet.iter_mut().zip(sig.0.iter()) {
                *m &= s;
            }
        }
    }
    fam.members
        .iter()
        .find(|(_, sig)| sig.0 == meet)
        .map(|(f, _)| f.clone())
        .ok_or_else(|| {
            Error::Internal("the meet of the admissible consequences is not a class".into())
        })
}

/// Pulls a modal uniform interpolant back through the translation: finds an
/// intuitionistic formula whose translation the companion proves equivalent
/// to the boxed variable-boxing substitution of `theta`.
pub fn transfer_interpolant(il: IntLogicId, theta: &Formula) -> Result<IntFormula> {
    let vars = variables(theta);
    let companion = il.companion();
    let target = decide::signature(companion, &vars, &bx(subst_box(theta)))?;
    let admissible = PolaritySet { positive: vars.clone(), negative: vars.clone() };
    let fam = int_family(il, &vars, &admissible)?;
    for (xi, _) in &fam.members {
        if decide::signature(companion, &vars, &godel_translate(xi))? == target {
            return Ok(xi.clone());
        }
    }
    Err(Error::Internal(
        "no formula class translates to the boxed interpolant, which the transfer result rules \
         out"
            .into(),
    ))
}
