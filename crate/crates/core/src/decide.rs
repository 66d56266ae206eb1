//! Provability and equivalence decided semantically, one logic at a time.
//!
//! Each class is validity-complete for its canonical model list at a fixed
//! vocabulary, so a formula is provable iff it holds at every world of every
//! canonical model. [`signature`] exposes those truth bits directly;
//! [`provable`] answers the same question through the configuration evaluator,
//! which agrees with the canonical lists but scales to the classes whose
//! lists are enormous. The Gamma(LS,1,2) eight-class normal form lives here
//! too, as a signature lookup table.

use std::collections::{BTreeMap, BTreeSet};

use crate::formula::{and, bx, dia, implies, or, polarities, var, variables, Formula};
use crate::kripke::{for_each_canonical_model, LogicId};
use crate::sem::Evaluator;
use crate::{Error, Result};

/// Truth bits of a formula across all canonical pointed models of a class,
/// ordered by model list position, then world index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Signature(pub Vec<bool>);

impl Signature {
    pub fn is_all_ones(&self) -> bool {
        self.0.iter().all(|&b| b)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Truth bits of `f` over every canonical pointed model of `l` at `vars`.
pub fn signature(l: LogicId, vars: &BTreeSet<String>, f: &Formula) -> Result<Signature> {
    let fv = variables(f);
    if !fv.is_subset(vars) {
        let extra: Vec<String> = fv.difference(vars).cloned().collect();
        return Err(Error::Precondition(format!(
            "formula mentions variables outside the given vocabulary: {}",
            extra.join(", ")
        )));
    }
    let mut bits = Vec::new();
    for_each_canonical_model(l, vars, |m| {
        let t = m.truth_set(f);
        for w in 0..m.world_count() {
            bits.push(t.get(w));
        }
        true
    })?;
    Ok(Signature(bits))
}

/// Comparable truth bits for many formulas over one shared configuration
/// enumeration of `l` at `vars`.
///
/// Unlike [`signature`], the index space is the configuration evaluator's, so
/// it stays tractable for the classes whose canonical lists are enormous.
/// Within one call the results are mutually comparable: `f` provably implies
/// `g` in `l` exactly when `f`'s bits are a pointwise subset of `g`'s.
pub fn batch_signatures(
    l: LogicId,
    vars: &BTreeSet<String>,
    fs: &[Formula],
) -> Result<Vec<Signature>> {
    let mut ev = Evaluator::new(l, vars)?;
    let mut ids = Vec::with_capacity(fs.len());
    for f in fs {
        let fv = variables(f);
        if !fv.is_subset(vars) {
            let extra: Vec<String> = fv.difference(vars).cloned().collect();
            return Err(Error::Precondition(format!(
                "formula mentions variables outside the given vocabulary: {}",
                extra.join(", ")
            )));
        }
        ids.push(ev.add(f)?);
    }
    let mut out = Vec::with_capacity(ids.len());
    for id in ids {
        let bits = ev.sig(id)?;
        out.push(Signature((0..bits.len()).map(|i| bits.get(i)).collect()));
    }
    Ok(out)
}

/// True iff `f` holds at every world of every model in the class of `l`.
pub fn provable(l: LogicId, f: &Formula) -> Result<bool> {
    let vars = variables(f);
    let mut ev = Evaluator::new(l, &vars)?;
    let id = ev.add(f)?;
    ev.valid(id)
}

/// A pointed in-class model refuting `f`, or `None` when `f` is provable.
pub fn countermodel(l: LogicId, f: &Formula) -> Result<Option<crate::kripke::PointedModel>> {
    let vars = variables(f);
    let mut ev = Evaluator::new(l, &vars)?;
    let id = ev.add(f)?;
    ev.countermodel(id)
}

/// True iff `f` and `g` are interderivable over `l`.
pub fn equivalent(l: LogicId, f: &Formula, g: &Formula) -> Result<bool> {
    let iff = and(implies(f.clone(), g.clone()), implies(g.clone(), f.clone()));
    provable(l, &iff)
}

/// The eight Gamma(LS,1,2) equivalence classes of formulas positive in p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Ls12Class {
    Bot,
    BoxP,
    PAndBoxDiaP,
    BoxDiaP,
    P,
    POrBoxDiaP,
    DiaP,
    Top,
}

impl Ls12Class {
    pub fn all() -> [Ls12Class; 8] {
        use Ls12Class::*;
        [Bot, BoxP, PAndBoxDiaP, BoxDiaP, P, POrBoxDiaP, DiaP, Top]
    }

    /// The class's canonical formula.
    pub fn representative(self) -> Formula {
        let p = || var("p");
        match self {
            Ls12Class::Bot => Formula::Bottom,
            Ls12Class::BoxP => bx(p()),
            Ls12Class::PAndBoxDiaP => and(p(), bx(dia(p()))),
            Ls12Class::BoxDiaP => bx(dia(p())),
            Ls12Class::P => p(),
            Ls12Class::POrBoxDiaP => or(p(), bx(dia(p()))),
            Ls12Class::DiaP => dia(p()),
            Ls12Class::Top => Formula::Top,
        }
    }
}

/// The Gamma(LS,1,2) class of a formula with v⁺ ⊆ {p} and empty v⁻.
pub fn classify_ls12(f: &Formula) -> Result<Ls12Class> {
    let pol = polarities(f);
    let pos_ok = pol.positive.iter().all(|v| v == "p");
    if !pos_ok || !pol.negative.is_empty() {
        return Err(Error::Precondition(format!(
            "classification needs v+ within {{p}} and empty v-, got v+={:?} v-={:?}",
            pol.positive, pol.negative
        )));
    }
    let vars: BTreeSet<String> = ["p".to_string()].into();
    let mut ev = Evaluator::new(LogicId::LS_1_2, &vars)?;
    let target = ev.add(f)?;
    let mut reps = BTreeMap::new();
    for c in Ls12Class::all() {
        reps.insert(c, ev.add(&c.representative())?);
    }
    let want = ev.sig(target)?;
    for (c, id) in reps {
        if ev.sig(id)? == want {
            return Ok(c);
        }
    }
    Err(Error::Internal(format!(
        "formula positive in p matches none of the eight classes: {f}"
    )))
}

/// All provable implications between the eight class representatives,
/// recomputed semantically.
pub fn ls12_implication_order() -> Result<BTreeSet<(Ls12Class, Ls12Class)>> {
    let vars: BTreeSet<String> = ["p".to_string()].into();
    let mut ev = Evaluator::new(LogicId::LS_1_2, &vars)?;
    let ids: Vec<(Ls12Class, u32)> = Ls12Class::all()
        .into_iter()
        .map(|c| Ok((c, ev.add(&c.representative())?)))
        .collect::<Result<_>>()?;
    let mut order = BTreeSet::new();
    for &(a, ia) in &ids {
        for &(b, ib) in &ids {
            if ev.entails(ia, ib)? {
                order.insert((a, b));
            }
        }
    }
    Ok(order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{not, parse};

    fn vset(names: &[&str]) -> BTreeSet<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn signature_follows_canonical_order() {
        let vars = vset(&["p"]);
        let sig = signature(LogicId::Triv, &vars, &var("p")).unwrap();
        assert_eq!(sig.0, vec![true, false]);
        let top = signature(LogicId::GV, &vars, &Formula::Top).unwrap();
        assert!(top.is_all_ones());
        assert_eq!(top.len(), 24);
        let bot = signature(LogicId::GV, &vars, &Formula::Bottom).unwrap();
        assert!(bot.0.iter().all(|&b| !b));
        assert!(signature(LogicId::S5, &vset(&[]), &var("p")).is_err());
    }

    #[test]
    fn provable_matches_known_theorems() {
        let f = parse("[]<>p <-> <>[]p").unwrap();
        assert!(provable(LogicId::LS_1_2, &f).unwrap());
        assert!(!provable(LogicId::S5, &f).unwrap());

        let g = parse("p & [](([]~p) | p) -> [](p | q | []~q)").unwrap();
        assert!(provable(LogicId::LP2_1_w, &g).unwrap());
        assert!(provable(LogicId::LS_1_2, &g).unwrap());

        assert!(provable(LogicId::S5, &parse("[]p -> p").unwrap()).unwrap());
        assert!(!provable(LogicId::S5, &parse("p -> []p").unwrap()).unwrap());
        assert!(provable(LogicId::Triv, &parse("p -> []p").unwrap()).unwrap());
    }

    #[test]
    fn batch_signatures_decide_entailment() {
        let vars = vset(&["p", "q"]);
        let pool: Vec<Formula> = [
            "p", "p & q", "p | q", "[]p", "<>p", "[](p -> q)", "<>(p & ~q)", "true", "false",
        ]
        .iter()
        .map(|s| parse(s).unwrap())
        .collect();
        for l in [LogicId::S5, LogicId::GV, LogicId::LP2_w_1] {
            let sigs = batch_signatures(l, &vars, &pool).unwrap();
            for (i, f) in pool.iter().enumerate() {
                assert_eq!(sigs[i].is_all_ones(), provable(l, f).unwrap());
                for (j, g) in pool.iter().enumerate() {
                    let subset = sigs[i].0.iter().zip(&sigs[j].0).all(|(&a, &b)| !a || b);
                    let imp = implies(f.clone(), g.clone());
                    assert_eq!(subset, provable(l, &imp).unwrap(), "{l:?}: {f} -> {g}");
                }
            }
        }
        assert!(batch_signatures(LogicId::S5, &vset(&["p"]), &pool).is_err());
    }

    #[test]
    fn countermodels_refute() {
        let f = parse("p -> []p").unwrap();
        let pm = countermodel(LogicId::GW, &f).unwrap().unwrap();
        assert!(crate::kripke::in_class(pm.model(), LogicId::GW));
        assert!(!crate::kripke::satisfies(&pm, &f));
        assert!(countermodel(LogicId::GW, &parse("[]p -> p").unwrap()).unwrap().is_none());
    }

    #[test]
    fn equivalent_is_an_equivalence_on_a_sample() {
        let pool: Vec<Formula> = [
            "p", "p & p", "p | (p & q)", "[]p", "[][]p", "<>p", "~~p", "q",
        ]
        .iter()
        .map(|s| parse(s).unwrap())
        .collect();
        let l = LogicId::S5;
        let n = pool.len();
        let mut eq = vec![vec![false; n]; n];
        for i in 0..n {
            for j in 0..n {
                eq[i][j] = equivalent(l, &pool[i], &pool[j]).unwrap();
            }
        }
        for i in 0..n {
            assert!(eq[i][i]);
            for j in 0..n {
                assert_eq!(eq[i][j], eq[j][i]);
                for k in 0..n {
                    if eq[i][j] && eq[j][k] {
                        assert!(eq[i][k]);
                    }
                }
            }
        }
        assert!(eq[0][1] && eq[0][2] && eq[0][6]);
        assert!(eq[3][4]);
        assert!(!eq[0][3] && !eq[0][7]);
    }

    #[test]
    fn classification_matches_rewrites() {
        assert_eq!(classify_ls12(&parse("[][]p").unwrap()).unwrap(), Ls12Class::BoxP);
        assert_eq!(classify_ls12(&parse("<>[]p").unwrap()).unwrap(), Ls12Class::BoxDiaP);
        assert_eq!(classify_ls12(&parse("p | p").unwrap()).unwrap(), Ls12Class::P);
        assert_eq!(classify_ls12(&parse("true & <>p").unwrap()).unwrap(), Ls12Class::DiaP);
        for c in Ls12Class::all() {
            assert_eq!(classify_ls12(&c.representative()).unwrap(), c);
        }
        assert!(classify_ls12(&not(var("p"))).is_err());
        assert!(classify_ls12(&var("q")).is_err());
    }

    #[test]
    fn the_eight_classes_are_distinct() {
        let vars = vset(&["p"]);
        let mut ev = Evaluator::new(LogicId::LS_1_2, &vars).unwrap();
        let mut sigs = Vec::new();
        for c in Ls12Class::all() {
            let id = ev.add(&c.representative()).unwrap();
            sigs.push(ev.sig(id).unwrap());
        }
        for i in 0..8 {
            for j in i + 1..8 {
                assert_ne!(sigs[i], sigs[j], "classes {i} and {j} collide");
            }
        }
    }

    #[test]
    fn implication_order_matches_the_diagram() {
        use Ls12Class::*;
        let order = ls12_implication_order().unwrap();
        let hasse = [
            (Bot, BoxP),
            (BoxP, PAndBoxDiaP),
            (PAndBoxDiaP, P),
            (PAndBoxDiaP, BoxDiaP),
            (P, POrBoxDiaP),
            (BoxDiaP, POrBoxDiaP),
            (POrBoxDiaP, DiaP),
            (DiaP, Top),
        ];
        for e in hasse {
            assert!(order.contains(&e), "missing edge {e:?}");
        }
        assert!(order.contains(&(BoxP, P)));
        assert!(order.contains(&(Bot, Top)));
        assert!(!order.contains(&(P, BoxDiaP)));
        assert!(!order.contains(&(BoxDiaP, P)));
        assert_eq!(order.len(), 35);
    }

    #[test]
    fn provability_sanity_for_every_ranked_logic() {
        let pool: Vec<Formula> = ["p", "p & ~q", "[](p | q)", "<>p -> q"]
            .iter()
            .map(|s| parse(s).unwrap())
            .collect();
        for l in LogicId::all() {
            if l.nip_rank().is_none() {
                continue;
            }
            for f in &pool {
                assert!(provable(l, &implies(f.clone(), f.clone())).unwrap());
                assert!(provable(l, &implies(bx(f.clone()), f.clone())).unwrap());
            }
        }
    }
}
