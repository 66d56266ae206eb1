//! Seeded generators for models, posets, formulas, and premise pairs, plus a
//! small deterministic formula pool. Every generator takes an explicit RNG
//! so failing cases replay from a printed seed.

use std::collections::BTreeSet;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::amalgam::{LemmaInstance, MatchingLemma};
use crate::formula::{
    and, bx, dia, iand, iimplies, inot, ior, not, or, var, Formula, IntFormula, PolaritySet,
};
use crate::heyting::IntModel;
use crate::kripke::{clusters, layered_model, Frame, LogicId, Model, PointedModel, Val};

/// The stream cipher RNG used throughout the test suites.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn rand_val(r: &mut ChaCha8Rng, k: usize) -> Val {
    r.gen_range(0..1u16 << k) as Val
}

fn rand_vals(r: &mut ChaCha8Rng, k: usize, len: usize) -> Vec<Val> {
    (0..len).map(|_| rand_val(r, k)).collect()
}

/// A random member of the class of `l`, with cluster sizes and counts drawn
/// small. Variables beyond eight are not supported.
pub fn random_in_class(r: &mut ChaCha8Rng, l: LogicId, vars: &[String]) -> Model {
    let k = vars.len();
    assert!(k <= 8, "valuations are generated as byte masks");
    let (lower, uppers): (Option<Vec<Val>>, Vec<Vec<Val>>) = match l {
        LogicId::Triv => (None, vec![rand_vals(r, k, 1)]),
        LogicId::S5 => {
            let size = r.gen_range(1..=4);
            (None, vec![rand_vals(r, k, size)])
        }
        LogicId::GW2 => (Some(rand_vals(r, k, 1)), vec![rand_vals(r, k, 1)]),
        LogicId::LS_2_1 => (Some(rand_vals(r, k, 1)), vec![rand_vals(r, k, 2)]),
        LogicId::S4_4 => {
            let size = r.gen_range(1..=4);
            (Some(rand_vals(r, k, 1)), vec![rand_vals(r, k, size)])
        }
        LogicId::GV => (
            Some(rand_vals(r, k, 1)),
            vec![rand_vals(r, k, 1), rand_vals(r, k, 1)],
        ),
        LogicId::LV_2_1 => (
            Some(rand_vals(r, k, 1)),
            vec![rand_vals(r, k, 2), rand_vals(r, k, 2)],
        ),
        LogicId::LV_w_1 => {
            let sizes = [r.gen_range(1..=3), r.gen_range(1..=3)];
            (
                Some(rand_vals(r, k, 1)),
                sizes.iter().map(|&s| rand_vals(r, k, s)).collect(),
            )
        }
        LogicId::GW => {
            let count = r.gen_range(1..=4);
            (
                Some(rand_vals(r, k, 1)),
                (0..count).map(|_| rand_vals(r, k, 1)).collect(),
            )
        }
        LogicId::LP2_2_1 => {
            let count = r.gen_range(1..=3);
            (
                Some(rand_vals(r, k, 1)),
                (0..count).map(|_| rand_vals(r, k, 2)).collect(),
            )
        }
        LogicId::LP2_w_1 => {
            let count = r.gen_range(1..=3);
            (
                Some(rand_vals(r, k, 1)),
                (0..count)
                    .map(|_| {
                        let s = r.gen_range(1..=3);
                        rand_vals(r, k, s)
                    })
                    .collect(),
            )
        }
        LogicId::LS_1_2 => (Some(rand_vals(r, k, 2)), vec![rand_vals(r, k, 1)]),
        LogicId::LP2_1_w => {
            let root = r.gen_range(1..=3);
            let count = r.gen_range(1..=3);
            (
                Some(rand_vals(r, k, root)),
                (0..count).map(|_| rand_vals(r, k, 1)).collect(),
            )
        }
    };
    let upper_slices: Vec<&[Val]> = uppers.iter().map(|c| c.as_slice()).collect();
    layered_model(vars, lower.as_deref(), &upper_slices)
}

/// A random class member with a random evaluation point.
pub fn random_pointed_in_class(r: &mut ChaCha8Rng, l: LogicId, vars: &[String]) -> PointedModel {
    let m = random_in_class(r, l, vars);
    let w = r.gen_range(0..m.world_count());
    PointedModel::new(m, w).expect("point is within the generated model")
}

/// A random reflexive-transitive model on up to `max_worlds` worlds with an
/// arbitrary valuation; no class shape is imposed.
pub fn random_model(r: &mut ChaCha8Rng, max_worlds: usize, vars: &[String]) -> Model {
    let n = r.gen_range(1..=max_worlds);
    let mut arrows = Vec::new();
    let density = 2.0 / n as f64;
    for a in 0..n {
        for b in 0..n {
            if a != b && r.gen_bool(density.min(1.0)) {
                arrows.push((a, b));
            }
        }
    }
    let frame = Frame::closed(n, &arrows).expect("closure of in-range arrows is S4");
    let k = vars.len();
    let val = (0..n)
        .map(|_| {
            let mask = rand_val(r, k);
            vars.iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, p)| p.clone())
                .collect()
        })
        .collect();
    Model::new(frame, val).expect("valuation covers every world")
}

/// A random model with a random evaluation point.
pub fn random_pointed_model(r: &mut ChaCha8Rng, max_worlds: usize, vars: &[String]) -> PointedModel {
    let m = random_model(r, max_worlds, vars);
    let w = r.gen_range(0..m.world_count());
    PointedModel::new(m, w).expect("point is within the generated model")
}

/// A random poset model: arrows only ascend world indices, so the closure is
/// antisymmetric; valuations are made persistent by flooding upward.
pub fn random_poset_model(r: &mut ChaCha8Rng, max_worlds: usize, vars: &[String]) -> IntModel {
    let n = r.gen_range(1..=max_worlds);
    let mut arrows = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if r.gen_bool(0.4) {
                arrows.push((a, b));
            }
        }
    }
    let frame = Frame::closed(n, &arrows).expect("closure of ascending arrows is a poset");
    let k = vars.len();
    let mut val: Vec<BTreeSet<String>> = (0..n)
        .map(|_| {
            let mask = rand_val(r, k);
            vars.iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, p)| p.clone())
                .collect()
        })
        .collect();
    for b in 0..n {
        for a in 0..b {
            if frame.sees(a, b) {
                let lower = val[a].clone();
                val[b].extend(lower);
            }
        }
    }
    IntModel::new(frame, val).expect("flooded valuation is persistent")
}

/// Each variable lands in the positive and negative sets independently.
pub fn random_polarity(r: &mut ChaCha8Rng, vars: &[String]) -> PolaritySet {
    let mut ps = PolaritySet::empty();
    for v in vars {
        if r.gen_bool(0.5) {
            ps.positive.insert(v.clone());
        }
        if r.gen_bool(0.5) {
            ps.negative.insert(v.clone());
        }
    }
    ps
}

/// A polarity set biased toward few constraints, so transfer premises hold
/// often enough for rejection sampling.
pub fn small_polarity(r: &mut ChaCha8Rng, vars: &[String]) -> PolaritySet {
    let mut ps = PolaritySet::empty();
    for v in vars {
        match r.gen_range(0..10) {
            0..=3 => {}
            4..=6 => {
                ps.positive.insert(v.clone());
            }
            7..=8 => {
                ps.negative.insert(v.clone());
            }
            _ => {
                ps.positive.insert(v.clone());
                ps.negative.insert(v.clone());
            }
        }
    }
    ps
}

/// A candidate transfer premise: two pointed class members and a polarity
/// context. Draws mix reflexive pairs, empty contexts, and sparse contexts
/// so that conditioning on the transfer relation keeps most samples.
pub fn premise_candidate(
    r: &mut ChaCha8Rng,
    l: LogicId,
    vars: &[String],
) -> (PointedModel, PointedModel, PolaritySet) {
    match r.gen_range(0..3) {
        0 => {
            let m = random_in_class(r, l, vars);
            let w0 = r.gen_range(0..m.world_count());
            let pm0 = PointedModel::new(m.clone(), w0).expect("point in range");
            let pm1 = PointedModel::new(m, w0).expect("point in range");
            (pm0, pm1, random_polarity(r, vars))
        }
        1 => (
            random_pointed_in_class(r, l, vars),
            random_pointed_in_class(r, l, vars),
            PolaritySet::empty(),
        ),
        _ => (
            random_pointed_in_class(r, l, vars),
            random_pointed_in_class(r, l, vars),
            small_polarity(r, vars),
        ),
    }
}

/// A random modal formula with at most `budget` connective nodes.
pub fn random_formula(r: &mut ChaCha8Rng, vars: &[String], budget: u32) -> Formula {
    if budget == 0 || r.gen_bool(0.25) {
        return match r.gen_range(0..if vars.is_empty() { 2 } else { 6 }) {
            0 => Formula::Top,
            1 => Formula::Bottom,
            _ => var(&vars[r.gen_range(0..vars.len())]),
        };
    }
    let inner = budget - 1;
    match r.gen_range(0..6) {
        0 => not(random_formula(r, vars, inner)),
        1 => bx(random_formula(r, vars, inner)),
        2 => dia(random_formula(r, vars, inner)),
        op => {
            let left = r.gen_range(0..=inner);
            let a = random_formula(r, vars, left);
            let b = random_formula(r, vars, inner - left);
            match op {
                3 => and(a, b),
                4 => or(a, b),
                _ => crate::formula::implies(a, b),
            }
        }
    }
}

/// A random intuitionistic formula with at most `budget` connective nodes.
pub fn random_int_formula(r: &mut ChaCha8Rng, vars: &[String], budget: u32) -> IntFormula {
    if budget == 0 || r.gen_bool(0.25) {
        return match r.gen_range(0..if vars.is_empty() { 2 } else { 6 }) {
            0 => IntFormula::Top,
            1 => IntFormula::Bottom,
            _ => IntFormula::Var(vars[r.gen_range(0..vars.len())].clone()),
        };
    }
    let inner = budget - 1;
    if r.gen_range(0..5) == 0 {
        return inot(random_int_formula(r, vars, inner));
    }
    let left = r.gen_range(0..=inner);
    let a = random_int_formula(r, vars, left);
    let b = random_int_formula(r, vars, inner - left);
    match r.gen_range(0..3) {
        0 => iand(a, b),
        1 => ior(a, b),
        _ => iimplies(a, b),
    }
}

/// A deterministic pool of small formulas: constants, literals, then two
/// rounds of boxing, diamonding, and combining with literals, truncated at
/// `cap`. Used where a declared finite candidate set stands in for an
/// unbounded quantifier.
pub fn formula_pool(vars: &[String], cap: usize) -> Vec<Formula> {
    let mut pool = vec![Formula::Top, Formula::Bottom];
    let lits: Vec<Formula> = vars
        .iter()
        .flat_map(|v| [var(v), not(var(v))])
        .collect();
    pool.extend(lits.iter().cloned());
    let mut layer = lits.clone();
    for _ in 0..2 {
        let mut next = Vec::new();
        for f in &layer {
            next.push(bx(f.clone()));
            next.push(dia(f.clone()));
        }
        for f in &layer {
            for l in &lits {
                if f != l {
                    next.push(and(f.clone(), l.clone()));
                    next.push(or(f.clone(), l.clone()));
                }
            }
        }
        layer.clear();
        for f in next {
            if pool.len() >= cap {
                return pool;
            }
            if !pool.contains(&f) {
                pool.push(f.clone());
                layer.push(f);
            }
        }
    }
    pool
}

fn final_point(r: &mut ChaCha8Rng, m: Model) -> PointedModel {
    let part = clusters(&m);
    let finals = part.final_blocks();
    let block = &part.blocks[finals[r.gen_range(0..finals.len())]];
    let w = block[r.gen_range(0..block.len())];
    PointedModel::new(m, w).expect("final point in range")
}

fn root_point(m: Model) -> PointedModel {
    let part = clusters(&m);
    let w = part.blocks[part.root_block.expect("rooted class member")][0];
    PointedModel::new(m, w).expect("root in range")
}

/// A candidate instance for one matching lemma, shaped to its hypothesis:
/// fan-class sources with final or root points as the lemma demands, paired
/// or two-cluster classes where witnesses need room, and a sparse context.
/// Candidates may still miss the transfer premise; the checker rejects those.
pub fn lemma_instance(
    r: &mut ChaCha8Rng,
    which: MatchingLemma,
    vars: &[String],
) -> LemmaInstance {
    use LogicId::*;
    let pick = |r: &mut ChaCha8Rng, xs: &[LogicId]| xs[r.gen_range(0..xs.len())];
    let fans = [S5, S4_4, GW, LV_w_1, LP2_w_1];
    let ps = small_polarity(r, vars);
    let (pm0, pm1) = match which {
        MatchingLemma::PointMatch | MatchingLemma::PairWitnesses => {
            let pool: &[LogicId] = if which == MatchingLemma::PointMatch {
                &fans
            } else {
                &[LS_2_1, LV_2_1, LP2_2_1]
            };
            let (l0, l1) = (pick(r, pool), pick(r, pool));
            let m0 = random_in_class(r, l0, vars);
            let m1 = random_in_class(r, l1, vars);
            (final_point(r, m0), final_point(r, m1))
        }
        MatchingLemma::RootMatch => {
            let (l0, l1) = (pick(r, &fans), pick(r, &[GW2, S4_4, GW, LP2_w_1]));
            let m0 = random_in_class(r, l0, vars);
            let m1 = random_in_class(r, l1, vars);
            (final_point(r, m0), root_point(m1))
        }
        MatchingLemma::MutualMatch | MatchingLemma::ClusterAssignment => {
            let pool: &[LogicId] = if which == MatchingLemma::MutualMatch {
                &[GW2, S4_4, GV, GW, LP2_w_1]
            } else {
                &[GV, LV_2_1, LV_w_1]
            };
            let (l0, l1) = (pick(r, pool), pick(r, pool));
            let m0 = random_in_class(r, l0, vars);
            let m1 = if r.gen_bool(0.3) { m0.clone() } else { random_in_class(r, l1, vars) };
            (root_point(m0), root_point(m1))
        }
    };
    LemmaInstance { pm0, pm1, ps }
}
