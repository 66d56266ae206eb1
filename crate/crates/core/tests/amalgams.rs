//! Randomized end-to-end checks of the amalgam constructions and the
//! cluster-matching facts they rest on.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use lyndon_core::amalgam::{
    build_amalgam, check_matching_lemma, lip_failure_report, verify_nip, LemmaInstance,
    MatchingLemma,
};
use lyndon_core::formula::{render, PolaritySet};
use lyndon_core::gen::{premise_candidate, random_in_class, rng, small_polarity};
use lyndon_core::interp::n_implies;
use lyndon_core::kripke::{clusters, LogicId, Model, PointedModel};
use lyndon_core::Error;

fn names() -> Vec<String> {
    vec!["p".into(), "q".into()]
}

fn pset(pos: &[&str], neg: &[&str]) -> PolaritySet {
    PolaritySet::new(pos.iter().copied(), neg.iter().copied())
}

fn ranked() -> Vec<LogicId> {
    LogicId::all().into_iter().filter(|l| l.nip_rank().is_some()).collect()
}

#[test]
fn every_accepted_premise_pair_amalgamates() {
    let mut r = rng(211);
    let vars = names();
    for l in ranked() {
        let rank = l.nip_rank().unwrap();
        let mut accepted = 0;
        let mut attempts = 0;
        while accepted < 50 {
            attempts += 1;
            assert!(attempts < 5000, "{l:?}: premise pairs too rare");
            let (pm0, pm1, ps) = premise_candidate(&mut r, l, &vars);
            if !n_implies(&pm0, &pm1, &ps, rank, l) {
                continue;
            }
            let am = build_amalgam(l, &pm0, &pm1, &ps).unwrap();
            assert!(verify_nip(&am, l, &pm0, &pm1, &ps, am.point), "{l:?} amalgam fails a clause");
            accepted += 1;
        }
    }
}

#[test]
fn premise_failures_and_class_mixups_are_rejected() {
    let mut r = rng(223);
    let vars = names();
    for l in [LogicId::S5, LogicId::GW, LogicId::LV_2_1] {
        let rank = l.nip_rank().unwrap();
        let ps = pset(&["p"], &[]);
        let mut rejected = 0;
        let mut attempts = 0;
        while rejected < 10 && attempts < 2000 {
            attempts += 1;
            let m0 = random_in_class(&mut r, l, &vars);
            let m1 = random_in_class(&mut r, l, &vars);
            let pm0 = point_at_random(&mut r, m0);
            let pm1 = point_at_random(&mut r, m1);
            if n_implies(&pm0, &pm1, &ps, rank, l) {
                continue;
            }
            match build_amalgam(l, &pm0, &pm1, &ps) {
                Err(Error::Precondition(_)) => rejected += 1,
                other => panic!("{l:?}: expected a precondition error, got {other:?}"),
            }
        }
        assert_eq!(rejected, 10, "{l:?}: failing pairs too rare");
    }
    let cluster = random_in_class(&mut r, LogicId::S5, &vars);
    let s5 = point_at_random(&mut r, cluster);
    assert!(matches!(
        build_amalgam(LogicId::GW2, &s5, &s5, &PolaritySet::empty()),
        Err(Error::Precondition(_))
    ));
}

fn point_at_random(r: &mut ChaCha8Rng, m: Model) -> PointedModel {
    let w = r.gen_range(0..m.world_count());
    PointedModel::new(m, w).unwrap()
}

fn final_point(r: &mut ChaCha8Rng, m: Model) -> PointedModel {
    let part = clusters(&m);
    let finals = part.final_blocks();
    let block = &part.blocks[finals[r.gen_range(0..finals.len())]];
    let w = block[r.gen_range(0..block.len())];
    PointedModel::new(m, w).unwrap()
}

fn root_point(m: Model) -> PointedModel {
    let part = clusters(&m);
    let w = part.blocks[part.root_block.unwrap()][0];
    PointedModel::new(m, w).unwrap()
}

fn pick<T: Copy>(r: &mut ChaCha8Rng, xs: &[T]) -> T {
    xs[r.gen_range(0..xs.len())]
}

/// Draws hypothesis-satisfying instances for one lemma until `want` of them
/// pass through `check_matching_lemma`, insisting the conclusion holds every
/// time and that enough draws carried a nonempty polarity context.
fn sweep_lemma(
    r: &mut ChaCha8Rng,
    which: MatchingLemma,
    want: usize,
    draw: impl Fn(&mut ChaCha8Rng) -> LemmaInstance,
) {
    let mut accepted = 0;
    let mut biting = 0;
    let mut attempts = 0;
    while accepted < want {
        attempts += 1;
        assert!(attempts < want * 500, "{which:?}: hypothesis instances too rare");
        let inst = draw(r);
        match check_matching_lemma(which, &inst) {
            Ok(true) => {
                accepted += 1;
                if !inst.ps.is_empty() {
                    biting += 1;
                }
            }
            Ok(false) => panic!("{which:?} conclusion failed on a hypothesis instance"),
            Err(Error::Precondition(_)) => {}
            Err(e) => panic!("{which:?}: {e}"),
        }
    }
    assert!(biting * 3 >= want, "{which:?}: too few nonempty-context instances ({biting})");
}

#[test]
fn final_point_transfer_forces_cluster_matching() {
    let mut r = rng(307);
    let vars = names();
    let fans = [LogicId::S5, LogicId::S4_4, LogicId::GW, LogicId::LV_w_1, LogicId::LP2_w_1];
    sweep_lemma(&mut r, MatchingLemma::PointMatch, 60, |r| {
        let (l0, l1) = (pick(r, &fans), pick(r, &fans));
        let m0 = random_in_class(r, l0, &vars);
        let m1 = random_in_class(r, l1, &vars);
        let (pm0, pm1) = (final_point(r, m0), final_point(r, m1));
        LemmaInstance { pm0, pm1, ps: small_polarity(r, &vars) }
    });
}

#[test]
fn root_transfer_forces_matching_with_every_final_cluster() {
    let mut r = rng(311);
    let vars = names();
    let fans = [LogicId::S5, LogicId::S4_4, LogicId::GW, LogicId::LP2_w_1];
    let rooted = [LogicId::GW2, LogicId::S4_4, LogicId::GW, LogicId::LP2_w_1];
    sweep_lemma(&mut r, MatchingLemma::RootMatch, 60, |r| {
        let (l0, l1) = (pick(r, &fans), pick(r, &rooted));
        let m0 = random_in_class(r, l0, &vars);
        let m1 = random_in_class(r, l1, &vars);
        let pm0 = final_point(r, m0);
        LemmaInstance { pm0, pm1: root_point(m1), ps: small_polarity(r, &vars) }
    });
}

#[test]
fn mutual_root_transfer_forces_two_sided_coverage() {
    let mut r = rng(313);
    let vars = names();
    let rooted = [LogicId::GW2, LogicId::S4_4, LogicId::GV, LogicId::GW, LogicId::LP2_w_1];
    sweep_lemma(&mut r, MatchingLemma::MutualMatch, 60, |r| {
        let ps = small_polarity(r, &vars);
        let (l0, l1) = (pick(r, &rooted), pick(r, &rooted));
        let m0 = random_in_class(r, l0, &vars);
        let m1 = if r.gen_bool(0.3) { m0.clone() } else { random_in_class(r, l1, &vars) };
        LemmaInstance { pm0: root_point(m0), pm1: root_point(m1), ps }
    });
}

#[test]
fn matching_pair_clusters_admit_distinct_witnesses() {
    let mut r = rng(317);
    let vars = names();
    let paired = [LogicId::LS_2_1, LogicId::LV_2_1, LogicId::LP2_2_1];
    sweep_lemma(&mut r, MatchingLemma::PairWitnesses, 60, |r| {
        let (l0, l1) = (pick(r, &paired), pick(r, &paired));
        let m0 = random_in_class(r, l0, &vars);
        let m1 = random_in_class(r, l1, &vars);
        let (pm0, pm1) = (final_point(r, m0), final_point(r, m1));
        LemmaInstance { pm0, pm1, ps: small_polarity(r, &vars) }
    });
}

#[test]
fn two_cluster_models_admit_a_distinct_assignment() {
    let mut r = rng(331);
    let vars = names();
    let twos = [LogicId::GV, LogicId::LV_2_1, LogicId::LV_w_1];
    sweep_lemma(&mut r, MatchingLemma::ClusterAssignment, 60, |r| {
        let ps = small_polarity(r, &vars);
        let (l0, l1) = (pick(r, &twos), pick(r, &twos));
        let m0 = random_in_class(r, l0, &vars);
        let m1 = if r.gen_bool(0.3) { m0.clone() } else { random_in_class(r, l1, &vars) };
        LemmaInstance { pm0: root_point(m0), pm1: root_point(m1), ps }
    });
}

#[test]
fn the_failure_report_is_deterministic_and_conclusive() {
    let a = lip_failure_report().unwrap();
    let b = lip_failure_report().unwrap();
    assert!(a.implication_valid && a.premise_side_ok && a.survivors_as_expected);
    assert!(a.refutation_ok && a.no_interpolant);
    assert_eq!(a.survivors, b.survivors);
    assert_eq!(render(&a.premise), render(&b.premise));
    assert_eq!(render(&a.conclusion), render(&b.conclusion));
    assert_eq!(a.premise_model.model().to_json(), b.premise_model.model().to_json());
    assert_eq!(a.refuting_model.model().to_json(), b.refuting_model.model().to_json());
    assert_eq!(a.premise_model.point(), b.premise_model.point());
    assert_eq!(a.refuting_model.point(), b.refuting_model.point());
}
