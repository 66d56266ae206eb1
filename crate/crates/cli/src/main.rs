//! Command-line workbench over the core library: parsing, provability,
//! equivalence, uniform and Lyndon interpolation, amalgam checking, the
//! eight-class classifier, intuitionistic mirrors, and canonical model dumps.
//!
//! Exit codes: 0 for success or a true check, 1 for a check that came back
//! false (non-provable, failed clause), 2 for input errors. Output is
//! deterministic for a fixed argument list; `--json` switches to
//! machine-readable form.

use std::io::Read as _;
use std::process::ExitCode;
use std::sync::OnceLock;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use lyndon_core::amalgam::{
    build_amalgam, check_matching_lemma, lip_failure_report, nip_report, verify_nip,
    LabeledAmalgam, LemmaInstance, MatchingLemma, NipReport, NIP_CLAUSES,
};
use lyndon_core::decide::{classify_ls12, countermodel, equivalent, provable};
use lyndon_core::formula::{
    implies, int_polarities, parse, parse_int, polarities, render, render_int, PolaritySet,
};
use lyndon_core::gen::{lemma_instance, premise_candidate, rng};
use lyndon_core::heyting::{int_provable, int_uniform_interpolant, IntLogicId};
use lyndon_core::interp::{
    lyndon_interpolant_capped, n_implies, uniform_interpolant_capped, DEFAULT_MEMBER_CAP,
};
use lyndon_core::kripke::{for_each_canonical_model, Model, PointedModel, LogicId};

fn logic_help() -> &'static str {
    static HELP: OnceLock<String> = OnceLock::new();
    HELP.get_or_init(|| {
        let mut s = String::from("Modal logic tags:\n");
        for l in LogicId::all() {
            s += &format!("  {:<8} {}\n", l.tag(), l.display_name());
        }
        s += "\nIntermediate logic tags:\n";
        for il in IntLogicId::all() {
            s += &format!("  {:<8} {}\n", il.tag(), il.display_name());
        }
        s
    })
}

#[derive(Parser)]
#[command(
    name = "lyndon",
    about = "Workbench for uniform Lyndon interpolation over finite-height extensions of S4",
    after_help = logic_help()
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse a modal formula and print its normalized rendering
    Parse {
        /// Formula text, or - to read it from stdin
        formula: String,
        #[arg(long)]
        json: bool,
    },
    /// Check provability; prints a countermodel when the formula fails
    Prove {
        #[arg(long)]
        logic: String,
        formula: String,
        #[arg(long)]
        json: bool,
    },
    /// Check provable equivalence of two formulas
    Equiv {
        #[arg(long)]
        logic: String,
        left: String,
        right: String,
        #[arg(long)]
        json: bool,
    },
    /// Strongest consequence avoiding the removed polarized variables
    Interp {
        #[arg(long)]
        logic: String,
        /// Positive occurrences to remove, comma separated
        #[arg(long, value_name = "CSV", default_value = "")]
        remove_pos: String,
        /// Negative occurrences to remove, comma separated
        #[arg(long, value_name = "CSV", default_value = "")]
        remove_neg: String,
        /// Cap on enumerated formula classes per family
        #[arg(long, default_value_t = DEFAULT_MEMBER_CAP)]
        max_family: usize,
        formula: String,
        #[arg(long)]
        json: bool,
    },
    /// Interpolant of a provable implication, polarity-bounded by both sides
    Lyndon {
        #[arg(long)]
        logic: String,
        premise: String,
        conclusion: String,
        #[arg(long, default_value_t = DEFAULT_MEMBER_CAP)]
        max_family: usize,
        #[arg(long)]
        json: bool,
    },
    /// Amalgamate two pointed models and check all six clauses
    NipCheck {
        #[arg(long)]
        logic: String,
        /// Positive context variables, comma separated
        #[arg(long, value_name = "CSV", default_value = "")]
        pos: String,
        /// Negative context variables, comma separated
        #[arg(long, value_name = "CSV", default_value = "")]
        neg: String,
        /// MODEL0.json WORLD0 MODEL1.json WORLD1; omit for a random sweep
        #[arg(value_name = "INSTANCE")]
        instance: Vec<String>,
        /// Number of random premise-satisfying pairs to sweep
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Check one cluster-matching lemma on an instance or a random sweep
    LemmaCheck {
        #[arg(long, value_enum)]
        lemma: LemmaName,
        #[arg(long, value_name = "CSV", default_value = "")]
        pos: String,
        #[arg(long, value_name = "CSV", default_value = "")]
        neg: String,
        /// MODEL0.json WORLD0 MODEL1.json WORLD1; omit for a random sweep
        #[arg(value_name = "INSTANCE")]
        instance: Vec<String>,
        /// Number of hypothesis-satisfying instances to sweep
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Reproduce the fixed interpolation-failure argument, clause by clause
    Counterexample {
        #[arg(long)]
        json: bool,
    },
    /// Place a positive one-variable formula among the eight classes
    Classify {
        formula: String,
        #[arg(long)]
        json: bool,
    },
    /// Check intuitionistic provability through the modal companion
    Iprove {
        #[arg(long)]
        logic: String,
        formula: String,
        #[arg(long)]
        json: bool,
    },
    /// Intuitionistic uniform interpolant
    Iinterp {
        #[arg(long)]
        logic: String,
        #[arg(long, value_name = "CSV", default_value = "")]
        remove_pos: String,
        #[arg(long, value_name = "CSV", default_value = "")]
        remove_neg: String,
        formula: String,
        #[arg(long)]
        json: bool,
    },
    /// Dump the canonical model catalog, one JSON object per line
    Models {
        #[arg(long)]
        logic: String,
        /// Variables of the catalog, comma separated
        #[arg(long, value_name = "CSV")]
        vars: String,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LemmaName {
    PointMatch,
    RootMatch,
    MutualMatch,
    PairWitnesses,
    ClusterAssignment,
}

impl LemmaName {
    fn to_lemma(self) -> MatchingLemma {
        match self {
            LemmaName::PointMatch => MatchingLemma::PointMatch,
            LemmaName::RootMatch => MatchingLemma::RootMatch,
            LemmaName::MutualMatch => MatchingLemma::MutualMatch,
            LemmaName::PairWitnesses => MatchingLemma::PairWitnesses,
            LemmaName::ClusterAssignment => MatchingLemma::ClusterAssignment,
        }
    }

    fn label(self) -> &'static str {
        match self {
            LemmaName::PointMatch => "point-match",
            LemmaName::RootMatch => "root-match",
            LemmaName::MutualMatch => "mutual-match",
            LemmaName::PairWitnesses => "pair-witnesses",
            LemmaName::ClusterAssignment => "cluster-assignment",
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse().cmd) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn read_text(arg: &str) -> Result<String, String> {
    if arg == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| format!("cannot read stdin: {e}"))?;
        Ok(s)
    } else {
        Ok(arg.to_string())
    }
}

fn csv(s: &str) -> Vec<String> {
    s.split(',').map(str::trim).filter(|x| !x.is_empty()).map(String::from).collect()
}

fn pset(pos: &str, neg: &str) -> PolaritySet {
    PolaritySet::new(csv(pos), csv(neg))
}

fn modal_logic(tag: &str) -> Result<LogicId, String> {
    LogicId::from_tag(tag).map_err(|e| e.to_string())
}

fn int_logic(tag: &str) -> Result<IntLogicId, String> {
    IntLogicId::from_tag(tag)
        .ok_or_else(|| format!("unknown intermediate logic tag {tag:?} (try cl, ls, lv, lp2)"))
}

fn model_value(m: &Model) -> Value {
    serde_json::from_str(&m.to_json()).expect("model JSON is well formed")
}

fn amalgam_value(am: &LabeledAmalgam) -> Value {
    json!({
        "worlds": am.frame.world_count(),
        "relation": am.frame.relation_pairs(),
        "point": am.point,
        "label0": am.label0,
        "label1": am.label1,
    })
}

fn clause_lines(report: &NipReport) -> String {
    NIP_CLAUSES
        .iter()
        .zip(report.passed.iter())
        .map(|(name, ok)| format!("clause {name}: {}\n", if *ok { "pass" } else { "fail" }))
        .collect()
}

fn load_instance(args: &[String], ps: PolaritySet) -> Result<LemmaInstance, String> {
    if args.len() != 4 {
        return Err(format!(
            "expected MODEL0.json WORLD0 MODEL1.json WORLD1, got {} arguments",
            args.len()
        ));
    }
    let mut pms = Vec::new();
    for pair in args.chunks(2) {
        let text = std::fs::read_to_string(&pair[0])
            .map_err(|e| format!("cannot read {}: {e}", pair[0]))?;
        let m = Model::from_json(&text).map_err(|e| format!("{}: {e}", pair[0]))?;
        let w: usize =
            pair[1].parse().map_err(|_| format!("world index {:?} is not a number", pair[1]))?;
        pms.push(PointedModel::new(m, w).map_err(|e| e.to_string())?);
    }
    let pm1 = pms.pop().expect("two models parsed");
    let pm0 = pms.pop().expect("two models parsed");
    Ok(LemmaInstance { pm0, pm1, ps })
}

fn run(cmd: Cmd) -> Result<bool, String> {
    match cmd {
        Cmd::Parse { formula, json } => {
            let f = parse(&read_text(&formula)?).map_err(|e| e.to_string())?;
            let pol = polarities(&f);
            if json {
                println!(
                    "{}",
                    json!({
                        "formula": render(&f),
                        "depth": lyndon_core::formula::depth(&f),
                        "positive": pol.positive,
                        "negative": pol.negative,
                    })
                );
            } else {
                println!("{}", render(&f));
            }
            Ok(true)
        }
        Cmd::Prove { logic, formula, json } => {
            let l = modal_logic(&logic)?;
            let f = parse(&read_text(&formula)?).map_err(|e| e.to_string())?;
            if provable(l, &f).map_err(|e| e.to_string())? {
                println!("{}", if json { json!({"valid": true}).to_string() } else { "valid".into() });
                return Ok(true);
            }
            let pm = countermodel(l, &f)
                .map_err(|e| e.to_string())?
                .expect("non-valid formula has a countermodel");
            if json {
                println!(
                    "{}",
                    json!({
                        "valid": false,
                        "countermodel": model_value(pm.model()),
                        "world": pm.point(),
                    })
                );
            } else {
                println!("not valid at world {} of:", pm.point());
                println!("{}", pm.model().to_json());
            }
            Ok(false)
        }
        Cmd::Equiv { logic, left, right, json } => {
            let l = modal_logic(&logic)?;
            let f = parse(&read_text(&left)?).map_err(|e| e.to_string())?;
            let g = parse(&read_text(&right)?).map_err(|e| e.to_string())?;
            let same = equivalent(l, &f, &g).map_err(|e| e.to_string())?;
            if json {
                println!("{}", json!({ "equivalent": same }));
            } else {
                println!("{}", if same { "equivalent" } else { "not equivalent" });
            }
            Ok(same)
        }
        Cmd::Interp { logic, remove_pos, remove_neg, max_family, formula, json } => {
            let l = modal_logic(&logic)?;
            let f = parse(&read_text(&formula)?).map_err(|e| e.to_string())?;
            let removal = pset(&remove_pos, &remove_neg);
            let theta =
                uniform_interpolant_capped(l, &f, &removal, max_family).map_err(|e| e.to_string())?;
            if json {
                let pol = polarities(&theta);
                println!(
                    "{}",
                    json!({
                        "interpolant": render(&theta),
                        "positive": pol.positive,
                        "negative": pol.negative,
                    })
                );
            } else {
                println!("{}", render(&theta));
            }
            Ok(true)
        }
        Cmd::Lyndon { logic, premise, conclusion, max_family, json } => {
            let l = modal_logic(&logic)?;
            let f = parse(&read_text(&premise)?).map_err(|e| e.to_string())?;
            let g = parse(&read_text(&conclusion)?).map_err(|e| e.to_string())?;
            if !provable(l, &implies(f.clone(), g.clone())).map_err(|e| e.to_string())? {
                if json {
                    println!("{}", json!({"provable": false}));
                } else {
                    println!("implication not provable");
                }
                return Ok(false);
            }
            let xi = lyndon_interpolant_capped(l, &f, &g, max_family).map_err(|e| e.to_string())?;
            if json {
                println!("{}", json!({"provable": true, "interpolant": render(&xi)}));
            } else {
                println!("{}", render(&xi));
            }
            Ok(true)
        }
        Cmd::NipCheck { logic, pos, neg, instance, count, seed, json } => {
            let l = modal_logic(&logic)?;
            let rank = l
                .nip_rank()
                .ok_or_else(|| format!("{} supports no amalgam construction", l.display_name()))?;
            let ps = pset(&pos, &neg);
            if instance.is_empty() {
                return nip_sweep(l, rank, count, seed, json);
            }
            let inst = load_instance(&instance, ps)?;
            if !n_implies(&inst.pm0, &inst.pm1, &inst.ps, rank, l) {
                if json {
                    println!("{}", json!({"premise": false, "rank": rank}));
                } else {
                    println!("transfer premise fails at rank {rank}");
                }
                return Ok(false);
            }
            let am = build_amalgam(l, &inst.pm0, &inst.pm1, &inst.ps).map_err(|e| e.to_string())?;
            let report = nip_report(&am, l, &inst.pm0, &inst.pm1, &inst.ps, am.point);
            if json {
                let clauses: Vec<Value> = NIP_CLAUSES
                    .iter()
                    .zip(report.passed.iter())
                    .map(|(name, ok)| json!({"clause": name, "pass": ok}))
                    .collect();
                println!(
                    "{}",
                    json!({
                        "premise": true,
                        "amalgam": amalgam_value(&am),
                        "clauses": clauses,
                        "pass": report.all_pass(),
                    })
                );
            } else {
                print!("{}", clause_lines(&report));
                println!("amalgam: {}", amalgam_value(&am));
            }
            Ok(report.all_pass())
        }
        Cmd::LemmaCheck { lemma, pos, neg, instance, count, seed, json } => {
            let which = lemma.to_lemma();
            let ps = pset(&pos, &neg);
            if instance.is_empty() {
                return lemma_sweep(lemma, count, seed, json);
            }
            let inst = load_instance(&instance, ps)?;
            let holds = check_matching_lemma(which, &inst).map_err(|e| e.to_string())?;
            if json {
                println!("{}", json!({"lemma": lemma.label(), "conclusion": holds}));
            } else {
                println!(
                    "{}: conclusion {}",
                    lemma.label(),
                    if holds { "holds" } else { "fails" }
                );
            }
            Ok(holds)
        }
        Cmd::Counterexample { json } => {
            let r = lip_failure_report().map_err(|e| e.to_string())?;
            let survivors: Vec<String> =
                r.survivors.iter().map(|c| render(&c.representative())).collect();
            if json {
                println!(
                    "{}",
                    json!({
                        "premise": render(&r.premise),
                        "conclusion": render(&r.conclusion),
                        "implication_valid": r.implication_valid,
                        "premise_model": model_value(r.premise_model.model()),
                        "premise_world": r.premise_model.point(),
                        "premise_side_ok": r.premise_side_ok,
                        "survivors": survivors,
                        "survivors_as_expected": r.survivors_as_expected,
                        "refuting_model": model_value(r.refuting_model.model()),
                        "refuting_world": r.refuting_model.point(),
                        "refutation_ok": r.refutation_ok,
                        "no_interpolant": r.no_interpolant,
                    })
                );
            } else {
                let mark = |b: bool| if b { "pass" } else { "fail" };
                println!("premise:    {}", render(&r.premise));
                println!("conclusion: {}", render(&r.conclusion));
                println!("implication valid in the widest class: {}", mark(r.implication_valid));
                println!(
                    "premise model (world {}) satisfies the premise, refutes []<>p: {}",
                    r.premise_model.point(),
                    mark(r.premise_side_ok)
                );
                println!(
                    "surviving positive consequences [{}]: {}",
                    survivors.join(", "),
                    mark(r.survivors_as_expected)
                );
                println!(
                    "refuting model (world {}) satisfies every survivor, refutes the conclusion: {}",
                    r.refuting_model.point(),
                    mark(r.refutation_ok)
                );
                println!("no polarity-respecting interpolant exists: {}", mark(r.no_interpolant));
            }
            Ok(r.no_interpolant)
        }
        Cmd::Classify { formula, json } => {
            let f = parse(&read_text(&formula)?).map_err(|e| e.to_string())?;
            let class = classify_ls12(&f).map_err(|e| e.to_string())?;
            let rep = render(&class.representative());
            if json {
                println!("{}", json!({"class": format!("{class:?}"), "representative": rep}));
            } else {
                println!("{class:?} ({rep})");
            }
            Ok(true)
        }
        Cmd::Iprove { logic, formula, json } => {
            let il = int_logic(&logic)?;
            let f = parse_int(&read_text(&formula)?).map_err(|e| e.to_string())?;
            let valid = int_provable(il, &f).map_err(|e| e.to_string())?;
            if json {
                println!("{}", json!({ "valid": valid }));
            } else {
                println!("{}", if valid { "valid" } else { "not valid" });
            }
            Ok(valid)
        }
        Cmd::Iinterp { logic, remove_pos, remove_neg, formula, json } => {
            let il = int_logic(&logic)?;
            let f = parse_int(&read_text(&formula)?).map_err(|e| e.to_string())?;
            let removal = pset(&remove_pos, &remove_neg);
            let xi = int_uniform_interpolant(il, &f, &removal).map_err(|e| e.to_string())?;
            if json {
                let pol = int_polarities(&xi);
                println!(
                    "{}",
                    json!({
                        "interpolant": render_int(&xi),
                        "positive": pol.positive,
                        "negative": pol.negative,
                    })
                );
            } else {
                println!("{}", render_int(&xi));
            }
            Ok(true)
        }
        Cmd::Models { logic, vars } => {
            let l = modal_logic(&logic)?;
            let vars = csv(&vars).into_iter().collect();
            for_each_canonical_model(l, &vars, |m| {
                println!("{}", m.to_json());
                true
            })
            .map_err(|e| e.to_string())?;
            Ok(true)
        }
    }
}

fn nip_sweep(l: LogicId, rank: u32, count: usize, seed: u64, json: bool) -> Result<bool, String> {
    let vars = vec!["p".to_string(), "q".to_string()];
    let mut r = rng(seed);
    let mut accepted = 0usize;
    let mut attempts = 0usize;
    while accepted < count {
        attempts += 1;
        if attempts > count.saturating_mul(200).max(1000) {
            return Err(format!("premise-satisfying pairs too rare for {}", l.tag()));
        }
        let (pm0, pm1, ps) = premise_candidate(&mut r, l, &vars);
        if !n_implies(&pm0, &pm1, &ps, rank, l) {
            continue;
        }
        let am = build_amalgam(l, &pm0, &pm1, &ps).map_err(|e| e.to_string())?;
        if !verify_nip(&am, l, &pm0, &pm1, &ps, am.point) {
            if json {
                println!(
                    "{}",
                    json!({"pass": false, "accepted": accepted, "attempts": attempts, "seed": seed})
                );
            } else {
                println!("amalgam clause failed after {accepted} verified pairs (seed {seed})");
            }
            return Ok(false);
        }
        accepted += 1;
    }
    if json {
        println!(
            "{}",
            json!({"pass": true, "accepted": accepted, "attempts": attempts, "seed": seed})
        );
    } else {
        println!("{accepted} premise-satisfying pairs amalgamated and verified ({attempts} draws, seed {seed})");
    }
    Ok(true)
}

fn lemma_sweep(lemma: LemmaName, count: usize, seed: u64, json: bool) -> Result<bool, String> {
    let which = lemma.to_lemma();
    let vars = vec!["p".to_string(), "q".to_string()];
    let mut r = rng(seed);
    let mut accepted = 0usize;
    let mut attempts = 0usize;
    while accepted < count {
        attempts += 1;
        if attempts > count.saturating_mul(500).max(1000) {
            return Err(format!("hypothesis-satisfying instances too rare for {}", lemma.label()));
        }
        match check_matching_lemma(which, &lemma_instance(&mut r, which, &vars)) {
            Ok(true) => accepted += 1,
            Ok(false) => {
                if json {
                    println!(
                        "{}",
                        json!({"lemma": lemma.label(), "pass": false, "accepted": accepted, "seed": seed})
                    );
                } else {
                    println!(
                        "{}: conclusion failed after {accepted} instances (seed {seed})",
                        lemma.label()
                    );
                }
                return Ok(false);
            }
            Err(_) => {}
        }
    }
    if json {
        println!(
            "{}",
            json!({"lemma": lemma.label(), "pass": true, "accepted": accepted, "attempts": attempts, "seed": seed})
        );
    } else {
        println!(
            "{}: {accepted} hypothesis-satisfying instances verified ({attempts} draws, seed {seed})",
            lemma.label()
        );
    }
    Ok(true)
}
