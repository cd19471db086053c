//! Acceptance suite: one line per criterion.
//!
//! A criterion listed in `KNOWN_GAPS` is expected to fail on exactly the
//! listed items; it is still reported as FAIL, but only a deviation from
//! that exact set makes the run fail. See `sll_countermodels.rs` for why
//! those items cannot be derived.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use subkern::calculus::{Preset, RuleId, SearchBudget};
use subkern::corpus::{all_entries, iul_converse_proof, run_corpus, CorpusEntry, EntryKind, Report};
use subkern::formula::box_substitute;
use subkern::multiset::Multiset;
use subkern::proof::check_derivation;
use subkern::prover::{prove, Verdict};
use subkern::random::{random_cut_derivation, random_kmall_derivation, random_multiset, random_sequent, Vocabulary};
use subkern::sequent::{enumerate_splits, Hypersequent};
use subkern::transform::{eliminate_cuts, translate_kmall_to_mall, translate_kmall_to_mall_with_axioms};

const KNOWN_GAPS: &[(u32, &[&str])] = &[
    (3, &["sll-converse-box-with"]),
    (
        6,
        &[
            "sll-converse-box-plus",
            "sll-converse-box-with",
            "sll-converse-dia-plus",
            "sll-converse-dia-with",
            "sll-s5",
        ],
    ),
];

struct Outcome {
    failed: BTreeSet<String>,
    note: String,
}

impl Outcome {
    fn new() -> Self {
        Outcome { failed: BTreeSet::new(), note: String::new() }
    }

    fn require(&mut self, ok: bool, item: impl Into<String>) {
        if !ok {
            self.failed.insert(item.into());
        }
    }
}

fn entries(pred: impl Fn(&CorpusEntry) -> bool) -> Vec<CorpusEntry> {
    all_entries().into_iter().filter(|e| pred(e)).collect()
}

fn entry(id: &str) -> CorpusEntry {
    all_entries().into_iter().find(|e| e.id == id).unwrap_or_else(|| panic!("no corpus entry {id}"))
}

fn goal(e: &CorpusEntry) -> Hypersequent {
    e.statement.conclusion().clone()
}

/// Records failed entries and re-checks every emitted proof.
fn absorb(out: &mut Outcome, report: &Report) {
    for r in &report.results {
        out.require(r.passed, r.id.clone());
        if let Some(d) = &r.proof {
            let ok = check_derivation(d, &r.logic.logic(), &r.axioms).is_ok();
            out.require(ok, format!("{} proof", r.id));
        }
    }
}

fn verdict_in(preset: Preset, g: &Hypersequent, budget: &SearchBudget) -> Verdict {
    let v = prove(g, &preset.logic(), budget, &[]);
    if let Some(d) = v.proof() {
        assert!(check_derivation(d, &preset.logic(), &[]).is_ok(), "unchecked proof of {g}");
    }
    v
}

fn criterion_1() -> Outcome {
    let mut out = Outcome::new();
    let es = entries(|e| e.logic == Preset::Mall && e.kind != EntryKind::FormulaUnderivable);
    absorb(&mut out, &run_corpus(&es, &SearchBudget::default()));
    out.note = format!("{} MALL entries", es.len());
    out
}

fn criterion_2() -> Outcome {
    let mut out = Outcome::new();
    let b = SearchBudget::default();
    let ids = ["anti-int-d", "int-d", "anti-dn", "dn"];
    for (i, id) in ids.iter().enumerate() {
        let e = entry(&format!("kmall-{id}"));
        let v = verdict_in(Preset::Kmall, &goal(&e), &b);
        out.require(matches!(v, Verdict::NotDerivable(_)), format!("kmall {id}"));
        let v = verdict_in(Preset::KmallPrime, &goal(&e), &b);
        let flipped = if i < 2 { v.is_derivable() } else { v.is_not_derivable() };
        out.require(flipped, format!("kmall-prime {id}"));
    }
    out
}

fn criterion_3() -> Outcome {
    let mut out = Outcome::new();
    let b = SearchBudget::default();
    let tarskian = goal(&entry("mall-converse-box-with"));
    let boxed = goal(&entry("kmall-converse-box-with"));
    out.require(verdict_in(Preset::Mall, &tarskian, &b).is_not_derivable(), "mall-converse-box-with");
    out.require(verdict_in(Preset::Kmall, &boxed, &b).is_not_derivable(), "kmall-converse-box-with");
    let sll = entry("sll-converse-box-with");
    let sll_budget = SearchBudget { contraction_budget: 2, max_depth: 30, ..b };
    out.require(verdict_in(Preset::Sll, &goal(&sll), &sll_budget).is_derivable(), "sll-converse-box-with");
    let iul = entry("iul-converse-box-with");
    let iul_budget = SearchBudget { ec_budget: 2, com_budget: 2, ..b };
    out.require(verdict_in(Preset::Iul, &goal(&iul), &iul_budget).is_derivable(), "iul-converse-box-with");
    out
}

fn criterion_4() -> Outcome {
    let mut out = Outcome::new();
    let b = SearchBudget::default();
    for suffix in ["d", "k-dual"] {
        let g = goal(&entry(&format!("mall-m-{suffix}")));
        out.require(verdict_in(Preset::MallM, &g, &b).is_derivable(), format!("mall-m {suffix}"));
        out.require(verdict_in(Preset::MallAnticontr, &g, &b).is_derivable(), format!("mall-anticontr {suffix}"));
        let plain = entry(&format!("mall-{suffix}"));
        out.require(plain.derived, format!("mall {suffix} flagged as established by search"));
        out.require(verdict_in(Preset::Mall, &g, &b).is_not_derivable(), format!("mall {suffix}"));
    }
    out.note = "the two MALL refutations are established by search".into();
    out
}

fn criterion_5() -> Outcome {
    let mut out = Outcome::new();
    let es = entries(|e| e.logic == Preset::Amall);
    absorb(&mut out, &run_corpus(&es, &SearchBudget::default()));
    let mingle = entries(|e| e.logic == Preset::MallM && e.kind == EntryKind::FormulaDerivable);
    for e in &mingle {
        let v = verdict_in(Preset::Amall, &goal(e), &SearchBudget::default());
        out.require(v.is_derivable(), format!("{} in amall", e.id));
    }
    out.note = format!("{} AMALL entries, {} mingle goals", es.len(), mingle.len());
    out
}

fn criterion_6() -> Outcome {
    let mut out = Outcome::new();
    let budget = SearchBudget { contraction_budget: 2, max_depth: 30, ..SearchBudget::default() };
    let es = entries(|e| e.logic == Preset::Sll);
    absorb(&mut out, &run_corpus(&es, &budget));
    out.note = format!("{} SLL entries", es.len());
    out
}

fn criterion_7() -> Outcome {
    let mut out = Outcome::new();
    let budget = SearchBudget { ec_budget: 2, com_budget: 2, ..SearchBudget::default() };
    let es = entries(|e| e.logic == Preset::Iul && e.kind != EntryKind::ProofTranscription);
    absorb(&mut out, &run_corpus(&es, &budget));
    let ok = check_derivation(&iul_converse_proof(), &Preset::Iul.logic(), &[]).is_ok();
    out.require(ok, "transcribed proof");
    out.note = format!("{} IUL entries plus the transcription", es.len());
    out
}

fn criterion_8() -> Outcome {
    let mut out = Outcome::new();
    let kmall = Preset::Kmall.logic();
    let mall = Preset::Mall.logic();
    let es = entries(|e| e.logic == Preset::Kmall && e.kind != EntryKind::FormulaUnderivable);
    let report = run_corpus(&es, &SearchBudget::default());
    let mut count = 0;
    for r in &report.results {
        let Some(d) = &r.proof else {
            out.require(false, format!("{} unproved", r.id));
            continue;
        };
        let axioms: Vec<Hypersequent> = r.axioms.iter().map(|a| a.map(box_substitute)).collect();
        match translate_kmall_to_mall_with_axioms(d, &r.axioms) {
            Ok(t) => {
                out.require(t.conclusion == d.conclusion.map(box_substitute), format!("{} endsequent", r.id));
                out.require(check_derivation(&t, &mall, &axioms).is_ok(), format!("{} check", r.id));
            }
            Err(e) => out.require(false, format!("{}: {e}", r.id)),
        }
        count += 1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut boxes = 0;
    for i in 0..20 {
        let d = random_kmall_derivation(&mut rng, 6);
        assert!(check_derivation(&d, &kmall, &[]).is_ok());
        boxes += d.count_rule(RuleId::KBox);
        match translate_kmall_to_mall(&d) {
            Ok(t) => {
                out.require(t.conclusion == d.conclusion.map(box_substitute), format!("generated {i} endsequent"));
                out.require(check_derivation(&t, &mall, &[]).is_ok(), format!("generated {i} check"));
            }
            Err(e) => out.require(false, format!("generated {i}: {e}")),
        }
    }
    out.note = format!("{count} corpus proofs, 20 generated ({boxes} K□ steps)");
    out
}

fn criterion_9() -> Outcome {
    let mut out = Outcome::new();
    let kmall = Preset::Kmall.logic();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let start = Instant::now();
    let mut cuts = 0;
    for i in 0..50 {
        let d = random_cut_derivation(&mut rng, 6, 2);
        cuts += d.count_rule(RuleId::Cut);
        match eliminate_cuts(&d) {
            Ok(e) => {
                out.require(!e.contains_rule(RuleId::Cut), format!("generated {i} cut-free"));
                out.require(e.conclusion == d.conclusion, format!("generated {i} endsequent"));
                out.require(check_derivation(&e, &kmall, &[]).is_ok(), format!("generated {i} check"));
            }
            Err(e) => out.require(false, format!("generated {i}: {e}")),
        }
    }
    let secs = start.elapsed().as_secs_f64();
    out.require(secs <= 60.0, "time limit");
    out.note = format!("50 derivations, {cuts} cuts, {secs:.2}s");
    out
}

fn criterion_10() -> Outcome {
    let mut out = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let presets = Preset::ALL;
    // Hypersequent nodes are far more expensive; a search that runs out is
    // just an unknown verdict, which this criterion does not count.
    let budget = |p: Preset| SearchBudget {
        node_limit: if p == Preset::Iul { 500 } else { 5_000 },
        ..SearchBudget::default()
    };
    let mut derivable = 0;
    for i in 0..500 {
        let preset = presets[i % presets.len()];
        let vocab = if matches!(preset, Preset::Kmall | Preset::KmallPrime) { Vocabulary::Kmall } else { Vocabulary::Tarskian };
        let g = Hypersequent::single(random_sequent(&mut rng, 3, 2, vocab));
        let logic = preset.logic();
        if let Verdict::Derivable(d) = prove(&g, &logic, &budget(preset), &[]) {
            derivable += 1;
            if let Err(v) = check_derivation(&d, &logic, &[]) {
                out.require(false, format!("goal {i} ({}): {v}", preset.name()));
            }
        }
    }
    out.note = format!("500 goals, {derivable} proofs checked");
    out
}

fn criterion_11() -> Outcome {
    let mut out = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for i in 0..200 {
        let m: Multiset<u8> = random_multiset(&mut rng, 6, 4);
        let expected: usize = (0..4u8).map(|x| m.iter().filter(|y| **y == x).count() + 1).product();
        let splits = m.splits();
        let distinct: BTreeSet<_> = splits.iter().collect();
        out.require(splits.len() == expected && distinct.len() == expected, format!("multiset {i}"));
        out.require(splits.iter().all(|(l, r)| l.sum(r) == m), format!("multiset {i} sums"));
    }
    // The sequent-level enumeration agrees on formula bags.
    let mut rng = ChaCha8Rng::seed_from_u64(111);
    for i in 0..50 {
        let s = random_sequent(&mut rng, 1, 6, Vocabulary::Tarskian);
        let expected: usize = s.ant.distinct().map(|(_, n)| n + 1).product();
        out.require(enumerate_splits(&s.ant).len() == expected, format!("formula bag {i}"));
    }
    out.note = "200 multisets, 50 formula bags".into();
    out
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, fn() -> Outcome); 11] = [
        (1, "MALL suite derivable, proofs check", criterion_1),
        (2, "KMALL refutations and the K□′ flip", criterion_2),
        (3, "converse box-with distribution across logics", criterion_3),
        (4, "mingle suite", criterion_4),
        (5, "AMALL suite and M admissibility spot check", criterion_5),
        (6, "SLL suite", criterion_6),
        (7, "IUL suite and transcribed proof", criterion_7),
        (8, "box translation into MALL", criterion_8),
        (9, "cut elimination on generated proofs", criterion_9),
        (10, "prover/checker soundness fuzz", criterion_10),
        (11, "split enumeration counts", criterion_11),
    ];
    let mut hard_failures = 0;
    for (n, title, run) in criteria {
        let start = Instant::now();
        let out = run();
        let ms = start.elapsed().as_millis();
        let known: Option<BTreeSet<String>> =
            KNOWN_GAPS.iter().find(|(k, _)| *k == n).map(|(_, ids)| ids.iter().map(|s| s.to_string()).collect());
        let status = if out.failed.is_empty() {
            if known.is_some() {
                hard_failures += 1;
                "PASS (listed as a known gap; update KNOWN_GAPS)"
            } else {
                "PASS"
            }
        } else if known.as_ref() == Some(&out.failed) {
            "FAIL (known gap)"
        } else {
            hard_failures += 1;
            "FAIL"
        };
        let mut line = format!("criterion {n:>2}: {status:<16} {title} [{ms} ms]");
        if !out.note.is_empty() {
            line.push_str(&format!("; {}", out.note));
        }
        if !out.failed.is_empty() {
            let items: Vec<&str> = out.failed.iter().map(String::as_str).collect();
            line.push_str(&format!("; failing: {}", items.join(", ")));
        }
        println!("{line}");
    }
    if hard_failures == 0 {
        println!("acceptance: all criteria met except the known gaps above");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {hard_failures} unexpected result(s)");
        ExitCode::FAILURE
    }
}
