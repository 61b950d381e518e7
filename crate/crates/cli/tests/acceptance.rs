//! Acceptance suite. Each test exercises one numbered criterion end to end
//! at its stated tolerance and prints a pass line (visible with
//! `cargo test --test acceptance -- --nocapture`).

use std::collections::HashSet;
use std::process::Command;
use std::rc::Rc;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use conceptlab::space::{default_dsl, row_object, truth_table_over};
use conceptlab::{
    ca_step, degree_of_possession, extend_basis, expressive_gain, extract_chunks, fixation_curve,
    log_factorial, parse_term, posterior, required_info, sk_decode_bool, sk_encode,
    sk_normalize, sk_parse, stirling_log_factorial, Basis, Boundary, BudgetedSpace, Granularity,
    InfoQuantity, LikelihoodModel, PriorModel, ReductionStatus, RuleTable, SelectionModel, SkTerm,
    SkValue, Symbol, Tape, Term, Unit,
};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_conceptlab"))
}

fn within(start: Instant, limit: Duration, criterion: &str) {
    let elapsed = start.elapsed();
    assert!(elapsed < limit, "{criterion} took {elapsed:?}, limit {limit:?}");
}

#[test]
fn criterion_1_hobbit_arithmetic() {
    let start = Instant::now();
    let output = bin().args(["demo", "hobbit"]).output().unwrap();
    assert!(output.status.success());
    let stdout = String::from_utf8(output.stdout).unwrap();

    assert!(stdout.contains("T = 587000 bits"), "missing T: {stdout}");
    let chapters = stdout.lines().find(|l| l.starts_with("chapters-19")).unwrap();
    let r_chapters: f64 = field_after(chapters, "R").parse().unwrap();
    assert!((r_chapters - 56.75).abs() < 0.01, "R(chapters) = {r_chapters}");

    let sentences = stdout.lines().find(|l| l.starts_with("sentences-4850")).unwrap();
    let r_sentences: f64 = field_after(sentences, "R").parse().unwrap();
    assert!((r_sentences - 36_316.0).abs() <= 1.0, "R(sentences) = {r_sentences}");
    let degree: f64 = field_after(sentences, "degree").parse().unwrap();
    assert!((degree - 550_684.0).abs() <= 1.0, "degree = {degree}");
    assert!(sentences.contains("94%"), "fraction: {sentences}");
    assert!(stdout.contains("550684"), "summary: {stdout}");

    within(start, Duration::from_secs(1), "criterion 1");
    println!("PASS criterion 1: hobbit arithmetic (T=587000, R≈56.75 / 36316, degree=550684, 94%)");
}

fn field_after<'a>(line: &'a str, key: &str) -> &'a str {
    let mut it = line.split_whitespace();
    while let Some(tok) = it.next() {
        if tok == key {
            return it.next().unwrap();
        }
    }
    panic!("no field {key} in {line}");
}

#[test]
fn criterion_2_exact_log_factorials() {
    let start = Instant::now();
    // Independent summation oracles.
    let sum_log2: f64 = (2..=19u64).map(|k| (k as f64).log2()).sum();
    let got_bits = log_factorial(19, Unit::Bits).value;
    assert!((got_bits - sum_log2).abs() / sum_log2 < 1e-9);

    let sum_ln: f64 = (2..=4850u64).map(|k| (k as f64).ln()).sum();
    let got_nats = log_factorial(4850, Unit::Nats).value;
    assert!((got_nats - sum_ln).abs() / sum_ln < 1e-9);

    for n in [19u64, 4850] {
        let exact = log_factorial(n, Unit::Nats).value;
        let stirling = stirling_log_factorial(n, Unit::Nats).value;
        assert!((stirling - exact).abs() / exact < 1e-4, "Stirling at n={n}");
    }
    within(start, Duration::from_secs(1), "criterion 2");
    println!("PASS criterion 2: exact log-factorials match summation (1e-9) and Stirling (0.01%)");
}

#[test]
fn criterion_3_rule_110_correctness() {
    let start = Instant::now();
    let table = RuleTable::new(110).unwrap();
    assert!(!table.next(true, true, true), "111 must map to 0");
    for b in 0..8u32 {
        let expect = (110 >> b) & 1 == 1;
        assert_eq!(table.next(b & 4 != 0, b & 2 != 0, b & 1 != 0), expect, "neighborhood {b:03b}");
    }

    // Second, independently written step implementation.
    let reference = |tape: &Tape, rule: u32| -> Vec<bool> {
        let n = tape.cells.len();
        (0..n)
            .map(|i| {
                let at = |j: isize| -> u32 {
                    if (0..n as isize).contains(&j) {
                        tape.cells[j as usize] as u32
                    } else {
                        match tape.boundary {
                            Boundary::Cyclic => tape.cells[j.rem_euclid(n as isize) as usize] as u32,
                            Boundary::FixedWhite => 0,
                        }
                    }
                };
                let idx = 4 * at(i as isize - 1) + 2 * at(i as isize) + at(i as isize + 1);
                (rule >> idx) & 1 == 1
            })
            .collect()
    };

    let mut rng = StdRng::seed_from_u64(110);
    for rule in [110u32, 30, 90] {
        let table = RuleTable::new(rule).unwrap();
        for _ in 0..1000 {
            let width = rng.gen_range(3..=64);
            let cells: Vec<bool> = (0..width).map(|_| rng.gen()).collect();
            let boundary = if rng.gen() { Boundary::Cyclic } else { Boundary::FixedWhite };
            let tape = Tape::new(cells, boundary).unwrap();
            assert_eq!(ca_step(&tape, &table).unwrap().cells, reference(&tape, rule));
        }
    }

    let white = Tape::parse("00000000", Boundary::FixedWhite).unwrap();
    assert_eq!(ca_step(&white, &RuleTable::new(110).unwrap()).unwrap(), white);

    within(start, Duration::from_secs(5), "criterion 3");
    println!("PASS criterion 3: rule 110 table, 3000 random-tape agreements, all-white fixpoint");
}

#[test]
fn criterion_4_sk_engine() {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(42);
    let atom = |rng: &mut StdRng| {
        let len = rng.gen_range(1..=5);
        let name: String = (0..len).map(|_| (b'a' + rng.gen_range(0..26)) as char).collect();
        SkTerm::atom(name)
    };

    for _ in 0..100 {
        let (a, b, c) = (atom(&mut rng), atom(&mut rng), atom(&mut rng));
        // K a b => a
        let k = SkTerm::apply_all(Rc::new(SkTerm::K), [a.clone(), b.clone()]);
        let trace = sk_normalize(k, 100);
        assert_eq!(trace.status, ReductionStatus::NormalForm);
        assert_eq!(trace.final_term(), &a);
        // S a b c => a c (b c)
        let s = SkTerm::apply_all(Rc::new(SkTerm::S), [a.clone(), b.clone(), c.clone()]);
        let expect = SkTerm::app(SkTerm::app(a.clone(), c.clone()), SkTerm::app(b, c));
        assert_eq!(sk_normalize(s, 1).steps[1], expect);
    }

    for _ in 0..100 {
        let x = atom(&mut rng);
        let skk_x = SkTerm::apply_all(sk_parse("S K K").unwrap(), [x.clone()]);
        let trace = sk_normalize(skk_x, 10);
        assert_eq!(trace.status, ReductionStatus::NormalForm);
        assert_eq!(trace.final_term(), &x);
    }

    for v in [true, false] {
        let enc = sk_encode(&SkValue::Bool(v)).unwrap();
        assert_eq!(sk_decode_bool(&enc, 100).unwrap(), v);
    }

    let omega = "S (S K K) (S K K) (S (S K K) (S K K))";
    let trace = sk_normalize(sk_parse(omega).unwrap(), 1000);
    assert_eq!(trace.status, ReductionStatus::FuelExhausted);

    within(start, Duration::from_secs(5), "criterion 4");
    println!("PASS criterion 4: SK rules pointwise, SKKx identity, bool round-trip, Ω fuel-exhausted");
}

fn two_atom_basis() -> Basis {
    Basis::new(vec![
        Symbol::new("small", 0).unwrap(),
        Symbol::new("red", 0).unwrap(),
        Symbol::new("and", 2).unwrap(),
        Symbol::new("or", 2).unwrap(),
        Symbol::new("not", 1).unwrap(),
    ])
    .unwrap()
}

#[test]
fn criterion_5_enumeration_oracle_equivalence() {
    let start = Instant::now();
    // Generate-and-filter oracle: hand every child the full remaining
    // budget and discard oversized results.
    fn oracle(basis: &Basis, max_size: usize) -> Vec<Rc<Term>> {
        let mut out = Vec::new();
        for sym in basis.symbols() {
            if 1 + sym.arity > max_size {
                continue;
            }
            if sym.arity == 0 {
                out.push(Rc::new(Term::leaf(sym.clone())));
                continue;
            }
            let pool = oracle(basis, max_size - sym.arity);
            let mut combos: Vec<Vec<Rc<Term>>> = vec![Vec::new()];
            for _ in 0..sym.arity {
                combos = combos
                    .iter()
                    .flat_map(|combo| {
                        pool.iter().map(move |c| {
                            let mut combo = combo.clone();
                            combo.push(c.clone());
                            combo
                        })
                    })
                    .collect();
            }
            for children in combos {
                let t = Term { head: sym.clone(), children };
                if t.size() <= max_size {
                    out.push(Rc::new(t));
                }
            }
        }
        out
    }

    let basis = two_atom_basis();
    let mut prev_classes = 0;
    for budget in 1..=6 {
        let space = BudgetedSpace::new(basis.clone(), budget).unwrap();
        let ours: HashSet<String> = space.terms().iter().map(|t| t.render()).collect();
        let expected: HashSet<String> = oracle(&basis, budget).iter().map(|t| t.render()).collect();
        assert_eq!(ours, expected, "budget {budget}");
        assert_eq!(space.len(), ours.len(), "enumerator must not duplicate");
        let classes = space.semantic_classes().unwrap().len();
        assert!(classes >= prev_classes && classes <= 16, "budget {budget}");
        prev_classes = classes;
    }
    within(start, Duration::from_secs(30), "criterion 5");
    println!("PASS criterion 5: enumeration equals brute-force oracle for budgets 1-6, classes monotone ≤ 16");
}

#[test]
fn criterion_6_chunking_expressive_gain() {
    let start = Instant::now();
    let basis = default_dsl();
    let corpus: Vec<Rc<Term>> = [
        "(not (and small red))",
        "(or (and small red) blue)",
        "(and (and small red) circle)",
        "(not (and circle blue))",
        "(or (and circle blue) small)",
        "(and (and circle blue) red)",
    ]
    .iter()
    .map(|t| Rc::new(parse_term(t, &basis).unwrap()))
    .collect();
    let chunks = extract_chunks(&corpus, 2, &basis).unwrap();
    assert_eq!(chunks.len(), 2);
    assert!(chunks.iter().all(|c| c.definition.size() == 3));

    let extended = extend_basis(&basis, &chunks).unwrap();
    let target = parse_term("(or c1 c2)", &extended).unwrap();
    let before = BudgetedSpace::new(basis.clone(), 5).unwrap();
    let target_table = truth_table_over(&target, &before.atoms(), &extended).unwrap();

    // Absent before chunking: no budget-5 chunk-free witness.
    assert!(before.contains_semantics(target_table).unwrap().is_none());
    // Its minimal chunk-free witness has size >= 6 (in fact 7).
    let expanded = extended.expand_chunks(&target).unwrap();
    assert!(expanded.size() >= 6);

    let report = expressive_gain(&basis, 5, &chunks).unwrap();
    let (_, witness) = report
        .newly_expressible
        .iter()
        .find(|(t, _)| *t == target_table)
        .expect("target must be newly expressible");
    assert!(witness.size() <= 5);
    assert!(extended.expand_chunks(witness).unwrap().size() >= 6);

    // Deterministic end to end.
    let report2 = expressive_gain(&basis, 5, &extract_chunks(&corpus, 2, &basis).unwrap()).unwrap();
    assert_eq!(report.before, report2.before);
    assert_eq!(report.after, report2.after);
    let render = |r: &conceptlab::GainReport| -> Vec<String> {
        r.newly_expressible.iter().map(|(_, w)| w.render()).collect::<Vec<_>>()
    };
    assert_eq!(render(&report), render(&report2));

    within(start, Duration::from_secs(60), "criterion 6");
    println!("PASS criterion 6: six-symbol target newly expressible at budget 5 via two size-3 chunks");
}

#[test]
fn criterion_7_posterior_correctness() {
    let start = Instant::now();
    let space = BudgetedSpace::new(default_dsl(), 4).unwrap();
    assert!(space.len() <= 10_000, "space has {} terms", space.len());

    let target = parse_term("(or small red)", &space.basis).unwrap();
    let table = space.truth_table(&target).unwrap();
    let atoms = space.atoms();
    let data: Vec<_> = (0..table.rows())
        .map(|row| (row_object(&atoms, row), table.get(row)))
        .collect();

    // Independent brute-force normalizer: linear-space products.
    let brute = |eps: f64, data: &[(conceptlab::FeatureObject, bool)]| -> Vec<f64> {
        let n = space.basis.symbol_count() as f64;
        let mut w: Vec<f64> = space.terms().iter().map(|t| n.powi(-(t.size() as i32))).collect();
        for (i, t) in space.terms().iter().enumerate() {
            for (obj, label) in data {
                let p = conceptlab::evaluate(t, obj, &space.basis).unwrap();
                w[i] *= if p == *label { 1.0 - eps } else { eps };
            }
        }
        let total: f64 = w.iter().sum();
        w.into_iter().map(|x| x / total).collect()
    };

    let prior_support: Vec<bool> = PriorModel.distribution(&space).iter().map(|&p| p > 0.0).collect();
    for eps in [0.0, 0.2] {
        let like = LikelihoodModel::new(eps).unwrap();
        for seen in [0, 4, data.len()] {
            let post = posterior(&space, &PriorModel, &like, &data[..seen]).unwrap();
            let expect = brute(eps, &data[..seen]);
            for ((_, p), e) in post.entries.iter().zip(&expect) {
                assert!((p - e).abs() < 1e-12, "eps {eps}, seen {seen}");
            }
            // Support invariance.
            for ((_, p), in_prior) in post.entries.iter().zip(&prior_support) {
                assert!(*p == 0.0 || *in_prior);
            }
        }
    }

    let like = LikelihoodModel::new(0.0).unwrap();
    let curve =
        fixation_curve(&space, &PriorModel, &like, &data, &target, Granularity::Semantic).unwrap();
    for w in curve.windows(2) {
        assert!(w[1].1 <= w[0].1 + 1e-9, "fixation curve must be nonincreasing");
    }
    assert!(curve.last().unwrap().1.abs() < 1e-9, "R must reach 0 bits");

    within(start, Duration::from_secs(60), "criterion 7");
    println!(
        "PASS criterion 7: posterior matches brute force (1e-12) over {} terms; dax curve hits 0 bits",
        space.len()
    );
}

#[test]
fn criterion_8_possession_semantics() {
    let start = Instant::now();
    let total = InfoQuantity::bits(1000.0);

    let blocked = required_info(&SelectionModel::RestrictedSpace { target_expressible: false }, Unit::Bits);
    let anti = degree_of_possession("blocked", total, blocked).unwrap();
    assert_eq!(anti.degree, f64::NEG_INFINITY);

    let full = degree_of_possession("held", total, InfoQuantity::bits(0.0)).unwrap();
    assert_eq!(full.degree, total.value);

    // Ranking is exactly inverse to R at fixed T.
    let rs = [0.0, 1.0, 10.0, 500.0, 999.0];
    let degrees: Vec<f64> = rs
        .iter()
        .map(|&r| degree_of_possession("x", total, InfoQuantity::bits(r)).unwrap().degree)
        .collect();
    for pair in degrees.windows(2) {
        assert!(pair[0] > pair[1]);
    }

    within(start, Duration::from_secs(1), "criterion 8");
    println!("PASS criterion 8: R=inf ⇒ degree=-inf, R=0 ⇒ degree=T, ranking inverse in R");
}

#[test]
fn criterion_9_reproducibility() {
    let dir = tempfile::tempdir().unwrap();
    let data_path = dir.path().join("data.txt");
    std::fs::write(
        &data_path,
        "label T ; small=T red=F circle=F blue=F\nlabel F ; small=F red=F circle=T blue=F\n",
    )
    .unwrap();

    let run_suite = |tag: &str| -> Vec<(String, Vec<u8>, Vec<u8>)> {
        let mut results = Vec::new();
        let demos: Vec<(&str, Vec<String>)> = vec![
            ("demo-hobbit", vec!["demo".into(), "hobbit".into()]),
            ("demo-chunking", vec!["demo".into(), "chunking".into()]),
            ("demo-dax", vec!["demo".into(), "dax".into()]),
            ("reduce", vec!["reduce".into(), "S K K x".into(), "--fuel".into(), "10".into(), "--trace".into()]),
            (
                "ca",
                vec!["ca".into(), "--rule".into(), "110".into(), "--tape".into(), "0000000010000000".into(), "--steps".into(), "16".into()],
            ),
            (
                "learn",
                vec![
                    "learn".into(),
                    "--budget".into(),
                    "3".into(),
                    "--data".into(),
                    data_path.display().to_string(),
                    "--target".into(),
                    "(or small red)".into(),
                ],
            ),
        ];
        for (name, args) in demos {
            let record = dir.path().join(format!("{name}-{tag}.jsonl"));
            let output = bin()
                .args(&args)
                .arg("--out")
                .arg(&record)
                .output()
                .unwrap();
            assert!(output.status.success(), "{name} failed: {:?}", output);
            results.push((
                name.to_string(),
                output.stdout,
                std::fs::read(&record).unwrap(),
            ));
        }
        results
    };

    let first = run_suite("a");
    let second = run_suite("b");
    for ((name, out_a, rec_a), (_, out_b, rec_b)) in first.iter().zip(&second) {
        assert_eq!(out_a, out_b, "{name} stdout differs between runs");
        assert_eq!(rec_a, rec_b, "{name} record file differs between runs");
        assert!(!rec_a.is_empty(), "{name} record file is empty");
    }
    println!("PASS criterion 9: demo suite twice, byte-identical stdout and record files");
}
