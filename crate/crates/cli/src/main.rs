//! Single entry point wiring the library into reproducible experiments:
//! `reduce`, `ca`, `enumerate`, `learn`, `learn-chunks`, `possess`, `demo`.
//!
//! Every command prints a human-readable table to stdout; `--out` writes a
//! machine-readable record file (one JSON object per line, sorted keys).
//! All output is deterministic: identical invocations produce byte-identical
//! bytes both on stdout and in record files.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::rc::Rc;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use conceptlab::space::{default_dsl, parse_dataset, row_object};
use conceptlab::{
    ca_run, degree_of_possession, extend_basis, extract_chunks, fixation_curve, parse_term,
    posterior, required_info, selection_info, sk_normalize, term_total_info, Basis, Boundary,
    BudgetedSpace, ChunkCandidate, Granularity, InfoQuantity, LikelihoodModel, PriorModel,
    ReductionStatus, RuleTable, SelectionModel, Tape, Unit,
};

#[derive(Parser)]
#[command(name = "conceptlab", version, about = "Compositional substrates, budgeted concept learning, and graded possession")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write a machine-readable record file (one JSON object per line).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Reduce an SK term to normal form (or until fuel runs out).
    Reduce {
        /// SK expression, e.g. "S K K x".
        term: String,
        /// Maximum number of contractions.
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u32).range(1..))]
        fuel: u32,
        /// Print every intermediate term, one per line.
        #[arg(long)]
        trace: bool,
    },
    /// Run an elementary cellular automaton.
    Ca {
        /// Wolfram rule number.
        #[arg(long, value_parser = rule_in_range)]
        rule: u32,
        /// Initial tape as a string of 0s and 1s (length >= 3).
        #[arg(long)]
        tape: String,
        /// Number of synchronous updates.
        #[arg(long, default_value_t = 16)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = BoundaryArg::FixedWhite)]
        boundary: BoundaryArg,
        /// Render cells as `.` and `#` instead of 0/1.
        #[arg(long)]
        render: bool,
    },
    /// Enumerate the budgeted compositional closure of a basis.
    Enumerate {
        #[command(flatten)]
        basis: BasisArg,
        /// Maximum term size in symbols.
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        budget: u32,
        /// Group terms into semantic classes by truth table.
        #[arg(long)]
        classes: bool,
    },
    /// Bayesian fixation curve: R(target) after each labeled example.
    Learn {
        #[command(flatten)]
        basis: BasisArg,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        budget: u32,
        /// Dataset file: one `label <T|F> ; atom=T ...` record per line.
        #[arg(long)]
        data: PathBuf,
        /// Target concept, e.g. "(or small red)".
        #[arg(long)]
        target: String,
        /// Likelihood noise in [0, 0.5).
        #[arg(long, default_value_t = 0.0, value_parser = epsilon_in_range)]
        epsilon: f64,
        #[arg(long, value_enum, default_value_t = GranularityArg::Semantic)]
        granularity: GranularityArg,
    },
    /// Extract chunks from a corpus and report the expressive gain.
    LearnChunks {
        /// Corpus file: one term per line.
        #[arg(long)]
        corpus: PathBuf,
        /// Maximum number of chunks to name.
        #[arg(long, default_value_t = 2)]
        max: usize,
        #[command(flatten)]
        basis: BasisArg,
        /// Budget at which to measure the expressive gain.
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u32).range(1..))]
        budget: u32,
        /// Write the extended basis to this file.
        #[arg(long)]
        out_basis: Option<PathBuf>,
    },
    /// Possession arithmetic for one selection model.
    Possess {
        /// Selection model: keyboard:<chars>:<bits-per-char>,
        /// one-button[:<actions>], ordered-buttons:<n>,
        /// restricted-space[:expressible].
        #[arg(long)]
        model: String,
        /// Total information T(c) in bits.
        #[arg(long)]
        total_bits: f64,
    },
    /// Canned experiments reproducing the headline numbers.
    Demo {
        #[arg(value_enum)]
        which: DemoArg,
    },
}

#[derive(Args)]
struct BasisArg {
    /// Basis file (`prim <name> <arity>` / `chunk <name> 0 = <term>`);
    /// defaults to the four-atom Boolean DSL.
    #[arg(long)]
    basis: Option<PathBuf>,
}

impl BasisArg {
    fn load(&self) -> Result<Basis> {
        match &self.basis {
            None => Ok(default_dsl()),
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("cannot read basis file {}", path.display()))?;
                Basis::parse_file(&text)
                    .with_context(|| format!("malformed basis file {}", path.display()))
            }
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum BoundaryArg {
    Cyclic,
    FixedWhite,
}

impl From<BoundaryArg> for Boundary {
    fn from(b: BoundaryArg) -> Boundary {
        match b {
            BoundaryArg::Cyclic => Boundary::Cyclic,
            BoundaryArg::FixedWhite => Boundary::FixedWhite,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum GranularityArg {
    Syntactic,
    Semantic,
}

impl From<GranularityArg> for Granularity {
    fn from(g: GranularityArg) -> Granularity {
        match g {
            GranularityArg::Syntactic => Granularity::Syntactic,
            GranularityArg::Semantic => Granularity::Semantic,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum DemoArg {
    Hobbit,
    Chunking,
    Dax,
}

fn rule_in_range(s: &str) -> Result<u32, String> {
    let n: u32 = s.parse().map_err(|_| "rule must be 0..255".to_string())?;
    if n > 255 {
        return Err("rule must be 0..255".to_string());
    }
    Ok(n)
}

fn epsilon_in_range(s: &str) -> Result<f64, String> {
    let e: f64 = s.parse().map_err(|_| "epsilon must be in [0, 0.5)".to_string())?;
    if !(0.0..0.5).contains(&e) {
        return Err("epsilon must be in [0, 0.5)".to_string());
    }
    Ok(e)
}

/// 4-decimal formatting for bits values in human tables; record files keep
/// full precision.
fn fmt_bits(v: f64) -> String {
    if v == f64::INFINITY {
        "inf".to_string()
    } else if v == f64::NEG_INFINITY {
        "-inf".to_string()
    } else {
        format!("{v:.4}")
    }
}

fn truth_table_string(table: conceptlab::TruthTable) -> String {
    (0..table.rows()).map(|r| if table.get(r) { '1' } else { '0' }).collect()
}

struct Output {
    stdout: String,
    records: Vec<serde_json::Value>,
}

impl Output {
    fn new() -> Self {
        Output { stdout: String::new(), records: Vec::new() }
    }

    fn line(&mut self, s: impl AsRef<str>) {
        self.stdout.push_str(s.as_ref());
        self.stdout.push('\n');
    }

    fn record(&mut self, v: serde_json::Value) {
        self.records.push(v);
    }

    fn finish(self, out: Option<&PathBuf>) -> Result<()> {
        print!("{}", self.stdout);
        if let Some(path) = out {
            let mut text = String::new();
            for r in &self.records {
                // serde_json maps are ordered by key, so this is stable.
                writeln!(text, "{r}").unwrap();
            }
            std::fs::write(path, text)
                .with_context(|| format!("cannot write record file {}", path.display()))?;
        }
        Ok(())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: &Cli) -> Result<()> {
    let mut out = Output::new();
    match &cli.command {
        Command::Reduce { term, fuel, trace } => cmd_reduce(&mut out, term, *fuel as usize, *trace)?,
        Command::Ca { rule, tape, steps, boundary, render } => {
            cmd_ca(&mut out, *rule, tape, *steps, (*boundary).into(), *render)?
        }
        Command::Enumerate { basis, budget, classes } => {
            cmd_enumerate(&mut out, &basis.load()?, *budget as usize, *classes)?
        }
        Command::Learn { basis, budget, data, target, epsilon, granularity } => cmd_learn(
            &mut out,
            &basis.load()?,
            *budget as usize,
            data,
            target,
            *epsilon,
            (*granularity).into(),
        )?,
        Command::LearnChunks { corpus, max, basis, budget, out_basis } => cmd_learn_chunks(
            &mut out,
            corpus,
            *max,
            &basis.load()?,
            *budget as usize,
            out_basis.as_ref(),
        )?,
        Command::Possess { model, total_bits } => cmd_possess(&mut out, model, *total_bits)?,
        Command::Demo { which } => match which {
            DemoArg::Hobbit => demo_hobbit(&mut out)?,
            DemoArg::Chunking => demo_chunking(&mut out)?,
            DemoArg::Dax => demo_dax(&mut out)?,
        },
    }
    out.finish(cli.out.as_ref())
}

fn cmd_reduce(out: &mut Output, term: &str, fuel: usize, trace: bool) -> Result<()> {
    let t = conceptlab::sk_parse(term).context("cannot parse SK term")?;
    let result = sk_normalize(t, fuel);
    if trace {
        for (i, step) in result.steps.iter().enumerate() {
            out.line(step.to_string());
            out.record(json!({"step": i, "term": step.to_string()}));
        }
    } else {
        out.line(result.final_term().to_string());
        out.record(json!({
            "step": result.steps.len() - 1,
            "term": result.final_term().to_string(),
        }));
    }
    let status = match result.status {
        ReductionStatus::NormalForm => "normal-form",
        ReductionStatus::FuelExhausted => "fuel-exhausted",
    };
    out.line(format!("status: {status} ({} steps)", result.steps.len() - 1));
    out.record(json!({"status": status, "steps": result.steps.len() - 1}));
    Ok(())
}

fn cmd_ca(
    out: &mut Output,
    rule: u32,
    tape: &str,
    steps: usize,
    boundary: Boundary,
    render: bool,
) -> Result<()> {
    let table = RuleTable::new(rule)?;
    let initial = Tape::parse(tape, boundary)?;
    let rows = ca_run(&initial, &table, steps)?;
    for (i, row) in rows.iter().enumerate() {
        out.line(row.render(render));
        out.record(json!({"row": i, "cells": row.render(false)}));
    }
    Ok(())
}

fn cmd_enumerate(out: &mut Output, basis: &Basis, budget: usize, classes: bool) -> Result<()> {
    let space = BudgetedSpace::new(basis.clone(), budget)?;
    if classes {
        let classes = space.semantic_classes()?;
        out.line(format!("{} terms, {} semantic classes at budget {budget}", space.len(), classes.len()));
        for (i, class) in classes.iter().enumerate() {
            out.line(format!(
                "class {i}  table {}  members {}  representative {}",
                truth_table_string(class.table),
                class.members.len(),
                class.representative().render()
            ));
            out.record(json!({
                "class": i,
                "members": class.members.len(),
                "representative": class.representative().render(),
                "table": truth_table_string(class.table),
            }));
        }
    } else {
        for t in space.terms() {
            out.line(t.render());
            out.record(json!({"size": t.size(), "term": t.render()}));
        }
    }
    Ok(())
}

fn cmd_learn(
    out: &mut Output,
    basis: &Basis,
    budget: usize,
    data_path: &PathBuf,
    target: &str,
    epsilon: f64,
    granularity: Granularity,
) -> Result<()> {
    let text = std::fs::read_to_string(data_path)
        .with_context(|| format!("cannot read data file {}", data_path.display()))?;
    let data = parse_dataset(&text)?;
    let target = parse_term(target, basis).context("cannot parse target term")?;
    let space = BudgetedSpace::new(basis.clone(), budget)?;
    let like = LikelihoodModel::new(epsilon)?;
    let curve = fixation_curve(&space, &PriorModel, &like, &data, &target, granularity)?;
    out.line("examples_seen  R_bits");
    for (seen, r) in &curve {
        out.line(format!("{seen:>13}  {}", fmt_bits(*r)));
        out.record(json!({"examples_seen": seen, "r_bits": r}));
    }
    Ok(())
}

fn cmd_learn_chunks(
    out: &mut Output,
    corpus_path: &PathBuf,
    max: usize,
    basis: &Basis,
    budget: usize,
    out_basis: Option<&PathBuf>,
) -> Result<()> {
    let text = std::fs::read_to_string(corpus_path)
        .with_context(|| format!("cannot read corpus file {}", corpus_path.display()))?;
    let corpus: Vec<Rc<conceptlab::Term>> = text
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| parse_term(l.trim(), basis).map(Rc::new))
        .collect::<Result<_, _>>()
        .context("cannot parse corpus")?;
    if corpus.is_empty() {
        bail!("corpus {} holds no terms", corpus_path.display());
    }
    let chunks = extract_chunks(&corpus, max, basis)?;
    report_chunking(out, basis, budget, &chunks)?;
    if let Some(path) = out_basis {
        let extended = extend_basis(basis, &chunks)?;
        std::fs::write(path, extended.render_file())
            .with_context(|| format!("cannot write basis file {}", path.display()))?;
        out.line(format!("extended basis written to {}", path.display()));
    }
    Ok(())
}

fn report_chunking(
    out: &mut Output,
    basis: &Basis,
    budget: usize,
    chunks: &[ChunkCandidate],
) -> Result<()> {
    out.line("rank  definition                    uses  gain_symbols  gain_bits");
    for (i, c) in chunks.iter().enumerate() {
        out.line(format!(
            "{:>4}  {:<28}  {:>4}  {:>12}  {}",
            i + 1,
            c.definition.render(),
            c.usage_count,
            c.symbol_gain,
            fmt_bits(c.mdl_gain_bits)
        ));
        out.record(json!({
            "rank": i + 1,
            "definition": c.definition.render(),
            "usage_count": c.usage_count,
            "symbol_gain": c.symbol_gain,
            "mdl_gain_bits": c.mdl_gain_bits,
        }));
    }
    let report = conceptlab::expressive_gain(basis, budget, chunks)?;
    out.line(format!(
        "semantic classes at budget {budget}: before {}, after {}, newly expressible {}",
        report.before,
        report.after,
        report.newly_expressible.len()
    ));
    out.record(json!({
        "budget": budget,
        "classes_before": report.before,
        "classes_after": report.after,
        "newly_expressible": report.newly_expressible.len(),
    }));
    let extended = extend_basis(basis, chunks)?;
    for (table, witness) in &report.newly_expressible {
        let expanded_size = extended.expand_chunks(witness)?.size();
        out.line(format!(
            "new  table {}  witness {}  size {}  expanded_size {}",
            truth_table_string(*table),
            witness.render(),
            witness.size(),
            expanded_size
        ));
        out.record(json!({
            "table": truth_table_string(*table),
            "witness": witness.render(),
            "size": witness.size(),
            "expanded_size": expanded_size,
        }));
    }
    Ok(())
}

fn parse_model(model: &str) -> Result<SelectionModel> {
    let parts: Vec<&str> = model.split(':').collect();
    match parts.as_slice() {
        ["keyboard", chars, bits] => Ok(SelectionModel::Keyboard {
            char_count: chars.parse().context("keyboard char count")?,
            bits_per_char: bits.parse().context("keyboard bits per char")?,
        }),
        ["one-button"] => Ok(SelectionModel::OneButton { action_count: 1 }),
        ["one-button", n] => Ok(SelectionModel::OneButton {
            action_count: n.parse().context("one-button action count")?,
        }),
        ["ordered-buttons", n] => Ok(SelectionModel::OrderedButtons {
            n: n.parse().context("ordered-buttons count")?,
        }),
        ["restricted-space"] => Ok(SelectionModel::RestrictedSpace { target_expressible: false }),
        ["restricted-space", "expressible"] => {
            Ok(SelectionModel::RestrictedSpace { target_expressible: true })
        }
        _ => bail!(
            "unknown model {model:?}; expected keyboard:<chars>:<bits-per-char>, \
             one-button[:<actions>], ordered-buttons:<n>, or restricted-space[:expressible]"
        ),
    }
}

fn possession_row(out: &mut Output, label: &str, total: InfoQuantity, model: &SelectionModel) -> Result<()> {
    let required = required_info(model, Unit::Bits);
    let report = degree_of_possession(label, total, required)?;
    let fraction = report
        .fraction
        .map(|f| format!("{:.0}%", f * 100.0))
        .unwrap_or_else(|| "-".to_string());
    out.line(format!(
        "{:<16}  T {:>12}  R {:>12}  degree {:>12}  fraction {:>5}",
        label,
        fmt_bits(total.value),
        fmt_bits(required.value),
        fmt_bits(report.degree),
        fraction
    ));
    out.record(json!({
        "concept": label,
        "model": model,
        "t_bits": total.value,
        "r_bits": required.value,
        "degree_bits": report.degree,
        "fraction": report.fraction,
    }));
    Ok(())
}

fn cmd_possess(out: &mut Output, model: &str, total_bits: f64) -> Result<()> {
    let model = parse_model(model)?;
    possession_row(out, "concept", InfoQuantity::bits(total_bits), &model)
}

fn demo_hobbit(out: &mut Output) -> Result<()> {
    let total = InfoQuantity::bits(587_000.0);
    out.line("word-processor possession of a 489,000-character text");
    out.line(format!(
        "T = 587000 bits (489000 chars x 1.2 bits/char = {})",
        fmt_bits(conceptlab::text_info(489_000, 1.2).value)
    ));
    possession_row(out, "keyboard", total, &SelectionModel::Keyboard {
        char_count: 489_000,
        bits_per_char: 587_000.0 / 489_000.0,
    })?;
    possession_row(out, "one-button", total, &SelectionModel::OneButton { action_count: 1 })?;
    possession_row(out, "chapters-19", total, &SelectionModel::OrderedButtons { n: 19 })?;

    // The sentence row's printed number matches the natural log, while the
    // chapter row matches log base 2; both readings are shown.
    let sentences_nats = conceptlab::log_factorial(4850, Unit::Nats);
    let sentences_bits = conceptlab::log_factorial(4850, Unit::Bits);
    let printed = sentences_nats.value.round();
    let report = degree_of_possession(
        "sentences-4850",
        total,
        InfoQuantity::bits(printed),
    )?;
    let fraction_pct = (report.fraction.unwrap() * 100.0).round();
    out.line(format!(
        "{:<16}  T {:>12}  R {:>12}  degree {:>12}  fraction {:>4.0}%",
        "sentences-4850",
        fmt_bits(total.value),
        fmt_bits(printed),
        fmt_bits(report.degree),
        fraction_pct
    ));
    out.record(json!({
        "concept": "sentences-4850",
        "t_bits": total.value,
        "r_printed": printed,
        "degree_bits": report.degree,
        "fraction": report.fraction,
        "log_factorial_nats": sentences_nats.value,
        "log_factorial_bits": sentences_bits.value,
    }));
    out.line(format!(
        "note: R(sentences) printed as {} matches ln(4850!) = {} nats; log2(4850!) = {} bits",
        printed,
        fmt_bits(sentences_nats.value),
        fmt_bits(sentences_bits.value)
    ));
    out.line(format!(
        "summary: 587000 - {} = {} bits possessed, or {:.0}%",
        printed, report.degree, fraction_pct
    ));
    Ok(())
}

fn demo_chunking(out: &mut Output) -> Result<()> {
    let basis = default_dsl();
    // A corpus in which two three-primitive compositions recur.
    let corpus_texts = [
        "(not (and small red))",
        "(or (and small red) blue)",
        "(and (and small red) circle)",
        "(not (and circle blue))",
        "(or (and circle blue) small)",
        "(and (and circle blue) red)",
    ];
    let corpus: Vec<Rc<conceptlab::Term>> = corpus_texts
        .iter()
        .map(|t| Rc::new(parse_term(t, &basis).unwrap()))
        .collect();
    out.line("corpus:");
    for t in &corpus_texts {
        out.line(format!("  {t}"));
    }
    let chunks = extract_chunks(&corpus, 2, &basis)?;
    report_chunking(out, &basis, 5, &chunks)?;
    let extended = extend_basis(&basis, &chunks)?;
    let target = parse_term("(or c1 c2)", &extended)?;
    let expanded = extended.expand_chunks(&target)?;
    out.line(format!(
        "target (or c1 c2) = {}  size {} as chunks, {} expanded: \
         inexpressible at budget 5 before chunking, size 3 after",
        expanded.render(),
        target.size(),
        expanded.size()
    ));
    Ok(())
}

fn demo_dax(out: &mut Output) -> Result<()> {
    let basis = default_dsl();
    let budget = 3;
    let space = BudgetedSpace::new(basis.clone(), budget)?;
    let target = parse_term("(or small red)", &basis)?;
    let table = space.truth_table(&target)?;
    let atoms = space.atoms();
    // Every feature object once, labeled by the target concept.
    let data: Vec<_> = (0..table.rows())
        .map(|row| (row_object(&atoms, row), table.get(row)))
        .collect();
    let like = LikelihoodModel::new(0.0)?;
    out.line(format!(
        "learning \"a dax is something that is small or red\" over {} hypotheses (budget {budget})",
        space.len()
    ));
    out.line("examples_seen  R_semantic_bits  R_syntactic_bits  degree_bits");
    let total = term_total_info(&target, &basis, budget)?;
    for seen in 0..=data.len() {
        let post = posterior(&space, &PriorModel, &like, &data[..seen])?;
        let r_sem = selection_info(&post, &space, &target, Granularity::Semantic)?;
        let r_syn = selection_info(&post, &space, &target, Granularity::Syntactic)?;
        let report = degree_of_possession("dax", total, InfoQuantity::bits(r_sem))?;
        out.line(format!(
            "{seen:>13}  {:>15}  {:>16}  {:>11}",
            fmt_bits(r_sem),
            fmt_bits(r_syn),
            fmt_bits(report.degree)
        ));
        out.record(json!({
            "examples_seen": seen,
            "r_semantic_bits": r_sem,
            "r_syntactic_bits": r_syn,
            "t_bits": total.value,
            "degree_bits": report.degree,
        }));
    }
    Ok(())
}
