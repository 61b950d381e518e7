//! Chunk extraction and the expressive-power gain it buys under a fixed
//! symbol budget. Naming a reusable composition makes it cost one symbol,
//! so compositions of chunks can denote functions whose chunk-free
//! witnesses would blow the budget.

use std::collections::HashMap;
use std::rc::Rc;

use crate::space::{BudgetedSpace, SpaceError, TruthTable};
use crate::term::{Basis, Term, TermError};

/// A repeated subterm worth naming. Gain is measured in symbol counts:
/// each of the `usage_count` call sites shrinks from `size` to 1 symbol,
/// while the definition itself costs `size` plus one new name.
#[derive(Debug, Clone, PartialEq)]
pub struct ChunkCandidate {
    pub definition: Rc<Term>,
    pub usage_count: usize,
    /// (usage_count * (size - 1)) - (size + 1), in symbols.
    pub symbol_gain: i64,
    /// symbol_gain converted to bits under a fixed-width code over the
    /// basis alphabet.
    pub mdl_gain_bits: f64,
}

/// Scans every subterm of size >= 2 occurring at least twice across the
/// corpus and returns the `max_chunks` candidates with highest positive
/// gain. Ties break toward smaller definitions, then lexicographic
/// rendering, so the result is deterministic.
pub fn extract_chunks(
    corpus: &[Rc<Term>],
    max_chunks: usize,
    basis: &Basis,
) -> Result<Vec<ChunkCandidate>, TermError> {
    let bits_per_symbol = (basis.symbol_count().max(2) as f64).log2();
    let mut counts: HashMap<String, (Rc<Term>, usize)> = HashMap::new();
    for t in corpus {
        for sub in t.subterms() {
            if sub.size() < 2 {
                continue;
            }
            // Candidates are chunk-free: expand any chunk symbols away.
            let expanded = basis.expand_chunks(sub)?;
            counts
                .entry(expanded.render())
                .and_modify(|(_, c)| *c += 1)
                .or_insert((expanded, 1));
        }
    }
    let mut candidates: Vec<ChunkCandidate> = counts
        .into_values()
        .filter(|(_, count)| *count >= 2)
        .map(|(definition, usage_count)| {
            let size = definition.size() as i64;
            let symbol_gain = usage_count as i64 * (size - 1) - (size + 1);
            ChunkCandidate {
                definition,
                usage_count,
                symbol_gain,
                mdl_gain_bits: symbol_gain as f64 * bits_per_symbol,
            }
        })
        .filter(|c| c.symbol_gain > 0)
        .collect();
    candidates.sort_by(|a, b| {
        b.symbol_gain
            .cmp(&a.symbol_gain)
            .then(a.definition.size().cmp(&b.definition.size()))
            .then(a.definition.render().cmp(&b.definition.render()))
    });
    candidates.truncate(max_chunks);
    Ok(candidates)
}

/// Appends the candidates as named arity-0 symbols `c1, c2, ...` (skipping
/// names the basis already uses). The input basis is unchanged.
pub fn extend_basis(basis: &Basis, chunks: &[ChunkCandidate]) -> Result<Basis, TermError> {
    let mut out = basis.clone();
    let mut next = 1usize;
    for cand in chunks {
        let name = loop {
            let candidate = format!("c{next}");
            next += 1;
            if out.lookup(&candidate).is_none() {
                break candidate;
            }
        };
        out.add_chunk(name, cand.definition.clone())?;
    }
    Ok(out)
}

/// Expressive-power comparison at a fixed budget, before and after chunks.
#[derive(Debug, Clone)]
pub struct GainReport {
    pub budget: usize,
    /// Semantic class count over the original basis.
    pub before: usize,
    /// Semantic class count with the chunks named.
    pub after: usize,
    /// Functions in the after-space but not the before-space, with the
    /// minimal witness the enumerator found for each.
    pub newly_expressible: Vec<(TruthTable, Rc<Term>)>,
}

/// Enumerates both budgeted spaces and diffs their semantic class sets.
pub fn expressive_gain(
    basis: &Basis,
    budget: usize,
    chunks: &[ChunkCandidate],
) -> Result<GainReport, SpaceError> {
    let before_space = BudgetedSpace::new(basis.clone(), budget)?;
    let before_classes = before_space.semantic_classes()?;
    let extended = extend_basis(basis, chunks)?;
    let after_space = BudgetedSpace::new(extended, budget)?;
    let after_classes = after_space.semantic_classes()?;
    let before_tables: std::collections::HashSet<TruthTable> =
        before_classes.iter().map(|c| c.table).collect();
    let newly_expressible = after_classes
        .iter()
        .filter(|c| !before_tables.contains(&c.table))
        .map(|c| (c.table, c.representative().clone()))
        .collect();
    Ok(GainReport {
        budget,
        before: before_classes.len(),
        after: after_classes.len(),
        newly_expressible,
    })
}
