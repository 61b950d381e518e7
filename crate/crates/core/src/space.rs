//! Budgeted compositional closures over the Boolean concept DSL.
//!
//! A `BudgetedSpace` holds every well-formed term of size at most the
//! budget, enumerated in nondecreasing size with a deterministic order
//! inside each size class. Chunk symbols count as one against the budget
//! but are expanded for semantics; this is the entire mechanism by which
//! naming chunks grows the expressible set.

use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use thiserror::Error;

use crate::term::{Basis, Term, TermError};

#[derive(Debug, Error, PartialEq)]
pub enum SpaceError {
    #[error("atom {0:?} missing from the feature assignment")]
    MissingAtom(String),
    #[error("symbol {name:?} (arity {arity}) is not a Boolean connective or atom")]
    UnsupportedSymbol { name: String, arity: usize },
    #[error("truth tables support at most 6 atoms, basis has {0}")]
    TooManyAtoms(usize),
    #[error("budget must be at least 1")]
    ZeroBudget,
    #[error("malformed dataset line {line}: {message}")]
    BadDatasetLine { line: usize, message: String },
    #[error(transparent)]
    Term(#[from] TermError),
}

/// Total assignment of truth values to the DSL's atoms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureObject {
    pub assignment: BTreeMap<String, bool>,
}

impl FeatureObject {
    pub fn new(assignment: BTreeMap<String, bool>) -> Self {
        FeatureObject { assignment }
    }

    pub fn get(&self, atom: &str) -> Result<bool, SpaceError> {
        self.assignment
            .get(atom)
            .copied()
            .ok_or_else(|| SpaceError::MissingAtom(atom.to_string()))
    }
}

/// The Boolean function a term denotes, as a bitmask over all 2^n feature
/// assignments. Row r assigns atom i (in basis declaration order) the
/// value of bit i of r.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TruthTable {
    pub n_atoms: usize,
    pub bits: u64,
}

impl TruthTable {
    pub fn rows(&self) -> usize {
        1 << self.n_atoms
    }

    pub fn get(&self, row: usize) -> bool {
        (self.bits >> row) & 1 == 1
    }
}

/// Standard Boolean semantics: `and`/`or`/`not` by name, arity-0 symbols
/// look up the assignment, chunk symbols evaluate via their definitions.
pub fn evaluate(t: &Term, obj: &FeatureObject, basis: &Basis) -> Result<bool, SpaceError> {
    if let Some(def) = basis.chunk_definition(&t.head.name) {
        return evaluate(def, obj, basis);
    }
    match (t.head.name.as_str(), t.head.arity) {
        ("and", 2) => Ok(evaluate(&t.children[0], obj, basis)? && evaluate(&t.children[1], obj, basis)?),
        ("or", 2) => Ok(evaluate(&t.children[0], obj, basis)? || evaluate(&t.children[1], obj, basis)?),
        ("not", 1) => Ok(!evaluate(&t.children[0], obj, basis)?),
        (name, 0) => obj.get(name),
        (name, arity) => Err(SpaceError::UnsupportedSymbol { name: name.to_string(), arity }),
    }
}

/// The atoms of a basis: arity-0 primitives, in declaration order.
/// Chunks are not atoms even when their symbols have arity 0.
pub fn atoms_of(basis: &Basis) -> Vec<String> {
    basis
        .primitives()
        .iter()
        .filter(|s| s.arity == 0)
        .map(|s| s.name.clone())
        .collect()
}

/// The feature object encoded by `row` over `atoms`.
pub fn row_object(atoms: &[String], row: usize) -> FeatureObject {
    let assignment = atoms
        .iter()
        .enumerate()
        .map(|(i, a)| (a.clone(), (row >> i) & 1 == 1))
        .collect();
    FeatureObject::new(assignment)
}

/// Every term of size <= budget over a basis, in enumeration order.
#[derive(Debug, Clone)]
pub struct BudgetedSpace {
    pub basis: Basis,
    pub budget: usize,
    terms: Vec<Rc<Term>>,
}

impl BudgetedSpace {
    /// Enumerates the closure bottom-up: all terms of size s are built from
    /// the already-complete size classes below s. Within a size class the
    /// order is symbol declaration order, then child-size composition, then
    /// the cartesian product of child terms.
    pub fn new(basis: Basis, budget: usize) -> Result<Self, SpaceError> {
        if budget == 0 {
            return Err(SpaceError::ZeroBudget);
        }
        let mut by_size: Vec<Vec<Rc<Term>>> = vec![Vec::new(); budget + 1];
        for size in 1..=budget {
            let mut class = Vec::new();
            for sym in basis.symbols() {
                if sym.arity == 0 {
                    if size == 1 {
                        class.push(Rc::new(Term::leaf(sym.clone())));
                    }
                    continue;
                }
                if size < 1 + sym.arity {
                    continue;
                }
                for split in compositions(size - 1, sym.arity) {
                    let mut buf = Vec::with_capacity(sym.arity);
                    product_terms(&by_size, &split, 0, &mut buf, &mut |children| {
                        class.push(Rc::new(Term {
                            head: sym.clone(),
                            children: children.to_vec(),
                        }));
                    });
                    drop(buf);
                }
            }
            by_size[size] = class;
        }
        let terms = by_size.into_iter().flatten().collect();
        Ok(BudgetedSpace { basis, budget, terms })
    }

    /// Terms in nondecreasing size, deterministic within a size.
    pub fn terms(&self) -> &[Rc<Term>] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn atoms(&self) -> Vec<String> {
        atoms_of(&self.basis)
    }

    /// Truth table of one term over all 2^n assignments.
    pub fn truth_table(&self, t: &Term) -> Result<TruthTable, SpaceError> {
        let atoms = self.atoms();
        truth_table_over(t, &atoms, &self.basis)
    }

    /// Partitions the space by denotation. Classes appear in order of first
    /// witness; each class's members keep enumeration order, so the first
    /// member is a minimal-size representative.
    pub fn semantic_classes(&self) -> Result<Vec<SemanticClass>, SpaceError> {
        let atoms = self.atoms();
        let mut index: HashMap<TruthTable, usize> = HashMap::new();
        let mut classes: Vec<SemanticClass> = Vec::new();
        for t in &self.terms {
            let table = truth_table_over(t, &atoms, &self.basis)?;
            match index.get(&table) {
                Some(&i) => classes[i].members.push(t.clone()),
                None => {
                    index.insert(table, classes.len());
                    classes.push(SemanticClass { table, members: vec![t.clone()] });
                }
            }
        }
        Ok(classes)
    }

    /// True with a minimal witness iff some term denotes `target`.
    pub fn contains_semantics(&self, target: TruthTable) -> Result<Option<Rc<Term>>, SpaceError> {
        let atoms = self.atoms();
        for t in &self.terms {
            if truth_table_over(t, &atoms, &self.basis)? == target {
                return Ok(Some(t.clone()));
            }
        }
        Ok(None)
    }
}

/// Terms denoting one Boolean function; `members[0]` is minimal-size.
#[derive(Debug, Clone)]
pub struct SemanticClass {
    pub table: TruthTable,
    pub members: Vec<Rc<Term>>,
}

impl SemanticClass {
    pub fn representative(&self) -> &Rc<Term> {
        &self.members[0]
    }
}

pub fn truth_table_over(t: &Term, atoms: &[String], basis: &Basis) -> Result<TruthTable, SpaceError> {
    if atoms.len() > 6 {
        return Err(SpaceError::TooManyAtoms(atoms.len()));
    }
    let mut bits = 0u64;
    for row in 0..(1usize << atoms.len()) {
        let obj = row_object(atoms, row);
        if evaluate(t, &obj, basis)? {
            bits |= 1 << row;
        }
    }
    Ok(TruthTable { n_atoms: atoms.len(), bits })
}

/// All ways to write `total` as an ordered sum of `parts` positive
/// integers, in lexicographic order.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(parts);
    fn rec(total: usize, parts: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 1 {
            if total >= 1 {
                cur.push(total);
                out.push(cur.clone());
                cur.pop();
            }
            return;
        }
        for first in 1..=total.saturating_sub(parts - 1) {
            cur.push(first);
            rec(total - first, parts - 1, cur, out);
            cur.pop();
        }
    }
    if parts > 0 {
        rec(total, parts, &mut cur, &mut out);
    }
    out
}

fn product_terms(
    by_size: &[Vec<Rc<Term>>],
    split: &[usize],
    depth: usize,
    buf: &mut Vec<Rc<Term>>,
    emit: &mut impl FnMut(&[Rc<Term>]),
) {
    if depth == split.len() {
        emit(buf);
        return;
    }
    for t in &by_size[split[depth]] {
        buf.push(t.clone());
        product_terms(by_size, split, depth + 1, buf, emit);
        buf.pop();
    }
}

/// Parses the dataset format: one record per line,
/// `label <T|F> ; small=T red=F ...`.
pub fn parse_dataset(text: &str) -> Result<Vec<(FeatureObject, bool)>, SpaceError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |message: &str| SpaceError::BadDatasetLine { line: line_no, message: message.into() };
        let rest = line
            .strip_prefix("label")
            .ok_or_else(|| bad("expected line to start with `label`"))?
            .trim_start();
        let (label_str, rest) = rest.split_once(';').ok_or_else(|| bad("expected `;` after the label"))?;
        let label = match label_str.trim() {
            "T" => true,
            "F" => false,
            other => return Err(bad(&format!("label must be T or F, found {other:?}"))),
        };
        let mut assignment = BTreeMap::new();
        for pair in rest.split_whitespace() {
            let (name, value) = pair
                .split_once('=')
                .ok_or_else(|| bad(&format!("expected `name=T|F`, found {pair:?}")))?;
            let v = match value {
                "T" => true,
                "F" => false,
                other => return Err(bad(&format!("value must be T or F, found {other:?}"))),
            };
            assignment.insert(name.to_string(), v);
        }
        out.push((FeatureObject::new(assignment), label));
    }
    Ok(out)
}

/// The four-atom DSL used throughout the demos: small, red, circle, blue
/// with and/or/not.
pub fn default_dsl() -> Basis {
    use crate::term::Symbol;
    Basis::new(vec![
        Symbol::new("small", 0).unwrap(),
        Symbol::new("red", 0).unwrap(),
        Symbol::new("circle", 0).unwrap(),
        Symbol::new("blue", 0).unwrap(),
        Symbol::new("and", 2).unwrap(),
        Symbol::new("or", 2).unwrap(),
        Symbol::new("not", 1).unwrap(),
    ])
    .unwrap()
}
