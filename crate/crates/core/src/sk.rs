//! SK combinatory logic with deterministic leftmost-outermost reduction.
//!
//! The two contraction rules are `K x y => x` and `S x y z => x z (y z)`.
//! Reduction is fuel-bounded: universality makes nontermination unavoidable,
//! so running out of fuel is a trace status, not an error.

use std::fmt;
use std::rc::Rc;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SkTerm {
    S,
    K,
    /// Irreducible free atom (lowercase token).
    Atom(String),
    App(Rc<SkTerm>, Rc<SkTerm>),
}

impl SkTerm {
    pub fn atom(name: impl Into<String>) -> Rc<SkTerm> {
        Rc::new(SkTerm::Atom(name.into()))
    }

    pub fn app(f: Rc<SkTerm>, a: Rc<SkTerm>) -> Rc<SkTerm> {
        Rc::new(SkTerm::App(f, a))
    }

    /// Left-associated application of every term in sequence.
    pub fn apply_all(head: Rc<SkTerm>, args: impl IntoIterator<Item = Rc<SkTerm>>) -> Rc<SkTerm> {
        args.into_iter().fold(head, SkTerm::app)
    }

    fn fmt_inner(&self, f: &mut fmt::Formatter<'_>, right_of_app: bool) -> fmt::Result {
        match self {
            SkTerm::S => write!(f, "S"),
            SkTerm::K => write!(f, "K"),
            SkTerm::Atom(a) => write!(f, "{a}"),
            SkTerm::App(fun, arg) => {
                if right_of_app {
                    write!(f, "(")?;
                }
                fun.fmt_inner(f, false)?;
                write!(f, " ")?;
                arg.fmt_inner(f, true)?;
                if right_of_app {
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for SkTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_inner(f, false)
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum SkError {
    #[error("unexpected character {ch:?} at position {position}")]
    UnexpectedChar { ch: char, position: usize },
    #[error("unbalanced parentheses at position {0}")]
    Unbalanced(usize),
    #[error("empty expression at position {0}")]
    Empty(usize),
    #[error("value out of the supported encoding range: {0}")]
    UnsupportedValue(String),
    #[error("term is not decodable as a boolean within fuel {0}")]
    Undecodable(usize),
}

/// Parses SK syntax: tokens `S`, `K`, lowercase atoms, parentheses;
/// juxtaposition is application and associates left, so `S K K x`
/// parses as `((S K) K) x`.
pub fn sk_parse(text: &str) -> Result<Rc<SkTerm>, SkError> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut idx = 0;
    let term = parse_seq(&chars, &mut idx, text.len())?;
    if idx < chars.len() {
        let (pos, ch) = chars[idx];
        return Err(SkError::UnexpectedChar { ch, position: pos });
    }
    Ok(term)
}

fn skip_ws(chars: &[(usize, char)], idx: &mut usize) {
    while *idx < chars.len() && chars[*idx].1.is_whitespace() {
        *idx += 1;
    }
}

fn parse_seq(chars: &[(usize, char)], idx: &mut usize, end: usize) -> Result<Rc<SkTerm>, SkError> {
    skip_ws(chars, idx);
    let start = chars.get(*idx).map(|&(p, _)| p).unwrap_or(end);
    let mut acc: Option<Rc<SkTerm>> = None;
    loop {
        skip_ws(chars, idx);
        let Some(&(pos, ch)) = chars.get(*idx) else { break };
        let next = match ch {
            ')' => break,
            '(' => {
                *idx += 1;
                let inner = parse_seq(chars, idx, end)?;
                skip_ws(chars, idx);
                match chars.get(*idx) {
                    Some(&(_, ')')) => {
                        *idx += 1;
                        inner
                    }
                    _ => return Err(SkError::Unbalanced(pos)),
                }
            }
            'S' => {
                *idx += 1;
                Rc::new(SkTerm::S)
            }
            'K' => {
                *idx += 1;
                Rc::new(SkTerm::K)
            }
            c if c.is_ascii_lowercase() => {
                let mut name = String::new();
                while let Some(&(_, c)) = chars.get(*idx) {
                    if c.is_ascii_lowercase() || c.is_ascii_digit() {
                        name.push(c);
                        *idx += 1;
                    } else {
                        break;
                    }
                }
                SkTerm::atom(name)
            }
            c => return Err(SkError::UnexpectedChar { ch: c, position: pos }),
        };
        acc = Some(match acc {
            None => next,
            Some(f) => SkTerm::app(f, next),
        });
    }
    acc.ok_or(SkError::Empty(start))
}

/// Contracts the leftmost-outermost redex once; `None` means normal form.
pub fn sk_step(t: &Rc<SkTerm>) -> Option<Rc<SkTerm>> {
    // Redex shapes: ((K x) y) and (((S x) y) z).
    if let SkTerm::App(f1, y) = &**t {
        if let SkTerm::App(f2, x) = &**f1 {
            match &**f2 {
                SkTerm::K => return Some(x.clone()),
                SkTerm::App(f3, x_inner) => {
                    if let SkTerm::S = &**f3 {
                        // S x y z => x z (y z), with x=x_inner, y=x, z=y.
                        let xz = SkTerm::app(x_inner.clone(), y.clone());
                        let yz = SkTerm::app(x.clone(), y.clone());
                        return Some(SkTerm::app(xz, yz));
                    }
                }
                _ => {}
            }
        }
    }
    // No redex at the root: leftmost-outermost descends into the function
    // position first, then the argument.
    if let SkTerm::App(f, a) = &**t {
        if let Some(f2) = sk_step(f) {
            return Some(SkTerm::app(f2, a.clone()));
        }
        if let Some(a2) = sk_step(a) {
            return Some(SkTerm::app(f.clone(), a2));
        }
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReductionStatus {
    NormalForm,
    FuelExhausted,
}

/// Every intermediate term of a reduction, in order, plus how it ended.
#[derive(Debug, Clone)]
pub struct ReductionTrace {
    pub steps: Vec<Rc<SkTerm>>,
    pub status: ReductionStatus,
}

impl ReductionTrace {
    pub fn final_term(&self) -> &Rc<SkTerm> {
        self.steps.last().expect("trace always holds the initial term")
    }
}

/// Iterates `sk_step` until normal form or `fuel` contractions.
pub fn sk_normalize(t: Rc<SkTerm>, fuel: usize) -> ReductionTrace {
    assert!(fuel >= 1, "fuel must be positive");
    let mut steps = vec![t];
    for _ in 0..fuel {
        match sk_step(steps.last().unwrap()) {
            Some(next) => steps.push(next),
            None => return ReductionTrace { steps, status: ReductionStatus::NormalForm },
        }
    }
    let status = if sk_step(steps.last().unwrap()).is_none() {
        ReductionStatus::NormalForm
    } else {
        ReductionStatus::FuelExhausted
    };
    ReductionTrace { steps, status }
}

/// Values expressible through the standard SK encodings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SkValue {
    Bool(bool),
    Pair(Box<SkValue>, Box<SkValue>),
    Nat(u32),
}

/// `true` is `K`, `false` is `S K`; pairs are selector-applying closures;
/// naturals are Church-style iterated application.
pub fn sk_encode(v: &SkValue) -> Result<Rc<SkTerm>, SkError> {
    match v {
        SkValue::Bool(true) => Ok(Rc::new(SkTerm::K)),
        SkValue::Bool(false) => Ok(SkTerm::app(Rc::new(SkTerm::S), Rc::new(SkTerm::K))),
        SkValue::Pair(a, b) => {
            let a = sk_encode(a)?;
            let b = sk_encode(b)?;
            Ok(sk_encode_pair(a, b))
        }
        SkValue::Nat(n) => {
            if *n > 10 {
                return Err(SkError::UnsupportedValue(format!("natural {n} > 10")));
            }
            Ok(sk_nat(*n))
        }
    }
}

/// Builds `pair(a, b)` for arbitrary terms: a term `P` with `P K =>* a`
/// and `P (S K) =>* b`.
pub fn sk_encode_pair(a: Rc<SkTerm>, b: Rc<SkTerm>) -> Rc<SkTerm> {
    // λs. s a b  ==  S (S I (K a)) (K b)  with  I = S K K
    let s = || Rc::new(SkTerm::S);
    let k = || Rc::new(SkTerm::K);
    let i = SkTerm::app(SkTerm::app(s(), k()), k());
    let ka = SkTerm::app(k(), a);
    let kb = SkTerm::app(k(), b);
    SkTerm::app(SkTerm::app(s(), SkTerm::app(SkTerm::app(s(), i), ka)), kb)
}

/// Church numeral n over SK: `n f x =>* f (f ... (f x))`.
/// zero = S K; succ n = S B n with B = S (K S) K.
pub fn sk_nat(n: u32) -> Rc<SkTerm> {
    let s = || Rc::new(SkTerm::S);
    let k = || Rc::new(SkTerm::K);
    let b = SkTerm::app(SkTerm::app(s(), SkTerm::app(k(), s())), k());
    let mut num = SkTerm::app(s(), k());
    for _ in 0..n {
        num = SkTerm::app(SkTerm::app(s(), b.clone()), num);
    }
    num
}

/// Decodes a boolean by applying the term to two fresh atoms and reducing.
pub fn sk_decode_bool(t: &Rc<SkTerm>, fuel: usize) -> Result<bool, SkError> {
    let lhs = SkTerm::atom("dectrue");
    let rhs = SkTerm::atom("decfalse");
    let applied = SkTerm::apply_all(t.clone(), [lhs.clone(), rhs.clone()]);
    let trace = sk_normalize(applied, fuel);
    if trace.status != ReductionStatus::NormalForm {
        return Err(SkError::Undecodable(fuel));
    }
    let result = trace.final_term();
    if **result == *lhs {
        Ok(true)
    } else if **result == *rhs {
        Ok(false)
    } else {
        Err(SkError::Undecodable(fuel))
    }
}
