//! Terms, bases, and the canonical textual serialization shared by the
//! hypothesis space, chunk learner, and possession modules.
//!
//! A [`Term`] is a rooted ordered tree over named symbols with fixed
//! arities. A [`Basis`] is a flat namespace of primitives plus an ordered
//! list of named chunks, each defined over primitives and earlier chunks.

use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;

use thiserror::Error;

/// A named primitive or chunk symbol with a fixed arity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol {
    pub name: String,
    pub arity: usize,
}

impl Symbol {
    pub fn new(name: impl Into<String>, arity: usize) -> Result<Self, TermError> {
        let name = name.into();
        if name.is_empty() || name.chars().any(|c| c.is_whitespace() || c == '(' || c == ')') {
            return Err(TermError::BadSymbolName(name));
        }
        Ok(Symbol { name, arity })
    }
}

/// A rooted ordered tree; every node carries a symbol whose arity equals
/// its child count. Shared structurally via `Rc` so enumeration over large
/// spaces does not copy subtrees.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term {
    pub head: Symbol,
    pub children: Vec<Rc<Term>>,
}

impl Term {
    pub fn new(head: Symbol, children: Vec<Rc<Term>>) -> Result<Self, TermError> {
        if head.arity != children.len() {
            return Err(TermError::ArityMismatch {
                symbol: head.name,
                expected: head.arity,
                found: children.len(),
                position: 0,
            });
        }
        Ok(Term { head, children })
    }

    pub fn leaf(head: Symbol) -> Self {
        debug_assert_eq!(head.arity, 0);
        Term { head, children: Vec::new() }
    }

    /// Total node count; chunk symbols count 1 without expansion.
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(|c| c.size()).sum::<usize>()
    }

    /// Canonical text: parenthesized prefix with single spaces, leaves bare.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_into(&mut out);
        out
    }

    fn render_into(&self, out: &mut String) {
        if self.children.is_empty() {
            out.push_str(&self.head.name);
        } else {
            out.push('(');
            out.push_str(&self.head.name);
            for c in &self.children {
                out.push(' ');
                c.render_into(out);
            }
            out.push(')');
        }
    }

    /// All subterms including self, preorder.
    pub fn subterms(&self) -> Vec<&Term> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            out.push(t);
            for c in t.children.iter().rev() {
                stack.push(c);
            }
        }
        out
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum TermError {
    #[error("invalid symbol name {0:?}: must be a non-empty token without whitespace or parentheses")]
    BadSymbolName(String),
    #[error("unknown symbol {symbol:?} at position {position}")]
    UnknownSymbol { symbol: String, position: usize },
    #[error("arity mismatch for {symbol:?} at position {position}: expected {expected} arguments, found {found}")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
        position: usize,
    },
    #[error("unbalanced parentheses at position {0}")]
    Unbalanced(usize),
    #[error("unexpected trailing input at position {0}")]
    TrailingInput(usize),
    #[error("empty input")]
    EmptyInput,
    #[error("duplicate symbol name {0:?} in basis")]
    DuplicateSymbol(String),
    #[error("chunk {chunk:?} references undefined symbol {symbol:?}")]
    ChunkReference { chunk: String, symbol: String },
    #[error("undefined chunk symbol {0:?}")]
    UndefinedChunk(String),
    #[error("chunk {0:?} must have arity 0")]
    ChunkArity(String),
    #[error("malformed basis line {line}: {message}")]
    BadBasisLine { line: usize, message: String },
}

/// A set of named primitives plus an ordered list of named chunks. Chunk
/// definitions reference only primitives or earlier chunks, so expanding
/// all chunks in any term terminates.
#[derive(Debug, Clone, PartialEq)]
pub struct Basis {
    primitives: Vec<Symbol>,
    chunks: Vec<(Symbol, Rc<Term>)>,
    by_name: HashMap<String, Symbol>,
}

impl Basis {
    pub fn new(primitives: Vec<Symbol>) -> Result<Self, TermError> {
        let mut by_name = HashMap::new();
        for s in &primitives {
            if by_name.insert(s.name.clone(), s.clone()).is_some() {
                return Err(TermError::DuplicateSymbol(s.name.clone()));
            }
        }
        Ok(Basis { primitives, chunks: Vec::new(), by_name })
    }

    /// Appends a chunk. Chunks are closed terms, so the new symbol has
    /// arity 0. The definition may use earlier chunks.
    pub fn add_chunk(&mut self, name: impl Into<String>, definition: Rc<Term>) -> Result<Symbol, TermError> {
        let sym = Symbol::new(name, 0)?;
        if self.by_name.contains_key(&sym.name) {
            return Err(TermError::DuplicateSymbol(sym.name));
        }
        for sub in definition.subterms() {
            if !self.by_name.contains_key(&sub.head.name) {
                return Err(TermError::ChunkReference {
                    chunk: sym.name.clone(),
                    symbol: sub.head.name.clone(),
                });
            }
        }
        self.by_name.insert(sym.name.clone(), sym.clone());
        self.chunks.push((sym.clone(), definition));
        Ok(sym)
    }

    pub fn lookup(&self, name: &str) -> Option<&Symbol> {
        self.by_name.get(name)
    }

    pub fn primitives(&self) -> &[Symbol] {
        &self.primitives
    }

    pub fn chunks(&self) -> &[(Symbol, Rc<Term>)] {
        &self.chunks
    }

    pub fn chunk_definition(&self, name: &str) -> Option<&Rc<Term>> {
        self.chunks.iter().find(|(s, _)| s.name == name).map(|(_, d)| d)
    }

    pub fn is_chunk(&self, name: &str) -> bool {
        self.chunks.iter().any(|(s, _)| s.name == name)
    }

    /// All symbols, primitives first then chunks in order. This ordering is
    /// the canonical symbol order used by deterministic enumeration.
    pub fn symbols(&self) -> impl Iterator<Item = &Symbol> {
        self.primitives.iter().chain(self.chunks.iter().map(|(s, _)| s))
    }

    pub fn symbol_count(&self) -> usize {
        self.primitives.len() + self.chunks.len()
    }

    /// Rewrites every chunk symbol to its definition until only primitives
    /// remain. Terminates because chunks only reference earlier chunks.
    pub fn expand_chunks(&self, t: &Term) -> Result<Rc<Term>, TermError> {
        if !self.by_name.contains_key(&t.head.name) {
            return Err(TermError::UndefinedChunk(t.head.name.clone()));
        }
        if let Some(def) = self.chunk_definition(&t.head.name) {
            // Closed definitions: no children to substitute into.
            return self.expand_chunks(def);
        }
        let children = t
            .children
            .iter()
            .map(|c| self.expand_chunks(c))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Rc::new(Term { head: t.head.clone(), children }))
    }

    /// Line-delimited format: `prim <name> <arity>` and
    /// `chunk <name> <arity> = <term-text>`, chunk order significant.
    pub fn parse_file(text: &str) -> Result<Self, TermError> {
        let mut basis = Basis::new(Vec::new())?;
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            match parts.next() {
                Some("prim") => {
                    let name = parts.next().ok_or(TermError::BadBasisLine {
                        line: line_no,
                        message: "expected `prim <name> <arity>`".into(),
                    })?;
                    let arity: usize = parts
                        .next()
                        .and_then(|a| a.parse().ok())
                        .ok_or(TermError::BadBasisLine {
                            line: line_no,
                            message: "expected a non-negative arity".into(),
                        })?;
                    let sym = Symbol::new(name, arity)?;
                    if basis.by_name.insert(sym.name.clone(), sym.clone()).is_some() {
                        return Err(TermError::DuplicateSymbol(sym.name));
                    }
                    basis.primitives.push(sym);
                }
                Some("chunk") => {
                    let name = parts.next().ok_or(TermError::BadBasisLine {
                        line: line_no,
                        message: "expected `chunk <name> <arity> = <term>`".into(),
                    })?;
                    let arity: usize = parts
                        .next()
                        .and_then(|a| a.parse().ok())
                        .ok_or(TermError::BadBasisLine {
                            line: line_no,
                            message: "expected a non-negative arity".into(),
                        })?;
                    if arity != 0 {
                        return Err(TermError::ChunkArity(name.to_string()));
                    }
                    if parts.next() != Some("=") {
                        return Err(TermError::BadBasisLine {
                            line: line_no,
                            message: "expected `=` before the chunk definition".into(),
                        });
                    }
                    let rest: String = parts.collect::<Vec<_>>().join(" ");
                    let def = parse_term(&rest, &basis)?;
                    basis.add_chunk(name.to_string(), Rc::new(def))?;
                }
                Some(other) => {
                    return Err(TermError::BadBasisLine {
                        line: line_no,
                        message: format!("unknown directive {other:?}"),
                    });
                }
                None => unreachable!(),
            }
        }
        Ok(basis)
    }

    /// Inverse of `parse_file`.
    pub fn render_file(&self) -> String {
        let mut out = String::new();
        for s in &self.primitives {
            out.push_str(&format!("prim {} {}\n", s.name, s.arity));
        }
        for (s, def) in &self.chunks {
            out.push_str(&format!("chunk {} 0 = {}\n", s.name, def.render()));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Open(usize),
    Close(usize),
    Name(String, usize),
}

fn tokenize(text: &str) -> Vec<Token> {
    let mut tokens = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(pos, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
        } else if c == '(' {
            tokens.push(Token::Open(pos));
            chars.next();
        } else if c == ')' {
            tokens.push(Token::Close(pos));
            chars.next();
        } else {
            let mut name = String::new();
            while let Some(&(_, c)) = chars.peek() {
                if c.is_whitespace() || c == '(' || c == ')' {
                    break;
                }
                name.push(c);
                chars.next();
            }
            tokens.push(Token::Name(name, pos));
        }
    }
    tokens
}

/// Parses the canonical parenthesized prefix format, e.g. `(and small red)`.
pub fn parse_term(text: &str, basis: &Basis) -> Result<Term, TermError> {
    let tokens = tokenize(text);
    let mut idx = 0;
    let term = parse_expr(&tokens, &mut idx, basis)?;
    if idx < tokens.len() {
        let pos = match &tokens[idx] {
            Token::Open(p) | Token::Close(p) => *p,
            Token::Name(_, p) => *p,
        };
        return Err(TermError::TrailingInput(pos));
    }
    Ok(term)
}

fn parse_expr(tokens: &[Token], idx: &mut usize, basis: &Basis) -> Result<Term, TermError> {
    match tokens.get(*idx) {
        None => Err(TermError::EmptyInput),
        Some(Token::Close(p)) => Err(TermError::Unbalanced(*p)),
        Some(Token::Name(name, pos)) => {
            *idx += 1;
            let sym = basis
                .lookup(name)
                .ok_or(TermError::UnknownSymbol { symbol: name.clone(), position: *pos })?;
            if sym.arity != 0 {
                return Err(TermError::ArityMismatch {
                    symbol: name.clone(),
                    expected: sym.arity,
                    found: 0,
                    position: *pos,
                });
            }
            Ok(Term::leaf(sym.clone()))
        }
        Some(Token::Open(open_pos)) => {
            let open_pos = *open_pos;
            *idx += 1;
            let (name, pos) = match tokens.get(*idx) {
                Some(Token::Name(n, p)) => (n.clone(), *p),
                Some(Token::Open(p)) => return Err(TermError::Unbalanced(*p)),
                Some(Token::Close(p)) => return Err(TermError::Unbalanced(*p)),
                None => return Err(TermError::Unbalanced(open_pos)),
            };
            *idx += 1;
            let sym = basis
                .lookup(&name)
                .ok_or(TermError::UnknownSymbol { symbol: name.clone(), position: pos })?
                .clone();
            let mut children = Vec::new();
            loop {
                match tokens.get(*idx) {
                    Some(Token::Close(_)) => {
                        *idx += 1;
                        break;
                    }
                    None => return Err(TermError::Unbalanced(open_pos)),
                    _ => children.push(Rc::new(parse_expr(tokens, idx, basis)?)),
                }
            }
            if children.len() != sym.arity {
                return Err(TermError::ArityMismatch {
                    symbol: name,
                    expected: sym.arity,
                    found: children.len(),
                    position: pos,
                });
            }
            Ok(Term { head: sym, children })
        }
    }
}
