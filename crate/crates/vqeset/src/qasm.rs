//! OpenQASM 2.0 export and a recursive-descent parser for the subset the
//! exporter emits, plus `x`, `z`, `barrier` and `measure`.
//!
//! Qubit `k` of a circuit is register entry `q[k-1]`. Angles are written in
//! Rust's shortest round-trip decimal form, so parsing recovers them bit for bit.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::{self, Write as _};

use vqeset_core::pauli::{Pauli, PauliString};
use vqeset_core::statevector::{Circuit, Gate, Param};

use crate::Result;

pub const HEADER: &str = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n";

/// Serialises `circuit` with `params` bound into its angles.
pub fn export(circuit: &Circuit, params: &[f64]) -> Result<String> {
    let flat = decompose(circuit, params)?;
    let mut out = String::from(HEADER);
    writeln!(out, "qreg q[{}];", flat.n_qubits()).unwrap();
    for gate in flat.gates() {
        write_gate(&mut out, gate);
    }
    Ok(out)
}

/// Bound copy of `circuit` in the exported gate set: every Pauli rotation
/// becomes a basis change, a CNOT ladder onto the last qubit of its support,
/// `rz`, and the mirror image. Identity rotations are dropped.
pub fn decompose(circuit: &Circuit, params: &[f64]) -> Result<Circuit> {
    if params.len() != circuit.n_params() {
        return Err(vqeset_core::Error::ParameterLength { expected: circuit.n_params(), found: params.len() }.into());
    }
    let mut gates = Vec::with_capacity(circuit.gates().len());
    for gate in circuit.gates() {
        let angle = match gate.param() {
            Some(p) => p.bind(params)?,
            None => 0.0,
        };
        let fixed = Param::Fixed(angle);
        match gate {
            Gate::Rx(k, _) => gates.push(Gate::Rx(*k, fixed)),
            Gate::Ry(k, _) => gates.push(Gate::Ry(*k, fixed)),
            Gate::Rz(k, _) => gates.push(Gate::Rz(*k, fixed)),
            Gate::PauliRotation(p, _) => push_pauli_rotation(&mut gates, p, angle),
            other => gates.push(other.clone()),
        }
    }
    Ok(Circuit::new(circuit.n_qubits(), gates, 0)?)
}

fn push_pauli_rotation(gates: &mut Vec<Gate>, p: &PauliString, angle: f64) {
    let factors: Vec<(usize, Pauli)> = p.factors().collect();
    let Some(&(last, _)) = factors.last() else { return };
    let basis = |gates: &mut Vec<Gate>, sign: f64| {
        for &(k, f) in &factors {
            match f {
                Pauli::X => gates.push(Gate::H(k)),
                Pauli::Y => gates.push(Gate::Rx(k, Param::Fixed(sign * FRAC_PI_2))),
                _ => {}
            }
        }
    };
    basis(gates, 1.0);
    for w in factors.windows(2) {
        gates.push(Gate::Cnot { control: w[0].0, target: w[1].0 });
    }
    gates.push(Gate::Rz(last, Param::Fixed(angle)));
    for w in factors.windows(2).rev() {
        gates.push(Gate::Cnot { control: w[0].0, target: w[1].0 });
    }
    basis(gates, -1.0);
}

/// `pi/2` for the exact basis-change angle, shortest round-trip otherwise.
fn angle_text(a: f64) -> String {
    if a == FRAC_PI_2 {
        "pi/2".into()
    } else if a == -FRAC_PI_2 {
        "-pi/2".into()
    } else {
        a.to_string()
    }
}

fn write_gate(out: &mut String, gate: &Gate) {
    let q = |k: usize| k - 1;
    let a = || angle_text(gate.param().and_then(|p| p.bind(&[]).ok()).unwrap_or(0.0));
    match *gate {
        Gate::Rx(k, _) => writeln!(out, "rx({}) q[{}];", a(), q(k)),
        Gate::Ry(k, _) => writeln!(out, "ry({}) q[{}];", a(), q(k)),
        Gate::Rz(k, _) => writeln!(out, "rz({}) q[{}];", a(), q(k)),
        Gate::Cz(x, y) => writeln!(out, "cz q[{}],q[{}];", q(x), q(y)),
        Gate::Cnot { control, target } => writeln!(out, "cx q[{}],q[{}];", q(control), q(target)),
        Gate::H(k) => writeln!(out, "h q[{}];", q(k)),
        Gate::X(k) => writeln!(out, "x q[{}];", q(k)),
        Gate::Z(k) => writeln!(out, "z q[{}];", q(k)),
        Gate::PauliRotation(..) => unreachable!("decomposed before printing"),
    }
    .unwrap();
}

/// A parse failure at a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {message}")]
pub struct QasmError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone)]
pub struct ParsedProgram {
    /// Fully bound circuit (no parameter slots).
    pub circuit: Circuit,
    /// Non-fatal notes, e.g. ignored measurements.
    pub warnings: Vec<String>,
}

pub fn parse(text: &str) -> Result<ParsedProgram, QasmError> {
    let tokens = lex(text)?;
    Parser { tokens, pos: 0, qregs: BTreeMap::new(), cregs: Vec::new(), n_qubits: 0, gates: Vec::new(), warnings: Vec::new() }
        .program()
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Number(String),
    Str(String),
    Sym(char),
    Arrow,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Number(s) => write!(f, "number `{s}`"),
            Tok::Str(s) => write!(f, "string \"{s}\""),
            Tok::Sym(c) => write!(f, "`{c}`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, QasmError> {
    let mut out = Vec::new();
    for (li, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let ch = chars[i];
            let (line, column) = (li + 1, i + 1);
            let err = |message: String| QasmError { line, column, message };
            if ch.is_whitespace() {
                i += 1;
                continue;
            }
            if ch == '/' && chars.get(i + 1) == Some(&'/') {
                break;
            }
            let start = i;
            let tok = if ch.is_ascii_alphabetic() || ch == '_' {
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                Tok::Ident(chars[start..i].iter().collect())
            } else if ch.is_ascii_digit() || (ch == '.' && chars.get(i + 1).is_some_and(|c| c.is_ascii_digit())) {
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                    i += 1;
                    if i < chars.len() && (chars[i] == '+' || chars[i] == '-') {
                        i += 1;
                    }
                    let digits = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    if digits == i {
                        return Err(err("malformed exponent".into()));
                    }
                }
                Tok::Number(chars[start..i].iter().collect())
            } else if ch == '"' {
                i += 1;
                while i < chars.len() && chars[i] != '"' {
                    i += 1;
                }
                if i == chars.len() {
                    return Err(err("unterminated string".into()));
                }
                i += 1;
                Tok::Str(chars[start + 1..i - 1].iter().collect())
            } else if ch == '-' && chars.get(i + 1) == Some(&'>') {
                i += 2;
                Tok::Arrow
            } else if ";,[]()+-*/^{}=<>".contains(ch) {
                i += 1;
                Tok::Sym(ch)
            } else {
                return Err(err(format!("unexpected character `{ch}`")));
            };
            out.push(Token { tok, line, column });
        }
    }
    let line = text.lines().count().max(1);
    let column = text.lines().last().map_or(0, |l| l.chars().count()) + 1;
    out.push(Token { tok: Tok::Eof, line, column });
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    /// Register name to (offset, size).
    qregs: BTreeMap<String, (usize, usize)>,
    cregs: Vec<String>,
    n_qubits: usize,
    gates: Vec<Gate>,
    warnings: Vec<String>,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn error_at(t: &Token, message: impl Into<String>) -> QasmError {
        QasmError { line: t.line, column: t.column, message: message.into() }
    }

    fn expect_sym(&mut self, c: char) -> Result<Token, QasmError> {
        let t = self.next();
        if t.tok == Tok::Sym(c) {
            Ok(t)
        } else {
            Err(Self::error_at(&t, format!("expected `{c}`, found {}", t.tok)))
        }
    }

    fn ident(&mut self) -> Result<(String, Token), QasmError> {
        let t = self.next();
        match &t.tok {
            Tok::Ident(s) => Ok((s.clone(), t.clone())),
            other => Err(Self::error_at(&t, format!("expected identifier, found {other}"))),
        }
    }

    fn integer(&mut self) -> Result<usize, QasmError> {
        let t = self.next();
        match &t.tok {
            Tok::Number(s) => s.parse().map_err(|_| Self::error_at(&t, format!("expected integer, found `{s}`"))),
            other => Err(Self::error_at(&t, format!("expected integer, found {other}"))),
        }
    }

    fn program(mut self) -> Result<ParsedProgram, QasmError> {
        if matches!(&self.peek().tok, Tok::Ident(s) if s == "OPENQASM") {
            self.next();
            let t = self.next();
            match &t.tok {
                Tok::Number(v) if v == "2" || v.starts_with("2.") => {}
                other => return Err(Self::error_at(&t, format!("unsupported OpenQASM version {other}"))),
            }
            self.expect_sym(';')?;
        }
        while self.peek().tok != Tok::Eof {
            self.statement()?;
        }
        if self.n_qubits == 0 {
            return Err(Self::error_at(self.peek(), "no qreg declared"));
        }
        let eof = self.peek().clone();
        let circuit = Circuit::new(self.n_qubits, self.gates, 0).map_err(|e| Self::error_at(&eof, e.to_string()))?;
        Ok(ParsedProgram { circuit, warnings: self.warnings })
    }

    fn statement(&mut self) -> Result<(), QasmError> {
        let (name, at) = self.ident()?;
        match name.as_str() {
            "OPENQASM" => Err(Self::error_at(&at, "version header must come first")),
            "include" => {
                let t = self.next();
                if !matches!(t.tok, Tok::Str(_)) {
                    return Err(Self::error_at(&t, format!("expected file name, found {}", t.tok)));
                }
                self.expect_sym(';')?;
                Ok(())
            }
            "qreg" | "creg" => {
                let (reg, reg_at) = self.ident()?;
                self.expect_sym('[')?;
                let size = self.integer()?;
                self.expect_sym(']')?;
                self.expect_sym(';')?;
                if self.qregs.contains_key(&reg) || self.cregs.contains(&reg) {
                    return Err(Self::error_at(&reg_at, format!("register `{reg}` declared twice")));
                }
                if name == "qreg" {
                    if size == 0 {
                        return Err(Self::error_at(&reg_at, "empty quantum register"));
                    }
                    self.qregs.insert(reg, (self.n_qubits, size));
                    self.n_qubits += size;
                } else {
                    self.cregs.push(reg);
                }
                Ok(())
            }
            "barrier" => self.skip_statement(),
            "measure" => {
                self.warnings.push(format!("line {}: measure ignored", at.line));
                log::warn!("line {}: measure ignored", at.line);
                self.skip_statement()
            }
            "rx" | "ry" | "rz" => {
                let angle = self.single_parameter(&name)?;
                let [q] = self.qubits::<1>()?;
                self.gates.push(match name.as_str() {
                    "rx" => Gate::Rx(q, Param::Fixed(angle)),
                    "ry" => Gate::Ry(q, Param::Fixed(angle)),
                    _ => Gate::Rz(q, Param::Fixed(angle)),
                });
                Ok(())
            }
            "h" | "x" | "z" => {
                self.no_parameters(&name)?;
                let [q] = self.qubits::<1>()?;
                self.gates.push(match name.as_str() {
                    "h" => Gate::H(q),
                    "x" => Gate::X(q),
                    _ => Gate::Z(q),
                });
                Ok(())
            }
            "cx" | "cz" => {
                self.no_parameters(&name)?;
                let args_at = self.peek().clone();
                let [a, b] = self.qubits::<2>()?;
                if a == b {
                    return Err(Self::error_at(&args_at, format!("`{name}` needs two distinct qubits")));
                }
                self.gates.push(if name == "cx" { Gate::Cnot { control: a, target: b } } else { Gate::Cz(a, b) });
                Ok(())
            }
            _ => Err(Self::error_at(&at, format!("unsupported gate `{name}`"))),
        }
    }

    fn skip_statement(&mut self) -> Result<(), QasmError> {
        loop {
            let t = self.next();
            match t.tok {
                Tok::Sym(';') => return Ok(()),
                Tok::Eof => return Err(Self::error_at(&t, "expected `;`, found end of input")),
                _ => {}
            }
        }
    }

    fn no_parameters(&mut self, name: &str) -> Result<(), QasmError> {
        if self.peek().tok == Tok::Sym('(') {
            return Err(Self::error_at(self.peek(), format!("`{name}` takes no parameters")));
        }
        Ok(())
    }

    fn single_parameter(&mut self, name: &str) -> Result<f64, QasmError> {
        if self.peek().tok != Tok::Sym('(') {
            let found = self.peek().tok.clone();
            return Err(Self::error_at(self.peek(), format!("expected `(` after `{name}`, found {found}")));
        }
        self.next();
        let v = self.expr()?;
        if self.peek().tok == Tok::Sym(',') {
            return Err(Self::error_at(self.peek(), format!("`{name}` takes one parameter")));
        }
        self.expect_sym(')')?;
        Ok(v)
    }

    fn qubits<const K: usize>(&mut self) -> Result<[usize; K], QasmError> {
        let mut out = [0; K];
        for (i, slot) in out.iter_mut().enumerate() {
            if i > 0 {
                self.expect_sym(',')?;
            }
            let (reg, at) = self.ident()?;
            let &(offset, size) =
                self.qregs.get(&reg).ok_or_else(|| Self::error_at(&at, format!("unknown quantum register `{reg}`")))?;
            self.expect_sym('[')?;
            let idx_at = self.peek().clone();
            let idx = self.integer()?;
            self.expect_sym(']')?;
            if idx >= size {
                return Err(Self::error_at(&idx_at, format!("index {idx} out of range for `{reg}[{size}]`")));
            }
            *slot = offset + idx + 1;
        }
        let t = self.next();
        match &t.tok {
            Tok::Sym(';') => Ok(out),
            Tok::Sym(',') => Err(Self::error_at(&t, format!("too many qubit arguments, expected {K}"))),
            other => Err(Self::error_at(&t, format!("expected `;`, found {other}"))),
        }
    }

    fn expr(&mut self) -> Result<f64, QasmError> {
        let mut v = self.term()?;
        loop {
            match self.peek().tok {
                Tok::Sym('+') => {
                    self.next();
                    v += self.term()?;
                }
                Tok::Sym('-') => {
                    self.next();
                    v -= self.term()?;
                }
                _ => return Ok(v),
            }
        }
    }

    fn term(&mut self) -> Result<f64, QasmError> {
        let mut v = self.unary()?;
        loop {
            match self.peek().tok {
                Tok::Sym('*') => {
                    self.next();
                    v *= self.unary()?;
                }
                Tok::Sym('/') => {
                    self.next();
                    v /= self.unary()?;
                }
                _ => return Ok(v),
            }
        }
    }

    fn unary(&mut self) -> Result<f64, QasmError> {
        match self.peek().tok {
            Tok::Sym('-') => {
                self.next();
                Ok(-self.unary()?)
            }
            Tok::Sym('+') => {
                self.next();
                self.unary()
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<f64, QasmError> {
        let t = self.next();
        match &t.tok {
            Tok::Number(s) => s.parse().map_err(|_| Self::error_at(&t, format!("malformed number `{s}`"))),
            Tok::Ident(s) if s == "pi" => Ok(PI),
            Tok::Sym('(') => {
                let v = self.expr()?;
                self.expect_sym(')')?;
                Ok(v)
            }
            other => Err(Self::error_at(&t, format!("expected expression, found {other}"))),
        }
    }
}

/// Gate-name counts, for validation reports.
pub fn gate_histogram(circuit: &Circuit) -> BTreeMap<&'static str, usize> {
    let mut h = BTreeMap::new();
    for g in circuit.gates() {
        *h.entry(g.name()).or_insert(0) += 1;
    }
    h
}
