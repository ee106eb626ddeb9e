//! OpenQASM 2.0 ingestion and emission.
//!
//! Supported subset: one `qreg`, at most one `creg`, gate applications from
//! the IR alphabet plus `u1`/`u2`/`u3` (rewritten to rz/sx sequences on
//! ingest) and `cu1` (alias for `cp`), `measure`, and `barrier`. Parameter
//! expressions may use numeric literals, `pi`, parentheses, unary minus and
//! `+ - * / ^`. Whole-register operands broadcast in the usual way
//! (`h q;` applies h to every qubit).

use std::f64::consts::PI;

use crate::circuit::{Circuit, Gate, GateKind};
use crate::error::QasmError;

/// Parses QASM 2.0 source into a [`Circuit`].
pub fn parse_qasm(text: &str) -> Result<Circuit, QasmError> {
    Parser::new(text).parse()
}

/// Emits a circuit as QASM 2.0, one gate per line, angles with 17
/// significant digits so that `parse_qasm(emit_qasm(c)) == c` gate for gate.
pub fn emit_qasm(circ: &Circuit) -> String {
    let mut out = String::new();
    out.push_str("OPENQASM 2.0;\n");
    out.push_str("include \"qelib1.inc\";\n");
    out.push_str(&format!("qreg q[{}];\n", circ.num_qubits));
    if circ.num_clbits > 0 {
        out.push_str(&format!("creg c[{}];\n", circ.num_clbits));
    }
    for gate in circ.gates() {
        match gate.kind {
            GateKind::Measure => {
                out.push_str(&format!("measure q[{}] -> c[{}];\n", gate.qubits[0], gate.clbits[0]));
            }
            GateKind::Barrier => {
                let ops: Vec<String> = gate.qubits.iter().map(|q| format!("q[{q}]")).collect();
                out.push_str(&format!("barrier {};\n", ops.join(",")));
            }
            kind => {
                let mut line = kind.name().to_string();
                if !gate.params.is_empty() {
                    let params: Vec<String> = gate.params.iter().map(|p| format_angle(*p)).collect();
                    line.push_str(&format!("({})", params.join(",")));
                }
                let ops: Vec<String> = gate.qubits.iter().map(|q| format!("q[{q}]")).collect();
                out.push_str(&format!("{line} {};\n", ops.join(",")));
            }
        }
    }
    out
}

fn format_angle(x: f64) -> String {
    // 17 significant digits round-trip any f64 exactly.
    format!("{x:.16e}")
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Number(f64),
    Symbol(char),
    Arrow,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    end_line: usize,
}

impl Parser {
    fn new(text: &str) -> Parser {
        let (toks, end_line) = lex(text);
        Parser { toks, pos: 0, end_line }
    }

    fn parse(mut self) -> Result<Circuit, QasmError> {
        let toks = std::mem::take(&mut self.toks);
        self.toks = toks;
        self.expect_header()?;

        let mut qreg: Option<(String, usize)> = None;
        let mut creg: Option<(String, usize)> = None;
        let mut gates: Vec<Gate> = Vec::new();

        while let Some(t) = self.peek() {
            let (line, col) = (t.line, t.col);
            match t.tok.clone() {
                Tok::Ident(word) => match word.as_str() {
                    "include" => {
                        self.advance();
                        // Consume the quoted filename token(s) until ';'.
                        self.skip_to_semicolon()?;
                    }
                    "qreg" => {
                        self.advance();
                        let (name, size) = self.register_decl()?;
                        if qreg.is_some() {
                            return Err(QasmError::new(line, col, "register redeclaration: only one qreg supported"));
                        }
                        qreg = Some((name, size));
                    }
                    "creg" => {
                        self.advance();
                        let (name, size) = self.register_decl()?;
                        if creg.is_some() {
                            return Err(QasmError::new(line, col, "register redeclaration: only one creg supported"));
                        }
                        creg = Some((name, size));
                    }
                    "measure" => {
                        self.advance();
                        let q = qreg.as_ref().ok_or_else(|| QasmError::new(line, col, "measure before qreg declaration"))?;
                        let c = creg.as_ref().ok_or_else(|| QasmError::new(line, col, "measure requires a creg"))?;
                        let qop = self.operand(q, line)?;
                        self.expect_symbolic(line, Tok::Arrow, "->")?;
                        let cop = self.operand(c, line)?;
                        self.expect_symbolic(line, Tok::Symbol(';'), ";")?;
                        match (qop, cop) {
                            (Operand::Single(qi), Operand::Single(ci)) => gates.push(Gate::measure(qi, ci)),
                            (Operand::Whole(qn), Operand::Whole(cn)) if qn == cn => {
                                for i in 0..qn {
                                    gates.push(Gate::measure(i, i));
                                }
                            }
                            _ => {
                                return Err(QasmError::new(line, col, "measure operands must both be indexed or equal-size registers"));
                            }
                        }
                    }
                    "barrier" => {
                        self.advance();
                        let q = qreg.as_ref().ok_or_else(|| QasmError::new(line, col, "barrier before qreg declaration"))?;
                        let mut qubits = Vec::new();
                        loop {
                            match self.operand(q, line)? {
                                Operand::Single(i) => qubits.push(i),
                                Operand::Whole(n) => qubits.extend(0..n),
                            }
                            if self.eat(&Tok::Symbol(',')) {
                                continue;
                            }
                            break;
                        }
                        self.expect_symbolic(line, Tok::Symbol(';'), ";")?;
                        qubits.dedup();
                        gates.push(Gate::barrier(qubits).map_err(|e| QasmError::new(line, col, e.to_string()))?);
                    }
                    _ => {
                        self.advance();
                        let q = qreg.as_ref().ok_or_else(|| QasmError::new(line, col, "gate before qreg declaration"))?;
                        let applied = self.gate_application(&word, q, line, col)?;
                        gates.extend(applied);
                    }
                },
                other => {
                    return Err(QasmError::new(line, col, format!("syntax error: unexpected token {other:?}")));
                }
            }
        }

        let (_, nq) = qreg.ok_or_else(|| QasmError::new(self.end_line, 1, "missing qreg declaration"))?;
        let nc = creg.map(|(_, n)| n).unwrap_or(0);
        let mut circ = Circuit::new(nq, nc);
        for gate in gates {
            let (line, col) = (1, 1);
            circ.push(gate).map_err(|e| QasmError::new(line, col, format!("index out of range: {e}")))?;
        }
        Ok(circ)
    }

    fn expect_header(&mut self) -> Result<(), QasmError> {
        let t = self.peek().cloned().ok_or_else(|| QasmError::new(1, 1, "empty program"))?;
        match &t.tok {
            Tok::Ident(w) if w == "OPENQASM" => {
                self.advance();
                match self.next() {
                    Some(Spanned { tok: Tok::Number(v), .. }) if (v - 2.0).abs() < 1e-9 => {}
                    Some(s) => return Err(QasmError::new(s.line, s.col, "unsupported OPENQASM version (need 2.0)")),
                    None => return Err(QasmError::new(t.line, t.col, "truncated OPENQASM header")),
                }
                self.expect_symbolic(t.line, Tok::Symbol(';'), ";")?;
                Ok(())
            }
            _ => Err(QasmError::new(t.line, t.col, "program must start with 'OPENQASM 2.0;'")),
        }
    }

    fn register_decl(&mut self) -> Result<(String, usize), QasmError> {
        let name = match self.next() {
            Some(Spanned { tok: Tok::Ident(n), .. }) => n,
            Some(s) => return Err(QasmError::new(s.line, s.col, "expected register name")),
            None => return Err(QasmError::new(self.end_line, 1, "truncated register declaration")),
        };
        let line = self.current_line();
        self.expect_symbolic(line, Tok::Symbol('['), "[")?;
        let size = match self.next() {
            Some(Spanned { tok: Tok::Number(v), line, col }) => {
                if v.fract() != 0.0 || v < 0.0 {
                    return Err(QasmError::new(line, col, "register size must be a non-negative integer"));
                }
                v as usize
            }
            Some(s) => return Err(QasmError::new(s.line, s.col, "expected register size")),
            None => return Err(QasmError::new(self.end_line, 1, "truncated register declaration")),
        };
        self.expect_symbolic(line, Tok::Symbol(']'), "]")?;
        self.expect_symbolic(line, Tok::Symbol(';'), ";")?;
        Ok((name, size))
    }

    fn gate_application(
        &mut self,
        name: &str,
        qreg: &(String, usize),
        line: usize,
        col: usize,
    ) -> Result<Vec<Gate>, QasmError> {
        let lowered = name.to_ascii_lowercase();
        let (kind, expect_params) = match lowered.as_str() {
            "u1" | "u2" | "u3" => (None, match lowered.as_str() {
                "u1" => 1,
                "u2" => 2,
                _ => 3,
            }),
            "cu1" => (Some(GateKind::Cp), 1),
            other => match GateKind::from_name(other) {
                Some(GateKind::Measure) | Some(GateKind::Barrier) | None => {
                    return Err(QasmError::new(line, col, format!("unknown gate name '{name}'")));
                }
                Some(kind) => (Some(kind), kind.num_params()),
            },
        };

        let mut params = Vec::new();
        if self.eat(&Tok::Symbol('(')) {
            loop {
                params.push(self.expression(line)?);
                if self.eat(&Tok::Symbol(',')) {
                    continue;
                }
                break;
            }
            self.expect_symbolic(line, Tok::Symbol(')'), ")")?;
        }
        if params.len() != expect_params {
            return Err(QasmError::new(
                line,
                col,
                format!("gate '{name}' expects {expect_params} parameter(s), got {}", params.len()),
            ));
        }

        let mut operands = Vec::new();
        loop {
            operands.push(self.operand(qreg, line)?);
            if self.eat(&Tok::Symbol(',')) {
                continue;
            }
            break;
        }
        self.expect_symbolic(line, Tok::Symbol(';'), ";")?;

        let arity = match kind {
            Some(k) => k.num_qubits().unwrap_or(1),
            None => 1, // u1/u2/u3 are single-qubit
        };
        if operands.len() != arity {
            return Err(QasmError::new(
                line,
                col,
                format!("gate '{name}' expects {arity} qubit operand(s), got {}", operands.len()),
            ));
        }

        // Broadcast whole-register operands. Mixed forms are only accepted
        // for single-qubit gates applied to the full register.
        let expansions: Vec<Vec<usize>> = if operands.iter().all(|o| matches!(o, Operand::Single(_))) {
            vec![operands
                .iter()
                .map(|o| match o {
                    Operand::Single(i) => *i,
                    Operand::Whole(_) => unreachable!(),
                })
                .collect()]
        } else if operands.len() == 1 {
            match operands[0] {
                Operand::Whole(n) => (0..n).map(|i| vec![i]).collect(),
                Operand::Single(_) => unreachable!(),
            }
        } else {
            return Err(QasmError::new(line, col, "whole-register broadcast only supported for single-qubit gates"));
        };

        let mut gates = Vec::new();
        for qubits in expansions {
            match kind {
                Some(k) => {
                    let gate = Gate::new(k, qubits, params.clone())
                        .map_err(|e| QasmError::new(line, col, e.to_string()))?;
                    gates.push(gate);
                }
                None => {
                    let q = qubits[0];
                    gates.extend(expand_u(&lowered, &params, q).map_err(|e| QasmError::new(line, col, e))?);
                }
            }
        }
        Ok(gates)
    }

    fn operand(&mut self, reg: &(String, usize), line: usize) -> Result<Operand, QasmError> {
        let (name, nline, ncol) = match self.next() {
            Some(Spanned { tok: Tok::Ident(n), line, col }) => (n, line, col),
            Some(s) => return Err(QasmError::new(s.line, s.col, "expected register operand")),
            None => return Err(QasmError::new(self.end_line, 1, "truncated statement")),
        };
        if name != reg.0 {
            return Err(QasmError::new(nline, ncol, format!("unknown register '{name}'")));
        }
        if self.eat(&Tok::Symbol('[')) {
            let idx = match self.next() {
                Some(Spanned { tok: Tok::Number(v), line, col }) => {
                    if v.fract() != 0.0 || v < 0.0 {
                        return Err(QasmError::new(line, col, "index must be a non-negative integer"));
                    }
                    let idx = v as usize;
                    if idx >= reg.1 {
                        return Err(QasmError::new(line, col, format!("index {idx} out of range for {}[{}]", reg.0, reg.1)));
                    }
                    idx
                }
                Some(s) => return Err(QasmError::new(s.line, s.col, "expected index")),
                None => return Err(QasmError::new(self.end_line, 1, "truncated operand")),
            };
            self.expect_symbolic(line, Tok::Symbol(']'), "]")?;
            Ok(Operand::Single(idx))
        } else {
            Ok(Operand::Whole(reg.1))
        }
    }

    // Pratt-free expression grammar: expr := term (('+'|'-') term)*,
    // term := factor (('*'|'/') factor)*, factor := atom ('^' factor)?,
    // atom := number | pi | '-' atom | '(' expr ')'.
    fn expression(&mut self, line: usize) -> Result<f64, QasmError> {
        let mut value = self.term(line)?;
        loop {
            if self.eat(&Tok::Symbol('+')) {
                value += self.term(line)?;
            } else if self.eat(&Tok::Symbol('-')) {
                value -= self.term(line)?;
            } else {
                return Ok(value);
            }
        }
    }

    fn term(&mut self, line: usize) -> Result<f64, QasmError> {
        let mut value = self.factor(line)?;
        loop {
            if self.eat(&Tok::Symbol('*')) {
                value *= self.factor(line)?;
            } else if self.eat(&Tok::Symbol('/')) {
                value /= self.factor(line)?;
            } else {
                return Ok(value);
            }
        }
    }

    fn factor(&mut self, line: usize) -> Result<f64, QasmError> {
        let base = self.atom(line)?;
        if self.eat(&Tok::Symbol('^')) {
            let exp = self.factor(line)?;
            return Ok(base.powf(exp));
        }
        Ok(base)
    }

    fn atom(&mut self, line: usize) -> Result<f64, QasmError> {
        match self.next() {
            Some(Spanned { tok: Tok::Number(v), .. }) => Ok(v),
            Some(Spanned { tok: Tok::Ident(w), line, col }) => {
                if w == "pi" {
                    Ok(PI)
                } else {
                    Err(QasmError::new(line, col, format!("unknown identifier '{w}' in expression")))
                }
            }
            Some(Spanned { tok: Tok::Symbol('-'), .. }) => Ok(-self.atom(line)?),
            Some(Spanned { tok: Tok::Symbol('('), .. }) => {
                let v = self.expression(line)?;
                self.expect_symbolic(line, Tok::Symbol(')'), ")")?;
                Ok(v)
            }
            Some(s) => Err(QasmError::new(s.line, s.col, "syntax error in expression")),
            None => Err(QasmError::new(self.end_line, 1, "truncated expression")),
        }
    }

    fn skip_to_semicolon(&mut self) -> Result<(), QasmError> {
        while let Some(t) = self.next() {
            if t.tok == Tok::Symbol(';') {
                return Ok(());
            }
        }
        Err(QasmError::new(self.end_line, 1, "missing ';'"))
    }

    fn peek(&self) -> Option<&Spanned> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Spanned> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn advance(&mut self) {
        self.pos += 1;
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek().map(|t| &t.tok) == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn current_line(&self) -> usize {
        self.peek().map(|t| t.line).unwrap_or(self.end_line)
    }

    fn expect_symbolic(&mut self, line: usize, tok: Tok, display: &str) -> Result<(), QasmError> {
        match self.next() {
            Some(s) if s.tok == tok => Ok(()),
            Some(s) => Err(QasmError::new(s.line, s.col, format!("expected '{display}'"))),
            None => Err(QasmError::new(line, 1, format!("expected '{display}' before end of input"))),
        }
    }
}

enum Operand {
    Single(usize),
    Whole(usize),
}

/// Rewrites u1/u2/u3 to rz/sx sequences (standard ZSXZSXZ Euler form,
/// exact up to global phase).
fn expand_u(name: &str, params: &[f64], q: usize) -> Result<Vec<Gate>, String> {
    let rz = |theta: f64| Gate::new(GateKind::Rz, vec![q], vec![theta]).expect("rz");
    let sx = || Gate::new(GateKind::Sx, vec![q], vec![]).expect("sx");
    let gates = match name {
        "u1" => vec![rz(params[0])],
        "u2" => {
            let (phi, lam) = (params[0], params[1]);
            vec![rz(lam - PI / 2.0), sx(), rz(phi + PI / 2.0)]
        }
        "u3" => {
            let (theta, phi, lam) = (params[0], params[1], params[2]);
            vec![rz(lam), sx(), rz(theta + PI), sx(), rz(phi + PI)]
        }
        _ => return Err(format!("unknown gate name '{name}'")),
    };
    Ok(gates)
}

fn lex(text: &str) -> (Vec<Spanned>, usize) {
    let mut toks = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (tline, tcol) = (line, col);
        let mut bump = |i: &mut usize| {
            if chars[*i] == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            *i += 1;
        };
        if c.is_whitespace() {
            bump(&mut i);
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                bump(&mut i);
            }
            continue;
        }
        if c == '"' {
            // String literal (only used by include); skip to closing quote.
            bump(&mut i);
            while i < chars.len() && chars[i] != '"' {
                bump(&mut i);
            }
            if i < chars.len() {
                bump(&mut i);
            }
            toks.push(Spanned { tok: Tok::Ident("\"string\"".to_string()), line: tline, col: tcol });
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut word = String::new();
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '.') {
                word.push(chars[i]);
                bump(&mut i);
            }
            toks.push(Spanned { tok: Tok::Ident(word), line: tline, col: tcol });
            continue;
        }
        if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            let mut num = String::new();
            while i < chars.len()
                && (chars[i].is_ascii_digit()
                    || chars[i] == '.'
                    || chars[i] == 'e'
                    || chars[i] == 'E'
                    || ((chars[i] == '+' || chars[i] == '-')
                        && matches!(num.chars().last(), Some('e') | Some('E'))))
            {
                num.push(chars[i]);
                bump(&mut i);
            }
            let value = num.parse::<f64>().unwrap_or(f64::NAN);
            toks.push(Spanned { tok: Tok::Number(value), line: tline, col: tcol });
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'>') {
            bump(&mut i);
            bump(&mut i);
            toks.push(Spanned { tok: Tok::Arrow, line: tline, col: tcol });
            continue;
        }
        bump(&mut i);
        toks.push(Spanned { tok: Tok::Symbol(c), line: tline, col: tcol });
    }
    (toks, line)
}
