//! Scalar expressions for time- and space-dependent boundary values.
//!
//! Boundary conditions in a problem definition may be given as strings such
//! as `"10.0*t"` or `"sin(t)*x"`. These are parsed once into an AST and
//! evaluated at `(t, x, y, z)` during assembly. The grammar is deliberately
//! small: numeric literals, the variables `t`, `x`, `y`, `z`, the binary
//! operators `+ - * / ^`, unary minus, parentheses, and the functions
//! `sin`, `cos`, `exp`, `sqrt`.
//!
//! Precedence is `^` (right-associative) > unary minus > `* /` > `+ -`,
//! all left-associative except `^`. So `2^3^2 == 512` and `-2^2 == -4`.

use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Error produced while parsing an expression string.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExprSyntaxError {
    #[error("ExprSyntaxError: unexpected character '{ch}' at byte {offset}")]
    UnexpectedChar { ch: char, offset: usize },
    #[error("ExprSyntaxError: unexpected end of expression at byte {offset}")]
    UnexpectedEnd { offset: usize },
    #[error("ExprSyntaxError: expected '{expected}' at byte {offset}")]
    Expected { expected: char, offset: usize },
    #[error("ExprSyntaxError: trailing input at byte {offset}")]
    TrailingInput { offset: usize },
    #[error("ExprSyntaxError: malformed number at byte {offset}")]
    BadNumber { offset: usize },
    #[error("UnknownIdentifier: '{name}' at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },
}

/// Error produced while evaluating a parsed expression.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("EvalError: division by zero in '{context}'")]
    DivisionByZero { context: String },
    #[error("EvalError: sqrt of negative value {value} in '{context}'")]
    SqrtNegative { value: f64, context: String },
    #[error("EvalError: non-finite result in '{context}'")]
    NonFinite { context: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Var {
    T,
    X,
    Y,
    Z,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Func {
    Sin,
    Cos,
    Exp,
    Sqrt,
}

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Num(f64),
    Var(Var),
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Pow(Box<Node>, Box<Node>),
    Call(Func, Box<Node>),
}

/// A parsed scalar expression over `(t, x, y, z)`.
///
/// Evaluation is a pure function of its inputs; the original source string is
/// retained so configs round-trip exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarExpression {
    src: String,
    root: Node,
}

impl ScalarExpression {
    /// Parse `src` into an expression AST.
    pub fn parse(src: &str) -> Result<Self, ExprSyntaxError> {
        let mut p = Parser {
            bytes: src.as_bytes(),
            pos: 0,
        };
        p.skip_ws();
        let root = p.parse_sum()?;
        p.skip_ws();
        if p.pos < p.bytes.len() {
            return Err(ExprSyntaxError::TrailingInput { offset: p.pos });
        }
        Ok(ScalarExpression {
            src: src.to_owned(),
            root,
        })
    }

    /// Shorthand for a constant expression.
    pub fn constant(value: f64) -> Self {
        ScalarExpression {
            src: format!("{value}"),
            root: Node::Num(value),
        }
    }

    /// The source string this expression was parsed from.
    pub fn source(&self) -> &str {
        &self.src
    }

    /// True if the expression references none of `t, x, y, z`.
    pub fn is_constant(&self) -> bool {
        fn walk(n: &Node) -> bool {
            match n {
                Node::Num(_) => true,
                Node::Var(_) => false,
                Node::Neg(a) | Node::Call(_, a) => walk(a),
                Node::Add(a, b)
                | Node::Sub(a, b)
                | Node::Mul(a, b)
                | Node::Div(a, b)
                | Node::Pow(a, b) => walk(a) && walk(b),
            }
        }
        walk(&self.root)
    }

    /// Evaluate at time `t` and position `x` (components beyond the mesh
    /// dimension are zero).
    pub fn evaluate(&self, t: f64, x: [f64; 3]) -> Result<f64, EvalError> {
        let v = self.eval_node(&self.root, t, x)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(EvalError::NonFinite {
                context: self.src.clone(),
            })
        }
    }

    fn eval_node(&self, n: &Node, t: f64, x: [f64; 3]) -> Result<f64, EvalError> {
        Ok(match n {
            Node::Num(v) => *v,
            Node::Var(Var::T) => t,
            Node::Var(Var::X) => x[0],
            Node::Var(Var::Y) => x[1],
            Node::Var(Var::Z) => x[2],
            Node::Neg(a) => -self.eval_node(a, t, x)?,
            Node::Add(a, b) => self.eval_node(a, t, x)? + self.eval_node(b, t, x)?,
            Node::Sub(a, b) => self.eval_node(a, t, x)? - self.eval_node(b, t, x)?,
            Node::Mul(a, b) => self.eval_node(a, t, x)? * self.eval_node(b, t, x)?,
            Node::Div(a, b) => {
                let d = self.eval_node(b, t, x)?;
                if d == 0.0 {
                    return Err(EvalError::DivisionByZero {
                        context: self.src.clone(),
                    });
                }
                self.eval_node(a, t, x)? / d
            }
            Node::Pow(a, b) => {
                let base = self.eval_node(a, t, x)?;
                let exp = self.eval_node(b, t, x)?;
                base.powf(exp)
            }
            Node::Call(f, a) => {
                let v = self.eval_node(a, t, x)?;
                match f {
                    Func::Sin => v.sin(),
                    Func::Cos => v.cos(),
                    Func::Exp => v.exp(),
                    Func::Sqrt => {
                        if v < 0.0 {
                            return Err(EvalError::SqrtNegative {
                                value: v,
                                context: self.src.clone(),
                            });
                        }
                        v.sqrt()
                    }
                }
            }
        })
    }
}

impl fmt::Display for ScalarExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.src)
    }
}

impl Serialize for ScalarExpression {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.src)
    }
}

impl<'de> Deserialize<'de> for ScalarExpression {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        ScalarExpression::parse(&s).map_err(D::Error::custom)
    }
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    // sum := term (('+' | '-') term)*
    fn parse_sum(&mut self) -> Result<Node, ExprSyntaxError> {
        let mut lhs = self.parse_term()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let rhs = self.parse_term()?;
                    lhs = Node::Add(Box::new(lhs), Box::new(rhs));
                }
                Some(b'-') => {
                    self.pos += 1;
                    let rhs = self.parse_term()?;
                    lhs = Node::Sub(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    // term := unary (('*' | '/') unary)*
    fn parse_term(&mut self) -> Result<Node, ExprSyntaxError> {
        let mut lhs = self.parse_unary()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let rhs = self.parse_unary()?;
                    lhs = Node::Mul(Box::new(lhs), Box::new(rhs));
                }
                Some(b'/') => {
                    self.pos += 1;
                    let rhs = self.parse_unary()?;
                    lhs = Node::Div(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    // unary := '-' unary | power
    fn parse_unary(&mut self) -> Result<Node, ExprSyntaxError> {
        self.skip_ws();
        if self.peek() == Some(b'-') {
            self.pos += 1;
            let inner = self.parse_unary()?;
            return Ok(Node::Neg(Box::new(inner)));
        }
        self.parse_power()
    }

    // power := atom ('^' unary)?    -- right-associative, binds above unary minus
    fn parse_power(&mut self) -> Result<Node, ExprSyntaxError> {
        let base = self.parse_atom()?;
        self.skip_ws();
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let exp = self.parse_unary()?;
            return Ok(Node::Pow(Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn parse_atom(&mut self) -> Result<Node, ExprSyntaxError> {
        self.skip_ws();
        let Some(c) = self.peek() else {
            return Err(ExprSyntaxError::UnexpectedEnd { offset: self.pos });
        };
        if c == b'(' {
            self.pos += 1;
            let inner = self.parse_sum()?;
            self.skip_ws();
            if self.peek() != Some(b')') {
                return Err(ExprSyntaxError::Expected {
                    expected: ')',
                    offset: self.pos,
                });
            }
            self.pos += 1;
            return Ok(inner);
        }
        if c.is_ascii_digit() || c == b'.' {
            return self.parse_number();
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            return self.parse_ident();
        }
        Err(ExprSyntaxError::UnexpectedChar {
            ch: c as char,
            offset: self.pos,
        })
    }

    fn parse_number(&mut self) -> Result<Node, ExprSyntaxError> {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_ascii_digit() || c == b'.' {
                self.pos += 1;
            } else if (c == b'e' || c == b'E') && self.pos > start {
                // exponent; optionally signed
                let save = self.pos;
                self.pos += 1;
                if matches!(self.peek(), Some(b'+') | Some(b'-')) {
                    self.pos += 1;
                }
                if !matches!(self.peek(), Some(d) if d.is_ascii_digit()) {
                    self.pos = save;
                    break;
                }
            } else {
                break;
            }
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii slice");
        text.parse::<f64>()
            .map(Node::Num)
            .map_err(|_| ExprSyntaxError::BadNumber { offset: start })
    }

    fn parse_ident(&mut self) -> Result<Node, ExprSyntaxError> {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == b'_' {
                self.pos += 1;
            } else {
                break;
            }
        }
        let name = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii slice");
        let var = match name {
            "t" => Some(Var::T),
            "x" => Some(Var::X),
            "y" => Some(Var::Y),
            "z" => Some(Var::Z),
            _ => None,
        };
        if let Some(v) = var {
            return Ok(Node::Var(v));
        }
        let func = match name {
            "sin" => Some(Func::Sin),
            "cos" => Some(Func::Cos),
            "exp" => Some(Func::Exp),
            "sqrt" => Some(Func::Sqrt),
            _ => None,
        };
        let Some(f) = func else {
            return Err(ExprSyntaxError::UnknownIdentifier {
                name: name.to_owned(),
                offset: start,
            });
        };
        self.skip_ws();
        if self.peek() != Some(b'(') {
            return Err(ExprSyntaxError::Expected {
                expected: '(',
                offset: self.pos,
            });
        }
        self.pos += 1;
        let arg = self.parse_sum()?;
        self.skip_ws();
        if self.peek() != Some(b')') {
            return Err(ExprSyntaxError::Expected {
                expected: ')',
                offset: self.pos,
            });
        }
        self.pos += 1;
        Ok(Node::Call(f, Box::new(arg)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eval(src: &str, t: f64, x: [f64; 3]) -> f64 {
        ScalarExpression::parse(src).unwrap().evaluate(t, x).unwrap()
    }

    #[test]
    fn pressure_ramp() {
        assert_eq!(eval("10.0*t", 0.37, [0.0; 3]), 3.7);
    }

    #[test]
    fn literal_zero() {
        assert_eq!(eval("0.0", 123.0, [4.0, 5.0, 6.0]), 0.0);
    }

    #[test]
    fn power_right_associative() {
        // 2^3^2 = 2^(3^2) = 512, hand-evaluated parse tree
        assert_eq!(eval("2^3^2", 0.0, [0.0; 3]), 512.0);
    }

    #[test]
    fn unary_minus_binds_below_power() {
        assert_eq!(eval("-2^2", 0.0, [0.0; 3]), -4.0);
        assert_eq!(eval("2^-1", 0.0, [0.0; 3]), 0.5);
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(eval("1+2*3", 0.0, [0.0; 3]), 7.0);
        assert_eq!(eval("8/2/2", 0.0, [0.0; 3]), 2.0);
        assert_eq!(eval("1-2-3", 0.0, [0.0; 3]), -4.0);
        assert_eq!(eval("(1+2)*3", 0.0, [0.0; 3]), 9.0);
    }

    #[test]
    fn variables_and_functions() {
        assert_eq!(eval("sin(t)", 0.0, [0.0; 3]), 0.0);
        assert_eq!(eval("x+2*y", 0.0, [1.0, 2.0, 0.0]), 5.0);
        assert_eq!(eval("sqrt(4)", 0.0, [0.0; 3]), 2.0);
        assert!((eval("exp(1)", 0.0, [0.0; 3]) - std::f64::consts::E).abs() < 1e-15);
        assert!((eval("cos(0)", 0.0, [0.0; 3]) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn division_by_zero_is_eval_error() {
        let e = ScalarExpression::parse("1/t").unwrap();
        assert!(matches!(
            e.evaluate(0.0, [0.0; 3]),
            Err(EvalError::DivisionByZero { .. })
        ));
        assert_eq!(e.evaluate(2.0, [0.0; 3]).unwrap(), 0.5);
    }

    #[test]
    fn sqrt_negative_is_eval_error() {
        let e = ScalarExpression::parse("sqrt(t)").unwrap();
        assert!(matches!(
            e.evaluate(-1.0, [0.0; 3]),
            Err(EvalError::SqrtNegative { .. })
        ));
    }

    #[test]
    fn unknown_identifier_with_offset() {
        match ScalarExpression::parse("2*foo") {
            Err(ExprSyntaxError::UnknownIdentifier { name, offset }) => {
                assert_eq!(name, "foo");
                assert_eq!(offset, 2);
            }
            other => panic!("expected UnknownIdentifier, got {other:?}"),
        }
    }

    #[test]
    fn syntax_error_has_offset() {
        match ScalarExpression::parse("1+*2") {
            Err(ExprSyntaxError::UnexpectedChar { ch, offset }) => {
                assert_eq!(ch, '*');
                assert_eq!(offset, 2);
            }
            other => panic!("expected UnexpectedChar, got {other:?}"),
        }
        assert!(ScalarExpression::parse("(1+2").is_err());
        assert!(ScalarExpression::parse("1 2").is_err());
    }

    #[test]
    fn evaluation_is_pure() {
        let e = ScalarExpression::parse("sin(t)*x + y^2/3 - exp(z)").unwrap();
        let a = e.evaluate(0.3, [1.1, 2.2, 0.5]).unwrap();
        for _ in 0..10 {
            let b = e.evaluate(0.3, [1.1, 2.2, 0.5]).unwrap();
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn scientific_notation() {
        assert_eq!(eval("1e3", 0.0, [0.0; 3]), 1000.0);
        assert_eq!(eval("2.5e-2", 0.0, [0.0; 3]), 0.025);
    }
}
