//! Group literal grammar shared by the library and the command line.
//!
//! ```text
//! group   := "0" | factor ("x" factor)*
//! factor  := atom | "(" atom ")" "^" count | "Z" "^" count
//! atom    := "Z" | "Z/" modulus
//! ```
//!
//! Whitespace is ignored everywhere. `(Z/m)^r` stands for `r` copies of `Z/m`.

use std::fmt;

use thiserror::Error;

/// A factor as written, before primary decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Factor {
    Free,
    Cyclic(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    /// Byte offset into the input.
    pub position: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at position {}: {}", self.position, self.message)
    }
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { position: self.pos, message: message.into() })
    }

    fn expect(&mut self, want: char) -> Result<(), ParseError> {
        match self.peek() {
            Some(c) if c == want => {
                self.bump();
                Ok(())
            }
            Some(c) => self.err(format!("expected '{want}', found '{c}'")),
            None => self.err(format!("expected '{want}', found end of input")),
        }
    }

    fn number(&mut self) -> Result<u64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let mut digits = String::new();
        while let Some(c) = self.peek() {
            if !c.is_ascii_digit() {
                break;
            }
            digits.push(c);
            self.bump();
        }
        if digits.is_empty() {
            self.pos = start;
            return self.err("expected a number");
        }
        digits.parse().map_err(|_| ParseError { position: start, message: format!("number {digits} is too large") })
    }

    fn atom(&mut self) -> Result<Factor, ParseError> {
        match self.peek() {
            Some('Z') => {
                self.bump();
            }
            Some(c) => return self.err(format!("expected 'Z', found '{c}'")),
            None => return self.err("expected 'Z', found end of input"),
        }
        if self.peek() != Some('/') {
            return Ok(Factor::Free);
        }
        self.bump();
        let at = self.pos;
        let m = self.number()?;
        if m < 2 {
            return Err(ParseError { position: at, message: format!("modulus must be at least 2, got {m}") });
        }
        Ok(Factor::Cyclic(m))
    }

    fn factor(&mut self, out: &mut Vec<Factor>) -> Result<(), ParseError> {
        let (atom, parenthesized) = if self.peek() == Some('(') {
            self.bump();
            let a = self.atom()?;
            self.expect(')')?;
            (a, true)
        } else {
            (self.atom()?, false)
        };
        let count = if self.peek() == Some('^') {
            if !parenthesized && atom != Factor::Free {
                return self.err("write (Z/m)^r for repeated cyclic factors");
            }
            self.bump();
            self.number()?
        } else if parenthesized {
            return self.err("expected '^' after parenthesized factor");
        } else {
            1
        };
        out.extend(std::iter::repeat_n(atom, count as usize));
        Ok(())
    }
}

/// Parses a group literal such as `Z x Z/9 x (Z/3)^2`.
pub fn parse_group(src: &str) -> Result<Vec<Factor>, ParseError> {
    let mut lx = Lexer { src, pos: 0 };
    if lx.peek() == Some('0') {
        lx.bump();
        return match lx.peek() {
            None => Ok(Vec::new()),
            Some(c) => lx.err(format!("unexpected '{c}' after trivial group")),
        };
    }
    let mut out = Vec::new();
    lx.factor(&mut out)?;
    loop {
        match lx.peek() {
            None => return Ok(out),
            Some('x') => {
                lx.bump();
                lx.factor(&mut out)?;
            }
            Some(c) => return lx.err(format!("expected 'x' or end of input, found '{c}'")),
        }
    }
}
