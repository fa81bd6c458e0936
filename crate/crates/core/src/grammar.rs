//! Small cursor used by every textual spec parser (sequences, digit sets,
//! index sets, rationals), so that errors carry a byte position.

use crate::error::ParseError;

pub(crate) struct Cursor<'a> {
    input: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(input: &'a str) -> Self {
        Cursor { input, pos: 0 }
    }

    pub fn pos(&self) -> usize {
        self.pos
    }

    pub fn rest(&self) -> &'a str {
        &self.input[self.pos..]
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.input.len()
    }

    pub fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::new(self.input, self.pos, message)
    }

    pub fn error_at(&self, pos: usize, message: impl Into<String>) -> ParseError {
        ParseError::new(self.input, pos, message)
    }

    pub fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    pub fn eat(&mut self, token: &str) -> bool {
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, token: &str) -> Result<(), ParseError> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(format!("expected {token:?}")))
        }
    }

    /// Consumes an identifier-like keyword made of `[a-z-]`.
    pub fn keyword(&mut self) -> &'a str {
        let start = self.pos;
        let len = self
            .rest()
            .find(|c: char| !(c.is_ascii_lowercase() || c == '-'))
            .unwrap_or(self.rest().len());
        self.pos += len;
        &self.input[start..self.pos]
    }

    pub fn digits(&mut self) -> Result<&'a str, ParseError> {
        let start = self.pos;
        let len = self
            .rest()
            .find(|c: char| !c.is_ascii_digit())
            .unwrap_or(self.rest().len());
        if len == 0 {
            return Err(self.error("expected a decimal integer"));
        }
        self.pos += len;
        Ok(&self.input[start..self.pos])
    }

    pub fn u64(&mut self) -> Result<u64, ParseError> {
        let start = self.pos;
        let text = self.digits()?;
        text.parse()
            .map_err(|_| self.error_at(start, "integer does not fit in 64 bits"))
    }

    pub fn usize(&mut self) -> Result<usize, ParseError> {
        let start = self.pos;
        let value = self.u64()?;
        usize::try_from(value).map_err(|_| self.error_at(start, "integer too large"))
    }

    /// Comma-separated list of at least one integer.
    pub fn u64_list(&mut self) -> Result<Vec<u64>, ParseError> {
        let mut out = vec![self.u64()?];
        while self.eat(",") {
            out.push(self.u64()?);
        }
        Ok(out)
    }

    pub fn finish(&self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.error("unexpected trailing input"))
        }
    }
}
