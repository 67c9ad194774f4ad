use num_bigint::BigInt;

use super::{FieldElem, KError};

/// Parse a rational expression in `s` and `t` such as `(1 - s)*(1 - t)/2`
/// or `s^-1 + 3*t^2`.
pub fn parse_k(input: &str) -> Result<FieldElem, KError> {
    let mut p = Parser {
        src: input.as_bytes(),
        pos: 0,
    };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("trailing input"));
    }
    Ok(v)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, what: &str) -> KError {
        KError::Parse(format!("{what} at byte {}", self.pos))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<FieldElem, KError> {
        let mut acc = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == b'+' { acc.add(&rhs) } else { acc.sub(&rhs) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<FieldElem, KError> {
        let mut acc = self.unary()?;
        while let Some(c @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let rhs = self.unary()?;
            acc = if c == b'*' { acc.mul(&rhs) } else { acc.div(&rhs)? };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<FieldElem, KError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(self.unary()?.neg());
        }
        let base = self.primary()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.signed_int()?;
            let e: i64 = e.try_into().map_err(|_| self.err("exponent too large"))?;
            return base.pow(e);
        }
        Ok(base)
    }

    fn signed_int(&mut self) -> Result<BigInt, KError> {
        let neg = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let n = self.integer()?;
        Ok(if neg { -n } else { n })
    }

    fn integer(&mut self) -> Result<BigInt, KError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(text.parse().expect("digits parse"))
    }

    fn primary(&mut self) -> Result<FieldElem, KError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(b's') => {
                self.pos += 1;
                Ok(FieldElem::sigma())
            }
            Some(b't') => {
                self.pos += 1;
                Ok(FieldElem::sigmabar())
            }
            Some(c) if c.is_ascii_digit() => Ok(FieldElem::from_bigint(self.integer()?)),
            _ => Err(self.err("expected s, t, integer or '('")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_round_trips_display() {
        let x = parse_k("(1 - s)*(1 - t)/2 + s^-1*t^2").unwrap();
        assert_eq!(parse_k(&x.to_string()).unwrap(), x);
    }

    #[test]
    fn precedence_and_unary_minus() {
        assert_eq!(parse_k("-s^2").unwrap(), FieldElem::sigma().mul(&FieldElem::sigma()).neg());
        assert_eq!(parse_k("1 - 2*3").unwrap(), FieldElem::from_int(-5));
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_k("s +").is_err());
        assert!(parse_k("x").is_err());
        assert!(parse_k("1/0").is_err());
    }
}
