//! Parser for polynomial expressions on the CLI.
//!
//! Two input styles are understood, and may be mixed:
//!
//! - monomial form: `"x1^2*x2 - 3*x1 + 1"`, `"(x1-x2)^2"`
//! - binomial form: `"2*B(x1,2)*B(x2,1) - B(x1,1)"`
//!
//! `B(v, k)` denotes the binomial coefficient C(v, k). Variables are `x`
//! or `x1`, `x2`, ... (ordered by their number; plain `x` is only valid in
//! univariate expressions). Coefficients may be integers or fractions `p/q`.
//! The expression is expanded exactly over ℚ and converted to the binomial
//! basis; non-integer binomial coefficients are reported as input errors
//! when an integer polynomial is required.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::porc::binomial::{to_binomial_basis, QPolynomial};
use crate::porc::multivariate::MultiBinomialPoly;

/// A multivariate polynomial over the monomial basis with rational
/// coefficients; keys are exponent vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPolynomial {
    arity: usize,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl MultiPolynomial {
    fn constant(arity: usize, value: BigRational) -> MultiPolynomial {
        let mut terms = BTreeMap::new();
        if !value.is_zero() {
            terms.insert(vec![0; arity], value);
        }
        MultiPolynomial { arity, terms }
    }

    fn variable(arity: usize, var: usize) -> MultiPolynomial {
        let mut degrees = vec![0; arity];
        degrees[var] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(degrees, BigRational::one());
        MultiPolynomial { arity, terms }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    fn add_assign(&mut self, other: &MultiPolynomial) {
        for (d, c) in &other.terms {
            let entry = self
                .terms
                .entry(d.clone())
                .or_insert_with(BigRational::zero);
            *entry += c;
            if entry.is_zero() {
                self.terms.remove(d);
            }
        }
    }

    fn neg(&self) -> MultiPolynomial {
        MultiPolynomial {
            arity: self.arity,
            terms: self.terms.iter().map(|(d, c)| (d.clone(), -c)).collect(),
        }
    }

    fn mul(&self, other: &MultiPolynomial) -> MultiPolynomial {
        let mut out = MultiPolynomial {
            arity: self.arity,
            terms: BTreeMap::new(),
        };
        for (d1, c1) in &self.terms {
            for (d2, c2) in &other.terms {
                let degrees: Vec<u32> = d1.iter().zip(d2).map(|(a, b)| a + b).collect();
                let entry = out
                    .terms
                    .entry(degrees)
                    .or_insert_with(BigRational::zero);
                *entry += c1 * c2;
            }
        }
        out.terms.retain(|_, c| !c.is_zero());
        out
    }

    fn pow(&self, e: u32) -> MultiPolynomial {
        let mut acc = MultiPolynomial::constant(self.arity, BigRational::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, args: &[BigRational]) -> BigRational {
        let mut total = BigRational::zero();
        for (degrees, coeff) in &self.terms {
            let mut product = coeff.clone();
            for (x, &d) in args.iter().zip(degrees) {
                for _ in 0..d {
                    product *= x;
                }
            }
            total += product;
        }
        total
    }

    /// Restriction to a single variable (requires arity 1).
    pub fn as_univariate(&self) -> Result<QPolynomial> {
        if self.arity != 1 {
            return Err(Error::Input(format!(
                "expected a univariate polynomial, found {} variables",
                self.arity
            )));
        }
        let max_deg = self.terms.keys().map(|d| d[0] as usize).max().unwrap_or(0);
        let mut coeffs = vec![BigRational::zero(); max_deg + 1];
        for (d, c) in &self.terms {
            coeffs[d[0] as usize] = c.clone();
        }
        Ok(QPolynomial::new(coeffs))
    }

    /// Exact conversion into the multivariate binomial basis; errors when a
    /// coefficient there is not an integer.
    pub fn to_binomial(&self) -> Result<MultiBinomialPoly> {
        // Convert one variable at a time: expand each monomial power x^e
        // over C(x, 0..e) with univariate forward differences.
        let mut terms: Vec<(Vec<u32>, BigRational)> = self
            .terms
            .iter()
            .map(|(d, c)| (d.clone(), c.clone()))
            .collect();
        for var in 0..self.arity {
            let mut next: BTreeMap<Vec<u32>, BigRational> = BTreeMap::new();
            for (degrees, coeff) in terms {
                let e = degrees[var];
                let mut monomial = vec![BigRational::zero(); e as usize + 1];
                monomial[e as usize] = BigRational::one();
                let expansion = to_binomial_basis(&QPolynomial::new(monomial));
                for (i, a) in expansion.coefficients().iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    let mut d = degrees.clone();
                    d[var] = i as u32;
                    let entry = next.entry(d).or_insert_with(BigRational::zero);
                    *entry += &coeff * a;
                }
            }
            terms = next.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        }
        let mut out = Vec::with_capacity(terms.len());
        for (degrees, coeff) in terms {
            if !coeff.is_integer() {
                return Err(Error::Input(format!(
                    "binomial-basis coefficient of {degrees:?} is not an integer: {coeff}"
                )));
            }
            out.push((degrees, coeff.to_integer()));
        }
        MultiBinomialPoly::from_terms(self.arity, out)
    }
}

/// Parses a polynomial expression. Returns the polynomial together with the
/// variable names in index order.
pub fn parse_polynomial(text: &str) -> Result<(MultiPolynomial, Vec<String>)> {
    // First pass: find the variables to fix the arity.
    let mut scanner = Lexer::new(text);
    let mut vars: Vec<u32> = Vec::new();
    let mut plain_x = false;
    loop {
        match scanner.next_token()? {
            Token::End => break,
            Token::Var(None) => plain_x = true,
            Token::Var(Some(i)) => {
                if !vars.contains(&i) {
                    vars.push(i);
                }
            }
            _ => {}
        }
    }
    if plain_x && !vars.is_empty() {
        return Err(Error::Parse(
            "mix of plain x and numbered variables".into(),
        ));
    }
    let names: Vec<String> = if plain_x {
        vec!["x".to_string()]
    } else {
        let mut sorted = vars.clone();
        sorted.sort_unstable();
        sorted.iter().map(|i| format!("x{i}")).collect()
    };
    let arity = names.len().max(1);
    let index_of = |tok: Option<u32>| -> usize {
        match tok {
            None => 0,
            Some(i) => {
                let mut sorted = vars.clone();
                sorted.sort_unstable();
                sorted.iter().position(|&v| v == i).unwrap()
            }
        }
    };

    let mut parser = Parser {
        lexer: Lexer::new(text),
        current: Token::End,
        arity,
        index_of: &index_of,
    };
    parser.advance()?;
    let poly = parser.expression()?;
    if parser.current != Token::End {
        return Err(Error::Parse(format!(
            "unexpected trailing input near {:?}",
            parser.current
        )));
    }
    Ok((poly, names))
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Number(BigRational),
    Var(Option<u32>),
    Binom,
    Plus,
    Minus,
    Star,
    Caret,
    Comma,
    Open,
    Close,
    End,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Lexer<'a> {
        Lexer {
            chars: text.chars().peekable(),
        }
    }

    fn next_token(&mut self) -> Result<Token> {
        while self.chars.peek().is_some_and(|c| c.is_whitespace()) {
            self.chars.next();
        }
        let Some(&c) = self.chars.peek() else {
            return Ok(Token::End);
        };
        match c {
            '+' => {
                self.chars.next();
                Ok(Token::Plus)
            }
            '-' | '−' => {
                self.chars.next();
                Ok(Token::Minus)
            }
            '*' | '·' => {
                self.chars.next();
                Ok(Token::Star)
            }
            '^' => {
                self.chars.next();
                Ok(Token::Caret)
            }
            ',' => {
                self.chars.next();
                Ok(Token::Comma)
            }
            '(' => {
                self.chars.next();
                Ok(Token::Open)
            }
            ')' => {
                self.chars.next();
                Ok(Token::Close)
            }
            'B' => {
                self.chars.next();
                Ok(Token::Binom)
            }
            'x' => {
                self.chars.next();
                let mut digits = String::new();
                while self.chars.peek().is_some_and(|c| c.is_ascii_digit()) {
                    digits.push(self.chars.next().unwrap());
                }
                if digits.is_empty() {
                    Ok(Token::Var(None))
                } else {
                    digits
                        .parse::<u32>()
                        .map(|i| Token::Var(Some(i)))
                        .map_err(|_| Error::Parse(format!("bad variable index {digits}")))
                }
            }
            c if c.is_ascii_digit() => {
                let mut digits = String::new();
                while self.chars.peek().is_some_and(|c| c.is_ascii_digit()) {
                    digits.push(self.chars.next().unwrap());
                }
                // Optional /q suffix for a rational literal.
                if self.chars.peek() == Some(&'/') {
                    self.chars.next();
                    let mut den = String::new();
                    while self.chars.peek().is_some_and(|c| c.is_ascii_digit()) {
                        den.push(self.chars.next().unwrap());
                    }
                    if den.is_empty() {
                        return Err(Error::Parse("missing denominator after /".into()));
                    }
                    let d: BigInt = den.parse().unwrap();
                    if d.is_zero() {
                        return Err(Error::Parse("zero denominator".into()));
                    }
                    return Ok(Token::Number(BigRational::new(digits.parse().unwrap(), d)));
                }
                Ok(Token::Number(BigRational::from_integer(
                    digits.parse().unwrap(),
                )))
            }
            other => Err(Error::Parse(format!("unexpected character {other:?}"))),
        }
    }
}

struct Parser<'a, 'b> {
    lexer: Lexer<'a>,
    current: Token,
    arity: usize,
    index_of: &'b dyn Fn(Option<u32>) -> usize,
}

impl Parser<'_, '_> {
    fn advance(&mut self) -> Result<()> {
        self.current = self.lexer.next_token()?;
        Ok(())
    }

    fn expect(&mut self, token: Token) -> Result<()> {
        if self.current == token {
            self.advance()
        } else {
            Err(Error::Parse(format!(
                "expected {token:?}, found {:?}",
                self.current
            )))
        }
    }

    /// expression := ['-'] term (('+' | '-') term)*
    fn expression(&mut self) -> Result<MultiPolynomial> {
        let mut negated = false;
        if self.current == Token::Minus {
            negated = true;
            self.advance()?;
        } else if self.current == Token::Plus {
            self.advance()?;
        }
        let mut acc = self.term()?;
        if negated {
            acc = acc.neg();
        }
        loop {
            match self.current {
                Token::Plus => {
                    self.advance()?;
                    let t = self.term()?;
                    acc.add_assign(&t);
                }
                Token::Minus => {
                    self.advance()?;
                    let t = self.term()?.neg();
                    acc.add_assign(&t);
                }
                _ => return Ok(acc),
            }
        }
    }

    /// term := factor ('*'? factor)*  — adjacency like "3x1" multiplies.
    fn term(&mut self) -> Result<MultiPolynomial> {
        let mut acc = self.factor()?;
        loop {
            match self.current {
                Token::Star => {
                    self.advance()?;
                    let f = self.factor()?;
                    acc = acc.mul(&f);
                }
                Token::Var(_) | Token::Binom | Token::Open | Token::Number(_) => {
                    let f = self.factor()?;
                    acc = acc.mul(&f);
                }
                _ => return Ok(acc),
            }
        }
    }

    /// factor := atom ['^' number]
    fn factor(&mut self) -> Result<MultiPolynomial> {
        let base = self.atom()?;
        if self.current == Token::Caret {
            self.advance()?;
            let Token::Number(e) = self.current.clone() else {
                return Err(Error::Parse("expected an exponent after ^".into()));
            };
            self.advance()?;
            if !e.is_integer() || e.to_integer().sign() == num_bigint::Sign::Minus {
                return Err(Error::Parse(format!("bad exponent {e}")));
            }
            let e: u32 = e
                .to_integer()
                .try_into()
                .map_err(|_| Error::Parse("exponent too large".into()))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<MultiPolynomial> {
        match self.current.clone() {
            Token::Number(v) => {
                self.advance()?;
                Ok(MultiPolynomial::constant(self.arity, v))
            }
            Token::Var(v) => {
                self.advance()?;
                Ok(MultiPolynomial::variable(self.arity, (self.index_of)(v)))
            }
            Token::Open => {
                self.advance()?;
                let inner = self.expression()?;
                self.expect(Token::Close)?;
                Ok(inner)
            }
            Token::Binom => {
                self.advance()?;
                self.expect(Token::Open)?;
                let Token::Var(v) = self.current.clone() else {
                    return Err(Error::Parse("B(...) takes a variable first".into()));
                };
                self.advance()?;
                self.expect(Token::Comma)?;
                let Token::Number(k) = self.current.clone() else {
                    return Err(Error::Parse("B(...) takes a constant order".into()));
                };
                self.advance()?;
                self.expect(Token::Close)?;
                if !k.is_integer() {
                    return Err(Error::Parse(format!("binomial order {k} must be integer")));
                }
                let k: u32 = k
                    .to_integer()
                    .try_into()
                    .map_err(|_| Error::Parse("binomial order out of range".into()))?;
                // C(x, k) = x(x-1)…(x-k+1)/k!
                let var = MultiPolynomial::variable(self.arity, (self.index_of)(v));
                let mut acc = MultiPolynomial::constant(self.arity, BigRational::one());
                let mut fact = BigRational::one();
                for i in 0..k {
                    let shifted_var = {
                        let mut t = var.clone();
                        t.add_assign(&MultiPolynomial::constant(
                            self.arity,
                            -BigRational::from_integer(BigInt::from(i)),
                        ));
                        t
                    };
                    acc = acc.mul(&shifted_var);
                    fact *= BigRational::from_integer(BigInt::from(i + 1));
                }
                Ok(acc.mul(&MultiPolynomial::constant(
                    self.arity,
                    fact.recip(),
                )))
            }
            ref other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}
