use num_bigint::BigInt;
use num_traits::One;

use super::{Monomial, PolyError, Polynomial};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Var(usize),
    Plus,
    Minus,
    Star,
    Caret,
}

fn tokenize(s: &str) -> Result<Vec<Tok>, PolyError> {
    let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            '+' => out.push(Tok::Plus),
            '-' => out.push(Tok::Minus),
            '*' => out.push(Tok::Star),
            '^' => out.push(Tok::Caret),
            '0'..='9' => {
                let start = i;
                while i + 1 < chars.len() && chars[i + 1].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..=i].iter().collect();
                out.push(Tok::Int(digits.parse().expect("digits")));
            }
            'x' | 'y' | 'z' => {
                let start = i + 1;
                let mut end = start;
                // only x takes an index suffix; y and z are plain aliases
                if c == 'x' {
                    while end < chars.len() && chars[end].is_ascii_digit() {
                        end += 1;
                    }
                }
                if end > start {
                    let digits: String = chars[start..end].iter().collect();
                    let k: usize = digits
                        .parse()
                        .map_err(|_| PolyError::Parse(format!("bad variable index `x{digits}`")))?;
                    if k == 0 {
                        return Err(PolyError::Parse("variables are numbered from x1".into()));
                    }
                    out.push(Tok::Var(k - 1));
                    i = end - 1;
                } else {
                    out.push(Tok::Var(match c {
                        'x' => 0,
                        'y' => 1,
                        _ => 2,
                    }));
                }
            }
            other => return Err(PolyError::Parse(format!("unexpected character `{other}`"))),
        }
        i += 1;
    }
    Ok(out)
}

struct RawTerm {
    coeff: BigInt,
    exps: Vec<(usize, u32)>,
}

fn parse_terms(toks: &[Tok]) -> Result<Vec<RawTerm>, PolyError> {
    if toks.is_empty() {
        return Err(PolyError::Parse("empty polynomial".into()));
    }
    let mut terms = Vec::new();
    let mut pos = 0;
    let mut sign = BigInt::one();
    match toks[0] {
        Tok::Minus => {
            sign = -sign;
            pos = 1;
        }
        Tok::Plus => pos = 1,
        _ => {}
    }
    loop {
        let mut coeff = sign.clone();
        let mut exps = Vec::new();
        let mut factors = 0;
        let mut expect_factor = true;
        while pos < toks.len() {
            match &toks[pos] {
                Tok::Int(v) => {
                    coeff *= v;
                    pos += 1;
                }
                Tok::Var(k) => {
                    pos += 1;
                    let mut e = 1u32;
                    if pos < toks.len() && toks[pos] == Tok::Caret {
                        pos += 1;
                        match toks.get(pos) {
                            Some(Tok::Int(v)) => {
                                e = u32::try_from(v).map_err(|_| {
                                    PolyError::Parse(format!("exponent {v} too large"))
                                })?;
                                pos += 1;
                            }
                            _ => return Err(PolyError::Parse("expected exponent after `^`".into())),
                        }
                    }
                    exps.push((*k, e));
                }
                Tok::Star if !expect_factor => {
                    pos += 1;
                    expect_factor = true;
                    continue;
                }
                Tok::Plus | Tok::Minus if !expect_factor => break,
                t => return Err(PolyError::Parse(format!("unexpected token {t:?}"))),
            }
            factors += 1;
            expect_factor = false;
        }
        if factors == 0 || expect_factor {
            return Err(PolyError::Parse("dangling operator".into()));
        }
        terms.push(RawTerm { coeff, exps });
        match toks.get(pos) {
            None => break,
            Some(Tok::Plus) => sign = BigInt::one(),
            Some(Tok::Minus) => sign = -BigInt::one(),
            Some(_) => unreachable!(),
        }
        pos += 1;
    }
    Ok(terms)
}

impl Polynomial {
    /// Parses the text grammar, e.g. `3*x1^2*x2 - 5` or `x^2 + 2y`.
    ///
    /// `x, y, z` are aliases for `x1, x2, x3`. With `nvars = None` the
    /// variable count is the largest index used (at least 1).
    pub fn parse(s: &str, nvars: Option<usize>) -> Result<Polynomial, PolyError> {
        let terms = parse_terms(&tokenize(s)?)?;
        let used = terms
            .iter()
            .flat_map(|t| t.exps.iter().map(|(k, _)| k + 1))
            .max()
            .unwrap_or(0);
        let n = match nvars {
            Some(n) if used > n => {
                return Err(PolyError::Parse(format!(
                    "variable x{used} used in a ring with {n} variables"
                )))
            }
            Some(n) => n,
            None => used.max(1),
        };
        let mut p = Polynomial::zero(n);
        for t in terms {
            let mut e = vec![0u32; n];
            for (k, x) in t.exps {
                e[k] = e[k]
                    .checked_add(x)
                    .ok_or_else(|| PolyError::Parse("exponent overflow".into()))?;
            }
            p.add_term(Monomial::new(e), t.coeff);
        }
        Ok(p)
    }

    /// Parses and reduces modulo `p`.
    pub fn parse_mod(s: &str, nvars: Option<usize>, p: Option<BigInt>) -> Result<Polynomial, PolyError> {
        Ok(Self::parse(s, nvars)?.with_modulus(p))
    }
}

impl std::str::FromStr for Polynomial {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Polynomial::parse(s, None)
    }
}
