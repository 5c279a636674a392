use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use super::{Monomial, PolyError};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum OrderKind {
    Lex,
    Grlex,
    Grevlex,
}

impl fmt::Display for OrderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OrderKind::Lex => "lex",
            OrderKind::Grlex => "grlex",
            OrderKind::Grevlex => "grevlex",
        })
    }
}

impl FromStr for OrderKind {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "lex" => Ok(OrderKind::Lex),
            "grlex" | "deglex" => Ok(OrderKind::Grlex),
            "grevlex" | "degrevlex" => Ok(OrderKind::Grevlex),
            other => Err(PolyError::Parse(format!("unknown monomial order `{other}`"))),
        }
    }
}

/// A monomial order together with a variable priority.
///
/// `priority[0]` is the most significant variable. The identity priority
/// gives `x_n < ... < x_2 < x_1`, so for two variables lex has `y < x`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MonomialOrder {
    kind: OrderKind,
    priority: Vec<usize>,
}

impl MonomialOrder {
    pub fn new(kind: OrderKind, nvars: usize) -> Self {
        MonomialOrder {
            kind,
            priority: (0..nvars).collect(),
        }
    }

    pub fn lex(nvars: usize) -> Self {
        Self::new(OrderKind::Lex, nvars)
    }

    pub fn grlex(nvars: usize) -> Self {
        Self::new(OrderKind::Grlex, nvars)
    }

    pub fn grevlex(nvars: usize) -> Self {
        Self::new(OrderKind::Grevlex, nvars)
    }

    /// Order with an explicit variable priority (zero-based indices, most
    /// significant first). Fails unless `priority` is a permutation.
    pub fn with_priority(kind: OrderKind, priority: Vec<usize>) -> Result<Self, PolyError> {
        let n = priority.len();
        let mut seen = vec![false; n];
        for &i in &priority {
            if i >= n || seen[i] {
                return Err(PolyError::Parse(format!(
                    "variable priority {priority:?} is not a permutation of 0..{n}"
                )));
            }
            seen[i] = true;
        }
        Ok(MonomialOrder { kind, priority })
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    pub fn priority(&self) -> &[usize] {
        &self.priority
    }

    pub fn nvars(&self) -> usize {
        self.priority.len()
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        debug_assert_eq!(a.nvars(), self.nvars());
        debug_assert_eq!(b.nvars(), self.nvars());
        let lex = || {
            self.priority
                .iter()
                .map(|&i| a.exponent(i).cmp(&b.exponent(i)))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        };
        match self.kind {
            OrderKind::Lex => lex(),
            OrderKind::Grlex => a.degree().cmp(&b.degree()).then_with(lex),
            OrderKind::Grevlex => a.degree().cmp(&b.degree()).then_with(|| {
                // the smaller exponent in the least significant variable wins
                self.priority
                    .iter()
                    .rev()
                    .map(|&i| b.exponent(i).cmp(&a.exponent(i)))
                    .find(|o| o.is_ne())
                    .unwrap_or(Ordering::Equal)
            }),
        }
    }

    /// A key whose plain lexicographic order agrees with `cmp`.
    pub fn sort_key(&self, m: &Monomial) -> Vec<i64> {
        let mut key = Vec::with_capacity(self.nvars() + 1);
        match self.kind {
            OrderKind::Lex => key.extend(self.priority.iter().map(|&i| m.exponent(i) as i64)),
            OrderKind::Grlex => {
                key.push(m.degree() as i64);
                key.extend(self.priority.iter().map(|&i| m.exponent(i) as i64));
            }
            OrderKind::Grevlex => {
                key.push(m.degree() as i64);
                key.extend(self.priority.iter().rev().map(|&i| -(m.exponent(i) as i64)));
            }
        }
        key
    }

    pub fn max<'a>(&self, a: &'a Monomial, b: &'a Monomial) -> &'a Monomial {
        if self.cmp(a, b) == Ordering::Less {
            b
        } else {
            a
        }
    }
}

impl fmt::Display for MonomialOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)
    }
}
