use std::fmt;

use num_bigint::BigInt;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Monomial, MonomialOrder, PolyError, Polynomial};

/// Arbitrary-precision integer serialized as a decimal string. Deserializes
/// from either a string or a JSON integer.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct DecInt(pub BigInt);

impl Serialize for DecInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for DecInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = DecInt;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a decimal integer string or an integer")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<DecInt, E> {
                v.trim()
                    .parse::<BigInt>()
                    .map(DecInt)
                    .map_err(|_| E::custom(format!("`{v}` is not a decimal integer")))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<DecInt, E> {
                Ok(DecInt(v.into()))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<DecInt, E> {
                Ok(DecInt(v.into()))
            }
        }
        d.deserialize_any(V)
    }
}

impl From<BigInt> for DecInt {
    fn from(v: BigInt) -> Self {
        DecInt(v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub e: Vec<u32>,
    pub c: DecInt,
}

/// `{"nvars":n, "modulus":p|null, "terms":[{"e":[..],"c":"<decimal>"}]}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub nvars: usize,
    #[serde(default)]
    pub modulus: Option<DecInt>,
    pub terms: Vec<TermJson>,
}

impl Polynomial {
    /// JSON view with terms largest first under `ord`.
    pub fn to_json(&self, ord: &MonomialOrder) -> PolyJson {
        PolyJson {
            nvars: self.nvars(),
            modulus: self.modulus().cloned().map(DecInt),
            terms: self
                .sorted_terms(ord)
                .into_iter()
                .map(|(m, c)| TermJson {
                    e: m.exponents().to_vec(),
                    c: DecInt(c.clone()),
                })
                .collect(),
        }
    }

    pub fn from_json(j: &PolyJson) -> Result<Polynomial, PolyError> {
        let mut p = Polynomial::zero(j.nvars).with_modulus(j.modulus.as_ref().map(|m| m.0.clone()));
        for t in &j.terms {
            if t.e.len() != j.nvars {
                return Err(PolyError::Parse(format!(
                    "term exponent vector has length {}, expected {}",
                    t.e.len(),
                    j.nvars
                )));
            }
            p.add_term(Monomial::new(t.e.clone()), t.c.0.clone());
        }
        Ok(p)
    }
}
