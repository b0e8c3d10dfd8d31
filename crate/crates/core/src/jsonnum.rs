//! Serde adapters that emit `BigInt` values as plain decimal JSON numbers
//! (arbitrary precision, never scientific notation).

use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Serialize, Serializer};

pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    let n = serde_json::Number::from_str(&v.to_string()).map_err(serde::ser::Error::custom)?;
    n.serialize(s)
}

/// Borrowing wrapper so `BigInt` values can sit inside tuples and sequences.
pub(crate) struct Wrapper<'a>(pub &'a BigInt);

impl Serialize for Wrapper<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        serialize(self.0, s)
    }
}

/// Adapter for `Option<BigInt>` fields.
pub mod opt {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(x) => super::serialize(x, s),
            None => s.serialize_none(),
        }
    }
}
