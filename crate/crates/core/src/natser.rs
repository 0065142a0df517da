//! Serde adapters writing [`Natural`]s as decimal strings, for use with
//! `#[serde(with = "primecert::natser")]`.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serializer};

use crate::arith::{parse_natural, Natural};

pub fn serialize<S: Serializer>(v: &Natural, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_str_radix(10))
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Natural, D::Error> {
    let s = String::deserialize(d)?;
    parse_natural(&s).ok_or_else(|| D::Error::custom(format!("not a decimal natural: {s:?}")))
}

pub mod opt {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<Natural>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => s.serialize_some(&v.to_str_radix(10)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Natural>, D::Error> {
        match Option::<String>::deserialize(d)? {
            None => Ok(None),
            Some(s) => parse_natural(&s)
                .map(Some)
                .ok_or_else(|| D::Error::custom(format!("not a decimal natural: {s:?}"))),
        }
    }
}
