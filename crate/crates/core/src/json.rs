//! Serde adapters writing big integers as plain JSON numbers.
//!
//! Relies on `serde_json`'s `arbitrary_precision`, so values of any size
//! round-trip without going through `f64`.

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Number;

fn to_number(v: &BigInt) -> Number {
    v.to_string().parse().expect("integers are valid JSON numbers")
}

fn from_number<E: serde::de::Error>(n: Number) -> Result<BigInt, E> {
    n.to_string()
        .parse()
        .map_err(|_| E::custom(format!("expected an integer, found {n}")))
}

pub mod big {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        to_number(v).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        from_number(Number::deserialize(d)?)
    }
}

pub mod big_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(to_number).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<Number>::deserialize(d)?
            .into_iter()
            .map(from_number)
            .collect()
    }
}

/// A big integer as a JSON number, for building `serde_json::Value`s.
pub fn number(v: &BigInt) -> serde_json::Value {
    serde_json::Value::Number(to_number(v))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize, Deserialize, PartialEq, Debug)]
    struct Wrap {
        #[serde(with = "big")]
        x: BigInt,
        #[serde(with = "big_vec")]
        xs: Vec<BigInt>,
    }

    #[test]
    fn huge_values_round_trip() {
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        let w = Wrap {
            x: -big.clone(),
            xs: vec![BigInt::from(2), big],
        };
        let text = serde_json::to_string(&w).unwrap();
        assert_eq!(text, r#"{"x":-123456789012345678901234567890,"xs":[2,123456789012345678901234567890]}"#);
        assert_eq!(serde_json::from_str::<Wrap>(&text).unwrap(), w);
        assert!(serde_json::from_str::<Wrap>(r#"{"x":1.5,"xs":[]}"#).is_err());
    }
}
