//! Big integers as raw JSON numbers.

use num_bigint::BigInt;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use serde_json::Number;

pub fn json_num(n: &BigInt) -> Number {
    n.to_string().parse().expect("integers are valid JSON numbers")
}

pub fn big<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    json_num(n).serialize(s)
}

pub fn big_seq<'a, S, I>(items: I, s: S) -> Result<S::Ok, S::Error>
where
    S: Serializer,
    I: IntoIterator<Item = &'a BigInt>,
{
    let items: Vec<&BigInt> = items.into_iter().collect();
    let mut seq = s.serialize_seq(Some(items.len()))?;
    for n in items {
        seq.serialize_element(&json_num(n))?;
    }
    seq.end()
}

pub fn big_vec<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    big_seq(v, s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn huge_values_stay_exact() {
        let n: BigInt = BigInt::from(10).pow(40) * -3 + 7;
        let v = serde_json::to_string(&json_num(&n)).unwrap();
        assert_eq!(v, n.to_string());
    }
}
