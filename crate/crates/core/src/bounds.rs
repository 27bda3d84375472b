//! Certified enclosures of distance values.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// `[lo, hi]` enclosing an unknown distance. `hi` may be `+∞`, and so may
/// `lo` when the distance is known to be infinite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundInterval {
    #[serde(serialize_with = "ser_extended", deserialize_with = "de_extended")]
    pub lo: f64,
    #[serde(serialize_with = "ser_extended", deserialize_with = "de_extended")]
    pub hi: f64,
    /// Which computation certified `lo`.
    pub lo_provenance: String,
    /// Which computation certified `hi`.
    pub hi_provenance: String,
    /// Set when part of the computation gave up (search budget exhausted);
    /// the interval is then wider than requested but still valid.
    pub undecided: bool,
}

impl BoundInterval {
    pub fn new(lo: f64, hi: f64, lo_provenance: impl Into<String>, hi_provenance: impl Into<String>) -> Self {
        Self {
            lo,
            hi,
            lo_provenance: lo_provenance.into(),
            hi_provenance: hi_provenance.into(),
            undecided: false,
        }
    }

    /// The uninformative enclosure `[0, ∞]`.
    pub fn unknown(reason: impl Into<String>) -> Self {
        let reason = reason.into();
        Self {
            lo: 0.0,
            hi: f64::INFINITY,
            lo_provenance: reason.clone(),
            hi_provenance: reason,
            undecided: true,
        }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn overlaps(&self, other: &BoundInterval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }
}

pub(crate) fn ser_extended<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    if x.is_infinite() {
        s.serialize_str(if *x > 0.0 { "inf" } else { "-inf" })
    } else {
        s.serialize_f64(*x)
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Extended {
    Num(f64),
    Text(String),
}

pub(crate) fn de_extended<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
    match Extended::deserialize(d)? {
        Extended::Num(x) => Ok(x),
        Extended::Text(t) => match t.as_str() {
            "inf" => Ok(f64::INFINITY),
            "-inf" => Ok(f64::NEG_INFINITY),
            other => Err(serde::de::Error::custom(format!("expected number or \"inf\", found {other:?}"))),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip_with_infinity() {
        let b = BoundInterval::new(0.5, f64::INFINITY, "a", "b");
        let text = serde_json::to_string(&b).unwrap();
        assert!(text.contains("\"hi\":\"inf\""), "{text}");
        let back: BoundInterval = serde_json::from_str(&text).unwrap();
        assert_eq!(back, b);
    }

    #[test]
    fn overlap_and_containment() {
        let a = BoundInterval::new(0.0, 1.0, "", "");
        let b = BoundInterval::new(1.0, 2.0, "", "");
        assert!(a.overlaps(&b) && b.overlaps(&a));
        assert!(a.contains(0.5) && !a.contains(1.5));
    }
}
