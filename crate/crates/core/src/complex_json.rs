//! Serde adapters encoding complex numbers as `[re, im]` arrays.

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub fn serialize<S: Serializer>(value: &Complex64, serializer: S) -> Result<S::Ok, S::Error> {
    [value.re, value.im].serialize(serializer)
}

pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Complex64, D::Error> {
    let [re, im] = <[f64; 2]>::deserialize(deserializer)?;
    if !re.is_finite() || !im.is_finite() {
        return Err(D::Error::custom("complex components must be finite"));
    }
    Ok(Complex64::new(re, im))
}

/// Same encoding for `Option<Complex64>`, with `None` as `null`.
pub mod option {
    use super::*;

    pub fn serialize<S: Serializer>(
        value: &Option<Complex64>,
        serializer: S,
    ) -> Result<S::Ok, S::Error> {
        value.map(|c| [c.re, c.im]).serialize(serializer)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        deserializer: D,
    ) -> Result<Option<Complex64>, D::Error> {
        Option::<[f64; 2]>::deserialize(deserializer)?
            .map(|[re, im]| {
                if re.is_finite() && im.is_finite() {
                    Ok(Complex64::new(re, im))
                } else {
                    Err(D::Error::custom("complex components must be finite"))
                }
            })
            .transpose()
    }
}
