use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The constant `c` in `|Hb_n| <= c ||b||_{l^{p_bar}}`, valid for every `n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointwiseBound {
    pub p_bar: f64,
    pub constant: f64,
}

/// `4 * 2^{-2/p} / (1 - 2^{-1/p})`, obtained by splitting the sum into dyadic
/// shells `2^{j-1} <= |n - m| < 2^j` and applying Hölder's inequality on each.
pub fn pointwise_bound(p_bar: f64) -> Result<PointwiseBound> {
    if !(p_bar > 1.0) || !p_bar.is_finite() {
        return Err(Error::InvalidExponent { value: p_bar, reason: "pointwise bound needs 1 < p_bar < inf" });
    }
    let r = 2f64.powf(-1.0 / p_bar);
    Ok(PointwiseBound { p_bar, constant: 4.0 * r * r / (1.0 - r) })
}
