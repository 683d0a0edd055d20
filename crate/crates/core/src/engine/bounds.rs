//! Necessary conditions on each leg of an `(ell, u)`-feasible triangle, given
//! the legs fixed by the enclosing loops. Each bound only uses C1/C2 plus the
//! metric axioms, so a triangle violating one can never be feasible.

/// Upper bound on the first empty leg: `min{u(1-ell), u-d1}`.
///
/// Negative when no start base can qualify.
#[inline]
pub fn bound_e1(ell: f64, u: f64, d1: f64) -> f64 {
    (u * (1.0 - ell)).min(u - d1)
}

/// `(lower, upper)` range for the second lane's distance.
///
/// The lower bound is `(2ell-1)/(2(1-ell))·e1 - d1`, clamped at zero, and
/// exactly zero when `ell == 1`. It relies on `d3 <= d1 + e1 + d2` when the
/// remaining empty legs vanish, which needs symmetry as well as the triangle
/// inequality.
#[inline]
pub fn bound_d2(ell: f64, u: f64, d1: f64, e1: f64) -> (f64, f64) {
    let lower = if ell == 1.0 {
        0.0
    } else {
        ((2.0 * ell - 1.0) / (2.0 * (1.0 - ell)) * e1 - d1).max(0.0)
    };
    (lower, u - (d1 + e1))
}

/// Upper bound on the second empty leg: `min{u(1-ell) - e1, u - (d1+e1+d2)}`.
#[inline]
pub fn bound_e2(ell: f64, u: f64, d1: f64, e1: f64, d2: f64) -> f64 {
    (u * (1.0 - ell) - e1).min(u - (d1 + e1 + d2))
}

/// `(lower, upper)` range for the third lane's distance.
///
/// Lower is `ell/(1-ell)·(e1+e2) - (d1+d2)` clamped at zero (zero when `ell == 1`);
/// upper is `u - (d1+e1+d2+e2)`.
#[inline]
pub fn bound_d3(ell: f64, u: f64, d1: f64, e1: f64, d2: f64, e2: f64) -> (f64, f64) {
    let lower = if ell == 1.0 {
        0.0
    } else {
        (ell / (1.0 - ell) * (e1 + e2) - (d1 + d2)).max(0.0)
    };
    (lower, u - (d1 + e1 + d2 + e2))
}
