//! Complex-vector helpers and the `{"re": .., "im": ..}` JSON encoding used
//! by every structured output.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub type CVector = Vec<Complex64>;

/// JSON form of a complex number.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cplx {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for Cplx {
    fn from(z: Complex64) -> Self {
        Cplx { re: z.re, im: z.im }
    }
}

impl From<Cplx> for Complex64 {
    fn from(c: Cplx) -> Self {
        Complex64::new(c.re, c.im)
    }
}

/// `serde(with = ...)` adapter for a single `Complex64`.
pub mod serde_c64 {
    use super::Cplx;
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        Cplx::from(*z).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        Ok(Cplx::deserialize(d)?.into())
    }
}

/// `serde(with = ...)` adapter for `Vec<Complex64>`.
pub mod serde_cvec {
    use super::Cplx;
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
        let out: Vec<Cplx> = v.iter().map(|&z| z.into()).collect();
        out.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex64>, D::Error> {
        Ok(Vec::<Cplx>::deserialize(d)?
            .into_iter()
            .map(Complex64::from)
            .collect())
    }
}

/// Bilinear product `a^t b` (no conjugation).
pub fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Complex inner product `<a, b> = conj(a)^t b`.
pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn inf_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn norm2(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn conj(v: &[Complex64]) -> CVector {
    v.iter().map(|z| z.conj()).collect()
}

pub fn scale(v: &[Complex64], s: Complex64) -> CVector {
    v.iter().map(|z| z * s).collect()
}

/// Index of the largest-modulus entry; ties within `rel_tol * max` go to the
/// lowest index.
pub fn dominant_index(v: &[Complex64], rel_tol: f64) -> usize {
    let max = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    v.iter()
        .position(|z| z.norm() >= max * (1.0 - rel_tol))
        .unwrap_or(0)
}

/// Rescales `v` so that its dominant entry (see [`dominant_index`]) equals `1 + 0i`.
pub fn gauge_fix(v: &[Complex64]) -> CVector {
    let k = dominant_index(v, 1e-12);
    let pivot = v[k];
    if pivot.norm() == 0.0 {
        return v.to_vec();
    }
    let mut out: CVector = v.iter().map(|z| z / pivot).collect();
    out[k] = Complex64::new(1.0, 0.0);
    out
}

/// Wraps an angle into `(-pi, pi]`.
pub fn wrap_angle(theta: f64) -> f64 {
    use std::f64::consts::PI;
    let mut t = theta.rem_euclid(2.0 * PI);
    if t > PI {
        t -= 2.0 * PI;
    }
    t
}
