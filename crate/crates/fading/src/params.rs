use serde::{Deserialize, Serialize};

use crate::error::{FadingError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FadingKind {
    /// `H = a e^{jΘ}` with `Θ` uniform on `[0, 2π)`.
    Phase,
    /// `H = a U` with `U ~ CN(0, 1)`.
    Rayleigh,
}

impl std::fmt::Display for FadingKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FadingKind::Phase => "phase",
            FadingKind::Rayleigh => "rayleigh",
        })
    }
}

/// Link attenuations `a_{li}` from transmitter `l` to receiver `i`, where
/// receiver 1 is the destination and receiver 3 the relay.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Attenuations {
    #[serde(rename = "11")]
    pub a11: f64,
    #[serde(rename = "21")]
    pub a21: f64,
    #[serde(rename = "31")]
    pub a31: f64,
    #[serde(rename = "13")]
    pub a13: f64,
    #[serde(rename = "23")]
    pub a23: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FadingMarcParams {
    pub kind: FadingKind,
    pub a: Attenuations,
    #[serde(rename = "P")]
    pub p: [f64; 3],
}

/// Average received SNRs `a_{li}^2 P_l` of the five links.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkSnrs {
    pub s11: f64,
    pub s21: f64,
    pub s31: f64,
    pub s13: f64,
    pub s23: f64,
}

impl FadingMarcParams {
    pub fn new(kind: FadingKind, a: Attenuations, p: [f64; 3]) -> Result<Self> {
        let params = FadingMarcParams { kind, a, p };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        let a = &self.a;
        let named = [
            ("a11", a.a11),
            ("a21", a.a21),
            ("a31", a.a31),
            ("a13", a.a13),
            ("a23", a.a23),
            ("P1", self.p[0]),
            ("P2", self.p[1]),
            ("P3", self.p[2]),
        ];
        for (name, v) in named {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(FadingError::InvalidParams(format!(
                    "{name} must be finite and non-negative, got {v}"
                )));
            }
        }
        Ok(())
    }

    pub fn snrs(&self) -> LinkSnrs {
        let (a, p) = (&self.a, &self.p);
        LinkSnrs {
            s11: a.a11 * a.a11 * p[0],
            s21: a.a21 * a.a21 * p[1],
            s31: a.a31 * a.a31 * p[2],
            s13: a.a13 * a.a13 * p[0],
            s23: a.a23 * a.a23 * p[1],
        }
    }

    pub(crate) fn expect_kind(&self, kind: FadingKind) -> Result<()> {
        self.validate()?;
        if self.kind != kind {
            return Err(FadingError::WrongKind {
                expected: kind.to_string(),
                got: self.kind.to_string(),
            });
        }
        Ok(())
    }
}
