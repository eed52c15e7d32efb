//! Two-qubit amplitude damping in the dressed basis `(e, s, a, g)`.

use std::f64::consts::FRAC_PI_2;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c64, re, ComplexMatrix, C64};

use super::DensityMatrix;

/// Basis indices.
pub const E: usize = 0;
pub const S: usize = 1;
pub const A: usize = 2;
pub const G: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoQubitAdParams {
    /// Single-qubit damping rate.
    pub gamma: f64,
    /// Collective damping rate, `|gamma12| < gamma`.
    pub gamma12: f64,
    /// Dipole coupling frequency.
    pub omega12: f64,
    /// Transition frequency.
    pub omega0: f64,
    pub t: f64,
}

impl TwoQubitAdParams {
    pub fn new(gamma: f64, gamma12: f64, omega12: f64, omega0: f64, t: f64) -> Result<Self> {
        let params = Self {
            gamma,
            gamma12,
            omega12,
            omega0,
            t,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.gamma, self.gamma12, self.omega12, self.omega0, self.t];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("parameters must be finite".into()));
        }
        if self.gamma <= 0.0 {
            return Err(Error::InvalidParameter(format!("gamma = {} must be positive", self.gamma)));
        }
        if self.gamma12.abs() >= self.gamma {
            return Err(Error::InvalidParameter(format!(
                "|gamma12| = {} must be below gamma = {}",
                self.gamma12.abs(),
                self.gamma
            )));
        }
        if self.t < 0.0 {
            return Err(Error::InvalidParameter(format!("t = {} must be nonnegative", self.t)));
        }
        Ok(())
    }

    pub fn at_time(&self, t: f64) -> Result<Self> {
        Self::new(self.gamma, self.gamma12, self.omega12, self.omega0, t)
    }

    /// Draws a valid point: `gamma` in [0.2, 3], `gamma12/gamma` in (-0.95, 0.95),
    /// frequencies in [-5, 5] and [-20, 20], `gamma*t` in [0, 4].
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let gamma = rng.random_range(0.2..3.0);
        Self {
            gamma,
            gamma12: gamma * rng.random_range(-0.95..0.95),
            omega12: rng.random_range(-5.0..5.0),
            omega0: rng.random_range(-20.0..20.0),
            t: rng.random_range(0.0..4.0) / gamma,
        }
    }
}

/// Reduced-dynamics coefficients: real populations `a..h`, complex coherences.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoQubitAdCoeffs {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub f: f64,
    pub g: f64,
    pub h: f64,
    pub j: C64,
    pub l: C64,
    pub m: C64,
    pub p: C64,
    pub q: C64,
    pub t: C64,
    pub u: C64,
    pub v: C64,
    pub r: C64,
    pub s: C64,
}

/// `(1 - e^{-x}) / x`, continuous at zero.
fn expm1_ratio(x: f64) -> f64 {
    if x.abs() < 1e-300 {
        1.0
    } else {
        -(-x).exp_m1() / x
    }
}

pub fn ad2_coefficients(params: &TwoQubitAdParams) -> Result<TwoQubitAdCoeffs> {
    params.validate()?;
    let TwoQubitAdParams {
        gamma,
        gamma12,
        omega12: om,
        omega0: w0,
        t,
    } = *params;
    let ap = gamma + gamma12;
    let am = gamma - gamma12;
    let ea = (-ap * t).exp();
    let eb = (-am * t).exp();
    let ga = -(-ap * t).exp_m1();
    let gb = -(-am * t).exp_m1();
    let g2 = -(-2.0 * gamma * t).exp_m1();

    let cap_a = (-2.0 * gamma * t).exp();
    // (a/b)(1 - e^{-bt}) written as a*t*(1 - e^{-bt})/(bt) to stay finite as bt -> 0
    let cap_c = ap * t * expm1_ratio(am * t) * ea;
    let cap_e = am * t * expm1_ratio(ap * t) * eb;
    let cap_h = ap / (2.0 * gamma) * (1.0 - (ap * gb / am + 1.0) * ea)
        + am / ap * (gb - am / (2.0 * gamma) * g2);

    let phase = |w: f64| C64::from_polar(1.0, -w * t);
    let decay = |k: f64| (-k * t).exp();

    let minus_ph = phase(w0 - om);
    let plus_ph = phase(w0 + om);
    let den = gamma * gamma + 4.0 * om * om;
    let eg = decay(gamma);
    let (sn, cs) = (2.0 * om * t).sin_cos();
    let x = 2.0 * om * eg * sn + gamma * (1.0 - eg * cs);
    let y = 2.0 * om * (1.0 - eg * cs) - gamma * eg * sn;
    let rs = minus_ph * (am / den * decay(am / 2.0));
    let uv = plus_ph * (ap / den * decay(ap / 2.0));

    Ok(TwoQubitAdCoeffs {
        a: cap_a,
        b: ea,
        c: cap_c,
        d: eb,
        e: cap_e,
        f: ga,
        g: gb,
        h: cap_h,
        j: minus_ph * decay((3.0 * gamma + gamma12) / 2.0),
        l: phase(2.0 * w0) * eg,
        m: plus_ph * decay((3.0 * gamma - gamma12) / 2.0),
        p: phase(2.0 * om) * eg,
        q: minus_ph * decay(am / 2.0),
        t: plus_ph * decay(ap / 2.0),
        u: uv * x,
        v: uv * y,
        r: rs * x,
        s: rs * y,
    })
}

impl TwoQubitAdCoeffs {
    /// Coefficient multiplying `rho_es` in the `(s, g)` output entry.
    pub fn sg_feed(&self) -> C64 {
        self.u + C64::i() * self.v
    }

    /// Coefficient multiplying `rho_ea` in the `(a, g)` output entry.
    pub fn ag_feed(&self) -> C64 {
        C64::i() * self.s - self.r
    }

    /// `A+C+E+H-1`, `B+F-1`, `D+G-1`.
    pub fn trace_defects(&self) -> [f64; 3] {
        [
            self.a + self.c + self.e + self.h - 1.0,
            self.b + self.f - 1.0,
            self.d + self.g - 1.0,
        ]
    }

    /// Named real and complex coefficients in a fixed order.
    pub fn named(&self) -> Vec<(&'static str, C64)> {
        vec![
            ("A", re(self.a)),
            ("B", re(self.b)),
            ("C", re(self.c)),
            ("D", re(self.d)),
            ("E", re(self.e)),
            ("F", re(self.f)),
            ("G", re(self.g)),
            ("H", re(self.h)),
            ("J", self.j),
            ("L", self.l),
            ("M", self.m),
            ("P", self.p),
            ("Q", self.q),
            ("T", self.t),
            ("U", self.u),
            ("V", self.v),
            ("R", self.r),
            ("S", self.s),
        ]
    }
}

/// Nominal phases of the coherence coefficients. `V`, `S` and `R` carry the
/// extra `pi/2`, `pi/2` and `pi` of their placement in the Choi matrix
/// (`iV`, `iS`, `-R`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ad2Phases {
    pub j: f64,
    pub l: f64,
    pub m: f64,
    pub p: f64,
    pub q: f64,
    pub t: f64,
    pub u: f64,
    pub v: f64,
    pub r: f64,
    pub s: f64,
}

pub fn ad2_phases(params: &TwoQubitAdParams) -> Ad2Phases {
    let TwoQubitAdParams {
        omega12: om,
        omega0: w0,
        t,
        ..
    } = *params;
    let minus = -(w0 - om) * t;
    let plus = -(w0 + om) * t;
    Ad2Phases {
        j: minus,
        l: -2.0 * w0 * t,
        m: plus,
        p: -2.0 * om * t,
        q: minus,
        t: plus,
        u: plus,
        v: plus + FRAC_PI_2,
        r: minus + std::f64::consts::PI,
        s: minus + FRAC_PI_2,
    }
}

/// Entry-by-entry action on an arbitrary 4x4 operator.
pub fn ad2_apply_matrix(x: &ComplexMatrix, c: &TwoQubitAdCoeffs) -> Result<ComplexMatrix> {
    if x.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            got: x.dim(),
        });
    }
    let sg = c.sg_feed();
    let ag = c.ag_feed();
    let mut o = ComplexMatrix::zeros(4);
    o[(E, E)] = x[(E, E)] * c.a;
    o[(E, S)] = c.j * x[(E, S)];
    o[(E, A)] = c.m * x[(E, A)];
    o[(E, G)] = c.l * x[(E, G)];

    o[(S, E)] = c.j.conj() * x[(S, E)];
    o[(S, S)] = x[(S, S)] * c.b + x[(E, E)] * c.c;
    o[(S, A)] = c.p * x[(S, A)];
    o[(S, G)] = c.t * x[(S, G)] + sg * x[(E, S)];

    o[(A, E)] = c.m.conj() * x[(A, E)];
    o[(A, S)] = c.p.conj() * x[(A, S)];
    o[(A, A)] = x[(A, A)] * c.d + x[(E, E)] * c.e;
    o[(A, G)] = c.q * x[(A, G)] + ag * x[(E, A)];

    o[(G, E)] = c.l.conj() * x[(G, E)];
    o[(G, S)] = c.t.conj() * x[(G, S)] + sg.conj() * x[(S, E)];
    o[(G, A)] = c.q.conj() * x[(G, A)] + ag.conj() * x[(A, E)];
    o[(G, G)] = x[(G, G)] + x[(S, S)] * c.f + x[(A, A)] * c.g + x[(E, E)] * c.h;
    Ok(o)
}

/// Action on a state; the output is validated with a `1e-10` trace tolerance.
pub fn ad2_apply(rho: &DensityMatrix, c: &TwoQubitAdCoeffs) -> Result<DensityMatrix> {
    let out = ad2_apply_matrix(rho.mat(), c)?;
    DensityMatrix::with_tolerance(out, 1e-12, 1e-10)
}

/// Identity coefficients (`t = 0`), independent of the rates.
pub fn identity_coefficients() -> TwoQubitAdCoeffs {
    let one = re(1.0);
    let zero = c64(0.0, 0.0);
    TwoQubitAdCoeffs {
        a: 1.0,
        b: 1.0,
        c: 0.0,
        d: 1.0,
        e: 0.0,
        f: 0.0,
        g: 0.0,
        h: 0.0,
        j: one,
        l: one,
        m: one,
        p: one,
        q: one,
        t: one,
        u: zero,
        v: zero,
        r: zero,
        s: zero,
    }
}
