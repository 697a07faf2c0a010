//! Range-1 soft-core pair potentials: the family of nonnegative even
//! potentials with u(0) = 1, u >= 1 - |x| inside the unit range and exact
//! zero outside, their periodization onto rings, and their Fourier
//! transforms.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Interaction range shared by every member of the family.
pub const RANGE: f64 = 1.0;

/// Grid step used when a constructor has to probe strictness numerically.
const STRICTNESS_GRID_STEP: f64 = 0.005;

#[derive(Debug, Clone, PartialEq)]
pub enum Kind {
    /// u(x) = (1 - |x|) on [-1, 1], zero outside. The overlap length of two
    /// unit rods centered at distance |x|; the equality member of the family.
    Overlap,
    /// Penetrable-sphere step: 1 on the open interval (-1, 1), 0 at |x| >= 1.
    Step,
    /// u(x) = 1 - |x|^beta on [-1, 1], beta >= 1. Has a cusp at the origin
    /// for 1 < beta < 2.
    PowerLaw { beta: f64 },
    /// Piecewise-linear interpolation of (x, u) samples inside [-1, 1].
    Tabulated { samples: Vec<(f64, f64)> },
}

/// A member of the range-1 potential family together with the
/// strict-above-chord flag (true iff u(x) > 1 - |x| for all 0 < |x| < 1).
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialSpec {
    kind: Kind,
    strict_above_chord: bool,
}

impl PotentialSpec {
    pub fn overlap() -> Self {
        PotentialSpec {
            kind: Kind::Overlap,
            strict_above_chord: false,
        }
    }

    pub fn step() -> Self {
        PotentialSpec {
            kind: Kind::Step,
            strict_above_chord: true,
        }
    }

    /// beta >= 1 is required: for beta < 1 the chord bound 1 - |x|^beta >=
    /// 1 - |x| fails on (0, 1), so such exponents are rejected outright.
    pub fn power_law(beta: f64) -> Result<Self> {
        if !beta.is_finite() || beta < 1.0 {
            return Err(Error::InvalidSpec(format!(
                "power-law exponent beta = {beta} must be finite and >= 1"
            )));
        }
        Ok(PotentialSpec {
            kind: Kind::PowerLaw { beta },
            strict_above_chord: beta > 1.0,
        })
    }

    /// Samples must be strictly increasing in x and confined to [-1, 1].
    /// Whether the table actually satisfies the family inequalities is the
    /// job of [`validate_family`]; strictness is probed on a fine grid.
    pub fn tabulated(samples: Vec<(f64, f64)>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::InvalidSpec(
                "tabulated spec needs at least two samples".into(),
            ));
        }
        for &(x, u) in &samples {
            if !x.is_finite() || !u.is_finite() {
                return Err(Error::InvalidSpec(format!(
                    "non-finite sample ({x}, {u})"
                )));
            }
            if !(-1.0..=1.0).contains(&x) {
                return Err(Error::InvalidSpec(format!(
                    "sample coordinate {x} outside [-1, 1]"
                )));
            }
        }
        if samples.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::InvalidSpec(
                "tabulated samples must be strictly increasing in x".into(),
            ));
        }
        let mut spec = PotentialSpec {
            kind: Kind::Tabulated { samples },
            strict_above_chord: false,
        };
        spec.strict_above_chord = spec.probe_strictness();
        Ok(spec)
    }

    pub fn kind(&self) -> &Kind {
        &self.kind
    }

    pub fn strict_above_chord(&self) -> bool {
        self.strict_above_chord
    }

    /// Pair energy u(x). Exact zero for |x| >= 1 by construction, never by
    /// thresholding a formula.
    pub fn evaluate(&self, x: f64) -> f64 {
        let a = x.abs();
        if a >= RANGE {
            return 0.0;
        }
        match &self.kind {
            Kind::Overlap => 1.0 - a,
            Kind::Step => 1.0,
            Kind::PowerLaw { beta } => 1.0 - a.powf(*beta),
            Kind::Tabulated { samples } => interpolate(samples, x),
        }
    }

    /// Value on the open interval (-1, 1) by continuity from inside; used as
    /// the quadrature integrand so that endpoint samples of discontinuous
    /// members (Step) carry their interior limit.
    fn interior_value(&self, x: f64) -> f64 {
        let a = x.abs();
        match &self.kind {
            Kind::Overlap => 1.0 - a,
            Kind::Step => 1.0,
            Kind::PowerLaw { beta } => 1.0 - a.powf(*beta),
            Kind::Tabulated { samples } => interpolate(samples, x),
        }
    }

    fn probe_strictness(&self) -> bool {
        let steps = (1.0 / STRICTNESS_GRID_STEP) as i64;
        for i in 1..steps {
            let x = i as f64 * STRICTNESS_GRID_STEP;
            if self.evaluate(x) - (1.0 - x) <= 0.0 || self.evaluate(-x) - (1.0 - x) <= 0.0 {
                return false;
            }
        }
        true
    }

    /// Fourier transform u^(k) = \int u(x) e^{-ikx} dx computed by adaptive
    /// Gauss-Legendre quadrature over the support. Since u is even and real,
    /// u^(k) = 2 \int_0^1 u(x) cos(kx) dx; u^(0) is the plain integral of u.
    pub fn fourier_transform(&self, k: f64) -> f64 {
        let k = k.abs();
        // Breakpoints: table knots plus the support endpoints.
        let mut breaks = vec![0.0, 1.0];
        if let Kind::Tabulated { samples } = &self.kind {
            for &(x, _) in samples {
                let a = x.abs();
                if a > 0.0 && a < 1.0 {
                    breaks.push(a);
                }
            }
            breaks.sort_by(|p, q| p.partial_cmp(q).unwrap());
            breaks.dedup();
        }
        let f = |x: f64| self.interior_value(x) * (k * x).cos();
        let mut total = 0.0;
        for w in breaks.windows(2) {
            total += integrate_adaptive(&f, w[0], w[1], k, 1e-12);
        }
        2.0 * total
    }

    /// Builds the ring version u_Lambda(x) = sum_j u(x + jL). Needs L >= 2 so
    /// that at most one image term is nonzero.
    pub fn periodize(&self, period: i64) -> Result<PeriodizedPotential> {
        if period <= 1 {
            return Err(Error::UnsupportedPeriod(period));
        }
        Ok(PeriodizedPotential {
            base: self.clone(),
            period,
        })
    }
}

fn interpolate(samples: &[(f64, f64)], x: f64) -> f64 {
    let first = samples[0].0;
    let last = samples[samples.len() - 1].0;
    if x < first || x > last {
        // Inside the unit range but outside the table: no data, treat as 0.
        return 0.0;
    }
    let idx = samples.partition_point(|&(sx, _)| sx <= x);
    if idx == 0 {
        return samples[0].1;
    }
    if idx == samples.len() {
        return samples[samples.len() - 1].1;
    }
    let (x0, u0) = samples[idx - 1];
    let (x1, u1) = samples[idx];
    if x == x0 {
        return u0;
    }
    let t = (x - x0) / (x1 - x0);
    u0 + t * (u1 - u0)
}

/// Signed displacement of smallest magnitude congruent to dx modulo period.
pub fn minimal_image(dx: f64, period: f64) -> f64 {
    let mut d = dx.rem_euclid(period);
    if d > period / 2.0 {
        d -= period;
    }
    d
}

/// A potential summed over all lattice images of an integer period L >= 2.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodizedPotential {
    base: PotentialSpec,
    period: i64,
}

impl PeriodizedPotential {
    pub fn base(&self) -> &PotentialSpec {
        &self.base
    }

    pub fn period(&self) -> i64 {
        self.period
    }

    /// u_Lambda(x): because the range is 1 and L >= 2, exactly the minimal
    /// image can contribute.
    pub fn evaluate(&self, x: f64) -> f64 {
        self.base.evaluate(minimal_image(x, self.period as f64))
    }
}

// ---------------------------------------------------------------------------
// Validation

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "check", rename_all = "snake_case")]
pub enum Violation {
    Evenness { x: f64, left: f64, right: f64 },
    ValueAtZero { value: f64 },
    ChordDomination { x: f64, value: f64, chord: f64 },
    CompactSupport { x: f64, value: f64 },
    StrictChord { x: f64, value: f64, chord: f64 },
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the family invariants on the grid {-1.5, -1.5+step, ..., 1.5} and
/// reports every violation with its location. Built-ins are held to
/// tolerance zero; tabulated members get 1e-12 of interpolation slack.
pub fn validate_family(spec: &PotentialSpec, grid_step: f64) -> Result<ValidationReport> {
    if !(grid_step > 0.0 && grid_step <= 0.1) {
        return Err(Error::Contract(format!(
            "grid_step {grid_step} outside (0, 0.1]"
        )));
    }
    let tol = match spec.kind() {
        Kind::Tabulated { .. } => 1e-12,
        _ => 0.0,
    };
    let mut report = ValidationReport::default();

    let u0 = spec.evaluate(0.0);
    if u0 != 1.0 {
        report.violations.push(Violation::ValueAtZero { value: u0 });
    }

    let steps = (3.0 / grid_step).round() as i64;
    for i in 0..=steps {
        let x = -1.5 + i as f64 * grid_step;
        let a = x.abs();
        let u = spec.evaluate(x);
        if x > 0.0 {
            let mirror = spec.evaluate(-x);
            if (u - mirror).abs() > tol {
                report.violations.push(Violation::Evenness {
                    x,
                    left: mirror,
                    right: u,
                });
            }
        }
        if a >= RANGE {
            if u != 0.0 {
                report
                    .violations
                    .push(Violation::CompactSupport { x, value: u });
            }
        } else if a > 0.0 {
            let chord = 1.0 - a;
            if u < chord - tol {
                report.violations.push(Violation::ChordDomination {
                    x,
                    value: u,
                    chord,
                });
            } else if spec.strict_above_chord() && u - chord <= 0.0 {
                report.violations.push(Violation::StrictChord {
                    x,
                    value: u,
                    chord,
                });
            }
        }
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Quadrature

/// 7-point Gauss-Legendre abscissas/weights on [-1, 1].
const GL7_X: [f64; 7] = [
    -0.949107912342758524526189684048,
    -0.741531185599394439863864773281,
    -0.405845151377397166906606412077,
    0.0,
    0.405845151377397166906606412077,
    0.741531185599394439863864773281,
    0.949107912342758524526189684048,
];
const GL7_W: [f64; 7] = [
    0.129484966168869693270611432679,
    0.279705391489276667901467771424,
    0.381830050505118944950369775489,
    0.417959183673469387755102040816,
    0.381830050505118944950369775489,
    0.279705391489276667901467771424,
    0.129484966168869693270611432679,
];

fn gl7<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut s = 0.0;
    for i in 0..7 {
        s += GL7_W[i] * f(mid + half * GL7_X[i]);
    }
    s * half
}

fn composite_gl7<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    let mut s = 0.0;
    for p in 0..panels {
        s += gl7(f, a + p as f64 * h, a + (p + 1) as f64 * h);
    }
    s
}

/// Composite Gauss-Legendre with panel doubling until two successive
/// estimates agree to `tol`. Initial panel width tracks the oscillation
/// length pi/k so high wavenumbers stay resolved.
fn integrate_adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, k: f64, tol: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let osc = std::f64::consts::PI / (k.abs() + 1.0);
    let mut panels = ((b - a) / osc).ceil().max(2.0) as usize;
    let mut prev = composite_gl7(f, a, b, panels);
    for _ in 0..10 {
        panels *= 2;
        let next = composite_gl7(f, a, b, panels);
        if (next - prev).abs() <= tol {
            return next;
        }
        prev = next;
    }
    prev
}

// ---------------------------------------------------------------------------
// Serialization: {"kind": "...", "beta": number?, "samples": [[x, u]]?}

#[derive(Serialize, Deserialize)]
struct SpecRepr {
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    beta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    samples: Option<Vec<(f64, f64)>>,
}

impl Serialize for PotentialSpec {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = match &self.kind {
            Kind::Overlap => SpecRepr {
                kind: "overlap".into(),
                beta: None,
                samples: None,
            },
            Kind::Step => SpecRepr {
                kind: "step".into(),
                beta: None,
                samples: None,
            },
            Kind::PowerLaw { beta } => SpecRepr {
                kind: "power_law".into(),
                beta: Some(*beta),
                samples: None,
            },
            Kind::Tabulated { samples } => SpecRepr {
                kind: "tabulated".into(),
                beta: None,
                samples: Some(samples.clone()),
            },
        };
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PotentialSpec {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as DeError;
        let repr = SpecRepr::deserialize(deserializer)?;
        match repr.kind.as_str() {
            "overlap" => Ok(PotentialSpec::overlap()),
            "step" => Ok(PotentialSpec::step()),
            "power_law" => {
                let beta = repr
                    .beta
                    .ok_or_else(|| D::Error::custom("power_law spec requires field \"beta\""))?;
                PotentialSpec::power_law(beta).map_err(D::Error::custom)
            }
            "tabulated" => {
                let samples = repr.samples.ok_or_else(|| {
                    D::Error::custom("tabulated spec requires field \"samples\"")
                })?;
                PotentialSpec::tabulated(samples).map_err(D::Error::custom)
            }
            other => Err(D::Error::custom(format!(
                "unknown potential kind \"{other}\" (field \"kind\")"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn overlap_hat(k: f64) -> f64 {
        if k == 0.0 {
            1.0
        } else {
            2.0 * (1.0 - k.cos()) / (k * k)
        }
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(PotentialSpec::overlap().evaluate(0.5), 0.5);
        assert_eq!(PotentialSpec::overlap().evaluate(0.0), 1.0);
        assert_eq!(PotentialSpec::step().evaluate(0.0), 1.0);
        assert_eq!(PotentialSpec::power_law(2.0).unwrap().evaluate(0.5), 0.75);
        for spec in crate::built_in_potentials() {
            assert_eq!(spec.evaluate(1.0), 0.0);
            assert_eq!(spec.evaluate(-1.3), 0.0);
        }
    }

    #[test]
    fn power_law_below_one_rejected() {
        // 1 - x^0.5 < 1 - x on (0, 1), so the constructor must refuse.
        assert!(PotentialSpec::power_law(0.5).is_err());
        assert!(PotentialSpec::power_law(1.0).is_ok());
    }

    #[test]
    fn validate_overlap_clean() {
        let report = validate_family(&PotentialSpec::overlap(), 0.01).unwrap();
        assert!(report.is_valid(), "{:?}", report.violations);
    }

    #[test]
    fn validate_bad_tabulated() {
        // Copy of the overlap potential with u(0) = 0.9.
        let spec = PotentialSpec::tabulated(vec![(-1.0, 0.0), (0.0, 0.9), (1.0, 0.0)]).unwrap();
        let report = validate_family(&spec, 0.01).unwrap();
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::ValueAtZero { .. })));
    }

    #[test]
    fn validate_contract() {
        assert!(validate_family(&PotentialSpec::overlap(), 0.2).is_err());
        assert!(validate_family(&PotentialSpec::overlap(), 0.0).is_err());
    }

    #[test]
    fn periodize_examples() {
        let p = PotentialSpec::overlap().periodize(3).unwrap();
        assert!((p.evaluate(2.6) - 0.6).abs() < 1e-15);
        assert_eq!(p.evaluate(1.5), 0.0);
        let s = PotentialSpec::step().periodize(2).unwrap();
        assert_eq!(s.evaluate(1.2), 1.0);
        assert!(PotentialSpec::overlap().periodize(1).is_err());
    }

    #[test]
    fn periodized_is_periodic() {
        let p = PotentialSpec::power_law(1.5).unwrap().periodize(4).unwrap();
        for i in 0..40 {
            let x = -5.0 + 0.26 * i as f64;
            assert!((p.evaluate(x) - p.evaluate(x + 4.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn fourier_overlap_closed_form() {
        let spec = PotentialSpec::overlap();
        assert!((spec.fourier_transform(0.0) - 1.0).abs() <= 1e-9);
        assert!(spec.fourier_transform(2.0 * std::f64::consts::PI).abs() <= 1e-9);
        let pi = std::f64::consts::PI;
        assert!((spec.fourier_transform(pi) - 4.0 / (pi * pi)).abs() <= 1e-9);
        let mut k = 0.1;
        while k <= 20.0 {
            assert!(
                (spec.fourier_transform(k) - overlap_hat(k)).abs() <= 1e-9,
                "k = {k}"
            );
            k += 0.1;
        }
    }

    #[test]
    fn fourier_step_at_zero() {
        assert!((PotentialSpec::step().fourier_transform(0.0) - 2.0).abs() <= 1e-9);
        // Closed form for the step is 2 sin(k)/k.
        for &k in &[0.7f64, 3.0, 11.5] {
            let expect = 2.0 * k.sin() / k;
            assert!((PotentialSpec::step().fourier_transform(k) - expect).abs() <= 1e-9);
        }
    }

    #[test]
    fn strictness_flags() {
        assert!(!PotentialSpec::overlap().strict_above_chord());
        assert!(PotentialSpec::step().strict_above_chord());
        assert!(PotentialSpec::power_law(2.0).unwrap().strict_above_chord());
        assert!(!PotentialSpec::power_law(1.0).unwrap().strict_above_chord());
    }

    #[test]
    fn json_round_trip() {
        let spec = PotentialSpec::power_law(1.5).unwrap();
        let json = serde_json::to_string(&spec).unwrap();
        let back: PotentialSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(spec, back);
        let err = serde_json::from_str::<PotentialSpec>(r#"{"kind":"power_law"}"#);
        assert!(err.is_err());
    }
}
