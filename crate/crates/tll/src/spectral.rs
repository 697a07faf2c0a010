//! The quadratic functional I[mu] over positive measures of total weight
//! n + 1 on the ring, in real-space and Fourier form, and the Monte-Carlo
//! minimality scan around mu_0 = sum_j delta_j with I[mu_0] = 1/2.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potential::{Kind, PotentialSpec};

/// Nonnegative atomic measure on [0, L) of total weight L.
#[derive(Debug, Clone, PartialEq)]
pub struct Measure {
    atoms: Vec<(f64, f64)>,
    period: u32,
}

impl Measure {
    pub fn new(atoms: Vec<(f64, f64)>, period: u32) -> Result<Measure> {
        if period < 2 {
            return Err(Error::InvalidMeasure(format!(
                "period {period} must be >= 2"
            )));
        }
        if atoms.is_empty() {
            return Err(Error::InvalidMeasure("measure needs at least one atom".into()));
        }
        let l = period as f64;
        for &(x, w) in &atoms {
            if !x.is_finite() || !(0.0..l).contains(&x) {
                return Err(Error::InvalidMeasure(format!(
                    "atom position {x} outside [0, {l})"
                )));
            }
            if !(w > 0.0) || !w.is_finite() {
                return Err(Error::InvalidMeasure(format!("atom weight {w} must be > 0")));
            }
        }
        let total: f64 = atoms.iter().map(|&(_, w)| w).sum();
        if (total - l).abs() > 1e-9 {
            return Err(Error::InvalidMeasure(format!(
                "total weight {total} != period {l}"
            )));
        }
        Ok(Measure { atoms, period })
    }

    /// mu_0: unit-weight atom on every integer site.
    pub fn lattice(period: u32) -> Result<Measure> {
        Measure::new((0..period).map(|j| (j as f64, 1.0)).collect(), period)
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn period(&self) -> u32 {
        self.period
    }

    /// mu^(k) = (1/L) sum_a w_a e^{-ik x_a}, returned as (re, im).
    pub fn fourier(&self, k: f64) -> (f64, f64) {
        let inv = 1.0 / self.period as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        for &(x, w) in &self.atoms {
            re += w * (k * x).cos();
            im -= w * (k * x).sin();
        }
        (re * inv, im * inv)
    }
}

// JSON {"L": int, "atoms": [[x, w]]}
#[derive(Serialize, Deserialize)]
struct MeasureRepr {
    #[serde(rename = "L")]
    l: u32,
    atoms: Vec<(f64, f64)>,
}

impl Serialize for Measure {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        MeasureRepr {
            l: self.period,
            atoms: self.atoms.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Measure {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as DeError;
        let repr = MeasureRepr::deserialize(deserializer)?;
        Measure::new(repr.atoms, repr.l).map_err(D::Error::custom)
    }
}

/// I[mu] = (1/(2L)) sum_{a,b} w_a w_b u_Lambda(x_a - x_b), double sum
/// including the diagonal (the integral form counts self-pairs).
pub fn functional_real(mu: &Measure, potential: &PotentialSpec) -> Result<f64> {
    let periodized = potential.periodize(mu.period() as i64)?;
    let atoms = mu.atoms();
    let mut sum = 0.0;
    for &(xa, wa) in atoms {
        for &(xb, wb) in atoms {
            sum += wa * wb * periodized.evaluate(xa - xb);
        }
    }
    Ok(sum / (2.0 * mu.period() as f64))
}

/// Precomputed u^(2 pi j / L) for j = 0..=cutoff, reusable across measures
/// sharing the same ring length.
pub struct UhatTable {
    values: Vec<f64>,
    period: u32,
    envelope_amplitude: Option<f64>,
}

impl UhatTable {
    pub fn build(potential: &PotentialSpec, period: u32, cutoff: u32) -> Result<UhatTable> {
        if period < 2 {
            return Err(Error::UnsupportedPeriod(period as i64));
        }
        if cutoff < 1 {
            return Err(Error::Contract("mode cutoff must be >= 1".into()));
        }
        let l = period as f64;
        let values = (0..=cutoff)
            .map(|j| potential.fourier_transform(2.0 * std::f64::consts::PI * j as f64 / l))
            .collect();
        Ok(UhatTable {
            values,
            period,
            envelope_amplitude: envelope_amplitude(potential),
        })
    }

    pub fn cutoff(&self) -> u32 {
        self.values.len() as u32 - 1
    }

    /// Safe bound on the dropped tail: sum_{|j| > cutoff} |u^(k_j)| |mu^|^2
    /// with |mu^| <= 1 and |u^(k)| <= A/k^2, so 2 A L^2 / (4 pi^2) * sum
    /// 1/j^2 < A L^2 / (2 pi^2 cutoff). Infinite when no 1/k^2 envelope
    /// exists (Step and discontinuous tables decay only like 1/k).
    pub fn truncation_estimate(&self) -> f64 {
        match self.envelope_amplitude {
            Some(a) => {
                let l = self.period as f64;
                a * l * l / (2.0 * std::f64::consts::PI.powi(2) * self.cutoff() as f64)
            }
            None => f64::INFINITY,
        }
    }

    /// (1/2) sum_{|j| <= cutoff} u^(2 pi j / L) |mu^(2 pi j / L)|^2.
    pub fn functional(&self, mu: &Measure) -> Result<f64> {
        if mu.period() != self.period {
            return Err(Error::PeriodMismatch {
                config: mu.period() as i64,
                potential: self.period as i64,
            });
        }
        let l = self.period as f64;
        let mut sum = 0.0;
        for (j, &uhat) in self.values.iter().enumerate() {
            let k = 2.0 * std::f64::consts::PI * j as f64 / l;
            let (re, im) = mu.fourier(k);
            let term = uhat * (re * re + im * im);
            // The j = 0 mode appears once; +-j pair up since mu is real.
            sum += if j == 0 { term } else { 2.0 * term };
        }
        Ok(0.5 * sum)
    }
}

/// |u^(k)| <= A / k^2 amplitudes for the members whose transform actually
/// decays quadratically; None otherwise.
fn envelope_amplitude(potential: &PotentialSpec) -> Option<f64> {
    match potential.kind() {
        Kind::Overlap => Some(4.0),
        Kind::PowerLaw { beta } => Some(4.0 * beta),
        Kind::Step => None,
        Kind::Tabulated { samples } => {
            // Piecewise linear and continuous with compact support:
            // |u^(k)| <= (sum of |slope jumps|) / k^2. A jump in the value
            // itself kills the quadratic decay.
            let first = samples[0];
            let last = samples[samples.len() - 1];
            let continuous = (first.0 > -1.0 || first.1 == 0.0)
                && (last.0 < 1.0 || last.1 == 0.0)
                && (first.0 <= -1.0 + 1e-12 || first.1 == 0.0)
                && (last.0 >= 1.0 - 1e-12 || last.1 == 0.0);
            if !continuous {
                return None;
            }
            let mut slopes = vec![0.0];
            for w in samples.windows(2) {
                slopes.push((w[1].1 - w[0].1) / (w[1].0 - w[0].0));
            }
            slopes.push(0.0);
            Some(slopes.windows(2).map(|s| (s[1] - s[0]).abs()).sum())
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KspaceEvaluation {
    pub value: f64,
    pub truncation_estimate: f64,
}

/// Fourier form of I[mu], truncated at |j| <= mode_cutoff, with the tail
/// bound reported alongside.
pub fn functional_kspace(
    mu: &Measure,
    potential: &PotentialSpec,
    mode_cutoff: u32,
) -> Result<KspaceEvaluation> {
    let table = UhatTable::build(potential, mu.period(), mode_cutoff)?;
    Ok(KspaceEvaluation {
        value: table.functional(mu)?,
        truncation_estimate: table.truncation_estimate(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanReport {
    pub samples: u64,
    pub min_value: f64,
    pub mu0_value: f64,
    pub argmin: Measure,
}

/// Evaluates I[mu] over random valid measures plus local perturbations of
/// mu_0; the first sample is always mu_0 itself. For family potentials the
/// minimum observed never dips below 1/2.
pub fn minimality_scan(
    potential: &PotentialSpec,
    period: u32,
    samples: u64,
    seed: u64,
) -> Result<ScanReport> {
    if samples < 1 {
        return Err(Error::Contract("need at least one sample".into()));
    }
    let mu0 = Measure::lattice(period)?;
    let mu0_value = functional_real(&mu0, potential)?;
    let mut min_value = mu0_value;
    let mut argmin = mu0.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 1..samples {
        let mu = if i % 3 == 0 {
            perturbed_lattice(period, &mut rng)
        } else {
            random_measure(period, &mut rng)
        };
        let value = functional_real(&mu, potential)?;
        if value < min_value {
            min_value = value;
            argmin = mu;
        }
    }
    Ok(ScanReport {
        samples,
        min_value,
        mu0_value,
        argmin,
    })
}

fn random_measure(period: u32, rng: &mut ChaCha8Rng) -> Measure {
    let l = period as f64;
    let count = rng.gen_range(1..=3 * period as usize);
    let mut atoms: Vec<(f64, f64)> = (0..count)
        .map(|_| (rng.gen::<f64>() * l, rng.gen::<f64>() + 1e-6))
        .collect();
    normalize(&mut atoms, l);
    Measure::new(atoms, period).expect("random measure is valid")
}

fn perturbed_lattice(period: u32, rng: &mut ChaCha8Rng) -> Measure {
    let l = period as f64;
    let mut atoms: Vec<(f64, f64)> = (0..period)
        .map(|j| {
            let x = (j as f64 + (rng.gen::<f64>() - 0.5) * 0.4).rem_euclid(l);
            let w = 1.0 + (rng.gen::<f64>() - 0.5) * 0.6;
            (x, w)
        })
        .collect();
    normalize(&mut atoms, l);
    Measure::new(atoms, period).expect("perturbed lattice is valid")
}

fn normalize(atoms: &mut [(f64, f64)], l: f64) {
    let total: f64 = atoms.iter().map(|&(_, w)| w).sum();
    for (_, w) in atoms.iter_mut() {
        *w *= l / total;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mu0_is_half_for_all_members() {
        for spec in crate::built_in_potentials() {
            for l in 2..=6u32 {
                let mu0 = Measure::lattice(l).unwrap();
                assert_eq!(functional_real(&mu0, &spec).unwrap(), 0.5);
            }
        }
    }

    #[test]
    fn hand_evaluations() {
        // Single atom of weight L at the origin: (1/6) * 9 * u(0) = 1.5.
        let mu = Measure::new(vec![(0.0, 3.0)], 3).unwrap();
        assert_eq!(functional_real(&mu, &PotentialSpec::overlap()).unwrap(), 1.5);
        // mu_0 on L = 2 under Step: cross terms sit at minimal-image
        // distance 1 where u = 0, leaving (1/4) * 2 * u(0) = 0.5.
        let mu0 = Measure::lattice(2).unwrap();
        assert_eq!(functional_real(&mu0, &PotentialSpec::step()).unwrap(), 0.5);
    }

    #[test]
    fn invalid_measures_rejected() {
        assert!(Measure::new(vec![(0.0, 1.0)], 3).is_err()); // weight != L
        assert!(Measure::new(vec![(3.5, 3.0)], 3).is_err()); // outside period
        assert!(Measure::new(vec![(0.0, -3.0)], 3).is_err()); // negative
    }

    #[test]
    fn kspace_mu0_overlap() {
        let mu0 = Measure::lattice(3).unwrap();
        let eval = functional_kspace(&mu0, &PotentialSpec::overlap(), 500).unwrap();
        assert!((eval.value - 0.5).abs() <= 1e-6, "{}", eval.value);
        assert!(eval.truncation_estimate.is_finite());
    }

    #[test]
    fn kspace_uniform_lattice_l7() {
        let mu = Measure::lattice(7).unwrap();
        let eval = functional_kspace(&mu, &PotentialSpec::overlap(), 700).unwrap();
        assert!((eval.value - 0.5).abs() <= 1e-6);
    }

    #[test]
    fn parseval_cross_check() {
        use rand::SeedableRng;
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let pl2 = PotentialSpec::power_law(2.0).unwrap();
        for l in 2..=5u32 {
            for _ in 0..5 {
                let mu = random_measure(l, &mut rng);
                for spec in [PotentialSpec::overlap(), pl2.clone()] {
                    let real = functional_real(&mu, &spec).unwrap();
                    let eval = functional_kspace(&mu, &spec, 800).unwrap();
                    assert!(
                        (real - eval.value).abs() <= eval.truncation_estimate,
                        "L={l} real={real} kspace={} bound={}",
                        eval.value,
                        eval.truncation_estimate
                    );
                }
            }
        }
    }

    #[test]
    fn domination_by_overlap() {
        use rand::SeedableRng;
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        let overlap = PotentialSpec::overlap();
        for _ in 0..50 {
            let mu = random_measure(4, &mut rng);
            let base = functional_real(&mu, &overlap).unwrap();
            for spec in crate::built_in_potentials() {
                let v = functional_real(&mu, &spec).unwrap();
                assert!(v >= base - 1e-12);
            }
        }
    }

    #[test]
    fn scan_attains_half() {
        let report = minimality_scan(&PotentialSpec::overlap(), 3, 2000, 5).unwrap();
        assert_eq!(report.mu0_value, 0.5);
        assert!(report.min_value >= 0.5 - 1e-9);
        assert_eq!(report.min_value, 0.5);
        // Single forced sample: mu_0 exactly.
        let report = minimality_scan(&PotentialSpec::overlap(), 2, 1, 5).unwrap();
        assert_eq!(report.min_value, 0.5);
    }

    #[test]
    fn measure_json_round_trip() {
        let mu = Measure::new(vec![(0.25, 1.5), (2.0, 1.5)], 3).unwrap();
        let json = serde_json::to_string(&mu).unwrap();
        assert!(json.contains("\"L\":3"));
        let back: Measure = serde_json::from_str(&json).unwrap();
        assert_eq!(mu, back);
    }
}
