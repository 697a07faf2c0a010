//! Particle configurations on intervals and rings, the tower-lattice
//! constructors, and the degenerate-family sampler for the overlap potential.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Interval [0, n] or ring [0, L) of integer length L = n + 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    Interval { n: u32 },
    Ring { length: u32 },
}

impl Domain {
    pub fn interval(n: u32) -> Domain {
        Domain::Interval { n }
    }

    pub fn ring(length: u32) -> Result<Domain> {
        if length < 2 {
            return Err(Error::UnsupportedPeriod(length as i64));
        }
        Ok(Domain::Ring { length })
    }

    /// Length of the coordinate span: n for the interval, L for the ring.
    pub fn span(&self) -> f64 {
        match self {
            Domain::Interval { n } => *n as f64,
            Domain::Ring { length } => *length as f64,
        }
    }

    pub fn is_ring(&self) -> bool {
        matches!(self, Domain::Ring { .. })
    }

    /// Number of integer sites: n + 1 in both cases.
    pub fn site_count(&self) -> u32 {
        match self {
            Domain::Interval { n } => n + 1,
            Domain::Ring { length } => *length,
        }
    }
}

/// Finite sorted multiset of particle coordinates on a domain. Coinciding
/// points are multiply counted.
#[derive(Debug, Clone, PartialEq)]
pub struct Configuration {
    positions: Vec<f64>,
    domain: Domain,
}

impl Configuration {
    /// Sorts the coordinates; ring coordinates are wrapped canonically into
    /// [0, L) first. Interval coordinates must already lie in [0, n].
    pub fn new(mut positions: Vec<f64>, domain: Domain) -> Result<Configuration> {
        if positions.is_empty() {
            return Err(Error::Contract("configuration needs N >= 1 particles".into()));
        }
        if positions.iter().any(|x| !x.is_finite()) {
            return Err(Error::Contract("non-finite coordinate".into()));
        }
        match domain {
            Domain::Interval { n } => {
                let hi = n as f64;
                if positions.iter().any(|&x| x < 0.0 || x > hi) {
                    return Err(Error::Domain(format!(
                        "coordinate outside interval [0, {n}]"
                    )));
                }
            }
            Domain::Ring { length } => {
                let l = length as f64;
                for x in &mut positions {
                    *x = x.rem_euclid(l);
                }
            }
        }
        positions.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(Configuration { positions, domain })
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Reinterprets an interval configuration on the ring of length n + 1.
    pub fn on_ring(&self) -> Result<Configuration> {
        match self.domain {
            Domain::Ring { .. } => Ok(self.clone()),
            Domain::Interval { n } => {
                Configuration::new(self.positions.clone(), Domain::ring(n + 1)?)
            }
        }
    }
}

// JSON shape: {"domain": {"kind": "interval"|"ring", "n": int}, "positions": [..]}.
// For rings the field n is the interval label, so L = n + 1.
#[derive(Serialize, Deserialize)]
struct DomainRepr {
    kind: String,
    n: u32,
}

#[derive(Serialize, Deserialize)]
struct ConfigRepr {
    domain: DomainRepr,
    positions: Vec<f64>,
}

impl Serialize for Configuration {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let domain = match self.domain {
            Domain::Interval { n } => DomainRepr {
                kind: "interval".into(),
                n,
            },
            Domain::Ring { length } => DomainRepr {
                kind: "ring".into(),
                n: length - 1,
            },
        };
        ConfigRepr {
            domain,
            positions: self.positions.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Configuration {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as DeError;
        let repr = ConfigRepr::deserialize(deserializer)?;
        let domain = match repr.domain.kind.as_str() {
            "interval" => Domain::interval(repr.domain.n),
            "ring" => Domain::ring(repr.domain.n + 1).map_err(D::Error::custom)?,
            other => {
                return Err(D::Error::custom(format!(
                    "unknown domain kind \"{other}\" (field \"domain.kind\")"
                )))
            }
        };
        Configuration::new(repr.positions, domain).map_err(D::Error::custom)
    }
}

/// Occupancy of each integer site of a tower lattice.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerProfile {
    pub heights: Vec<u32>,
}

impl TowerProfile {
    pub fn new(heights: Vec<u32>) -> TowerProfile {
        TowerProfile { heights }
    }

    /// Valid ground-state profile at lower density >= 1: every site occupied
    /// and heights differing by at most one.
    pub fn is_ground_state_profile(&self) -> bool {
        let min = self.heights.iter().min().copied().unwrap_or(0);
        let max = self.heights.iter().max().copied().unwrap_or(0);
        min >= 1 && max - min <= 1
    }

    pub fn particle_count(&self) -> u64 {
        self.heights.iter().map(|&h| h as u64).sum()
    }
}

/// Mean site occupancy: particles per unit length of the periodic extension.
pub fn density_of(profile: &TowerProfile) -> f64 {
    assert!(!profile.heights.is_empty(), "empty profile");
    profile.particle_count() as f64 / profile.heights.len() as f64
}

/// Unique split N = m(n+1) + r with m >= 1 and 0 <= r <= n.
pub fn decompose_n(n_particles: u64, n: u32) -> Result<(u64, u64)> {
    let sites = n as u64 + 1;
    if n_particles < sites {
        return Err(Error::DensityBelowOne { n, n_particles });
    }
    Ok((n_particles / sites, n_particles % sites))
}

/// Builds the tower configuration with m + 1 particles at each tall site and
/// m at every other integer site of [0, n]; N = m(n+1) + |tall_sites|.
pub fn build_tower_config(n: u32, m: u32, tall_sites: &[u32]) -> Result<Configuration> {
    if m == 0 {
        return Err(Error::Contract("tower height m must be positive".into()));
    }
    if tall_sites.iter().any(|&s| s > n) {
        return Err(Error::Domain(format!("tall site outside {{0,...,{n}}}")));
    }
    if tall_sites.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain("tall sites must be a sorted set".into()));
    }
    let mut positions = Vec::with_capacity(((n as usize) + 1) * (m as usize) + tall_sites.len());
    for site in 0..=n {
        let height = if tall_sites.binary_search(&site).is_ok() {
            m + 1
        } else {
            m
        };
        for _ in 0..height {
            positions.push(site as f64);
        }
    }
    Configuration::new(positions, Domain::interval(n))
}

/// Snap-classifies a configuration: if every coordinate is within
/// `snap_tolerance` of an integer site, returns the occupancy profile,
/// otherwise None ("not a tower lattice").
pub fn profile_of(config: &Configuration, snap_tolerance: f64) -> Option<TowerProfile> {
    let sites = config.domain().site_count() as usize;
    let mut heights = vec![0u32; sites];
    for &x in config.positions() {
        let nearest = x.round();
        if (x - nearest).abs() > snap_tolerance {
            return None;
        }
        let site = match config.domain() {
            Domain::Interval { .. } => nearest as usize,
            Domain::Ring { length } => (nearest as i64).rem_euclid(length as i64) as usize,
        };
        heights[site] += 1;
    }
    Some(TowerProfile::new(heights))
}

/// Samples a degenerate overlap-potential ground state on Ring(n+1): m
/// particles per unit cell at the given offsets, optionally superposed with
/// an extra spread family Y whose consecutive ring gaps are all >= 1,
/// generated deterministically from the seed.
pub fn sample_overlap_degenerate(
    n: u32,
    m: u32,
    offsets: &[f64],
    extra_spread: bool,
    seed: u64,
) -> Result<Configuration> {
    if m as usize != offsets.len() {
        return Err(Error::Contract(format!(
            "expected m = {m} offsets, got {}",
            offsets.len()
        )));
    }
    if offsets.iter().any(|&x| !(0.0..1.0).contains(&x)) {
        return Err(Error::Domain("offset outside [0, 1)".into()));
    }
    if offsets.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Domain("offsets must be sorted".into()));
    }
    let length = n + 1;
    let domain = Domain::ring(length)?;
    let mut positions = Vec::new();
    for cell in 0..length {
        for &off in offsets {
            positions.push(cell as f64 + off);
        }
    }
    if extra_spread {
        positions.extend(spread_family(length, seed));
    }
    Configuration::new(positions, domain)
}

/// Points on the ring whose consecutive gaps (including the wraparound gap)
/// are all >= 1. With k points on a ring of circumference L this needs
/// k <= L; the slack L - k is split randomly among the gaps.
fn spread_family(length: u32, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let l = length as f64;
    let count = rng.gen_range(1..=length) as usize;
    let mut slack: Vec<f64> = (0..count).map(|_| rng.gen::<f64>()).collect();
    let total: f64 = slack.iter().sum();
    let budget = l - count as f64;
    for s in &mut slack {
        *s *= budget / total.max(f64::MIN_POSITIVE);
    }
    let start: f64 = rng.gen::<f64>() * l;
    let mut points = Vec::with_capacity(count);
    let mut x = start;
    for s in slack {
        points.push(x.rem_euclid(l));
        x += 1.0 + s;
    }
    points
}
