//! Homogeneous Poisson deployments of UAVs and their random displacement.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use crate::geometry::Point;
use crate::math::{sqrt, PI, TAU};
use crate::{Error, Result};

/// A bounded sampling window on the ground plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Region {
    Disk { center: Point, radius: f64 },
    Rectangle { min: Point, max: Point },
}

impl Region {
    pub fn disk(center: Point, radius: f64) -> Result<Self> {
        let r = Region::Disk { center, radius };
        r.validate()?;
        Ok(r)
    }

    pub fn rectangle(min: Point, max: Point) -> Result<Self> {
        let r = Region::Rectangle { min, max };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Region::Disk { radius, center } => {
                if !(radius > 0.0 && radius.is_finite()) || !center.x.is_finite() || !center.y.is_finite() {
                    return Err(Error::InvalidArgument("disk radius must be positive and finite"));
                }
            }
            Region::Rectangle { min, max } => {
                if !(max.x > min.x && max.y > min.y) || !(max.x - min.x).is_finite() || !(max.y - min.y).is_finite() {
                    return Err(Error::InvalidArgument("rectangle max must strictly dominate min"));
                }
            }
        }
        Ok(())
    }

    pub fn area(&self) -> f64 {
        match *self {
            Region::Disk { radius, .. } => PI * radius * radius,
            Region::Rectangle { min, max } => (max.x - min.x) * (max.y - min.y),
        }
    }

    pub fn contains(&self, p: Point) -> bool {
        match *self {
            Region::Disk { center, radius } => p.dist2(center) <= radius * radius,
            Region::Rectangle { min, max } => {
                p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y
            }
        }
    }

    /// One point drawn uniformly from the region.
    pub fn sample_uniform<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        match *self {
            Region::Disk { center, radius } => {
                let r = radius * sqrt(rng.gen::<f64>());
                center + Point::polar(r, TAU * rng.gen::<f64>())
            }
            Region::Rectangle { min, max } => Point::new(
                min.x + (max.x - min.x) * rng.gen::<f64>(),
                min.y + (max.y - min.y) * rng.gen::<f64>(),
            ),
        }
    }
}

/// UAV altitudes: one shared height, or one height per UAV.
#[derive(Debug, Clone, PartialEq)]
pub enum Altitude {
    Common(f64),
    PerUav(Vec<f64>),
}

/// A sampled UAV deployment (ground projections plus altitude).
#[derive(Debug, Clone, PartialEq)]
pub struct UavField {
    pub positions: Vec<Point>,
    pub altitude: Altitude,
    /// Intensity the field was drawn with, per square metre.
    pub intensity: f64,
    pub seed: u64,
}

impl UavField {
    pub fn new(positions: Vec<Point>, height: f64, intensity: f64) -> Self {
        UavField {
            positions,
            altitude: Altitude::Common(height),
            intensity,
            seed: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn height_of(&self, i: usize) -> f64 {
        match &self.altitude {
            Altitude::Common(h) => *h,
            Altitude::PerUav(hs) => hs[i],
        }
    }

    /// Mean altitude of the field.
    pub fn height(&self) -> f64 {
        match &self.altitude {
            Altitude::Common(h) => *h,
            Altitude::PerUav(hs) if hs.is_empty() => 0.0,
            Altitude::PerUav(hs) => hs.iter().sum::<f64>() / hs.len() as f64,
        }
    }

    /// Slant distance from UAV `i` to a ground point.
    pub fn slant_distance(&self, i: usize, ue: Point) -> f64 {
        let h = self.height_of(i);
        sqrt(self.positions[i].dist2(ue) + h * h)
    }

    pub fn with_height(mut self, height: f64) -> Self {
        self.altitude = Altitude::Common(height);
        self
    }
}

/// Draws a homogeneous Poisson point process of `intensity` points per square
/// metre on `region`, from a caller-provided random stream.
pub fn sample_ppp_with<R: Rng + ?Sized>(intensity: f64, region: &Region, rng: &mut R) -> Result<Vec<Point>> {
    region.validate()?;
    if !(intensity >= 0.0) || !intensity.is_finite() {
        return Err(Error::InvalidArgument("intensity must be finite and non-negative"));
    }
    let mean = intensity * region.area();
    let count = if mean > 0.0 {
        let poisson = Poisson::new(mean).map_err(|_| Error::InvalidArgument("Poisson mean out of range"))?;
        poisson.sample(rng) as usize
    } else {
        0
    };
    let mut points = Vec::with_capacity(count);
    for _ in 0..count {
        points.push(region.sample_uniform(rng));
    }
    Ok(points)
}

/// Draws a Poisson field with a common UAV `height`. The field is a pure
/// function of `seed`.
pub fn sample_ppp(intensity: f64, region: &Region, height: f64, seed: u64) -> Result<UavField> {
    if !(height > 0.0) {
        return Err(Error::InvalidArgument("UAV height must be positive"));
    }
    let mut rng = seeded_rng(seed);
    let positions = sample_ppp_with(intensity, region, &mut rng)?;
    Ok(UavField {
        positions,
        altitude: Altitude::Common(height),
        intensity,
        seed,
    })
}

/// Moves every UAV for `t` seconds along `(speed, direction)`.
pub fn displace(field: &UavField, velocities: &[(f64, f64)], t: f64) -> Result<UavField> {
    if velocities.len() != field.len() {
        return Err(Error::InvalidArgument("one velocity per UAV is required"));
    }
    if !(t >= 0.0) {
        return Err(Error::InvalidArgument("time must be non-negative"));
    }
    let positions = field
        .positions
        .iter()
        .zip(velocities)
        .map(|(&p, &(v, theta))| p + Point::polar(v * t, theta))
        .collect();
    Ok(UavField {
        positions,
        altitude: field.altitude.clone(),
        intensity: field.intensity,
        seed: field.seed,
    })
}

/// Generator used for every random stream in the crate.
pub type StreamRng = ChaCha8Rng;

/// The deterministic generator for a single root seed.
pub fn seeded_rng(seed: u64) -> StreamRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream for trial `index` of a run rooted at `seed`. Streams
/// depend only on `(seed, index)`, never on scheduling.
pub fn trial_rng(seed: u64, index: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}
