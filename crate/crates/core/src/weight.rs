//! Radial weight profiles `F(z) = e^{iθ} ρ(|z − z₀|)` on `ℝ^{2d}`.
//!
//! Most consumers work in the area variable `s = π r²`, in which the Gaussian
//! profiles become plain exponentials and the optimal profile is `ψ(s)`
//! itself. `g(s) = ρ(√(s/π))` is exposed as [`RadialWeight::value_at_area`].

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{require, Error, Result};
use crate::solver::VariationalSolution;
use crate::special::factorial;

/// Where a tabulated profile came from, so consumers can re-evaluate exactly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProfileMeta {
    Multipliers {
        lambda1: f64,
        lambda2: f64,
        #[serde(rename = "T")]
        t_end: f64,
    },
    Gaussian {
        amplitude: f64,
        decay: f64,
    },
}

/// Samples `(r_i, F_i)`, linearly interpolated in `r` and zero past the last node.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub r: Vec<f64>,
    pub f: Vec<f64>,
    pub meta: Option<ProfileMeta>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Profile {
    /// `amplitude · exp(−π r² / decay)`.
    Gaussian { amplitude: f64, decay: f64 },
    /// `ψ(π r²)` for a solved intermediate-regime instance.
    OptimalPsi(Box<VariationalSolution>),
    Tabulated(Table),
    /// `height` on the closed ball of radius `radius`, zero outside.
    Disk { radius: f64, height: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadialWeight {
    pub profile: Profile,
    /// Half the phase-space dimension.
    pub dim: u32,
    /// Centre `z₀ ∈ ℝ^{2d}`.
    pub center: Vec<f64>,
    /// Phase `θ`; only `|F|` enters any computation here.
    pub phase: f64,
}

impl RadialWeight {
    fn centered(profile: Profile, dim: u32) -> Self {
        Self {
            profile,
            dim,
            center: vec![0.0; 2 * dim as usize],
            phase: 0.0,
        }
    }

    pub fn gaussian(amplitude: f64, decay: f64, dim: u32) -> Result<Self> {
        require(amplitude >= 0.0 && amplitude.is_finite(), "amplitude", amplitude, "must be nonnegative")?;
        require(decay > 0.0 && decay.is_finite(), "decay", decay, "must be positive")?;
        require(dim >= 1, "d", f64::from(dim), "must be at least 1")?;
        Ok(Self::centered(Profile::Gaussian { amplitude, decay }, dim))
    }

    pub fn optimal(solution: VariationalSolution) -> Self {
        let dim = solution.params.d;
        Self::centered(Profile::OptimalPsi(Box::new(solution)), dim)
    }

    pub fn disk(radius: f64, height: f64, dim: u32) -> Result<Self> {
        require(radius >= 0.0 && radius.is_finite(), "radius", radius, "must be nonnegative")?;
        require(height >= 0.0 && height.is_finite(), "height", height, "must be nonnegative")?;
        require(dim >= 1, "d", f64::from(dim), "must be at least 1")?;
        Ok(Self::centered(Profile::Disk { radius, height }, dim))
    }

    /// Tabulated profile; `r` must start at 0 and increase strictly.
    pub fn tabulated(r: Vec<f64>, f: Vec<f64>, meta: Option<ProfileMeta>, dim: u32) -> Result<Self> {
        if r.len() != f.len() || r.len() < 2 {
            return Err(Error::InvalidArgument(format!(
                "table needs matching columns of length ≥ 2 (got {} and {})",
                r.len(),
                f.len()
            )));
        }
        require(r[0] == 0.0, "r[0]", r[0], "table must start at r = 0")?;
        if r.windows(2).any(|w| w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater) || !w[1].is_finite()) {
            return Err(Error::InvalidArgument("table radii must increase strictly".into()));
        }
        if let Some((index, &value)) = f.iter().enumerate().find(|(_, v)| !(**v >= 0.0 && v.is_finite())) {
            return Err(Error::NegativeSample { index, value });
        }
        require(dim >= 1, "d", f64::from(dim), "must be at least 1")?;
        Ok(Self::centered(Profile::Tabulated(Table { r, f, meta }), dim))
    }

    pub fn with_center(mut self, center: Vec<f64>) -> Result<Self> {
        if center.len() != 2 * self.dim as usize {
            return Err(Error::InvalidArgument(format!(
                "centre must have {} coordinates",
                2 * self.dim
            )));
        }
        self.center = center;
        Ok(self)
    }

    /// `ρ(r)`.
    pub fn value_at_radius(&self, r: f64) -> f64 {
        let r = r.abs();
        match &self.profile {
            Profile::Gaussian { amplitude, decay } => amplitude * (-PI * r * r / decay).exp(),
            Profile::OptimalPsi(sol) => sol.psi(PI * r * r).unwrap_or(0.0),
            Profile::Tabulated(t) => t.interpolate(r),
            Profile::Disk { radius, height } => {
                if r <= *radius {
                    *height
                } else {
                    0.0
                }
            }
        }
    }

    /// `g(s) = ρ(√(s/π))`, the profile in the area variable.
    pub fn value_at_area(&self, s: f64) -> f64 {
        match &self.profile {
            Profile::Gaussian { amplitude, decay } => amplitude * (-s / decay).exp(),
            Profile::OptimalPsi(sol) => sol.psi(s.max(0.0)).unwrap_or(0.0),
            _ => self.value_at_radius((s.max(0.0) / PI).sqrt()),
        }
    }

    /// `|F(z)|` for a point of `ℝ^{2d}`.
    pub fn value_at(&self, z: &[f64]) -> f64 {
        let r2: f64 = z.iter().zip(&self.center).map(|(a, b)| (a - b) * (a - b)).sum();
        self.value_at_radius(r2.sqrt())
    }

    /// Area coordinates where `g` is not smooth (always includes 0).
    pub fn area_breakpoints(&self) -> Vec<f64> {
        let mut pts = vec![0.0];
        match &self.profile {
            Profile::Tabulated(t) => pts.extend(t.r.iter().skip(1).map(|r| PI * r * r)),
            Profile::Disk { radius, .. } => pts.push(PI * radius * radius),
            _ => {}
        }
        pts
    }

    /// Finite support end in the area variable, if any.
    pub fn area_support(&self) -> Option<f64> {
        match &self.profile {
            Profile::Tabulated(t) => t.r.last().map(|r| PI * r * r),
            Profile::Disk { radius, .. } => Some(PI * radius * radius),
            _ => None,
        }
    }

    pub fn is_nonincreasing(&self) -> bool {
        match &self.profile {
            Profile::Tabulated(t) => t.f.windows(2).all(|w| w[1] <= w[0]),
            _ => true,
        }
    }

    /// `sup ρ`.
    pub fn peak(&self) -> f64 {
        match &self.profile {
            Profile::Gaussian { amplitude, .. } => *amplitude,
            Profile::OptimalPsi(sol) => sol.t_end,
            Profile::Tabulated(t) => t.f.iter().copied().fold(0.0, f64::max),
            Profile::Disk { height, .. } => *height,
        }
    }

    /// Levels `t` where the distribution function is not smooth.
    pub fn level_breakpoints(&self) -> Vec<f64> {
        let mut pts = vec![0.0, self.peak()];
        if let Profile::Tabulated(t) = &self.profile {
            pts.extend(t.f.iter().copied());
        }
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }

    /// Lebesgue measure in `ℝ^{2d}` of `{|F| > t}`, for `t > 0`.
    pub fn superlevel_measure(&self, t: f64) -> f64 {
        let ball = |s: f64| ball_volume_from_area(s, self.dim);
        if t <= 0.0 {
            return f64::INFINITY;
        }
        match &self.profile {
            Profile::Gaussian { amplitude, decay } => {
                if t >= *amplitude {
                    0.0
                } else {
                    ball(decay * (amplitude / t).ln())
                }
            }
            Profile::OptimalPsi(sol) => {
                if t >= sol.t_end {
                    0.0
                } else {
                    ball(sol.kernel().log_minus_s(t))
                }
            }
            Profile::Disk { radius, height } => {
                if t >= *height {
                    0.0
                } else {
                    ball(PI * radius * radius)
                }
            }
            Profile::Tabulated(table) => table
                .superlevel_intervals(t)
                .map(|(r0, r1)| ball(PI * r1 * r1) - ball(PI * r0 * r0))
                .sum(),
        }
    }
}

/// Volume of the `2d`-ball whose 2-D cross-section area is `s = π r²`:
/// `(π r²)^d / d!`.
pub fn ball_volume_from_area(s: f64, d: u32) -> f64 {
    if d == 1 {
        s
    } else {
        s.powi(d as i32) / factorial(d)
    }
}

impl Table {
    fn interpolate(&self, r: f64) -> f64 {
        let last = self.r.len() - 1;
        if r > self.r[last] {
            return 0.0;
        }
        // first index with r_i > r
        let i = self.r.partition_point(|&ri| ri <= r);
        if i == 0 {
            return self.f[0];
        }
        if i > last {
            return self.f[last];
        }
        let (r0, r1, f0, f1) = (self.r[i - 1], self.r[i], self.f[i - 1], self.f[i]);
        let w = (r - r0) / (r1 - r0);
        (1.0 - w) * f0 + w * f1
    }

    /// Radial intervals on which the interpolant exceeds `t`.
    fn superlevel_intervals(&self, t: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.r.windows(2).zip(self.f.windows(2)).filter_map(move |(r, f)| {
            let (r0, r1, f0, f1) = (r[0], r[1], f[0], f[1]);
            match (f0 > t, f1 > t) {
                (true, true) => Some((r0, r1)),
                (false, false) => None,
                (true, false) => Some((r0, r0 + (r1 - r0) * (f0 - t) / (f0 - f1))),
                (false, true) => Some((r0 + (r1 - r0) * (t - f0) / (f1 - f0), r1)),
            }
        })
    }
}
