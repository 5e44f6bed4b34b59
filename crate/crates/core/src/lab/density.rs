use crate::rational::Rational;

use super::UnaryLanguage;

/// Membership ratio `|{k ≤ N : aᵏ ∈ L}| / (N + 1)` at one horizon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityPoint {
    pub horizon: u64,
    pub members: u64,
    pub density: Rational,
    /// Minimum of `density` over this and all earlier grid horizons.
    pub running_min: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityReport {
    /// Horizons 10, 100, … below `N`, then `N` itself.
    pub trajectory: Vec<DensityPoint>,
}

impl DensityReport {
    pub fn last(&self) -> &DensityPoint {
        self.trajectory.last().expect("trajectory is never empty")
    }

    /// The ratio at the final horizon.
    pub fn density(&self) -> &Rational {
        &self.last().density
    }

    /// The running minimum at the final horizon, standing in for the liminf.
    pub fn lower_estimate(&self) -> &Rational {
        &self.last().running_min
    }
}

fn grid(horizon: u64) -> Vec<u64> {
    let mut points: Vec<u64> = std::iter::successors(Some(10u64), |h| h.checked_mul(10))
        .take_while(|&h| h < horizon)
        .collect();
    points.push(horizon);
    points
}

pub fn lower_density(lang: &UnaryLanguage, horizon: u64) -> DensityReport {
    let members = lang.members_up_to(horizon);
    let mut trajectory: Vec<DensityPoint> = Vec::new();
    let mut seen = 0usize;
    for h in grid(horizon) {
        while seen < members.len() && members[seen] <= h {
            seen += 1;
        }
        let density = Rational::new((seen as u64).into(), (h + 1).into());
        let running_min = match trajectory.last() {
            Some(prev) if prev.running_min < density => prev.running_min.clone(),
            _ => density.clone(),
        };
        trajectory.push(DensityPoint { horizon: h, members: seen as u64, density, running_min });
    }
    DensityReport { trajectory }
}
