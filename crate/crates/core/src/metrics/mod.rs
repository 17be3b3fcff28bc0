//! Closed-form and supremum-based metrics on canonical domains.

mod closed;
mod quasi;
mod sector;
mod sup;
mod transform;

use std::fmt;
use std::str::FromStr;

pub use closed::{
    distance_ratio_j, distance_ratio_jtilde, m_ball, m_ball_radial_violation, m_ball_violation,
    quasihyperbolic_punctured, rho_ball, rho_halfspace, RadialViolation,
};
pub use quasi::{quasihyperbolic, quasihyperbolic_with};
pub use sup::{
    apollonian, apollonian_bracket, apollonian_search, seittenranta_bracket, seittenranta_delta,
    seittenranta_search, SupResult, SupSearch, SupSearchConfig,
};
pub use transform::{
    cube_sampler, metric_transform, quasi_constant_check, MetricTransform, QuasiTriangleCheck,
};

use crate::domain::DomainSpec;
use crate::error::{GeomError, Result};
use crate::geodesics::{Bracket, GeodesicConfig};
use crate::mobius::{chordal_distance, ExtendedPoint};
use crate::point;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MetricKind {
    Hyperbolic,
    Quasihyperbolic,
    DistanceRatio,
    DistanceRatioTilde,
    Apollonian,
    Seittenranta,
    Chordal,
    Euclidean,
    MBall,
}

impl MetricKind {
    pub const ALL: [MetricKind; 9] = [
        MetricKind::Hyperbolic,
        MetricKind::Quasihyperbolic,
        MetricKind::DistanceRatio,
        MetricKind::DistanceRatioTilde,
        MetricKind::Apollonian,
        MetricKind::Seittenranta,
        MetricKind::Chordal,
        MetricKind::Euclidean,
        MetricKind::MBall,
    ];

    pub fn short_name(&self) -> &'static str {
        match self {
            MetricKind::Hyperbolic => "rho",
            MetricKind::Quasihyperbolic => "k",
            MetricKind::DistanceRatio => "j",
            MetricKind::DistanceRatioTilde => "jtilde",
            MetricKind::Apollonian => "alpha",
            MetricKind::Seittenranta => "delta",
            MetricKind::Chordal => "q",
            MetricKind::Euclidean => "euclid",
            MetricKind::MBall => "m",
        }
    }

    pub fn supports(&self, g: &DomainSpec) -> bool {
        match self {
            MetricKind::Hyperbolic => {
                matches!(g, DomainSpec::UnitBall(_) | DomainSpec::HalfSpace(_))
            }
            MetricKind::MBall => matches!(g, DomainSpec::UnitBall(_)),
            _ => true,
        }
    }

    /// Whether values are always exact (as opposed to brackets).
    pub fn is_closed_form_on(&self, g: &DomainSpec) -> bool {
        match self {
            MetricKind::Quasihyperbolic => {
                matches!(g, DomainSpec::PuncturedSpace(_) | DomainSpec::HalfSpace(_))
            }
            MetricKind::Apollonian | MetricKind::Seittenranta => matches!(
                g,
                DomainSpec::UnitBall(_) | DomainSpec::HalfSpace(_) | DomainSpec::PuncturedSpace(_)
            ),
            _ => true,
        }
    }
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for MetricKind {
    type Err = GeomError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let alias = match s {
            "hyperbolic" => "rho",
            "quasihyperbolic" => "k",
            "apollonian" => "alpha",
            "seittenranta" => "delta",
            "chordal" => "q",
            "euclidean" => "euclid",
            other => other,
        };
        MetricKind::ALL
            .into_iter()
            .find(|k| k.short_name() == alias)
            .ok_or_else(|| GeomError::Parse(format!("unknown metric {s:?}")))
    }
}

/// Numeric settings shared by metric evaluations.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EvalConfig {
    pub sup: SupSearchConfig,
    pub geodesic: GeodesicConfig,
}

/// Distance between `x` and `y` in `g` as a bracket; exact metrics return a
/// degenerate bracket.
pub fn evaluate(
    kind: MetricKind,
    g: &DomainSpec,
    x: &[f64],
    y: &[f64],
    cfg: &EvalConfig,
) -> Result<Bracket> {
    if !kind.supports(g) {
        return Err(GeomError::Unsupported(format!("metric {kind} is not defined on {g}")));
    }
    for p in [x, y] {
        point::check_dims(g.dim(), p)?;
        if !g.contains(p) {
            return Err(g.outside(p));
        }
    }
    match kind {
        MetricKind::Hyperbolic => match g {
            DomainSpec::UnitBall(_) => rho_ball(x, y).map(Bracket::exact),
            _ => rho_halfspace(x, y).map(Bracket::exact),
        },
        MetricKind::Quasihyperbolic => quasihyperbolic_with(g, x, y, &cfg.geodesic),
        MetricKind::DistanceRatio => distance_ratio_j(g, x, y).map(Bracket::exact),
        MetricKind::DistanceRatioTilde => distance_ratio_jtilde(g, x, y).map(Bracket::exact),
        MetricKind::Apollonian => apollonian_bracket(g, x, y, &cfg.sup),
        MetricKind::Seittenranta => seittenranta_bracket(g, x, y, &cfg.sup),
        MetricKind::Chordal => chordal_distance(
            &ExtendedPoint::Finite(x.to_vec()),
            &ExtendedPoint::Finite(y.to_vec()),
        )
        .map(Bracket::exact),
        MetricKind::Euclidean => Ok(Bracket::exact(point::dist(x, y))),
        MetricKind::MBall => m_ball(x, y).map(Bracket::exact),
    }
}

/// Repeated evaluations of one metric on one domain; sup-based metrics
/// keep a single boundary sample.
#[derive(Debug, Clone)]
pub struct Evaluator {
    kind: MetricKind,
    domain: DomainSpec,
    cfg: EvalConfig,
    sup: Option<SupSearch>,
}

impl Evaluator {
    pub fn new(kind: MetricKind, g: &DomainSpec, cfg: &EvalConfig) -> Result<Self> {
        if !kind.supports(g) {
            return Err(GeomError::Unsupported(format!("metric {kind} is not defined on {g}")));
        }
        let needs_sup = matches!(kind, MetricKind::Apollonian | MetricKind::Seittenranta)
            && !kind.is_closed_form_on(g)
            && !matches!(g, DomainSpec::Sector(s) if s.angle() == std::f64::consts::PI);
        let sup = if needs_sup {
            Some(SupSearch::new(g, cfg.sup)?)
        } else {
            None
        };
        Ok(Self {
            kind,
            domain: g.clone(),
            cfg: cfg.clone(),
            sup,
        })
    }

    pub fn kind(&self) -> MetricKind {
        self.kind
    }

    pub fn domain(&self) -> &DomainSpec {
        &self.domain
    }

    pub fn bracket(&self, x: &[f64], y: &[f64]) -> Result<Bracket> {
        let Some(sup) = &self.sup else {
            return evaluate(self.kind, &self.domain, x, y, &self.cfg);
        };
        if self.kind == MetricKind::Apollonian {
            let lower = sup.apollonian(x, y)?.value;
            let upper = 2.0 * distance_ratio_j(&self.domain, x, y)?;
            Ok(Bracket { lower, upper: upper.max(lower) })
        } else {
            let lower = sup.seittenranta(x, y)?.value;
            let upper = distance_ratio_jtilde(&self.domain, x, y)?;
            Ok(Bracket { lower, upper: upper.max(lower) })
        }
    }

    /// Point estimate: the realized path length for `k`, the search value
    /// for sup-based metrics, the value itself otherwise.
    pub fn value(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        let b = self.bracket(x, y)?;
        Ok(match self.kind {
            MetricKind::Quasihyperbolic => b.upper,
            _ => b.lower,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for k in MetricKind::ALL {
            assert_eq!(k.short_name().parse::<MetricKind>().unwrap(), k);
        }
        assert!("kappa".parse::<MetricKind>().is_err());
    }

    #[test]
    fn validity_rules() {
        let p = DomainSpec::punctured_space(2).unwrap();
        let cfg = EvalConfig::default();
        assert!(matches!(
            evaluate(MetricKind::Hyperbolic, &p, &[1.0, 0.0], &[0.0, 1.0], &cfg),
            Err(GeomError::Unsupported(_))
        ));
        let h = DomainSpec::half_space(2).unwrap();
        assert!(evaluate(MetricKind::MBall, &h, &[0.0, 1.0], &[0.0, 2.0], &cfg).is_err());
        let v = evaluate(MetricKind::Quasihyperbolic, &p, &[1.0, 0.0], &[0.0, 1.0], &cfg).unwrap();
        assert!(v.is_exact());
    }
}
