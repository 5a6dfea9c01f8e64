//! Rate-fidelity tradeoffs of the reflection scheme against single-click
//! (SC) and double-click (DC) remote state preparation.
//!
//! The figure of merit is `P/(1−F)`, the success probability bought per
//! unit of infidelity at small `P`.

use serde::{Deserialize, Serialize};

use crate::cavity::{emission_efficiency, reflection_efficiency};
use crate::efficiency::EfficiencyModel;
use crate::error::{check_probability, Error, Result};

/// `P/(1−F)`; `Divergent` when the infidelity vanishes at first order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "lowercase")]
pub enum Merit {
    Finite(f64),
    Divergent,
}

impl Merit {
    fn from_denominator(numerator: f64, denominator: f64) -> Self {
        if denominator <= 0.0 {
            Merit::Divergent
        } else {
            Merit::Finite(numerator / denominator)
        }
    }

    pub fn value(&self) -> Option<f64> {
        match self {
            Merit::Finite(v) => Some(*v),
            Merit::Divergent => None,
        }
    }

    pub fn is_divergent(&self) -> bool {
        matches!(self, Merit::Divergent)
    }

    /// Fidelity reached at success probability `p` along the linear tradeoff.
    pub fn fidelity_at(&self, p: f64) -> f64 {
        match self {
            Merit::Finite(m) => 1.0 - p / m,
            Merit::Divergent => 1.0,
        }
    }
}

impl std::fmt::Display for Merit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Merit::Finite(v) => write!(f, "{v:.16e}"),
            Merit::Divergent => f.write_str("inf"),
        }
    }
}

fn check_emission(eta_s: f64) -> Result<f64> {
    check_probability("eta_s", eta_s)?;
    if eta_s == 0.0 {
        return Err(Error::Divergent("eta_s = 0"));
    }
    Ok(eta_s)
}

/// `F_SC = 1 − (P/8)(1−η_s)/η_s`.
pub fn sc_tradeoff(p_sc: f64, eta_s: f64) -> Result<f64> {
    check_probability("P_SC", p_sc)?;
    let eta_s = check_emission(eta_s)?;
    Ok(1.0 - p_sc / 8.0 * (1.0 - eta_s) / eta_s)
}

/// `F_DC = 1 − (P/2)(1−η_s)/η_s²`.
pub fn dc_tradeoff(p_dc: f64, eta_s: f64) -> Result<f64> {
    check_probability("P_DC", p_dc)?;
    let eta_s = check_emission(eta_s)?;
    Ok(1.0 - p_dc / 2.0 * (1.0 - eta_s) / (eta_s * eta_s))
}

/// `8η_s/(1−η_s)`.
pub fn sc_merit(eta_s: f64) -> Result<Merit> {
    check_probability("eta_s", eta_s)?;
    Ok(Merit::from_denominator(8.0 * eta_s, 1.0 - eta_s))
}

/// `2η_s²/(1−η_s)`.
pub fn dc_merit(eta_s: f64) -> Result<Merit> {
    check_probability("eta_s", eta_s)?;
    Ok(Merit::from_denominator(2.0 * eta_s * eta_s, 1.0 - eta_s))
}

/// Leading-order merit of the single-qubit reflection scheme with a weak
/// coherent pulse, `4/(1/(η_0η_d) − 2η_1/(η_0+η_1))`.
pub fn r_tradeoff_merit(model: &EfficiencyModel) -> Result<Merit> {
    if model.n() != 1 {
        return Err(Error::InvalidParameter {
            name: "n",
            value: model.n() as f64,
            reason: "tradeoff merit is defined for a single qubit",
        });
    }
    let (e0, e1, ed) = (model.eta_0(), model.eta_1(), model.eta_d());
    if e0 * ed == 0.0 {
        return Err(Error::DegenerateEfficiency(
            "eta_0 * eta_d = 0".to_string(),
        ));
    }
    Ok(Merit::from_denominator(
        4.0,
        1.0 / (e0 * ed) - 2.0 * e1 / (e0 + e1),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Protocol {
    #[serde(rename = "R")]
    R,
    #[serde(rename = "SC")]
    SC,
    #[serde(rename = "DC")]
    DC,
    #[serde(rename = "R-intensity")]
    RIntensity,
}

impl Protocol {
    pub fn label(&self) -> &'static str {
        match self {
            Protocol::R => "R",
            Protocol::SC => "SC",
            Protocol::DC => "DC",
            Protocol::RIntensity => "R-intensity",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// Equal loss on every optical path; `η_s = η_0η_d = η_1η_d = η`.
    RoutingLimited,
    /// Lossless routing and detection; all loss from finite cooperativity.
    InterfaceLimited,
}

impl Regime {
    pub fn label(&self) -> &'static str {
        match self {
            Regime::RoutingLimited => "a",
            Regime::InterfaceLimited => "b",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "a" | "routing-limited" => Some(Regime::RoutingLimited),
            "b" | "interface-limited" => Some(Regime::InterfaceLimited),
            _ => None,
        }
    }

    /// Sweep grid: `η` on `[0.01, 0.99]` for (a), `C` log-spaced on
    /// `[1e-2, 1e6]` for (b).
    pub fn default_grid(&self) -> Vec<f64> {
        match self {
            Regime::RoutingLimited => (1..=99).map(|i| i as f64 / 100.0).collect(),
            Regime::InterfaceLimited => (0..=80).map(|i| 10f64.powf(-2.0 + i as f64 / 10.0)).collect(),
        }
    }

    /// `(η_s, single-qubit reflection model)` at one sweep value.
    pub fn operating_point(&self, sweep: f64) -> Result<(f64, EfficiencyModel)> {
        match self {
            Regime::RoutingLimited => {
                check_probability("eta", sweep)?;
                Ok((sweep, EfficiencyModel::new(1.0, sweep, sweep, 1.0, 1)?))
            }
            Regime::InterfaceLimited => {
                let eta_1 = reflection_efficiency(sweep)?;
                Ok((
                    emission_efficiency(sweep)?,
                    EfficiencyModel::new(1.0, 1.0, eta_1, 1.0, 1)?,
                ))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TradeoffPoint {
    pub protocol: Protocol,
    pub regime: Regime,
    /// `η` in regime (a), `C` in regime (b).
    pub sweep_parameter: f64,
    pub merit: Merit,
    /// Reference success probability.
    pub success_probability: f64,
    /// Fidelity at `success_probability`.
    pub fidelity: f64,
}

/// Default reference success probability for reported fidelities.
pub const REFERENCE_SUCCESS_PROBABILITY: f64 = 1e-3;

/// Merit of R, SC and DC at every grid value, in grid order.
pub fn sweep_figure2(
    regime: Regime,
    grid: &[f64],
    reference_p: f64,
) -> Result<Vec<TradeoffPoint>> {
    check_probability("reference_p", reference_p)?;
    let mut points = Vec::with_capacity(3 * grid.len());
    for &sweep in grid {
        let (eta_s, model) = regime.operating_point(sweep)?;
        for (protocol, merit) in [
            (Protocol::R, r_tradeoff_merit(&model)?),
            (Protocol::SC, sc_merit(eta_s)?),
            (Protocol::DC, dc_merit(eta_s)?),
        ] {
            points.push(TradeoffPoint {
                protocol,
                regime,
                sweep_parameter: sweep,
                merit,
                success_probability: reference_p,
                fidelity: merit.fidelity_at(reference_p),
            });
        }
    }
    Ok(points)
}

/// Leading-order success probabilities at one-photon population `|α₁|²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuccessComparison {
    /// `η_tη_d(2η_0η_1/(η_0+η_1))|α₁|²`.
    pub reflection: f64,
    /// `η_tη_1η_d|α₁|²/2`.
    pub reflection_intensity: f64,
    /// `η_tη_dη_s|α₁|²/2`.
    pub double_click: f64,
    /// `2η_tη_d|α₁|²`.
    pub single_click: f64,
}

impl SuccessComparison {
    pub fn get(&self, protocol: Protocol) -> f64 {
        match protocol {
            Protocol::R => self.reflection,
            Protocol::RIntensity => self.reflection_intensity,
            Protocol::DC => self.double_click,
            Protocol::SC => self.single_click,
        }
    }
}

pub fn success_probability_comparison(
    model: &EfficiencyModel,
    eta_s: f64,
    one_photon: f64,
) -> Result<SuccessComparison> {
    check_probability("eta_s", eta_s)?;
    check_probability("one_photon", one_photon)?;
    let single = model.with_n(1)?;
    let td = model.eta_t() * model.eta_d();
    Ok(SuccessComparison {
        reflection: single.ideal_success_probability()? * one_photon,
        reflection_intensity: td * model.eta_1() / 2.0 * one_photon,
        double_click: td * eta_s / 2.0 * one_photon,
        single_click: 2.0 * td * one_photon,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imperfections::{fidelity_estimate, herald_probability, wcp_amplitudes, WcpSource};
    use proptest::prelude::*;

    #[test]
    fn sc_examples() {
        assert_eq!(sc_tradeoff(0.3, 1.0).unwrap(), 1.0);
        assert_eq!(sc_tradeoff(0.0, 0.4).unwrap(), 1.0);
        assert!((sc_tradeoff(0.08, 0.5).unwrap() - 0.99).abs() < 1e-15);
        assert!(matches!(sc_tradeoff(0.1, 0.0), Err(Error::Divergent(_))));
    }

    #[test]
    fn dc_examples() {
        assert_eq!(dc_tradeoff(0.3, 1.0).unwrap(), 1.0);
        assert_eq!(dc_tradeoff(0.0, 0.4).unwrap(), 1.0);
        assert!((dc_tradeoff(0.02, 0.5).unwrap() - 0.98).abs() < 1e-15);
        assert!(matches!(dc_tradeoff(0.1, 0.0), Err(Error::Divergent(_))));
    }

    #[test]
    fn merits_match_tradeoff_slopes() {
        for eta_s in [0.1, 0.5, 0.93] {
            let p = 1e-3;
            let sc = p / (1.0 - sc_tradeoff(p, eta_s).unwrap());
            let dc = p / (1.0 - dc_tradeoff(p, eta_s).unwrap());
            assert!((sc / sc_merit(eta_s).unwrap().value().unwrap() - 1.0).abs() < 1e-9);
            assert!((dc / dc_merit(eta_s).unwrap().value().unwrap() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn reflection_merit_examples() {
        let lossless = EfficiencyModel::new(1.0, 1.0, 1.0, 1.0, 1).unwrap();
        assert_eq!(r_tradeoff_merit(&lossless).unwrap(), Merit::Divergent);
        let m = EfficiencyModel::new(1.0, 0.9, 0.81, 0.9, 1).unwrap();
        let merit = r_tradeoff_merit(&m).unwrap().value().unwrap();
        let want = 4.0 / (1.0 / 0.81 - 1.62 / 1.71);
        assert_eq!(merit, want);
        assert!((merit - 13.93).abs() < 5e-3);
        assert!(r_tradeoff_merit(&m.with_n(2).unwrap()).is_err());
    }

    #[test]
    fn reflection_merit_matches_wcp_fidelity_slope() {
        let m = EfficiencyModel::new(0.4, 0.9, 0.81, 0.9, 1).unwrap();
        let pulse = wcp_amplitudes(&WcpSource::with_mean_photon_number(1e-4).unwrap()).unwrap();
        let p = herald_probability(&pulse, &m).unwrap();
        let f = fidelity_estimate(&pulse, &m).unwrap();
        let merit = r_tradeoff_merit(&m).unwrap().value().unwrap();
        assert!((p / (1.0 - f) / merit - 1.0).abs() < 1e-3);
    }

    #[test]
    fn routing_limited_identity() {
        for i in 1..=9 {
            let eta = i as f64 / 10.0;
            let (eta_s, model) = Regime::RoutingLimited.operating_point(eta).unwrap();
            let r = r_tradeoff_merit(&model).unwrap().value().unwrap();
            let sc = sc_merit(eta_s).unwrap().value().unwrap();
            let dc = dc_merit(eta_s).unwrap().value().unwrap();
            assert!((r - 0.5 * sc).abs() <= 1e-12 * sc);
            assert!(sc >= r && r >= dc);
        }
    }

    #[test]
    fn interface_limited_limits() {
        let regime = Regime::InterfaceLimited;
        let (eta_s, model) = regime.operating_point(0.1).unwrap();
        let r = r_tradeoff_merit(&model).unwrap().value().unwrap();
        let sc = sc_merit(eta_s).unwrap().value().unwrap();
        let dc = dc_merit(eta_s).unwrap().value().unwrap();
        assert!(r > sc && r > dc, "R {r} SC {sc} DC {dc}");

        let (eta_s, model) = regime.operating_point(1e6).unwrap();
        let r = r_tradeoff_merit(&model).unwrap().value().unwrap();
        let dc = dc_merit(eta_s).unwrap().value().unwrap();
        assert!((r / dc - 1.0).abs() < 0.01, "R/DC = {}", r / dc);
    }

    #[test]
    fn sweep_is_ordered_and_complete() {
        let grid = Regime::InterfaceLimited.default_grid();
        let pts = sweep_figure2(Regime::InterfaceLimited, &grid, 1e-3).unwrap();
        assert_eq!(pts.len(), 3 * grid.len());
        for (chunk, &c) in pts.chunks(3).zip(&grid) {
            assert_eq!(chunk[0].protocol, Protocol::R);
            assert_eq!(chunk[1].protocol, Protocol::SC);
            assert_eq!(chunk[2].protocol, Protocol::DC);
            assert!(chunk.iter().all(|p| p.sweep_parameter == c && p.fidelity <= 1.0));
        }
    }

    #[test]
    fn merit_serialization() {
        assert_eq!(Merit::Divergent.to_string(), "inf");
        let json = serde_json::to_string(&Merit::Divergent).unwrap();
        assert_eq!(json, r#"{"kind":"divergent"}"#);
        let json = serde_json::to_string(&Merit::Finite(2.5)).unwrap();
        assert_eq!(json, r#"{"kind":"finite","value":2.5}"#);
        let back: Merit = serde_json::from_str(&json).unwrap();
        assert_eq!(back, Merit::Finite(2.5));
    }

    #[test]
    fn success_comparison_grid() {
        for &(t, a, b, d, s, a1) in &[(0.5, 0.9, 0.8, 0.7, 0.9, 0.1), (1.0, 1.0, 1.0, 1.0, 1.0, 1.0)] {
            let m = EfficiencyModel::new(t, a, b, d, 3).unwrap();
            let cmp = success_probability_comparison(&m, s, a1).unwrap();
            assert!((cmp.reflection - t * d * 2.0 * a * b / (a + b) * a1).abs() < 1e-15);
            assert!((cmp.reflection_intensity - t * b * d / 2.0 * a1).abs() < 1e-15);
            assert!((cmp.double_click - t * d * s / 2.0 * a1).abs() < 1e-15);
            assert!((cmp.single_click - 2.0 * t * d * a1).abs() < 1e-15);
        }
    }

    proptest! {
        #[test]
        fn routing_identity_everywhere(eta in 1e-6..(1.0 - 1e-6)) {
            let (eta_s, model) = Regime::RoutingLimited.operating_point(eta).unwrap();
            let r = r_tradeoff_merit(&model).unwrap().value().unwrap();
            let sc = sc_merit(eta_s).unwrap().value().unwrap();
            prop_assert!((r - 0.5 * sc).abs() <= 1e-12 * sc.max(1.0));
        }

        #[test]
        fn dc_below_sc(eta_s in 1e-9..(1.0 - 1e-9)) {
            let sc = sc_merit(eta_s).unwrap().value().unwrap();
            let dc = dc_merit(eta_s).unwrap().value().unwrap();
            prop_assert!(dc < sc);
        }

        #[test]
        fn reflection_denominator_nonnegative(
            a in 0.01..=1.0f64, b in 0.01..=1.0f64, d in 0.01..=1.0f64,
        ) {
            let m = EfficiencyModel::new(1.0, a, b, d, 1).unwrap();
            match r_tradeoff_merit(&m).unwrap() {
                Merit::Finite(v) => prop_assert!(v > 0.0),
                Merit::Divergent => prop_assert!(a == 1.0 && b == 1.0 && d == 1.0),
            }
        }
    }
}
