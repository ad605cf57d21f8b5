//! Batch-run configuration: a single TOML document selecting the model,
//! lattice, boundaries, analyses and budgets.

use serde::Deserialize;

use crate::cocycle::Cocycle;
use crate::group::FiniteAbelianGroup;
use crate::lattice::{BoundaryStyle, Lattice, Side};
use crate::model::{
    build_boundary, build_general_abelian, build_h_alpha, build_h_alpha_alpha,
    build_h_alpha_beta, build_h_alpha_mirror, build_sc3d, build_xcube, BoundarySpec,
    ModelInstance, TwistChoice,
};
use crate::oracle::TraceBudget;

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelSection,
    pub lattice: LatticeSection,
    #[serde(default)]
    pub boundary: Vec<BoundarySection>,
    #[serde(default)]
    pub analysis: AnalysisSection,
    #[serde(default)]
    pub budget: BudgetSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    /// tc_untwisted | h_alpha | h_alpha_alpha | h_alpha_beta |
    /// general_abelian | sc3d_alpha | xcube_beta
    pub variant: String,
    #[serde(default = "default_group")]
    pub group: Vec<u32>,
    /// canonical_z22 | trivial | pairing
    #[serde(default = "default_cocycle")]
    pub cocycle: String,
    /// integer pairing matrix when cocycle = "pairing"
    #[serde(default)]
    pub pairing: Vec<Vec<i64>>,
    /// twist the other plaquette edge pair instead
    #[serde(default)]
    pub mirror: bool,
}

fn default_group() -> Vec<u32> {
    vec![2, 2]
}

fn default_cocycle() -> String {
    "canonical_z22".into()
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSection {
    pub extents: Vec<usize>,
    #[serde(default)]
    pub periodic: Vec<bool>,
    /// boundary styles for open 2D axes: [left, right, bottom, top]
    #[serde(default)]
    pub styles: Vec<String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundarySection {
    pub side: String,
    pub style: String,
    /// generators of the boundary subgroup as exponent tuples
    pub subgroup: Vec<Vec<u32>>,
    #[serde(default = "default_twist")]
    pub twist: String,
    #[serde(default)]
    pub beta_twist_smooth_h: bool,
}

fn default_twist() -> String {
    "trivial".into()
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisSection {
    #[serde(default)]
    pub run: Vec<String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetSection {
    #[serde(default = "default_trace_budget")]
    pub trace: u128,
    #[serde(default = "default_dense_budget")]
    pub dense: u128,
}

impl Default for BudgetSection {
    fn default() -> Self {
        BudgetSection {
            trace: default_trace_budget(),
            dense: default_dense_budget(),
        }
    }
}

fn default_trace_budget() -> u128 {
    1 << 22
}

fn default_dense_budget() -> u128 {
    1 << 16
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default)]
    pub report: Option<String>,
    #[serde(default)]
    pub svg_dir: Option<String>,
}

#[derive(Debug)]
pub enum ConfigError {
    Parse(String),
    Invalid(String),
    Build(String),
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConfigError::Parse(e) => write!(f, "config parse error: {e}"),
            ConfigError::Invalid(e) => write!(f, "invalid config: {e}"),
            ConfigError::Build(e) => write!(f, "model build error: {e}"),
        }
    }
}

impl std::error::Error for ConfigError {}

fn parse_side(s: &str) -> Result<Side, ConfigError> {
    match s {
        "left" => Ok(Side::Left),
        "right" => Ok(Side::Right),
        "bottom" => Ok(Side::Bottom),
        "top" => Ok(Side::Top),
        _ => Err(ConfigError::Invalid(format!("unknown side {s:?}"))),
    }
}

fn parse_style(s: &str) -> Result<BoundaryStyle, ConfigError> {
    match s {
        "rough" => Ok(BoundaryStyle::Rough),
        "smooth" => Ok(BoundaryStyle::Smooth),
        _ => Err(ConfigError::Invalid(format!("unknown style {s:?}"))),
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<RunConfig, ConfigError> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let dims = self.lattice.extents.len();
        match self.model.variant.as_str() {
            "sc3d_alpha" | "xcube_beta" => {
                if dims != 3 {
                    return Err(ConfigError::Invalid("3D variant needs three extents".into()));
                }
            }
            "tc_untwisted" | "h_alpha" | "h_alpha_alpha" | "h_alpha_beta"
            | "general_abelian" => {
                if dims != 2 {
                    return Err(ConfigError::Invalid("2D variant needs two extents".into()));
                }
            }
            v => return Err(ConfigError::Invalid(format!("unknown variant {v:?}"))),
        }
        match self.model.cocycle.as_str() {
            "canonical_z22" => {
                if self.model.group != vec![2, 2] {
                    return Err(ConfigError::Invalid(
                        "canonical_z22 needs group = [2, 2]".into(),
                    ));
                }
            }
            "trivial" => {}
            "pairing" => {
                if self.model.pairing.is_empty() {
                    return Err(ConfigError::Invalid("pairing cocycle needs a matrix".into()));
                }
            }
            c => return Err(ConfigError::Invalid(format!("unknown cocycle {c:?}"))),
        }
        if !self.boundary.is_empty() && dims != 2 {
            return Err(ConfigError::Invalid("boundaries are 2D only".into()));
        }
        Ok(())
    }

    pub fn cocycle(&self) -> Result<Cocycle, ConfigError> {
        let group = FiniteAbelianGroup::new(&self.model.group);
        match self.model.cocycle.as_str() {
            "canonical_z22" => Ok(Cocycle::canonical_z2z2()),
            "trivial" => Ok(Cocycle::trivial(group)),
            "pairing" => Cocycle::from_pairing_matrix(group, &self.model.pairing)
                .map_err(|e| ConfigError::Invalid(e.to_string())),
            _ => unreachable!("validated"),
        }
    }

    pub fn lattice(&self) -> Result<Lattice, ConfigError> {
        let e = &self.lattice.extents;
        if e.len() == 3 {
            return Ok(Lattice::torus_3d(e[0], e[1], e[2]));
        }
        let periodic = [
            self.lattice.periodic.first().copied().unwrap_or(true),
            self.lattice.periodic.get(1).copied().unwrap_or(true),
        ];
        let mut styles = [[None; 2]; 2];
        // style list order: left, right, bottom, top
        let names = ["left", "right", "bottom", "top"];
        for (k, name) in names.iter().enumerate() {
            if let Some(s) = self.lattice.styles.get(k) {
                if !s.is_empty() {
                    let st = parse_style(s)
                        .map_err(|_| ConfigError::Invalid(format!("style for {name}")))?;
                    styles[k / 2][k % 2] = Some(st);
                }
            }
        }
        Lattice::new_2d(e[0], e[1], periodic, styles)
            .map_err(|e| ConfigError::Invalid(e.to_string()))
    }

    pub fn boundary_specs(&self) -> Result<Vec<BoundarySpec>, ConfigError> {
        self.boundary
            .iter()
            .map(|b| {
                let mut spec = BoundarySpec::new(
                    parse_side(&b.side)?,
                    parse_style(&b.style)?,
                    b.subgroup.clone(),
                    match b.twist.as_str() {
                        "trivial" => TwistChoice::Trivial,
                        "canonical" => TwistChoice::Canonical,
                        t => {
                            return Err(ConfigError::Invalid(format!("unknown twist {t:?}")))
                        }
                    },
                );
                spec.smooth_h_beta_twist = b.beta_twist_smooth_h;
                Ok(spec)
            })
            .collect()
    }

    pub fn budget(&self) -> TraceBudget {
        TraceBudget {
            max_trace_assignments: self.budget.trace,
            max_dense_dim: self.budget.dense,
        }
    }

    /// Build the configured model, boundaries included.
    pub fn build(&self) -> Result<ModelInstance, ConfigError> {
        let lattice = self.lattice()?;
        let cocycle = self.cocycle()?;
        let mut model = match self.model.variant.as_str() {
            "tc_untwisted" => {
                let group = FiniteAbelianGroup::new(&self.model.group);
                build_h_alpha(lattice, Cocycle::trivial(group))
            }
            "h_alpha" => build_h_alpha_mirror(lattice, cocycle, self.model.mirror),
            "h_alpha_alpha" => build_h_alpha_alpha(lattice, cocycle),
            "h_alpha_beta" => build_h_alpha_beta(lattice, cocycle),
            "general_abelian" => build_general_abelian(lattice, cocycle),
            "sc3d_alpha" => build_sc3d(lattice, cocycle),
            "xcube_beta" => build_xcube(lattice, cocycle),
            _ => unreachable!("validated"),
        }
        .map_err(|e| ConfigError::Build(e.to_string()))?;
        for spec in self.boundary_specs()? {
            model = build_boundary(model, spec).map_err(|e| ConfigError::Build(e.to_string()))?;
        }
        Ok(model)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_build_minimal() {
        let cfg = RunConfig::from_toml(
            r#"
            [model]
            variant = "h_alpha"
            [lattice]
            extents = [2, 3]
            [analysis]
            run = ["gsd"]
            "#,
        )
        .unwrap();
        let m = cfg.build().unwrap();
        assert_eq!(m.lattice.edge_count(), 12);
    }

    #[test]
    fn rejects_unknown_variant() {
        let err = RunConfig::from_toml(
            r#"
            [model]
            variant = "nope"
            [lattice]
            extents = [2, 2]
            "#,
        );
        assert!(err.is_err());
    }

    #[test]
    fn boundary_config_roundtrip() {
        let cfg = RunConfig::from_toml(
            r#"
            [model]
            variant = "h_alpha"
            [lattice]
            extents = [4, 4]
            periodic = [false, true]
            styles = ["rough", "rough", "", ""]
            [[boundary]]
            side = "left"
            style = "rough"
            subgroup = [[1, 0]]
            twist = "trivial"
            [[boundary]]
            side = "right"
            style = "rough"
            subgroup = [[1, 0]]
            twist = "trivial"
            "#,
        )
        .unwrap();
        let m = cfg.build().unwrap();
        assert_eq!(m.boundaries.len(), 2);
        assert!(!m.boundary_cell_indices.is_empty());
    }
}
