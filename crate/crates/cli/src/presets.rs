//! Embedded scenario grids, one per reproduced power figure. Each preset is
//! an ordinary run configuration in the same TOML format `run` accepts from
//! a file.

pub struct Preset {
    pub name: &'static str,
    pub summary: &'static str,
    pub toml: &'static str,
}

pub const PRESETS: &[Preset] = &[
    Preset {
        name: "fig1a",
        summary: "basic setup (n=40, p=23, identity), unbalanced V-fold CV",
        toml: include_str!("../presets/fig1a.toml"),
    },
    Preset {
        name: "fig1b",
        summary: "basic setup, balanced (stratified) V-fold CV",
        toml: include_str!("../presets/fig1b.toml"),
    },
    Preset {
        name: "fig3",
        summary: "basic setup with randomized tie-breaking",
        toml: include_str!("../presets/fig3.toml"),
    },
    Preset {
        name: "fig4",
        summary: "heavy-tailed multivariate-t noise (df=3)",
        toml: include_str!("../presets/fig4.toml"),
    },
    Preset {
        name: "fig5a",
        summary: "AR(1) rho=0.6, signal in the highest-variance PC",
        toml: include_str!("../presets/fig5a.toml"),
    },
    Preset {
        name: "fig5b",
        summary: "AR(1) rho=0.6, signal in the lowest-variance PC",
        toml: include_str!("../presets/fig5b.toml"),
    },
    Preset {
        name: "fig6a",
        summary: "Brownian-motion correlation, highest-variance PC",
        toml: include_str!("../presets/fig6a.toml"),
    },
    Preset {
        name: "fig6b",
        summary: "Brownian-motion correlation, lowest-variance PC",
        toml: include_str!("../presets/fig6b.toml"),
    },
    Preset {
        name: "fig7a",
        summary: "one fixed random correlation matrix, highest-variance PC",
        toml: include_str!("../presets/fig7a.toml"),
    },
    Preset {
        name: "fig7b",
        summary: "one fixed random correlation matrix, lowest-variance PC",
        toml: include_str!("../presets/fig7b.toml"),
    },
    Preset {
        name: "fig8a",
        summary: "heteroskedastic diagonal covariance, highest-variance PC",
        toml: include_str!("../presets/fig8a.toml"),
    },
    Preset {
        name: "fig8b",
        summary: "heteroskedastic diagonal covariance, lowest-variance PC",
        toml: include_str!("../presets/fig8b.toml"),
    },
    Preset {
        name: "fig9a",
        summary: "AR(1) with fixed Euclidean shift norm, 7th PC",
        toml: include_str!("../presets/fig9a.toml"),
    },
    Preset {
        name: "fig9b",
        summary: "AR(1) with fixed Euclidean shift norm, 15th PC",
        toml: include_str!("../presets/fig9b.toml"),
    },
    Preset {
        name: "fig10",
        summary: "leave-one-out-bootstrap accuracy estimators (B=10, 50)",
        toml: include_str!("../presets/fig10.toml"),
    },
    Preset {
        name: "highdim",
        summary: "covariance-regularized classifiers (DLDA, HDRDA, SDLDA)",
        toml: include_str!("../presets/highdim.toml"),
    },
    Preset {
        name: "fig11",
        summary: "Gaussian-mixture alternatives; effect = mixing weight",
        toml: include_str!("../presets/fig11.toml"),
    },
];

pub fn find(name: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name)
}
