//! Run configuration: a flat key-value format with `[section]` headers,
//! `#`/`;` comments, and comma-separated lists. Diff-friendly and trivially
//! parseable; every validation failure carries its own diagnostic.

use std::collections::BTreeMap;

use crate::error::{MtfError, Result};
use crate::fields::Confinement;
use crate::functional::Beta;
use crate::scaling::ScanMode;

#[derive(Debug, Clone)]
pub struct ScaledBlock {
    pub mu_tilde: f64,
    pub t_tilde: f64,
    pub beta: Beta,
    pub z: f64,
}

#[derive(Debug, Clone)]
pub struct PhysicalBlock {
    pub big_z: f64,
    pub b: f64,
    pub t: f64,
    pub mu: f64,
    pub z1: f64,
}

#[derive(Debug, Clone)]
pub struct GridBlock {
    pub n: usize,
    pub r_min: Option<f64>,
    pub r_max: Option<f64>,
}

impl Default for GridBlock {
    fn default() -> Self {
        GridBlock { n: 2000, r_min: None, r_max: None }
    }
}

#[derive(Debug, Clone)]
pub struct SolverBlock {
    pub damping: f64,
    pub tol: f64,
    pub max_iter: usize,
    pub anderson: usize,
}

impl Default for SolverBlock {
    fn default() -> Self {
        SolverBlock { damping: 0.5, tol: 1e-8, max_iter: 600, anderson: 0 }
    }
}

#[derive(Debug, Clone)]
pub struct EosTableBlock {
    pub mu: Vec<f64>,
    pub t: Vec<f64>,
    pub b: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct ScanBlock {
    pub mode: ScanMode,
    pub betas: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub scaled: Option<ScaledBlock>,
    pub physical: Option<PhysicalBlock>,
    pub confinement: Confinement,
    pub grid: GridBlock,
    pub solver: SolverBlock,
    pub eos_table: Option<EosTableBlock>,
    pub scan: Option<ScanBlock>,
    pub tolerance_scale: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            scaled: None,
            physical: None,
            confinement: Confinement::harmonic(),
            grid: GridBlock::default(),
            solver: SolverBlock::default(),
            eos_table: None,
            scan: None,
            tolerance_scale: 1.0,
        }
    }
}

type Sections = BTreeMap<String, BTreeMap<String, String>>;

fn parse_sections(text: &str) -> Result<Sections> {
    let mut out: Sections = BTreeMap::new();
    let mut current = String::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split(['#', ';']).next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| MtfError::Config(format!("line {}: unterminated section header", lineno + 1)))?;
            current = name.trim().to_string();
            out.entry(current.clone()).or_default();
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            MtfError::Config(format!("line {}: expected `key = value`, got `{line}`", lineno + 1))
        })?;
        if current.is_empty() {
            return Err(MtfError::Config(format!(
                "line {}: `{}` appears before any [section] header",
                lineno + 1,
                key.trim()
            )));
        }
        out.get_mut(&current)
            .unwrap()
            .insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(out)
}

struct Section<'a> {
    name: &'a str,
    map: &'a BTreeMap<String, String>,
}

impl<'a> Section<'a> {
    fn f64(&self, key: &str) -> Result<f64> {
        let raw = self.require(key)?;
        raw.parse::<f64>().map_err(|_| {
            MtfError::Config(format!("{}.{key}: `{raw}` is not a number", self.name))
        })
    }

    fn f64_or(&self, key: &str, default: f64) -> Result<f64> {
        match self.map.get(key) {
            Some(_) => self.f64(key),
            None => Ok(default),
        }
    }

    fn f64_opt(&self, key: &str) -> Result<Option<f64>> {
        match self.map.get(key) {
            Some(_) => Ok(Some(self.f64(key)?)),
            None => Ok(None),
        }
    }

    fn usize_or(&self, key: &str, default: usize) -> Result<usize> {
        match self.map.get(key) {
            None => Ok(default),
            Some(raw) => raw.parse::<usize>().map_err(|_| {
                MtfError::Config(format!("{}.{key}: `{raw}` is not a non-negative integer", self.name))
            }),
        }
    }

    fn list(&self, key: &str) -> Result<Vec<f64>> {
        let raw = self.require(key)?;
        if raw.is_empty() {
            return Ok(Vec::new());
        }
        raw.split(',')
            .map(|piece| {
                let piece = piece.trim();
                piece.parse::<f64>().map_err(|_| {
                    MtfError::Config(format!("{}.{key}: `{piece}` is not a number", self.name))
                })
            })
            .collect()
    }

    fn require(&self, key: &str) -> Result<&'a str> {
        self.map
            .get(key)
            .map(|s| s.as_str())
            .ok_or_else(|| MtfError::Config(format!("missing required key {}.{key}", self.name)))
    }

    fn check_known(&self, known: &[&str]) -> Result<()> {
        for key in self.map.keys() {
            if !known.contains(&key.as_str()) {
                return Err(MtfError::Config(format!("unknown key {}.{key}", self.name)));
            }
        }
        Ok(())
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<RunConfig> {
        let sections = parse_sections(text)?;
        for name in sections.keys() {
            if !["scaled", "physical", "confinement", "grid", "solver", "eos_table", "scan", "selftest"]
                .contains(&name.as_str())
            {
                return Err(MtfError::Config(format!("unknown section [{name}]")));
            }
        }
        let mut cfg = RunConfig::default();

        if let Some(map) = sections.get("confinement") {
            let s = Section { name: "confinement", map };
            s.check_known(&["amplitude", "exponent"])?;
            cfg.confinement = Confinement::new(s.f64_or("amplitude", 1.0)?, s.f64_or("exponent", 2.0)?)
                .map_err(|e| MtfError::Config(format!("confinement: {e}")))?;
        }

        if let Some(map) = sections.get("scaled") {
            let s = Section { name: "scaled", map };
            s.check_known(&["mu_tilde", "t_tilde", "beta", "z"])?;
            let t_tilde = s.f64("t_tilde")?;
            if t_tilde <= 0.0 {
                return Err(MtfError::Config(format!(
                    "scaled.t_tilde: temperature must be positive, got {t_tilde}"
                )));
            }
            let beta_raw = s.require("beta")?;
            let beta = if beta_raw == "inf" {
                Beta::Infinite
            } else {
                let v = beta_raw.parse::<f64>().map_err(|_| {
                    MtfError::Config(format!("scaled.beta: `{beta_raw}` is not a number or `inf`"))
                })?;
                Beta::new(v).map_err(|e| MtfError::Config(format!("scaled.beta: {e}")))?
            };
            let z = s.f64("z")?;
            if !(0.0..=1.0).contains(&z) {
                return Err(MtfError::Config(format!(
                    "scaled.z: charge fraction must lie in [0, 1], got {z}"
                )));
            }
            cfg.scaled = Some(ScaledBlock { mu_tilde: s.f64("mu_tilde")?, t_tilde, beta, z });
        }

        if let Some(map) = sections.get("physical") {
            let s = Section { name: "physical", map };
            s.check_known(&["Z", "B", "T", "mu", "z1"])?;
            let big_z = s.f64("Z")?;
            if big_z <= 0.0 {
                return Err(MtfError::Config(format!("physical.Z: must be positive, got {big_z}")));
            }
            let t = s.f64("T")?;
            if t <= 0.0 {
                return Err(MtfError::Config(format!(
                    "physical.T: temperature must be positive, got {t}"
                )));
            }
            let z1 = s.f64_or("z1", 1.0)?;
            if z1 > 1.0 {
                return Err(MtfError::Config(format!(
                    "physical.z1: charge fraction exceeds 1, got {z1}"
                )));
            }
            if z1 <= 0.0 {
                return Err(MtfError::Config(format!(
                    "physical.z1: charge fraction must be positive, got {z1}"
                )));
            }
            let b = s.f64_or("B", 0.0)?;
            if b < 0.0 {
                return Err(MtfError::Config(format!("physical.B: must be ≥ 0, got {b}")));
            }
            cfg.physical = Some(PhysicalBlock { big_z, b, t, mu: s.f64("mu")?, z1 });
        }

        if let Some(map) = sections.get("grid") {
            let s = Section { name: "grid", map };
            s.check_known(&["n", "r_min", "r_max"])?;
            let n = s.usize_or("n", 2000)?;
            if n < 16 {
                return Err(MtfError::Config(format!("grid.n: too coarse, need n ≥ 16, got {n}")));
            }
            cfg.grid = GridBlock { n, r_min: s.f64_opt("r_min")?, r_max: s.f64_opt("r_max")? };
        }

        if let Some(map) = sections.get("solver") {
            let s = Section { name: "solver", map };
            s.check_known(&["damping", "tol", "max_iter", "anderson"])?;
            cfg.solver = SolverBlock {
                damping: s.f64_or("damping", 0.5)?,
                tol: s.f64_or("tol", 1e-8)?,
                max_iter: s.usize_or("max_iter", 600)?,
                anderson: s.usize_or("anderson", 0)?,
            };
            if !(cfg.solver.damping > 0.0 && cfg.solver.damping <= 1.0) {
                return Err(MtfError::Config(format!(
                    "solver.damping: must lie in (0, 1], got {}",
                    cfg.solver.damping
                )));
            }
            if cfg.solver.tol <= 0.0 {
                return Err(MtfError::Config(format!(
                    "solver.tol: must be positive, got {}",
                    cfg.solver.tol
                )));
            }
        }

        if let Some(map) = sections.get("eos_table") {
            let s = Section { name: "eos_table", map };
            s.check_known(&["mu", "t", "b"])?;
            let block = EosTableBlock { mu: s.list("mu")?, t: s.list("t")?, b: s.list("b")? };
            for &t in &block.t {
                if t <= 0.0 {
                    return Err(MtfError::Config(format!(
                        "eos_table.t: temperature must be positive, got {t}"
                    )));
                }
            }
            for &b in &block.b {
                if b < 0.0 {
                    return Err(MtfError::Config(format!("eos_table.b: must be ≥ 0, got {b}")));
                }
            }
            cfg.eos_table = Some(block);
        }

        if let Some(map) = sections.get("scan") {
            let s = Section { name: "scan", map };
            s.check_known(&["mode", "betas"])?;
            let mode = match s.require("mode")? {
                "to-infinity" => ScanMode::BetaToInf,
                "to-zero" => ScanMode::BetaToZero,
                other => {
                    return Err(MtfError::Config(format!(
                        "scan.mode: expected `to-infinity` or `to-zero`, got `{other}`"
                    )))
                }
            };
            let betas = s.list("betas")?;
            if betas.is_empty() {
                return Err(MtfError::Config("scan.betas: schedule is empty".into()));
            }
            for pair in betas.windows(2) {
                let ok = match mode {
                    ScanMode::BetaToInf => pair[1] > pair[0],
                    ScanMode::BetaToZero => pair[1] < pair[0],
                };
                if !ok {
                    return Err(MtfError::Config(
                        "scan.betas: beta schedule must be strictly monotone toward the limit".into(),
                    ));
                }
            }
            cfg.scan = Some(ScanBlock { mode, betas });
        }

        if let Some(map) = sections.get("selftest") {
            let s = Section { name: "selftest", map };
            s.check_known(&["tolerance_scale"])?;
            cfg.tolerance_scale = s.f64_or("tolerance_scale", 1.0)?;
            if cfg.tolerance_scale < 0.0 {
                return Err(MtfError::Config(format!(
                    "selftest.tolerance_scale: must be ≥ 0, got {}",
                    cfg.tolerance_scale
                )));
            }
        }

        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_full_config() {
        let cfg = RunConfig::parse(
            "# comment\n[scaled]\nmu_tilde = 0.0\nt_tilde = 0.5\nbeta = 1.0\nz = 1.0\n\n\
             [grid]\nn = 500\n\n[solver]\ndamping = 0.3\ntol = 1e-7\n\n\
             [scan]\nmode = to-infinity\nbetas = 1, 10, 100\n",
        )
        .unwrap();
        assert!(cfg.scaled.is_some());
        assert_eq!(cfg.grid.n, 500);
        assert_eq!(cfg.solver.damping, 0.3);
        assert_eq!(cfg.scan.as_ref().unwrap().betas.len(), 3);
    }

    #[test]
    fn distinct_diagnostics() {
        let cases = [
            ("[scaled]\nmu_tilde=0\nt_tilde=-1\nbeta=0\nz=1", "temperature must be positive"),
            ("[physical]\nZ=-2\nB=0\nT=1\nmu=0", "physical.Z"),
            ("[physical]\nZ=2\nB=0\nT=1\nmu=0\nz1=1.5", "charge fraction exceeds 1"),
            ("[grid]\nn=8", "too coarse"),
            ("[scan]\nmode=to-infinity\nbetas=1, 1", "strictly monotone"),
            ("[scan]\nmode=sideways\nbetas=1, 2", "scan.mode"),
            ("[nonsense]\nx=1", "unknown section"),
            ("[grid]\nn=20\nwhat=3", "unknown key"),
            ("x=1", "before any"),
            ("[scaled]\nmu_tilde=0\nt_tilde=1\nbeta=frog\nz=1", "scaled.beta"),
        ];
        for (text, needle) in cases {
            let err = RunConfig::parse(text).unwrap_err().to_string();
            assert!(err.contains(needle), "`{text}` gave `{err}`, wanted `{needle}`");
        }
    }

    #[test]
    fn beta_inf_is_accepted() {
        let cfg = RunConfig::parse("[scaled]\nmu_tilde=0\nt_tilde=1\nbeta=inf\nz=0.5").unwrap();
        assert!(cfg.scaled.unwrap().beta.is_infinite());
    }
}
