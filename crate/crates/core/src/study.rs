//! Convergence studies and diagnostics sweeps over mesh levels.

use std::fmt::{self, Write as _};
use std::str::FromStr;
use std::time::Instant;

use crate::error::{HdmError, Result};
use crate::fem::{adini_ops, morley_ops};
use crate::fvm::{fvm_ops, FvmVariant};
use crate::gr::{gr_ops_with, Stabilisation};
use crate::hdm::{
    coercivity_measure, consistency_measure, error_norms, limit_conformity_measure, solve_hessian_scheme, BTensor,
    Discretisation, SolveOptions,
};
use crate::linalg::CgOptions;
use crate::mesh::{CenterRule, Domain, ElementKind, Mesh, MeshFamily};
use crate::problems::{fd_gate, gate_points, problem_by_id, Problem};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeId {
    Morley,
    Adini,
    Fvm,
    Mfvm,
    Gr,
}

impl SchemeId {
    pub const ALL: [SchemeId; 5] = [SchemeId::Morley, SchemeId::Adini, SchemeId::Fvm, SchemeId::Mfvm, SchemeId::Gr];

    pub fn id(self) -> &'static str {
        match self {
            SchemeId::Morley => "morley",
            SchemeId::Adini => "adini",
            SchemeId::Fvm => "fvm",
            SchemeId::Mfvm => "mfvm",
            SchemeId::Gr => "gr",
        }
    }

    pub fn default_element(self) -> ElementKind {
        match self {
            SchemeId::Morley => ElementKind::Triangle,
            SchemeId::Gr => ElementKind::DiagonalTriangle,
            SchemeId::Adini | SchemeId::Fvm | SchemeId::Mfvm => ElementKind::Rectangle,
        }
    }

    pub fn default_btensor(self) -> BTensor {
        match self {
            SchemeId::Fvm | SchemeId::Mfvm => BTensor::TraceLaplacian,
            _ => BTensor::Identity,
        }
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for SchemeId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        SchemeId::ALL
            .into_iter()
            .find(|id| id.id() == s)
            .ok_or_else(|| format!("unknown scheme `{s}` (expected morley, adini, fvm, mfvm or gr)"))
    }
}

#[derive(Debug, Clone)]
pub struct StudyConfig {
    pub scheme: SchemeId,
    pub problem: String,
    /// Number of levels.
    pub levels: u32,
    pub first_level: u32,
    pub rho: f64,
    pub b: Option<BTensor>,
    pub element: Option<ElementKind>,
    pub stabilisation: Stabilisation,
    pub tol: f64,
}

impl StudyConfig {
    pub fn new(scheme: SchemeId, problem: &str, levels: u32) -> Self {
        Self {
            scheme,
            problem: problem.to_string(),
            levels,
            first_level: 2,
            rho: 1.0,
            b: None,
            element: None,
            stabilisation: Stabilisation::default(),
            tol: 1e-12,
        }
    }

    pub fn btensor(&self) -> BTensor {
        self.b.unwrap_or(self.scheme.default_btensor())
    }

    pub fn level_range(&self) -> std::ops::Range<u32> {
        self.first_level..self.first_level + self.levels
    }

    fn family(&self, domain: Domain) -> MeshFamily {
        let element = self.element.unwrap_or(self.scheme.default_element());
        MeshFamily::new(domain, element, CenterRule::MassCenter)
    }

    /// Rejects scheme, mesh, B-tensor and problem combinations that cannot run.
    pub fn validate(&self) -> Result<()> {
        let incompatible = |mesh: String| {
            Err(HdmError::IncompatibleSchemeMesh { scheme: self.scheme.to_string(), mesh })
        };
        let problem = problem_by_id::<f64>(&self.problem)
            .ok_or_else(|| HdmError::IncompatibleSchemeMesh { scheme: self.scheme.to_string(), mesh: format!("unknown problem {}", self.problem) })?;
        let family = self.family(problem.domain());
        let element = family.element;
        match (self.scheme, element) {
            (SchemeId::Morley | SchemeId::Gr, ElementKind::Rectangle) => return incompatible(format!("{element} meshes")),
            (SchemeId::Adini, ElementKind::Triangle | ElementKind::DiagonalTriangle) => return incompatible(format!("{element} meshes")),
            _ => {}
        }
        if problem.domain() == Domain::LShape && element == ElementKind::Rectangle {
            return incompatible(format!("{element} meshes of the {}", Domain::LShape));
        }
        if matches!(self.scheme, SchemeId::Fvm | SchemeId::Mfvm) && self.btensor() != BTensor::TraceLaplacian {
            return incompatible(format!("B = {}", self.btensor()));
        }
        // the broken Laplacian of a Morley function is one constant per cell,
        // which cannot control the larger number of free dofs
        if self.scheme == SchemeId::Morley && self.btensor() != BTensor::Identity {
            return incompatible(format!("B = {}", self.btensor()));
        }
        if self.scheme == SchemeId::Gr && !(self.rho > 0.0 && self.rho.is_finite()) {
            return Err(HdmError::InvalidRho(self.rho));
        }
        Ok(())
    }
}

/// Builds the scheme's discretisation on `mesh`.
pub fn build_ops<'m, T: Real>(config: &StudyConfig, mesh: &'m Mesh<T>) -> Result<Box<dyn Discretisation<T> + 'm>> {
    let b = config.btensor();
    Ok(match config.scheme {
        SchemeId::Morley => Box::new(morley_ops(mesh, b)?),
        SchemeId::Adini => Box::new(adini_ops(mesh, b)?),
        SchemeId::Fvm => Box::new(fvm_ops(mesh, FvmVariant::Plain)?),
        SchemeId::Mfvm => Box::new(fvm_ops(mesh, FvmVariant::Modified)?),
        SchemeId::Gr => Box::new(gr_ops_with(mesh, b, T::lit(config.rho), config.stabilisation)?),
    })
}

/// Loads a problem and runs the finite-difference consistency gate on it.
pub fn checked_problem<T: Real>(id: &str) -> Result<Box<dyn Problem<T>>> {
    let gate = problem_by_id::<f64>(id)
        .ok_or_else(|| HdmError::IncompatibleSchemeMesh { scheme: "any".into(), mesh: format!("unknown problem {id}") })?;
    let (radius, tol) = match gate.domain() {
        Domain::UnitSquare => (0.0, 1e-4),
        Domain::LShape => (0.1, 1e-3),
    };
    fd_gate(gate.as_ref(), &gate_points(gate.domain(), 100, radius), tol)?;
    Ok(problem_by_id::<T>(id).expect("checked above"))
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudyRow {
    pub level: u32,
    pub h: f64,
    pub err_l2: f64,
    pub err_h1: f64,
    pub err_h2: f64,
    pub eoc_l2: Option<f64>,
    pub eoc_h1: Option<f64>,
    pub eoc_h2: Option<f64>,
    pub ndofs: usize,
    pub iters: usize,
    pub seconds: f64,
}

#[derive(Debug, Clone)]
pub struct ConvergenceReport {
    pub scheme: SchemeId,
    pub problem: String,
    pub b: BTensor,
    pub rho: Option<f64>,
    pub rows: Vec<StudyRow>,
}

/// `log(e_{k−1}/e_k) / log(h_{k−1}/h_k)`.
pub fn eoc(e_prev: f64, e: f64, h_prev: f64, h: f64) -> f64 {
    (e_prev / e).ln() / (h_prev / h).ln()
}

pub fn fill_eoc(rows: &mut [StudyRow]) {
    for k in 1..rows.len() {
        let (p, c) = (&rows[k - 1], &rows[k]);
        let e = |a: f64, b: f64| Some(eoc(a, b, p.h, c.h));
        let (l2, h1, h2) = (e(p.err_l2, c.err_l2), e(p.err_h1, c.err_h1), e(p.err_h2, c.err_h2));
        rows[k].eoc_l2 = l2;
        rows[k].eoc_h1 = h1;
        rows[k].eoc_h2 = h2;
    }
}

/// A single level: mesh, solve and relative errors.
pub fn run_level<T: Real>(config: &StudyConfig, problem: &dyn Problem<T>, level: u32) -> Result<StudyRow> {
    let start = Instant::now();
    let family = config.family(problem.domain());
    let mesh: Mesh<T> = family.build(level)?;
    let ops = build_ops(config, &mesh)?;
    let opts = SolveOptions { cg: CgOptions::with_tol(T::lit(config.tol)) };
    let sol = solve_hessian_scheme(ops.as_ref(), |x| problem.source(x), &opts)?;
    let e = error_norms(ops.as_ref(), &sol.dofs, |x| problem.jet(x))?;
    Ok(StudyRow {
        level,
        h: mesh.h().as_f64(),
        err_l2: e.rel_l2().as_f64(),
        err_h1: e.rel_h1().as_f64(),
        err_h2: e.rel_h2().as_f64(),
        eoc_l2: None,
        eoc_h1: None,
        eoc_h2: None,
        ndofs: sol.n_free,
        iters: sol.solver.iterations,
        seconds: start.elapsed().as_secs_f64(),
    })
}

pub fn run_study<T: Real>(config: &StudyConfig) -> Result<ConvergenceReport> {
    config.validate()?;
    let problem = checked_problem::<T>(&config.problem)?;
    let mut rows = config
        .level_range()
        .map(|level| run_level(config, problem.as_ref(), level))
        .collect::<Result<Vec<_>>>()?;
    fill_eoc(&mut rows);
    Ok(ConvergenceReport {
        scheme: config.scheme,
        problem: config.problem.clone(),
        b: config.btensor(),
        rho: (config.scheme == SchemeId::Gr).then_some(config.rho),
        rows,
    })
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.4}")).unwrap_or_default()
}

impl ConvergenceReport {
    pub const CSV_HEADER: &'static str = "level,h,errL2,eocL2,errH1,eocH1,errH2,eocH2,ndofs,iters,seconds";

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{:.6},{:.6e},{},{:.6e},{},{:.6e},{},{},{},{:.3}",
                r.level,
                r.h,
                r.err_l2,
                opt(r.eoc_l2),
                r.err_h1,
                opt(r.eoc_h1),
                r.err_h2,
                opt(r.eoc_h2),
                r.ndofs,
                r.iters,
                r.seconds
            );
        }
        out
    }

    /// CSV without the timing column, for determinism checks.
    pub fn to_csv_untimed(&self) -> String {
        self.to_csv().lines().map(|l| l.rsplit_once(',').map_or(l, |(a, _)| a)).collect::<Vec<_>>().join("\n")
    }

    /// Two-column `h error` data for each norm.
    pub fn plot_data(&self) -> [(&'static str, String); 3] {
        let col = |f: fn(&StudyRow) -> f64| self.rows.iter().map(|r| format!("{:.6e} {:.6e}\n", r.h, f(r))).collect();
        [("l2", col(|r| r.err_l2)), ("h1", col(|r| r.err_h1)), ("h2", col(|r| r.err_h2))]
    }

    pub fn to_pretty(&self) -> String {
        let mut out = String::new();
        let rho = self.rho.map(|r| format!(", ρ = {r}")).unwrap_or_default();
        let _ = writeln!(out, "{} / {} (B = {}{rho})", self.scheme, self.problem, self.b);
        let _ = writeln!(out, "{:>10} | {:>10} {:>7} | {:>10} {:>7} | {:>10} {:>7} | {:>8}", "h", "err(u)", "order", "err(∇u)", "order", "err(H)", "order", "dofs");
        for r in &self.rows {
            let o = |v: Option<f64>| v.map(|x| format!("{x:.4}")).unwrap_or_else(|| "-".into());
            let _ = writeln!(
                out,
                "{:>10.6} | {:>10.6} {:>7} | {:>10.6} {:>7} | {:>10.6} {:>7} | {:>8}",
                r.h,
                r.err_l2,
                o(r.eoc_l2),
                r.err_h1,
                o(r.eoc_h1),
                r.err_h2,
                o(r.eoc_h2),
                r.ndofs
            );
        }
        out
    }
}

/// Coercivity is not estimated beyond this level.
pub const MAX_COERCIVITY_LEVEL: u32 = 6;

#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticsRow {
    pub level: u32,
    pub h: f64,
    pub sd: f64,
    pub wd: f64,
    pub cd: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct DiagnosticsReport {
    pub scheme: SchemeId,
    pub problem: String,
    pub rows: Vec<DiagnosticsRow>,
}

/// `S_D(u)`, `W_D(ℋu)` and `C_D` per level for the problem's exact solution.
pub fn run_diagnostics<T: Real>(config: &StudyConfig) -> Result<DiagnosticsReport> {
    config.validate()?;
    let problem = checked_problem::<T>(&config.problem)?;
    let opts = CgOptions::with_tol(T::lit(config.tol));
    let mut rows = Vec::new();
    for level in config.level_range() {
        let mesh: Mesh<T> = config.family(problem.domain()).build(level)?;
        let ops = build_ops(config, &mesh)?;
        let sd = consistency_measure(ops.as_ref(), |x| problem.jet(x), &opts)?;
        let wd = limit_conformity_measure(ops.as_ref(), |x| problem.hessian_field(x), &opts)?.value;
        let cd = if level <= MAX_COERCIVITY_LEVEL { Some(coercivity_measure(ops.as_ref())?.value.as_f64()) } else { None };
        rows.push(DiagnosticsRow { level, h: mesh.h().as_f64(), sd: sd.as_f64(), wd: wd.as_f64(), cd });
    }
    Ok(DiagnosticsReport { scheme: config.scheme, problem: config.problem.clone(), rows })
}

impl DiagnosticsReport {
    pub const CSV_HEADER: &'static str = "level,h,SD,WD,CD";

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let cd = r.cd.map(|c| format!("{c:.6e}")).unwrap_or_default();
            let _ = writeln!(out, "{},{:.6},{:.6e},{:.6e},{}", r.level, r.h, r.sd, r.wd, cd);
        }
        out
    }

    pub fn to_pretty(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} / {} diagnostics", self.scheme, self.problem);
        let _ = writeln!(out, "{:>10} | {:>12} | {:>12} | {:>12}", "h", "S_D", "W_D", "C_D");
        for r in &self.rows {
            let cd = r.cd.map(|c| format!("{c:.6e}")).unwrap_or_else(|| "-".into());
            let _ = writeln!(out, "{:>10.6} | {:>12.6e} | {:>12.6e} | {:>12}", r.h, r.sd, r.wd, cd);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(level: u32, h: f64, e: f64) -> StudyRow {
        StudyRow { level, h, err_l2: e, err_h1: e, err_h2: e, eoc_l2: None, eoc_h1: None, eoc_h2: None, ndofs: 1, iters: 1, seconds: 0.0 }
    }

    #[test]
    fn eoc_of_exact_power_law() {
        let mut rows: Vec<StudyRow> = (0..4).map(|k| {
            let h = 0.5f64.powi(k);
            row(k as u32, h, 3.0 * h.powf(2.5))
        }).collect();
        fill_eoc(&mut rows);
        assert!(rows[0].eoc_l2.is_none());
        for r in &rows[1..] {
            assert!((r.eoc_l2.unwrap() - 2.5).abs() < 1e-12);
        }
    }

    #[test]
    fn csv_layout() {
        let mut rows = vec![row(2, 0.25, 0.1), row(3, 0.125, 0.025)];
        fill_eoc(&mut rows);
        let r = ConvergenceReport { scheme: SchemeId::Morley, problem: "sq-sin2".into(), b: BTensor::Identity, rho: None, rows };
        let csv = r.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "level,h,errL2,eocL2,errH1,eocH1,errH2,eocH2,ndofs,iters,seconds");
        assert_eq!(lines[1], "2,0.250000,1.000000e-1,,1.000000e-1,,1.000000e-1,,1,1,0.000");
        assert!(lines[2].starts_with("3,0.125000,2.500000e-2,2.0000,"));
        assert_eq!(r.to_csv_untimed().lines().next().unwrap(), "level,h,errL2,eocL2,errH1,eocH1,errH2,eocH2,ndofs,iters");
    }

    #[test]
    fn scheme_names_round_trip() {
        for s in SchemeId::ALL {
            assert_eq!(s.id().parse::<SchemeId>().unwrap(), s);
        }
        assert!("argyris".parse::<SchemeId>().is_err());
    }

    #[test]
    fn incompatible_configurations() {
        let mut c = StudyConfig::new(SchemeId::Adini, "sq-sin2", 1);
        c.element = Some(ElementKind::Triangle);
        assert!(matches!(c.validate(), Err(HdmError::IncompatibleSchemeMesh { .. })));
        let mut c = StudyConfig::new(SchemeId::Fvm, "sq-poly", 1);
        c.b = Some(BTensor::Identity);
        assert!(matches!(c.validate(), Err(HdmError::IncompatibleSchemeMesh { .. })));
        let mut c = StudyConfig::new(SchemeId::Morley, "sq-sin2", 1);
        c.b = Some(BTensor::TraceLaplacian);
        assert!(matches!(c.validate(), Err(HdmError::IncompatibleSchemeMesh { .. })));
        let c = StudyConfig::new(SchemeId::Adini, "lshape", 1);
        assert!(matches!(c.validate(), Err(HdmError::IncompatibleSchemeMesh { .. })));
        let mut c = StudyConfig::new(SchemeId::Gr, "sq-sin2", 1);
        c.rho = 0.0;
        assert!(matches!(c.validate(), Err(HdmError::InvalidRho(_))));
        assert!(StudyConfig::new(SchemeId::Gr, "lshape", 1).validate().is_ok());
    }
}
