use hdm_core::hdm::{assemble_hessian_scheme, galerkin_defect, DofMap};
use hdm_core::linalg::CgOptions;
use hdm_core::mesh::{CenterRule, Domain, ElementKind, Mesh, MeshFamily};
use hdm_core::problems::{problem_sq_sin2, Problem};
use hdm_core::study::{build_ops, run_study, SchemeId, StudyConfig};
use proptest::prelude::*;

fn config(scheme: SchemeId, problem: &str, levels: u32) -> StudyConfig {
    let mut c = StudyConfig::new(scheme, problem, levels);
    c.first_level = 2;
    c
}

fn square_mesh(scheme: SchemeId, level: u32) -> Mesh<f64> {
    MeshFamily::new(Domain::UnitSquare, scheme.default_element(), CenterRule::MassCenter).build(level).unwrap()
}

#[test]
fn studies_are_deterministic() {
    for scheme in SchemeId::ALL {
        let c = config(scheme, "sq-sin2", 2);
        let a = run_study::<f64>(&c).unwrap().to_csv_untimed();
        let b = run_study::<f64>(&c).unwrap().to_csv_untimed();
        assert_eq!(a, b, "{scheme}");
    }
}

#[test]
fn solutions_satisfy_the_scheme() {
    let p = problem_sq_sin2::<f64>();
    for scheme in SchemeId::ALL {
        let c = config(scheme, "sq-sin2", 1);
        let mesh = square_mesh(scheme, 2);
        let ops = build_ops(&c, &mesh).unwrap();
        let (mut system, _) = assemble_hessian_scheme(ops.as_ref(), |x| p.source(x)).unwrap();
        system.solve(&CgOptions::with_tol(1e-14)).unwrap();
        let u = system.solution.clone().unwrap();
        let defect = galerkin_defect(&system, &u);
        assert!(defect < 1e-10, "{scheme}: {defect:e}");
    }
}

#[test]
fn single_precision_study_converges() {
    let c = config(SchemeId::Morley, "sq-sin2", 3);
    let r = run_study::<f32>(&c).unwrap();
    for w in r.rows.windows(2) {
        assert!(w[1].err_l2 < 0.5 * w[0].err_l2, "{} -> {}", w[0].err_l2, w[1].err_l2);
        assert!(w[1].err_h2 < 0.7 * w[0].err_h2);
    }
}

#[test]
fn lshape_runs_on_both_triangulations() {
    for element in [ElementKind::Triangle, ElementKind::DiagonalTriangle] {
        let mut c = config(SchemeId::Gr, "lshape", 2);
        c.element = Some(element);
        let r = run_study::<f64>(&c).unwrap();
        assert!(r.rows[1].err_l2 < r.rows[0].err_l2, "{element}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn energy_is_positive(idx in 0usize..5, rho in 0.001f64..10.0, seed in prop::collection::vec(-1.0f64..1.0, 64)) {
        let scheme = SchemeId::ALL[idx];
        let mut c = config(scheme, "sq-sin2", 1);
        c.rho = rho;
        let mesh = square_mesh(scheme, 2);
        let ops = build_ops(&c, &mesh).unwrap();
        let map = DofMap::new(ops.constrained());
        let (system, _) = assemble_hessian_scheme(ops.as_ref(), |_| Ok(0.0)).unwrap();
        let v: Vec<f64> = (0..map.n_free()).map(|i| seed[i % seed.len()] + 1e-3 * i as f64).collect();
        prop_assert!(system.matrix.is_symmetric(1e-12));
        prop_assert!(system.matrix.bilinear(&v, &v) > 0.0);
    }
}
