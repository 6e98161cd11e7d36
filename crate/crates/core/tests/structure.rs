use gradlab_core::autos::{
    ad_operator, ad_operator_matrix, build_matrix, h_table, is_automorphism, operator_order, torus_operator,
    MatrixSpec, ParamFamily,
};
use gradlab_core::calibrate::{certify, CalibratedBasis};
use gradlab_core::catalog;
use gradlab_core::liealg::{self, bracket, DIM};
use gradlab_core::pipeline::shared_calibration;
use gradlab_core::FieldElement;
use rayon::prelude::*;

fn commutator(x: &[FieldElement], y: &[FieldElement]) -> Vec<FieldElement> {
    let (a, b) = (liealg::to_matrix(x), liealg::to_matrix(y));
    let m = a.mul(&b).unwrap().sub(&b.mul(&a).unwrap()).unwrap();
    liealg::from_matrix(&m).unwrap()
}

#[test]
fn bracket_is_the_matrix_commutator() {
    for p in 0..DIM {
        for q in 0..DIM {
            let (x, y) = (liealg::unit(p), liealg::unit(q));
            assert_eq!(bracket(&x, &y), commutator(&x, &y), "{p} {q}");
        }
    }
}

#[test]
fn antisymmetry() {
    for p in 0..DIM {
        for q in 0..DIM {
            let (x, y) = (liealg::unit(p), liealg::unit(q));
            let neg: Vec<FieldElement> = bracket(&y, &x).iter().map(|v| -v).collect();
            assert_eq!(bracket(&x, &y), neg);
        }
    }
}

#[test]
fn jacobi_on_all_basis_triples() {
    let failures: usize = (0..DIM)
        .into_par_iter()
        .map(|p| {
            let mut bad = 0;
            for q in 0..DIM {
                for r in 0..DIM {
                    let (x, y, z) = (liealg::unit(p), liealg::unit(q), liealg::unit(r));
                    let s1 = bracket(&x, &bracket(&y, &z));
                    let s2 = bracket(&y, &bracket(&z, &x));
                    let s3 = bracket(&z, &bracket(&x, &y));
                    if !s1.iter().zip(&s2).zip(&s3).all(|((a, b), c)| (&(a + b) + c).is_zero()) {
                        bad += 1;
                    }
                }
            }
            bad
        })
        .sum();
    assert_eq!(failures, 0);
}

fn params() -> Vec<FieldElement> {
    vec![
        FieldElement::from_int(2),
        FieldElement::from_int(3),
        FieldElement::from_int(5),
        FieldElement::from_int(7),
        FieldElement::omega(),
        FieldElement::from_int(-1),
    ]
}

#[test]
fn constants_and_families_are_orthogonal() {
    for n in 1..=8 {
        build_matrix(&MatrixSpec::F(n)).unwrap();
    }
    for n in 1..=14 {
        build_matrix(&MatrixSpec::G(n)).unwrap();
    }
    for fam in ParamFamily::ALL {
        for a in params() {
            build_matrix(&MatrixSpec::Param(fam, a)).unwrap();
        }
    }
    assert!(build_matrix(&MatrixSpec::G(15)).is_err());
    assert!(build_matrix(&MatrixSpec::F(9)).is_err());
    assert!(build_matrix(&MatrixSpec::Param(ParamFamily::P, FieldElement::zero())).is_err());
}

#[test]
fn g_constants_as_products() {
    let m = |s: MatrixSpec| build_matrix(&s).unwrap();
    assert_eq!(m(MatrixSpec::G(1)), m(MatrixSpec::F(8)).mul(&m(MatrixSpec::F(7))));
    assert_eq!(m(MatrixSpec::G(2)), m(MatrixSpec::F(6)).mul(&m(MatrixSpec::F(5))));
    for n in 1..=14 {
        let g = m(MatrixSpec::G(n));
        let g2 = g.mul(&g);
        assert!(g2.mul(&g2).matrix().is_identity(), "g{n} has order dividing 4");
    }
}

#[test]
fn families_are_homomorphisms_of_the_parameter() {
    for fam in ParamFamily::ALL {
        let m = |a: i64| build_matrix(&MatrixSpec::Param(fam, FieldElement::from_int(a))).unwrap();
        assert_eq!(m(2).mul(&m(3)), m(6), "{}", fam.name());
        assert!(m(1).matrix().is_identity());
    }
}

#[test]
fn ad_is_an_antihomomorphism_of_composition() {
    let specs = [
        MatrixSpec::Param(ParamFamily::G, FieldElement::from_int(2)),
        MatrixSpec::G(3),
        MatrixSpec::G(14),
        MatrixSpec::Param(ParamFamily::H, FieldElement::omega()),
    ];
    for p in &specs {
        for q in &specs {
            let (bp, bq) = (build_matrix(p).unwrap(), build_matrix(q).unwrap());
            let lhs = ad_operator_matrix(&bp).mul(&ad_operator_matrix(&bq)).unwrap();
            let rhs = ad_operator_matrix(&bq.mul(&bp));
            assert_eq!(lhs, rhs, "{p} {q}");
            assert!(is_automorphism(&ad_operator_matrix(&bp)));
        }
    }
}

#[test]
fn catalog_generators_commute_pairwise() {
    let basis = shared_calibration().unwrap();
    for id in catalog::ids() {
        let spec = catalog::get_spec(&id).unwrap();
        let ops = spec.operators(Some(basis)).unwrap();
        for (a, x) in ops.iter().enumerate() {
            assert!(is_automorphism(&x.matrix), "{id} generator {a}");
            for y in &ops[a + 1..] {
                assert!(x.commutes_with(y), "{id}");
            }
        }
    }
}

#[test]
fn calibration_certifies() {
    let basis = shared_calibration().unwrap();
    let report = certify(basis).unwrap();
    assert!(report.passed(), "{}", report.describe_failures());
    let h1 = basis.conjugate(&h_table("H1").unwrap().to_matrix()).unwrap();
    let h2 = basis.conjugate(&h_table("H2").unwrap().to_matrix()).unwrap();
    assert!(is_automorphism(&h1) && is_automorphism(&h2));
    assert_eq!(operator_order(&h1, 12), Some(3));
    assert_eq!(operator_order(&h2, 12), Some(6));
    let params = [2, 3, 5, 7].map(FieldElement::from_int);
    let t = torus_operator(params, None, Some(basis)).unwrap();
    assert!(is_automorphism(&t.matrix));
}

#[test]
fn calibration_json_round_trip() {
    let basis = shared_calibration().unwrap();
    let json = basis.to_json().unwrap();
    let back = CalibratedBasis::from_json(&json).unwrap();
    assert_eq!(back.vectors(), basis.vectors());
    let dir = std::env::temp_dir().join(format!("gradlab-cal-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("basis.json");
    basis.save(&path).unwrap();
    assert_eq!(CalibratedBasis::load(&path).unwrap().vectors(), basis.vectors());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn table_operators_need_calibration() {
    let spec = catalog::get_spec("q14").unwrap();
    assert!(spec.operators(None).is_err());
    assert!(catalog::get_spec("q15").is_err());
    assert!(ad_operator(&MatrixSpec::G(1)).is_ok());
}
