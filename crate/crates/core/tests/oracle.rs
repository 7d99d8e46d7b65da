mod common;

use common::*;
use num_complex::Complex64;
use shapeinv::polykernel::{poly_deriv, poly_eval, real_roots_in, PolySpec};
use shapeinv::spectral::partner_potentials;
use shapeinv::verifier::compatibility_lhs;
use shapeinv::{eval_w, eval_w_deriv, get_family, FamilyTag, ParamPoint};

#[test]
fn catalog_w_and_compatibility_match_reference() {
    let samples = catalog_samples();
    assert_eq!(samples.len(), 100);
    for s in &samples {
        let entry = get_family(tag(&s.family), &s.params).unwrap();
        let f = entry.family.as_ref();
        let w = eval_w(f, s.params.m, s.x).unwrap();
        assert!(close(w, c(s.w), 1e-11, s.w_scale), "{} {:?} x={}: W {w} vs {:?}", s.family, s.params, s.x, s.w);
        let lhs = compatibility_lhs(f, s.params.m, s.x).unwrap();
        assert!(close(lhs, c(s.lhs), 1e-11, s.lhs_scale), "{}: lhs {lhs} vs {:?}", s.family, s.lhs);
        // numerical derivative in the reference is good to far better than 1e-9
        let dw = eval_w_deriv(f, s.params.m, s.x).unwrap();
        assert!(close(dw, c(s.dw), 1e-9, s.w_scale), "{}: W' {dw} vs {:?}", s.family, s.dw);
    }
}

#[test]
fn jacobi_and_laguerre_reference_values() {
    let o = oracle();
    let j = &o["polynomials"]["jacobi"];
    let spec = PolySpec::jacobi(4, -1.7, -3.2);
    let z = Complex64::new(0.35, 0.9);
    let want = Complex64::new(j["value"][0].as_f64().unwrap(), j["value"][1].as_f64().unwrap());
    let dwant = Complex64::new(j["deriv"][0].as_f64().unwrap(), j["deriv"][1].as_f64().unwrap());
    assert!(close(poly_eval(&spec, z).unwrap(), want, 1e-13, 0.0));
    assert!(close(poly_deriv(&spec, z).unwrap(), dwant, 1e-13, 0.0));

    let l = &o["polynomials"]["laguerre"];
    let spec = PolySpec::laguerre(3, -2.25);
    let z = Complex64::new(-0.8, 0.4);
    let want = Complex64::new(l["value"][0].as_f64().unwrap(), l["value"][1].as_f64().unwrap());
    let dwant = Complex64::new(l["deriv"][0].as_f64().unwrap(), l["deriv"][1].as_f64().unwrap());
    assert!(close(poly_eval(&spec, z).unwrap(), want, 1e-13, 0.0));
    assert!(close(poly_deriv(&spec, z).unwrap(), dwant, 1e-13, 0.0));
}

#[test]
fn jacobi_roots_reference() {
    // B = -2, m = -1 gives alpha = 0.5, beta = 1.5
    let o = oracle();
    let want: Vec<f64> = serde_json::from_value(o["polynomials"]["jacobi_roots"]["roots"].clone()).unwrap();
    let got = real_roots_in(&PolySpec::jacobi(2, 0.5, 1.5), (-1.0, 1.0));
    assert_eq!(got.len(), 2);
    for (g, w) in got.iter().zip(&want) {
        assert!((g - w).abs() < 1e-11, "{g} vs {w}");
    }
}

#[test]
fn radial_fixed_points() {
    let o = oracle();
    let fixed = &o["fixed"];
    let p: ParamPoint = serde_json::from_value(fixed["radial_w"]["params"].clone()).unwrap();
    let f = get_family(FamilyTag::X1RadialOscillator, &p).unwrap();
    // 0.5 + 1 - 2 + W1+(1,-2) - W1-(1,-2) = -0.5 + 1 - 0.5
    let w = eval_w(f.family.as_ref(), -2.0, 1.0).unwrap();
    assert!(w.norm() < 1e-15);
    assert!(fixed["radial_w"]["w"][0].as_f64().unwrap().abs() < 1e-15);

    let p: ParamPoint = serde_json::from_value(fixed["radial_lhs"]["params"].clone()).unwrap();
    let f = get_family(FamilyTag::X1RadialOscillator, &p).unwrap();
    let lhs = compatibility_lhs(f.family.as_ref(), -3.0, 1.0).unwrap();
    let want = fixed["radial_lhs"]["lhs"][0].as_f64().unwrap();
    assert!((lhs.re - want).abs() < 1e-13 && lhs.im == 0.0, "{lhs}");
}

#[test]
fn partner_potentials_match_reference() {
    for s in partner_samples() {
        let f = get_family(FamilyTag::X1RadialOscillator, &s.params).unwrap();
        let (vm, vp) = partner_potentials(f.family.as_ref(), s.params.m, &s.x).unwrap();
        for i in 0..s.x.len() {
            let tol = 1e-10 * s.v_minus[i].abs().max(1.0);
            assert!((vm.values[i] - s.v_minus[i]).abs() < tol, "V- {} vs {}", vm.values[i], s.v_minus[i]);
            let tol = 1e-10 * s.v_plus[i].abs().max(1.0);
            assert!((vp.values[i] - s.v_plus[i]).abs() < tol, "V+ {} vs {}", vp.values[i], s.v_plus[i]);
        }
    }
}
