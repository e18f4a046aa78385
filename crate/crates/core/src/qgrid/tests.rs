use proptest::prelude::*;

use super::*;
use crate::qcore::{poch_infinite, theta_prod, DEFAULT_TOL};
use crate::specialfn::{big_b, eig_psi, func_q, halfline_psi, halfline_weight, poly_p, poly_v, weight_w};
use crate::{QError, C64};

fn p0() -> QParams {
    QParams::default_set()
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm()
}

#[test]
fn point_values() {
    let p = p0();
    assert_eq!(point_value(GridPoint::plus(0), &p).unwrap(), 1.0);
    assert_eq!(point_value(GridPoint::minus(2), &p).unwrap(), -0.25);
    assert_eq!(point_value(GridPoint::plus(-3), &p).unwrap(), 8.0);
    assert!(matches!(
        point_value(GridPoint::plus(129), &p),
        Err(QError::OutOfRange { .. })
    ));
}

#[test]
fn params_validation() {
    let q = 0.5;
    assert!(QParams::new(q, C64::new(1.0, 1.0), C64::new(1.0, -1.0), -1.0, 1.0).is_ok());
    // not conjugate, not real
    assert!(QParams::new(q, C64::new(1.0, 1.0), C64::new(1.0, -0.5), -1.0, 1.0).is_err());
    // real, same gap
    assert!(QParams::new(q, C64::new(1.3, 0.0), C64::new(1.7, 0.0), -1.0, 1.0).is_ok());
    // real, straddling q^ℤ
    assert!(QParams::new(q, C64::new(1.3, 0.0), C64::new(2.5, 0.0), -1.0, 1.0).is_err());
    // on the lattice
    assert!(QParams::new(q, C64::new(2.0, 0.0), C64::new(1.5, 0.0), -1.0, 1.0).is_err());
    // negative c, d mirror z_minus
    assert!(QParams::new(q, C64::new(-1.3, 0.0), C64::new(-1.7, 0.0), -1.0, 1.0).is_ok());
    assert!(QParams::new(q, C64::new(1.0, 1.0), C64::new(1.0, -1.0), 1.0, 1.0).is_err());
    assert!(QParams::new(1.5, C64::new(1.0, 1.0), C64::new(1.0, -1.0), -1.0, 1.0).is_err());
    assert!(HalfLineParams::new(0.5, 1.0, 1.3).is_ok());
    assert!(HalfLineParams::new(0.5, 1.0, 0.4).is_err());
}

#[test]
fn windows() {
    let w = GridWindow::new(-2, 3, &Branch::BOTH).unwrap();
    assert_eq!(w.len(), 12);
    assert!(w.contains(GridPoint::minus(3)));
    assert!(!w.contains(GridPoint::plus(4)));
    assert!(GridWindow::new(3, 2, &Branch::BOTH).is_err());
    let v = GridWindow::new(0, 10, &[Branch::Plus]).unwrap();
    let i = w.intersect(&v).unwrap();
    assert_eq!((i.k_min, i.k_max, i.branches.len()), (0, 3, 1));
}

#[test]
fn jackson_zero_and_weight() {
    let p = p0();
    let z = jackson_integral(|_| Ok(C64::new(0.0, 0.0)), &p, DEFAULT_TOL).unwrap();
    assert_eq!(z.value, C64::new(0.0, 0.0));
    let j = jackson_integral(|x| Ok(weight_w(x, &p)?.value), &p, DEFAULT_TOL).unwrap();
    assert!(rel(j.value, big_b(&p).unwrap()) < 1e-11);
    let j1 = jackson_integral(
        |x| Ok(weight_w(x, &p)?.value * poly_p(1, C64::new(point_value(x, &p)?, 0.0), &p)),
        &p,
        DEFAULT_TOL,
    )
    .unwrap();
    assert!(j1.value.norm() < 1e-11 * j1.scale);
}

#[test]
fn jackson_non_convergence() {
    let p = p0().with_k_cap(40);
    let r = jackson_integral(|_| Ok(C64::new(1.0, 0.0)), &p, DEFAULT_TOL);
    assert!(matches!(r, Err(QError::NonConvergence { .. })));
}

#[test]
fn jackson_halfline() {
    let hl = HalfLineParams::default_set();
    let z = jackson_integral_halfline(|_| Ok(C64::new(0.0, 0.0)), &hl, DEFAULT_TOL).unwrap();
    assert_eq!(z.value.norm(), 0.0);
    let j = jackson_integral_halfline(|k| Ok(C64::new(halfline_weight(k, &hl)?, 0.0)), &hl, DEFAULT_TOL).unwrap();
    let qq = poch_infinite(C64::new(0.5, 0.0), hl.q, DEFAULT_TOL).unwrap().value;
    assert!(rel(j.value, qq * (0.5 / hl.c)) < 1e-11);
    let a = C64::new(hl.c / hl.d, 0.0);
    let j = jackson_integral_halfline(
        |k| {
            let z = C64::new(hl.q.pow(-(k as i32)), 0.0);
            Ok(poly_v(1, a, z, hl.q) * halfline_weight(k, &hl)?)
        },
        &hl,
        DEFAULT_TOL,
    )
    .unwrap();
    assert!(j.value.norm() < 1e-12 * j.scale);
}

#[test]
fn q_derivative_examples() {
    let p = p0();
    let x = GridPoint::minus(3);
    assert_eq!(
        q_derivative(|_| Ok(C64::new(4.0, 1.0)), x, &p).unwrap(),
        C64::new(0.0, 0.0)
    );
    let id = |y: GridPoint| Ok(C64::new(point_value(y, &p)?, 0.0));
    assert!((q_derivative(id, GridPoint::plus(-5), &p).unwrap() - 1.0).norm() < 1e-15);
    let dl = |y: GridPoint| Ok(poch_infinite(p.d * point_value(y, &p)?, p.q, DEFAULT_TOL)?.value);
    for x in [GridPoint::plus(2), GridPoint::minus(-1), GridPoint::plus(-4)] {
        let xv = point_value(x, &p).unwrap();
        let want = -p.d / 0.5 * poch_infinite(p.d * 0.5 * xv, p.q, DEFAULT_TOL).unwrap().value;
        assert!(rel(q_derivative(dl, x, &p).unwrap(), want) < 1e-12);
    }
}

#[test]
fn apply_l_examples() {
    let p = p0();
    let one = |_: GridPoint| Ok(C64::new(1.0, 0.0));
    assert_eq!(apply_l(one, GridPoint::plus(4), &p).unwrap(), C64::new(0.0, 0.0));
    let g = C64::new(0.4, -0.7);
    for x in [GridPoint::plus(1), GridPoint::minus(-3), GridPoint::plus(5)] {
        let f = |y: GridPoint| Ok(eig_psi(g, y, &p, false)?.value);
        let r = apply_l(f, x, &p).unwrap() - (g - 1.0) * f(x).unwrap();
        assert!(r.norm() < 1e-10 * f(x).unwrap().norm());
    }
    let sw = QParams::new(0.5, p.d, p.c, p.z_minus, p.z_plus).unwrap();
    let f = |y: GridPoint| Ok(C64::new(point_value(y, &p)?.sin(), 0.3));
    for k in -5..5 {
        let x = GridPoint::minus(k);
        assert!((apply_l(f, x, &p).unwrap() - apply_l(f, x, &sw).unwrap()).norm() < 1e-13);
    }
}

#[test]
fn halfline_operator() {
    let hl = HalfLineParams::default_set();
    // c z₊ = 1 sits on q^ℤ, so the full-line operator is assembled by hand
    let f = |k: u32| Ok(C64::new(1.0 / (1.0 + k as f64), 0.2 * k as f64));
    let (c, d, x) = (C64::new(hl.c, 0.0), C64::new(hl.d, 0.0), hl.point(0));
    let outside = C64::new(7.0, -3.0);
    let full =
        coeff_a(x, c, d) * (outside - f(0).unwrap()) + coeff_b(x, c, d, hl.q.value()) * (f(1).unwrap() - f(0).unwrap());
    let half = apply_l_halfline(f, 0, &hl).unwrap();
    assert!((full - half).norm() < 1e-13);
    let gam = C64::new(0.6, 0.3);
    let psi = |k: u32| Ok(halfline_psi(gam, k, &hl)?.value);
    let r = apply_l_halfline(psi, 0, &hl).unwrap() - (gam - 1.0) * psi(0).unwrap();
    assert!(r.norm() < 1e-11);
    let a = C64::new(hl.c / hl.d, 0.0);
    for n in 0..=8u32 {
        let v = |k: u32| Ok(poly_v(n, a, C64::new(hl.q.pow(-(k as i32)), 0.0), hl.q));
        let mu = C64::new(hl.q.pow(n as i32) - 1.0, 0.0);
        for k in 0..=25 {
            let r = apply_l_halfline(v, k, &hl).unwrap() - mu * v(k).unwrap();
            let sc = v(k).unwrap().norm().max(v(k + 1).unwrap().norm()).max(1.0);
            assert!(r.norm() < 1e-10 * sc, "n {n} k {k}");
        }
    }
}

#[test]
fn casorati_antisymmetric() {
    let p = p0();
    let f = |y: GridPoint| Ok(C64::new(point_value(y, &p)?, 1.0));
    for k in -3..4 {
        assert_eq!(casorati(f, f, GridPoint::plus(k), &p).unwrap(), C64::new(0.0, 0.0));
    }
}

#[test]
fn casorati_psi_pair() {
    let p = p0();
    let g = C64::new(0.6, 0.8);
    let want = -(0.5 / p.d)
        * poch_infinite(g * 0.5, p.q, DEFAULT_TOL).unwrap().value
        * crate::qcore::theta(p.d / p.c, p.q, DEFAULT_TOL).unwrap().value;
    let psi = |y: GridPoint| Ok(eig_psi(g, y, &p, false)?.value);
    let psid = |y: GridPoint| Ok(eig_psi(g, y, &p, true)?.value);
    // binary64 cancellation limits constancy once both solutions grow, k ≲ −5
    for br in Branch::BOTH {
        for k in -4..=10 {
            let v = casorati(psid, psi, GridPoint::new(br, k), &p).unwrap();
            assert!(rel(v, want) < 1e-10, "{br:?} {k}");
        }
    }
}

#[test]
fn inner_products() {
    let p = p0();
    let w = GridWindow::default_window();
    let pn =
        |n: u32| GridFunction::from_fn(w.clone(), |x| Ok(poly_p(n, C64::new(point_value(x, &p)?, 0.0), &p))).unwrap();
    let one = pn(0);
    let b = big_b(&p).unwrap();
    assert!(rel(inner_product(&one, &one, &p, 1e-13).unwrap().value, b) < 1e-11);
    let (p2, p3) = (pn(2), pn(3));
    let n2 = inner_product(&p2, &p2, &p, 1e-13).unwrap().value;
    let n3 = inner_product(&p3, &p3, &p, 1e-13).unwrap().value;
    let want = b * (0.5 * 0.75) * 4.0 * 16.0;
    assert!(rel(n2, want) < 1e-10);
    let off = inner_product(&p2, &p3, &p, 1e-13).unwrap().value;
    assert!(off.norm() < 1e-12 * (n2.norm() * n3.norm()).sqrt());
    assert!(n2.im.abs() < 1e-13 * n2.norm());
}

#[test]
fn inner_product_clipped_window() {
    let p = p0();
    let w = GridWindow::symmetric(-2, 3).unwrap();
    let one = GridFunction::from_fn(w, |_| Ok(C64::new(1.0, 0.0))).unwrap();
    assert!(matches!(
        inner_product(&one, &one, &p, 1e-13),
        Err(QError::NonConvergence { .. })
    ));
}

#[test]
fn telescoping_interior_and_straddling() {
    let p = p0();
    for (a, b) in [(-10, 20), (-3, 5), (0, 40), (-20, -5)] {
        let w = GridWindow::symmetric(a, b).unwrap();
        assert!(symmetry_defect(&p, &w, 30, 11).unwrap() < 1e-11);
    }
}

#[test]
fn telescoping_self_pairing_is_imaginary_free() {
    let p = p0();
    let w = GridWindow::symmetric(-4, 6).unwrap();
    let sup = GridWindow::symmetric(-6, 8).unwrap();
    let f = GridFunction::from_fn(sup, |x| Ok(C64::new((x.k as f64).cos(), 0.1 * x.k as f64) * 1e-3)).unwrap();
    let (lhs, boundary, mass) = truncated_l_pairing(&f, &f, &w, &p).unwrap();
    // ⟨Lf,f⟩ − ⟨f,Lf⟩ = 2i Im⟨Lf,f⟩
    assert!(lhs.re.abs() < 1e-13 * mass);
    assert!((lhs - boundary).norm() < 1e-11 * mass);
}

#[test]
fn telescoping_single_point() {
    // f = δ_x, g = δ_{qx}: ⟨Lf,g⟩ − ⟨f,Lg⟩ = μ(qx)B(qx) − μ(x)A(x) = 0
    let p = p0();
    let w = GridWindow::new(-5, 5, &[Branch::Plus]).unwrap();
    let mut f = GridFunction::zeros(w.clone());
    let mut g = GridFunction::zeros(w.clone());
    f.set(GridPoint::plus(1), C64::new(1.0, 0.0)).unwrap();
    g.set(GridPoint::plus(2), C64::new(1.0, 0.0)).unwrap();
    let (lhs, boundary, mass) = truncated_l_pairing(&f, &g, &w, &p).unwrap();
    assert!(lhs.norm() < 1e-15 * mass);
    assert_eq!(boundary, C64::new(0.0, 0.0));
    for k in -10..10 {
        assert!(detailed_balance_defect(GridPoint::minus(k), &p).unwrap() < 1e-13);
        assert!(detailed_balance_defect(GridPoint::plus(k), &p).unwrap() < 1e-13);
    }
}

#[test]
fn casorati_decay_at_infinity() {
    let p = p0();
    let fs: Vec<Box<dyn Fn(GridPoint) -> crate::Result<C64>>> = vec![
        Box::new(|y| Ok(poly_p(0, C64::new(point_value(y, &p)?, 0.0), &p))),
        Box::new(|y| Ok(poly_p(1, C64::new(point_value(y, &p)?, 0.0), &p))),
        Box::new(|y| Ok(func_q(0, y, &p)?.value)),
    ];
    for i in 0..fs.len() {
        for j in i + 1..fs.len() {
            for br in Branch::BOTH {
                let at = |k| casorati(&fs[i], &fs[j], GridPoint::new(br, k), &p).unwrap().norm();
                let base = at(0);
                let mut prev = f64::INFINITY;
                let mut below = false;
                for k in (-24..=-10).rev() {
                    let v = at(k);
                    if below {
                        assert!(v <= prev, "pair {i}{j} {br:?} k {k}");
                    }
                    below |= v < 1e-6 * base;
                    prev = v;
                }
                assert!(below);
            }
        }
    }
}

#[test]
fn weight_asymptotics() {
    let p = p0();
    for br in Branch::BOTH {
        let z = p.z(br);
        let th = theta_prod(&[p.c * z, p.d * z], p.q, DEFAULT_TOL).unwrap().value;
        for k in [-10, -15] {
            let w = weight_w(GridPoint::new(br, k), &p).unwrap().value;
            let r = w * th / ((p.c * p.d * z * z).powi(k) * p.q.pow(k * (k - 1)));
            assert!((r - 1.0).norm() < 0.5f64.powi(k.abs() - 1), "{br:?} {k}");
        }
    }
}

#[test]
fn ln_weight_matches_direct() {
    let p = p0();
    for x in [0.3, -2.0, 17.0] {
        let direct = weight_w(x, &p).unwrap().value;
        assert!(rel(ln_weight(x, &p).unwrap().to_complex(), direct) < 1e-13);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn telescoping_random(lo in -20i32..10, width in 3i32..40, seed in 0u64..1000) {
        let p = p0();
        let w = GridWindow::symmetric(lo, lo + width).unwrap();
        prop_assert!(symmetry_defect(&p, &w, 1, seed).unwrap() < 1e-10);
    }

    #[test]
    fn jackson_linear(a in -2.0f64..2.0, b in -2.0f64..2.0, t in -1.0f64..1.0) {
        let p = p0();
        let f = |x: GridPoint| Ok(weight_w(x, &p)?.value);
        let h = |x: GridPoint| {
            let xv = point_value(x, &p)?;
            Ok(weight_w(x, &p)?.value * (poly_p(3, C64::new(xv, 0.0), &p) + t * xv * xv))
        };
        let jf = jackson_integral(f, &p, DEFAULT_TOL).unwrap();
        let jh = jackson_integral(h, &p, DEFAULT_TOL).unwrap();
        let js = jackson_integral(|x| Ok(a * f(x)? + b * h(x)?), &p, DEFAULT_TOL).unwrap();
        let tails = js.error_bound() + a.abs() * jf.error_bound() + b.abs() * jh.error_bound();
        prop_assert!((js.value - a * jf.value - b * jh.value).norm() <= tails);
    }

    #[test]
    fn real_functions_real_pairing(s1 in 0.1f64..3.0, s2 in 0.1f64..3.0) {
        let p = p0();
        let w = GridWindow::default_window();
        let f = GridFunction::from_fn(w.clone(), |x| Ok(C64::new((s1 * point_value(x, &p)?).cos(), 0.0))).unwrap();
        let g = GridFunction::from_fn(w, |x| Ok(C64::new((s2 * point_value(x, &p)?).sin() + 1.0, 0.0))).unwrap();
        let v = inner_product(&f, &g, &p, 1e-13).unwrap().value;
        prop_assert!(v.im.abs() <= 1e-13 * v.norm());
    }
}
