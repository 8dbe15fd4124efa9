//! Worked examples for each module, checked against values computed by hand
//! or by the reference code in `common`.

mod common;

use std::f64::consts::PI;

use common::{c, cgauss, expm_series, gauss, max_abs, random_matrix, random_skew, simpson, trace_form, M};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sr_stiefel::cutlocus::{
    classify, in_l, real_vn1_cutpoint, search_minimizers, uniqueness_case_checks, verify_antidiagonal_not_cut,
    verify_l_subset_cutlocus, TargetKind, VelocityGrid, DEFAULT_EPS_HIT, DEFAULT_EPS_V,
};
use sr_stiefel::distribution::{
    bracket_generating_rank, lie_bracket, montgomery_condition, montgomery_for_stiefel, section_generates,
    strongly_bracket_check_vn1,
};
use sr_stiefel::geodesic::{
    first_vanishing_time, geodesic_v21_closed, geodesic_vn1_closed, grassmann_geodesic_2kk, length, mirror_velocity,
    normal_geodesic, speed_squared, GeodesicFlow, GeodesicSpec,
};
use sr_stiefel::homspace::{
    canonicalize, connection_form, metric, project_to_grassmann, split_tangent, BlockVelocity, StiefelPoint,
};
use sr_stiefel::matcore::{eig_skew, expm_skew, trace_inner, Field, MetricScale, SkewHermitian, Unitary, I};
use sr_stiefel::Error;

fn skew(m: M, field: Field) -> SkewHermitian {
    SkewHermitian::new(m, field).unwrap()
}

fn col(v: &[Complex64]) -> M {
    M::from_column_slice(v.len(), 1, v)
}

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol
}

// matcore

#[test]
fn trace_inner_examples() {
    let zero = SkewHermitian::zeros(3, Field::Complex);
    assert_eq!(trace_inner(&zero, &zero, MetricScale::Complex2n).unwrap(), 0.0);

    let v = BlockVelocity::vn1(0.0, &[Complex64::from_polar(1.0, 0.4)])
        .unwrap()
        .embed();
    assert!((trace_inner(&v, &v, MetricScale::Complex2n).unwrap() - 8.0).abs() < 1e-12);

    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let x = random_skew(4, false, &mut rng);
    let y = random_skew(4, false, &mut rng);
    let got = trace_inner(
        &skew(x.clone(), Field::Complex),
        &skew(y.clone(), Field::Complex),
        MetricScale::Complex2n,
    )
    .unwrap();
    assert!((got - trace_form(&x, &y, false)).abs() < 1e-12 * (1.0 + got.abs()));
}

#[test]
fn expm_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let x = random_skew(3, false, &mut rng);
    let q = expm_skew(&skew(x, Field::Complex), 0.0).unwrap();
    assert_eq!(q.matrix(), &M::identity(3, 3));

    let rot = M::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0)]);
    let q = expm_skew(&skew(rot.clone(), Field::Real), PI / 2.0).unwrap();
    assert!(max_abs(&(q.matrix() - &rot)) < 1e-15);

    let x = random_skew(5, false, &mut rng);
    let q = expm_skew(&skew(x.clone(), Field::Complex), 0.7).unwrap();
    assert!(max_abs(&(q.matrix() - expm_series(&x.scale(0.7)))) < 1e-10);
}

#[test]
fn eigen_examples() {
    let d = M::from_diagonal(&nalgebra::DVector::from_vec(vec![I, -I]));
    let (values, vectors) = eig_skew(&skew(d, Field::Complex)).unwrap();
    let mut ims: Vec<f64> = values.iter().map(|z| z.im).collect();
    ims.sort_by(f64::total_cmp);
    assert_eq!(ims, vec![-1.0, 1.0]);
    for j in 0..2 {
        let column_norm: f64 = vectors.matrix().column(j).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(
            (column_norm - 1.0).abs() < 1e-15,
            "eigenvectors are coordinate vectors up to phase"
        );
    }

    let v = BlockVelocity::vn1(3.0, &[c(2.0, 0.0)]).unwrap().embed();
    let (values, _) = eig_skew(&v).unwrap();
    let mut ims: Vec<f64> = values.iter().map(|z| z.im).collect();
    ims.sort_by(f64::total_cmp);
    assert!((ims[0] + 1.0).abs() < 1e-12 && (ims[1] - 4.0).abs() < 1e-12);

    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let x = random_skew(6, false, &mut rng);
    let (values, q) = eig_skew(&skew(x.clone(), Field::Complex)).unwrap();
    let d = M::from_diagonal(&nalgebra::DVector::from_vec(values));
    let rebuilt = q.matrix() * d * q.matrix().adjoint();
    assert!(max_abs(&(rebuilt - x)) < 1e-10);
}

#[test]
fn invalid_matrices_are_rejected() {
    let not_skew = M::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
    assert!(matches!(
        SkewHermitian::new(not_skew, Field::Complex),
        Err(Error::NotSkewHermitian(_))
    ));
    let imaginary = M::from_element(1, 1, I);
    assert!(matches!(
        SkewHermitian::new(imaginary, Field::Real),
        Err(Error::ImaginaryInRealMode)
    ));
    let reflection = M::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]);
    assert!(Unitary::new(reflection.clone(), Field::Complex).is_ok());
    assert!(matches!(
        Unitary::new(reflection, Field::Real),
        Err(Error::NotSpecial(_))
    ));
    let nan = M::from_element(1, 1, c(f64::NAN, 0.0));
    assert!(matches!(SkewHermitian::new(nan, Field::Complex), Err(Error::NonFinite)));
}

// homspace

#[test]
fn canonicalize_examples() {
    let p = canonicalize(&Unitary::identity(3, Field::Complex), 1).unwrap();
    assert!(p.is_identity());

    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let lower = common::random_unitary(2, false, &mut rng);
    let mut q = M::identity(3, 3);
    q.view_mut((1, 1), (2, 2)).copy_from(&lower);
    let p = canonicalize(&Unitary::new(q, Field::Complex).unwrap(), 1).unwrap();
    assert!(p.approx_eq(&StiefelPoint::identity(3, 1, Field::Complex).unwrap()));

    let q = common::random_unitary(4, false, &mut rng);
    let p = canonicalize(&Unitary::new(q, Field::Complex).unwrap(), 2).unwrap();
    assert!(max_abs(&(p.cols().adjoint() * p.cols() - M::identity(2, 2))) < 1e-10);
}

#[test]
fn grassmann_projection_examples() {
    let p = StiefelPoint::identity(3, 1, Field::Complex).unwrap();
    let expected = M::from_diagonal(&nalgebra::DVector::from_vec(vec![
        c(1.0, 0.0),
        c(0.0, 0.0),
        c(0.0, 0.0),
    ]));
    assert_eq!(project_to_grassmann(&p).projector(), &expected);

    let phase = Unitary::new(M::from_element(1, 1, Complex64::from_polar(1.0, 1.1)), Field::Complex).unwrap();
    let q = p.right_act(&phase).unwrap();
    assert!(max_abs(&(project_to_grassmann(&q).projector() - &expected)) < 1e-10);

    let last = StiefelPoint::new(col(&[c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]), Field::Complex).unwrap();
    let expected = M::from_diagonal(&nalgebra::DVector::from_vec(vec![
        c(0.0, 0.0),
        c(0.0, 0.0),
        c(1.0, 0.0),
    ]));
    assert_eq!(project_to_grassmann(&last).projector(), &expected);
}

#[test]
fn split_and_connection_examples() {
    let h = BlockVelocity::horizontal(M::from_row_slice(1, 2, &[c(1.0, 2.0), c(0.0, -1.0)]), Field::Complex).unwrap();
    let (vert, hor) = split_tangent(&h.embed(), 1).unwrap();
    assert!(vert.is_zero());
    assert_eq!(hor, h);
    assert!(connection_form(&h).is_zero());

    let fibre = M::from_row_slice(2, 2, &[I, c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
    let (vert, hor) = split_tangent(&skew(fibre.clone(), Field::Complex), 1).unwrap();
    assert_eq!(vert.embed().matrix(), &fibre);
    assert!(hor.is_zero());
    assert_eq!(connection_form(&vert).matrix(), &M::from_element(1, 1, I));

    let mut rng = ChaCha8Rng::seed_from_u64(24);
    let a = random_skew(2, false, &mut rng);
    let b = random_matrix(2, 3, false, &mut rng);
    let v = BlockVelocity::new(skew(a, Field::Complex), b).unwrap();
    let (vert, hor) = split_tangent(&v.embed(), 2).unwrap();
    let cross = trace_inner(&vert.embed(), &hor.embed(), MetricScale::Complex2n).unwrap();
    assert!(cross.abs() < 1e-10);
    assert_eq!(connection_form(&v), vert.a().clone());
}

#[test]
fn metric_examples() {
    let v = BlockVelocity::vn1(0.0, &[Complex64::from_polar(1.0, 2.0)]).unwrap();
    assert!((metric(&v, &v).unwrap() - 8.0).abs() < 1e-12);
    let vert = BlockVelocity::vertical(skew(M::from_element(1, 1, I), Field::Complex), 2).unwrap();
    assert_eq!(metric(&vert, &v).unwrap(), 0.0);
    let zero = BlockVelocity::zero(2, 1, Field::Complex).unwrap();
    assert_eq!(metric(&zero, &zero).unwrap(), 0.0);
}

#[test]
fn velocity_json_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    let v = BlockVelocity::new(
        skew(random_skew(2, false, &mut rng), Field::Complex),
        random_matrix(2, 3, false, &mut rng),
    )
    .unwrap();
    let text = serde_json::to_string(&v).unwrap();
    let back: BlockVelocity = serde_json::from_str(&text).unwrap();
    assert_eq!(back, v);
}

// geodesic

#[test]
fn normal_geodesic_examples() {
    let zero = GeodesicSpec::new(BlockVelocity::zero(3, 2, Field::Complex).unwrap());
    assert!(normal_geodesic(&zero, 2.5).unwrap().is_identity());

    let mut rng = ChaCha8Rng::seed_from_u64(26);
    let a = skew(random_skew(2, false, &mut rng), Field::Complex);
    let fibre_only = GeodesicSpec::new(BlockVelocity::vertical(a, 4).unwrap());
    for t in [0.3, 1.7, 9.0] {
        assert!(normal_geodesic(&fibre_only, t).unwrap().is_identity());
    }

    let spec = GeodesicSpec::new(BlockVelocity::vn1(0.0, &[c(1.0, 0.0)]).unwrap());
    let p = normal_geodesic(&spec, PI).unwrap();
    assert!(close(p.cols()[(0, 0)], c(-1.0, 0.0), 1e-12) && p.cols()[(1, 0)].norm() < 1e-12);
}

#[test]
fn v21_closed_form_examples() {
    let g = geodesic_v21_closed(0.7, c(0.3, -1.2), 0.0);
    assert_eq!(g, [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
    let g = geodesic_v21_closed(0.0, Complex64::from_polar(1.0, 0.9), PI);
    assert!(close(g[0], c(-1.0, 0.0), 1e-12) && g[2].norm() < 1e-12);

    let mut rng = ChaCha8Rng::seed_from_u64(27);
    for _ in 0..50 {
        let (lambda, x2, t) = (gauss(&mut rng), cgauss(&mut rng), 3.0 * gauss(&mut rng).abs());
        let g = geodesic_v21_closed(lambda, x2, t);
        let p = normal_geodesic(&GeodesicSpec::new(BlockVelocity::vn1(lambda, &[x2]).unwrap()), t).unwrap();
        assert!(close(g[0], p.cols()[(0, 0)], 1e-9) && close(g[2], p.cols()[(1, 0)], 1e-9));
        let (g1, g3) = geodesic_vn1_closed(lambda, &[x2], t);
        assert!(close(g1, g[0], 1e-10) && close(g3[0], g[2], 1e-10));
    }
}

#[test]
fn vn1_closed_form_examples() {
    let (g1, g3) = geodesic_vn1_closed(1.3, &[c(0.2, 0.1), c(-1.0, 0.4)], 0.0);
    assert_eq!(g1, c(1.0, 0.0));
    assert!(g3.iter().all(|z| z.norm() == 0.0));

    let b = [c(0.6, 0.0), c(0.0, 0.8)];
    let (g1, g3) = geodesic_vn1_closed(0.0, &b, PI);
    assert!(g3.iter().all(|z| z.norm() < 1e-12));
    let y = common::geodesic(&M::zeros(1, 1), &M::from_row_slice(1, 2, &b), PI);
    assert!(close(g1, y[(0, 0)], 1e-12) && (g1.norm() - 1.0).abs() < 1e-12);
    let p = StiefelPoint::new(col(&[g1, g3[0], g3[1]]), Field::Complex).unwrap();
    assert!(in_l(&p));
}

#[test]
fn grassmann_closed_form_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(28);
    let b = random_matrix(3, 3, false, &mut rng);
    let (g1, g3) = grassmann_geodesic_2kk(&b, Field::Complex, 0.0).unwrap();
    assert_eq!((g1, g3), (M::identity(3, 3), M::zeros(3, 3)));
    let (g1, g3) = grassmann_geodesic_2kk(&M::zeros(2, 2), Field::Complex, 4.0).unwrap();
    assert_eq!((g1, g3), (M::identity(2, 2), M::zeros(2, 2)));

    let b = M::identity(2, 2).scale(1.0 / 2.0_f64.sqrt());
    let t0 = PI * 2.0_f64.sqrt() / 2.0;
    let (g1, g3) = grassmann_geodesic_2kk(&b, Field::Complex, t0).unwrap();
    assert!(max_abs(&g1) < 1e-12);
    assert!(max_abs(&(g3 + M::identity(2, 2))) < 1e-12);

    let u = common::random_unitary(3, false, &mut rng);
    let b = &u / c(3.0_f64.sqrt(), 0.0);
    let (g1, g3) = grassmann_geodesic_2kk(&b, Field::Complex, PI * 3.0_f64.sqrt() / 2.0).unwrap();
    assert!(max_abs(&g1) < 1e-9);
    assert!(max_abs(&(g3 + b.adjoint() * c(3.0_f64.sqrt(), 0.0))) < 1e-9);
}

#[test]
fn length_examples() {
    let v = BlockVelocity::vn1(0.4, &[Complex64::from_polar(1.0, -2.0)]).unwrap();
    assert!((speed_squared(&v) - 8.0).abs() < 1e-12);
    assert!((length(&v, 1.0).unwrap() - 2.0 * 2.0_f64.sqrt()).abs() < 1e-12);
    let vert = BlockVelocity::vertical(skew(M::from_element(1, 1, I), Field::Complex), 3).unwrap();
    assert_eq!(length(&vert, 5.0).unwrap(), 0.0);
    assert!(matches!(length(&v, -1.0), Err(Error::NegativeTime(_))));

    let mut rng = ChaCha8Rng::seed_from_u64(29);
    let a = skew(random_skew(2, false, &mut rng), Field::Complex);
    let v = BlockVelocity::new(a, random_matrix(2, 3, false, &mut rng)).unwrap();
    let flow = GeodesicFlow::new(GeodesicSpec::new(v.clone()));
    let t_end = 1.3;
    let quad = simpson(
        |t| {
            let h = 1e-6 * t.max(1.0);
            let y = flow.point(t).unwrap();
            let dy = (flow.point(t + h).unwrap().cols() - flow.point(t - h).unwrap().cols()) / c(2.0 * h, 0.0);
            y.tangent_metric(&dy).unwrap().sqrt()
        },
        t_end,
    );
    assert!((quad - length(&v, t_end).unwrap()).abs() / quad < 1e-6);
}

#[test]
fn first_vanishing_time_examples() {
    assert!((first_vanishing_time(0.0, &[c(0.6, 0.8)]).unwrap() - PI).abs() < 1e-15);
    let t = first_vanishing_time(3.0, &[c(2.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
    assert!((t - 2.0 * PI / 5.0).abs() < 1e-15);
    assert!(matches!(
        first_vanishing_time(0.0, &[c(0.0, 0.0)]),
        Err(Error::ZeroVelocity)
    ));
}

#[test]
fn mirror_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(30);
    let a = skew(random_skew(2, false, &mut rng), Field::Complex);
    let v = BlockVelocity::new(a.clone(), random_matrix(2, 3, false, &mut rng)).unwrap();
    let m = mirror_velocity(&v, &Unitary::identity(3, Field::Complex)).unwrap();
    assert_eq!(m.a(), v.a());
    assert_eq!(m.b(), &(-v.b()));

    let still = BlockVelocity::vertical(a, 5).unwrap();
    let u = Unitary::new(common::random_unitary(3, false, &mut rng), Field::Complex).unwrap();
    assert_eq!(mirror_velocity(&still, &u).unwrap().b(), still.b());

    let m = mirror_velocity(&v, &u).unwrap();
    assert!((speed_squared(&m) - speed_squared(&v)).abs() < 1e-12 * speed_squared(&v));
}

// distribution

#[test]
fn bracket_examples() {
    let x = BlockVelocity::vn1(0.0, &[c(0.3, -0.7)]).unwrap().embed();
    assert!(lie_bracket(&x, &x).unwrap().is_zero());

    let b = [c(0.3, -0.7), c(1.1, 0.2)];
    let x = BlockVelocity::horizontal(M::from_row_slice(1, 2, &b), Field::Complex)
        .unwrap()
        .embed();
    for (j, bj) in b.iter().enumerate() {
        let mut e = M::zeros(1, 2);
        e[(0, j)] = c(1.0, 0.0);
        let y = BlockVelocity::horizontal(e.clone(), Field::Complex).unwrap().embed();
        let z = lie_bracket(&x, &y).unwrap();
        assert!(close(z.matrix()[(0, 0)], c(0.0, -2.0 * bj.im), 1e-15));

        e[(0, j)] = I;
        let y = BlockVelocity::horizontal(e, Field::Complex).unwrap().embed();
        let z = lie_bracket(&x, &y).unwrap();
        // positive sign: [X, Y]₁₁ = X₁ⱼY_j1 - Y₁ⱼX_j1 = b·i - i·(-b̄) = 2i·Re b
        assert!(close(z.matrix()[(0, 0)], c(0.0, 2.0 * bj.re), 1e-15));
    }
}

#[test]
fn rank_examples() {
    let r = bracket_generating_rank(2, 1, Field::Complex).unwrap();
    assert_eq!((r.dim_h, r.target_dim, r.generating), (2, 3, true));
    let r = bracket_generating_rank(4, 2, Field::Complex).unwrap();
    assert_eq!((r.target_dim, r.generating, r.step), (12, true, Some(2)));
    let r = bracket_generating_rank(3, 1, Field::Real).unwrap();
    assert_eq!((r.dim_h, r.target_dim, r.generating, r.step), (2, 2, true, Some(1)));
    assert!(bracket_generating_rank(3, 3, Field::Complex).is_err());
}

#[test]
fn strong_generation_examples() {
    assert!(strongly_bracket_check_vn1(2).unwrap());
    assert!(strongly_bracket_check_vn1(5).unwrap());
    let tiny =
        BlockVelocity::horizontal(M::from_row_slice(1, 2, &[c(1e-14, 0.0), c(0.0, 0.0)]), Field::Complex).unwrap();
    assert_eq!(section_generates(&tiny).unwrap(), None);
}

#[test]
fn montgomery_examples() {
    let r = montgomery_for_stiefel(4, 2, Field::Complex).unwrap();
    assert_eq!((r.m, r.l, r.condition1, r.possible), (12, 8, true, true));
    let r = montgomery_for_stiefel(4, 3, Field::Complex).unwrap();
    assert_eq!(
        (r.m, r.l, r.condition1, r.condition2, r.possible),
        (15, 6, false, false, false)
    );
    assert!(montgomery_condition(6, 4).unwrap().condition1);
    assert!(matches!(montgomery_condition(5, 4), Err(Error::OutOfScope(_))));
    assert!(matches!(montgomery_condition(5, 5), Err(Error::InvalidArgument(_))));
}

// cutlocus

#[test]
fn l_membership_examples() {
    assert!(!in_l(&StiefelPoint::identity(2, 1, Field::Complex).unwrap()));
    let p = StiefelPoint::new(
        col(&[Complex64::from_polar(1.0, PI / 3.0), c(0.0, 0.0)]),
        Field::Complex,
    )
    .unwrap();
    assert!(in_l(&p));
    let q = StiefelPoint::new(col(&[c(0.0, 0.0), c(1.0, 0.0)]), Field::Complex).unwrap();
    assert!(!in_l(&q));
    assert_eq!(classify(&q).kind, TargetKind::Antidiagonal);
}

#[test]
fn search_antipode_of_v21() {
    let target = StiefelPoint::new(col(&[c(-1.0, 0.0), c(0.0, 0.0)]), Field::Complex).unwrap();
    let r = search_minimizers(&target, &VelocityGrid::default(), DEFAULT_EPS_HIT, DEFAULT_EPS_V).unwrap();
    assert!(r.clusters >= 8, "{} clusters", r.clusters);
    let min = r.min_length.unwrap();
    assert!((min - 2.0 * 2.0_f64.sqrt() * PI).abs() < 1e-6);
    for a in &r.arrivals {
        assert!(a.velocity.is_horizontal());
        let y = common::geodesic(a.velocity.a().matrix(), a.velocity.b(), a.t);
        assert!(max_abs(&(y - target.cols())) <= DEFAULT_EPS_HIT);
    }
}

#[test]
fn search_generic_target_of_v21() {
    let y = common::geodesic(&M::from_element(1, 1, I), &M::from_element(1, 1, c(1.0, 0.0)), 0.3);
    let target = StiefelPoint::new(&y / c(y.norm(), 0.0), Field::Complex).unwrap();
    let r = search_minimizers(&target, &VelocityGrid::default(), DEFAULT_EPS_HIT, DEFAULT_EPS_V).unwrap();
    assert_eq!(r.clusters, 1);
    assert!((r.min_length.unwrap() - 0.3 * 8.0_f64.sqrt()).abs() < 1e-6);
}

#[test]
fn search_identity_is_degenerate() {
    let target = StiefelPoint::identity(2, 1, Field::Complex).unwrap();
    let r = search_minimizers(&target, &VelocityGrid::default(), DEFAULT_EPS_HIT, DEFAULT_EPS_V).unwrap();
    assert_eq!(r.clusters, 1);
    assert_eq!(r.arrivals.len(), 1);
    assert!(r.arrivals[0].velocity.is_zero() && r.arrivals[0].t == 0.0);
}

#[test]
fn search_rejects_bad_thresholds() {
    let target = StiefelPoint::identity(2, 1, Field::Complex).unwrap();
    assert!(search_minimizers(&target, &VelocityGrid::default(), -1.0, DEFAULT_EPS_V).is_err());
    assert!(search_minimizers(&target, &VelocityGrid::default(), DEFAULT_EPS_HIT, 1e-12).is_err());
}

#[test]
fn l_subset_examples() {
    let s = verify_l_subset_cutlocus(2, 1, Field::Complex, 100, 1).unwrap();
    assert!(s.pass && s.tested == 100);
    let s = verify_l_subset_cutlocus(4, 2, Field::Complex, 50, 2).unwrap();
    assert!(s.pass && s.normal_only);
}

#[test]
fn antidiagonal_examples() {
    let s = verify_antidiagonal_not_cut(1, Field::Complex, 20, 3).unwrap();
    assert!(s.pass && (s.t0 - PI / 2.0).abs() < 1e-15);
    let s = verify_antidiagonal_not_cut(2, Field::Complex, 20, 3).unwrap();
    assert!(s.pass && s.min_delay.unwrap() > 0.0);

    let b = M::from_diagonal(&nalgebra::DVector::from_vec(vec![
        c(0.9, 0.0),
        c((1.0_f64 - 0.81).sqrt(), 0.0),
    ]));
    let t0 = PI * 2.0_f64.sqrt() / 2.0;
    let first_zero = PI / (2.0 * (1.0_f64 - 0.81).sqrt());
    assert!(first_zero > t0);
    let (g1, _) = grassmann_geodesic_2kk(&b, Field::Complex, first_zero).unwrap();
    assert!((g1[(1, 1)].re).abs() < 1e-12 && g1[(0, 0)].norm() > 0.1);
}

#[test]
fn uniqueness_examples() {
    let s = uniqueness_case_checks(3, 200, 4).unwrap();
    assert!(s.pass && s.sinc_decreasing);
    let ratio = |x: f64| x.tan() / x;
    assert!((ratio(0.5) - 1.0926).abs() < 1e-4 && (ratio(1.0) - 1.5574).abs() < 1e-4);
}

#[test]
fn real_cutpoint_examples() {
    let p = real_vn1_cutpoint(3).unwrap();
    assert_eq!(p.cols(), &col(&[c(-1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]));
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..10 {
        let b = random_matrix(1, 2, true, &mut rng);
        let b = &b / c(b.norm(), 0.0);
        let y = common::geodesic(&M::zeros(1, 1), &b, PI);
        assert!(max_abs(&(y - p.cols())) < 1e-12);
    }
}
