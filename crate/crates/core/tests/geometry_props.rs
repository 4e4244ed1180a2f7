use fixcert::geometry::{
    clamp_projection, cone_retraction, flip_coordinates, shell_homeomorphism, shell_homeomorphism_inv,
    ConeShellSpec, Functional, RectDomain,
};
use fixcert::mapdsl::parse_map;
use proptest::prelude::*;

fn functional(dim: usize) -> impl Strategy<Value = Functional> {
    prop_oneof![
        Just(Functional::Linear(vec![1.0; dim])),
        Just(Functional::Sup),
        Just(Functional::Euclid),
        proptest::collection::vec(0.1f64..3.0, dim).prop_map(Functional::Linear),
    ]
}

fn rel_close(a: &[f64], b: &[f64], tol: f64) -> bool {
    let scale = a.iter().chain(b).fold(1e-300f64, |m, v| m.max(v.abs()));
    a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol * scale)
}

fn case() -> impl Strategy<Value = (Functional, Vec<f64>, Vec<f64>, f64)> {
    (1usize..5).prop_flat_map(|dim| {
        (
            functional(dim),
            proptest::collection::vec(0.0f64..10.0, dim),
            proptest::collection::vec(0.01f64..5.0, dim),
            0.1f64..10.0,
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn retraction_laws((l, x, y, a) in case()) {
        let spec = ConeShellSpec::new(x.len(), l.clone(), a, 2.0 * a).unwrap();
        let r = cone_retraction(&x, a, &spec, &y).unwrap();
        prop_assert!(((l.eval(&r) - a) / a).abs() <= 1e-12, "l(r(x)) = {}", l.eval(&r));
        let rr = cone_retraction(&r, a, &spec, &y).unwrap();
        prop_assert!(rel_close(&rr, &r, 1e-12), "{rr:?} vs {r:?}");
        if l.eval(&r) == a {
            prop_assert_eq!(cone_retraction(&r, a, &spec, &y).unwrap(), r);
        }
    }

    #[test]
    fn shell_coordinates_round_trip((l, x, _y, _a) in case()) {
        let lx = l.eval(&x);
        prop_assume!(lx > 0.0);
        let spec = ConeShellSpec::new(x.len(), l, 0.5 * lx, 2.0 * lx).unwrap();
        let (t, u) = shell_homeomorphism(&x, &spec).unwrap();
        let back = shell_homeomorphism_inv(t, &u, &spec).unwrap();
        prop_assert!(rel_close(&back, &x, 1e-12), "{back:?} vs {x:?}");
    }

    #[test]
    fn clamping_is_a_retraction(p in proptest::collection::vec(-10.0f64..10.0, 3)) {
        let r = RectDomain::from_bounds(&[(0.0, 1.0), (-2.0, 2.0), (5.0, 6.0)]).unwrap();
        let c = clamp_projection(&p, &r).unwrap();
        prop_assert!(r.as_box().contains_point(&c).unwrap());
        prop_assert_eq!(clamp_projection(&c, &r).unwrap(), c);
    }
}

#[test]
fn flipping_twice_is_the_identity() {
    let g = parse_map("dim 2\nmap g1 = sin(x1) + x2\nmap g2 = x1*x2").unwrap();
    let ff = flip_coordinates(&flip_coordinates(&g, &[0]).unwrap(), &[0]).unwrap();
    for p in [[0.3, 0.7], [-1.0, 2.0], [0.0, 0.0]] {
        let a = g.eval_real(&p, None).unwrap();
        let b = ff.eval_real(&p, None).unwrap();
        assert!(rel_close(&a, &b, 1e-14), "{a:?} vs {b:?}");
    }
}
