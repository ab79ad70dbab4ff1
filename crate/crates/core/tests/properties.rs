use proptest::prelude::*;

use slmod::cli::parse_config;
use slmod::exterior::{gl_act_matrix, theta_matrix};
use slmod::graded::{closure, fiber_action, generator_set, is_invariant, ActionSpec, FiberType, Generator, Window};
use slmod::invariant::small_algebra;
use slmod::linalg::{kernel, rank, Matrix, Scalar, Subspace, Vector};
use slmod::maps::{build_family, family_fiber, map_matrix, symplectic_extend, t_matrix, wedge_matrix, FamilyKind, FamilySpec, MapId};
use slmod::registry::oracle_fiber_dims;
use slmod::torus::{bar, bracket_h, is_symplectic, rank_one_sym, sp_generators, sympl_form, AlgebraKind, Degree};

fn ints(n: usize, bound: i64) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-bound..=bound, n)
}

fn vector(n: usize, bound: i64) -> impl Strategy<Value = Vector> {
    ints(n, bound).prop_map(|v| Vector::from_ints(&v))
}

fn nonzero(n: usize, bound: i64) -> impl Strategy<Value = Vector> {
    vector(n, bound).prop_filter("nonzero", |v| !v.is_zero())
}

fn rational(bound: i64) -> impl Strategy<Value = Scalar> {
    (-bound..=bound, 1..=bound).prop_map(|(a, b)| Scalar::new(a, b).unwrap())
}

fn matrix(rows: usize, cols: usize, bound: i64) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(vector(cols, bound), rows).prop_map(move |rs| Matrix::from_rows_with_cols(&rs, cols).unwrap())
}

fn even() -> impl Strategy<Value = usize> {
    prop_oneof![Just(2usize), Just(4), Just(6)]
}

/// A random element of `sp_N` as a small integer combination of the named
/// generators.
fn sp_element(n: usize) -> impl Strategy<Value = Matrix> {
    let gens = sp_generators(n).unwrap();
    ints(gens.len(), 2).prop_map(move |cs| {
        gens.iter().zip(&cs).fold(Matrix::zeros(n, n), |acc, ((_, g), &c)| acc.add(&g.scale(&Scalar::from_int(c))).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rationals_are_normalised(a in -1000i64..1000, b in prop_oneof![-1000i64..=-1, 1i64..=1000]) {
        let s = Scalar::new(a, b).unwrap();
        let (num, den) = s.as_small().unwrap();
        prop_assert!(den > 0);
        prop_assert_eq!(num_integer::gcd(num, den), 1);
        prop_assert_eq!(s.to_string().parse::<Scalar>().unwrap(), s);
    }

    #[test]
    fn span_is_canonical(m in matrix(4, 5, 3), c in ints(4, 3)) {
        let rows = m.row_vectors();
        let s = Subspace::span(5, &rows).unwrap();
        // adding a combination of the rows and reversing them changes nothing
        let combo = rows.iter().zip(&c).fold(Vector::zeros(5), |acc, (r, &k)| acc.axpy(&Scalar::from_int(k), r).unwrap());
        let mut more: Vec<Vector> = rows.iter().rev().cloned().collect();
        more.push(combo);
        prop_assert_eq!(&Subspace::span(5, &more).unwrap(), &s);
        prop_assert_eq!(&Subspace::span(5, s.basis()).unwrap(), &s);
        prop_assert_eq!(s.dim(), rank(&m));
    }

    #[test]
    fn rank_nullity(m in matrix(3, 6, 4)) {
        let k = kernel(&m);
        prop_assert_eq!(rank(&m) + k.dim(), 6);
        for v in k.basis() {
            prop_assert!(m.mul_vec(v).unwrap().is_zero());
        }
    }

    #[test]
    fn sum_and_intersection_dims(a in matrix(3, 5, 2), b in matrix(2, 5, 2)) {
        let sa = Subspace::row_space(&a);
        let sb = Subspace::row_space(&b);
        let sum = sa.sum(&sb).unwrap();
        let meet = sa.intersect(&sb).unwrap();
        prop_assert_eq!(sum.dim() + meet.dim(), sa.dim() + sb.dim());
        prop_assert!(sa.contains_subspace(&meet).unwrap() && sb.contains_subspace(&meet).unwrap());
    }

    #[test]
    fn exterior_action_respects_brackets(a in matrix(4, 4, 2), b in matrix(4, 4, 2), p in 0usize..=4) {
        let lhs = gl_act_matrix(&a.commutator(&b).unwrap(), p).unwrap();
        let rhs = gl_act_matrix(&a, p).unwrap().commutator(&gl_act_matrix(&b, p).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn contraction_is_equivariant((n, p, a) in even().prop_flat_map(|n| (Just(n), 2..=n, sp_element(n)))) {
        let th = theta_matrix(n, p).unwrap();
        prop_assert_eq!(
            th.mul(&gl_act_matrix(&a, p).unwrap()).unwrap(),
            gl_act_matrix(&a, p - 2).unwrap().mul(&th).unwrap()
        );
    }

    #[test]
    fn rank_one_generators_are_symplectic((_, r) in even().prop_flat_map(|n| (Just(n), vector(n, 3)))) {
        prop_assert!(is_symplectic(&rank_one_sym(&r).unwrap()).unwrap());
    }

    #[test]
    fn hamiltonian_bracket_cocycle((r, s, t) in (ints(4, 2), ints(4, 2), ints(4, 2))) {
        let (r, s, t) = (Degree(r), Degree(s), Degree(t));
        let term = |a: &Degree, b: &Degree, c: &Degree| {
            let (x, ab) = bracket_h(a, b).unwrap();
            let (y, _) = bracket_h(&ab, c).unwrap();
            x * y
        };
        let total = term(&r, &s, &t) + term(&s, &t, &r) + term(&t, &r, &s);
        prop_assert!(total.is_zero());
    }

    #[test]
    fn hamiltonian_action_is_a_representation(
        (p, k, r, s, beta) in (0usize..=4, ints(4, 2), ints(4, 1), ints(4, 1), prop::collection::vec(rational(3), 4))
    ) {
        let spec = ActionSpec::untwisted(AlgebraKind::H, 4, FiberType::Lambda(p), Vector(beta)).unwrap();
        let (k, r, s) = (Degree(k), Degree(r), Degree(s));
        let act = |g: &Degree, at: &Degree| fiber_action(&spec, &Generator::Ham(g.clone()), at).unwrap();
        let c = sympl_form(&r.to_vector(), &s.to_vector()).unwrap();
        let lhs = act(&r.add(&s), &k).scale(&c);
        let rhs = act(&r, &k.add(&s)).mul(&act(&s, &k)).unwrap().sub(&act(&s, &k.add(&r)).mul(&act(&r, &k)).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn field_action_is_a_representation(
        (p, k, r, s, u, v, beta) in (0usize..=3, ints(3, 2), ints(3, 1), ints(3, 1), vector(3, 2), vector(3, 2), prop::collection::vec(rational(3), 3))
    ) {
        // [D(u, r), D(v, s)] = D((u|s) v - (v|r) u, r + s)
        let spec = ActionSpec::untwisted(AlgebraKind::W, 3, FiberType::Lambda(p), Vector(beta)).unwrap();
        let (k, r, s) = (Degree(k), Degree(r), Degree(s));
        let act = |u: &Vector, g: &Degree, at: &Degree| fiber_action(&spec, &Generator::Field { u: u.clone(), r: g.clone() }, at).unwrap();
        let w = v.scale(&u.dot(&s.to_vector()).unwrap()).sub(&u.scale(&v.dot(&r.to_vector()).unwrap())).unwrap();
        let lhs = act(&w, &r.add(&s), &k);
        let rhs = act(&u, &r, &k.add(&s)).mul(&act(&v, &s, &k)).unwrap()
            .sub(&act(&v, &s, &k.add(&r)).mul(&act(&u, &r, &k)).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn frames_are_symplectic_bases((n, v) in even().prop_flat_map(|n| (Just(n), nonzero(n, 3)))) {
        let f = symplectic_extend(&v).unwrap();
        let vs = f.vectors();
        prop_assert_eq!(&vs[0], &v);
        prop_assert_eq!(Subspace::span(n, vs).unwrap().dim(), n);
        for i in 0..n {
            for j in i + 1..n {
                let want = (i, j) == (0, 1) || (i >= 2 && i % 2 == 0 && j == i + 1);
                let got = sympl_form(&vs[i], &vs[j]).unwrap();
                prop_assert_eq!(got, Scalar::from_int(want as i64), "pair ({}, {})", i, j);
            }
        }
    }

    #[test]
    fn oracle_agrees_with_builders((n, x) in even().prop_flat_map(|n| (Just(n), nonzero(n, 2)))) {
        for p in 1..n {
            let o = oracle_fiber_dims(n, p, &x).unwrap();
            let dim = |kind| family_fiber(kind, p, &x).unwrap().dim();
            prop_assert_eq!(
                (o.min, o.fullw, o.int, o.max),
                (dim(FamilyKind::Min), dim(FamilyKind::FullW), dim(FamilyKind::Int), dim(FamilyKind::Max))
            );
            let min = family_fiber(FamilyKind::Min, p, &x).unwrap();
            let int = family_fiber(FamilyKind::Int, p, &x).unwrap();
            let max = family_fiber(FamilyKind::Max, p, &x).unwrap();
            let w = family_fiber(FamilyKind::FullW, p, &x).unwrap();
            prop_assert!(int.contains_subspace(&min).unwrap() && max.contains_subspace(&int).unwrap());
            prop_assert!(w.contains_subspace(&min).unwrap() && max.contains_subspace(&w).unwrap());
        }
    }

    #[test]
    fn complexes_square_to_zero_and_are_exact((n, x) in even().prop_flat_map(|n| (Just(n), nonzero(n, 3)))) {
        for p in 1..n {
            prop_assert!(wedge_matrix(&x, p).unwrap().mul(&wedge_matrix(&x, p - 1).unwrap()).unwrap().is_zero());
            prop_assert!(t_matrix(&x, p).unwrap().mul(&t_matrix(&x, p + 1).unwrap()).unwrap().is_zero());
            let ker_pi = kernel(&wedge_matrix(&x, p).unwrap());
            let im_pi = Subspace::span(ker_pi.ambient_dim(), &wedge_matrix(&x, p - 1).unwrap().col_vectors()).unwrap();
            prop_assert_eq!(ker_pi, im_pi);
            let ker_t = kernel(&t_matrix(&x, p).unwrap());
            prop_assert_eq!(&ker_t, &family_fiber(FamilyKind::Int, p, &x).unwrap());
            let im_t = Subspace::span(ker_t.ambient_dim(), &t_matrix(&x, p + 1).unwrap().col_vectors()).unwrap();
            prop_assert_eq!(ker_t, im_t);
        }
    }

    #[test]
    fn square_map_is_nilpotent((k, beta) in (ints(4, 2), prop::collection::vec(rational(2), 4)), p in 0usize..4) {
        let f = map_matrix(MapId::F(p), &Degree(k), &Vector(beta)).unwrap();
        prop_assert!(f.mul(&f).unwrap().is_zero());
    }

    #[test]
    fn hamiltonian_small_algebra(x in nonzero(4, 3)) {
        let alg = small_algebra(AlgebraKind::H, &x).unwrap();
        prop_assert_eq!(alg.dim(), 3);
        prop_assert!(alg.is_closed().unwrap());
        for a in &alg.basis {
            prop_assert!(is_symplectic(a).unwrap());
            prop_assert!(a.mul_vec(&x).unwrap().is_zero());
            prop_assert!(a.mul_vec(&alg.frame[1]).unwrap().is_zero());
        }
    }

    #[test]
    fn witt_small_algebra(x in nonzero(3, 3)) {
        let alg = small_algebra(AlgebraKind::W, &x).unwrap();
        prop_assert_eq!(alg.dim(), 4);
        prop_assert!(alg.is_closed().unwrap());
    }

    #[test]
    fn pairing_is_the_bar_dot(u in vector(4, 3), v in vector(4, 3)) {
        prop_assert_eq!(sympl_form(&u, &v).unwrap(), bar(&u).unwrap().dot(&v).unwrap());
        prop_assert_eq!(sympl_form(&u, &v).unwrap(), -sympl_form(&v, &u).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn closures_are_invariant_and_monotone(seed in nonzero(2, 2), k in ints(2, 1), beta in prop::collection::vec(rational(2), 2)) {
        let spec = ActionSpec::untwisted(AlgebraKind::H, 2, FiberType::Lambda(1), Vector(beta)).unwrap();
        let window = Window::new(2, 2).unwrap();
        let gens = generator_set(AlgebraKind::H, 2, 1).unwrap();
        let k = Degree(k);
        let one = closure(&spec, &[(k.clone(), seed.clone())], &window, &gens).unwrap();
        prop_assert!(is_invariant(&one, &gens).unwrap().holds);
        let other = Degree(vec![-k.0[0], k.0[1]]);
        let two = closure(&spec, &[(k.clone(), seed.clone()), (other, seed.clone())], &window, &gens).unwrap();
        prop_assert!(two.containment_failures(&one).unwrap().is_empty());
        let wider = generator_set(AlgebraKind::H, 2, 2).unwrap();
        let three = closure(&spec, &[(k, seed)], &window, &wider).unwrap();
        prop_assert!(three.containment_failures(&one).unwrap().is_empty());
    }

    #[test]
    fn twist_never_changes_fibers(alpha in prop::collection::vec(rational(3), 4), p in 1usize..4) {
        let window = Window::new(4, 1).unwrap();
        let beta = Vector(vec![Scalar::new(1, 2).unwrap(), Scalar::zero(), Scalar::zero(), Scalar::zero()]);
        let plain = ActionSpec::new(AlgebraKind::H, 4, FiberType::Scalar, beta.clone(), Vector::zeros(4)).unwrap();
        let twisted = ActionSpec::new(AlgebraKind::H, 4, FiberType::Scalar, beta, Vector(alpha)).unwrap();
        for kind in [FamilyKind::Min, FamilyKind::Int, FamilyKind::Max] {
            let spec = FamilySpec::new(kind, p, false);
            let a = build_family(&spec, &plain, &window).unwrap();
            let b = build_family(&spec, &twisted, &window).unwrap();
            prop_assert_eq!(a.fibers(), b.fibers());
        }
    }

    #[test]
    fn config_round_trips(
        n in prop_oneof![Just(2usize), Just(4)],
        p in prop::option::of(1usize..3),
        beta in prop::collection::vec(rational(4), 4),
        window in 0i64..4,
        rbound in 1i64..3,
        seed in any::<u64>(),
        samples in 1usize..200,
        format in prop_oneof![Just("json"), Just("csv"), Just("text")],
    ) {
        let lit: Vec<String> = beta[..n].iter().map(ToString::to_string).collect();
        let mut argv = vec![
            "slmod".to_string(), "check".into(), "--id".into(), "composition".into(),
            "--N".into(), n.to_string(), "--beta".into(), lit.join(","),
            "--window".into(), window.to_string(), "--rbound".into(), rbound.to_string(),
            "--seed".into(), seed.to_string(), "--samples".into(), samples.to_string(), "--format".into(), format.into(),
        ];
        if let Some(p) = p {
            argv.extend(["--p".to_string(), p.to_string()]);
        }
        let c = parse_config(argv).unwrap();
        let mut again = vec!["slmod".to_string()];
        again.extend(c.to_args());
        prop_assert_eq!(&parse_config(again).unwrap(), &c);
        let echoed: slmod::cli::RunConfig = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
        prop_assert_eq!(echoed, c);
    }
}
