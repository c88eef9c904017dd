use std::sync::OnceLock;

use proptest::prelude::*;

use akns_multiform::multiform::{conservation_form, hamiltonian_coeff};
use akns_multiform::poisson::{lax_column, multi_time_pb, single_time_pb};
use akns_multiform::{build_frame, AknsFrame, GaussianRational, HamForm, HamOneForm, Poly, Scalar, Variable};

const K: u32 = 4;

fn frame() -> &'static AknsFrame {
    static FRAME: OnceLock<AknsFrame> = OnceLock::new();
    FRAME.get_or_init(|| build_frame(10).unwrap())
}

fn phase_var(max: u32) -> impl Strategy<Value = Variable> {
    (any::<bool>(), 1..=max).prop_map(|(is_e, j)| if is_e { Variable::e(j) } else { Variable::f(j) })
}

/// Polynomials in `e_1..e_max`, `f_1..f_max`.
fn phase_poly(max: u32) -> impl Strategy<Value = Poly> {
    prop::collection::vec((-3i64..4, prop::collection::vec(phase_var(max), 0..4)), 0..4).prop_map(|terms| {
        terms.into_iter().fold(Poly::zero(), |acc, (c, vars)| {
            let m = vars.into_iter().fold(Poly::constant(GaussianRational::from_int(c)), |m, v| &m * &Poly::var(v));
            &acc + &m
        })
    })
}

/// Integer combinations of Lax-form entries and the conservation law.
fn hamiltonian_oneform() -> impl Strategy<Value = HamOneForm> {
    (prop::collection::vec(-2i64..3, 4), 0usize..2).prop_map(|(cs, spectral)| {
        let fr = frame();
        let var = if spectral == 0 { Variable::lambda() } else { Variable::mu() };
        let parts = [
            lax_column(fr, 0, 1, &var, K).unwrap(),
            lax_column(fr, 1, 0, &var, K).unwrap(),
            lax_column(fr, 0, 0, &var, K).unwrap(),
            conservation_form(fr, K).unwrap(),
        ];
        let comps = (0..=K)
            .map(|k| {
                parts.iter().zip(&cs).fold(Poly::zero(), |acc, (part, c)| {
                    &acc + &part.comp(k).scale(&GaussianRational::from_int(*c))
                })
            })
            .collect();
        HamOneForm::new(comps)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn single_time_bracket_is_antisymmetric(f in phase_poly(K), g in phase_poly(K), k in K..=K + 1) {
        let fg = single_time_pb(&f, &g, k).unwrap();
        let gf = single_time_pb(&g, &f, k).unwrap();
        prop_assert!((&fg + &gf).is_zero());
    }

    #[test]
    fn single_time_bracket_is_a_derivation(f in phase_poly(3), g in phase_poly(3), h in phase_poly(3)) {
        for k in 3..=4 {
            let lhs = single_time_pb(&(&f * &g), &h, k).unwrap();
            let rhs = &(&f * &single_time_pb(&g, &h, k).unwrap()) + &(&g * &single_time_pb(&f, &h, k).unwrap());
            prop_assert_eq!(&lhs, &rhs);
            let lhs = single_time_pb(&h, &(&f * &g), k).unwrap();
            let rhs = &(&f * &single_time_pb(&h, &g, k).unwrap()) + &(&g * &single_time_pb(&h, &f, k).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn single_time_jacobi(f in phase_poly(2), g in phase_poly(2), h in phase_poly(2)) {
        let k = 3;
        let br = |x: &Poly, y: &Poly| single_time_pb(x, y, k).unwrap();
        let sum = &(&br(&f, &br(&g, &h)) + &br(&g, &br(&h, &f))) + &br(&h, &br(&f, &g));
        prop_assert!(sum.is_zero());
    }

    #[test]
    fn combinations_satisfy_the_criterion(w in hamiltonian_oneform()) {
        prop_assert!(w.criterion().is_ok());
    }

    #[test]
    fn multi_time_bracket_decomposes(f in hamiltonian_oneform(), g in hamiltonian_oneform()) {
        let HamForm::One(b) = multi_time_pb(&HamForm::One(f.clone()), &HamForm::One(g.clone())).unwrap() else {
            panic!("bracket of 1-forms is a 1-form");
        };
        prop_assert!(b.comp(0).is_zero());
        for k in 1..=K {
            prop_assert_eq!(b.comp(k), &single_time_pb(f.comp(k), g.comp(k), k).unwrap(), "k = {}", k);
        }
    }

    #[test]
    fn commutators_come_from_hamiltonians(i in 0u32..5, j in 0u32..5) {
        let fr = frame();
        let lam = Variable::lambda();
        let q = |k| fr.lax_poly(k, &lam).unwrap();
        let comm = q(i).mul(&q(j)).sub(&q(j).mul(&q(i)));
        let h = hamiltonian_coeff(fr, i, j).unwrap();
        let mut rhs = akns_multiform::Mat2::zero();
        for k in 1..=i.max(j) {
            let (e1, f1) = (Variable::e(1), Variable::f(1));
            let de = q(k).map(|c| &c.partial(&e1) * &h.partial(&Variable::f(k)));
            let df = q(k).map(|c| &c.partial(&f1) * &h.partial(&Variable::e(k)));
            rhs = rhs.add(&de.sub(&df));
        }
        prop_assert!(comm.sub(&rhs).is_zero(), "({}, {})", i, j);
    }

    #[test]
    fn rendering_parses_back(p in phase_poly(K)) {
        let back: Poly = p.to_string().parse().unwrap();
        prop_assert_eq!(back, p);
    }
}
