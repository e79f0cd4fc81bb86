mod common;

use common::transforms::{constant, original, shifted, shifted_float};
use common::{fluid, FLUID_VALUE};
use fluctuation::chain::reflect_problem;
use fluctuation::laplace::{
    gs_weights, invert, stehfest_weights, talbot_nodes, InversionConfig, InversionMethod, LaplaceTransform,
};
use fluctuation::wh::PassageTransform;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

#[test]
fn smallest_weight_sets() {
    let one = gs_weights(1, 40);
    assert_eq!(one, vec![BigRational::from_integer(2.into()), BigRational::from_integer((-2).into())]);
    assert_eq!(stehfest_weights(1, 40), one);
    let big = gs_weights(7, 40).into_iter().map(|w| w.abs()).max().unwrap();
    assert_eq!(big, BigRational::from_integer(BigInt::from(7 * 3432 * 35)));
    let total: BigRational = stehfest_weights(8, 80).iter().sum();
    assert!(total.abs() < BigRational::new(1.into(), BigInt::from(10).pow(60)));
}

#[test]
fn talbot_contour_is_symmetric_in_shape() {
    let nodes = talbot_nodes(16);
    assert_eq!(nodes.len(), 16);
    assert_eq!(nodes[0].0.im, 0.0);
    assert!(nodes.iter().skip(1).all(|(z, _)| z.im > 0.0));
}

#[test]
fn constants_come_back_exactly() {
    for method in [InversionMethod::Gaver, InversionMethod::GaverStehfest, InversionMethod::Talbot] {
        for d in 1..=2 {
            let cfg = InversionConfig::for_closed_form(method);
            let t: Vec<f64> = [0.4, 5.0][..d].to_vec();
            let v = invert(&constant(d), &t, &cfg).unwrap();
            assert!((v - 1.0).abs() <= 1e-10, "{method} d={d}: {v}");
        }
    }
}

#[test]
fn three_variables_at_default_terms() {
    let t = [0.5, 0.3, 1.2];
    let e = original(&[1, 2, 1], &t);
    let f = shifted_float(&[1, 2, 1]);
    let tb = invert(&f, &t, &InversionConfig::for_numerical_evaluator(InversionMethod::Talbot, 3)).unwrap();
    assert!((tb - e).abs() <= 1e-8, "{tb}");
    let gs = invert(&f, &t, &InversionConfig::for_numerical_evaluator(InversionMethod::GaverStehfest, 3)).unwrap();
    assert!((gs - e).abs() <= 1e-3, "{gs}");
}

#[test]
fn exponential_pair() {
    let f = shifted(&[1]);
    for t in [0.5, 1.0, 2.0] {
        let gs = invert(&f, &[t], &InversionConfig::gaver_stehfest(12)).unwrap();
        assert!((gs - original(&[1], &[t])).abs() <= 1e-6);
        let tb = invert(&f, &[t], &InversionConfig::talbot(32)).unwrap();
        assert!((tb - original(&[1], &[t])).abs() <= 1e-10);
    }
}

#[test]
fn separable_pair() {
    let t = [0.8, 0.6];
    let e = original(&[1, 2], &t);
    let gs = invert(&shifted(&[1, 2]), &t, &InversionConfig::gaver_stehfest(12)).unwrap();
    assert!((gs - e).abs() <= 1e-5);
    let tb = invert(&shifted(&[1, 2]), &t, &InversionConfig::talbot(32)).unwrap();
    assert!((tb - e).abs() <= 1e-8);
    // double-precision evaluators at their default term counts
    let gs = invert(&shifted_float(&[1, 2]), &t, &InversionConfig::for_numerical_evaluator(InversionMethod::GaverStehfest, 2)).unwrap();
    assert!((gs - e).abs() <= 1e-3);
    let tb = invert(&shifted_float(&[1, 2]), &t, &InversionConfig::for_numerical_evaluator(InversionMethod::Talbot, 2)).unwrap();
    assert!((tb - e).abs() <= 1e-10);
}

#[test]
fn wrong_arity_and_bad_points() {
    let f = constant(2);
    assert!(invert(&f, &[1.0], &InversionConfig::gaver_stehfest(5)).is_err());
    assert!(invert(&f, &[1.0, 0.0], &InversionConfig::gaver_stehfest(5)).is_err());
    assert!(invert(&f, &[1.0, 1.0], &InversionConfig::gaver_stehfest(0)).is_err());
}

#[test]
fn fluid_transform_talbot_and_gs_agree() {
    let (s, d) = fluid();
    let (rs, rd) = reflect_problem(&s, &d);
    let tr = PassageTransform::pi_plus(&rs, &rd, 0.5, 0, 1).unwrap();
    assert!(tr.has_complex());
    let t = [2.0, 6.0];
    let gs = invert(&tr, &t, &InversionConfig::for_numerical_evaluator(InversionMethod::GaverStehfest, 2)).unwrap();
    let tb = invert(&tr, &t, &InversionConfig::for_numerical_evaluator(InversionMethod::Talbot, 2)).unwrap();
    assert!((gs - tb).abs() <= 1e-4, "{gs} vs {tb}");
    assert!((tb - FLUID_VALUE).abs() <= 2e-3);
    assert!(tr.max_residual() <= 1e-8);
}
