mod common;

use common::classical::{generic_point, identity, round_sphere};
use common::classical_generator;
use qflag_core::podles::{run_pipeline, AlgebraElement};
use qflag_core::Scalar;

#[test]
fn oracle_matches_pipeline_at_q_equal_one() {
    let xe = classical_generator(AlgebraElement::e_act);
    let xf = classical_generator(AlgebraElement::f_act);
    let p = run_pipeline(&Scalar::one()).unwrap();
    let a1 = num::ToPrimitive::to_f64(&p.inputs.a.classical_limit().unwrap()).unwrap();
    for base in [identity(), generic_point()] {
        let o = round_sphere(xe, xf, base);
        let (lambda, residual) = o.lambda();
        eprintln!("metric {:?}\nricci {:?}\nlambda {lambda} residual {residual}", o.metric, o.ricci);
        assert!(residual < 1e-12);
        assert!((a1 - 2.0 * lambda).abs() < 1e-12);
    }
}
