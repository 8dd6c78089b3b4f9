use ndarray::{Array1, Array2};
use proptest::prelude::*;
use subcut::{GmiLayer, SubadditiveNet, Variant};

const TOL: f64 = 1e-8;

fn layer_and_inputs() -> impl Strategy<Value = (GmiLayer, Array1<f64>, Array1<f64>, Array1<f64>)> {
    (1usize..=5, 1usize..=8).prop_flat_map(|(indim, width)| {
        (
            prop::collection::vec(-10.0..10.0f64, width * indim),
            prop::collection::vec(-10.0..10.0f64, width),
            prop::collection::vec(-10.0..10.0f64, indim),
            prop::collection::vec(-10.0..10.0f64, indim),
            prop::collection::vec(0.0..10.0f64, indim),
        )
            .prop_map(move |(w, v, y1, y2, d)| {
                let layer = GmiLayer::new(
                    Array2::from_shape_vec((width, indim), w).unwrap(),
                    Array1::from(v),
                    Variant::Gmi,
                )
                .unwrap();
                (layer, Array1::from(y1), Array1::from(y2), Array1::from(d))
            })
    })
}

fn col(y: &Array1<f64>) -> Array2<f64> {
    y.clone().insert_axis(ndarray::Axis(1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn layer_is_subadditive_monotone_centered((layer, y1, y2, d) in layer_and_inputs()) {
        let phi = |y: &Array1<f64>| layer.phi(col(y).view()).unwrap().column(0).to_owned();
        let sum = phi(&(&y1 + &y2));
        let parts = phi(&y1) + phi(&y2);
        for (s, p) in sum.iter().zip(parts.iter()) {
            prop_assert!(*s <= p + TOL, "φ(y1+y2) = {s} > {p}");
        }
        let lo = phi(&y1);
        let hi = phi(&(&y1 + &d));
        for (l, h) in lo.iter().zip(hi.iter()) {
            prop_assert!(*l <= h + TOL, "not monotone: {l} > {h}");
        }
        let zero = phi(&Array1::zeros(layer.indim()));
        prop_assert!(zero.iter().all(|&z| z == 0.0));
    }

    #[test]
    fn uddz_dominates_and_is_homogeneous((layer, y1, _y2, _d) in layer_and_inputs()) {
        let y = col(&y1);
        let phi = layer.phi(y.view()).unwrap();
        let bar = layer.phi_bar(y.view()).unwrap();
        for (p, b) in phi.iter().zip(bar.iter()) {
            prop_assert!(*p <= b + TOL);
        }
        for lambda in [0.5, 2.0, 10.0] {
            let scaled = layer.phi_bar((&y * lambda).view()).unwrap();
            for (s, b) in scaled.iter().zip(bar.iter()) {
                prop_assert!((s - lambda * b).abs() <= TOL * (1.0 + (lambda * b).abs()));
            }
        }
    }

    #[test]
    fn log_variant_is_subadditive_where_defined(
        (layer, y1, y2, d) in layer_and_inputs(),
    ) {
        // on nonnegative inputs the plain layer is nonnegative, so log(1 + φ) is defined
        let layer = GmiLayer { variant: Variant::Log, ..layer };
        let y1 = y1.mapv(f64::abs);
        let y2 = y2.mapv(f64::abs);
        let phi = |y: &Array1<f64>| layer.phi(col(y).view()).unwrap().column(0).to_owned();
        let sum = phi(&(&y1 + &y2));
        let parts = phi(&y1) + phi(&y2);
        for (s, p) in sum.iter().zip(parts.iter()) {
            prop_assert!(*s <= p + TOL);
        }
        let lo = phi(&y1);
        let hi = phi(&(&y1 + &d));
        for (l, h) in lo.iter().zip(hi.iter()) {
            prop_assert!(*l <= h + TOL);
        }
    }
}

fn net_strategy() -> impl Strategy<Value = (SubadditiveNet, Array1<f64>, Array1<f64>, Array1<f64>)> {
    (1usize..=3, prop::collection::vec(1usize..=4, 1..=3)).prop_flat_map(|(m, widths)| {
        let mut dims = Vec::new();
        let mut indim = m;
        for &w in &widths {
            dims.push((w, indim));
            indim += w;
        }
        let params: Vec<_> = dims
            .iter()
            .map(|&(w, i)| {
                (
                    prop::collection::vec(-3.0..3.0f64, w * i),
                    prop::collection::vec(-3.0..3.0f64, w),
                )
            })
            .collect();
        (
            params,
            prop::collection::vec(-5.0..5.0f64, m),
            prop::collection::vec(-5.0..5.0f64, m),
            prop::collection::vec(0.0..5.0f64, m),
        )
            .prop_map(move |(params, y1, y2, d)| {
                let layers = params
                    .into_iter()
                    .zip(&dims)
                    .map(|((w, v), &(width, indim))| {
                        GmiLayer::new(
                            Array2::from_shape_vec((width, indim), w).unwrap(),
                            Array1::from(v),
                            Variant::Gmi,
                        )
                        .unwrap()
                    })
                    .collect();
                (
                    SubadditiveNet::new(m, layers).unwrap(),
                    Array1::from(y1),
                    Array1::from(y2),
                    Array1::from(d),
                )
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn composed_network_keeps_the_properties((net, y1, y2, d) in net_strategy()) {
        let f = |y: &Array1<f64>| net.eval(col(y).view()).unwrap().column(0).to_owned();
        let sum = f(&(&y1 + &y2));
        let parts = f(&y1) + f(&y2);
        for (s, p) in sum.iter().zip(parts.iter()) {
            prop_assert!(*s <= p + 1e-7 * (1.0 + p.abs()), "{s} > {p}");
        }
        let lo = f(&y1);
        let hi = f(&(&y1 + &d));
        for (l, h) in lo.iter().zip(hi.iter()) {
            prop_assert!(*l <= h + 1e-7 * (1.0 + h.abs()));
        }
        prop_assert!(f(&Array1::zeros(net.input_dim())).iter().all(|&z| z == 0.0));

        let fb = |y: &Array1<f64>| net.eval_bar(col(y).view()).unwrap().column(0).to_owned();
        let bar = fb(&y1);
        for (p, b) in lo.iter().zip(bar.iter()) {
            prop_assert!(*p <= b + 1e-7 * (1.0 + b.abs()));
        }
    }
}
