mod common;

use approx::assert_abs_diff_eq;
use ndarray::{array, Array1, Array2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use subcut::net::{cutoff_loss, gmi_warm_start, loss_gradients, WarmStartOptions};
use subcut::{GmiLayer, MilpInstance, SubadditiveNet, Variant};

const H: f64 = 1e-6;

fn rel_error(analytic: &[f64], numeric: &[f64]) -> f64 {
    let diff: f64 = analytic.iter().zip(numeric).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
    let scale: f64 = numeric.iter().map(|b| b * b).sum::<f64>().sqrt();
    if scale < 1e-12 {
        diff
    } else {
        diff / scale
    }
}

fn random_probe(rng: &mut ChaCha8Rng, variant: Variant) -> (MilpInstance, SubadditiveNet, Array1<f64>, Array1<f64>) {
    let m = rng.random_range(1..=3);
    let k = rng.random_range(1..=3);
    let ncont = rng.random_range(0..=2);
    let a = Array2::from_shape_fn((m, k), |_| rng.random_range(-3.0..3.0));
    let g = Array2::from_shape_fn((m, ncont), |_| rng.random_range(-3.0..3.0));
    let b = Array1::from_shape_fn(m, |_| rng.random_range(-3.0..3.0));
    let inst = MilpInstance::new("probe", a, g, b, Array1::ones(k), Array1::ones(ncont), None).unwrap();
    let widths: Vec<usize> = (0..rng.random_range(1..=2)).map(|_| rng.random_range(1..=3)).collect();
    let net = common::random_net(rng, m, &widths, variant);
    let x = Array1::from_shape_fn(k, |_| rng.random_range(0.0..3.0));
    let z = Array1::from_shape_fn(ncont, |_| rng.random_range(0.0..3.0));
    (inst, net, x, z)
}

fn check_probes(variant: Variant, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut passed = 0;
    let mut probes = 0;
    while probes < 100 {
        let (inst, net, x, z) = random_probe(&mut rng, variant);
        if common::near_breakpoint(&net, &inst, 1e-4) {
            continue;
        }
        let Ok(cut) = cutoff_loss(&net, &inst, x.view(), z.view()) else {
            continue; // log domain
        };
        let Some(numeric) = common::fd_gradient(&net, &inst, x.view(), z.view(), H) else {
            continue;
        };
        probes += 1;
        let analytic = loss_gradients(&net, &inst, x.view(), z.view(), &cut.output.cache).unwrap();
        if rel_error(&common::flatten(&analytic), &common::flatten(&numeric)) <= 1e-5 {
            passed += 1;
        }
    }
    assert!(passed >= 95, "only {passed}/100 probes agree with finite differences");
}

#[test]
fn gmi_gradients_match_finite_differences() {
    check_probes(Variant::Gmi, 5);
}

#[test]
fn log_gradients_match_finite_differences() {
    check_probes(Variant::Log, 6);
}

/// `{W·A} = {1} = 0` here, so the loss has a kink in `W`: the tie-break
/// takes the first branch, which is the right-sided derivative, while a
/// central difference averages both sides. `v` is smooth at this point.
#[test]
fn one_dimensional_probe() {
    let inst = MilpInstance::pure_integer("probe", array![[1.0]], array![0.3], array![1.0]).unwrap();
    let net = SubadditiveNet::new(1, vec![GmiLayer::new(array![[1.0]], array![0.5], Variant::Gmi).unwrap()])
        .unwrap();
    let x = array![0.7];
    let z = Array1::zeros(0);
    let cut = cutoff_loss(&net, &inst, x.view(), z.view()).unwrap();
    let analytic = loss_gradients(&net, &inst, x.view(), z.view(), &cut.output.cache).unwrap();
    let forward = common::difference_gradient(&net, &inst, x.view(), z.view(), H, 0.0).unwrap();
    let central = common::fd_gradient(&net, &inst, x.view(), z.view(), H).unwrap();
    assert_abs_diff_eq!(analytic.layers[0].dw[[0, 0]], 0.8, epsilon = 1e-12);
    assert_abs_diff_eq!(analytic.layers[0].dw[[0, 0]], forward.layers[0].dw[[0, 0]], epsilon = 1e-6);
    assert_abs_diff_eq!(central.layers[0].dw[[0, 0]], 0.1, epsilon = 1e-6);
    assert_abs_diff_eq!(analytic.layers[0].dv[0], central.layers[0].dv[0], epsilon = 1e-6);

    // away from the kink the central difference agrees
    let inst = MilpInstance::pure_integer("probe", array![[1.3]], array![0.3], array![1.0]).unwrap();
    let cut = cutoff_loss(&net, &inst, x.view(), z.view()).unwrap();
    let analytic = loss_gradients(&net, &inst, x.view(), z.view(), &cut.output.cache).unwrap();
    let central = common::fd_gradient(&net, &inst, x.view(), z.view(), H).unwrap();
    for (a, n) in common::flatten(&analytic).iter().zip(common::flatten(&central)) {
        assert_abs_diff_eq!(*a, n, epsilon = 1e-6);
    }
}

#[test]
fn dummy_rows_follow_the_active_branch() {
    let inst = common::worked();
    let net = gmi_warm_start(&inst, &[3], &WarmStartOptions::default()).unwrap();
    let x = array![1.5, 0.0];
    let z = Array1::zeros(0);
    let cut = cutoff_loss(&net, &inst, x.view(), z.view()).unwrap();
    let analytic = loss_gradients(&net, &inst, x.view(), z.view(), &cut.output.cache).unwrap();
    let numeric = common::fd_gradient(&net, &inst, x.view(), z.view(), H).unwrap();
    // rows 1 and 2 are padding; row 0 sits on a kink of the fractional part
    for r in 1..3 {
        for j in 0..net.layers()[0].indim() {
            let a = analytic.layers[0].dw[[r, j]];
            let n = numeric.layers[0].dw[[r, j]];
            assert!((a - n).abs() <= 1e-5 * (1.0 + n.abs()), "dW[{r},{j}]: {a} vs {n}");
        }
        assert_abs_diff_eq!(analytic.layers[0].dv[r], numeric.layers[0].dv[r], epsilon = 1e-8);
    }
}
