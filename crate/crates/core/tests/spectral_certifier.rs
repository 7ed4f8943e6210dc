use frontlab::certify::{
    certify_front, count_negative_eigenvalues, sweep_nu, sweep_row, threshold, CertifyOptions,
    SchrodingerDiscretization, SweepOptions, SymTridiagonal,
};
use frontlab::front::{closed_form_burgers, kdvb_grid, shoot_local_front, ShootingOptions};
use frontlab::spectral::Grid;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Cyclic Jacobi rotations on a dense symmetric matrix.
fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _sweep in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[i][j].powi(2)).sum();
        if off < 1e-26 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i][i]).collect()
}

fn poschl_teller_count(depth: f64, nodes: usize) -> usize {
    let h = 80.0 / (nodes + 1) as f64;
    let xs: Vec<f64> = (1..=nodes).map(|i| -40.0 + i as f64 * h).collect();
    let v: Vec<f64> = xs.iter().map(|x| -depth / (x / 2.0).cosh().powi(2)).collect();
    let d = SchrodingerDiscretization::new(&xs, &v, 40.0).unwrap();
    assert_eq!(d.len(), nodes);
    count_negative_eigenvalues(&d.matrix(0.0).unwrap()).unwrap()
}

#[test]
fn diagonal_count() {
    let t = SymTridiagonal::new(vec![1.0, -2.0, 3.0], vec![0.0, 0.0]).unwrap();
    assert_eq!(count_negative_eigenvalues(&t).unwrap(), 1);
    assert_eq!(t.count_below(2.0).unwrap(), 2);
    assert_eq!(t.count_below(10.0).unwrap(), 3);
}

#[test]
fn poschl_teller_bound_states() {
    // -d^2 - a sech^2(x/2) has ceil(lambda) bound states, lambda (lambda + 1) = 4a
    for (depth, expected) in [(0.25, 1), (0.75, 2)] {
        let lambda = (-1.0 + (1.0 + 16.0 * depth as f64).sqrt()) / 2.0;
        assert_eq!(lambda.ceil() as usize, expected);
        assert_eq!(poschl_teller_count(depth, 4000), expected);
        assert_eq!(poschl_teller_count(depth, 8000), expected);
    }
}

#[test]
fn inertia_count_matches_dense_eigenvalues() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..40 {
        let n = rng.gen_range(2..30);
        let diag: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let off: Vec<f64> = (0..n - 1).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let mut dense = vec![vec![0.0; n]; n];
        for i in 0..n {
            dense[i][i] = diag[i];
            if i + 1 < n {
                dense[i][i + 1] = off[i];
                dense[i + 1][i] = off[i];
            }
        }
        let eig = jacobi_eigenvalues(dense);
        let t = SymTridiagonal::new(diag, off).unwrap();
        for sigma in [-1.0, 0.0, 0.5] {
            if eig.iter().any(|e| (e - sigma).abs() < 1e-8) {
                continue;
            }
            let expected = eig.iter().filter(|e| **e < sigma).count();
            assert_eq!(t.count_below(sigma).unwrap(), expected);
        }
    }
}

#[test]
fn burgers_and_mild_kdvb_fronts_are_certified() {
    let g = Grid::new(2048, 80.0).unwrap();
    let cert = certify_front(&closed_form_burgers(&g).unwrap(), &CertifyOptions::default()).unwrap();
    assert!(cert.satisfied && cert.all_resolved);
    // phi'/2 = -sech^2(x/2)/4 is the shallow Poschl-Teller well
    assert_eq!(cert.at_zero.count, 1);

    let g = kdvb_grid(0.2, 30.0, 0.08).unwrap();
    let f = shoot_local_front(0.2, &g, &ShootingOptions::default()).unwrap();
    let cert = certify_front(&f, &CertifyOptions::default()).unwrap();
    assert!(cert.satisfied);
}

#[test]
fn strongly_dispersive_front_is_not_certified() {
    let row = sweep_row(4.5, &SweepOptions::default());
    assert_eq!(row.satisfied, Some(false), "{row:?}");
    assert!(row.min_count.unwrap() >= 2);
}

#[test]
fn sweep_examples() {
    let nus: Vec<f64> = (1..=5).map(|i| 0.05 * i as f64).collect();
    let opts = SweepOptions::default();
    let rows = sweep_nu(&nus, &opts);
    assert!(rows.iter().all(|r| r.satisfied == Some(true)), "{rows:?}");
    assert!((threshold(&rows).unwrap() - 0.25).abs() < 1e-12);

    for nu in [0.1, 0.25, 1.0] {
        let (a, b) = (sweep_row(nu, &opts), sweep_row(-nu, &opts));
        assert_eq!(a.counts, b.counts, "nu = {nu}");
    }

    let g = kdvb_grid(0.1, 30.0, 0.08).unwrap();
    let f = shoot_local_front(0.1, &g, &ShootingOptions::default()).unwrap();
    let cert = certify_front(&f, &CertifyOptions::default()).unwrap();
    assert!(cert.at_zero.count >= 1);
}

#[test]
fn invalid_eps_is_rejected() {
    let g = Grid::new(1024, 80.0).unwrap();
    let f = closed_form_burgers(&g).unwrap();
    for bad in [0.0, 1.0, -0.1] {
        let opts = CertifyOptions { eps: vec![bad], ..Default::default() };
        assert!(certify_front(&f, &opts).is_err());
    }
}
