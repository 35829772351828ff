mod common;

use common::*;
use proptest::prelude::*;
use sflab_core::linalg::{eigendecompose, DEFAULT_DENSE_LIMIT};
use sflab_core::{erdos_renyi, normalized_laplacian, CsrMatrix, Error, Graph, Matrix};

#[test]
fn triangle_laplacian_and_spectrum() {
    let g = Graph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
    let l = normalized_laplacian::<f64>(&g);
    for i in 0..3 {
        for j in 0..3 {
            let want = if i == j { 1.0 } else { -0.5 };
            assert!((l.get(i, j) - want).abs() < 1e-15);
        }
    }
    let es = eigendecompose(&l, DEFAULT_DENSE_LIMIT).unwrap();
    for (got, want) in es.eigenvalues.iter().zip([0.0, 1.5, 1.5]) {
        assert!((got - want).abs() < 1e-12);
    }
    let ones = Matrix::from_vec(3, 1, vec![1.0; 3]).unwrap();
    assert!(l.spmv(&ones).unwrap().max_abs() < 1e-15);
}

#[test]
fn small_graph_shapes() {
    let pair = normalized_laplacian::<f64>(&Graph::new(2, [(0, 1)]).unwrap()).to_dense();
    assert_eq!(to_rows(&pair), vec![vec![1.0, -1.0], vec![-1.0, 1.0]]);
    let es = eigendecompose(&normalized_laplacian::<f64>(&Graph::new(2, [(0, 1)]).unwrap()), 10).unwrap();
    assert!(es.eigenvalues[0].abs() < 1e-15 && (es.eigenvalues[1] - 2.0).abs() < 1e-15);
    let single = normalized_laplacian::<f64>(&Graph::new(1, []).unwrap()).to_dense();
    assert_eq!(to_rows(&single), vec![vec![1.0]]);
    let iso = normalized_laplacian::<f64>(&Graph::new(3, [(0, 1)]).unwrap());
    assert_eq!(iso.get(2, 2), 1.0);
}

#[test]
fn eigensolver_limits() {
    let l = normalized_laplacian::<f64>(&erdos_renyi(12, 0.3, 1).unwrap());
    assert!(matches!(eigendecompose(&l, 11), Err(Error::DimensionExceeded { n: 12, limit: 11 })));
    let asym = CsrMatrix::from_triplets(2, 2, &[(0, 1, 1.0), (1, 0, 2.0)]).unwrap();
    assert!(matches!(eigendecompose(&asym, 10), Err(Error::NotSymmetric { .. })));
}

#[test]
fn identity_eigensystem() {
    let es = eigendecompose(&CsrMatrix::<f64>::identity(3), 10).unwrap();
    assert_eq!(es.eigenvalues, vec![1.0; 3]);
    assert!(es.reconstruct().max_abs_diff(&Matrix::identity(3)).unwrap() < 1e-14);
}

fn check_eigensystem(g: &Graph) {
    let l = normalized_laplacian::<f64>(g);
    let es = eigendecompose(&l, DEFAULT_DENSE_LIMIT).unwrap();
    let u = to_rows(&es.eigenvectors);
    let utu = naive_matmul(&transpose(&u), &u);
    let n = g.node_count();
    for i in 0..n {
        for j in 0..n {
            let want = if i == j { 1.0 } else { 0.0 };
            assert!((utu[i][j] - want).abs() < 1e-8);
        }
    }
    let ul: Vec<Vec<f64>> = u.iter().map(|r| r.iter().zip(&es.eigenvalues).map(|(a, l)| a * l).collect()).collect();
    let rec = naive_matmul(&ul, &transpose(&u));
    let dense = dense_laplacian(g);
    let diff: Vec<Vec<f64>> = rec.iter().zip(&dense).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x - y).collect()).collect();
    assert!(frobenius(&diff) < 1e-8);
    assert!(es.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    assert!(es.eigenvalues.iter().all(|&v| (-1e-9..=2.0 + 1e-9).contains(&v)));
}

#[test]
fn er_50_reconstruction() {
    check_eigensystem(&erdos_renyi(50, 0.3, 7).unwrap());
}

#[test]
fn er_500_reconstruction() {
    check_eigensystem(&erdos_renyi(500, 0.05, 11).unwrap());
}

#[test]
fn erdos_renyi_extremes_and_mean() {
    assert_eq!(erdos_renyi(20, 0.0, 3).unwrap().edge_count(), 0);
    assert_eq!(erdos_renyi(20, 1.0, 3).unwrap().edge_count(), 190);
    assert!(matches!(erdos_renyi(5, 1.5, 0), Err(Error::InvalidProbability(_))));
    let counts: Vec<f64> = (0..50).map(|s| erdos_renyi(100, 0.5, s).unwrap().edge_count() as f64).collect();
    let mean = counts.iter().sum::<f64>() / 50.0;
    // Binomial(4950, 0.5): sd of a single draw is √1237.5; of the mean, that over √50.
    let sd_mean = (4950.0f64 * 0.25).sqrt() / 50f64.sqrt();
    assert!((mean - 2475.0).abs() < 3.0 * sd_mean, "mean {mean}");
    assert_eq!(erdos_renyi(30, 0.4, 9).unwrap(), erdos_renyi(30, 0.4, 9).unwrap());
}

#[test]
fn edge_list_roundtrip() {
    let g = erdos_renyi(40, 0.2, 5).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.tsv");
    g.save(&path).unwrap();
    assert_eq!(Graph::load(&path).unwrap(), g);
}

#[test]
fn spmv_dimension_checked() {
    let l = CsrMatrix::<f64>::identity(3);
    assert!(matches!(l.spmv(&Matrix::zeros(4, 2)), Err(Error::DimensionMismatch { .. })));
    assert_eq!(CsrMatrix::<f64>::zeros(3, 3).spmv(&Matrix::identity(3)).unwrap(), Matrix::zeros(3, 3));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn spmv_matches_dense(n in 1usize..100, m in 1usize..6, p in 0.0f64..1.0, seed in any::<u64>()) {
        let g = erdos_renyi(n, p, seed).unwrap();
        let l = normalized_laplacian::<f64>(&g);
        let mut r = rng(seed ^ 0xabc);
        let x = random_matrix(n, m, &mut r);
        let got = to_rows(&l.spmv(&x).unwrap());
        let want = naive_matmul(&dense_laplacian(&g), &to_rows(&x));
        prop_assert!(max_abs_diff(&got, &want) < 1e-12);
    }

    #[test]
    fn laplacian_spectrum_in_range(n in 1usize..60, p in 0.0f64..1.0, seed in any::<u64>()) {
        let g = erdos_renyi(n, p, seed).unwrap();
        let l = normalized_laplacian::<f64>(&g);
        prop_assert!(l.is_symmetric(1e-12));
        let es = eigendecompose(&l, DEFAULT_DENSE_LIMIT).unwrap();
        prop_assert!(es.eigenvalues.iter().all(|&v| (-1e-9..=2.0 + 1e-9).contains(&v)));
        prop_assert!(es.laplacian_spectrum().iter().all(|&v| (0.0..=2.0).contains(&v)));
        prop_assert!(es.reconstruct().max_abs_diff(&l.to_dense()).unwrap() < 1e-10);
    }

    #[test]
    fn edge_list_text_roundtrip(n in 1usize..40, p in 0.0f64..1.0, seed in any::<u64>()) {
        let g = erdos_renyi(n, p, seed).unwrap();
        let mut buf = Vec::new();
        g.write_edge_list(&mut buf).unwrap();
        prop_assert_eq!(Graph::read_edge_list(&buf[..]).unwrap(), g);
    }
}
