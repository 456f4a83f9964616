//! Helpers shared by the integration tests. Nothing here calls the library's
//! own linear algebra, so the checks stay independent of it.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use randrisk::DesignMatrix;

pub fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

pub fn gaussian_matrix(n: usize, p: usize, seed: u64) -> DMatrix<f64> {
    let mut g = rng(seed);
    DMatrix::from_fn(n, p, |_, _| { let z: f64 = StandardNormal.sample(&mut g); z })
}

pub fn gaussian_vector(n: usize, sd: f64, g: &mut ChaCha20Rng) -> DVector<f64> {
    DVector::from_fn(n, |_, _| { let z: f64 = StandardNormal.sample(g); sd * z })
}

pub fn design(n: usize, p: usize, seed: u64) -> DesignMatrix {
    DesignMatrix::new(gaussian_matrix(n, p, seed)).unwrap()
}

/// Mean and standard error of the mean.
pub fn mean_se(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let m = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, (var / n).sqrt())
}

/// Solves `a x = b` by Gaussian elimination with partial pivoting.
pub fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for c in 0..n {
        let piv = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())).unwrap();
        a.swap(c, piv);
        b.swap(c, piv);
        for r in c + 1..n {
            let f = a[r][c] / a[c][c];
            let (top, bottom) = a.split_at_mut(r);
            for (dst, src) in bottom[0][c..].iter_mut().zip(&top[c][c..]) {
                *dst -= f * src;
            }
            b[r] -= f * b[c];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|k| a[r][k] * x[k]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    x
}

/// Least-squares fit of `y` on the columns `cols` of `x` via normal equations.
pub fn ls_fit(x: &DMatrix<f64>, y: &DVector<f64>, cols: &[usize]) -> DVector<f64> {
    let k = cols.len();
    if k == 0 {
        return DVector::zeros(y.len());
    }
    let g: Vec<Vec<f64>> = cols
        .iter()
        .map(|&i| cols.iter().map(|&j| x.column(i).dot(&x.column(j))).collect())
        .collect();
    let b: Vec<f64> = cols.iter().map(|&i| x.column(i).dot(y)).collect();
    let coef = solve(g, b);
    let mut fit = DVector::zeros(y.len());
    for (c, &j) in coef.iter().zip(cols) {
        fit += x.column(j) * *c;
    }
    fit
}

pub fn ls_rss(x: &DMatrix<f64>, y: &DVector<f64>, cols: &[usize]) -> f64 {
    (y - ls_fit(x, y, cols)).norm_squared()
}

/// Every k-subset of 0..p in lexicographic order.
pub fn subsets(p: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, p: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for j in start..p {
            cur.push(j);
            rec(j + 1, p, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, p, k, &mut Vec::new(), &mut out);
    out
}

/// Brute-force best subset by independent least squares.
pub fn brute_best_subset(x: &DMatrix<f64>, y: &DVector<f64>, k: usize) -> Vec<usize> {
    subsets(x.ncols(), k)
        .into_iter()
        .map(|s| (ls_rss(x, y, &s), s))
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .unwrap()
        .1
}

pub fn fixture(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

/// `mean` and `se` from a pin file.
pub fn read_pin(name: &str) -> (f64, f64) {
    let text = std::fs::read_to_string(fixture(name)).unwrap();
    let get = |key: &str| -> f64 {
        text.lines()
            .filter_map(|l| l.split_once('='))
            .find(|(k, _)| k.trim() == key)
            .map(|(_, v)| v.trim().parse().unwrap())
            .unwrap()
    };
    (get("mean"), get("se"))
}

pub fn read_pin_key(name: &str, key: &str) -> f64 {
    let text = std::fs::read_to_string(fixture(name)).unwrap();
    text.lines()
        .filter_map(|l| l.split_once('='))
        .find(|(k, _)| k.trim() == key)
        .map(|(_, v)| v.trim().parse().unwrap())
        .unwrap()
}
