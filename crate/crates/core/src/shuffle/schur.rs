//! Schur-basis kernels for the shuffle product.
//!
//! With V the Vandermonde product, the normalized kernel satisfies
//! `prod_{i<j} omega(z_i/z_j) = N(z) / V(z)` where
//! `N = prod_{i<j} n(z_i, z_j)` and `n(x, y) = x^2/y - e1 x + e2 y - y^2/x`.
//! Symmetrizing `N P / V` is the alternant of `N P` divided by V, so every
//! monomial `z^a` of `N P` contributes `sign * s_{sort(a) - delta}`.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use parking_lot::RwLock;

/// A Schur label: weakly decreasing integers (entries may be negative).
pub type Label = Vec<i32>;

/// Index of the coefficient `e1^a e2^b` (with sign folded into the integer).
pub type EClass = (u8, u8);

/// A Laurent polynomial whose coefficients are integer combinations of
/// `e1^a e2^b`, grouped by exponent vector.
pub type ClassPoly = Vec<(Vec<i32>, Vec<(EClass, i64)>)>;

/// Terms of `n(x, y)`: (exponent of x, exponent of y, class, sign).
const N_TERMS: [(i32, i32, EClass, i64); 4] = [(2, -1, (0, 0), 1), (1, 0, (1, 0), -1), (0, 1, (0, 1), 1), (-1, 2, (0, 0), -1)];

/// `prod n(z_i, z_j)` over the given ordered pairs.
pub fn pair_product(nvars: usize, pairs: &[(usize, usize)]) -> ClassPoly {
    let mut cur: HashMap<Vec<i32>, HashMap<EClass, i64>> = HashMap::new();
    cur.insert(vec![0; nvars], HashMap::from([((0, 0), 1)]));
    for &(i, j) in pairs {
        let mut next: HashMap<Vec<i32>, HashMap<EClass, i64>> = HashMap::with_capacity(cur.len() * 4);
        for (e, classes) in &cur {
            for &(xi, yj, (a, b), sg) in &N_TERMS {
                let mut e2 = e.clone();
                e2[i] += xi;
                e2[j] += yj;
                let slot = next.entry(e2).or_default();
                for (&(ca, cb), &k) in classes {
                    *slot.entry((ca + a, cb + b)).or_insert(0) += sg * k;
                }
            }
        }
        cur = next;
    }
    let mut out: ClassPoly = cur
        .into_iter()
        .filter_map(|(e, classes)| {
            let mut v: Vec<(EClass, i64)> = classes.into_iter().filter(|(_, k)| *k != 0).collect();
            v.sort();
            (!v.is_empty()).then_some((e, v))
        })
        .collect();
    out.sort();
    out
}

type PolyCache = RwLock<HashMap<(usize, usize), Arc<ClassPoly>>>;

fn cached(cache: &'static OnceLock<PolyCache>, key: (usize, usize), make: impl FnOnce() -> ClassPoly) -> Arc<ClassPoly> {
    let cache = cache.get_or_init(Default::default);
    if let Some(p) = cache.read().get(&key) {
        return p.clone();
    }
    let p = Arc::new(make());
    cache.write().entry(key).or_insert(p).clone()
}

/// `prod_{i < r <= j} n(z_i, z_j)` in `r + s` variables.
pub fn cross_poly(r: usize, s: usize) -> Arc<ClassPoly> {
    static CACHE: OnceLock<PolyCache> = OnceLock::new();
    cached(&CACHE, (r, s), || {
        let pairs: Vec<(usize, usize)> = (0..r).flat_map(|i| (r..r + s).map(move |j| (i, j))).collect();
        pair_product(r + s, &pairs)
    })
}

/// `prod_{i < j} n(z_i, z_j)` in `r` variables.
pub fn full_poly(r: usize) -> Arc<ClassPoly> {
    static CACHE: OnceLock<PolyCache> = OnceLock::new();
    cached(&CACHE, (r, 0), || {
        let pairs: Vec<(usize, usize)> = (0..r).flat_map(|i| (i + 1..r).map(move |j| (i, j))).collect();
        pair_product(r, &pairs)
    })
}

/// Sort `a` decreasingly; return the permutation sign and `sorted - delta`,
/// or `None` if two entries coincide (the alternant vanishes).
pub fn straighten(mut a: Vec<i32>) -> Option<(i64, Label)> {
    let n = a.len();
    let mut sign = 1;
    for i in 1..n {
        let mut j = i;
        while j > 0 && a[j - 1] < a[j] {
            a.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
        if j > 0 && a[j - 1] == a[j] {
            return None;
        }
    }
    for (i, v) in a.iter_mut().enumerate() {
        *v -= (n - 1 - i) as i32;
    }
    Some((sign, a))
}

/// `label + delta`, the exponent of the leading alternant monomial.
pub fn shifted(label: &[i32]) -> Vec<i32> {
    let n = label.len();
    label.iter().enumerate().map(|(i, v)| v + (n - 1 - i) as i32).collect()
}

/// Integer expansion of `s_lambda * s_mu` by class: for each class and
/// label, the integer multiplicity.
pub fn schur_pair_product(lambda: &[i32], mu: &[i32], out: &mut HashMap<(EClass, Label), i64>) {
    let (r, s) = (lambda.len(), mu.len());
    let mut base = shifted(lambda);
    base.extend(shifted(mu));
    let p = cross_poly(r, s);
    for (e, classes) in p.iter() {
        let a: Vec<i32> = base.iter().zip(e).map(|(x, y)| x + y).collect();
        if let Some((sign, label)) = straighten(a) {
            for &(c, k) in classes {
                *out.entry((c, label.clone())).or_insert(0) += sign * k;
            }
        }
    }
}

/// `p_l * s_lambda` as signed labels.
pub fn power_sum_times(lambda: &[i32], l: i32) -> Vec<(i64, Label)> {
    let base = shifted(lambda);
    (0..base.len())
        .filter_map(|i| {
            let mut a = base.clone();
            a[i] += l;
            straighten(a)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn straighten_signs() {
        assert_eq!(straighten(vec![1, 0]), Some((1, vec![0, 0])));
        assert_eq!(straighten(vec![0, 1]), Some((-1, vec![0, 0])));
        assert_eq!(straighten(vec![2, 2]), None);
        assert_eq!(straighten(vec![-1, 3, 1]), Some((1, vec![1, 0, -1])));
    }

    #[test]
    fn cross_poly_sizes() {
        let p = cross_poly(1, 1);
        assert_eq!(p.len(), 4);
        // each factor is homogeneous of degree 1
        for (e, _) in cross_poly(2, 2).iter() {
            assert_eq!(e.iter().sum::<i32>(), 4);
        }
    }

    #[test]
    fn power_sum_on_empty_label() {
        assert_eq!(power_sum_times(&[0, 0], 1), vec![(1, vec![1, 0])]);
    }
}
