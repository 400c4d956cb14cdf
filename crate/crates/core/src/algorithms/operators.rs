//! Variation operators used by the genetic algorithm.
//!
//! Every operator keeps its output inside the encoding: permutation
//! operators return permutations, real operators clamp to the bounds.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::engine::{sample_slot, Bounds, Gene, Slot};

/// Single cut point in `1..len`; swaps tails.
pub fn one_point<T: Clone, R: Rng + ?Sized>(a: &[T], b: &[T], rng: &mut R) -> (Vec<T>, Vec<T>) {
    debug_assert_eq!(a.len(), b.len());
    if a.len() < 2 {
        return (a.to_vec(), b.to_vec());
    }
    let cut = rng.random_range(1..a.len());
    let mut c1 = a[..cut].to_vec();
    c1.extend_from_slice(&b[cut..]);
    let mut c2 = b[..cut].to_vec();
    c2.extend_from_slice(&a[cut..]);
    (c1, c2)
}

/// Each position comes from either parent with probability 1/2.
pub fn uniform<T: Clone, R: Rng + ?Sized>(a: &[T], b: &[T], rng: &mut R) -> (Vec<T>, Vec<T>) {
    let mut c1 = Vec::with_capacity(a.len());
    let mut c2 = Vec::with_capacity(a.len());
    for (x, y) in a.iter().zip(b) {
        if rng.random::<bool>() {
            c1.push(x.clone());
            c2.push(y.clone());
        } else {
            c1.push(y.clone());
            c2.push(x.clone());
        }
    }
    (c1, c2)
}

/// Order crossover (OX1). The child keeps a slice of one parent in place and
/// fills the rest in the other parent's order, starting after the slice.
pub fn order_crossover<R: Rng + ?Sized>(
    a: &[usize],
    b: &[usize],
    rng: &mut R,
) -> (Vec<usize>, Vec<usize>) {
    let n = a.len();
    if n < 2 {
        return (a.to_vec(), b.to_vec());
    }
    let mut i = rng.random_range(0..n);
    let mut j = rng.random_range(0..n);
    if i > j {
        std::mem::swap(&mut i, &mut j);
    }
    (ox_child(a, b, i, j), ox_child(b, a, i, j))
}

fn ox_child(keep: &[usize], fill: &[usize], start: usize, end: usize) -> Vec<usize> {
    let n = keep.len();
    let mut child = vec![usize::MAX; n];
    let mut used = vec![false; n];
    for k in start..=end {
        child[k] = keep[k];
        used[keep[k]] = true;
    }
    let mut pos = (end + 1) % n;
    for k in 0..n {
        let city = fill[(end + 1 + k) % n];
        if !used[city] {
            child[pos] = city;
            used[city] = true;
            pos = (pos + 1) % n;
        }
    }
    child
}

/// Swaps each position with a uniformly chosen partner with probability `rate`.
pub fn swap_mutation<R: Rng + ?Sized>(perm: &mut [usize], rate: f64, rng: &mut R) {
    let n = perm.len();
    if n < 2 {
        return;
    }
    for i in 0..n {
        if rng.random::<f64>() < rate {
            let j = rng.random_range(0..n);
            perm.swap(i, j);
        }
    }
}

pub fn bit_flip<R: Rng + ?Sized>(bits: &mut [bool], rate: f64, rng: &mut R) {
    for b in bits.iter_mut() {
        if rng.random::<f64>() < rate {
            *b = !*b;
        }
    }
}

/// BLX-alpha: each child gene is uniform on the parents' interval widened by
/// `alpha` times its length on both sides, then clamped.
pub fn blend_crossover<R: Rng + ?Sized>(
    a: &[f64],
    b: &[f64],
    alpha: f64,
    bounds: &[Bounds],
    rng: &mut R,
) -> (Vec<f64>, Vec<f64>) {
    let mut draw = |x: f64, y: f64, bound: &Bounds| {
        let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
        let span = hi - lo;
        let u: f64 = rng.random();
        bound.clamp(lo - alpha * span + u * (1.0 + 2.0 * alpha) * span)
    };
    let mut c1 = Vec::with_capacity(a.len());
    let mut c2 = Vec::with_capacity(a.len());
    for ((x, y), bound) in a.iter().zip(b).zip(bounds) {
        c1.push(draw(*x, *y, bound));
        c2.push(draw(*x, *y, bound));
    }
    (c1, c2)
}

/// Adds N(0, (sigma * width)^2) noise to each gene with probability `rate`.
pub fn gaussian_mutation<R: Rng + ?Sized>(
    xs: &mut [f64],
    rate: f64,
    sigma: f64,
    bounds: &[Bounds],
    rng: &mut R,
) {
    for (x, bound) in xs.iter_mut().zip(bounds) {
        if rng.random::<f64>() < rate {
            let z: f64 = StandardNormal.sample(rng);
            *x = bound.clamp(*x + z * sigma * bound.width());
        }
    }
}

/// Redraws each slot uniformly from its range with probability `rate`.
pub fn resample_mutation<R: Rng + ?Sized>(genes: &mut [Gene], slots: &[Slot], rate: f64, rng: &mut R) {
    for (gene, slot) in genes.iter_mut().zip(slots) {
        if rng.random::<f64>() < rate {
            *gene = sample_slot(slot, rng);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{is_permutation, rng_stream};
    use proptest::prelude::*;
    use rand::seq::SliceRandom;
    use rand::Rng;

    #[test]
    fn ox_keeps_slice() {
        let a = [0, 1, 2, 3, 4, 5, 6, 7];
        let b = [7, 6, 5, 4, 3, 2, 1, 0];
        let child = ox_child(&a, &b, 2, 4);
        assert_eq!(&child[2..=4], &[2, 3, 4]);
        assert!(is_permutation(&child));
        // b after the slice gives 1, 0, 7, 6, 5, written from position 5 with wraparound
        assert_eq!(child, vec![6, 5, 2, 3, 4, 1, 0, 7]);
    }

    #[test]
    fn identical_parents_reproduce() {
        let mut rng = rng_stream(1, 0);
        let a = vec![3usize, 1, 0, 2];
        let (c1, c2) = order_crossover(&a, &a, &mut rng);
        assert_eq!(c1, a);
        assert_eq!(c2, a);
        let x = vec![0.3, -1.0];
        let bounds = vec![Bounds::new(-2.0, 2.0); 2];
        let (r1, r2) = blend_crossover(&x, &x, 0.5, &bounds, &mut rng);
        assert_eq!(r1, x);
        assert_eq!(r2, x);
    }

    proptest! {
        #[test]
        fn permutation_operators_are_closed(n in 1usize..40, seed in any::<u64>()) {
            let mut rng = rng_stream(seed, 0);
            let mut a: Vec<usize> = (0..n).collect();
            let mut b: Vec<usize> = (0..n).collect();
            a.shuffle(&mut rng);
            b.shuffle(&mut rng);
            let (mut c1, c2) = order_crossover(&a, &b, &mut rng);
            prop_assert!(is_permutation(&c1) && c1.len() == n);
            prop_assert!(is_permutation(&c2) && c2.len() == n);
            swap_mutation(&mut c1, 0.5, &mut rng);
            prop_assert!(is_permutation(&c1) && c1.len() == n);
        }

        #[test]
        fn real_operators_stay_in_bounds(seed in any::<u64>(), dims in 1usize..8) {
            let mut rng = rng_stream(seed, 0);
            let bounds = vec![Bounds::new(-1.0, 3.0); dims];
            let a: Vec<f64> = (0..dims).map(|_| rng.random_range(-1.0..=3.0)).collect();
            let b: Vec<f64> = (0..dims).map(|_| rng.random_range(-1.0..=3.0)).collect();
            let (mut c1, c2) = blend_crossover(&a, &b, 0.5, &bounds, &mut rng);
            gaussian_mutation(&mut c1, 1.0, 0.5, &bounds, &mut rng);
            prop_assert!(c1.iter().chain(&c2).all(|x| (-1.0..=3.0).contains(x)));
        }
    }
}
