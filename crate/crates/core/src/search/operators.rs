//! Permutation operators.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::model::NodeIx;

pub fn is_permutation(genes: &[NodeIx], n: usize) -> bool {
    if genes.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    genes
        .iter()
        .all(|&g| g < n && !std::mem::replace(&mut seen[g], true))
}

pub fn random_permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<NodeIx> {
    let mut genes: Vec<NodeIx> = (0..n).collect();
    genes.shuffle(rng);
    genes
}

/// One-point cut-and-fill crossover: `first[..cut]`, then the remaining
/// genes in the order they appear in `second`.
pub fn order_crossover(first: &[NodeIx], second: &[NodeIx], cut: usize) -> Vec<NodeIx> {
    let cut = cut.min(first.len());
    let mut taken = vec![false; first.len()];
    let mut child = Vec::with_capacity(first.len());
    for &g in &first[..cut] {
        taken[g] = true;
        child.push(g);
    }
    child.extend(second.iter().copied().filter(|&g| !taken[g]));
    child
}

/// Swaps two distinct random positions. No-op below two genes.
pub fn swap_mutation<R: Rng + ?Sized>(genes: &mut [NodeIx], rng: &mut R) {
    let n = genes.len();
    if n < 2 {
        return;
    }
    let i = rng.random_range(0..n);
    let mut j = rng.random_range(0..n - 1);
    if j >= i {
        j += 1;
    }
    genes.swap(i, j);
}

/// Random cut in `1..n`, so both parents contribute.
pub fn random_cut<R: Rng + ?Sized>(n: usize, rng: &mut R) -> usize {
    if n < 2 {
        n
    } else {
        rng.random_range(1..n)
    }
}
