//! Seeded random matrices: Gaussian, Haar unitaries, random channels.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::matrix::{ComplexMatrix, C64};

pub type DetRng = ChaCha8Rng;

pub fn rng(seed: u64) -> DetRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn random_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    })
}

pub fn random_phase<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU))
}

/// Haar-random unitary: Gram-Schmidt on a Ginibre matrix with the R-diagonal
/// phases folded back in.
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    isometry_columns(n, n, rng)
}

/// `rows x cols` matrix with orthonormal columns, Haar distributed.
fn isometry_columns<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    let g = random_matrix(rows, cols, rng);
    let mut q: Vec<Vec<C64>> = Vec::with_capacity(cols);
    for j in 0..cols {
        let mut v: Vec<C64> = (0..rows).map(|i| g[(i, j)]).collect();
        // two passes of modified Gram-Schmidt
        for _ in 0..2 {
            for u in &q {
                let dot: C64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, ui) in v.iter_mut().zip(u) {
                    *vi -= ui * dot;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        // the R-diagonal of Ginibre QR is real positive here, so the
        // resulting distribution is already Haar
        v.iter_mut().for_each(|z| *z /= norm);
        q.push(v);
    }
    ComplexMatrix::from_fn(rows, cols, |i, j| q[j][i])
}

/// Kraus operators of a random channel on `C^d` with `rank` Kraus terms,
/// taken from the blocks of a Haar isometry `C^d -> C^rank ⊗ C^d`.
pub fn random_kraus<R: Rng + ?Sized>(d: usize, rank: usize, rng: &mut R) -> Vec<ComplexMatrix> {
    let v = isometry_columns(rank * d, d, rng);
    (0..rank).map(|m| ComplexMatrix::from_fn(d, d, |i, j| v[(m * d + i, j)])).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn haar_unitaries_are_unitary() {
        let mut r = rng(11);
        for n in 1..=8 {
            assert!(haar_unitary(n, &mut r).is_unitary(1e-12));
        }
    }

    #[test]
    fn kraus_operators_are_trace_preserving() {
        let mut r = rng(12);
        let ks = random_kraus(3, 4, &mut r);
        let mut acc = ComplexMatrix::zeros(3, 3);
        for k in &ks {
            acc = &acc + &(&k.dagger() * k);
        }
        assert!(acc.frobenius_distance(&ComplexMatrix::identity(3)) < 1e-12);
    }

    #[test]
    fn seeded_streams_repeat() {
        assert_eq!(random_matrix(2, 2, &mut rng(5)), random_matrix(2, 2, &mut rng(5)));
    }
}
