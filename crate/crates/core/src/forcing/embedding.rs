use super::basis::PotentialBasis;

/// Image points must differ by more than this factor times their circle distance.
pub const EMBEDDING_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmbeddingWitness {
    /// Two grid points with (numerically) the same image.
    Collision(usize, usize),
    /// Grid point where the derivative of the map vanishes.
    Degenerate(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EmbeddingReport {
    pub pass: bool,
    pub witness: Option<EmbeddingWitness>,
}

pub fn check_embedding(basis: &PotentialBasis) -> EmbeddingReport {
    check_embedding_with(basis, EMBEDDING_TOLERANCE, EMBEDDING_TOLERANCE)
}

/// Grid check that `x ↦ (F^1(x), …, F^K(x))` is injective with non-vanishing
/// derivative. Pairs are scanned in lexicographic order before gradients.
pub fn check_embedding_with(basis: &PotentialBasis, separation: f64, gradient: f64) -> EmbeddingReport {
    let m = basis.grid_size();
    let image = |i: usize| basis.values().iter().map(move |row| row[i]);
    for i in 0..m {
        for j in i + 1..m {
            let dist2: f64 = image(i).zip(image(j)).map(|(a, b)| (a - b) * (a - b)).sum();
            let gap = (j - i).min(m - (j - i)) as f64 / m as f64;
            if dist2.sqrt() <= separation * gap {
                return EmbeddingReport { pass: false, witness: Some(EmbeddingWitness::Collision(i, j)) };
            }
        }
    }
    for i in 0..m {
        let norm2: f64 = basis.gradients().iter().map(|row| row[i] * row[i]).sum();
        if norm2.sqrt() <= gradient {
            return EmbeddingReport { pass: false, witness: Some(EmbeddingWitness::Degenerate(i)) };
        }
    }
    // The derivative is also checked on the piecewise-linear interpolation of the
    // sampled gradients, so a zero crossing between grid points is caught too.
    for i in 0..m {
        let j = (i + 1) % m;
        let a: Vec<f64> = basis.gradients().iter().map(|row| row[i]).collect();
        let d: Vec<f64> = basis.gradients().iter().map(|row| row[j] - row[i]).collect();
        let dd: f64 = d.iter().map(|x| x * x).sum();
        let s = if dd > 0.0 {
            (-a.iter().zip(&d).map(|(x, y)| x * y).sum::<f64>() / dd).clamp(0.0, 1.0)
        } else {
            0.0
        };
        let norm2: f64 = a.iter().zip(&d).map(|(x, y)| (x + s * y).powi(2)).sum();
        if norm2.sqrt() <= gradient {
            return EmbeddingReport { pass: false, witness: Some(EmbeddingWitness::Degenerate(i)) };
        }
    }
    EmbeddingReport { pass: true, witness: None }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forcing::FourierMode;

    #[test]
    fn circle_is_embedded() {
        let b = PotentialBasis::fourier(&[FourierMode::cos(1), FourierMode::sin(1)], 64).unwrap();
        assert_eq!(check_embedding(&b), EmbeddingReport { pass: true, witness: None });
    }

    #[test]
    fn double_cover_collides_at_antipodes() {
        let b = PotentialBasis::fourier(&[FourierMode::cos(2), FourierMode::sin(2)], 64).unwrap();
        let r = check_embedding(&b);
        assert!(!r.pass);
        assert_eq!(r.witness, Some(EmbeddingWitness::Collision(0, 32)));
    }

    #[test]
    fn even_function_collides() {
        let b = PotentialBasis::fourier(&[FourierMode::cos(1)], 64).unwrap();
        let r = check_embedding(&b);
        assert!(!r.pass);
        match r.witness {
            Some(EmbeddingWitness::Collision(i, j)) => assert_eq!((i + j) % 64, 0),
            w => panic!("unexpected witness {w:?}"),
        }
    }

    #[test]
    fn every_single_row_basis_fails() {
        for f in 1..4 {
            for mode in [FourierMode::cos(f), FourierMode::sin(f), FourierMode { frequency: f, phase: 0.3 }] {
                let b = PotentialBasis::fourier(&[mode], 48).unwrap();
                assert!(!check_embedding(&b).pass);
            }
        }
    }

    #[test]
    fn flat_derivative_is_caught() {
        let m = 16;
        let x: Vec<f64> = (0..m).map(|i| i as f64).collect();
        let values = vec![x.clone(), x.iter().map(|v| v * v).collect()];
        let mut gradients = vec![vec![1.0; m], vec![1.0; m]];
        gradients[0][5] = 0.0;
        gradients[1][5] = 0.0;
        let b = PotentialBasis::from_tables(values, gradients, vec![vec![0.0; m]; 2]).unwrap();
        assert_eq!(check_embedding(&b).witness, Some(EmbeddingWitness::Degenerate(5)));
    }
}
