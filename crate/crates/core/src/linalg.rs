//! Rank-revealing helpers on top of nalgebra's SVD.

use nalgebra::DMatrix;

/// Singular values below `SINGULAR_CUTOFF * σ_max` count as zero.
pub const SINGULAR_CUTOFF: f64 = 1e-10;

/// Orthonormal basis (as columns) of the null space of `a`.
pub fn null_space(a: &DMatrix<f64>) -> DMatrix<f64> {
    let cols = a.ncols();
    if cols == 0 {
        return DMatrix::zeros(0, 0);
    }
    // nalgebra's thin SVD only yields min(rows, cols) right singular vectors
    let padded = if a.nrows() < cols {
        let mut p = DMatrix::zeros(cols, cols);
        p.view_mut((0, 0), (a.nrows(), cols)).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("v_t requested");
    let smax = svd.singular_values.max();
    let cut = SINGULAR_CUTOFF * smax;
    let keep: Vec<usize> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| smax == 0.0 || s <= cut)
        .map(|(i, _)| i)
        .collect();
    DMatrix::from_fn(cols, keep.len(), |r, c| v_t[(keep[c], r)])
}

/// Numerical rank with the same relative cutoff as [`null_space`].
pub fn rank(a: &DMatrix<f64>) -> usize {
    if a.is_empty() {
        return 0;
    }
    let sv = a.singular_values();
    let smax = sv.max();
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > SINGULAR_CUTOFF * smax).count()
}

/// Build the matrix of a linear map `R^cols -> R^rows` by applying it to
/// each column of `domain`.
pub fn operator_matrix(
    domain: &DMatrix<f64>,
    mut apply: impl FnMut(&[f64]) -> Vec<f64>,
) -> DMatrix<f64> {
    let k = domain.ncols();
    let images: Vec<Vec<f64>> = (0..k).map(|c| apply(domain.column(c).as_slice())).collect();
    let rows = images.first().map_or(0, Vec::len);
    DMatrix::from_fn(rows, k, |r, c| images[c][r])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn null_space_of_wide_matrix() {
        let a = DMatrix::from_row_slice(1, 3, &[1.0, 1.0, 0.0]);
        let k = null_space(&a);
        assert_eq!(k.ncols(), 2);
        assert!((&a * &k).amax() < 1e-14);
        let gram = k.transpose() * &k;
        assert!((gram - DMatrix::identity(2, 2)).amax() < 1e-14);
    }

    #[test]
    fn full_rank_has_trivial_null_space() {
        let a = DMatrix::<f64>::identity(4, 4);
        assert_eq!(null_space(&a).ncols(), 0);
        assert_eq!(rank(&a), 4);
    }

    #[test]
    fn zero_matrix() {
        let a = DMatrix::<f64>::zeros(2, 3);
        assert_eq!(null_space(&a).ncols(), 3);
        assert_eq!(rank(&a), 0);
    }
}
