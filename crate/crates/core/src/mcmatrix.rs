//! Companion and multi-companion matrices, eigen specifications and the
//! innovation-mixing matrix.
//!
//! A companion matrix `A_s` holds one season's coefficients in its top row
//! over a shifted identity. The year-transition matrix `F_d = A_d ... A_1`
//! is multi-companion: its first `d` rows are free and rows `d+1..=m` are a
//! shifted identity. Every eigenvector of `F_d` for a nonzero eigenvalue is
//! determined by its leading `d` elements (the seed-vector), which is what
//! makes eigen-based construction and estimation practical.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::{season_of, NoiseSpec, PeriodicCoefficients};

/// Square companion matrix: free top row, shifted identity below.
#[derive(Debug, Clone, PartialEq)]
pub struct CompanionMatrix<T: Scalar> {
    top_row: DVector<T>,
}

impl<T: Scalar> CompanionMatrix<T> {
    pub fn new(top_row: DVector<T>) -> Result<Self> {
        if top_row.is_empty() {
            return Err(Error::InvalidParameter("companion dimension must be >= 1".into()));
        }
        if let Some(index) = top_row.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue { index });
        }
        Ok(Self { top_row })
    }

    pub fn dim(&self) -> usize {
        self.top_row.len()
    }

    pub fn top_row(&self) -> &DVector<T> {
        &self.top_row
    }

    pub fn to_matrix(&self) -> DMatrix<T> {
        let m = self.dim();
        let mut a = DMatrix::zeros(m, m);
        for j in 0..m {
            a[(0, j)] = self.top_row[j];
        }
        for i in 1..m {
            a[(i, i - 1)] = T::one();
        }
        a
    }
}

/// Companion matrix of season `s`: top row `(phi_1s, ..., phi_ps, 0, ..., 0)`
/// with dimension `m = max(p, d)`.
pub fn companion_from_coeffs<T: Scalar>(
    coeffs: &PeriodicCoefficients<T>,
    season: usize,
) -> Result<CompanionMatrix<T>> {
    let d = coeffs.period();
    if season < 1 || season > d {
        return Err(Error::SeasonOutOfRange { season, period: d });
    }
    let m = coeffs.order().max(d);
    let top = DVector::from_fn(m, |i, _| coeffs.phi(i + 1, season));
    CompanionMatrix::new(top)
}

/// Product of `d` companion matrices; first `d` rows free, rows `d+1..=m`
/// a shifted identity.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiCompanion<T: Scalar> {
    entries: DMatrix<T>,
    order: usize,
}

impl<T: Scalar> MultiCompanion<T> {
    /// Wrap a square matrix as a multi-companion matrix of order `d`.
    /// Validates the shifted-identity rows to `tol` when `m > d`.
    pub fn new(entries: DMatrix<T>, order: usize, tol: T) -> Result<Self> {
        let mc = Self::from_raw(entries, order)?;
        if mc.structural_defect() > tol {
            return Err(Error::InvalidParameter(
                "rows below the companion order are not a shifted identity".into(),
            ));
        }
        Ok(mc)
    }

    pub(crate) fn from_raw(entries: DMatrix<T>, order: usize) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::DimensionMismatch {
                expected: entries.nrows(),
                got: entries.ncols(),
            });
        }
        if order < 1 || order > entries.nrows() {
            return Err(Error::InvalidParameter("companion order out of range".into()));
        }
        if let Some(index) = entries.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue { index });
        }
        Ok(Self { entries, order })
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    /// Companion order `d`.
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn matrix(&self) -> &DMatrix<T> {
        &self.entries
    }

    /// Largest deviation of rows `d+1..=m` from the shifted identity.
    pub fn structural_defect(&self) -> T {
        let (m, d) = (self.dim(), self.order);
        let mut worst = T::zero();
        for i in d..m {
            for j in 0..m {
                let want = if j == i - d { T::one() } else { T::zero() };
                let dev = (self.entries[(i, j)] - want).abs();
                if dev > worst {
                    worst = dev;
                }
            }
        }
        worst
    }

    /// Eigenvalue moduli, sorted descending.
    pub fn eigenvalue_moduli(&self) -> Vec<T> {
        let eig = self.entries.clone().complex_eigenvalues();
        let mut mods: Vec<T> = eig
            .iter()
            .map(|z| (z.re * z.re + z.im * z.im).sqrt())
            .collect();
        mods.sort_by(|a, b| b.partial_cmp(a).unwrap());
        mods
    }
}

/// `F_d = A_d A_{d-1} ... A_1` for the given coefficients.
pub fn mc_from_coeffs<T: Scalar>(coeffs: &PeriodicCoefficients<T>) -> MultiCompanion<T> {
    let d = coeffs.period();
    let m = coeffs.order().max(d);
    let mut f = DMatrix::identity(m, m);
    for s in 1..=d {
        let a = companion_from_coeffs(coeffs, s)
            .expect("season in range")
            .to_matrix();
        f = a * f;
    }
    MultiCompanion::from_raw(f, d).expect("square by construction")
}

/// Default tolerance for counting unit eigenvalues of exactly constructed
/// matrices. Estimated matrices need a looser, caller-chosen tolerance
/// since estimation noise moves the roots.
pub const DEFAULT_UNIT_TOL: f64 = 1e-6;

/// Number of eigenvalues of `F` within `tol` of 1.
pub fn unit_root_count<T: Scalar>(f: &MultiCompanion<T>, tol: T) -> usize {
    assert!(tol > T::zero(), "tolerance must be positive");
    let eig = f.matrix().clone().complex_eigenvalues();
    eig.iter()
        .filter(|z| {
            let re = z.re - T::one();
            (re * re + z.im * z.im).sqrt() < tol
        })
        .count()
}

/// Mixing matrix from periodic white noise to the year-innovation of the
/// multi-companion recursion: column 1 is `e_1`, column `j <= d` is the first
/// column of `A_d ... A_{d-j+2}`, and columns beyond `d` are zero. For
/// `m == d` it is upper triangular with unit diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct OmegaMatrix<T: Scalar> {
    entries: DMatrix<T>,
}

impl<T: Scalar> OmegaMatrix<T> {
    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<T> {
        &self.entries
    }

    /// Year-innovation covariance `Omega Sigma_eps Omega'` where `Sigma_eps`
    /// is diagonal with the season variances in descending time order
    /// starting at season `d`.
    pub fn sigma_u(&self, noise: &NoiseSpec<T>) -> DMatrix<T> {
        let m = self.dim();
        let d = noise.period();
        let mut scaled = self.entries.clone();
        for j in 0..m {
            // time t = [T, d] - j has season ((d - j - 1) mod d) + 1
            let season = (2 * d - 1 - (j % d)) % d + 1;
            let sd = noise.sigma2(season).sqrt();
            for i in 0..m {
                scaled[(i, j)] *= sd;
            }
        }
        &scaled * scaled.transpose()
    }
}

pub fn omega_matrix<T: Scalar>(coeffs: &PeriodicCoefficients<T>) -> OmegaMatrix<T> {
    let d = coeffs.period();
    let m = coeffs.order().max(d);
    let mut omega = DMatrix::zeros(m, m);
    omega[(0, 0)] = T::one();
    let mut prod = DMatrix::identity(m, m);
    for j in 2..=d.min(m) {
        let a = companion_from_coeffs(coeffs, d - j + 2)
            .expect("season in range")
            .to_matrix();
        prod *= a;
        for i in 0..m {
            omega[(i, j - 1)] = prod[(i, 0)];
        }
    }
    OmegaMatrix { entries: omega }
}

/// Extend a seed-vector to a full eigenvector using the structural rows:
/// `x_{d+i} = x_i / lambda`.
pub fn extend_seed<T: Scalar>(seed: &[T], eigenvalue: T, m: usize) -> Result<DVector<T>> {
    if eigenvalue == T::zero() {
        return Err(Error::ZeroEigenvalue);
    }
    let d = seed.len();
    if m < d {
        return Err(Error::DimensionMismatch { expected: d, got: m });
    }
    let mut x = DVector::zeros(m);
    for (i, &v) in seed.iter().enumerate() {
        x[i] = v;
    }
    for i in d..m {
        x[i] = x[i - d] / eigenvalue;
    }
    Ok(x)
}

/// Extend a generalized eigenvector given its predecessor in the Jordan
/// chain: `x_{d+i} = (x_i - prev_{d+i}) / lambda`.
fn extend_chain_successor<T: Scalar>(
    seed: &[T],
    prev: &DVector<T>,
    eigenvalue: T,
    m: usize,
) -> Result<DVector<T>> {
    if eigenvalue == T::zero() {
        return Err(Error::ZeroEigenvalue);
    }
    let d = seed.len();
    let mut x = DVector::zeros(m);
    for (i, &v) in seed.iter().enumerate() {
        x[i] = v;
    }
    for i in d..m {
        x[i] = (x[i - d] - prev[i]) / eigenvalue;
    }
    Ok(x)
}

/// Eigen information specifying a multi-companion matrix: unit eigenvalues
/// with their Jordan block structure and seed-vectors, optional stationary
/// eigenvalues with seeds, remaining eigenvalues zero.
///
/// Seed columns are grouped block by block; within a block, column `i + 1`
/// is the Jordan-chain successor of column `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSpec<T: Scalar> {
    period: usize,
    dim: usize,
    blocks: Vec<usize>,
    seeds: DMatrix<T>,
    extra: Vec<(T, DVector<T>)>,
}

impl<T: Scalar> EigenSpec<T> {
    pub fn new(
        period: usize,
        dim: usize,
        blocks: Vec<usize>,
        seeds: DMatrix<T>,
        extra: Vec<(T, DVector<T>)>,
    ) -> Result<Self> {
        if period < 1 || dim < period {
            return Err(Error::InvalidParameter("need dim >= period >= 1".into()));
        }
        let m1: usize = blocks.iter().sum();
        if blocks.contains(&0) {
            return Err(Error::InvalidParameter("Jordan block sizes must be positive".into()));
        }
        if seeds.ncols() != m1 {
            return Err(Error::DimensionMismatch { expected: m1, got: seeds.ncols() });
        }
        if m1 > period {
            return Err(Error::InvalidParameter(
                "number of unit roots cannot exceed the period".into(),
            ));
        }
        if seeds.nrows() != period {
            return Err(Error::DimensionMismatch { expected: period, got: seeds.nrows() });
        }
        if let Some(index) = seeds.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue { index });
        }
        for (lambda, seed) in &extra {
            if *lambda == T::zero() || lambda.abs() >= T::one() {
                return Err(Error::InvalidParameter(
                    "extra eigenvalues must be nonzero with modulus < 1".into(),
                ));
            }
            if seed.len() != period {
                return Err(Error::DimensionMismatch { expected: period, got: seed.len() });
            }
        }
        if m1 + extra.len() > dim {
            return Err(Error::InvalidParameter(
                "more eigenvalues specified than the dimension allows".into(),
            ));
        }
        if m1 > 0 {
            let sv = seeds.clone().singular_values();
            if sv.min() <= sv.max() * T::from_f64_lossy(1e-12) {
                return Err(Error::DegenerateSeeds(
                    "seed columns are linearly dependent".into(),
                ));
            }
        }
        Ok(Self { period, dim, blocks, seeds, extra })
    }

    /// All-simple unit roots: one seed column per unit eigenvalue, no
    /// stationary eigenvalues, `m = d`.
    pub fn simple_units(period: usize, seeds: DMatrix<T>) -> Result<Self> {
        let m1 = seeds.ncols();
        Self::new(period, period, vec![1; m1], seeds, Vec::new())
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn m1(&self) -> usize {
        self.seeds.ncols()
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn seeds(&self) -> &DMatrix<T> {
        &self.seeds
    }

    pub fn extra(&self) -> &[(T, DVector<T>)] {
        &self.extra
    }

    /// Unit Jordan matrix `J_unit` assembled from the block sizes.
    pub fn junit(&self) -> DMatrix<T> {
        junit_from_blocks(&self.blocks)
    }
}

pub(crate) fn junit_from_blocks<T: Scalar>(blocks: &[usize]) -> DMatrix<T> {
    let m1: usize = blocks.iter().sum();
    let mut j = DMatrix::zeros(m1, m1);
    let mut at = 0;
    for &r in blocks {
        for k in 0..r {
            j[(at + k, at + k)] = T::one();
            if k + 1 < r {
                j[(at + k, at + k + 1)] = T::one();
            }
        }
        at += r;
    }
    j
}

/// Build `F = X J X^{-1}` from eigen information.
///
/// The similarity matrix collects the extended unit Jordan chains, the
/// extended stationary eigenvectors, and standard basis columns for the zero
/// eigenvalues. Basis columns are chosen greedily, trying
/// `e_{d+1}, ..., e_m` first and then the remaining basis vectors in
/// descending index order, keeping `X` nonsingular.
pub fn fd_from_eigen<T: Scalar>(spec: &EigenSpec<T>) -> Result<MultiCompanion<T>> {
    let d = spec.period();
    let m = spec.dim();
    let m1 = spec.m1();
    let n_extra = spec.extra().len();
    let n_zero = m - m1 - n_extra;

    let mut columns: Vec<DVector<T>> = Vec::with_capacity(m);
    let mut at = 0;
    for &r in spec.blocks() {
        let head_seed: Vec<T> = spec.seeds().column(at).iter().copied().collect();
        let head = extend_seed(&head_seed, T::one(), m)?;
        columns.push(head);
        for k in 1..r {
            let seed: Vec<T> = spec.seeds().column(at + k).iter().copied().collect();
            let prev = columns.last().unwrap().clone();
            columns.push(extend_chain_successor(&seed, &prev, T::one(), m)?);
        }
        at += r;
    }
    for (lambda, seed) in spec.extra() {
        let seed: Vec<T> = seed.iter().copied().collect();
        columns.push(extend_seed(&seed, *lambda, m)?);
    }

    // Greedy basis completion for the zero eigenvalues, by orthogonal
    // residual against the columns accepted so far.
    let mut ortho: Vec<DVector<T>> = Vec::with_capacity(m);
    let indep_tol = T::from_f64_lossy(1e-10);
    for col in &columns {
        match orthogonal_residual(&ortho, col, indep_tol) {
            Some(q) => ortho.push(q),
            None => return Err(Error::SingularSimilarity),
        }
    }
    let mut candidates: Vec<usize> = (d..m).collect();
    candidates.extend((0..d).rev());
    let mut picked = 0;
    for q_idx in candidates {
        if picked == n_zero {
            break;
        }
        let mut e = DVector::zeros(m);
        e[q_idx] = T::one();
        if let Some(q) = orthogonal_residual(&ortho, &e, indep_tol) {
            ortho.push(q);
            columns.push(e);
            picked += 1;
        }
    }
    if picked < n_zero {
        return Err(Error::SingularSimilarity);
    }

    let x = DMatrix::from_columns(&columns);
    let mut j = DMatrix::zeros(m, m);
    j.view_mut((0, 0), (m1, m1)).copy_from(&spec.junit());
    for (i, (lambda, _)) in spec.extra().iter().enumerate() {
        j[(m1 + i, m1 + i)] = *lambda;
    }

    // F = X J X^{-1} via one LU solve: X' F' = (X J)'.
    let xj_t = (&x * &j).transpose();
    let lu = x.transpose().lu();
    let f_t = lu.solve(&xj_t).ok_or(Error::SingularSimilarity)?;
    MultiCompanion::from_raw(f_t.transpose(), d)
}

/// Residual of `v` after projecting out the span of `ortho` (orthonormal);
/// `None` when the residual is negligible relative to `v`.
fn orthogonal_residual<T: Scalar>(
    ortho: &[DVector<T>],
    v: &DVector<T>,
    tol: T,
) -> Option<DVector<T>> {
    let mut r = v.clone();
    // Two passes of classical Gram-Schmidt for numerical stability.
    for _ in 0..2 {
        for q in ortho {
            let c = q.dot(&r);
            r.axpy(-c, q, T::one());
        }
    }
    let scale = v.norm().max(T::one());
    let n = r.norm();
    if n <= tol * scale {
        None
    } else {
        Some(r / n)
    }
}

/// Season of the `j`-th component (0-based) of the year-end state vector
/// `(X_[T,d], X_[T,d]-1, ...)`.
pub fn state_season(j: usize, period: usize) -> usize {
    season_of(2 * period - (j % period), period)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn coeffs(rows: &[Vec<f64>]) -> PeriodicCoefficients<f64> {
        PeriodicCoefficients::from_rows(rows).unwrap()
    }

    #[test]
    fn companion_zero_padding() {
        let c = coeffs(&[vec![0.7], vec![0.3]]);
        let a1 = companion_from_coeffs(&c, 1).unwrap().to_matrix();
        assert_eq!(a1, DMatrix::from_row_slice(2, 2, &[0.7, 0.0, 1.0, 0.0]));
    }

    #[test]
    fn companion_scalar_case() {
        let c = coeffs(&[vec![0.5]]);
        let a = companion_from_coeffs(&c, 1).unwrap().to_matrix();
        assert_eq!(a, DMatrix::from_row_slice(1, 1, &[0.5]));
    }

    #[test]
    fn companion_dim_is_max_of_order_and_period() {
        let c = coeffs(&[vec![0.1, 0.2, 0.3], vec![0.4, 0.5, 0.6]]);
        let a = companion_from_coeffs(&c, 2).unwrap().to_matrix();
        assert_eq!(a.nrows(), 3);
        assert_eq!(a.row(0).transpose().as_slice(), &[0.4, 0.5, 0.6]);
        assert_eq!(a[(1, 0)], 1.0);
        assert_eq!(a[(2, 1)], 1.0);
        assert_eq!(a[(2, 2)], 0.0);
    }

    #[test]
    fn companion_rejects_bad_season() {
        let c = coeffs(&[vec![0.1], vec![0.2]]);
        assert!(matches!(
            companion_from_coeffs(&c, 3),
            Err(Error::SeasonOutOfRange { season: 3, period: 2 })
        ));
    }

    #[test]
    fn mc_product_two_seasons() {
        let c = coeffs(&[vec![0.3], vec![0.8]]);
        let f = mc_from_coeffs(&c);
        // F_2 = A_2 A_1 = [[phi2*phi1, 0], [phi1, 0]]
        let want = DMatrix::from_row_slice(2, 2, &[0.8 * 0.3, 0.0, 0.3, 0.0]);
        assert_abs_diff_eq!(f.matrix(), &want, epsilon = 1e-15);
    }

    #[test]
    fn mc_zero_coefficients() {
        let c = PeriodicCoefficients::<f64>::zero(3, 2);
        let f = mc_from_coeffs(&c);
        assert_eq!(f.matrix(), &DMatrix::zeros(3, 3));
    }

    #[test]
    fn mc_structural_rows_for_random_draws() {
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..50 {
            let d = rng.random_range(1..5);
            let p = rng.random_range(1..7);
            let rows: Vec<Vec<f64>> = (0..d)
                .map(|_| (0..p).map(|_| rng.random_range(-1.0..1.0)).collect())
                .collect();
            let f = mc_from_coeffs(&coeffs(&rows));
            assert!(f.structural_defect() == 0.0);
        }
    }

    #[test]
    fn omega_first_order() {
        let c = coeffs(&[vec![0.3], vec![0.8]]);
        let om = omega_matrix(&c);
        let want = DMatrix::from_row_slice(2, 2, &[1.0, 0.8, 0.0, 1.0]);
        assert_abs_diff_eq!(om.matrix(), &want, epsilon = 1e-15);
    }

    #[test]
    fn omega_identity_for_zero_coeffs() {
        let c = PeriodicCoefficients::<f64>::zero(4, 2);
        let om = omega_matrix(&c);
        assert_eq!(om.matrix(), &DMatrix::identity(4, 4));
    }

    #[test]
    fn omega_unit_upper_triangular_when_m_equals_d() {
        let mut rng = StdRng::seed_from_u64(11);
        let rows: Vec<Vec<f64>> = (0..4)
            .map(|_| (0..2).map(|_| rng.random_range(-1.0..1.0)).collect())
            .collect();
        let om = omega_matrix(&coeffs(&rows));
        for i in 0..4 {
            assert_eq!(om.matrix()[(i, i)], 1.0);
            for j in 0..i {
                assert_eq!(om.matrix()[(i, j)], 0.0);
            }
        }
    }

    #[test]
    fn extend_seed_unit_eigenvalue_copies() {
        let x = extend_seed(&[1.0, 2.0, 3.0, 4.0], 1.0, 6).unwrap();
        assert_eq!(x.as_slice(), &[1.0, 2.0, 3.0, 4.0, 1.0, 2.0]);
    }

    #[test]
    fn extend_seed_divides_by_eigenvalue() {
        let x = extend_seed(&[1.0, -2.0], 0.5, 4).unwrap();
        assert_eq!(x.as_slice(), &[1.0, -2.0, 2.0, -4.0]);
    }

    #[test]
    fn extend_seed_m_equals_d() {
        let x = extend_seed(&[3.0, 7.0], 0.9, 2).unwrap();
        assert_eq!(x.as_slice(), &[3.0, 7.0]);
    }

    #[test]
    fn extend_seed_rejects_zero_eigenvalue() {
        assert_eq!(extend_seed(&[1.0, 2.0], 0.0, 4).unwrap_err(), Error::ZeroEigenvalue);
    }

    #[test]
    fn fd_single_unit_closed_form() {
        let seeds = DMatrix::from_column_slice(4, 1, &[-0.64, 0.46, 0.65, 0.68]);
        let spec = EigenSpec::simple_units(4, seeds).unwrap();
        let f = fd_from_eigen(&spec).unwrap();
        let col0: Vec<f64> = f.matrix().column(0).iter().copied().collect();
        let want = [1.0, -0.71875, -1.015625, -1.0625];
        for (a, b) in col0.iter().zip(want.iter()) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        }
        for j in 1..4 {
            assert!(f.matrix().column(j).amax() < 1e-12);
        }
    }

    #[test]
    fn fd_eigenvalues_match_spec() {
        let mut rng = StdRng::seed_from_u64(17);
        for _ in 0..20 {
            let d = 4;
            let seeds = DMatrix::from_fn(d, 1, |_, _| rng.random_range(0.2_f64..1.0));
            let extra = vec![(
                rng.random_range(0.1_f64..0.9),
                DVector::from_fn(d, |_, _| rng.random_range(-1.0..1.0)),
            )];
            let spec = EigenSpec::new(d, d, vec![1], seeds, extra.clone()).unwrap();
            let f = fd_from_eigen(&spec).unwrap();
            let mods = f.eigenvalue_moduli();
            assert_abs_diff_eq!(mods[0], 1.0, epsilon = 1e-8);
            assert_abs_diff_eq!(mods[1], extra[0].0.abs(), epsilon = 1e-8);
            assert!(mods[2] < 1e-8);
        }
    }

    #[test]
    fn fd_two_simple_units_identity_block() {
        // Two simple unit roots give a 2x2 identity in the top-left corner.
        let seeds = DMatrix::from_columns(&[
            DVector::from_vec(vec![0.08, -0.41, 0.52, 0.40]),
            DVector::from_vec(vec![0.22, 0.29, -0.58, -0.49]),
        ]);
        let spec = EigenSpec::simple_units(4, seeds).unwrap();
        let f = fd_from_eigen(&spec).unwrap();
        let top = f.matrix().view((0, 0), (2, 2)).clone_owned();
        assert_abs_diff_eq!(&top, &DMatrix::identity(2, 2), epsilon = 1e-10);
        assert_eq!(unit_root_count(&f, 1e-6), 2);
    }

    #[test]
    fn fd_idempotent_for_simple_zero_one_spectrum() {
        let mut rng = StdRng::seed_from_u64(23);
        for _ in 0..20 {
            let d = 4;
            let m1 = rng.random_range(1..4_usize);
            let seeds = DMatrix::from_fn(d, m1, |_, _| rng.random_range(-1.0..1.0));
            let spec = EigenSpec::simple_units(d, seeds).unwrap();
            let f = match fd_from_eigen(&spec) {
                Ok(f) => f,
                Err(Error::SingularSimilarity) => continue,
                Err(e) => panic!("{e}"),
            };
            let ff = f.matrix() * f.matrix();
            assert_abs_diff_eq!(&ff, f.matrix(), epsilon = 1e-10);
        }
    }

    #[test]
    fn fd_structural_rows_when_dim_exceeds_period() {
        let mut rng = StdRng::seed_from_u64(31);
        let d = 2;
        let m = 4;
        let seeds = DMatrix::from_fn(d, 2, |_, _| rng.random_range::<f64, _>(-1.0..1.0));
        let spec = EigenSpec::new(d, m, vec![1, 1], seeds, Vec::new()).unwrap();
        let f = fd_from_eigen(&spec).unwrap();
        assert!(f.structural_defect() < 1e-12);
        assert_eq!(unit_root_count(&f, 1e-6), 2);
    }

    #[test]
    fn fd_chained_pair_has_double_unit_root() {
        let seeds = DMatrix::from_columns(&[
            DVector::from_vec(vec![0.4, -0.3, 0.7, 0.5]),
            DVector::from_vec(vec![0.1, 0.8, -0.2, 0.6]),
        ]);
        let spec = EigenSpec::new(4, 4, vec![2], seeds, Vec::new()).unwrap();
        let f = fd_from_eigen(&spec).unwrap();
        assert_eq!(unit_root_count(&f, 1e-6), 2);
        // Chained pair is not diagonalizable: F*F != F.
        let ff = f.matrix() * f.matrix();
        assert!((ff - f.matrix()).amax() > 1e-3);
    }

    #[test]
    fn dependent_seed_columns_are_rejected() {
        // Both seed columns identical: no valid similarity matrix exists.
        let seeds = DMatrix::from_columns(&[
            DVector::from_vec(vec![0.5, 0.5, 0.5, 0.5]),
            DVector::from_vec(vec![0.5, 0.5, 0.5, 0.5]),
        ]);
        assert!(matches!(
            EigenSpec::simple_units(4, seeds),
            Err(Error::DegenerateSeeds(_))
        ));
    }

    #[test]
    fn fd_rejects_singular_similarity() {
        // A repeated stationary eigenpair duplicates a similarity column.
        let seeds = DMatrix::from_column_slice(4, 1, &[0.5, -0.2, 0.7, 0.3]);
        let dup = DVector::from_vec(vec![0.1, 0.4, -0.6, 0.2]);
        let spec = EigenSpec::new(
            4,
            4,
            vec![1],
            seeds,
            vec![(0.5, dup.clone()), (0.5, dup)],
        )
        .unwrap();
        assert_eq!(fd_from_eigen(&spec).unwrap_err(), Error::SingularSimilarity);
    }

    #[test]
    fn fd_handles_zero_leading_seed_entries() {
        // Seeds that rule out the canonical basis choice still synthesize:
        // the greedy completion falls back to other basis vectors.
        let seeds = DMatrix::from_columns(&[
            DVector::from_vec(vec![0.0, 0.0, 0.8, 0.5]),
            DVector::from_vec(vec![0.3, -0.4, 0.1, 0.9]),
        ]);
        let spec = EigenSpec::new(4, 4, vec![2], seeds, Vec::new()).unwrap();
        let f = fd_from_eigen(&spec).unwrap();
        assert_eq!(unit_root_count(&f, 1e-6), 2);
    }

    #[test]
    fn rounded_table_coefficients_keep_one_near_unit_root() {
        // the published order-1 filter values, used as PAR(1) coefficients
        let c = coeffs(&[vec![-1.07], vec![0.95], vec![0.70], vec![-1.41]]);
        let f = mc_from_coeffs(&c);
        assert_eq!(unit_root_count(&f, 0.05), 1);
        let mods = f.eigenvalue_moduli();
        assert!((mods[0] - 1.0).abs() <= 0.05);
        for m in &mods[1..] {
            assert!(*m < 0.05);
        }
    }

    #[test]
    fn unit_root_count_identity_and_zero() {
        let id = MultiCompanion::from_raw(DMatrix::<f64>::identity(3, 3), 3).unwrap();
        assert_eq!(unit_root_count(&id, 0.05), 3);
        let z = MultiCompanion::from_raw(DMatrix::<f64>::zeros(3, 3), 3).unwrap();
        assert_eq!(unit_root_count(&z, 0.05), 0);
    }

    #[test]
    fn eigen_extraction_round_trip() {
        // Build F from a diagonalizable spec, recover seed-vectors from F's
        // eigenvectors, rebuild, and compare.
        let mut rng = StdRng::seed_from_u64(41);
        for _ in 0..10 {
            let d = 4;
            let seeds = DMatrix::from_fn(d, 1, |_, _| rng.random_range(0.3..1.0));
            let extra = vec![(
                rng.random_range(0.3..0.8),
                DVector::from_fn(d, |_, _| rng.random_range(-1.0..1.0)),
            )];
            let spec = EigenSpec::new(d, d, vec![1], seeds, extra.clone()).unwrap();
            let f = fd_from_eigen(&spec).unwrap();

            // Recover eigenvectors by null-space solves of (F - lambda I).
            let recover = |lambda: f64| -> DVector<f64> {
                let a = f.matrix() - DMatrix::identity(d, d) * lambda;
                let svd = a.svd(true, true);
                let vt = svd.v_t.unwrap();
                vt.row(d - 1).transpose()
            };
            let s1 = recover(1.0);
            let s2 = recover(extra[0].0);
            let spec2 = EigenSpec::new(
                d,
                d,
                vec![1],
                DMatrix::from_columns(&[s1]),
                vec![(extra[0].0, s2)],
            )
            .unwrap();
            let f2 = fd_from_eigen(&spec2).unwrap();
            assert_abs_diff_eq!(f.matrix(), f2.matrix(), epsilon = 1e-8);
        }
    }

    #[test]
    fn eigen_spec_validates_invariants() {
        let seeds = DMatrix::<f64>::from_element(4, 2, 0.5);
        // blocks must sum to the seed count
        assert!(EigenSpec::new(4, 4, vec![1], seeds.clone(), vec![]).is_err());
        // extra eigenvalues must be nonzero with modulus < 1
        let extra = vec![(1.0, DVector::from_element(4, 0.1))];
        assert!(EigenSpec::new(4, 4, vec![1, 1], seeds.clone(), extra).is_err());
        // m1 cannot exceed the period
        let wide = DMatrix::<f64>::from_element(2, 3, 0.5);
        assert!(EigenSpec::new(2, 4, vec![1, 1, 1], wide, vec![]).is_err());
    }

    #[test]
    fn state_season_wraps() {
        assert_eq!(state_season(0, 4), 4);
        assert_eq!(state_season(1, 4), 3);
        assert_eq!(state_season(3, 4), 1);
        assert_eq!(state_season(4, 4), 4);
    }
}
