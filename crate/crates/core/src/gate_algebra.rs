//! 2×2 complex matrices, the eight single-qubit gates, closed-form
//! eigendecomposition and the reduction of a matrix to a belief pair.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::ops::{Add, Mul};

pub use num_complex::Complex64 as Complex;

/// Relative threshold on the discriminant below which two eigenvalues are
/// treated as coincident.
pub const DEGENERACY_TOL: f64 = 1e-12;
/// Total weight below which a matrix counts as zero.
pub const ZERO_WEIGHT_TOL: f64 = 1e-12;
/// Residual tolerance for accepted eigenpairs.
pub const RESIDUAL_TOL: f64 = 1e-9;
/// Overlap difference under which two eigenvectors are considered equally
/// aligned with `|a1>`.
pub const OVERLAP_TIE_TOL: f64 = 1e-9;

const ZERO: Complex = Complex::new(0.0, 0.0);
const ONE: Complex = Complex::new(1.0, 0.0);

/// A 2×2 complex matrix, row major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2 {
    pub m11: Complex,
    pub m12: Complex,
    pub m21: Complex,
    pub m22: Complex,
}

impl Mat2 {
    pub const fn new(m11: Complex, m12: Complex, m21: Complex, m22: Complex) -> Self {
        Mat2 { m11, m12, m21, m22 }
    }

    /// Builds a matrix from real entries.
    pub fn real(m11: f64, m12: f64, m21: f64, m22: f64) -> Self {
        Mat2::new(m11.into(), m12.into(), m21.into(), m22.into())
    }

    pub const fn identity() -> Self {
        Mat2::new(ONE, ZERO, ZERO, ONE)
    }

    pub const fn zero() -> Self {
        Mat2::new(ZERO, ZERO, ZERO, ZERO)
    }

    pub fn entries(&self) -> [Complex; 4] {
        [self.m11, self.m12, self.m21, self.m22]
    }

    pub fn trace(&self) -> Complex {
        self.m11 + self.m22
    }

    pub fn det(&self) -> Complex {
        self.m11 * self.m22 - self.m12 * self.m21
    }

    /// Largest entry modulus.
    pub fn max_norm(&self) -> f64 {
        self.entries().iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.entries()
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn scale(&self, c: Complex) -> Mat2 {
        Mat2::new(self.m11 * c, self.m12 * c, self.m21 * c, self.m22 * c)
    }

    pub fn apply(&self, v: [Complex; 2]) -> [Complex; 2] {
        [
            self.m11 * v[0] + self.m12 * v[1],
            self.m21 * v[0] + self.m22 * v[1],
        ]
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Mat2) -> f64 {
        self.entries()
            .iter()
            .zip(other.entries().iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Add for Mat2 {
    type Output = Mat2;

    fn add(self, rhs: Mat2) -> Mat2 {
        add(&self, &rhs)
    }
}

impl Mul for Mat2 {
    type Output = Mat2;

    fn mul(self, rhs: Mat2) -> Mat2 {
        mul(&self, &rhs)
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            self.m11, self.m12, self.m21, self.m22
        )
    }
}

/// Entrywise sum.
pub fn add(a: &Mat2, b: &Mat2) -> Mat2 {
    Mat2::new(a.m11 + b.m11, a.m12 + b.m12, a.m21 + b.m21, a.m22 + b.m22)
}

/// Matrix product `a · b`.
pub fn mul(a: &Mat2, b: &Mat2) -> Mat2 {
    Mat2::new(
        a.m11 * b.m11 + a.m12 * b.m21,
        a.m11 * b.m12 + a.m12 * b.m22,
        a.m21 * b.m11 + a.m22 * b.m21,
        a.m21 * b.m12 + a.m22 * b.m22,
    )
}

/// The eight leaf gates of a decision tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u8)]
pub enum Gate {
    H,
    X,
    Y,
    Z,
    S,
    D,
    T,
    I,
}

impl Gate {
    pub const ALL: [Gate; 8] = [
        Gate::H,
        Gate::X,
        Gate::Y,
        Gate::Z,
        Gate::S,
        Gate::D,
        Gate::T,
        Gate::I,
    ];

    pub fn symbol(self) -> char {
        match self {
            Gate::H => 'H',
            Gate::X => 'X',
            Gate::Y => 'Y',
            Gate::Z => 'Z',
            Gate::S => 'S',
            Gate::D => 'D',
            Gate::T => 'T',
            Gate::I => 'I',
        }
    }

    pub fn from_symbol(c: char) -> Option<Gate> {
        Gate::ALL.iter().copied().find(|g| g.symbol() == c)
    }

    pub fn matrix(self) -> Mat2 {
        gate_matrix(self)
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

pub fn gate_matrix(g: Gate) -> Mat2 {
    let c = |re: f64, im: f64| Complex::new(re, im);
    match g {
        Gate::H => Mat2::real(FRAC_1_SQRT_2, FRAC_1_SQRT_2, FRAC_1_SQRT_2, -FRAC_1_SQRT_2),
        Gate::X => Mat2::real(0.0, 1.0, 1.0, 0.0),
        Gate::Y => Mat2::new(ZERO, c(0.0, -1.0), c(0.0, 1.0), ZERO),
        Gate::Z => Mat2::real(1.0, 0.0, 0.0, -1.0),
        Gate::S => Mat2::new(ONE, ZERO, ZERO, c(0.0, 1.0)),
        Gate::D => Mat2::real(0.0, 1.0, -1.0, 0.0),
        // e^{iπ/4}
        Gate::T => Mat2::new(ONE, ZERO, ZERO, c(FRAC_1_SQRT_2, FRAC_1_SQRT_2)),
        Gate::I => Mat2::identity(),
    }
}

/// Eigenvalues and (when well defined) unit eigenvectors of a 2×2 matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EigenPair {
    pub lambda1: Complex,
    pub lambda2: Complex,
    pub vec1: [Complex; 2],
    pub vec2: [Complex; 2],
    /// No reliable eigenvector basis: repeated eigenvalue, defective or
    /// non-finite input.
    pub degenerate: bool,
}

/// Closed-form eigendecomposition.
///
/// Eigenvalues are the roots of `λ² − tr·λ + det`, taken in the
/// cancellation-free form `q = (tr ± √disc)/2`, `λ2 = det/q`. The matrix is
/// first rescaled by a power of two so the computation is exact under
/// power-of-two scaling and cannot overflow.
pub fn eigen2(m: &Mat2) -> EigenPair {
    let basis = ([ONE, ZERO], [ZERO, ONE]);
    if !m.is_finite() {
        return EigenPair {
            lambda1: ZERO,
            lambda2: ZERO,
            vec1: basis.0,
            vec2: basis.1,
            degenerate: true,
        };
    }
    let norm = m.max_norm();
    if norm == 0.0 {
        return EigenPair {
            lambda1: ZERO,
            lambda2: ZERO,
            vec1: basis.0,
            vec2: basis.1,
            degenerate: true,
        };
    }

    let scale = pow2_at_least(norm);
    let s = m.scale(Complex::new(1.0 / scale, 0.0));
    let (a, b, c, d) = (s.m11, s.m12, s.m21, s.m22);

    let tr = a + d;
    let det = a * d - b * c;
    let disc = (a - d) * (a - d) + b * c * 4.0;
    let root = disc.sqrt();
    // pick the sign that avoids cancellation in tr ± root
    let sum = if (tr.conj() * root).re >= 0.0 {
        tr + root
    } else {
        tr - root
    };
    let q = sum * 0.5;
    let (l1, l2) = if q.norm() > 0.0 {
        (q, det / q)
    } else {
        (q, tr - q)
    };

    let lambda1 = l1 * scale;
    let lambda2 = l2 * scale;

    let s_norm = s.max_norm();
    if disc.norm() < DEGENERACY_TOL * s_norm * s_norm {
        return EigenPair {
            lambda1,
            lambda2,
            vec1: basis.0,
            vec2: basis.1,
            degenerate: true,
        };
    }

    let vec1 = null_vector(&s, l1);
    let vec2 = null_vector(&s, l2);
    let mut degenerate = match (vec1, vec2) {
        (Some(v1), Some(v2)) => (v1[0] * v2[1] - v1[1] * v2[0]).norm() < RESIDUAL_TOL,
        _ => true,
    };
    let vec1 = vec1.unwrap_or(basis.0);
    let vec2 = vec2.unwrap_or(basis.1);
    if !degenerate {
        let tol = RESIDUAL_TOL * norm.max(1.0);
        degenerate = residual(m, lambda1, &vec1) > tol || residual(m, lambda2, &vec2) > tol;
    }

    EigenPair {
        lambda1,
        lambda2,
        vec1,
        vec2,
        degenerate,
    }
}

/// `‖Mv − λv‖` in the max-entry norm.
pub fn residual(m: &Mat2, lambda: Complex, v: &[Complex; 2]) -> f64 {
    let mv = m.apply(*v);
    (mv[0] - lambda * v[0])
        .norm()
        .max((mv[1] - lambda * v[1]).norm())
}

fn pow2_at_least(x: f64) -> f64 {
    let e = x.log2().ceil().clamp(-1000.0, 1000.0);
    2f64.powi(e as i32)
}

/// Unit vector annihilated by the dominant row of `m − λI`, with its largest
/// component made real and positive.
fn null_vector(m: &Mat2, lambda: Complex) -> Option<[Complex; 2]> {
    let r1 = (m.m11 - lambda, m.m12);
    let r2 = (m.m21, m.m22 - lambda);
    let n1 = r1.0.norm_sqr() + r1.1.norm_sqr();
    let n2 = r2.0.norm_sqr() + r2.1.norm_sqr();
    let (p, q, n) = if n1 >= n2 {
        (r1.0, r1.1, n1)
    } else {
        (r2.0, r2.1, n2)
    };
    if n.is_nan() || n <= f64::MIN_POSITIVE {
        return None;
    }
    let len = n.sqrt();
    let mut v = [q / len, -p / len];
    let pivot = if v[0].norm() >= v[1].norm() {
        v[0]
    } else {
        v[1]
    };
    let phase = pivot.conj() / pivot.norm();
    v[0] *= phase;
    v[1] *= phase;
    Some(v)
}

/// The normalized diagonal `(p1, p2)` of a value operator, with the
/// eigendata it was derived from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ValueOperator {
    /// Probability of believing the cat is alive.
    pub p1: f64,
    /// Probability of believing the cat is dead.
    pub p2: f64,
    pub source_eigen: EigenPair,
}

impl ValueOperator {
    pub fn uniform(source_eigen: EigenPair) -> Self {
        ValueOperator {
            p1: 0.5,
            p2: 0.5,
            source_eigen,
        }
    }
}

/// Turns eigenvalue magnitudes into action probabilities.
///
/// The eigenvalue whose eigenvector overlaps `|a1>` most (larger `|v[0]|²`)
/// feeds `p1`; on an overlap tie the larger `|λ|` does. Degenerate and zero
/// spectra give `(0.5, 0.5)`.
pub fn normalize_to_beliefs(e: &EigenPair) -> ValueOperator {
    let w1 = e.lambda1.norm();
    let w2 = e.lambda2.norm();
    let total = w1 + w2;
    if e.degenerate || !total.is_finite() || total < ZERO_WEIGHT_TOL {
        return ValueOperator::uniform(*e);
    }

    let o1 = e.vec1[0].norm_sqr();
    let o2 = e.vec2[0].norm_sqr();
    let first_is_alive = if (o1 - o2).abs() < OVERLAP_TIE_TOL {
        w1 >= w2
    } else {
        o1 > o2
    };
    let (alive, dead) = if first_is_alive { (w1, w2) } else { (w2, w1) };
    ValueOperator {
        p1: alive / total,
        p2: dead / total,
        source_eigen: *e,
    }
}

/// `normalize_to_beliefs(eigen2(m))`.
pub fn value_operator(m: &Mat2) -> ValueOperator {
    normalize_to_beliefs(&eigen2(m))
}

#[cfg(test)]
mod tests {
    use super::*;

    const R: f64 = FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn close(a: &Mat2, b: &Mat2, tol: f64) -> bool {
        a.max_abs_diff(b) <= tol
    }

    #[test]
    fn gate_constants() {
        assert_eq!(gate_matrix(Gate::I), Mat2::identity());
        assert_eq!(gate_matrix(Gate::D), Mat2::real(0.0, 1.0, -1.0, 0.0));
        let h = gate_matrix(Gate::H);
        let expected = Mat2::real(1.0, 1.0, 1.0, -1.0).scale(c(1.0 / 2f64.sqrt(), 0.0));
        assert!(close(&h, &expected, 1e-15));
        let t = gate_matrix(Gate::T).m22;
        let e = Complex::from_polar(1.0, std::f64::consts::FRAC_PI_4);
        assert!((t - e).norm() <= 1e-15);
    }

    #[test]
    fn gate_symbols_round_trip() {
        for g in Gate::ALL {
            assert_eq!(Gate::from_symbol(g.symbol()), Some(g));
        }
        assert_eq!(Gate::from_symbol('Q'), None);
    }

    #[test]
    fn add_examples() {
        let i = gate_matrix(Gate::I);
        assert_eq!(add(&i, &i), Mat2::real(2.0, 0.0, 0.0, 2.0));
        let hi = add(&gate_matrix(Gate::H), &i);
        assert!(close(&hi, &Mat2::real(1.0 + R, R, R, 1.0 - R), 1e-15));
        let z = gate_matrix(Gate::Z);
        assert_eq!(add(&z, &z.scale(c(-1.0, 0.0))), Mat2::zero());
    }

    #[test]
    fn mul_examples() {
        let ds = mul(&gate_matrix(Gate::D), &gate_matrix(Gate::S));
        assert_eq!(
            ds,
            Mat2::new(c(0.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, 0.0))
        );
        let x = gate_matrix(Gate::X);
        assert_eq!(mul(&x, &x), Mat2::identity());
        let m = Mat2::new(c(1.0, 2.0), c(-3.0, 0.5), c(0.0, 0.0), c(7.0, -1.0));
        assert_eq!(mul(&m, &Mat2::identity()), m);
    }

    #[test]
    fn eigen_of_z_is_the_basis() {
        let e = eigen2(&gate_matrix(Gate::Z));
        assert!(!e.degenerate);
        assert_eq!(e.lambda1, c(1.0, 0.0));
        assert_eq!(e.lambda2, c(-1.0, 0.0));
        assert_eq!(e.vec1, [c(1.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(e.vec2, [c(0.0, 0.0), c(1.0, 0.0)]);
    }

    #[test]
    fn eigen_of_i_plus_h() {
        let m = gate_matrix(Gate::I) + gate_matrix(Gate::H);
        let e = eigen2(&m);
        assert!(!e.degenerate);
        assert!((e.lambda1 - c(2.0, 0.0)).norm() < 1e-12);
        assert!(e.lambda2.norm() < 1e-12);
        // +1 eigenvector of H: (cos π/8, sin π/8)
        let (cs, sn) = (
            std::f64::consts::FRAC_PI_8.cos(),
            std::f64::consts::FRAC_PI_8.sin(),
        );
        assert!((e.vec1[0].norm() - cs).abs() < 1e-12);
        assert!((e.vec1[1].norm() - sn).abs() < 1e-12);
    }

    #[test]
    fn scalar_matrix_is_degenerate() {
        let e = eigen2(&Mat2::real(2.0, 0.0, 0.0, 2.0));
        assert!(e.degenerate);
        assert_eq!(e.lambda1, c(2.0, 0.0));
        assert_eq!(e.lambda2, c(2.0, 0.0));
    }

    #[test]
    fn jordan_block_is_degenerate() {
        let e = eigen2(&Mat2::real(1.0, 1.0, 0.0, 1.0));
        assert!(e.degenerate);
        assert_eq!(normalize_to_beliefs(&e).p1, 0.5);
    }

    #[test]
    fn non_finite_input_falls_back() {
        let m = Mat2::real(f64::INFINITY, 0.0, 0.0, 1.0);
        let e = eigen2(&m);
        assert!(e.degenerate);
        let vo = normalize_to_beliefs(&e);
        assert_eq!((vo.p1, vo.p2), (0.5, 0.5));
    }

    #[test]
    fn belief_examples() {
        let two_i = Mat2::real(2.0, 0.0, 0.0, 2.0);
        let vo = value_operator(&two_i);
        assert_eq!((vo.p1, vo.p2), (0.5, 0.5));

        let vo = value_operator(&(gate_matrix(Gate::I) + gate_matrix(Gate::H)));
        assert!((vo.p1 - 1.0).abs() < 1e-12);
        assert!(vo.p2.abs() < 1e-12);

        let vo = value_operator(&Mat2::zero());
        assert_eq!((vo.p1, vo.p2), (0.5, 0.5));
    }

    #[test]
    fn overlap_tie_prefers_larger_weight() {
        // X + I has eigenvectors (1, ±1)/√2 with eigenvalues 2 and 0
        let vo = value_operator(&(gate_matrix(Gate::X) + gate_matrix(Gate::I)));
        assert!((vo.p1 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn diagonal_case_recovers_positions() {
        for (d1, d2) in [(3.0, 1.0), (1.0, 3.0), (0.0, 2.0), (5.0, 0.0), (0.25, 0.75)] {
            let vo = value_operator(&Mat2::real(d1, 0.0, 0.0, d2));
            assert!((vo.p1 - d1 / (d1 + d2)).abs() < 1e-15, "{d1} {d2}");
            assert!((vo.p2 - d2 / (d1 + d2)).abs() < 1e-15, "{d1} {d2}");
        }
    }

    #[test]
    fn power_of_two_scaling_is_exact() {
        let m = Mat2::new(c(0.3, -1.2), c(1.7, 0.1), c(-0.4, 0.9), c(1.1, 0.0));
        let base = value_operator(&m);
        for k in [-20, -3, 1, 7, 40] {
            let s = 2f64.powi(k);
            for sign in [1.0, -1.0] {
                let vo = value_operator(&m.scale(c(sign * s, 0.0)));
                assert_eq!((vo.p1, vo.p2), (base.p1, base.p2));
            }
        }
    }
}
