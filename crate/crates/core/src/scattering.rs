//! Input-output scattering of the two-cavity device.
//!
//! The Langevin equations at zero detuning and zero Fourier frequency are
//! `G·a = −K·b_in`, with `a = (b, b†, m, m†)` the intracavity operators and
//! `b_in` the eight input-port operators (optical coupled, optical
//! intrinsic, microwave coupled, microwave intrinsic, each with its
//! conjugate). The scattering matrix is `S = KᵀG⁻¹K + I`, converted to
//! quadratures as `S_x = Q S Q⁻¹`.

use nalgebra::{Matrix2, Matrix4, SMatrix};
use num_complex::Complex64;

use crate::params::{Scheme, SqueezeSite, SystemParams};
use crate::{Error, Result};

pub type C64 = Complex64;
pub type Coupler = SMatrix<f64, 4, 8>;
pub type Matrix8 = SMatrix<f64, 8, 8>;
type CMatrix8 = SMatrix<C64, 8, 8>;

/// Condition number of `G` above which results are flagged as ill-posed.
pub const CONDITION_WARN: f64 = 1e12;

const REALITY_TOL: f64 = 1e-10;

/// Input/output port of the device. Each port owns two quadrature rows
/// of `S_x`, `(2k, 2k + 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Port {
    OpticalCoupled = 0,
    OpticalIntrinsic = 1,
    MicrowaveCoupled = 2,
    MicrowaveIntrinsic = 3,
}

impl Port {
    pub const ALL: [Port; 4] = [
        Port::OpticalCoupled,
        Port::OpticalIntrinsic,
        Port::MicrowaveCoupled,
        Port::MicrowaveIntrinsic,
    ];

    pub fn quadratures(self) -> [usize; 2] {
        let k = self as usize;
        [2 * k, 2 * k + 1]
    }
}

/// True iff the parameters lie strictly inside the stable region of
/// `scheme`.
pub fn is_stable(scheme: Scheme, p: &SystemParams) -> bool {
    let s = 2.0 * p.squeezing.sqrt();
    match scheme {
        Scheme::DirectConversion => 1.0 + p.coop - s > 0.0,
        Scheme::Teleportation => 1.0 - p.coop - s > 0.0,
    }
}

/// Transition matrix `G(α)` (the Laplace variable `s` set to a real `α`).
pub fn transition_matrix(scheme: Scheme, p: &SystemParams, alpha: f64) -> Matrix4<C64> {
    let i = C64::i();
    let g = C64::from(p.coupling());
    let v = p.squeeze_rate();
    let x = C64::from(0.5 + alpha);
    let zero = C64::from(0.0);
    let mut m = match scheme {
        Scheme::DirectConversion => Matrix4::new(
            -x, zero, -i * g, zero, //
            zero, -x, zero, i * g, //
            -i * g, zero, -x, zero, //
            zero, i * g, zero, -x,
        ),
        Scheme::Teleportation => Matrix4::new(
            -x, zero, zero, -i * g, //
            zero, -x, i * g, zero, //
            zero, -i * g, -x, zero, //
            i * g, zero, zero, -x,
        ),
    };
    let (a, b) = match p.squeeze_at {
        SqueezeSite::Optical => (0, 1),
        SqueezeSite::Microwave => (2, 3),
    };
    m[(a, b)] += -2.0 * i * v * C64::from_polar(1.0, -p.theta);
    m[(b, a)] += 2.0 * i * v * C64::from_polar(1.0, p.theta);
    m
}

/// Port coupler `K`: rows `(b, b†, m, m†)`, columns the eight input
/// quadrature operators.
pub fn coupler(zeta_o: f64, zeta_m: f64) -> Coupler {
    let mut k = Coupler::zeros();
    let (co, io) = (zeta_o.sqrt(), (1.0 - zeta_o).sqrt());
    let (cm, im) = (zeta_m.sqrt(), (1.0 - zeta_m).sqrt());
    for r in 0..2 {
        k[(r, r)] = co;
        k[(r, 2 + r)] = io;
        k[(2 + r, 4 + r)] = cm;
        k[(2 + r, 6 + r)] = im;
    }
    k
}

/// LU factorisation with partial pivoting of a 4×4 complex matrix.
struct Lu4 {
    lu: Matrix4<C64>,
    perm: [usize; 4],
    sign: f64,
}

impl Lu4 {
    fn new(a: &Matrix4<C64>) -> Result<Self> {
        let mut lu = *a;
        let mut perm = [0, 1, 2, 3];
        let mut sign = 1.0;
        let scale = a.iter().map(|z| z.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
        for k in 0..4 {
            let piv = (k..4)
                .max_by(|&r, &s| lu[(r, k)].norm().total_cmp(&lu[(s, k)].norm()))
                .unwrap_or(k);
            if lu[(piv, k)].norm() <= 1e-15 * scale {
                return Err(Error::Unstable(format!(
                    "transition matrix is singular (pivot {k} has modulus {:e})",
                    lu[(piv, k)].norm()
                )));
            }
            if piv != k {
                lu.swap_rows(piv, k);
                perm.swap(piv, k);
                sign = -sign;
            }
            for r in k + 1..4 {
                let f = lu[(r, k)] / lu[(k, k)];
                lu[(r, k)] = f;
                for c in k + 1..4 {
                    let t = lu[(k, c)];
                    lu[(r, c)] -= f * t;
                }
            }
        }
        Ok(Self { lu, perm, sign })
    }

    fn determinant(&self) -> C64 {
        (0..4).fold(C64::from(self.sign), |acc, k| acc * self.lu[(k, k)])
    }

    fn inverse(&self) -> Matrix4<C64> {
        let mut inv = Matrix4::<C64>::zeros();
        for col in 0..4 {
            let mut y = [C64::from(0.0); 4];
            for r in 0..4 {
                let mut s = if self.perm[r] == col { C64::from(1.0) } else { C64::from(0.0) };
                for c in 0..r {
                    s -= self.lu[(r, c)] * y[c];
                }
                y[r] = s;
            }
            for r in (0..4).rev() {
                let mut s = y[r];
                for c in r + 1..4 {
                    s -= self.lu[(r, c)] * inv[(c, col)];
                }
                inv[(r, col)] = s / self.lu[(r, r)];
            }
        }
        inv
    }
}

fn norm_1(m: &Matrix4<C64>) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Inverse of a 4×4 complex matrix with its 1-norm condition number.
pub fn invert(g: &Matrix4<C64>) -> Result<(Matrix4<C64>, f64)> {
    let inv = Lu4::new(g)?.inverse();
    let cond = norm_1(g) * norm_1(&inv);
    Ok((inv, cond))
}

/// Determinant of a 4×4 complex matrix (zero if singular).
pub fn determinant(g: &Matrix4<C64>) -> C64 {
    Lu4::new(g).map(|lu| lu.determinant()).unwrap_or(C64::from(0.0))
}

/// Full linear-response description of the device at one parameter point.
#[derive(Debug, Clone, PartialEq)]
pub struct ScatteringModel {
    pub scheme: Scheme,
    /// Transition matrix `G` at zero frequency.
    pub transition: Matrix4<C64>,
    /// Port coupler `K`.
    pub coupler: Coupler,
    /// Mode-operator scattering matrix `S = KᵀG⁻¹K + I`.
    pub scattering: CMatrix8,
    /// Real quadrature scattering matrix `S_x = Q S Q⁻¹`.
    pub quadrature: Matrix8,
    /// 1-norm condition number of `G`.
    pub condition: f64,
}

impl ScatteringModel {
    pub fn build(scheme: Scheme, p: &SystemParams) -> Result<Self> {
        p.validate()?;
        if !is_stable(scheme, p) {
            return Err(Error::Unstable(format!(
                "{scheme} stability condition fails at C_g = {}, C_v = {}",
                p.coop, p.squeezing
            )));
        }
        let transition = transition_matrix(scheme, p, 0.0);
        let (inv, condition) = invert(&transition)?;
        let coupler = coupler(p.zeta_o, p.zeta_m);
        let kc = coupler.map(C64::from);
        let scattering = kc.transpose() * inv * kc + CMatrix8::identity();

        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut q = CMatrix8::zeros();
        let mut q_inv = CMatrix8::zeros();
        for k in 0..4 {
            let (a, b) = (2 * k, 2 * k + 1);
            q[(a, a)] = C64::from(h);
            q[(a, b)] = C64::from(h);
            q[(b, a)] = C64::new(0.0, -h);
            q[(b, b)] = C64::new(0.0, h);
            q_inv[(a, a)] = C64::from(h);
            q_inv[(a, b)] = C64::new(0.0, h);
            q_inv[(b, a)] = C64::from(h);
            q_inv[(b, b)] = C64::new(0.0, -h);
        }
        let sx = q * scattering * q_inv;
        let scale = sx.iter().map(|z| z.norm()).fold(1.0, f64::max);
        let residue = sx.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
        if residue > REALITY_TOL * scale {
            return Err(Error::Numerical(format!(
                "quadrature scattering matrix has imaginary residue {residue:e}"
            )));
        }
        Ok(Self {
            scheme,
            transition,
            coupler,
            scattering,
            quadrature: sx.map(|z| z.re),
            condition,
        })
    }

    /// True when `G` is close enough to singular that results lose
    /// precision.
    pub fn ill_conditioned(&self) -> bool {
        self.condition > CONDITION_WARN
    }

    /// 2×2 block of `S_x` from input port `from` to output port `to`.
    pub fn block(&self, to: Port, from: Port) -> Matrix2<f64> {
        let [r0, r1] = to.quadratures();
        let [c0, c1] = from.quadratures();
        let s = &self.quadrature;
        Matrix2::new(s[(r0, c0)], s[(r0, c1)], s[(r1, c0)], s[(r1, c1)])
    }

    /// Output covariance `S_x V_in S_xᵀ` for a diagonal input covariance.
    pub fn output_covariance(&self, v_in: &[f64; 8]) -> Matrix8 {
        let d = Matrix8::from_diagonal(&nalgebra::SVector::<f64, 8>::from_column_slice(v_in));
        self.quadrature * d * self.quadrature.transpose()
    }

    /// Noise added at output port `to` by every input except `signal`.
    pub fn noise_matrix(&self, to: Port, signal: Port, v_in: &[f64; 8]) -> Matrix2<f64> {
        let mut n = Matrix2::zeros();
        for port in Port::ALL.into_iter().filter(|&k| k != signal) {
            let a = self.block(to, port);
            let [i0, i1] = port.quadratures();
            let d = Matrix2::new(v_in[i0], 0.0, 0.0, v_in[i1]);
            n += a * d * a.transpose();
        }
        n
    }
}

/// Input covariance: vacuum everywhere except the thermal microwave bath.
pub fn input_covariance(n_in: f64) -> [f64; 8] {
    let mut v = [0.5; 8];
    v[6] += n_in;
    v[7] += n_in;
    v
}

/// Largest real part among the roots of `det G(α) = 0`.
///
/// The roots are the eigenvalues of `G(0)`; they are taken from the
/// companion matrix of the characteristic polynomial and the leading root
/// is polished by bisection on `det G(α)` when it is real.
pub fn stability_root(scheme: Scheme, p: &SystemParams) -> Result<f64> {
    p.validate()?;
    let g0 = transition_matrix(scheme, p, 0.0);
    let coeffs = characteristic_polynomial(&g0);
    let scale = coeffs.iter().map(|c| c.norm()).fold(1.0, f64::max);
    if coeffs.iter().any(|c| c.im.abs() > 1e-12 * scale) {
        return Err(Error::Numerical(format!(
            "characteristic polynomial of G is not real: {coeffs:?}"
        )));
    }
    // det(αI − G0) = α⁴ + c3 α³ + c2 α² + c1 α + c0
    let c: Vec<f64> = coeffs.iter().map(|z| z.re).collect();
    let companion = Matrix4::new(
        0.0, 0.0, 0.0, -c[0], //
        1.0, 0.0, 0.0, -c[1], //
        0.0, 1.0, 0.0, -c[2], //
        0.0, 0.0, 1.0, -c[3],
    );
    let roots = companion.complex_eigenvalues();
    let lead = roots
        .iter()
        .copied()
        .max_by(|a, b| a.re.total_cmp(&b.re))
        .ok_or_else(|| Error::Numerical("no roots found".into()))?;
    if !lead.re.is_finite() {
        return Err(Error::Numerical(format!("root finder returned {lead}")));
    }
    let width = 1e-6 * (1.0 + lead.re.abs());
    if lead.im.abs() > width {
        return Ok(lead.re);
    }
    let f = |a: f64| determinant(&transition_matrix(scheme, p, a)).re;
    let (mut lo, mut hi) = (lead.re - width, lead.re + width);
    let (mut flo, fhi) = (f(lo), f(hi));
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        // even-multiplicity root: no sign change to bracket
        return Ok(lead.re);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    let root = 0.5 * (lo + hi);
    if (root - lead.re).abs() > width {
        return Err(Error::Numerical(format!(
            "bisection left bracket [{}, {}] around {}",
            lead.re - width,
            lead.re + width,
            lead.re
        )));
    }
    Ok(root)
}

/// Coefficients `[c0, c1, c2, c3]` of `det(αI − A) = α⁴ + c3α³ + … + c0`,
/// by the Faddeev-LeVerrier recursion.
fn characteristic_polynomial(a: &Matrix4<C64>) -> [C64; 4] {
    let mut c = [C64::from(0.0); 5];
    c[4] = C64::from(1.0);
    let mut m = Matrix4::<C64>::zeros();
    for k in 1..=4 {
        m = a * m + Matrix4::identity() * c[5 - k];
        c[4 - k] = -(a * m).trace() / C64::from(k as f64);
    }
    [c[0], c[1], c[2], c[3]]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lu_inverse_matches_identity() {
        let p = SystemParams::new(0.3, 0.1).with_theta(0.7);
        for scheme in [Scheme::DirectConversion, Scheme::Teleportation] {
            let g = transition_matrix(scheme, &p, 0.0);
            let (inv, cond) = invert(&g).unwrap();
            let err = (g * inv - Matrix4::identity()).iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert!(err < 1e-14, "{err}");
            assert!(cond >= 1.0);
        }
    }

    #[test]
    fn characteristic_polynomial_of_dc() {
        // (x² − 2vx + g²)(x² + 2vx + g²) with x = 1/2 + α
        let p = SystemParams::new(0.2, 0.05);
        let (g, v) = (p.coupling(), p.squeeze_rate());
        for a in [-0.7, 0.0, 0.3] {
            let x = 0.5 + a;
            let expected = (x * x - 2.0 * v * x + g * g) * (x * x + 2.0 * v * x + g * g);
            let d = determinant(&transition_matrix(Scheme::DirectConversion, &p, a));
            assert!((d.re - expected).abs() < 1e-14 && d.im.abs() < 1e-14);
        }
    }

    #[test]
    fn stability_roots() {
        let p = SystemParams::new(0.1, 0.0);
        assert!(stability_root(Scheme::DirectConversion, &p).unwrap() < 0.0);
        let edge = (1.1f64).powi(2) / 4.0;
        let above = SystemParams::new(0.1, edge + 1e-3);
        assert!(stability_root(Scheme::DirectConversion, &above).unwrap() > 0.0);
        let at = SystemParams::new(0.1, edge);
        assert!(stability_root(Scheme::DirectConversion, &at).unwrap().abs() < 1e-6);
        let at = SystemParams::new(0.1, 0.81 / 4.0);
        assert!(stability_root(Scheme::Teleportation, &at).unwrap().abs() < 1e-6);
    }

    #[test]
    fn unstable_build_is_rejected() {
        let p = SystemParams::new(0.1, 0.3);
        assert!(ScatteringModel::build(Scheme::DirectConversion, &p).is_ok());
        assert!(matches!(
            ScatteringModel::build(Scheme::Teleportation, &p),
            Err(Error::Unstable(_))
        ));
    }
}
