//! The three-generator symplectic algebra behind the simplified squeezing operator.
//!
//! With `K₀ = (a†a + aa†)/4`, `K₊ = (a†)²/2` and `K₋ = a²/2` the generators close
//! under `[K₀, K±] = ±K±`, `[K₊, K₋] = −2K₀`, and
//!
//! ```text
//! e^{ik(a† ± a)²} = e^{2ik(K₊ ± 2K₀ + K₋)} = e^{aK₊} e^{bK₀} e^{cK₋}.
//! ```
//!
//! The coefficients follow from a faithful 2×2 representation in which
//! `K₊ ± 2K₀ + K₋` is nilpotent, so its exponential is a first-order polynomial.
//!
//! Logarithms and square roots use the principal branch. For real `k` (free
//! evolution) `1 ∓ 2ik` has real part one and the branch is never in question.

use num_complex::Complex64;
use num_rational::Rational64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Which member of the simplified family `e^{ik(a† ± a)²}`.
///
/// `Minus` is the free-evolution operator (`(a† − a)² ∝ p̂²`); `Plus` is a
/// Gaussian phase in position (`(a† + a)² ∝ x̂²`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub const BOTH: [Branch; 2] = [Branch::Plus, Branch::Minus];

    /// `+1` for `Plus`, `−1` for `Minus`.
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }

    /// The sign appearing in `1 ∓ 2ik`: `'-'` for `Plus`, `'+'` for `Minus`.
    pub fn pole_sign(self) -> char {
        match self {
            Branch::Plus => '-',
            Branch::Minus => '+',
        }
    }

    /// `1 ∓ 2ik`.
    pub fn denominator(self, k: Complex64) -> Complex64 {
        Complex64::new(1.0, 0.0) - self.sign() * 2.0 * Complex64::i() * k
    }
}

/// Squeezing parameters of a free-evolution step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SqueezeParams {
    /// Complex squeezing amplitude of the general operator.
    pub xi: Complex64,
    /// Rotation parameter of the general operator.
    pub eta: f64,
    /// Parameter of the simplified operator `e^{ik(a† ± a)²}`.
    pub k: Complex64,
    pub branch: Branch,
}

/// `ξ = −iωt/2`, `η = −ωt/2`, `k = ωt/4` on the `Minus` branch.
pub fn free_evolution_squeeze_params(t: f64, omega: f64) -> Result<SqueezeParams> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::Domain(format!(
            "time must be finite and non-negative, got {t}"
        )));
    }
    if !(omega.is_finite() && omega > 0.0) {
        return Err(Error::Domain(format!(
            "omega must be positive, got {omega}"
        )));
    }
    let wt = omega * t;
    Ok(SqueezeParams {
        xi: Complex64::new(0.0, -wt / 2.0),
        eta: -wt / 2.0,
        k: Complex64::new(wt / 4.0, 0.0),
        branch: Branch::Minus,
    })
}

impl SqueezeParams {
    /// The free-evolution family satisfies `ξ = iη` with `k = −η/2`.
    pub fn is_free_evolution_consistent(&self, tol: f64) -> bool {
        self.branch == Branch::Minus
            && (self.xi - Complex64::new(0.0, self.eta)).norm() <= tol
            && (self.k - Complex64::new(-self.eta / 2.0, 0.0)).norm() <= tol
    }
}

/// `k′ = ωt/(4(1 + iωt))`, the `Plus`-branch parameter that turns the squeezed
/// vacuum of the `Minus` step into a Gaussian phase in position.
pub fn position_stage_k(omega_t: f64) -> Complex64 {
    Complex64::new(omega_t / 4.0, 0.0) / Complex64::new(1.0, omega_t)
}

/// Exact 2×2 rational matrix.
pub type RatMat2 = [[Rational64; 2]; 2];

/// Complex 2×2 matrix.
pub type Mat2 = [[Complex64; 2]; 2];

fn rat(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

fn rat_mul(a: &RatMat2, b: &RatMat2) -> RatMat2 {
    let mut out = [[rat(0, 1); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

fn rat_lin(ca: Rational64, a: &RatMat2, cb: Rational64, b: &RatMat2) -> RatMat2 {
    let mut out = [[rat(0, 1); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = ca * a[i][j] + cb * b[i][j];
        }
    }
    out
}

/// Commutator `[a, b]` in exact arithmetic.
pub fn rat_commutator(a: &RatMat2, b: &RatMat2) -> RatMat2 {
    rat_lin(rat(1, 1), &rat_mul(a, b), rat(-1, 1), &rat_mul(b, a))
}

fn rat_is_zero(m: &RatMat2) -> bool {
    m.iter().flatten().all(|v| *v == rat(0, 1))
}

/// The faithful representation `K₀ ↔ ½diag(−1, 1)`, `K₊ ↔ [[0,0],[−1,0]]`,
/// `K₋ ↔ [[0,1],[0,0]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rep2x2 {
    pub k0: RatMat2,
    pub k_plus: RatMat2,
    pub k_minus: RatMat2,
}

impl Default for Rep2x2 {
    fn default() -> Self {
        Rep2x2 {
            k0: [[rat(-1, 2), rat(0, 1)], [rat(0, 1), rat(1, 2)]],
            k_plus: [[rat(0, 1), rat(0, 1)], [rat(-1, 1), rat(0, 1)]],
            k_minus: [[rat(0, 1), rat(1, 1)], [rat(0, 1), rat(0, 1)]],
        }
    }
}

impl Rep2x2 {
    /// `M± = K₊ ± 2K₀ + K₋`.
    pub fn m(&self, branch: Branch) -> RatMat2 {
        let s = rat(branch.sign() as i64 * 2, 1);
        let sum = rat_lin(rat(1, 1), &self.k_plus, rat(1, 1), &self.k_minus);
        rat_lin(rat(1, 1), &sum, s, &self.k0)
    }
}

/// Residuals of the three defining commutators, each of which must vanish.
#[derive(Debug, Clone, PartialEq)]
pub struct CommutatorReport {
    /// `[K₀,K₊] − K₊`.
    pub k0_kplus: RatMat2,
    /// `[K₀,K₋] + K₋`.
    pub k0_kminus: RatMat2,
    /// `[K₊,K₋] + 2K₀`.
    pub kplus_kminus: RatMat2,
    /// `M±²` for `Plus` then `Minus`.
    pub nilpotency: [RatMat2; 2],
}

impl CommutatorReport {
    pub fn commutators_vanish(&self) -> bool {
        rat_is_zero(&self.k0_kplus)
            && rat_is_zero(&self.k0_kminus)
            && rat_is_zero(&self.kplus_kminus)
    }

    pub fn nilpotent(&self) -> bool {
        self.nilpotency.iter().all(rat_is_zero)
    }

    pub fn all_zero(&self) -> bool {
        self.commutators_vanish() && self.nilpotent()
    }
}

/// Checks the commutation relations and the nilpotency of `M±` exactly.
pub fn verify_rep_commutators() -> CommutatorReport {
    let r = Rep2x2::default();
    let one = rat(1, 1);
    CommutatorReport {
        k0_kplus: rat_lin(one, &rat_commutator(&r.k0, &r.k_plus), -one, &r.k_plus),
        k0_kminus: rat_lin(one, &rat_commutator(&r.k0, &r.k_minus), one, &r.k_minus),
        kplus_kminus: rat_lin(
            one,
            &rat_commutator(&r.k_plus, &r.k_minus),
            rat(2, 1),
            &r.k0,
        ),
        nilpotency: Branch::BOTH.map(|b| {
            let m = r.m(b);
            rat_mul(&m, &m)
        }),
    }
}

fn to_complex(m: &RatMat2) -> Mat2 {
    m.map(|row| row.map(|v| Complex64::new(*v.numer() as f64 / *v.denom() as f64, 0.0)))
}

pub fn mat2_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// Largest entrywise modulus of `a − b`.
pub fn mat2_max_diff(a: &Mat2, b: &Mat2) -> f64 {
    let mut m = 0.0f64;
    for i in 0..2 {
        for j in 0..2 {
            m = m.max((a[i][j] - b[i][j]).norm());
        }
    }
    m
}

/// `e^{2ikM±} = I + 2ikM±`.
pub fn exp_simplified_squeeze_2x2(k: Complex64, branch: Branch) -> Mat2 {
    let m = to_complex(&Rep2x2::default().m(branch));
    let c = 2.0 * Complex64::i() * k;
    let mut out = m.map(|row| row.map(|v| c * v));
    out[0][0] += 1.0;
    out[1][1] += 1.0;
    out
}

/// Truncated power series `Σ_{j<terms} Aʲ/j!`.
pub fn exp_series_2x2(a: &Mat2, terms: usize) -> Mat2 {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let mut sum = [[one, zero], [zero, one]];
    let mut term = sum;
    for j in 1..terms {
        term = mat2_mul(&term, a).map(|row| row.map(|v| v / j as f64));
        for r in 0..2 {
            for c in 0..2 {
                sum[r][c] += term[r][c];
            }
        }
    }
    sum
}

/// Generator `2ikM±` as a complex 2×2 matrix.
pub fn simplified_generator_2x2(k: Complex64, branch: Branch) -> Mat2 {
    let c = 2.0 * Complex64::i() * k;
    to_complex(&Rep2x2::default().m(branch)).map(|row| row.map(|v| c * v))
}

/// Coefficients of `e^{2ik(K₊ ± 2K₀ + K₋)} = e^{aK₊} e^{bK₀} e^{cK₋}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DisentangledFactors {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    /// `(1 ∓ 2ik)^{-1/2} = e^{b/4}`, the vacuum normalization.
    pub prefactor: Complex64,
}

impl DisentangledFactors {
    /// `e^{aK₊} e^{bK₀} e^{cK₋}` in the 2×2 representation.
    pub fn reassemble_2x2(&self) -> Mat2 {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let lower = [[one, zero], [-self.a, one]];
        let diag = [[(-self.b / 2.0).exp(), zero], [zero, (self.b / 2.0).exp()]];
        let upper = [[one, self.c], [zero, one]];
        mat2_mul(&mat2_mul(&lower, &diag), &upper)
    }
}

fn check_pole(k: Complex64, branch: Branch) -> Result<Complex64> {
    if !(k.re.is_finite() && k.im.is_finite()) {
        return Err(Error::Domain(format!("k must be finite, got {k}")));
    }
    let d = branch.denominator(k);
    if d.norm() == 0.0 {
        return Err(Error::Singular {
            k,
            sign: branch.pole_sign(),
        });
    }
    Ok(d)
}

/// `a = c = 2ik/(1∓2ik)`, `b = −2 ln(1∓2ik)`, principal branch.
///
/// Valid for every `k` off the pole `1 ∓ 2ik = 0`: `e^{−b/2} = 1∓2ik` for
/// any choice of logarithm, so the 2×2 identity does not depend on the branch.
pub fn disentangle_factors(k: Complex64, branch: Branch) -> Result<DisentangledFactors> {
    let d = check_pole(k, branch)?;
    let a = 2.0 * Complex64::i() * k / d;
    Ok(DisentangledFactors {
        a,
        b: -2.0 * d.ln(),
        c: a,
        prefactor: 1.0 / d.sqrt(),
    })
}

/// `e^{ik(a† ± a)²}|0⟩ = prefactor · e^{coefficient (a†)²}|0⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VacuumAction {
    pub prefactor: Complex64,
    pub creation_coefficient: Complex64,
}

/// Requires `Re(1 ∓ 2ik) > 0`, where the principal branch is continuous
/// along the path from `k = 0` and the operator statement is safe.
pub(crate) fn check_operator_branch(k: Complex64, branch: Branch) -> Result<Complex64> {
    let d = check_pole(k, branch)?;
    if d.re <= 0.0 {
        return Err(Error::Branch {
            k,
            sign: branch.pole_sign(),
            re: d.re,
        });
    }
    Ok(d)
}

/// Squeezed vacuum in disentangled form: `((1∓2ik)^{-1/2}, ik/(1∓2ik))`.
pub fn vacuum_action(k: Complex64, branch: Branch) -> Result<VacuumAction> {
    let d = check_operator_branch(k, branch)?;
    Ok(VacuumAction {
        prefactor: 1.0 / d.sqrt(),
        creation_coefficient: Complex64::i() * k / d,
    })
}
