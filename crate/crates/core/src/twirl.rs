//! Two-fold twirls: exact Haar, finite group, and channel twirls on Choi matrices.

use serde_json::{json, Value};

use crate::clifford::ProjectiveUnitary;
use crate::error::{Error, Result};
use crate::matrix::{swap, ComplexMatrix, C64};
use crate::par;

pub const HERMITIAN_TOL: f64 = 1e-9;
pub const PSD_FLOOR: f64 = -1e-8;
pub const TRACE_PRESERVING_TOL: f64 = 1e-8;

/// Choi matrix `C = Σ_ij E_ij ⊗ Λ(E_ij)` of a channel on `C^d`, input factor
/// first, so `Tr C = d`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChoiMatrix {
    d: usize,
    matrix: ComplexMatrix,
}

impl ChoiMatrix {
    /// Validates hermiticity, positivity and trace preservation.
    pub fn new(d: usize, matrix: ComplexMatrix) -> Result<Self> {
        if d == 0 || matrix.rows() != d * d || matrix.cols() != d * d {
            return Err(Error::DimensionMismatch(format!(
                "Choi matrix for d = {d} must be {0}x{0}, got {1}x{2}",
                d * d,
                matrix.rows(),
                matrix.cols()
            )));
        }
        let herm = matrix.hermiticity_defect()?;
        if herm > HERMITIAN_TOL {
            return Err(Error::InvalidInput(format!("Choi matrix not Hermitian (defect {herm:e})")));
        }
        let lowest = matrix.hermitian_eigenvalues()?[0];
        if lowest < PSD_FLOOR {
            return Err(Error::InvalidInput(format!("Choi matrix not positive (eigenvalue {lowest:e})")));
        }
        let c = Self { d, matrix };
        let tp = c.input_marginal().frobenius_distance(&ComplexMatrix::identity(d));
        if tp > TRACE_PRESERVING_TOL {
            return Err(Error::InvalidInput(format!("channel not trace preserving (defect {tp:e})")));
        }
        Ok(c)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn from_kraus(kraus: &[ComplexMatrix]) -> Result<Self> {
        let d =
            kraus.first().map(ComplexMatrix::rows).ok_or_else(|| Error::InvalidInput("no Kraus operators".into()))?;
        if kraus.iter().any(|k| k.rows() != d || k.cols() != d) {
            return Err(Error::DimensionMismatch("Kraus operators must all be square of one size".into()));
        }
        let n = d * d;
        let mut m = ComplexMatrix::zeros(n, n);
        for k in kraus {
            for i in 0..d {
                for a in 0..d {
                    for j in 0..d {
                        for b in 0..d {
                            m[(i * d + a, j * d + b)] += k[(a, i)] * k[(b, j)].conj();
                        }
                    }
                }
            }
        }
        Self::new(d, m)
    }

    /// `ρ ↦ VρV†`.
    pub fn unitary(v: &ComplexMatrix) -> Result<Self> {
        Self::from_kraus(std::slice::from_ref(v))
    }

    pub fn identity(d: usize) -> Self {
        Self { d, matrix: omega_projector(d) }
    }

    /// `ρ ↦ pρ + (1 − p) Tr(ρ) I/d`.
    pub fn depolarizing(d: usize, p: f64) -> Result<Self> {
        Self::new(d, depolarizing_matrix(d, p))
    }

    /// `Tr_out C`, which is `I` for trace-preserving maps.
    pub fn input_marginal(&self) -> ComplexMatrix {
        let d = self.d;
        ComplexMatrix::from_fn(d, d, |i, j| (0..d).map(|a| self.matrix[(i * d + a, j * d + a)]).sum())
    }

    /// `Λ(ρ) = Σ_ij ρ_ij Λ(E_ij)`.
    pub fn apply(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        let d = self.d;
        if rho.rows() != d || rho.cols() != d {
            return Err(Error::DimensionMismatch(format!("state of size {} for d = {d}", rho.rows())));
        }
        Ok(ComplexMatrix::from_fn(d, d, |a, b| {
            let mut acc = C64::new(0.0, 0.0);
            for i in 0..d {
                for j in 0..d {
                    acc += rho[(i, j)] * self.matrix[(i * d + a, j * d + b)];
                }
            }
            acc
        }))
    }

    /// JSON header line followed by the matrix dump.
    pub fn to_text(&self) -> String {
        let header = json!({ "d": self.d, "normalization": "trace=d" });
        format!("{header}\n{}", self.matrix.to_dump())
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().skip_while(|l| l.trim().is_empty());
        let header_line = lines.next().ok_or_else(|| Error::Parse("empty Choi file".into()))?;
        let header: Value = serde_json::from_str(header_line).map_err(|e| Error::Parse(format!("Choi header: {e}")))?;
        let d = header
            .get("d")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("Choi header lacks integer \"d\"".into()))? as usize;
        match header.get("normalization").and_then(Value::as_str) {
            Some("trace=d") | None => {}
            Some(other) => return Err(Error::Parse(format!("unsupported normalization {other:?}"))),
        }
        let matrix = ComplexMatrix::parse_dump_prefix(&mut lines)?;
        if lines.any(|l| !l.trim().is_empty()) {
            return Err(Error::Parse("trailing content after Choi matrix".into()));
        }
        Self::new(d, matrix)
    }
}

/// `ΩΩ†` with `Ω = Σ_i |ii⟩` (not normalized).
fn omega_projector(d: usize) -> ComplexMatrix {
    let n = d * d;
    let mut m = ComplexMatrix::zeros(n, n);
    for i in 0..d {
        for j in 0..d {
            m[(i * d + i, j * d + j)] = C64::new(1.0, 0.0);
        }
    }
    m
}

fn depolarizing_matrix(d: usize, p: f64) -> ComplexMatrix {
    let n = d * d;
    let mut m = omega_projector(d).scale(C64::new(p, 0.0));
    for i in 0..n {
        m[(i, i)] += (1.0 - p) / d as f64;
    }
    m
}

/// Coefficients `(a, b)` of the projection `a I + b SWAP` for an operator
/// with `Tr x = t` and `Tr(SWAP x) = s`.
fn identity_swap_coefficients(d: usize, t: C64, s: C64) -> (C64, C64) {
    // Gram system [[d², d], [d, d²]]
    let d = d as f64;
    let det = d.powi(4) - d * d;
    ((t * d * d - s * d) / det, (s * d * d - t * d) / det)
}

fn local_dim(x: &ComplexMatrix) -> Result<usize> {
    if !x.is_square() {
        return Err(Error::NotSquare { rows: x.rows(), cols: x.cols() });
    }
    let n = x.rows();
    let d = (n as f64).sqrt().round() as usize;
    if d * d != n {
        return Err(Error::DimensionMismatch(format!("operator of size {n} is not on a two-fold tensor power")));
    }
    Ok(d)
}

/// Exact two-fold Haar twirl: projection onto `span{I, SWAP}`.
pub fn haar_twirl2(x: &ComplexMatrix) -> Result<ComplexMatrix> {
    let d = local_dim(x)?;
    if d < 2 {
        return Err(Error::InvalidInput("two-fold twirl needs d >= 2".into()));
    }
    let sw = swap(d);
    let (a, b) = identity_swap_coefficients(d, x.trace()?, sw.multiply(x)?.trace()?);
    Ok(&ComplexMatrix::identity(d * d).scale(a) + &sw.scale(b))
}

fn check_group(group: &[ProjectiveUnitary], d: usize) -> Result<()> {
    if group.is_empty() {
        return Err(Error::InvalidInput("twirl over an empty group".into()));
    }
    if let Some(g) = group.iter().find(|g| g.dim() != d) {
        return Err(Error::DimensionMismatch(format!("group element of size {} for d = {d}", g.dim())));
    }
    Ok(())
}

fn average(terms: Vec<ComplexMatrix>, count: usize) -> ComplexMatrix {
    let mut it = terms.into_iter();
    let first = it.next().expect("nonempty group");
    let sum = it.fold(first, |acc, t| &acc + &t);
    sum.scale(C64::new(1.0 / count as f64, 0.0))
}

/// `(1/|G|) Σ (g⊗g) x (g⊗g)†`.
pub fn group_twirl2(group: &[ProjectiveUnitary], x: &ComplexMatrix) -> Result<ComplexMatrix> {
    let d = local_dim(x)?;
    check_group(group, d)?;
    let terms = par::map(group, |g| {
        let gg = g.matrix().kron(g.matrix());
        &(&gg * x) * &gg.dagger()
    });
    Ok(average(terms, group.len()))
}

/// Largest `‖group_twirl2(E) − haar_twirl2(E)‖_F` over the `d⁴` matrix units
/// `E` on `C^d ⊗ C^d`, with the maximizing unit `(row, col)`.
pub fn max_matrix_unit_deviation(group: &[ProjectiveUnitary]) -> Result<(f64, [usize; 2])> {
    let d = group.first().map(ProjectiveUnitary::dim).ok_or_else(|| Error::InvalidInput("empty group".into()))?;
    check_group(group, d)?;
    if d < 2 {
        return Err(Error::InvalidInput("two-fold twirl needs d >= 2".into()));
    }
    let n = d * d;
    let squares: Vec<ComplexMatrix> = group.iter().map(|g| g.matrix().kron(g.matrix())).collect();
    let sw = swap(d);
    let inv = 1.0 / group.len() as f64;
    let devs = par::map_range(n * n, |unit| {
        let (r, c) = (unit / n, unit % n);
        // (g⊗g) E_rc (g⊗g)† is the outer product of column r and conj(column c)
        let mut acc = ComplexMatrix::zeros(n, n);
        for gg in &squares {
            for i in 0..n {
                let left = gg[(i, r)];
                for j in 0..n {
                    acc[(i, j)] += left * gg[(j, c)].conj();
                }
            }
        }
        let t = if r == c { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
        let (a, b) = identity_swap_coefficients(d, t, sw[(c, r)]);
        let mut dev = 0.0;
        for i in 0..n {
            for j in 0..n {
                let haar = sw[(i, j)] * b + if i == j { a } else { C64::new(0.0, 0.0) };
                dev += (acc[(i, j)] * inv - haar).norm_sqr();
            }
        }
        dev.sqrt()
    });
    let (unit, &best) = devs.iter().enumerate().max_by(|x, y| x.1.total_cmp(y.1)).expect("at least one unit");
    Ok((best, [unit / n, unit % n]))
}

/// Choi matrix of `ρ ↦ (1/|G|) Σ g† Λ(g ρ g†) g`, which is
/// `(1/|G|) Σ (gᵀ ⊗ g†) C (ḡ ⊗ g)`.
pub fn channel_twirl(group: &[ProjectiveUnitary], c: &ChoiMatrix) -> Result<ChoiMatrix> {
    check_group(group, c.d)?;
    let terms = par::map(group, |g| {
        let u = g.matrix();
        let left = u.transpose().kron(&u.dagger());
        let right = u.conj().kron(u);
        &(&left * &c.matrix) * &right
    });
    ChoiMatrix::new(c.d, average(terms, group.len()))
}

/// Hilbert-Schmidt projection of `c` onto the depolarizing family:
/// `(p, ‖C − C_p‖_F)`.
pub fn depolarizing_fit(c: &ChoiMatrix) -> (f64, f64) {
    let d = c.d;
    let n = d * d;
    let omega = omega_projector(d);
    let mut basis = omega.clone();
    for i in 0..n {
        basis[(i, i)] -= 1.0 / d as f64;
    }
    let mut shifted = c.matrix.clone();
    for i in 0..n {
        shifted[(i, i)] -= 1.0 / d as f64;
    }
    let p = basis.hs_inner(&shifted).re / basis.hs_inner(&basis).re;
    let residual = c.matrix.frobenius_distance(&depolarizing_matrix(d, p));
    (p, residual)
}

/// `(residual ≤ tol, p)`.
pub fn is_depolarizing(c: &ChoiMatrix, tol: f64) -> (bool, f64) {
    let (p, residual) = depolarizing_fit(c);
    (residual <= tol, p)
}

/// `F_e = ⟨Φ|C|Φ⟩/d` for the normalized maximally entangled `Φ`.
pub fn entanglement_fidelity(c: &ChoiMatrix) -> f64 {
    let d = c.d;
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..d {
        for j in 0..d {
            acc += c.matrix[(i * d + i, j * d + j)];
        }
    }
    acc.re / (d * d) as f64
}

/// `(d F_e + 1)/(d + 1)`.
pub fn average_fidelity(c: &ChoiMatrix) -> f64 {
    let d = c.d as f64;
    (d * entanglement_fidelity(c) + 1.0) / (d + 1.0)
}
