//! Clifford groups as projective matrix groups.
//!
//! Elements are carried as [`ProjectiveUnitary`] values: a unitary with its
//! global phase fixed plus a quantized fingerprint used for deduplication.
//! Generator sets are candidates; membership in the normalizer of the
//! Weyl-Heisenberg group is certified by [`normalizer_check`], and
//! [`closure_enumerate`] materializes the group they generate.

use std::collections::HashMap;
use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64, TOL_EQUALITY};
use crate::par;
use crate::weyl::{
    displacement, displacement_vectors, f_of, gcd, lcm, local_step_generators, multi_displacement_matrix, omega_pow,
    tau_pow,
};

/// Quantization grid for fingerprints.
pub const KEY_GRID: f64 = 1e-6;
/// Frobenius distance below which two canonical matrices are the same element.
pub const SAME_ELEMENT_TOL: f64 = 1e-6;
/// Entries below this modulus are skipped when fixing the phase.
pub const PHASE_PIVOT_FLOOR: f64 = 1e-8;
/// Tolerance for recognizing a conjugated displacement.
pub const NORMALIZER_TOL: f64 = 1e-8;
pub const DEFAULT_CLOSURE_LIMIT: usize = 200_000;

/// A point of `PU(n)`: unitary with canonical global phase.
#[derive(Clone, Debug)]
pub struct ProjectiveUnitary {
    matrix: ComplexMatrix,
    key: Vec<i64>,
}

impl ProjectiveUnitary {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn key(&self) -> &[i64] {
        &self.key
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Same element of `PU(n)` as `other`, by key and then distance.
    pub fn same_element(&self, other: &ProjectiveUnitary) -> bool {
        self.key == other.key && self.matrix.frobenius_distance(&other.matrix) < SAME_ELEMENT_TOL
    }

    pub fn compose(&self, other: &ProjectiveUnitary) -> Result<ProjectiveUnitary> {
        Ok(canonicalize_unchecked(self.matrix.multiply(&other.matrix)?))
    }
}

impl PartialEq for ProjectiveUnitary {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key
    }
}

impl Eq for ProjectiveUnitary {}

/// Fix the global phase of a unitary and compute its fingerprint.
pub fn canonicalize(u: &ComplexMatrix) -> Result<ProjectiveUnitary> {
    let Some(defect) = u.unitarity_defect() else {
        return Err(Error::NotSquare { rows: u.rows(), cols: u.cols() });
    };
    if defect > TOL_EQUALITY {
        return Err(Error::NotUnitary { deviation: defect, tol: TOL_EQUALITY });
    }
    Ok(canonicalize_unchecked(u.clone()))
}

pub(crate) fn canonicalize_unchecked(u: ComplexMatrix) -> ProjectiveUnitary {
    let pivot = u.as_slice().iter().find(|z| z.norm() > PHASE_PIVOT_FLOOR).copied().unwrap_or(C64::new(1.0, 0.0));
    let phase = pivot.conj() / pivot.norm();
    let matrix = u.scale(phase);
    let key = fingerprint(&matrix);
    ProjectiveUnitary { matrix, key }
}

fn fingerprint(m: &ComplexMatrix) -> Vec<i64> {
    let mut key = Vec::with_capacity(2 * m.as_slice().len());
    for z in m.as_slice() {
        key.push((z.re / KEY_GRID).round() as i64);
        key.push((z.im / KEY_GRID).round() as i64);
    }
    key
}

/// What a [`GroupSpec`] is meant to describe.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupKind {
    /// Candidate generators of the full (multipartite) Clifford group.
    Clifford,
    /// The Weyl-Heisenberg group itself.
    WeylHeisenberg,
    /// Exactly the group generated by the listed matrices.
    Custom,
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GroupKind::Clifford => "clifford",
            GroupKind::WeylHeisenberg => "weyl-heisenberg",
            GroupKind::Custom => "custom",
        })
    }
}

/// Local dimensions plus generators of a projective matrix group.
#[derive(Clone, Debug)]
pub struct GroupSpec {
    pub dims: Vec<usize>,
    pub generators: Vec<ProjectiveUnitary>,
    pub label: String,
    pub kind: GroupKind,
}

impl GroupSpec {
    pub fn new(
        dims: Vec<usize>,
        generators: &[ComplexMatrix],
        label: impl Into<String>,
        kind: GroupKind,
    ) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::InvalidInput(format!("invalid local dimensions {dims:?}")));
        }
        let n: usize = dims.iter().product();
        let mut gens = Vec::with_capacity(generators.len());
        for (i, g) in generators.iter().enumerate() {
            if g.rows() != n || g.cols() != n {
                return Err(Error::DimensionMismatch(format!(
                    "generator {i} is {}x{} but dims {dims:?} need {n}x{n}",
                    g.rows(),
                    g.cols()
                )));
            }
            gens.push(canonicalize(g)?);
        }
        Ok(Self { dims, generators: gens, label: label.into(), kind })
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    /// Spec with only the first `count` generators.
    pub fn prefix(&self, count: usize) -> GroupSpec {
        GroupSpec {
            dims: self.dims.clone(),
            generators: self.generators[..count.min(self.generators.len())].to_vec(),
            label: format!("{}[..{count}]", self.label),
            kind: GroupKind::Custom,
        }
    }

    /// Parse the JSON file format
    /// `{"dims": [..], "label": "..", "kind": "..", "generators": [...]}`.
    ///
    /// `kind` is optional and defaults to `custom`.
    ///
    /// Each generator is a list of rows of `[re, im]` pairs, or a flat
    /// row-major list of pairs. Numbers may be JSON numbers or strings.
    pub fn from_json(text: &str) -> Result<GroupSpec> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let dims: Vec<usize> = v
            .get("dims")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing `dims` array".into()))?
            .iter()
            .map(|x| x.as_u64().map(|x| x as usize).ok_or_else(|| Error::Parse("`dims` must hold naturals".into())))
            .collect::<Result<_>>()?;
        let label = v.get("label").and_then(Value::as_str).unwrap_or("custom").to_string();
        let n: usize = dims.iter().product();
        let gens = v
            .get("generators")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing `generators` array".into()))?;
        let matrices: Vec<ComplexMatrix> = gens.iter().map(|g| parse_generator(g, n)).collect::<Result<_>>()?;
        let kind = match v.get("kind").and_then(Value::as_str) {
            None | Some("custom") => GroupKind::Custom,
            Some("clifford") => GroupKind::Clifford,
            Some("weyl-heisenberg") => GroupKind::WeylHeisenberg,
            Some(other) => return Err(Error::Parse(format!("unknown group kind {other:?}"))),
        };
        GroupSpec::new(dims, &matrices, label, kind)
    }

    pub fn to_json(&self) -> String {
        let gens: Vec<Value> = self
            .generators
            .iter()
            .map(|g| {
                let m = g.matrix();
                Value::Array(
                    (0..m.rows())
                        .map(|i| {
                            Value::Array(
                                m.row(i)
                                    .iter()
                                    .map(|z| json!([format!("{:.16e}", z.re), format!("{:.16e}", z.im)]))
                                    .collect(),
                            )
                        })
                        .collect(),
                )
            })
            .collect();
        serde_json::to_string_pretty(&json!({
            "dims": self.dims,
            "label": self.label,
            "kind": self.kind.to_string(),
            "generators": gens,
        }))
        .expect("serializable")
    }

    /// Generators in the matrix dump format, one block per generator.
    pub fn dump_generators(&self) -> String {
        self.generators.iter().map(|g| g.matrix().to_dump()).collect()
    }
}

fn parse_number(v: &Value) -> Result<f64> {
    match v {
        Value::Number(n) => n.as_f64().ok_or_else(|| Error::Parse("bad number".into())),
        Value::String(s) => s.trim().parse().map_err(|_| Error::Parse(format!("bad number {s:?}"))),
        _ => Err(Error::Parse(format!("expected a number, got {v}"))),
    }
}

fn parse_pair(v: &Value) -> Result<C64> {
    match v.as_array().map(Vec::as_slice) {
        Some([re, im]) => Ok(C64::new(parse_number(re)?, parse_number(im)?)),
        _ => Err(Error::Parse(format!("expected [re, im], got {v}"))),
    }
}

fn parse_generator(v: &Value, n: usize) -> Result<ComplexMatrix> {
    let outer = v.as_array().ok_or_else(|| Error::Parse("generator must be an array".into()))?;
    let nested = outer.first().and_then(Value::as_array).and_then(|r| r.first()).is_some_and(Value::is_array);
    let entries: Vec<C64> = if nested {
        if outer.len() != n {
            return Err(Error::DimensionMismatch(format!("generator has {} rows, expected {n}", outer.len())));
        }
        let mut all = Vec::with_capacity(n * n);
        for row in outer {
            let row = row.as_array().ok_or_else(|| Error::Parse("row must be an array".into()))?;
            if row.len() != n {
                return Err(Error::DimensionMismatch(format!("row has {} entries, expected {n}", row.len())));
            }
            for e in row {
                all.push(parse_pair(e)?);
            }
        }
        all
    } else {
        outer.iter().map(parse_pair).collect::<Result<_>>()?
    };
    ComplexMatrix::from_vec(n, n, entries)
}

/// Discrete Fourier transform `F_{jk} = ω^{jk} / √d`.
pub fn fourier_matrix(d: usize) -> ComplexMatrix {
    let s = 1.0 / (d as f64).sqrt();
    ComplexMatrix::from_fn(d, d, |j, k| omega_pow(d, (j * k) as i64) * s)
}

/// Quadratic phase gate `diag(τ^{j²})`.
pub fn quadratic_phase(d: usize) -> ComplexMatrix {
    let diag: Vec<C64> = (0..d).map(|j| tau_pow(d, (j * j) as i64)).collect();
    ComplexMatrix::diagonal(&diag)
}

/// Multi-displacements for `dims` with projective orders, reused across checks.
#[derive(Clone, Debug)]
pub struct DisplacementTable {
    pub dims: Vec<usize>,
    pub vectors: Vec<Vec<[usize; 2]>>,
    pub matrices: Vec<ComplexMatrix>,
    phase_order: usize,
}

impl DisplacementTable {
    pub fn new(dims: &[usize]) -> Result<Self> {
        if dims.is_empty() || dims.iter().any(|&d| d < 2) {
            return Err(Error::InvalidInput(format!("local dimensions must be at least 2, got {dims:?}")));
        }
        let vectors = displacement_vectors(dims);
        let matrices = par::map(&vectors, |ps| multi_displacement_matrix(dims, ps));
        let phase_order = dims.iter().map(|&d| f_of(d).expect("d >= 2")).fold(1, lcm);
        Ok(Self { dims: dims.to_vec(), vectors, matrices, phase_order })
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    /// Coefficients `Tr(D_q† y) / n` against every multi-displacement.
    pub fn coefficients(&self, y: &ComplexMatrix) -> Vec<C64> {
        let n = self.total_dim() as f64;
        self.matrices.iter().map(|dq| dq.hs_inner(y) / n).collect()
    }

    /// If `y` is a Weyl-Heisenberg phase times one multi-displacement, the
    /// index of that displacement.
    pub fn match_element(&self, y: &ComplexMatrix, tol: f64) -> Option<usize> {
        let coeffs = self.coefficients(y);
        let (best, c) =
            coeffs.iter().enumerate().max_by(|a, b| a.1.norm().total_cmp(&b.1.norm())).map(|(i, &c)| (i, c))?;
        if (y - &self.matrices[best].scale(c)).frobenius_norm() > tol {
            return None;
        }
        // the phase must lie in the cyclic group generated by the local τ's
        let phase_ok = (c.powu(self.phase_order as u32) - 1.0).norm() <= tol * self.phase_order as f64;
        phase_ok.then_some(best)
    }
}

/// Whether `u` normalizes the (multipartite) Weyl-Heisenberg group on `dims`.
///
/// Checks that `u G u†` is a Weyl-Heisenberg element for each of the `2n`
/// local single-step displacements `G`; those generate the group together
/// with central phases, so this suffices.
pub fn normalizer_check(u: &ComplexMatrix, dims: &[usize]) -> bool {
    match NormalizerChecker::new(dims) {
        Ok(c) => c.check(u),
        Err(_) => false,
    }
}

/// Reusable form of [`normalizer_check`].
#[derive(Clone, Debug)]
pub struct NormalizerChecker {
    table: DisplacementTable,
    steps: Vec<ComplexMatrix>,
}

impl NormalizerChecker {
    pub fn new(dims: &[usize]) -> Result<Self> {
        Ok(Self { table: DisplacementTable::new(dims)?, steps: local_step_generators(dims) })
    }

    pub fn check(&self, u: &ComplexMatrix) -> bool {
        let n = self.table.total_dim();
        if u.rows() != n || u.cols() != n || !u.is_unitary(TOL_EQUALITY.max(1e-8)) {
            return false;
        }
        let ud = u.dagger();
        self.steps.iter().all(|g| self.table.match_element(&(&(u * g) * &ud), NORMALIZER_TOL).is_some())
    }
}

/// Candidate generators `{F, P, D_(1,0), D_(0,1)}` of the Clifford group in dimension `d`.
pub fn clifford_generators(d: usize) -> Result<GroupSpec> {
    if d < 2 {
        return Err(Error::InvalidInput(format!("Clifford dimension must be at least 2, got {d}")));
    }
    let gens = [fourier_matrix(d), quadratic_phase(d), displacement(d, [1, 0]), displacement(d, [0, 1])];
    GroupSpec::new(vec![d], &gens, format!("clifford:{d}"), GroupKind::Clifford)
}

fn mixed_radix_digits(mut index: usize, dims: &[usize]) -> Vec<usize> {
    let mut digits = vec![0; dims.len()];
    for j in (0..dims.len()).rev() {
        digits[j] = index % dims[j];
        index /= dims[j];
    }
    digits
}

fn mixed_radix_index(digits: &[usize], dims: &[usize]) -> usize {
    digits.iter().zip(dims).fold(0, |acc, (&x, &d)| acc * d + x)
}

/// `I ⊗ … ⊗ g ⊗ … ⊗ I` with `g` on factor `j`.
pub fn embed_local(dims: &[usize], j: usize, g: &ComplexMatrix) -> ComplexMatrix {
    let before: usize = dims[..j].iter().product();
    let after: usize = dims[j + 1..].iter().product();
    ComplexMatrix::identity(before).kron(g).kron(&ComplexMatrix::identity(after))
}

/// Permutation exchanging equal-dimension factors `j` and `k`.
pub fn factor_swap(dims: &[usize], j: usize, k: usize) -> ComplexMatrix {
    let n: usize = dims.iter().product();
    let mut m = ComplexMatrix::zeros(n, n);
    for col in 0..n {
        let mut digits = mixed_radix_digits(col, dims);
        digits.swap(j, k);
        m[(mixed_radix_index(&digits, dims), col)] = C64::new(1.0, 0.0);
    }
    m
}

/// `diag e^{2πi ab/g}` over `|a⟩_j |b⟩_k`, with `g = gcd(d_j, d_k)`.
pub fn controlled_phase(dims: &[usize], j: usize, k: usize) -> ComplexMatrix {
    let n: usize = dims.iter().product();
    let g = gcd(dims[j], dims[k]);
    let diag: Vec<C64> = (0..n)
        .map(|i| {
            let digits = mixed_radix_digits(i, dims);
            omega_pow(g, (digits[j] * digits[k]) as i64)
        })
        .collect();
    ComplexMatrix::diagonal(&diag)
}

/// Candidate generators of the multipartite Clifford group on `dims`: embedded
/// local generators, swaps of equal factors, and gcd phase gates.
pub fn multipartite_clifford_generators(dims: &[usize]) -> Result<GroupSpec> {
    if dims.is_empty() || dims.iter().any(|&d| d < 2) {
        return Err(Error::InvalidInput(format!("local dimensions must be at least 2, got {dims:?}")));
    }
    if dims.len() == 1 {
        return clifford_generators(dims[0]);
    }
    let mut gens = Vec::new();
    for (j, &d) in dims.iter().enumerate() {
        for g in [fourier_matrix(d), quadratic_phase(d), displacement(d, [1, 0]), displacement(d, [0, 1])] {
            gens.push(embed_local(dims, j, &g));
        }
    }
    for j in 0..dims.len() {
        for k in j + 1..dims.len() {
            if dims[j] == dims[k] {
                gens.push(factor_swap(dims, j, k));
            }
            if gcd(dims[j], dims[k]) > 1 {
                gens.push(controlled_phase(dims, j, k));
            }
        }
    }
    GroupSpec::new(dims.to_vec(), &gens, format!("clifford:{}", dims_label(dims)), GroupKind::Clifford)
}

/// Displacement generators of the (multipartite) Weyl-Heisenberg group.
pub fn weyl_heisenberg_spec(dims: &[usize]) -> Result<GroupSpec> {
    if dims.is_empty() || dims.iter().any(|&d| d < 2) {
        return Err(Error::InvalidInput(format!("local dimensions must be at least 2, got {dims:?}")));
    }
    GroupSpec::new(
        dims.to_vec(),
        &local_step_generators(dims),
        format!("wh:{}", dims_label(dims)),
        GroupKind::WeylHeisenberg,
    )
}

fn dims_label(dims: &[usize]) -> String {
    dims.iter().map(usize::to_string).collect::<Vec<_>>().join("x")
}

/// Resolve `clifford:d`, `clifford:d1xd2x…` or `wh:d`.
pub fn named_spec(name: &str) -> Result<GroupSpec> {
    let (family, rest) = name
        .split_once(':')
        .ok_or_else(|| Error::InvalidInput(format!("unknown group {name:?}; expected clifford:<dims> or wh:<dims>")))?;
    let dims: Vec<usize> = rest
        .split('x')
        .map(|t| t.trim().parse::<usize>().map_err(|_| Error::InvalidInput(format!("bad dimension {t:?} in {name:?}"))))
        .collect::<Result<_>>()?;
    match family {
        "clifford" => multipartite_clifford_generators(&dims),
        "wh" => weyl_heisenberg_spec(&dims),
        _ => Err(Error::InvalidInput(format!("unknown group family {family:?}"))),
    }
}

/// Breadth-first closure of the generators in `PU(n)`.
///
/// Every product is canonicalized; the identity is always included. Fails
/// with [`Error::GroupTooLarge`] once more than `limit` elements are found.
/// The result is sorted by key.
pub fn closure_enumerate(spec: &GroupSpec, limit: usize) -> Result<Vec<ProjectiveUnitary>> {
    if limit == 0 {
        return Err(Error::InvalidInput("closure limit must be at least 1".into()));
    }
    let n = spec.total_dim();
    let mut gens = spec.generators.clone();
    gens.sort_by(|a, b| a.key.cmp(&b.key));
    gens.dedup_by(|a, b| a.same_element(b));

    let mut elements: Vec<ProjectiveUnitary> = Vec::new();
    let mut index: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
    let mut insert = |p: ProjectiveUnitary, elements: &mut Vec<ProjectiveUnitary>| -> Result<Option<usize>> {
        let bucket = index.entry(p.key.clone()).or_default();
        if bucket.iter().any(|&i| elements[i].matrix.frobenius_distance(&p.matrix) < SAME_ELEMENT_TOL) {
            return Ok(None);
        }
        if elements.len() >= limit {
            return Err(Error::GroupTooLarge { partial: elements.len(), limit });
        }
        bucket.push(elements.len());
        elements.push(p);
        Ok(Some(elements.len() - 1))
    };

    let mut frontier = Vec::new();
    for p in std::iter::once(canonicalize_unchecked(ComplexMatrix::identity(n))).chain(gens.iter().cloned()) {
        if let Some(i) = insert(p, &mut elements)? {
            frontier.push(i);
        }
    }
    const CHUNK: usize = 2048;
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for block in frontier.chunks(CHUNK) {
            let candidates = par::map_range(block.len() * gens.len(), |t| {
                let x = &elements[block[t / gens.len()]];
                canonicalize_unchecked(&x.matrix * &gens[t % gens.len()].matrix)
            });
            for c in candidates {
                if let Some(i) = insert(c, &mut elements)? {
                    next.push(i);
                }
            }
        }
        frontier = next;
    }
    elements.sort_by(|a, b| a.key.cmp(&b.key));
    Ok(elements)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{pauli_x, pauli_y, pauli_z};

    fn t_gate() -> ComplexMatrix {
        ComplexMatrix::diagonal(&[C64::new(1.0, 0.0), C64::from_polar(1.0, std::f64::consts::FRAC_PI_4)])
    }

    #[test]
    fn canonicalize_removes_global_phase() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(canonicalize(&i2.scale(C64::new(-1.0, 0.0))).unwrap(), canonicalize(&i2).unwrap());
        let x = pauli_x();
        let ix = canonicalize(&x.scale(C64::new(0.0, 1.0))).unwrap();
        assert_eq!(ix.key(), canonicalize(&x).unwrap().key());
        let first = ix.matrix().as_slice().iter().find(|z| z.norm() > PHASE_PIVOT_FLOOR).unwrap();
        assert!(first.im == 0.0 && first.re > 0.0);
    }

    #[test]
    fn canonicalize_rejects_non_unitary() {
        let m = ComplexMatrix::diagonal(&[C64::new(1.0, 0.0), C64::new(2.0, 0.0)]);
        assert!(matches!(canonicalize(&m), Err(Error::NotUnitary { .. })));
        assert!(matches!(canonicalize(&ComplexMatrix::zeros(2, 3)), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn canonicalize_is_idempotent() {
        let p = canonicalize(&pauli_y()).unwrap();
        let q = canonicalize(p.matrix()).unwrap();
        assert_eq!(p.key(), q.key());
        assert_eq!(p.matrix(), q.matrix());
    }

    #[test]
    fn fourier_is_hadamard_for_qubits() {
        let f = fourier_matrix(2);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let expected = ComplexMatrix::from_fn(2, 2, |i, j| C64::new(if i == 1 && j == 1 { -h } else { h }, 0.0));
        assert!(f.frobenius_distance(&expected) < 1e-15);
    }

    #[test]
    fn quadratic_phase_examples() {
        let p = quadratic_phase(2);
        assert!(p.frobenius_distance(&ComplexMatrix::diagonal(&[C64::new(1.0, 0.0), C64::new(0.0, -1.0)])) < 1e-15);
        for d in 2..=8 {
            let p = quadratic_phase(d);
            let t = crate::weyl::phase_operator(d);
            assert!((&(&p * &t) * &p.dagger()).frobenius_distance(&t) < 1e-14);
        }
    }

    #[test]
    fn normalizer_examples() {
        assert!(normalizer_check(&ComplexMatrix::identity(2), &[2]));
        assert!(!normalizer_check(&t_gate(), &[2]));
        for d in 2..=8 {
            assert!(normalizer_check(&fourier_matrix(d), &[d]), "F in d={d}");
            assert!(normalizer_check(&quadratic_phase(d), &[d]), "P in d={d}");
        }
        // wrong size
        assert!(!normalizer_check(&ComplexMatrix::identity(3), &[2]));
    }

    #[test]
    fn t_gate_conjugate_of_x_is_far_from_weyl_heisenberg() {
        let t = t_gate();
        let y = &(&t * &pauli_x()) * &t.dagger();
        let table = DisplacementTable::new(&[2]).unwrap();
        let best = table.coefficients(&y).iter().map(|c| c.norm()).fold(0.0, f64::max);
        // distance to the nearest multiple of a Pauli: ‖y‖² − 2|c|²
        let residual = (2.0 - 2.0 * best * best).sqrt();
        assert!(residual > 0.1);
        assert!(table.match_element(&y, NORMALIZER_TOL).is_none());
    }

    #[test]
    fn multipartite_generator_sets() {
        let two_two = multipartite_clifford_generators(&[2, 2]).unwrap();
        assert_eq!(two_two.generators.len(), 10);
        let swap = canonicalize(&crate::matrix::swap(2)).unwrap();
        let cz = canonicalize(&ComplexMatrix::diagonal(&[
            C64::new(1.0, 0.0),
            C64::new(1.0, 0.0),
            C64::new(1.0, 0.0),
            C64::new(-1.0, 0.0),
        ]))
        .unwrap();
        assert!(two_two.generators.iter().any(|g| g.same_element(&swap)));
        assert!(two_two.generators.iter().any(|g| g.same_element(&cz)));
        for g in &two_two.generators {
            assert!(normalizer_check(g.matrix(), &[2, 2]));
        }
        let two_three = multipartite_clifford_generators(&[2, 3]).unwrap();
        assert_eq!(two_three.generators.len(), 8);
        for g in &two_three.generators {
            assert!(normalizer_check(g.matrix(), &[2, 3]));
        }
        let four_six = multipartite_clifford_generators(&[4, 6]).unwrap();
        for g in &four_six.generators {
            assert!(normalizer_check(g.matrix(), &[4, 6]));
        }
    }

    #[test]
    fn named_specs_resolve() {
        assert_eq!(named_spec("clifford:3").unwrap().label, "clifford:3");
        assert_eq!(named_spec("clifford:2x3").unwrap().dims, vec![2, 3]);
        assert_eq!(named_spec("wh:4").unwrap().kind, GroupKind::WeylHeisenberg);
        assert!(named_spec("clifford:1").is_err());
        assert!(named_spec("sp:4").is_err());
        assert!(named_spec("clifford").is_err());
        assert!(named_spec("clifford:2xa").is_err());
    }

    #[test]
    fn small_closures() {
        let trivial = GroupSpec::new(vec![2], &[ComplexMatrix::identity(2)], "trivial", GroupKind::Custom).unwrap();
        assert_eq!(closure_enumerate(&trivial, 10).unwrap().len(), 1);
        let paulis = closure_enumerate(&weyl_heisenberg_spec(&[2]).unwrap(), 100).unwrap();
        assert_eq!(paulis.len(), 4);
        for p in [ComplexMatrix::identity(2), pauli_x(), pauli_y(), pauli_z()] {
            let c = canonicalize(&p).unwrap();
            assert!(paulis.iter().any(|q| q.same_element(&c)));
        }
        assert_eq!(closure_enumerate(&clifford_generators(2).unwrap(), 1000).unwrap().len(), 24);
    }

    #[test]
    fn closure_limit_is_enforced() {
        let err = closure_enumerate(&clifford_generators(2).unwrap(), 10).unwrap_err();
        assert!(matches!(err, Error::GroupTooLarge { partial: 10, limit: 10 }));
        // the T gate generates an infinite group together with H
        let spec = GroupSpec::new(vec![2], &[fourier_matrix(2), t_gate()], "h+t", GroupKind::Custom).unwrap();
        assert!(closure_enumerate(&spec, 5000).unwrap_err().is_resource_limit());
    }

    #[test]
    fn json_round_trip() {
        let spec = clifford_generators(2).unwrap();
        let back = GroupSpec::from_json(&spec.to_json()).unwrap();
        assert_eq!(back.dims, vec![2]);
        assert_eq!(back.label, "clifford:2");
        assert_eq!(back.generators.len(), 4);
        for (a, b) in spec.generators.iter().zip(&back.generators) {
            assert!(a.same_element(b));
        }
        let flat = r#"{"dims":[2],"label":"x","generators":[[[0,0],[1,0],[1,0],[0,0]]]}"#;
        let x = GroupSpec::from_json(flat).unwrap();
        assert!(x.generators[0].same_element(&canonicalize(&pauli_x()).unwrap()));
        assert!(GroupSpec::from_json(r#"{"dims":[2],"generators":[[[1,0],[0,0],[0,0],[2,0]]]}"#).is_err());
        assert!(GroupSpec::from_json(r#"{"dims":[3],"generators":[[[0,0],[1,0],[1,0],[0,0]]]}"#).is_err());
    }
}
