//! Unitary 2-design tests for finite projective groups.
//!
//! Two routes reach a verdict:
//!
//! - Enumerated groups: the frame potential `(1/|G|) Σ |Tr g|⁴` equals
//!   the squared character norm of `g ↦ g ⊗ ḡ`, which is 2 exactly for
//!   2-designs and larger otherwise.
//! - Generators only: the commutant of `{g ⊗ ḡ}` has dimension `Σ mᵢ²` over
//!   the irreducible components, so it is 2 exactly for 2-designs.
//!
//! For Clifford groups a third, generator-independent bound applies:
//! conjugation preserves projective orders of displacement operators, so the
//! span of each order class is an invariant subspace and the commutant has at
//! least as many dimensions as there are classes.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::clifford::{
    closure_enumerate, DisplacementTable, GroupKind, GroupSpec, NormalizerChecker, ProjectiveUnitary,
};
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64, TOL_RANK};
use crate::par;
use crate::weyl::multi_projective_order;

/// `|FP − 2|` at or below this is a 2-design.
pub const TWO_DESIGN_TOL: f64 = 1e-6;
/// Largest total dimension accepted by [`commutant_dimension`].
pub const COMMUTANT_MAX_DIM: usize = 12;
/// Residual allowed when projecting a conjugated displacement onto its class span.
pub const CLASS_SPAN_TOL: f64 = 1e-8;

fn require_nonempty(group: &[ProjectiveUnitary]) -> Result<()> {
    if group.is_empty() {
        return Err(Error::InvalidInput("frame potential of an empty group".into()));
    }
    Ok(())
}

/// `(1/|G|) Σ_g |Tr g|⁴`.
pub fn frame_potential_single_sum(group: &[ProjectiveUnitary]) -> Result<f64> {
    require_nonempty(group)?;
    let terms = par::map(group, |g| {
        let t = g.matrix().trace().expect("square");
        t.norm_sqr().powi(2)
    });
    Ok(par::compensated_sum(terms) / group.len() as f64)
}

/// `(1/|G|²) Σ_{g,h} |Tr g† h|⁴`.
pub fn frame_potential_double_sum(group: &[ProjectiveUnitary]) -> Result<f64> {
    require_nonempty(group)?;
    let rows = par::map(group, |g| {
        par::compensated_sum(group.iter().map(|h| g.matrix().hs_inner(h.matrix()).norm_sqr().powi(2)))
    });
    let n = group.len() as f64;
    Ok(par::compensated_sum(rows) / (n * n))
}

/// `(1/n) Σ conj(a_i) b_i` over a finite group in a fixed element order.
pub fn character_inner_product(a: &[C64], b: &[C64]) -> Result<C64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch(format!("characters of lengths {} and {}", a.len(), b.len())));
    }
    if a.is_empty() {
        return Err(Error::InvalidInput("characters over an empty group".into()));
    }
    let re = par::compensated_sum(a.iter().zip(b).map(|(x, y)| (x.conj() * y).re));
    let im = par::compensated_sum(a.iter().zip(b).map(|(x, y)| (x.conj() * y).im));
    Ok(C64::new(re, im) / a.len() as f64)
}

/// Character of `g ↦ g ⊗ ḡ`, i.e. `|Tr g|²`, over an enumerated group.
pub fn conjugate_square_character(group: &[ProjectiveUnitary]) -> Vec<C64> {
    par::map(group, |g| C64::new(g.matrix().trace().expect("square").norm_sqr(), 0.0))
}

/// `g ⊗ ḡ`.
pub fn conjugate_square(g: &ComplexMatrix) -> ComplexMatrix {
    g.kron(&g.conj())
}

/// The stacked maps `X ↦ (g⊗ḡ)X − X(g⊗ḡ)` in row-major vec form, one block
/// of rows per generator.
pub fn stacked_commutator_map(generators: &[ComplexMatrix]) -> ComplexMatrix {
    let n = generators.first().map_or(0, ComplexMatrix::rows);
    let big = n * n;
    let id = ComplexMatrix::identity(big);
    let mut data = Vec::with_capacity(generators.len() * big.pow(4));
    for g in generators {
        let m = conjugate_square(g);
        let block = &m.kron(&id) - &id.kron(&m.transpose());
        data.extend_from_slice(block.as_slice());
    }
    ComplexMatrix::from_vec(generators.len() * big * big, big * big, data).expect("consistent shape")
}

/// Gram matrix `A†A` of the stacked commutator map, assembled directly as
/// `Σ_g (2I − W_g − W_g†)` with `W_g = M_g ⊗ M̄_g`, `M_g = g ⊗ ḡ`. Its kernel
/// is the kernel of `A`.
pub fn commutator_gram(generators: &[ComplexMatrix]) -> ComplexMatrix {
    let n = generators.first().map_or(0, ComplexMatrix::rows);
    let size = n.pow(4);
    let ws = par::map(generators, |g| {
        let m = conjugate_square(g);
        m.kron(&m.conj())
    });
    let mut q = ComplexMatrix::zeros(size, size);
    let two_k = 2.0 * generators.len() as f64;
    for i in 0..size {
        q[(i, i)] = C64::new(two_k, 0.0);
    }
    for w in &ws {
        for i in 0..size {
            for j in 0..size {
                let v = w[(i, j)] + w[(j, i)].conj();
                q[(i, j)] -= v;
            }
        }
    }
    q
}

/// Dimension of the commutant of `{g ⊗ ḡ}` over the generators of `spec`.
pub fn commutant_dimension(spec: &GroupSpec, tol_rank: f64) -> Result<usize> {
    if spec.generators.is_empty() {
        return Err(Error::InvalidInput("commutant of an empty generator list".into()));
    }
    let n = spec.total_dim();
    if n > COMMUTANT_MAX_DIM {
        return Err(Error::ResourceLimit(format!(
            "commutant needs {} unknowns for total dimension {n}; the cap is dimension {COMMUTANT_MAX_DIM}",
            n.pow(4)
        )));
    }
    let gens: Vec<ComplexMatrix> = spec.generators.iter().map(|g| g.matrix().clone()).collect();
    Ok(commutator_gram(&gens).nullspace_dimension(tol_rank))
}

/// Displacement index vectors grouped by projective order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderClassPartition {
    pub dims: Vec<usize>,
    pub classes: BTreeMap<usize, Vec<Vec<[usize; 2]>>>,
}

impl OrderClassPartition {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// Class sizes keyed by order.
    pub fn counts(&self) -> BTreeMap<usize, usize> {
        self.classes.iter().map(|(&r, v)| (r, v.len())).collect()
    }

    pub fn order_of(&self, ps: &[[usize; 2]]) -> usize {
        multi_projective_order(&self.dims, ps)
    }
}

pub fn order_class_partition(dims: &[usize]) -> Result<OrderClassPartition> {
    if dims.is_empty() || dims.iter().any(|&d| d < 2) {
        return Err(Error::InvalidInput(format!("local dimensions must be at least 2, got {dims:?}")));
    }
    let mut classes: BTreeMap<usize, Vec<Vec<[usize; 2]>>> = BTreeMap::new();
    for ps in crate::weyl::displacement_vectors(dims) {
        classes.entry(multi_projective_order(dims, &ps)).or_default().push(ps);
    }
    Ok(OrderClassPartition { dims: dims.to_vec(), classes })
}

/// Largest residual of `C D_p C†` outside the span of `p`'s order class, over
/// all generators `C` and displacements `D_p`.
pub fn class_span_residual(dims: &[usize], generators: &[ComplexMatrix]) -> Result<f64> {
    let table = DisplacementTable::new(dims)?;
    let n = table.total_dim();
    let orders: Vec<usize> = table.vectors.iter().map(|ps| multi_projective_order(dims, ps)).collect();
    let mut worst = 0.0f64;
    for c in generators {
        if c.rows() != n || c.cols() != n {
            return Err(Error::DimensionMismatch(format!("generator of size {} for dims {dims:?}", c.rows())));
        }
        let cd = c.dagger();
        let residuals = par::map_range(table.matrices.len(), |i| {
            let y = &(c * &table.matrices[i]) * &cd;
            let coeffs = table.coefficients(&y);
            let outside: f64 =
                coeffs.iter().zip(&orders).filter(|(_, &r)| r != orders[i]).map(|(z, _)| z.norm_sqr()).sum();
            (outside * n as f64).sqrt()
        });
        worst = residuals.into_iter().fold(worst, f64::max);
    }
    Ok(worst)
}

/// Whether every order-class span is invariant under conjugation by each
/// generator.
pub fn class_spans_invariant(dims: &[usize], generators: &[ComplexMatrix]) -> Result<bool> {
    Ok(class_span_residual(dims, generators)? <= CLASS_SPAN_TOL)
}

/// Certifies `commutant_dimension ≥ class count` for `spec`: every generator
/// normalizes the Weyl-Heisenberg group on `dims` and leaves every order-class
/// span invariant.
pub fn order_class_invariance_check(dims: &[usize], spec: &GroupSpec) -> bool {
    let Ok(checker) = NormalizerChecker::new(dims) else {
        return false;
    };
    let gens: Vec<ComplexMatrix> = spec.generators.iter().map(|g| g.matrix().clone()).collect();
    gens.iter().all(|g| checker.check(g)) && class_spans_invariant(dims, &gens).unwrap_or(false)
}

/// `|Tr(u ⊗ ū) − Σ_{r,s} ⟨E_rs, u E_rs u†⟩|` with the right side evaluated on
/// the matrix-unit basis.
pub fn adjoint_trace_identity_check(u: &ComplexMatrix) -> Result<f64> {
    if !u.is_square() {
        return Err(Error::NotSquare { rows: u.rows(), cols: u.cols() });
    }
    let d = u.rows();
    let lhs = conjugate_square(u).trace()?;
    let ud = u.dagger();
    let mut rhs = C64::new(0.0, 0.0);
    for r in 0..d {
        for s in 0..d {
            let mut e = ComplexMatrix::zeros(d, d);
            e[(r, s)] = C64::new(1.0, 0.0);
            let image = &(u * &e) * &ud;
            rhs += e.hs_inner(&image);
        }
    }
    Ok((lhs - rhs).norm())
}

/// Multiplicities of the four characters of `Z₄` in the tensor square and the
/// conjugate tensor square of `g ↦ diag(1, i^g)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CyclicSquareDemo {
    /// `k = 0..3` multiplicities of `χ_k(g) = i^{kg}` in `π ⊗ π`.
    pub tensor_square: [u32; 4],
    /// Same for `π ⊗ π̄`.
    pub conjugate_square: [u32; 4],
    pub components_differ: bool,
    pub note: String,
}

pub const CYCLIC_DEMO_NOTE: &str = "computed multiplicities: pi(x)pi carries chi_0 once, chi_1 twice, chi_2 once; \
pi(x)conj(pi) carries chi_0 twice, chi_1 once, chi_3 once. The sign character chi_2 occurs only in pi(x)pi, \
and g -> exp(i*pi*g/4) is not a character of Z4 (it sends g = 4 to -1); the two squares do have \
non-corresponding irreducible components.";

pub fn cyclic_square_demo() -> Result<CyclicSquareDemo> {
    let rep: Vec<ComplexMatrix> =
        (0..4).map(|g| ComplexMatrix::diagonal(&[C64::new(1.0, 0.0), C64::new(0.0, 1.0).powu(g)])).collect();
    let chi_tensor: Vec<C64> = rep.iter().map(|p| p.kron(p).trace()).collect::<Result<_>>()?;
    let chi_conj: Vec<C64> = rep.iter().map(|p| conjugate_square(p).trace()).collect::<Result<_>>()?;
    let multiplicities = |chi: &[C64]| -> Result<[u32; 4]> {
        let mut out = [0u32; 4];
        for (k, slot) in out.iter_mut().enumerate() {
            let irrep: Vec<C64> = (0..4).map(|g| C64::new(0.0, 1.0).powu((k * g) as u32)).collect();
            let m = character_inner_product(&irrep, chi)?;
            let rounded = m.re.round();
            if (m - rounded).norm() > 1e-9 || rounded < 0.0 {
                return Err(Error::Invariant(format!("non-integral multiplicity {m}")));
            }
            *slot = rounded as u32;
        }
        Ok(out)
    };
    let tensor_square = multiplicities(&chi_tensor)?;
    let conjugate_square = multiplicities(&chi_conj)?;
    Ok(CyclicSquareDemo {
        tensor_square,
        conjugate_square,
        components_differ: tensor_square != conjugate_square,
        note: CYCLIC_DEMO_NOTE.to_string(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    TwoDesign,
    NotTwoDesign,
    SubgroupInconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::TwoDesign => "two-design",
            Verdict::NotTwoDesign => "not-two-design",
            Verdict::SubgroupInconclusive => "subgroup-inconclusive",
        }
    }
}

/// Outcome of [`is_two_design`]. `None` fields were not computed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DesignReport {
    pub label: String,
    pub group_size: Option<usize>,
    pub frame_potential: Option<f64>,
    pub commutant_dimension: Option<usize>,
    pub order_class_count: usize,
    pub order_classes: BTreeMap<usize, usize>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug)]
pub struct AnalysisOptions {
    pub closure_limit: usize,
    pub tol_rank: f64,
    /// Enumerate the closure and use the frame potential.
    pub enumerate: bool,
    /// Compute the commutant dimension from generators.
    pub commutant: bool,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            closure_limit: crate::clifford::DEFAULT_CLOSURE_LIMIT,
            tol_rank: TOL_RANK,
            enumerate: true,
            commutant: true,
        }
    }
}

/// Decide whether the group described by `spec` is a unitary 2-design.
///
/// A Clifford spec with at least three order classes is rejected without
/// reference to its generators. Otherwise the frame potential of the
/// enumerated closure decides, falling back to the commutant dimension when
/// the closure is too large. For Clifford specs a frame potential above 2 only
/// shows that the generated subgroup fails, which is reported as
/// inconclusive.
pub fn is_two_design(spec: &GroupSpec, opts: &AnalysisOptions) -> Result<DesignReport> {
    let partition = order_class_partition(&spec.dims).ok();
    let (order_class_count, order_classes) =
        partition.as_ref().map_or((0, BTreeMap::new()), |p| (p.class_count(), p.counts()));
    // normalizers preserve projective orders, so for Clifford specs the
    // generator check alone certifies the bound
    let bound_applies = partition.is_some()
        && if spec.kind == GroupKind::Clifford {
            NormalizerChecker::new(&spec.dims).is_ok_and(|c| spec.generators.iter().all(|g| c.check(g.matrix())))
        } else {
            order_class_invariance_check(&spec.dims, spec)
        };

    let group = if opts.enumerate {
        match closure_enumerate(spec, opts.closure_limit) {
            Ok(g) => Some(g),
            Err(e) if e.is_resource_limit() => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    let frame_potential = group.as_deref().map(frame_potential_single_sum).transpose()?;
    let commutant = if opts.commutant && spec.total_dim() <= COMMUTANT_MAX_DIM && !spec.generators.is_empty() {
        Some(commutant_dimension(spec, opts.tol_rank)?)
    } else {
        None
    };

    let fails = |by_subgroup_only: bool| {
        if by_subgroup_only {
            Verdict::SubgroupInconclusive
        } else {
            Verdict::NotTwoDesign
        }
    };
    let subgroup_only = spec.kind == GroupKind::Clifford;
    let verdict = if bound_applies && order_class_count >= 3 {
        Verdict::NotTwoDesign
    } else if let Some(fp) = frame_potential {
        if (fp - 2.0).abs() <= TWO_DESIGN_TOL {
            Verdict::TwoDesign
        } else {
            fails(subgroup_only)
        }
    } else if let Some(c) = commutant {
        if c == 2 {
            Verdict::TwoDesign
        } else {
            fails(subgroup_only)
        }
    } else {
        let closure = if opts.enumerate {
            format!("closure exceeds {} elements", opts.closure_limit)
        } else {
            "enumeration disabled".to_string()
        };
        let commutant = if !opts.commutant {
            "commutant disabled".to_string()
        } else {
            format!("total dimension {} exceeds the commutant cap {COMMUTANT_MAX_DIM}", spec.total_dim())
        };
        return Err(Error::ResourceLimit(format!("{}: {closure}; {commutant}", spec.label)));
    };

    let report = DesignReport {
        label: spec.label.clone(),
        group_size: group.as_ref().map(Vec::len),
        frame_potential,
        commutant_dimension: commutant,
        order_class_count,
        order_classes,
        verdict,
    };
    report.validate(bound_applies)?;
    Ok(report)
}

impl DesignReport {
    fn validate(&self, bound_applies: bool) -> Result<()> {
        if let Some(fp) = self.frame_potential {
            if fp < 2.0 - TWO_DESIGN_TOL {
                return Err(Error::Invariant(format!("{}: frame potential {fp} below 2", self.label)));
            }
            if let Some(c) = self.commutant_dimension {
                if (fp - c as f64).abs() > TWO_DESIGN_TOL {
                    return Err(Error::Invariant(format!(
                        "{}: frame potential {fp} disagrees with commutant dimension {c}",
                        self.label
                    )));
                }
            }
        }
        if let (true, Some(c)) = (bound_applies, self.commutant_dimension) {
            if c < self.order_class_count {
                return Err(Error::Invariant(format!(
                    "{}: commutant dimension {c} below order class count {}",
                    self.label, self.order_class_count
                )));
            }
        }
        if self.verdict == Verdict::TwoDesign {
            if let Some(fp) = self.frame_potential {
                if (fp - 2.0).abs() > TWO_DESIGN_TOL {
                    return Err(Error::Invariant(format!("{}: two-design verdict with FP {fp}", self.label)));
                }
            }
        }
        Ok(())
    }
}
