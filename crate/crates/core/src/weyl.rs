//! Weyl-Heisenberg groups: exact index arithmetic and matrix realizations.
//!
//! An element `τ^k D_p` of `WH_d` is stored as a [`WHIndex`] `(k, p)` with
//! `k ∈ Z_f(d)` and `p ∈ Z_d²`, where `τ = −e^{iπ/d}`, `f(d) = d` for odd `d`
//! and `2d` for even `d`, and `D_p = τ^{p₁p₂} S^{p₁} T^{p₂}`. Products are
//! computed on indices; matrices appear only through [`WHIndex::matrix`].

use std::collections::{HashSet, VecDeque};
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64};

/// Order of the phase `τ`: `d` for odd `d`, `2d` for even `d`.
pub fn f_of(d: usize) -> Result<usize> {
    match d {
        0 => Err(Error::InvalidInput("dimension must be at least 1".into())),
        d if d % 2 == 1 => Ok(d),
        d => Ok(2 * d),
    }
}

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::InvalidInput(format!("Weyl-Heisenberg dimension must be at least 2, got {d}")));
    }
    Ok(())
}

/// `τ^m` for `τ = −e^{iπ/d} = e^{iπ(d+1)/d}`, reduced exactly before
/// evaluating the exponential.
pub fn tau_pow(d: usize, m: i64) -> C64 {
    let two_d = 2 * d as i64;
    let e = (m.rem_euclid(two_d) * (d as i64 + 1)).rem_euclid(two_d);
    C64::from_polar(1.0, PI * e as f64 / d as f64)
}

/// `ω^m` for `ω = e^{2πi/d}`.
pub fn omega_pow(d: usize, m: i64) -> C64 {
    let e = m.rem_euclid(d as i64);
    C64::from_polar(1.0, 2.0 * PI * e as f64 / d as f64)
}

/// Clock operator `T = diag(ω⁰, …, ω^{d−1})`.
pub fn phase_operator(d: usize) -> ComplexMatrix {
    let diag: Vec<C64> = (0..d).map(|r| omega_pow(d, r as i64)).collect();
    ComplexMatrix::diagonal(&diag)
}

/// Cyclic shift `S e_r = e_{r+1 mod d}`.
pub fn shift_operator(d: usize) -> ComplexMatrix {
    let mut s = ComplexMatrix::zeros(d, d);
    for r in 0..d {
        s[((r + 1) % d, r)] = C64::new(1.0, 0.0);
    }
    s
}

/// `D_p = τ^{p₁p₂} S^{p₁} T^{p₂}` evaluated literally on the given integers.
///
/// For even `d` the phase depends on the representative of `p` modulo `d`
/// (`D_{p + d e₁} = (−1)^{p₂} D_p`); pass reduced indices for the group
/// elements proper.
pub fn displacement(d: usize, p: [usize; 2]) -> ComplexMatrix {
    let [p1, p2] = p;
    let mut m = ComplexMatrix::zeros(d, d);
    // S^{p1} T^{p2} e_r = ω^{p2 r} e_{r+p1}
    for r in 0..d {
        let exp = (p1 as i64) * (p2 as i64) + 2 * (p2 as i64) * (r as i64);
        m[((r + p1) % d, r)] = tau_pow(d, exp);
    }
    m
}

/// `Ω(p, q) = (p₂q₁ − p₁q₂) mod f(d)`.
pub fn symplectic_form(d: usize, p: [usize; 2], q: [usize; 2]) -> usize {
    let f = f_of(d).expect("d >= 1") as i64;
    let v = p[1] as i64 * q[0] as i64 - p[0] as i64 * q[1] as i64;
    v.rem_euclid(f) as usize
}

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// Index form `(k, p)` of the Weyl-Heisenberg element `τ^k D_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WHIndex {
    pub d: usize,
    pub k: usize,
    pub p: [usize; 2],
}

impl WHIndex {
    pub fn new(d: usize, k: usize, p: [usize; 2]) -> Result<Self> {
        check_dim(d)?;
        let f = f_of(d)?;
        if k >= f || p[0] >= d || p[1] >= d {
            return Err(Error::InvalidInput(format!("index (k={k}, p={p:?}) out of range for d={d}")));
        }
        Ok(Self { d, k, p })
    }

    pub fn identity(d: usize) -> Self {
        Self { d, k: 0, p: [0, 0] }
    }

    /// The bare displacement `D_p` (p is reduced mod d).
    pub fn displacement(d: usize, p: [usize; 2]) -> Self {
        Self { d, k: 0, p: [p[0] % d, p[1] % d] }
    }

    pub fn is_identity(&self) -> bool {
        self.k == 0 && self.p == [0, 0]
    }

    pub fn matrix(&self) -> ComplexMatrix {
        displacement(self.d, self.p).scale(tau_pow(self.d, self.k as i64))
    }

    /// Exact product `self · other`.
    pub fn compose(&self, other: &WHIndex) -> Result<WHIndex> {
        if self.d != other.d {
            return Err(Error::DimensionMismatch(format!(
                "cannot compose Weyl-Heisenberg indices of dimensions {} and {}",
                self.d, other.d
            )));
        }
        Ok(self.compose_unchecked(other))
    }

    fn compose_unchecked(&self, other: &WHIndex) -> WHIndex {
        let d = self.d;
        let f = f_of(d).expect("d >= 2");
        let (u1, u2) = (self.p[0] + other.p[0], self.p[1] + other.p[1]);
        let (s1, s2) = (u1 % d, u2 % d);
        let (a, b) = (u1 / d, u2 / d);
        // D_p D_q = τ^Ω D_{p+q} with p+q unreduced; reducing it mod d
        // costs τ^{d(a s₂ + b s₁)}, a sign for even d and trivial for odd d.
        let wrap = d * (a * s2 + b * s1);
        let k = (self.k + other.k + symplectic_form(d, self.p, other.p) + wrap) % f;
        WHIndex { d, k, p: [s1, s2] }
    }

    pub fn inverse(&self) -> WHIndex {
        let d = self.d;
        let f = f_of(d).expect("d >= 2");
        let q = [(d - self.p[0]) % d, (d - self.p[1]) % d];
        let partial = self.compose_unchecked(&WHIndex { d, k: 0, p: q });
        WHIndex { d, k: (f - partial.k) % f, p: q }
    }

    /// Smallest `r ≥ 1` with `D_{r p} ∝ I`; equals `d / gcd(p₁, p₂, d)`.
    pub fn projective_order(&self) -> usize {
        projective_order_of(self.d, self.p)
    }

    /// Smallest `r ≥ 1` with `(τ^k D_p)^r = I`, by repeated exact composition.
    pub fn unitary_order(&self) -> usize {
        let bound = self.d * self.d * f_of(self.d).expect("d >= 2");
        let mut acc = *self;
        for r in 1..=bound {
            if acc.is_identity() {
                return r;
            }
            acc = acc.compose_unchecked(self);
        }
        unreachable!("Weyl-Heisenberg element order exceeds group size")
    }
}

pub fn compose_indices(a: &WHIndex, b: &WHIndex) -> Result<WHIndex> {
    a.compose(b)
}

pub fn projective_order_of(d: usize, p: [usize; 2]) -> usize {
    d / gcd(gcd(p[0] % d, p[1] % d), d)
}

/// All `d² f(d)` elements of `WH_d`, ordered by `(p₁, p₂, k)`.
pub fn enumerate_wh(d: usize) -> Result<Vec<WHIndex>> {
    check_dim(d)?;
    let f = f_of(d)?;
    let mut out = Vec::with_capacity(d * d * f);
    for p1 in 0..d {
        for p2 in 0..d {
            for k in 0..f {
                out.push(WHIndex { d, k, p: [p1, p2] });
            }
        }
    }
    Ok(out)
}

/// Closure of `generators` under exact composition, sorted.
pub fn index_closure(generators: &[WHIndex]) -> Result<Vec<WHIndex>> {
    let Some(first) = generators.first() else {
        return Err(Error::InvalidInput("empty generator list".into()));
    };
    let d = first.d;
    if generators.iter().any(|g| g.d != d) {
        return Err(Error::DimensionMismatch("generators of mixed dimension".into()));
    }
    let mut seen: HashSet<WHIndex> = HashSet::new();
    let mut queue = VecDeque::new();
    let id = WHIndex::identity(d);
    seen.insert(id);
    queue.push_back(id);
    while let Some(x) = queue.pop_front() {
        for g in generators {
            let y = x.compose_unchecked(g);
            if seen.insert(y) {
                queue.push_back(y);
            }
        }
    }
    let mut all: Vec<WHIndex> = seen.into_iter().collect();
    all.sort();
    Ok(all)
}

/// Tensor product `⊗ⱼ τⱼ^{kⱼ} D_{pⱼ}` over local dimensions `dims`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MultiWHIndex {
    pub dims: Vec<usize>,
    pub locals: Vec<WHIndex>,
}

impl MultiWHIndex {
    pub fn new(dims: Vec<usize>, locals: Vec<WHIndex>) -> Result<Self> {
        if dims.len() != locals.len() {
            return Err(Error::DimensionMismatch(format!("{} local indices for {} factors", locals.len(), dims.len())));
        }
        for (j, (&d, l)) in dims.iter().zip(&locals).enumerate() {
            if l.d != d {
                return Err(Error::DimensionMismatch(format!("factor {j} has dimension {d} but index for {}", l.d)));
            }
        }
        Ok(Self { dims, locals })
    }

    /// Multi-displacement with zero phases from one `p` per factor.
    pub fn from_vectors(dims: &[usize], ps: &[[usize; 2]]) -> Result<Self> {
        if dims.len() != ps.len() {
            return Err(Error::DimensionMismatch("one displacement vector per factor required".into()));
        }
        for &d in dims {
            check_dim(d)?;
        }
        let locals = dims.iter().zip(ps).map(|(&d, &p)| WHIndex::displacement(d, p)).collect();
        Ok(Self { dims: dims.to_vec(), locals })
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn matrix(&self) -> ComplexMatrix {
        multi_displacement(self)
    }

    /// `lcm` of the local projective orders.
    pub fn projective_order(&self) -> usize {
        self.locals.iter().map(WHIndex::projective_order).fold(1, lcm)
    }
}

pub fn multi_displacement(m: &MultiWHIndex) -> ComplexMatrix {
    m.locals.iter().fold(ComplexMatrix::identity(1), |acc, l| acc.kron(&l.matrix()))
}

/// Every displacement index vector for `dims`, in lexicographic order with the
/// first factor most significant.
pub fn displacement_vectors(dims: &[usize]) -> Vec<Vec<[usize; 2]>> {
    let mut out: Vec<Vec<[usize; 2]>> = vec![Vec::new()];
    for &d in dims {
        let mut next = Vec::with_capacity(out.len() * d * d);
        for prefix in &out {
            for p1 in 0..d {
                for p2 in 0..d {
                    let mut v = prefix.clone();
                    v.push([p1, p2]);
                    next.push(v);
                }
            }
        }
        out = next;
    }
    out
}

/// `lcm` of local projective orders of a displacement index vector.
pub fn multi_projective_order(dims: &[usize], ps: &[[usize; 2]]) -> usize {
    dims.iter().zip(ps).map(|(&d, &p)| projective_order_of(d, p)).fold(1, lcm)
}

/// Matrix of the zero-phase multi-displacement `⊗ⱼ D_{pⱼ}`.
pub fn multi_displacement_matrix(dims: &[usize], ps: &[[usize; 2]]) -> ComplexMatrix {
    dims.iter().zip(ps).fold(ComplexMatrix::identity(1), |acc, (&d, &p)| acc.kron(&displacement(d, p)))
}

/// The `2n` single-step displacements `D_(1,0)` and `D_(0,1)` on each factor,
/// embedded with identities elsewhere. They generate `WH_dims` up to phases.
pub fn local_step_generators(dims: &[usize]) -> Vec<ComplexMatrix> {
    let mut out = Vec::with_capacity(2 * dims.len());
    for j in 0..dims.len() {
        for step in [[1, 0], [0, 1]] {
            let ps: Vec<[usize; 2]> = (0..dims.len()).map(|i| if i == j { step } else { [0, 0] }).collect();
            out.push(multi_displacement_matrix(dims, &ps));
        }
    }
    out
}
