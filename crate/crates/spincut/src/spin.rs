//! Spin structures on meshes, encoded as quadratic forms on `H_1(M, Z_2)`.
//!
//! A spin structure is given by its quadratic-form values on a homology
//! basis; the form refines the mod-2 intersection form. The structure is
//! nontrivial along a simple closed curve exactly when the form vanishes on
//! the curve's class.
//!
//! A spin-cut is a system of `g` pairwise disjoint simple cycles with
//! independent classes on which the form vanishes; one exists iff the Arf
//! invariant is `+1`. The search here is a bounded heuristic, but its output
//! carries a certificate ([`SpinCut::verify`]) that re-checks every defining
//! condition without trusting the search. Absence of a result does not prove
//! nonexistence; the reason code distinguishes `ArfMinusOne`, which does,
//! from `BudgetExhausted`, which does not.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::gf2::{
    arf_fast, lagrangian_zero_basis, BitMatrix, GfVector, QuadraticForm, SymplecticSpace,
};
use crate::surface::{shortest_cycle_with_weights, Cycle, HomologyBasis, Mesh, SpinSpec};

#[derive(Debug, Clone, PartialEq)]
pub enum SpinError {
    /// `enumerate_spin_structures` is capped at `2g <= 16`.
    GenusGuard { dim: usize },
    ValueCount { expected: usize, got: usize },
    /// The given cycles' classes do not form a basis of `H_1(M, Z_2)`.
    CyclesNotBasis,
    /// Triviality along a curve is defined via embedded representatives.
    NonSimpleCycle,
    InvalidParameters(String),
}

impl fmt::Display for SpinError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpinError::GenusGuard { dim } => {
                write!(f, "2g = {dim} exceeds the enumeration guard 16")
            }
            SpinError::ValueCount { expected, got } => {
                write!(f, "expected {expected} q-values, got {got}")
            }
            SpinError::CyclesNotBasis => write!(f, "cycle classes do not form a basis"),
            SpinError::NonSimpleCycle => write!(f, "cycle must be simple"),
            SpinError::InvalidParameters(msg) => write!(f, "invalid parameters: {msg}"),
        }
    }
}

impl std::error::Error for SpinError {}

/// Why a spin-cut search returned nothing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AbsenceReason {
    /// No spin-cut exists at all.
    ArfMinusOne,
    /// The bounded search gave up; existence is still guaranteed when the
    /// Arf invariant is `+1`.
    BudgetExhausted,
}

impl fmt::Display for AbsenceReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AbsenceReason::ArfMinusOne => write!(f, "arf_minus_one"),
            AbsenceReason::BudgetExhausted => write!(f, "budget_exhausted"),
        }
    }
}

/// Search parameters; results are deterministic for a fixed budget and seed.
#[derive(Debug, Clone)]
pub struct SearchBudget {
    /// Candidate cycles generated per target class (penalty rerouting).
    pub k: usize,
    /// Alternative zero-Lagrangian systems tried when maximizing the
    /// cut-diameter.
    pub lagrangian_tries: usize,
    /// Cap on candidate combinations examined per Lagrangian.
    pub max_combinations: usize,
    pub seed: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { k: 4, lagrangian_tries: 8, max_combinations: 1024, seed: 0 }
    }
}

/// A spin structure, held as a quadratic form over a homology basis.
#[derive(Clone)]
pub struct SpinStructure {
    basis: Arc<HomologyBasis>,
    form: QuadraticForm,
}

impl SpinStructure {
    /// Builds a structure from `q`-values on the canonical basis cycles.
    pub fn from_basis_values(
        basis: Arc<HomologyBasis>,
        values: &[u8],
    ) -> Result<Self, SpinError> {
        let dim = basis.cycles().len();
        if values.len() != dim {
            return Err(SpinError::ValueCount { expected: dim, got: values.len() });
        }
        let space = SymplecticSpace::new(basis.intersection_matrix().clone())
            .expect("intersection matrix of a homology basis is symplectic");
        Ok(SpinStructure { basis, form: QuadraticForm::from_bits(space, values) })
    }

    /// Builds a structure from `q`-values prescribed on an arbitrary set of
    /// `2g` cycles whose classes form a basis. The values transport to the
    /// canonical basis through the polarization identity.
    pub fn from_values_on(
        mesh: &Mesh,
        basis: Arc<HomologyBasis>,
        cycles: &[Cycle],
        values: &[u8],
    ) -> Result<Self, SpinError> {
        let dim = basis.cycles().len();
        if cycles.len() != dim || values.len() != dim {
            return Err(SpinError::ValueCount { expected: dim, got: values.len() });
        }
        let space = SymplecticSpace::new(basis.intersection_matrix().clone())
            .expect("intersection matrix of a homology basis is symplectic");
        if dim == 0 {
            return Ok(SpinStructure { basis, form: QuadraticForm::new(space, GfVector::zero(0)) });
        }
        let classes: Vec<GfVector> = cycles.iter().map(|c| basis.class_of(mesh, c)).collect();
        // columns of A are the given classes in canonical coordinates
        let mut a = BitMatrix::zero(dim, dim);
        for (j, cls) in classes.iter().enumerate() {
            for i in 0..dim {
                a.set(i, j, cls.bit(i));
            }
        }
        let a_inv = a.inverse().ok_or(SpinError::CyclesNotBasis)?;
        // q(b_i) from b_i = sum_j coef_j a_j by polarization
        let mut basis_values = 0u64;
        for i in 0..dim {
            let coef = a_inv.mul_vec(&GfVector::unit(i, dim));
            let mut q = 0u8;
            for j in 0..dim {
                if coef.bit(j) == 1 {
                    q ^= values[j] & 1;
                    for k in j + 1..dim {
                        if coef.bit(k) == 1 {
                            q ^= space.omega(&classes[j], &classes[k]);
                        }
                    }
                }
            }
            basis_values |= (q as u64) << i;
        }
        Ok(SpinStructure {
            basis,
            form: QuadraticForm::new(space, GfVector::from_bits(basis_values, dim)),
        })
    }

    /// Builds a structure from a mesh file's spin block.
    pub fn from_spec(
        mesh: &Mesh,
        basis: Arc<HomologyBasis>,
        spec: &SpinSpec,
    ) -> Result<Self, SpinError> {
        match &spec.basis_cycles {
            None => SpinStructure::from_basis_values(basis, &spec.q_values),
            Some(cycle_lists) => {
                let cycles: Vec<Cycle> = cycle_lists
                    .iter()
                    .map(|vs| {
                        mesh.cycle(vs.clone())
                            .map_err(|e| SpinError::InvalidParameters(e.to_string()))
                    })
                    .collect::<Result<_, _>>()?;
                SpinStructure::from_values_on(mesh, basis, &cycles, &spec.q_values)
            }
        }
    }

    pub fn basis(&self) -> &HomologyBasis {
        &self.basis
    }

    pub fn basis_arc(&self) -> Arc<HomologyBasis> {
        Arc::clone(&self.basis)
    }

    pub fn form(&self) -> &QuadraticForm {
        &self.form
    }

    pub fn genus(&self) -> usize {
        self.basis.genus()
    }

    /// Arf invariant of the quadratic form, `+1` or `-1`.
    pub fn arf(&self) -> i8 {
        arf_fast(&self.form)
    }

    /// Value of the form on a class given in canonical coordinates.
    pub fn eval_class(&self, class: &GfVector) -> u8 {
        self.form.eval(class)
    }

    /// Whether the structure is nontrivial along a simple cycle: the form
    /// vanishes on its class. Contractible curves always give `true`.
    pub fn is_nontrivial_along(&self, mesh: &Mesh, c: &Cycle) -> Result<bool, SpinError> {
        if !c.is_simple() {
            return Err(SpinError::NonSimpleCycle);
        }
        Ok(self.form.eval(&self.basis.class_of(mesh, c)) == 0)
    }
}

impl fmt::Debug for SpinStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SpinStructure(q={:?}, arf={})", self.form.basis_values(), self.arf())
    }
}

/// One spin structure per assignment of `q` on the basis; `2^{2g}` in total.
pub fn enumerate_spin_structures(
    basis: Arc<HomologyBasis>,
) -> Result<Vec<SpinStructure>, SpinError> {
    let dim = basis.cycles().len();
    if dim > 16 {
        return Err(SpinError::GenusGuard { dim });
    }
    let space = SymplecticSpace::new(basis.intersection_matrix().clone())
        .expect("intersection matrix of a homology basis is symplectic");
    Ok((0..(1u64 << dim))
        .map(|bits| SpinStructure {
            basis: Arc::clone(&basis),
            form: QuadraticForm::new(space.clone(), GfVector::from_bits(bits, dim)),
        })
        .collect())
}

/// A certified spin-cut: `g` pairwise disjoint simple cycles, classes
/// independent with vanishing form values.
#[derive(Debug, Clone)]
pub struct SpinCut {
    cycles: Vec<Cycle>,
    classes: Vec<GfVector>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateError(pub String);

impl fmt::Display for CertificateError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "spin-cut certificate failed: {}", self.0)
    }
}

impl std::error::Error for CertificateError {}

impl SpinCut {
    pub fn cycles(&self) -> &[Cycle] {
        &self.cycles
    }

    pub fn classes(&self) -> &[GfVector] {
        &self.classes
    }

    pub fn total_length(&self, mesh: &Mesh) -> f64 {
        self.cycles.iter().map(|c| c.length(mesh)).sum()
    }

    /// Re-checks every defining condition from scratch. Trusting a spin-cut
    /// never requires trusting the search that produced it.
    pub fn verify(&self, mesh: &Mesh, spin: &SpinStructure) -> Result<(), CertificateError> {
        let g = mesh.genus();
        if self.cycles.len() != g || self.classes.len() != g {
            return Err(CertificateError(format!(
                "expected {g} cycles, got {}",
                self.cycles.len()
            )));
        }
        for (i, c) in self.cycles.iter().enumerate() {
            if !c.is_simple() {
                return Err(CertificateError(format!("cycle {i} is not simple")));
            }
        }
        for i in 0..g {
            for j in i + 1..g {
                if self.cycles[i].shares_vertex_with(&self.cycles[j]) {
                    return Err(CertificateError(format!("cycles {i} and {j} intersect")));
                }
                if mesh.intersection_mod2(&self.cycles[i], &self.cycles[j]) != 0 {
                    return Err(CertificateError(format!(
                        "cycles {i} and {j} have nonzero mod-2 intersection"
                    )));
                }
            }
        }
        for (i, c) in self.cycles.iter().enumerate() {
            let class = spin.basis().class_of(mesh, c);
            if class != self.classes[i] {
                return Err(CertificateError(format!("cycle {i} class mismatch")));
            }
            if spin.eval_class(&class) != 0 {
                return Err(CertificateError(format!(
                    "spin structure is trivial along cycle {i}"
                )));
            }
        }
        if g > 0 && BitMatrix::from_rows(self.classes.clone()).rank() != g {
            return Err(CertificateError("classes are dependent".into()));
        }
        Ok(())
    }
}

/// Searches for a spin-cut realizing the canonical zero-Lagrangian classes.
///
/// Per class, up to `budget.k` candidate cycles are generated by shortest
/// cycle search with iterative edge penalties (used edges get their length
/// multiplied by 8 between attempts). A pairwise disjoint combination of
/// candidates is selected; remaining conflicts fall back to sequential
/// search with already chosen cycles' vertices removed from the graph.
pub fn find_spin_cut(
    mesh: &Mesh,
    spin: &SpinStructure,
    budget: &SearchBudget,
) -> Result<SpinCut, AbsenceReason> {
    if spin.arf() == -1 {
        return Err(AbsenceReason::ArfMinusOne);
    }
    let targets = lagrangian_zero_basis(spin.form()).expect("arf is +1");
    find_spin_cut_for_classes(mesh, spin, &targets, budget)
}

/// Spin-cut search with explicitly chosen target classes (they must satisfy
/// the zero-Lagrangian conditions for the structure's form).
pub fn find_spin_cut_for_classes(
    mesh: &Mesh,
    spin: &SpinStructure,
    targets: &[GfVector],
    budget: &SearchBudget,
) -> Result<SpinCut, AbsenceReason> {
    let g = mesh.genus();
    if targets.len() != g {
        return Err(AbsenceReason::BudgetExhausted);
    }
    if g == 0 {
        return Ok(SpinCut { cycles: Vec::new(), classes: Vec::new() });
    }
    let basis = spin.basis();

    // candidate pool per class via penalty rerouting
    let penalty = 8.0;
    let mut pools: Vec<Vec<Cycle>> = Vec::with_capacity(g);
    for target in targets {
        let mut pool: Vec<Cycle> = Vec::new();
        let mut multipliers: HashMap<usize, f64> = HashMap::new();
        for _ in 0..budget.k.max(1) {
            let found = shortest_cycle_with_weights(
                mesh,
                basis,
                target,
                |e| mesh.edge_length(e) * multipliers.get(&e).copied().unwrap_or(1.0),
                &[],
            );
            let Ok(c) = found else { break };
            for e in c.edge_ids(mesh) {
                *multipliers.entry(e).or_insert(1.0) *= penalty;
            }
            if c.is_simple() && !pool.contains(&c) {
                pool.push(c);
            }
        }
        pools.push(pool);
    }

    // exhaustive combination scan, minimizing total length
    let mut best: Option<(f64, Vec<Cycle>)> = None;
    if pools.iter().all(|p| !p.is_empty()) {
        let mut index = vec![0usize; g];
        let mut examined = 0usize;
        'odometer: loop {
            examined += 1;
            if examined > budget.max_combinations {
                break;
            }
            let pick: Vec<&Cycle> =
                index.iter().enumerate().map(|(i, &j)| &pools[i][j]).collect();
            let disjoint =
                (0..g).all(|i| (i + 1..g).all(|j| !pick[i].shares_vertex_with(pick[j])));
            if disjoint {
                let total: f64 = pick.iter().map(|c| c.length(mesh)).sum();
                if best.as_ref().is_none_or(|(b, _)| total < *b) {
                    best = Some((total, pick.into_iter().cloned().collect()));
                }
            }
            // advance the odometer
            for i in (0..g).rev() {
                index[i] += 1;
                if index[i] < pools[i].len() {
                    continue 'odometer;
                }
                index[i] = 0;
                if i == 0 {
                    break 'odometer;
                }
            }
        }
    }

    // fallback: sequential search, removing chosen cycles' vertices
    if best.is_none() {
        let mut chosen: Vec<Cycle> = Vec::new();
        for target in targets {
            let forbidden: Vec<usize> =
                chosen.iter().flat_map(|c| c.vertices().iter().copied()).collect();
            let mut found = None;
            let mut multipliers: HashMap<usize, f64> = HashMap::new();
            for _ in 0..budget.k.max(1) {
                let attempt = shortest_cycle_with_weights(
                    mesh,
                    basis,
                    target,
                    |e| mesh.edge_length(e) * multipliers.get(&e).copied().unwrap_or(1.0),
                    &forbidden,
                );
                let Ok(c) = attempt else { break };
                for e in c.edge_ids(mesh) {
                    *multipliers.entry(e).or_insert(1.0) *= penalty;
                }
                if c.is_simple() {
                    found = Some(c);
                    break;
                }
            }
            match found {
                Some(c) => chosen.push(c),
                None => return Err(AbsenceReason::BudgetExhausted),
            }
        }
        let total = chosen.iter().map(|c| c.length(mesh)).sum();
        best = Some((total, chosen));
    }

    let (_, cycles) = best.ok_or(AbsenceReason::BudgetExhausted)?;
    let classes: Vec<GfVector> = cycles.iter().map(|c| basis.class_of(mesh, c)).collect();
    let cut = SpinCut { cycles, classes };
    cut.verify(mesh, spin).map_err(|_| AbsenceReason::BudgetExhausted)?;
    Ok(cut)
}

/// Alternative zero-Lagrangian systems obtained from the canonical one by
/// random transvections `x -> x + ω(x, a) a` with `q(a) = 1`, which preserve
/// both the symplectic and the quadratic form. Deterministic for a fixed
/// seed; the canonical system comes first.
pub fn alternative_lagrangians(
    form: &QuadraticForm,
    tries: usize,
    seed: u64,
) -> Vec<Vec<GfVector>> {
    let Some(canonical) = lagrangian_zero_basis(form) else {
        return Vec::new();
    };
    let dim = form.space().dim();
    let mut found: Vec<Vec<GfVector>> = vec![canonical];
    if dim == 0 || tries <= 1 {
        return found;
    }
    let mut rng = StdRng::seed_from_u64(seed);
    let mut attempts = 0;
    while found.len() < tries && attempts < tries * 20 {
        attempts += 1;
        let a = GfVector::from_bits(rng.gen::<u64>(), dim);
        if a.is_zero() || form.eval(&a) != 1 {
            continue;
        }
        let base = &found[rng.gen_range(0..found.len())];
        let image: Vec<GfVector> = base
            .iter()
            .map(|x| if form.omega(x, &a) == 1 { x.add(&a) } else { *x })
            .collect();
        let mut key: Vec<u64> = image.iter().map(|v| v.bits()).collect();
        key.sort_unstable();
        let duplicate = found.iter().any(|l| {
            let mut k: Vec<u64> = l.iter().map(|v| v.bits()).collect();
            k.sort_unstable();
            k == key
        });
        if !duplicate {
            found.push(image);
        }
    }
    found
}

/// Torus of revolution with radii `major > minor > 0`, sampled on an
/// `nu x nv` grid: `((R + r cos v) cos u, (R + r cos v) sin u, r sin v)`.
///
/// Both the meridian circle and the longitude circle bound disks meeting the
/// surface transversally, so the induced spin structure vanishes on both
/// generator classes; its Arf invariant is `+1`.
pub fn torus_of_revolution(
    major: f64,
    minor: f64,
    nu: usize,
    nv: usize,
) -> Result<(Mesh, SpinStructure), SpinError> {
    if !(major > minor && minor > 0.0) {
        return Err(SpinError::InvalidParameters(format!(
            "need major > minor > 0, got major = {major}, minor = {minor}"
        )));
    }
    if nu < 3 || nv < 3 {
        return Err(SpinError::InvalidParameters(format!("need nu, nv >= 3, got {nu} x {nv}")));
    }
    let tau = std::f64::consts::TAU;
    let mut positions = Vec::with_capacity(nu * nv);
    for i in 0..nu {
        let u = tau * i as f64 / nu as f64;
        for j in 0..nv {
            let v = tau * j as f64 / nv as f64;
            let ring = major + minor * v.cos();
            positions.push([ring * u.cos(), ring * u.sin(), minor * v.sin()]);
        }
    }
    let idx = |i: usize, j: usize| (i % nu) * nv + (j % nv);
    let mut faces = Vec::with_capacity(2 * nu * nv);
    for i in 0..nu {
        for j in 0..nv {
            let (a, b, c, d) = (idx(i, j), idx(i + 1, j), idx(i, j + 1), idx(i + 1, j + 1));
            faces.push([a, b, d]);
            faces.push([a, d, c]);
        }
    }
    let mesh = Mesh::from_positions(positions, faces)
        .map_err(|e| SpinError::InvalidParameters(e.to_string()))?;
    let basis = Arc::new(mesh.homology_basis());
    let meridian = mesh.cycle((0..nv).map(|j| idx(0, j)).collect()).unwrap();
    let longitude = mesh.cycle((0..nu).map(|i| idx(i, 0)).collect()).unwrap();
    let spin = SpinStructure::from_values_on(&mesh, basis, &[meridian, longitude], &[0, 0])?;
    Ok((mesh, spin))
}

/// Grid torus over a lattice together with a spin structure prescribed on
/// the two coordinate loops: `q.0` on the `b1`-winding class, `q.1` on the
/// `b2`-winding class.
pub fn grid_torus_with_spin(
    n: usize,
    b1: [f64; 2],
    b2: [f64; 2],
    q: (u8, u8),
) -> (Mesh, SpinStructure) {
    let mesh = crate::fixtures::grid_torus(n, b1, b2);
    let basis = Arc::new(mesh.homology_basis());
    let h = mesh.cycle(crate::fixtures::horizontal_loop(n, 0)).unwrap();
    let v = mesh.cycle(crate::fixtures::vertical_loop(n, 0)).unwrap();
    let spin = SpinStructure::from_values_on(&mesh, basis, &[h, v], &[q.0, q.1])
        .expect("coordinate loops form a basis");
    (mesh, spin)
}
