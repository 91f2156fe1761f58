//! Axial motional ground state of the atom pair.
//!
//! Radial motion is frozen in its ground state on the trap axis, so only the
//! axial displacements `(z₁′, z₂′)` from the trap centres remain. The state is
//! computed two ways: a correlated Gaussian for the quadratic potential and
//! a diagonalisation of the full axial potential in products of bare
//! oscillator states of the atom traps.
//!
//! Energies are measured without the bare ion energy E_μ⁽⁰⁾.

use nalgebra::{DMatrix, Matrix2, SymmetricEigen};

use crate::bo::{bo_interaction, AtomPairGeometry};
use crate::constants::HBAR;
use crate::eigen::symmetric_eigensolve;
use crate::error::{Error, Result};
use crate::expansion::quadratic_potential;
use crate::model::SystemConfig;
use crate::phonons::equilibrium_shift;
use crate::quadrature::{hermite_functions_into, GaussHermite};

pub const MAX_N_MAX: usize = 60;
const QUADRATURE_RTOL: f64 = 1e-8;

/// Axial potential apart from the atoms' own harmonic trap terms.
pub trait AxialPotential {
    /// Value at axial displacements `(z1, z2)` from the trap centres, J.
    fn interaction(&self, z1: f64, z2: f64) -> Result<f64>;
}

/// The unexpanded adiabatic interaction on the trap axis.
#[derive(Debug, Clone)]
pub struct FullAxialPotential {
    config: SystemConfig,
}

impl FullAxialPotential {
    pub fn new(config: &SystemConfig, z0: f64) -> Self {
        Self { config: config.with_z0(z0) }
    }
}

impl AxialPotential for FullAxialPotential {
    fn interaction(&self, z1: f64, z2: f64) -> Result<f64> {
        let z0 = self.config.z0;
        bo_interaction(&AtomPairGeometry::on_axis(z0 + z1, -z0 + z2), &self.config)
    }
}

/// Second-order truncation of [`FullAxialPotential`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticAxialPotential {
    pub constant: f64,
    pub linear: [f64; 2],
    /// Curvature without the trap terms m_a ω_az², J/m².
    pub curvature: Matrix2<f64>,
}

impl QuadraticAxialPotential {
    pub fn new(config: &SystemConfig, z0: f64) -> Self {
        let q = quadratic_potential(config, z0, config.ion_mode).to_atom_basis();
        let trap = config.atom.axial_stiffness();
        Self {
            constant: q.constant - config.ion_mode.energy(config),
            linear: [q.linear[2], q.linear[5]],
            curvature: Matrix2::new(
                q.hessian[(2, 2)] - trap,
                q.hessian[(2, 5)],
                q.hessian[(5, 2)],
                q.hessian[(5, 5)] - trap,
            ),
        }
    }

    /// Drops the linear force terms.
    pub fn without_linear(mut self) -> Self {
        self.linear = [0.0; 2];
        self
    }
}

impl AxialPotential for QuadraticAxialPotential {
    fn interaction(&self, z1: f64, z2: f64) -> Result<f64> {
        let c = &self.curvature;
        Ok(self.constant
            + self.linear[0] * z1
            + self.linear[1] * z2
            + 0.5 * (c[(0, 0)] * z1 * z1 + 2.0 * c[(0, 1)] * z1 * z2 + c[(1, 1)] * z2 * z2))
    }
}

/// Index of |n₁ n₂⟩ in a basis with cutoff `n_max`.
pub fn basis_index(n1: usize, n2: usize, n_max: usize) -> usize {
    n1 * (n_max + 1) + n2
}

fn quadrature_order(n_max: usize) -> usize {
    4 * n_max + 8
}

fn potential_matrix(
    potential: &dyn AxialPotential,
    length: f64,
    n_max: usize,
    order: usize,
) -> Result<DMatrix<f64>> {
    let gh = GaussHermite::new(order);
    let nb = n_max + 1;
    let t = gh.hermite_table(n_max);

    // weighted potential on the tensor grid
    let mut v = DMatrix::zeros(order, order);
    for k in 0..order {
        for l in 0..order {
            let w = potential.interaction(length * gh.nodes[k], length * gh.nodes[l])?;
            if !w.is_finite() {
                return Err(Error::SingularGeometry("axial potential is not finite on the quadrature grid".into()));
            }
            v[(k, l)] = gh.scaled_weights[k] * gh.scaled_weights[l] * w;
        }
    }
    // P[k, (m, n)] = φ_m(x_k) φ_n(x_k); M4 = Pᵀ V P is indexed [(m1, n1), (m2, n2)]
    let mut p = DMatrix::zeros(order, nb * nb);
    for k in 0..order {
        for m in 0..nb {
            for n in 0..nb {
                p[(k, m * nb + n)] = t[(k, m)] * t[(k, n)];
            }
        }
    }
    let m4 = p.transpose() * (v * &p);

    let dim = nb * nb;
    let mut h = DMatrix::zeros(dim, dim);
    for m1 in 0..nb {
        for n1 in 0..nb {
            for m2 in 0..nb {
                for n2 in 0..nb {
                    h[(basis_index(m1, m2, n_max), basis_index(n1, n2, n_max))] = m4[(m1 * nb + n1, m2 * nb + n2)];
                }
            }
        }
    }
    Ok(h)
}

fn check_extent(config: &SystemConfig, z0: f64, n_max: usize) -> Result<()> {
    if n_max > MAX_N_MAX {
        return Err(Error::InvalidInput(format!("n_max = {n_max} exceeds {MAX_N_MAX}")));
    }
    if !(z0 > 0.0) {
        return Err(Error::InvalidInput(format!("z0 = {z0:e} m is not positive")));
    }
    // the outermost quadrature node must stay well clear of the ion
    let reach = config.scales().a_z * (2.0 * (quadrature_order(n_max) + 8) as f64 + 1.0).sqrt();
    if reach >= 0.5 * z0 {
        return Err(Error::InvalidInput(format!(
            "2z0 = {:.4e} m is too small for the quadrature grid (reach {reach:.3e} m)",
            2.0 * z0
        )));
    }
    Ok(())
}

/// Hamiltonian of the axial pair motion in the basis |n₁ n₂⟩, n ≤ `n_max`, of
/// bare axial trap states centred at the trap centres. The potential
/// integrals use Gauss–Hermite quadrature of order 4·n_max + 8 and are
/// checked against order 4·n_max + 16.
pub fn hamiltonian_matrix(potential: &dyn AxialPotential, config: &SystemConfig, n_max: usize) -> Result<DMatrix<f64>> {
    let length = config.scales().a_z;
    let order = quadrature_order(n_max);
    let mut h = potential_matrix(potential, length, n_max, order)?;
    let check = potential_matrix(potential, length, n_max, order + 8)?;
    let change = (&h - &check).amax();
    let scale = check.amax();
    if change > QUADRATURE_RTOL * scale {
        return Err(Error::Accuracy(format!(
            "potential matrix changes by {:.3e} (relative) between quadrature orders {order} and {}",
            change / scale,
            order + 8
        )));
    }
    let hw = HBAR * config.atom.trap.axial;
    for n1 in 0..=n_max {
        for n2 in 0..=n_max {
            let i = basis_index(n1, n2, n_max);
            h[(i, i)] += hw * (n1 + n2 + 1) as f64;
        }
    }
    Ok(0.5 * (&h + h.transpose()))
}

/// [`hamiltonian_matrix`] for the full axial potential at half-separation z0.
pub fn axial_hamiltonian_matrix(config: &SystemConfig, z0: f64, n_max: usize) -> Result<DMatrix<f64>> {
    check_extent(config, z0, n_max)?;
    hamiltonian_matrix(&FullAxialPotential::new(config, z0), config, n_max)
}

/// The block of a cutoff-`n_big` matrix that belongs to cutoff `n_small`.
pub fn truncate_basis(matrix: &DMatrix<f64>, n_big: usize, n_small: usize) -> DMatrix<f64> {
    let idx: Vec<usize> = (0..=n_small)
        .flat_map(|a| (0..=n_small).map(move |b| basis_index(a, b, n_big)))
        .collect();
    DMatrix::from_fn(idx.len(), idx.len(), |i, j| matrix[(idx[i], idx[j])])
}

/// Ground state expanded in |n₁ n₂⟩.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisExpansionState {
    pub n_max: usize,
    /// `coefficients[(n1, n2)]`.
    pub coefficients: DMatrix<f64>,
    /// J, without E_μ⁽⁰⁾.
    pub energy: f64,
    /// Relative change of the motional energy against the next smaller
    /// basis in the ramp.
    pub convergence: f64,
    /// Oscillator length of the basis, m.
    pub length: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RampOptions {
    pub n_start: usize,
    pub n_step: usize,
    pub n_cap: usize,
    pub tolerance: f64,
}

impl Default for RampOptions {
    fn default() -> Self {
        Self { n_start: 30, n_step: 4, n_cap: 50, tolerance: 1e-6 }
    }
}

/// Ground state of `potential`, increasing the cutoff from `n_start` in
/// steps of `n_step` until the motional energy (measured from the potential
/// at the trap centres) changes by less than `tolerance` relative. Both
/// energies of a comparison come from the same matrix, so they obey the
/// variational ordering exactly.
pub fn basis_ground_state(
    potential: &dyn AxialPotential,
    config: &SystemConfig,
    options: RampOptions,
) -> Result<BasisExpansionState> {
    let floor = potential.interaction(0.0, 0.0)?;
    let mut n = options.n_start;
    while n + options.n_step <= options.n_cap {
        let big = n + options.n_step;
        let h = hamiltonian_matrix(potential, config, big)?;
        let e_small = symmetric_eigensolve(&truncate_basis(&h, big, n))?.values[0];
        let eig = symmetric_eigensolve(&h)?;
        let e_big = eig.values[0];
        let rel = (e_small - e_big).abs() / (e_big - floor).abs();
        if rel < options.tolerance {
            let coefficients = DMatrix::from_fn(big + 1, big + 1, |a, b| eig.vectors[(basis_index(a, b, big), 0)]);
            return Ok(BasisExpansionState {
                n_max: big,
                coefficients,
                energy: e_big,
                convergence: rel,
                length: config.scales().a_z,
            });
        }
        n = big;
    }
    Err(Error::NonConvergence { what: format!("basis ramp up to n_max = {}", options.n_cap), iterations: n })
}

/// Ground state of the full axial potential at half-separation `z0`.
pub fn full_ground_state(config: &SystemConfig, z0: f64, options: RampOptions) -> Result<BasisExpansionState> {
    check_extent(config, z0, options.n_cap)?;
    basis_ground_state(&FullAxialPotential::new(config, z0), config, options)
}

/// Position matrix ⟨m|x|n⟩ for m ≤ n_max + 1, n ≤ n_max (dimensionless).
fn position_matrix(n_max: usize) -> DMatrix<f64> {
    let mut x = DMatrix::zeros(n_max + 2, n_max + 1);
    for n in 0..=n_max {
        x[(n + 1, n)] = ((n + 1) as f64 / 2.0).sqrt();
        if n > 0 {
            x[(n - 1, n)] = (n as f64 / 2.0).sqrt();
        }
    }
    x
}

impl BasisExpansionState {
    pub fn norm(&self) -> f64 {
        self.coefficients.norm()
    }

    /// |⟨0 0|ψ⟩|: overlap with both atoms in their bare trap ground states.
    pub fn product_ground_overlap(&self) -> f64 {
        self.coefficients[(0, 0)].abs()
    }

    /// Means and standard deviations of (z₁′, z₂′), m.
    pub fn moments(&self) -> ([f64; 2], [f64; 2]) {
        let x = position_matrix(self.n_max);
        let c = &self.coefficients;
        let xc = &x * c; // z₁ acting on the first index
        let cx = c * x.transpose(); // z₂ on the second
        let mean1 = c.component_mul(&xc.rows(0, self.n_max + 1)).sum();
        let mean2 = c.component_mul(&cx.columns(0, self.n_max + 1)).sum();
        let var1 = xc.norm_squared() - mean1 * mean1;
        let var2 = cx.norm_squared() - mean2 * mean2;
        let a = self.length;
        ([a * mean1, a * mean2], [a * var1.max(0.0).sqrt(), a * var2.max(0.0).sqrt()])
    }

    /// ⟨G|ψ⟩ by projecting the Gaussian on the basis.
    pub fn overlap_with(&self, gaussian: &CorrelatedGaussian) -> f64 {
        let nb = self.n_max + 1;
        let gh = GaussHermite::new(2 * self.n_max + 40);
        let t = gh.hermite_table(self.n_max);
        let a = self.length;
        let mut g = DMatrix::zeros(gh.order(), gh.order());
        for k in 0..gh.order() {
            for l in 0..gh.order() {
                g[(k, l)] = gh.scaled_weights[k]
                    * gh.scaled_weights[l]
                    * gaussian.amplitude(a * gh.nodes[k], a * gh.nodes[l]);
            }
        }
        // projection[(n1, n2)] = a Σ_kl φ_n1(x_k) φ_n2(x_l) G_kl
        let proj = t.transpose() * g * &t * a;
        debug_assert_eq!(proj.nrows(), nb);
        proj.component_mul(&self.coefficients).sum()
    }
}

/// Ground state of the quadratic axial potential:
/// ψ ∝ Π_k exp(−q_k²/(2σ_k²)) with q = axesᵀ (z − center) and
/// σ_k = sqrt(ħ/(m_a ω_k)).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelatedGaussian {
    /// Displacements (z₁′, z₂′) of the density maximum, m.
    pub center: [f64; 2],
    /// Columns are the normal-mode directions, in the order of `widths`.
    pub normal_axes: Matrix2<f64>,
    pub widths: [f64; 2],
    /// Normal-mode angular frequencies, ascending.
    pub omegas: [f64; 2],
}

impl CorrelatedGaussian {
    pub fn amplitude(&self, z1: f64, z2: f64) -> f64 {
        let d = nalgebra::Vector2::new(z1 - self.center[0], z2 - self.center[1]);
        let q = self.normal_axes.transpose() * d;
        let mut psi = 1.0;
        for k in 0..2 {
            let s = self.widths[k];
            psi *= (std::f64::consts::PI * s * s).powf(-0.25) * (-0.5 * q[k] * q[k] / (s * s)).exp();
        }
        psi
    }
}

pub fn gaussian_ground_state(config: &SystemConfig, z0: f64) -> Result<CorrelatedGaussian> {
    let q = quadratic_potential(config, z0, config.ion_mode).to_atom_basis();
    let block = Matrix2::new(q.hessian[(2, 2)], q.hessian[(2, 5)], q.hessian[(5, 2)], q.hessian[(5, 5)]);
    let eig = SymmetricEigen::new(block);
    let mut order = [0usize, 1];
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    if !(eig.eigenvalues[order[0]] > 0.0) {
        return Err(Error::Instability(format!(
            "axial curvature {:.3e} J/m² is not positive at 2z0 = {:.6e} m",
            eig.eigenvalues[order[0]],
            2.0 * z0
        )));
    }
    let m = config.atom.mass();
    let mut axes = Matrix2::zeros();
    let mut omegas = [0.0; 2];
    let mut widths = [0.0; 2];
    for (dst, &src) in order.iter().enumerate() {
        let mut col = eig.eigenvectors.column(src).into_owned();
        if col[col.iamax()] < 0.0 {
            col.neg_mut();
        }
        axes.set_column(dst, &col);
        omegas[dst] = (eig.eigenvalues[src] / m).sqrt();
        widths[dst] = (HBAR / (m * omegas[dst])).sqrt();
    }
    Ok(CorrelatedGaussian { center: equilibrium_shift(config, z0)?, normal_axes: axes, widths, omegas })
}

/// A two-atom axial wavefunction that can be sampled on a grid.
pub trait PairState {
    /// ψ(z1[i], z2[j]) in m⁻¹.
    fn amplitudes(&self, z1: &[f64], z2: &[f64]) -> DMatrix<f64>;
    /// Location of the density peak or mean, m.
    fn center(&self) -> [f64; 2];
    /// Characteristic spread along z₁′ and z₂′, m.
    fn spread(&self) -> [f64; 2];
}

impl PairState for CorrelatedGaussian {
    fn amplitudes(&self, z1: &[f64], z2: &[f64]) -> DMatrix<f64> {
        DMatrix::from_fn(z1.len(), z2.len(), |i, j| self.amplitude(z1[i], z2[j]))
    }

    fn center(&self) -> [f64; 2] {
        self.center
    }

    fn spread(&self) -> [f64; 2] {
        // standard deviation of |ψ|² along each atom coordinate
        let var = |row: usize| {
            (0..2).map(|k| (self.normal_axes[(row, k)] * self.widths[k]).powi(2) / 2.0).sum::<f64>()
        };
        [var(0).sqrt(), var(1).sqrt()]
    }
}

impl PairState for BasisExpansionState {
    fn amplitudes(&self, z1: &[f64], z2: &[f64]) -> DMatrix<f64> {
        let table = |zs: &[f64]| {
            let mut t = DMatrix::zeros(zs.len(), self.n_max + 1);
            let mut buf = Vec::new();
            for (i, &z) in zs.iter().enumerate() {
                hermite_functions_into(z / self.length, self.n_max, &mut buf);
                for n in 0..=self.n_max {
                    t[(i, n)] = buf[n];
                }
            }
            t
        };
        (table(z1) * &self.coefficients * table(z2).transpose()) / self.length
    }

    fn center(&self) -> [f64; 2] {
        self.moments().0
    }

    fn spread(&self) -> [f64; 2] {
        self.moments().1
    }
}

/// |ψ(z₁′, z₂′)|² on a rectangular grid, m⁻².
#[derive(Debug, Clone, PartialEq)]
pub struct DensityGrid {
    pub z1: Vec<f64>,
    pub z2: Vec<f64>,
    /// Rows follow `z1`, columns `z2`.
    pub density: DMatrix<f64>,
    /// Trapezoid integral of the density.
    pub integral: f64,
}

/// Odd-sized grid `center + (i − (points−1)/2)·step`, exactly symmetric
/// about `center`.
pub fn centered_axis(center: f64, half_width: f64, points: usize) -> Vec<f64> {
    let points = if points % 2 == 0 { points + 1 } else { points.max(3) };
    let mid = (points / 2) as f64;
    let step = half_width / mid;
    (0..points).map(|i| center + (i as f64 - mid) * step).collect()
}

/// Default grid: ±6 standard deviations of the wider coordinate about the
/// state's centre, the same spacing on both axes.
pub fn default_grid(state: &dyn PairState, points: usize) -> (Vec<f64>, Vec<f64>) {
    let c = state.center();
    let s = state.spread();
    let half = 6.0 * s[0].max(s[1]);
    (centered_axis(c[0], half, points), centered_axis(c[1], half, points))
}

fn trapezoid_weights(z: &[f64]) -> Vec<f64> {
    let mut w = vec![0.0; z.len()];
    for i in 0..z.len() - 1 {
        let h = 0.5 * (z[i + 1] - z[i]);
        w[i] += h;
        w[i + 1] += h;
    }
    w
}

pub fn pair_density(state: &dyn PairState, z1: &[f64], z2: &[f64]) -> Result<DensityGrid> {
    let c = state.center();
    let s = state.spread();
    for (axis, grid) in [z1, z2].into_iter().enumerate() {
        if grid.len() < 3 || grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidInput(format!("z{} grid must be increasing with at least 3 points", axis + 1)));
        }
        let (lo, hi) = (grid[0], grid[grid.len() - 1]);
        if lo > c[axis] - 3.0 * s[axis] || hi < c[axis] + 3.0 * s[axis] {
            return Err(Error::InvalidInput(format!(
                "z{} grid [{lo:.3e}, {hi:.3e}] m does not cover 6 standard deviations about {:.3e} m",
                axis + 1,
                c[axis]
            )));
        }
    }
    let amp = state.amplitudes(z1, z2);
    let density = amp.component_mul(&amp);
    let w1 = trapezoid_weights(z1);
    let w2 = trapezoid_weights(z2);
    let mut integral = 0.0;
    for i in 0..z1.len() {
        for j in 0..z2.len() {
            integral += w1[i] * w2[j] * density[(i, j)];
        }
    }
    if (integral - 1.0).abs() > 1e-3 {
        return Err(Error::Accuracy(format!("density integrates to {integral:.6} on the given grid")));
    }
    Ok(DensityGrid { z1: z1.to_vec(), z2: z2.to_vec(), density, integral })
}
