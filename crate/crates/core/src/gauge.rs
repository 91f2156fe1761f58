//! Non-adiabatic gauge structure of the ion eigenstates over atom space.
//!
//! The ionic eigenstates are products of three 1-D oscillator states of the
//! ion trap whose centre `c = (x0, y0, ζ0)` follows the atoms. Their
//! parametric derivative is therefore analytic:
//!
//! ```text
//! ∇_{r_j} ψ_μ = −Σ_a (∂c_a/∂r_j) ∂_a ψ_μ
//! ```
//!
//! and the connection A^j_{νμ} = iħ⟨ν|∇_{r_j}μ⟩ only links states that
//! differ by one quantum along a single axis.

use nalgebra::{DMatrix, Vector3};
use num_complex::Complex64;

use crate::bo::{displacement_jacobian, AtomPairGeometry, IonModeIndex};
use crate::constants::HBAR;
use crate::error::{Error, Result};
use crate::model::SystemConfig;

/// Ion oscillator quanta along x, y and z.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CartesianMode {
    pub n: [u32; 3],
}

impl CartesianMode {
    pub fn new(nx: u32, ny: u32, nz: u32) -> Self {
        Self { n: [nx, ny, nz] }
    }

    pub fn ground() -> Self {
        Self::new(0, 0, 0)
    }
}

impl TryFrom<IonModeIndex> for CartesianMode {
    type Error = Error;

    fn try_from(mu: IonModeIndex) -> Result<Self> {
        match mu {
            IonModeIndex::Cartesian { n_x, n_y, n_z } => Ok(Self::new(n_x, n_y, n_z)),
            IonModeIndex::Cylindrical { n_rho: 0, m: 0, n_z } => Ok(Self::new(0, 0, n_z)),
            other => Err(Error::InvalidInput(format!("{other:?} has no unique Cartesian counterpart"))),
        }
    }
}

impl std::fmt::Display for CartesianMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.n[0], self.n[1], self.n[2])
    }
}

/// All modes with every quantum number ≤ `max_quanta`, in lexicographic
/// order.
pub fn mode_cube(max_quanta: u32) -> Vec<CartesianMode> {
    let r = 0..=max_quanta;
    r.clone()
        .flat_map(|x| r.clone().flat_map(move |y| (0..=max_quanta).map(move |z| CartesianMode::new(x, y, z))))
        .collect()
}

/// All modes with n_x + n_y + n_z ≤ `max_total`, in lexicographic order.
/// Unlike [`mode_cube`], the truncated per-axis derivative matrices of this
/// set do not commute, so its Wilson loops can differ from the identity.
pub fn mode_shell(max_total: u32) -> Vec<CartesianMode> {
    mode_cube(max_total).into_iter().filter(|m| m.n.iter().sum::<u32>() <= max_total).collect()
}

fn ion_lengths(config: &SystemConfig) -> [f64; 3] {
    let ion = &config.ion;
    let lr = ion.oscillator_length(ion.trap.radial);
    [lr, lr, ion.oscillator_length(ion.trap.axial)]
}

/// ⟨m|d/dx|n⟩ for normalised Hermite functions.
pub fn derivative_element(m: u32, n: u32) -> f64 {
    if m + 1 == n {
        (n as f64 / 2.0).sqrt()
    } else if m == n + 1 {
        -((n + 1) as f64 / 2.0).sqrt()
    } else {
        0.0
    }
}

/// A^j_{bra,ket} for one atom.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaugeConnection {
    pub bra: CartesianMode,
    pub ket: CartesianMode,
    /// 0 or 1.
    pub atom: usize,
    /// J·s/m.
    pub value: Vector3<Complex64>,
}

/// ⟨bra|∂_a|ket⟩ along each ion axis, 1/m.
fn ion_gradient_elements(bra: CartesianMode, ket: CartesianMode, lengths: &[f64; 3]) -> [f64; 3] {
    let mut out = [0.0; 3];
    for a in 0..3 {
        let others_match = (0..3).filter(|&b| b != a).all(|b| bra.n[b] == ket.n[b]);
        if others_match {
            out[a] = derivative_element(bra.n[a], ket.n[a]) / lengths[a];
        }
    }
    out
}

fn element_with(
    bra: CartesianMode,
    ket: CartesianMode,
    jac: &nalgebra::Matrix3<f64>,
    lengths: &[f64; 3],
) -> Vector3<Complex64> {
    let d = ion_gradient_elements(bra, ket, lengths);
    Vector3::from_fn(|k, _| {
        let s: f64 = (0..3).map(|a| jac[(a, k)] * d[a]).sum();
        Complex64::new(0.0, -HBAR * s)
    })
}

/// iħ ∫ ψ_bra ∇_{r_j} ψ_ket for atom `atom` (0 or 1).
pub fn gauge_element(
    bra: CartesianMode,
    ket: CartesianMode,
    atom: usize,
    geometry: &AtomPairGeometry,
    config: &SystemConfig,
) -> Result<GaugeConnection> {
    check_atom(atom)?;
    let jac = displacement_jacobian(geometry, config, atom)?;
    let value = element_with(bra, ket, &jac, &ion_lengths(config));
    Ok(GaugeConnection { bra, ket, atom, value })
}

fn check_atom(atom: usize) -> Result<()> {
    if atom > 1 {
        return Err(Error::InvalidInput(format!("atom index {atom} (expected 0 or 1)")));
    }
    Ok(())
}

/// One of the six atom coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AtomCoordinate {
    pub atom: usize,
    pub axis: usize,
}

impl AtomCoordinate {
    pub fn new(atom: usize, axis: usize) -> Self {
        assert!(atom < 2 && axis < 3, "coordinate ({atom}, {axis}) out of range");
        Self { atom, axis }
    }

    fn unit(&self) -> [Vector3<f64>; 2] {
        let mut out = [Vector3::zeros(); 2];
        out[self.atom][self.axis] = 1.0;
        out
    }
}

/// Connection matrices `[A_x, A_y, A_z]` of atom `atom` over `modes`; entry
/// (ν, μ) is A_{νμ}.
pub fn connection_matrices(
    modes: &[CartesianMode],
    atom: usize,
    geometry: &AtomPairGeometry,
    config: &SystemConfig,
) -> Result<[DMatrix<Complex64>; 3]> {
    check_atom(atom)?;
    let jac = displacement_jacobian(geometry, config, atom)?;
    let lengths = ion_lengths(config);
    let n = modes.len();
    let mut out = [DMatrix::zeros(n, n), DMatrix::zeros(n, n), DMatrix::zeros(n, n)];
    for (i, &bra) in modes.iter().enumerate() {
        for (k, &ket) in modes.iter().enumerate() {
            let v = element_with(bra, ket, &jac, &lengths);
            for c in 0..3 {
                out[c][(i, k)] = v[c];
            }
        }
    }
    Ok(out)
}

/// Connection matrix for one atom coordinate.
pub fn connection_component(
    modes: &[CartesianMode],
    coord: AtomCoordinate,
    geometry: &AtomPairGeometry,
    config: &SystemConfig,
) -> Result<DMatrix<Complex64>> {
    let [ax, ay, az] = connection_matrices(modes, coord.atom, geometry, config)?;
    Ok([ax, ay, az].into_iter().nth(coord.axis).expect("axis < 3"))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermiticityReport {
    /// max |A_{μν} − conj(A_{νμ})| over both atoms and all components.
    pub max_deviation: f64,
    /// max |A_{μν}|.
    pub max_abs: f64,
}

impl HermiticityReport {
    pub fn relative(&self) -> f64 {
        if self.max_abs == 0.0 { 0.0 } else { self.max_deviation / self.max_abs }
    }
}

pub fn gauge_hermiticity_check(
    modes: &[CartesianMode],
    geometry: &AtomPairGeometry,
    config: &SystemConfig,
) -> Result<HermiticityReport> {
    let mut report = HermiticityReport { max_deviation: 0.0, max_abs: 0.0 };
    for atom in 0..2 {
        for a in connection_matrices(modes, atom, geometry, config)? {
            let dev = (&a - a.adjoint()).iter().fold(0.0f64, |m, z| m.max(z.norm()));
            let big = a.iter().fold(0.0f64, |m, z| m.max(z.norm()));
            report.max_deviation = report.max_deviation.max(dev);
            report.max_abs = report.max_abs.max(big);
        }
    }
    Ok(report)
}

/// A path through the six-dimensional space of atom positions.
#[derive(Debug, Clone, PartialEq)]
pub struct LoopPath {
    waypoints: Vec<AtomPairGeometry>,
    closed: bool,
}

fn distance(a: &AtomPairGeometry, b: &AtomPairGeometry) -> f64 {
    ((a.r1 - b.r1).norm_squared() + (a.r2 - b.r2).norm_squared()).sqrt()
}

impl LoopPath {
    /// Consecutive waypoints must be at most `max_step` apart; a closed path
    /// must end where it starts.
    pub fn new(waypoints: Vec<AtomPairGeometry>, closed: bool, max_step: f64) -> Result<Self> {
        if waypoints.len() < 2 {
            return Err(Error::InvalidInput("a path needs at least two waypoints".into()));
        }
        if closed && waypoints.first() != waypoints.last() {
            return Err(Error::InvalidInput("closed path does not return to its first waypoint".into()));
        }
        for (i, w) in waypoints.windows(2).enumerate() {
            let d = distance(&w[0], &w[1]);
            if d > max_step {
                return Err(Error::InvalidInput(format!(
                    "step {i} has length {d:.3e} m, above the limit {max_step:.3e} m"
                )));
            }
        }
        Ok(Self { waypoints, closed })
    }

    /// Closed rectangle centred on `center`, traversed +u, +v, −u, −v.
    pub fn rectangle(
        center: AtomPairGeometry,
        u: AtomCoordinate,
        v: AtomCoordinate,
        side_u: f64,
        side_v: f64,
    ) -> Self {
        let [u1, u2] = u.unit();
        let [v1, v2] = v.unit();
        let corner = |su: f64, sv: f64| {
            AtomPairGeometry::new(
                center.r1 + u1 * (su * side_u) + v1 * (sv * side_v),
                center.r2 + u2 * (su * side_u) + v2 * (sv * side_v),
            )
        };
        let waypoints = vec![
            corner(-0.5, -0.5),
            corner(0.5, -0.5),
            corner(0.5, 0.5),
            corner(-0.5, 0.5),
            corner(-0.5, -0.5),
        ];
        Self { waypoints, closed: true }
    }

    pub fn waypoints(&self) -> &[AtomPairGeometry] {
        &self.waypoints
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    /// Midpoints and steps after splitting every leg into `pieces`.
    fn segments(&self, pieces: usize) -> impl Iterator<Item = (AtomPairGeometry, [Vector3<f64>; 2])> + '_ {
        self.waypoints.windows(2).flat_map(move |w| {
            let d1 = (w[1].r1 - w[0].r1) / pieces as f64;
            let d2 = (w[1].r2 - w[0].r2) / pieces as f64;
            (0..pieces).map(move |k| {
                let t = k as f64 + 0.5;
                (AtomPairGeometry::new(w[0].r1 + d1 * t, w[0].r2 + d2 * t), [d1, d2])
            })
        })
    }
}

const BERRY_TOL: f64 = 1e-8;
const BERRY_MAX_LEVELS: u32 = 16;

/// γ_μ = (1/ħ) ∮ Σ_j A^j_{μμ}·dr_j by the midpoint rule, halving the step
/// until the result moves by less than 1e-8 rad.
pub fn berry_phase(path: &LoopPath, mode: CartesianMode, config: &SystemConfig) -> Result<f64> {
    if !path.is_closed() {
        return Err(Error::InvalidInput("the Berry phase needs a closed path".into()));
    }
    let lengths = ion_lengths(config);
    let integral = |pieces: usize| -> Result<f64> {
        let mut sum = Complex64::new(0.0, 0.0);
        for (mid, steps) in path.segments(pieces) {
            for (atom, step) in steps.iter().enumerate() {
                if step.norm_squared() == 0.0 {
                    continue;
                }
                let jac = displacement_jacobian(&mid, config, atom)?;
                let a = element_with(mode, mode, &jac, &lengths);
                sum += a.x * step.x + a.y * step.y + a.z * step.z;
            }
        }
        Ok((sum / HBAR).re)
    };
    let mut prev = integral(1)?;
    for level in 1..=BERRY_MAX_LEVELS {
        let next = integral(1 << level)?;
        if (next - prev).abs() < BERRY_TOL {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::Accuracy(format!("Berry phase not converged after {BERRY_MAX_LEVELS} step halvings")))
}

/// Path-ordered product Π exp(−(i/ħ) Σ_j A^j·Δr_j) over the mode set, later
/// steps to the left, with every leg split into `pieces` midpoint steps.
pub fn wilson_loop(
    path: &LoopPath,
    modes: &[CartesianMode],
    config: &SystemConfig,
    pieces: usize,
) -> Result<DMatrix<Complex64>> {
    let n = modes.len();
    let mut w = DMatrix::<Complex64>::identity(n, n);
    let factor = Complex64::new(0.0, -1.0 / HBAR);
    for (mid, steps) in path.segments(pieces.max(1)) {
        let mut generator = DMatrix::<Complex64>::zeros(n, n);
        for (atom, step) in steps.iter().enumerate() {
            if step.norm_squared() == 0.0 {
                continue;
            }
            let a = connection_matrices(modes, atom, &mid, config)?;
            for c in 0..3 {
                generator += &a[c] * Complex64::new(step[c], 0.0);
            }
        }
        w = (generator * factor).exp() * w;
    }
    Ok(w)
}

/// F_uv = ∂_u A_v − ∂_v A_u + (i/ħ)[A_u, A_v] at `point`, with the
/// derivatives from central differences of step `h`.
pub fn field_strength(
    modes: &[CartesianMode],
    point: &AtomPairGeometry,
    u: AtomCoordinate,
    v: AtomCoordinate,
    config: &SystemConfig,
    h: f64,
) -> Result<DMatrix<Complex64>> {
    let shift = |c: AtomCoordinate, s: f64| {
        let [e1, e2] = c.unit();
        AtomPairGeometry::new(point.r1 + e1 * s, point.r2 + e2 * s)
    };
    let deriv = |along: AtomCoordinate, comp: AtomCoordinate| -> Result<DMatrix<Complex64>> {
        let plus = connection_component(modes, comp, &shift(along, h), config)?;
        let minus = connection_component(modes, comp, &shift(along, -h), config)?;
        Ok((plus - minus) / Complex64::new(2.0 * h, 0.0))
    };
    let au = connection_component(modes, u, point, config)?;
    let av = connection_component(modes, v, point, config)?;
    let comm = &au * &av - &av * &au;
    Ok(deriv(u, v)? - deriv(v, u)? + comm * Complex64::new(0.0, 1.0 / HBAR))
}

/// Second-order small-loop prediction I − (i/ħ) ε_u ε_v F_uv for
/// [`LoopPath::rectangle`].
pub fn small_loop_prediction(field: &DMatrix<Complex64>, side_u: f64, side_v: f64) -> DMatrix<Complex64> {
    let n = field.nrows();
    DMatrix::identity(n, n) + field * Complex64::new(0.0, -side_u * side_v / HBAR)
}
