//! Command-line front end: `scales | bo-curve | phonons | critical | density
//! | gauge`, each reading a JSON config and writing CSV tables.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::Vector3;
use serde::Deserialize;

use crate::bo::{axial_bo_curve, AtomPairGeometry, Placement};
use crate::config::{load_config, LoadedConfig};
use crate::constants::{khz2_from_omega_sq, khz_from_energy, hz_from_energy, MICRON};
use crate::error::{Error, Result};
use crate::gauge::{
    berry_phase, connection_matrices, gauge_hermiticity_check, mode_cube, wilson_loop, AtomCoordinate, LoopPath,
};
use crate::model::{characteristic_scales, ElectronicState, SystemConfig};
use crate::motional::{default_grid, full_ground_state, gaussian_ground_state, pair_density, RampOptions};
use crate::output::{Cell, CsvTable, OutputDir, RunManifest};
use crate::phonons::{critical_separation, mode_sweep, Branch};

#[derive(Debug, Parser)]
#[command(name = "ion-mediated", version, about = "Ion-mediated atom-atom potentials, phonons and gauge structure")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// JSON system configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (created if missing).
    #[arg(long)]
    out: PathBuf,
    /// Replace existing output files.
    #[arg(long)]
    overwrite: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PlacementArg {
    Symmetric,
    Atom2Fixed,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Characteristic lengths, times and the adiabaticity ratio.
    Scales(Common),
    /// Adiabatic potentials along the trap axis for rr, rg and gg pairs.
    BoCurve {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 5.0)]
        z_min_um: f64,
        #[arg(long, default_value_t = 40.0)]
        z_max_um: f64,
        #[arg(long, default_value_t = 200)]
        points: usize,
        #[arg(long, value_enum, default_value_t = PlacementArg::Symmetric)]
        placement: PlacementArg,
    },
    /// Squared phonon frequencies against the trap separation 2z0.
    Phonons {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 8.0)]
        min_um: f64,
        #[arg(long, default_value_t = 24.0)]
        max_um: f64,
        #[arg(long, default_value_t = 161)]
        points: usize,
    },
    /// Critical trap separation for one or more state pairs.
    Critical {
        #[command(flatten)]
        common: Common,
        /// Comma-separated pairs such as `30S-30S,30S-5S`; defaults to the
        /// pair in the config.
        #[arg(long, value_delimiter = ',')]
        pairs: Vec<String>,
    },
    /// Axial pair densities of the motional ground state.
    Density {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',', default_values_t = vec![12.0, 16.0, 24.0])]
        separations_um: Vec<f64>,
        #[arg(long, default_value_t = 81)]
        points: usize,
        #[arg(long, default_value_t = 30)]
        n_max: usize,
    },
    /// Gauge connection matrices and loop phases.
    Gauge {
        #[command(flatten)]
        common: Common,
        /// Largest ion quantum number per axis in the mode set.
        #[arg(long, default_value_t = 2)]
        max_quanta: u32,
        /// JSON loop: {"closed": true, "max_step_um": .., "waypoints_um": [[x1,y1,z1,x2,y2,z2], ..]}.
        #[arg(long = "loop")]
        loop_file: Option<PathBuf>,
        /// Side of the default square loop (atom 1, x–z plane), μm.
        #[arg(long, default_value_t = 0.2)]
        side_um: f64,
    },
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

struct Session {
    loaded: LoadedConfig,
    out: OutputDir,
    out_path: PathBuf,
}

impl Session {
    fn open(common: &Common) -> Result<Self> {
        let loaded = load_config(&common.config)?;
        let out = OutputDir::new(&common.out, common.overwrite)?;
        Ok(Self { loaded, out, out_path: common.out.clone() })
    }

    fn config(&self) -> &SystemConfig {
        &self.loaded.config
    }

    fn manifest(&self, command: &str, grid: Vec<(&str, String)>) -> RunManifest {
        RunManifest {
            command: command.into(),
            config_path: self.loaded.path.clone(),
            config_digest: self.loaded.digest.clone(),
            out_dir: self.out_path.clone(),
            grid: grid.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
        }
    }

    fn write_all(&self, tables: &[(String, CsvTable)]) -> Result<()> {
        let names: Vec<String> = tables.iter().map(|(n, _)| n.clone()).collect();
        self.out.reserve(&names)?;
        for (name, table) in tables {
            let path = self.out.write(name, &table.render())?;
            println!("wrote {}", path.display());
        }
        Ok(())
    }
}

fn linspace(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>> {
    if !(lo.is_finite() && hi.is_finite() && hi > lo) {
        return Err(Error::InvalidInput(format!("range [{lo}, {hi}] must be increasing")));
    }
    if points < 2 {
        return Err(Error::InvalidInput(format!("need at least 2 grid points, got {points}")));
    }
    let step = (hi - lo) / (points - 1) as f64;
    Ok((0..points).map(|i| if i + 1 == points { hi } else { lo + step * i as f64 }).collect())
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::Scales(common) => cmd_scales(&common),
        Command::BoCurve { common, z_min_um, z_max_um, points, placement } => {
            let placement = match placement {
                PlacementArg::Symmetric => Placement::Symmetric,
                PlacementArg::Atom2Fixed => Placement::Atom2Fixed,
            };
            cmd_bo_curve(&common, z_min_um, z_max_um, points, placement)
        }
        Command::Phonons { common, min_um, max_um, points } => cmd_phonons(&common, min_um, max_um, points),
        Command::Critical { common, pairs } => cmd_critical(&common, &pairs),
        Command::Density { common, separations_um, points, n_max } => {
            cmd_density(&common, &separations_um, points, n_max)
        }
        Command::Gauge { common, max_quanta, loop_file, side_um } => {
            cmd_gauge(&common, max_quanta, loop_file.as_deref(), side_um)
        }
    }
}

fn cmd_scales(common: &Common) -> Result<()> {
    let s = Session::open(common)?;
    let sc = characteristic_scales(s.config());
    let um = |v: f64| Cell::Num(v / MICRON);
    let opt_um = |v: Option<f64>| v.map_or(Cell::Text("n/a".into()), |v| Cell::Num(v / MICRON));
    let rows: Vec<(&str, Cell, &str)> = vec![
        ("eta", Cell::Num(sc.eta), "1"),
        ("a_z", um(sc.a_z), "um"),
        ("a_rho", um(sc.a_rho), "um"),
        ("L_i", um(sc.l_i), "um"),
        ("L_a", um(sc.l_a), "um"),
        ("T_i", Cell::Num(sc.t_i * 1e3), "ms"),
        ("T_a", Cell::Num(sc.t_a * 1e3), "ms"),
        ("R_ia_star", opt_um(sc.r_ia_star), "um"),
        ("R_aa_star", opt_um(sc.r_aa_star), "um"),
    ];
    let mut table = CsvTable::new(&s.manifest("scales", vec![]), &["quantity", "value", "unit"]);
    table.meta("pair", s.config().pair_label());
    println!("{:<10} {:>18}  unit", "quantity", "value");
    for (name, value, unit) in rows {
        let shown = match &value {
            Cell::Num(v) => format!("{v:.6}"),
            Cell::Text(t) => t.clone(),
            Cell::Int(i) => i.to_string(),
        };
        println!("{name:<10} {shown:>18}  {unit}");
        table.push(vec![name.into(), value, unit.into()]);
    }
    s.write_all(&[("scales.csv".into(), table)])
}

fn cmd_bo_curve(common: &Common, lo: f64, hi: f64, points: usize, placement: Placement) -> Result<()> {
    let s = Session::open(common)?;
    let grid: Vec<f64> = linspace(lo, hi, points)?.into_iter().map(|z| z * MICRON).collect();
    let curve = axial_bo_curve(&grid, s.config().ion_mode, s.config(), placement)?;
    let manifest = s.manifest(
        "bo-curve",
        vec![
            ("z_range_um", format!("{lo} {hi}")),
            ("points", points.to_string()),
            ("placement", placement.name().into()),
        ],
    );
    let mut table = CsvTable::new(
        &manifest,
        &["z_um", "V_rr_kHz", "V_rg_kHz", "V_gg_Hz", "C6_term_rr_Hz", "rr_over_rg"],
    );
    table.meta("ion_mode", format!("{:?}", curve.mu));
    table.meta("rydberg_state", curve.rydberg.label(s.config().coefficients.ground_n));
    table.meta("energy_reference", "V minus bare ion energy E_mu^(0), divided by h");
    for r in &curve.rows {
        table.push(vec![
            (r.z / MICRON).into(),
            khz_from_energy(r.rr).into(),
            khz_from_energy(r.rg).into(),
            hz_from_energy(r.gg).into(),
            hz_from_energy(r.vdw_rr).into(),
            (r.rr / r.rg).into(),
        ]);
    }
    s.write_all(&[("bo_curve.csv".into(), table)])
}

fn cmd_phonons(common: &Common, lo: f64, hi: f64, points: usize) -> Result<()> {
    let s = Session::open(common)?;
    let grid: Vec<f64> = linspace(lo, hi, points)?.into_iter().map(|z| z * MICRON).collect();
    let sweep = mode_sweep(s.config(), &grid)?;
    let manifest = s.manifest("phonons", vec![("two_z0_range_um", format!("{lo} {hi}")), ("points", points.to_string())]);
    let mut table = CsvTable::new(
        &manifest,
        &[
            "two_z0_um",
            "axial_stretch_kHz2",
            "axial_com_kHz2",
            "transverse_stretch_kHz2",
            "transverse_com_kHz2",
            "axial_mixing_rad",
            "transverse_mixing_rad",
            "stable",
        ],
    );
    table.meta("pair", s.config().pair_label());
    table.meta("note", "signed squared frequencies (omega/2pi)^2");
    for sp in &sweep {
        let k = |b: Branch| Cell::Num(khz2_from_omega_sq(sp.branch(b).omega_sq));
        table.push(vec![
            (2.0 * sp.z0 / MICRON).into(),
            k(Branch::AxialStretch),
            k(Branch::AxialCom),
            k(Branch::TransverseStretch),
            k(Branch::TransverseCom),
            sp.axial[0].mixing_angle.into(),
            sp.transverse[0].mixing_angle.into(),
            sp.stable.into(),
        ]);
    }
    s.write_all(&[("phonons.csv".into(), table)])
}

fn parse_pair(label: &str, ground_n: u32) -> Result<[ElectronicState; 2]> {
    let parts: Vec<&str> = label.split('-').collect();
    if parts.len() != 2 {
        return Err(Error::InvalidInput(format!("state pair `{label}` should look like 30S-5S")));
    }
    Ok([ElectronicState::parse(parts[0], ground_n)?, ElectronicState::parse(parts[1], ground_n)?])
}

fn cmd_critical(common: &Common, pairs: &[String]) -> Result<()> {
    let s = Session::open(common)?;
    let base = s.config();
    let g = base.coefficients.ground_n;
    let mut configs = Vec::new();
    if pairs.is_empty() {
        configs.push(base.clone());
    }
    for p in pairs {
        configs.push(base.with_states(parse_pair(p, g)?)?);
    }
    let manifest = s.manifest("critical", vec![("bracket_um", "1 40".into())]);
    let mut table = CsvTable::new(&manifest, &["pair", "critical_2z0_um", "limiting_branch"]);
    for c in &configs {
        match critical_separation(c) {
            Ok(r) => {
                println!("{:<10} 2z0_c = {:.4} um ({})", c.pair_label(), r.critical_2z0 / MICRON, r.limiting_branch.name());
                table.push(vec![c.pair_label().into(), (r.critical_2z0 / MICRON).into(), r.limiting_branch.name().into()]);
            }
            Err(Error::NotBracketed { f_lo, .. }) if f_lo > 0.0 => {
                println!("{:<10} no instability in bracket", c.pair_label());
                table.push(vec![c.pair_label().into(), "none".into(), "none".into()]);
            }
            Err(e) => return Err(e),
        }
    }
    s.write_all(&[("critical.csv".into(), table)])
}

fn cmd_density(common: &Common, separations_um: &[f64], points: usize, n_max: usize) -> Result<()> {
    let s = Session::open(common)?;
    if separations_um.is_empty() {
        return Err(Error::InvalidInput("no separations given".into()));
    }
    let options = RampOptions { n_start: n_max, ..RampOptions::default() };
    let mut tables = Vec::new();
    for &sep in separations_um {
        let z0 = 0.5 * sep * MICRON;
        let state = full_ground_state(s.config(), z0, RampOptions { n_cap: options.n_cap.max(n_max + 4), ..options })?;
        let (z1, z2) = default_grid(&state, points);
        let rho = pair_density(&state, &z1, &z2)?;
        let manifest = s.manifest(
            "density",
            vec![("two_z0_um", format!("{sep}")), ("points", points.to_string()), ("n_max_start", n_max.to_string())],
        );
        let mut table = CsvTable::new(&manifest, &["z1_um", "z2_um", "density_per_um2"]);
        table.meta("pair", s.config().pair_label());
        table.meta("n_max", state.n_max.to_string());
        table.meta("convergence_residual", format!("{:.3e}", state.convergence));
        table.meta("energy_kHz", format!("{:.10e}", khz_from_energy(state.energy)));
        table.meta("trapezoid_integral", format!("{:.10}", rho.integral));
        table.meta("overlap_uncoupled", format!("{:.10}", state.product_ground_overlap()));
        match gaussian_ground_state(s.config(), z0) {
            Ok(g) => table.meta("overlap_gaussian", format!("{:.10}", state.overlap_with(&g).abs())),
            Err(_) => table.meta("overlap_gaussian", "n/a (quadratic potential unstable)"),
        }
        for (i, &a) in rho.z1.iter().enumerate() {
            for (j, &b) in rho.z2.iter().enumerate() {
                table.push(vec![
                    ((z0 + a) / MICRON).into(),
                    ((-z0 + b) / MICRON).into(),
                    (rho.density[(i, j)] * MICRON * MICRON).into(),
                ]);
            }
        }
        println!(
            "2z0 = {sep} um: n_max = {}, E = {:.6} kHz, <00|psi> = {:.6}",
            state.n_max,
            khz_from_energy(state.energy),
            state.product_ground_overlap()
        );
        tables.push((format!("density_2z0_{sep}um.csv"), table));
    }
    s.write_all(&tables)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct LoopFile {
    closed: bool,
    max_step_um: f64,
    waypoints_um: Vec<[f64; 6]>,
}

fn read_loop(path: &Path) -> Result<LoopPath> {
    let text = std::fs::read_to_string(path)?;
    let de = &mut serde_json::Deserializer::from_str(&text);
    let file: LoopFile = serde_path_to_error::deserialize(de)
        .map_err(|e| Error::ConfigParse { path: e.path().to_string(), message: e.into_inner().to_string() })?;
    let waypoints = file
        .waypoints_um
        .iter()
        .map(|w| {
            AtomPairGeometry::new(Vector3::new(w[0], w[1], w[2]) * MICRON, Vector3::new(w[3], w[4], w[5]) * MICRON)
        })
        .collect();
    LoopPath::new(waypoints, file.closed, file.max_step_um * MICRON)
}

fn cmd_gauge(common: &Common, max_quanta: u32, loop_file: Option<&Path>, side_um: f64) -> Result<()> {
    let s = Session::open(common)?;
    let config = s.config();
    let modes = mode_cube(max_quanta);
    let geometry = AtomPairGeometry::at_trap_centers(config.z0);
    let path = match loop_file {
        Some(p) => read_loop(p)?,
        None => {
            if !(side_um > 0.0) {
                return Err(Error::InvalidInput(format!("loop side {side_um} um must be positive")));
            }
            let side = side_um * MICRON;
            LoopPath::rectangle(geometry, AtomCoordinate::new(0, 0), AtomCoordinate::new(0, 2), side, side)
        }
    };

    let herm = gauge_hermiticity_check(&modes, &geometry, config)?;
    let manifest = s.manifest(
        "gauge",
        vec![
            ("max_quanta", max_quanta.to_string()),
            ("loop", loop_file.map_or(format!("square side {side_um} um, atom 1 x-z"), |p| p.display().to_string())),
        ],
    );
    let mut conn = CsvTable::new(
        &manifest,
        &["atom", "component", "bra", "ket", "re_Js_per_m", "im_Js_per_m"],
    );
    conn.meta("geometry", "atoms at their trap centres");
    conn.meta("hermiticity_relative", format!("{:.3e}", herm.relative()));
    for atom in 0..2 {
        let mats = connection_matrices(&modes, atom, &geometry, config)?;
        for (c, m) in mats.iter().enumerate() {
            for (i, bra) in modes.iter().enumerate() {
                for (k, ket) in modes.iter().enumerate() {
                    let v = m[(i, k)];
                    if v.norm() != 0.0 {
                        conn.push(vec![
                            ((atom + 1) as i64).into(),
                            ["x", "y", "z"][c].into(),
                            bra.to_string().into(),
                            ket.to_string().into(),
                            v.re.into(),
                            v.im.into(),
                        ]);
                    }
                }
            }
        }
    }

    let mut phases = CsvTable::new(&manifest, &["mode", "berry_phase_rad"]);
    for &mode in &modes {
        phases.push(vec![mode.to_string().into(), berry_phase(&path, mode, config)?.into()]);
    }
    if path.is_closed() {
        let w1 = wilson_loop(&path, &modes, config, 64)?;
        let w2 = wilson_loop(&path, &modes, config, 128)?;
        let dev = |m: &nalgebra::DMatrix<num_complex::Complex64>| {
            let n = m.nrows();
            (m - nalgebra::DMatrix::identity(n, n)).iter().fold(0.0f64, |a, z| a.max(z.norm()))
        };
        let refine = (&w2 - &w1).iter().fold(0.0f64, |a, z| a.max(z.norm()));
        phases.meta("wilson_loop_max_deviation_from_identity", format!("{:.6e}", dev(&w2)));
        phases.meta("wilson_loop_refinement_change", format!("{:.3e}", refine));
        println!("Wilson loop: max |W - I| = {:.3e}, refinement change {:.3e}", dev(&w2), refine);
    }
    println!("connection Hermiticity (relative): {:.3e}", herm.relative());
    println!("Berry phase of every mode over the loop: see berry_phase.csv");
    s.write_all(&[("gauge_connection.csv".into(), conn), ("berry_phase.csv".into(), phases)])
}
