use clap::{Args, Parser, Subcommand};
use mkdv5_core::asymptotics::{write_predictions_csv, RayData};
use mkdv5_core::evolution::{evolve, EvolveOptions};
use mkdv5_core::harness::{
    compare_on_ray, ist_consistency, verify, write_rows_csv, Check, ExperimentConfig, Manifest, Suite,
};
use mkdv5_core::model_rhp::{wronskian_report, BetaBranch, ModelRhp};
use mkdv5_core::scattering::{evolve_reflection, linspace, scatter, Potential, ReflectionFunction};
use mkdv5_core::{Complex64, Error, Result};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "mkdv5", version, about = "Fifth-order mKdV: scattering, evolution and long-time asymptotics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// JSON experiment configuration
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Reflection coefficient of a potential on a grid of spectral parameters
    Scatter {
        #[command(flatten)]
        common: Common,
        /// gaussian:A,w | box:h,w | sech:A | path to an x,q CSV
        #[arg(long)]
        potential: Option<String>,
        #[arg(long, default_value_t = -4.0, allow_hyphen_values = true)]
        zmin: f64,
        #[arg(long, default_value_t = 4.0)]
        zmax: f64,
        #[arg(long, default_value_t = 401)]
        nz: usize,
        /// Also write the data rotated by the linear time factor at this time
        #[arg(long)]
        t_final: Option<f64>,
    },
    /// Integrate the PDE and write the field at the final time
    Evolve {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        potential: Option<String>,
        #[arg(long)]
        t_final: f64,
        #[arg(long)]
        dt: Option<f64>,
        /// Number of grid points (power of two); overrides the config
        #[arg(long)]
        n: Option<usize>,
    },
    /// Leading-order predictions on the ray through z0
    Asymptote {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        potential: Option<String>,
        #[arg(long)]
        z0: Option<f64>,
        /// Comma-separated times
        #[arg(long, value_delimiter = ',')]
        t: Vec<f64>,
        #[arg(long, default_value = "normalized")]
        branch: String,
    },
    /// Simulation versus prediction along the ray
    Compare {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        z0: Option<f64>,
        #[arg(long)]
        dt: Option<f64>,
        /// Replace the comparison times with this single time
        #[arg(long)]
        t_final: Option<f64>,
    },
    /// Modulus and phase-rate consistency of the evolved reflection coefficient
    IstCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        dt: Option<f64>,
    },
    /// Run a self-verification suite
    Verify {
        /// phase | scattering | evolution | scalar_rhp | model_rhp | asymptotics | all
        #[arg(default_value = "all")]
        suite: String,
        #[command(flatten)]
        common: Common,
    },
    /// Parabolic-cylinder Wronskian and model coefficients
    VerifyModel {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',', default_value = "0.1,0.5,1")]
        nu: Vec<f64>,
    },
}

fn load_config(common: &Common) -> Result<ExperimentConfig> {
    match &common.config {
        Some(p) => ExperimentConfig::load(p),
        None => Ok(ExperimentConfig::default()),
    }
}

fn out_dir(common: &Common) -> Result<&Path> {
    std::fs::create_dir_all(&common.out)
        .map_err(|e| Error::Config(format!("cannot create {}: {e}", common.out.display())))?;
    Ok(&common.out)
}

fn print_checks(checks: &[Check]) {
    for c in checks {
        println!("{}", c.line());
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Scatter { common, potential, zmin, zmax, nz, t_final } => {
            let cfg = load_config(&common)?;
            let pot = Potential::parse(potential.as_deref().unwrap_or(&cfg.potential))?;
            if !(zmax > zmin) || nz < 2 {
                return Err(Error::Config("need zmax > zmin and nz >= 2".into()));
            }
            let data = scatter(&pot, &linspace(zmin, zmax, nz))?;
            let dir = out_dir(&common)?;
            data.write_csv(&dir.join("scattering.csv"))?;
            if let Some(t) = t_final {
                evolve_reflection(&data, t).write_csv(&dir.join("scattering_evolved.csv"))?;
            }
            let checks = vec![
                Check::new("unitarity", data.unitarity_defect(), 1e-8),
                Check::new("symmetry", data.symmetry_defect(), 1e-8),
            ];
            print_checks(&checks);
            Manifest::new("scatter", &checks).write(&dir.join("manifest.json"))?;
            Ok(true)
        }
        Command::Evolve { common, potential, t_final, dt, n } => {
            let mut cfg = load_config(&common)?;
            if let Some(p) = potential {
                cfg.potential = p;
            }
            if let Some(n) = n {
                cfg.grid.n = n;
            }
            let pot = Potential::parse(&cfg.potential)?;
            let q0 = cfg.grid.sample(|x| pot.eval(x))?;
            let opts = EvolveOptions {
                dt: dt.unwrap_or(cfg.dt),
                startup: cfg.startup,
                sponge: cfg.main_sponge(),
                wrap_guard: cfg.wrap_guard,
                damping: cfg.main_damping(),
            };
            let ev = evolve(&q0, &[t_final], &opts)?;
            let dir = out_dir(&common)?;
            ev.final_field().write_csv(&dir.join("field.csv"))?;
            let mut m = Manifest::new("evolve", (&opts, &ev.drift, ev.steps));
            m.config_hash = Some(cfg.hash());
            m.write(&dir.join("manifest.json"))?;
            println!("steps {}, mass drift {:.3e}, L2 drift {:.3e}", ev.steps, ev.max_mass_drift(), ev.max_l2_drift());
            Ok(true)
        }
        Command::Asymptote { common, potential, z0, t, branch } => {
            let cfg = load_config(&common)?;
            let pot = Potential::parse(potential.as_deref().unwrap_or(&cfg.potential))?;
            let z0 = z0.unwrap_or(cfg.z0);
            let branch: BetaBranch = branch.parse()?;
            let ts = if t.is_empty() { cfg.times.clone() } else { t };
            let zmax = cfg.reflection.zmax.max(1.2 * z0);
            let data = scatter(&pot, &linspace(-zmax, zmax, cfg.reflection.nz))?;
            let ray = RayData::new(&ReflectionFunction::from_data(&data)?, z0)?;
            let mut closed = Vec::new();
            let mut assembled = Vec::new();
            for &t in &ts {
                let x = -80.0 * z0.powi(4) * t;
                closed.push(ray.closed_form(x, t)?);
                assembled.push(ray.assembled(x, t, branch)?);
            }
            let dir = out_dir(&common)?;
            write_predictions_csv(&dir.join("closed_form.csv"), &closed)?;
            write_predictions_csv(&dir.join("assembled.csv"), &assembled)?;
            let mut m = Manifest::new("asymptote", (ray.nu(), ray.phi, ray.phi_integral));
            m.branch = Some(branch.name().into());
            m.write(&dir.join("manifest.json"))?;
            println!("nu = {:.6e}, phi = {:.6}", ray.nu(), ray.phi);
            Ok(true)
        }
        Command::Compare { common, z0, dt, t_final } => {
            let mut cfg = load_config(&common)?;
            if let Some(z) = z0 {
                cfg.z0 = z;
            }
            if let Some(d) = dt {
                cfg.dt = d;
            }
            if let Some(t) = t_final {
                cfg.times = vec![t];
            }
            cfg.validate()?;
            let report = compare_on_ray(&cfg)?;
            let dir = out_dir(&common)?;
            write_rows_csv(&dir.join("comparison.csv"), &report.rows)?;
            std::fs::write(dir.join("report.json"), serde_json::to_string_pretty(&report)?)?;
            let mut m = Manifest::new("compare", &cfg);
            m.config_hash = Some(cfg.hash());
            m.branch = Some(report.selected_branch.name().into());
            m.sigma = Some(report.sigma);
            m.write(&dir.join("manifest.json"))?;
            print_checks(&report.checks);
            println!("branch {}, sigma {}, rate {}", report.selected_branch.name(), report.sigma, report.rate);
            Ok(report.passed)
        }
        Command::IstCheck { common, dt } => {
            let mut cfg = load_config(&common)?;
            if let Some(d) = dt {
                cfg.dt = d;
            }
            cfg.validate()?;
            let report = ist_consistency(&cfg)?;
            let dir = out_dir(&common)?;
            let mut m = Manifest::new("ist-check", &report);
            m.config_hash = Some(cfg.hash());
            m.sigma = report.sigma;
            m.write(&dir.join("manifest.json"))?;
            for t in &report.times {
                println!("t = {}: modulus residual {:.3e}, fitted rate {}", t.t, t.modulus_residual, t.best_rate);
            }
            Ok(report.passed)
        }
        Command::Verify { suite, common } => {
            let suite: Suite = suite.parse()?;
            let report = verify(suite)?;
            print_checks(&report.checks);
            if common.config.is_some() || common.out != Path::new("out") {
                let dir = out_dir(&common)?;
                Manifest::new("verify", &report).write(&dir.join("manifest.json"))?;
            }
            Ok(report.passed)
        }
        Command::VerifyModel { common, nu } => {
            let mut checks = Vec::new();
            let mut reports = Vec::new();
            for &v in &nu {
                let w = wronskian_report(v, &[1.0, 2.0, 4.0])?;
                checks.push(Check::new(format!("Wronskian spread, nu = {v}"), w.spread, 1e-8));
                checks.push(Check::new(format!("Wronskian vs closed form, nu = {v}"), w.max_error, 1e-6));
                let r = Complex64::from_polar((1.0 - (-2.0 * std::f64::consts::PI * v).exp()).sqrt(), 0.0);
                let m = ModelRhp::new(v, r, BetaBranch::Normalized)?;
                checks.push(Check::new(format!("beta12 beta21 + nu, nu = {v}"), (m.beta12 * m.beta21 + v).norm(), 1e-14));
                reports.push(w);
            }
            print_checks(&checks);
            if common.config.is_some() || common.out != Path::new("out") {
                let dir = out_dir(&common)?;
                Manifest::new("verify-model", (&reports, &checks)).write(&dir.join("manifest.json"))?;
            }
            Ok(checks.iter().all(|c| c.passed))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Numerical(_) => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}
