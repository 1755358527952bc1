use std::f64::consts::PI;
use std::fs;

use serde_json::json;
use transmutation::example::{
    build_error_table, kernel_error_profile, profile_file_name, write_profile_csv, Representation,
};
use transmutation::io::{read_function_csv, read_potential_file, write_function_csv};
use transmutation::kernels::{
    build_kernel_grid, EigenfunctionCache, ExactConstOneKernel, KernelEvaluator, KernelGrid,
    KernelKind, SeriesConfig, SeriesKernel,
};
use transmutation::spectral::{compute_spectrum, Problem, SpectralData};
use transmutation::transmute::{
    apply_t, apply_tinv, diagonal_residual, gl_residual, h_consistency_residual, preimage_series,
    weak_pairing, FunctionSamples,
};
use transmutation::{Error, Potential, Result};

use crate::output::write_atomic;
use crate::{
    ApplyArgs, Command, DiagnosticsArgs, KernelArgs, PreimageArgs, Preset, ProblemArgs,
    ReproduceArgs, SeriesArgs, SpectrumArgs,
};

/// Order of the accelerated series used as reference `G` when no closed form is known.
const REFERENCE_ORDER: usize = 200;

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Spectrum(args) => spectrum(args),
        Command::Kernel(args) => kernel(args),
        Command::Apply(args) => apply(args),
        Command::Preimage(args) => preimage(args),
        Command::Diagnostics(args) => diagnostics(args),
        Command::Reproduce(args) => reproduce(args),
    }
}

impl ProblemArgs {
    fn build(&self) -> Result<Problem> {
        let potential = match (&self.preset, &self.potential) {
            (_, Some(path)) => read_potential_file(path)?,
            (Some(Preset::One), None) => Potential::constant(1.0),
            (Some(Preset::Zero) | None, None) => Potential::zero(),
        };
        Problem::with_grid(potential, self.h, self.big_h, self.grid)
    }
}

impl SeriesArgs {
    fn config(&self) -> SeriesConfig {
        SeriesConfig {
            order: self.order,
            mode: self.mode,
        }
    }
}

struct Spectral {
    problem: Problem,
    spec: SpectralData,
    efs: EigenfunctionCache,
}

impl Spectral {
    fn compute(args: &ProblemArgs, order: usize) -> Result<Self> {
        let problem = args.build()?;
        let spec = compute_spectrum(&problem, order)?;
        let efs = EigenfunctionCache::build(&problem, &spec, order)?;
        Ok(Self { problem, spec, efs })
    }
}

fn check_output_grid(m: usize) -> Result<()> {
    if m < 2 {
        return Err(Error::Argument(format!("m must be at least 2, got {m}")));
    }
    Ok(())
}

fn write_kernel(grid: &KernelGrid, path: Option<&std::path::Path>) -> Result<()> {
    let json = path.is_some_and(|p| p.extension().is_some_and(|e| e == "json"));
    write_atomic(path, |w| {
        if json {
            writeln!(w, "{}", grid.to_json()?)?;
            Ok(())
        } else {
            grid.write_csv(w)
        }
    })
}

fn spectrum(args: SpectrumArgs) -> Result<()> {
    let problem = args.problem.build()?;
    let spec = compute_spectrum(&problem, args.n_max)?;
    let text = spec.to_json()?;
    write_atomic(args.out.as_deref(), |w| {
        writeln!(w, "{text}")?;
        Ok(())
    })
}

fn kernel(args: KernelArgs) -> Result<()> {
    check_output_grid(args.m)?;
    let cfg = args.series.config();
    let grid = match args.which {
        KernelKind::Gexact => build_kernel_grid(&ExactConstOneKernel, args.m)?,
        KernelKind::F => {
            let problem = args.problem.build()?;
            let spec = compute_spectrum(&problem, cfg.order)?;
            build_kernel_grid(&SeriesKernel::f(&spec, cfg)?, args.m)?
        }
        KernelKind::G | KernelKind::H => {
            let s = Spectral::compute(&args.problem, cfg.order)?;
            let evaluator = if args.which == KernelKind::G {
                SeriesKernel::g(&s.spec, &s.efs, cfg)?
            } else {
                SeriesKernel::h(&s.spec, &s.efs, cfg)?
            };
            build_kernel_grid(&evaluator, args.m)?
        }
    };
    write_kernel(&grid, args.out.as_deref())
}

fn read_input(path: &std::path::Path) -> Result<FunctionSamples> {
    let u = read_function_csv(fs::File::open(path)?)?;
    let g = u.grid();
    if g.start().abs() > 1e-12 || (g.end() - PI).abs() > 1e-9 {
        return Err(Error::Argument(format!(
            "input must be sampled on [0, pi], got [{}, {}]",
            g.start(),
            g.end()
        )));
    }
    Ok(u)
}

fn apply(args: ApplyArgs) -> Result<()> {
    let u = read_input(&args.input)?;
    let m = u.grid().len();
    let cfg = args.series.config();
    let result = match args.which {
        KernelKind::Gexact => apply_t(&build_kernel_grid(&ExactConstOneKernel, m)?, &u)?,
        KernelKind::G | KernelKind::H => {
            let s = Spectral::compute(&args.problem, cfg.order)?;
            if args.which == KernelKind::G {
                apply_t(
                    &build_kernel_grid(&SeriesKernel::g(&s.spec, &s.efs, cfg)?, m)?,
                    &u,
                )?
            } else {
                apply_tinv(
                    &build_kernel_grid(&SeriesKernel::h(&s.spec, &s.efs, cfg)?, m)?,
                    &u,
                )?
            }
        }
        KernelKind::F => {
            return Err(Error::Argument("apply needs --which G, H or Gexact".into()));
        }
    };
    write_atomic(args.out.as_deref(), |w| write_function_csv(&result, w))
}

fn preimage(args: PreimageArgs) -> Result<()> {
    let f = read_input(&args.input)?;
    let s = Spectral::compute(&args.problem, args.order)?;
    let result = preimage_series(&s.spec, &s.efs, &f, args.order)?;
    write_atomic(args.out.as_deref(), |w| write_function_csv(&result, w))
}

fn diagnostics(args: DiagnosticsArgs) -> Result<()> {
    check_output_grid(args.m)?;
    if let Some(&bad) = args.x.iter().find(|&&x| !(x > 0.0 && x <= PI + 1e-12)) {
        return Err(Error::Argument(format!(
            "--x values must lie in (0, pi], got {bad}"
        )));
    }
    let cfg = args.series.config();
    let s = Spectral::compute(&args.problem, cfg.order.max(REFERENCE_ORDER))?;
    let q = s.problem.potential();
    let h = s.problem.h();
    let unit_potential = q.as_constant() == Some(1.0) && h == 0.0;

    let f_square = SeriesKernel::f(&s.spec, cfg)?.square_grid(args.m)?;
    let g_series = SeriesKernel::g(&s.spec, &s.efs, cfg)?;
    let h_series = SeriesKernel::h(&s.spec, &s.efs, cfg)?;
    let reference_series =
        SeriesKernel::g(&s.spec, &s.efs, SeriesConfig::accelerated(REFERENCE_ORDER))?;
    let g_ref: &dyn KernelEvaluator = if unit_potential {
        &ExactConstOneKernel
    } else {
        &reference_series
    };
    let g_ref_grid = build_kernel_grid(g_ref, args.m)?;
    let g_grid = build_kernel_grid(&g_series, args.m)?;
    let h_grid = build_kernel_grid(&h_series, args.m)?;

    let ones = FunctionSamples::from_fn(*g_grid.grid(), |_| 1.0)?;
    let mut points = Vec::with_capacity(args.x.len());
    for &x in &args.x {
        let pairing = weak_pairing(&s.spec, &s.efs, &ones, x, cfg.order, g_ref, &h_series)?;
        points.push(json!({
            "x": x,
            "gl_residual": gl_residual(&f_square, &g_ref_grid, x)?,
            "h_consistency_residual": h_consistency_residual(&f_square, &g_ref_grid, &h_grid, x)?,
            "pairing_lhs": pairing.lhs,
            "pairing_rhs": pairing.rhs,
        }));
    }
    let report = json!({
        "N": cfg.order,
        "mode": cfg.mode.to_string(),
        "m": args.m,
        "omega": s.spec.omega,
        "reference_G": if unit_potential { "Gexact" } else { "accelerated N=200" },
        "diagonal_residual_G": diagonal_residual(&g_grid, q, h, 1.0)?,
        "diagonal_residual_H": diagonal_residual(&h_grid, q, h, -1.0)?,
        "points": points,
    });
    let text = serde_json::to_string_pretty(&report)?;
    write_atomic(args.out.as_deref(), |w| {
        writeln!(w, "{text}")?;
        Ok(())
    })
}

fn reproduce(args: ReproduceArgs) -> Result<()> {
    if args.orders.is_empty() || args.profile_orders.is_empty() {
        return Err(Error::Argument(
            "truncation order lists must not be empty".into(),
        ));
    }
    check_output_grid(args.m)?;
    check_output_grid(args.profile_m)?;
    let table = build_error_table(&args.orders, args.m)?;
    let mut profiles = Vec::new();
    for &order in &args.profile_orders {
        for kind in Representation::ALL {
            profiles.push((
                kind,
                order,
                kernel_error_profile(kind, order, args.profile_m)?,
            ));
        }
    }

    fs::create_dir_all(&args.out)?;
    write_atomic(Some(&args.out.join("error_table.csv")), |w| {
        table.write_csv(w)
    })?;
    for (kind, order, profile) in &profiles {
        write_atomic(
            Some(&args.out.join(profile_file_name(*kind, *order))),
            |w| write_profile_csv(profile, w),
        )?;
    }
    println!("{:>6} {:>12} {:>12} {:>12}", "N", "err1", "err2", "err3");
    for r in &table.rows {
        println!(
            "{:>6} {:>12.3e} {:>12.3e} {:>12.3e}",
            r.order, r.err1, r.err2, r.err3
        );
    }
    Ok(())
}
