//! Sweep the photon number through the experiments API and fit the scaling
//! exponent of the QFI.
//!
//! ```text
//! cargo run --release --example scaling_sweep -- out/scaling
//! ```

use rotsense::experiments::{run_sweep, scaling_fit, ExperimentConfig, Scenario};

fn main() -> rotsense::Result<()> {
    let mut cfg = ExperimentConfig::defaults(Scenario::CustomSweep);
    if let Some(dir) = std::env::args().nth(1) {
        cfg.output_dir = dir.into();
    }
    for o in [
        "axis=two_j",
        "start=20",
        "stop=400",
        "points=12",
        "e_over_d=0.01",
    ] {
        cfg.apply_override(o)?;
    }
    print!("{}", cfg.to_toml());
    let (sweep, report) = run_sweep(&cfg)?;
    let window = (0.0, f64::INFINITY);
    let lin = scaling_fit(&sweep.axis, &sweep.qfi_linear(), window)?;
    println!(
        "linear:              exponent {:.4} (r^2 {:.6})",
        lin.exponent, lin.r_squared
    );
    let columns = [
        ("nonlinear exact", sweep.qfi_nonlinear()),
        ("nonlinear 1st order", sweep.qfi_nonlinear_first_order()),
        ("nonlinear quadrature", sweep.qfi_nonlinear_perturbative()),
    ];
    for (name, col) in columns {
        if let Some(v) = col {
            let f = scaling_fit(&sweep.axis, &v, window)?;
            println!(
                "{name:<20} exponent {:.4} (r^2 {:.6})",
                f.exponent, f.r_squared
            );
        }
    }
    println!("wrote {}", report.output_dir.display());
    Ok(())
}
